#pragma once
#include <complex>
#include <cstddef>
#include <vector>

namespace disperse1d {

using cplx = std::complex<double>;
inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx I{0.0, 1.0};

//! Symmetric uniform wavenumber grid on [-K, K]; N_k = 2^m + 1 so that k = 0
//! is the middle node.
struct KGrid {
  double K = 40.0;
  std::size_t n = 4097;

  double dk() const { return 2.0 * K / double(n - 1); }
  double k(std::size_t j) const { return -K + double(j) * dk(); }
  std::size_t zero() const { return n / 2; }
  //! index of -k_j
  std::size_t mirror(std::size_t j) const { return n - 1 - j; }
  std::vector<double> nodes() const;
};

//! Validates and builds a KGrid (InvalidArgument on a bad count).
KGrid make_kgrid(double K, std::size_t n);

//! Uniform node list on [a, b] with n nodes (n >= 2).
std::vector<double> uniform_nodes(double a, double b, std::size_t n);

//! Index of the node nearest to x in a sorted node list.
std::size_t nearest_node(const std::vector<double> &nodes, double x);

} // namespace disperse1d
