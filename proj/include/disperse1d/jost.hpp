#pragma once
#include <cstddef>
#include <string>
#include <vector>

#include "disperse1d/grid.hpp"
#include "disperse1d/potential.hpp"

namespace disperse1d {

struct JostOptions {
  double rtol = 1e-12; //!< local relative tolerance of the stepper
  double atol = 1e-13; //!< local absolute tolerance of the stepper
};

//! h(x_i) and dh/dx(x_i) on the requested nodes.
struct HSolution {
  std::vector<cplx> h, dh;
};

//! Solves h'' +- 2ik h' = V h with h(+-L) = 1, h'(+-L) = 0 by inward adaptive
//! Runge-Kutta-Fehlberg 7(8) integration over [-L, L]; outside that interval
//! the exact free continuation is used. `xs` must be sorted ascending.
//! k real, or purely imaginary with Im k > 0.
HSolution solve_h(const Potential &V, cplx k, int sign,
                  const std::vector<double> &xs, const JostOptions &opt = {});

//! h_+-, d_x h_+- on an (x, k) product grid, layout [ix * nk + jk].
struct JostField {
  std::vector<double> x;
  KGrid kg;
  std::vector<cplx> hp, hm, dhp, dhm;
  double cutoff = 0.0; //!< cutoff radius of the potential it was built from

  std::size_t nx() const { return x.size(); }
  std::size_t nk() const { return kg.n; }
  std::size_t at(std::size_t ix, std::size_t jk) const { return ix * kg.n + jk; }
  cplx h(int sign, std::size_t ix, std::size_t jk) const {
    return sign > 0 ? hp[at(ix, jk)] : hm[at(ix, jk)];
  }
  cplx dh(int sign, std::size_t ix, std::size_t jk) const {
    return sign > 0 ? dhp[at(ix, jk)] : dhm[at(ix, jk)];
  }
  //! f_+-(x_i, k_j) = e^{+-ik x} h_+-
  cplx f(int sign, std::size_t ix, std::size_t jk) const;
  //! d_x f_+-(x_i, k_j)
  cplx df(int sign, std::size_t ix, std::size_t jk) const;
  //! index of the node equal to x (InvalidArgument if x is not a node)
  std::size_t node(double x) const;
  //! largest residual of h(x,-k) = conj h(x,k) over the field
  double conjugation_residual() const;
  //! largest |h_+-(+-L, k) - 1| over nodes at or beyond the launch points
  double boundary_residual() const;
};

//! Batches solve_h over the k-grid for both signs (parallel over k).
//! The x-grid must contain 0.
JostField jost_field(const Potential &V, const KGrid &kg,
                     const std::vector<double> &xs, const JostOptions &opt = {});

//! Standard x-window: |x| <= X with n nodes (defaults |x| <= 20, 201 nodes).
std::vector<double> standard_window(double X = 20.0, std::size_t n = 201);

struct Wronskians {
  std::vector<cplx> W, Wp, Wm; //!< W(k), W_+(k), W_-(k) on the k-grid
  double drift = 0.0;          //!< worst relative x-dependence found
};

//! W, W_+- at x = 0; x-independence re-checked at the nodes nearest to
//! -L/2 and L/2 (WronskianDrift when the relative drift exceeds `tol`).
Wronskians wronskians(const JostField &field, double tol = 1e-7);

//! Recomputes W, W_+, W_- for all k from the field values at node ix.
void wronskians_at(const JostField &field, std::size_t ix, std::vector<cplx> &W,
                   std::vector<cplx> &Wp, std::vector<cplx> &Wm);

//! Transformation-operator kernel B_+-(x_i, y) (or d_x B when `derivative`),
//! recovered from the transform of h_+-(x_i, .) - 1 (or d_x h_+-).
struct BKernel {
  std::vector<double> y;  //!< +-y >= 0, ascending in |y|
  std::vector<double> B;  //!< real part
  double imag_residual = 0.0; //!< sup |Im| relative to sup |B|
  double outside_residual = 0.0; //!< sup |B| on the wrong half-line
};
BKernel b_kernel(const JostField &field, std::size_t ix, int sign,
                 bool derivative = false, double imag_tol = 1e-6);

//! Binary dump (format in README): magic, sizes, K, x-grid, 4 complex arrays.
void save_jost_field(const JostField &field, const std::string &path);
JostField load_jost_field(const std::string &path);

} // namespace disperse1d
