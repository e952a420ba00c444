#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace disperse1d {

enum class Family { zero, gaussian_well, sech2, square_well, exp_decay, tabulated };

const char *to_string(Family f);
Family family_from_string(const std::string &name);

//! Family plus its two parameters:
//!   gaussian_well(depth, width)   V = -depth * exp(-(x/width)^2)
//!   sech2(lambda)                 V = -lambda(lambda+1) sech^2 x
//!   square_well(depth, halfwidth) V = -depth on |x| <= halfwidth
//!   exp_decay(amplitude, scale)   V = amplitude * exp(-|x|/scale)
struct PotentialSpec {
  Family family = Family::zero;
  double a = 0.0;
  double b = 0.0;
  std::vector<double> xs; //!< tabulated nodes (strictly increasing)
  std::vector<double> vs; //!< tabulated values
};

class Potential {
public:
  const PotentialSpec &spec() const { return spec_; }
  Family family() const { return spec_.family; }

  //! Family formula without the cutoff.
  double raw(double x) const;
  //! V(x), exactly zero beyond the cutoff radius.
  double operator()(double x) const;

  //! cutoff radius L: V is treated as 0 for |x| > L
  double cutoff() const { return cutoff_; }
  //! points in [-L, L] where V or V' jumps (square well edges, table nodes)
  const std::vector<double> &breakpoints() const { return breaks_; }
  double min_value() const { return vmin_; }
  bool is_even() const;
  std::string name() const;
  //! stable content hash (parameters and table), used for cache keys
  std::uint64_t hash() const;

private:
  friend Potential make_potential(const PotentialSpec &);
  PotentialSpec spec_;
  double cutoff_ = 0.0;
  double vmin_ = 0.0;
  std::vector<double> breaks_;
};

//! Validates the parameters and fixes the cutoff radius: the smallest L with
//! eta_+(L) + eta_-(-L) < 1e-12 (1 + ||V||_{L^1}); support edge for compactly
//! supported families.
Potential make_potential(const PotentialSpec &spec);
Potential make_potential(Family family, double a = 0.0, double b = 0.0);

double evaluate(const Potential &V, double x);

//! ||V||_{L^1_n} = int (1+|x|)^n |V(x)| dx, n in {0,1,2}
double moment_norm(const Potential &V, int n);

struct TailMoments {
  double eta = 0.0;   //!< +-int_x^{+-inf} |V|
  double gamma = 0.0; //!< int_x^{+-inf} (y-x)|V(y)| dy, taken with |y-x|
};
TailMoments tail_moments(const Potential &V, double x, int sign);

//! Two-column CSV with header line `x,V`.
Potential load_tabulated_csv(const std::string &path);

} // namespace disperse1d
