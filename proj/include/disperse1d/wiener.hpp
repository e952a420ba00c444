#pragma once
#include <array>
#include <cstddef>
#include <memory>
#include <vector>

#include "disperse1d/grid.hpp"
#include "disperse1d/jost.hpp"
#include "disperse1d/scattering.hpp"

namespace disperse1d {

//! f(k) = c + a k/(k^2+1) + b/(k^2+1) + sum_m r(p_m) e^{ik p_m} dp.
//! `hat` is the full transform ghat(p_m) (tail terms included, sgn(0) = 0),
//! `hat_res` the part that is not carried analytically.
struct WienerProfile {
  cplx c{0.0, 0.0};
  cplx tail_a{0.0, 0.0}, tail_b{0.0, 0.0};
  double p0 = 0.0, dp = 1.0;
  std::vector<cplx> hat, hat_res;
  double l1_norm = 0.0;
  double fit_residual = 0.0; //!< max misfit of the tail model on the outer nodes

  std::size_t size() const { return hat.size(); }
  double p(std::size_t m) const { return p0 + double(m) * dp; }
  //! ghat at an arbitrary p (linear interpolation, exact tails; 0 outside)
  cplx at(double p) const;
  double norm_A1() const { return std::abs(c) + l1_norm; }
  cplx resynthesize(double k) const;
};

struct ProfileOptions {
  bool zero_constant = false; //!< force c = 0 in the tail fit
  double tail_fraction = 0.02;
  bool crop = true;           //!< drop p-ranges where |ghat| < 1e-14 max|ghat|
  bool check_limit = true;    //!< raise NoLimitAtInfinity on a bad tail fit
};

//! Discrete transform in the convention ghat(p) = (1/2pi) int (f - c) e^{-ikp} dk,
//! zero-padded x`pad`. Reusable and thread safe.
class ProfileBuilder {
public:
  explicit ProfileBuilder(const KGrid &kg, std::size_t pad = 4);
  ~ProfileBuilder();
  ProfileBuilder(const ProfileBuilder &) = delete;
  ProfileBuilder &operator=(const ProfileBuilder &) = delete;

  WienerProfile build(const std::vector<cplx> &f, const ProfileOptions &opt = {}) const;
  const KGrid &kgrid() const { return kg_; }
  std::size_t padded_size() const { return npad_; }
  double dp() const;

private:
  struct Impl;
  KGrid kg_;
  std::size_t npad_;
  std::unique_ptr<Impl> impl_;
};

WienerProfile to_profile(const std::vector<cplx> &f, const KGrid &kg,
                         const ProfileOptions &opt = {});

//! psi(x,y,k) = h_+(max,k) h_-(min,k) T(k) - 1 on the k-grid.
std::vector<cplx> psi_samples(const JostField &field, const ScatteringData &sd,
                              std::size_t ix, std::size_t iy);
WienerProfile psi_profile(const JostField &field, const ScatteringData &sd,
                          std::size_t ix, std::size_t iy);
WienerProfile psi_profile(const JostField &field, const ScatteringData &sd,
                          std::size_t ix, std::size_t iy, const ProfileBuilder &pb);

//! psi_1^+-, psi_2^+-, psi_3^+- of the non-resonant weighted decomposition.
//! Index [j][s]: j = 0,1,2 for psi_1..psi_3, s = 0 for +, 1 for -.
struct WeightedProfiles {
  std::array<std::array<WienerProfile, 2>, 3> psi;
  double l1(int j, int s) const { return psi[std::size_t(j)][std::size_t(s)].l1_norm; }
  double max_l1() const;
};
WeightedProfiles weighted_psi_profiles(const JostField &field, const ScatteringData &sd,
                                       std::size_t ix, std::size_t iy);
WeightedProfiles weighted_psi_profiles(const JostField &field, const ScatteringData &sd,
                                       std::size_t ix, std::size_t iy,
                                       const ProfileBuilder &pb);

//! Fourth-order centred derivative on a uniform grid (one-sided near the ends).
std::vector<cplx> derivative(const std::vector<cplx> &f, double h);

//! Resonant-case quantities at x = 0 for both signs.
struct ResonantSide {
  std::vector<double> y;          //!< +-y >= 0, ascending |y|
  std::vector<double> B, dB;      //!< B(0,y), d_x B(0,y)
  std::vector<double> K, D, H;    //!< K(y), D(y), H(y)
  std::vector<double> X, tail;    //!< running int_0^X |H|
  double last_decade_increment = 0.0;
  std::vector<double> F;          //!< F(u) on the same y-grid
  double glm_residual = 0.0;      //!< sup_y |F(y) + B(0,y) +- int B(0,z)F(y+z)dz|
  bool converged = false;
};
struct ResonantDiagnostics {
  std::array<ResonantSide, 2> side; //!< [0] = +, [1] = -
  bool slow_convergence = false;
};
ResonantDiagnostics resonant_diagnostics(const JostField &field, const ScatteringData &sd);

} // namespace disperse1d
