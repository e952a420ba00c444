#pragma once
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "disperse1d/grid.hpp"
#include "disperse1d/jost.hpp"
#include "disperse1d/scattering.hpp"
#include "disperse1d/wiener.hpp"

namespace disperse1d {

enum class Route { direct, fresnel, kg12, kg11, kg21, kg22, oracle };
const char *to_string(Route r);
Route route_from_string(const std::string &name);

//! Kernel samples K(x_i, y_j) at one (possibly regularized) time
//! tau = t - i eps. Layout [i * y.size() + j].
struct KernelField {
  double t = 0.0;
  double eps = 0.0;
  std::vector<double> x, y;
  std::vector<cplx> K;
  Route route = Route::fresnel;
  double mass = 0.0;

  cplx tau() const { return {t, -eps}; }
  cplx &operator()(std::size_t i, std::size_t j) { return K[i * y.size() + j]; }
  cplx operator()(std::size_t i, std::size_t j) const { return K[i * y.size() + j]; }
  //! max |K(x,y) - K(y,x)| / max |K| (x- and y-grids must coincide)
  double symmetry_residual() const;
  bool finite() const;
};

//! -f_+(x v y, +-k) f_-(x ^ y, +-k) / W(+-k) for the k-grid node jk (k > 0);
//! side = +1 for k^2 + i0, -1 for k^2 - i0.
cplx resolvent_kernel(const JostField &field, const ScatteringData &sd, std::size_t ix,
                      std::size_t iy, std::size_t jk, int side);

//! (|T|^2 / (-2ik)) [f_+(y,k) f_+(x,-k) + f_-(y,k) f_-(x,-k)].
cplx resolvent_jump(const JostField &field, const ScatteringData &sd, std::size_t ix,
                    std::size_t iy, std::size_t jk);

//! e^{-|x-y|^2/(4 i tau)} / sqrt(4 pi i tau), principal branch.
cplx free_kernel(double x, double y, cplx tau);
inline cplx free_kernel(double x, double y, double t) { return free_kernel(x, y, cplx(t, 0.0)); }

//! Schrodinger kernel through the Fresnel representation
//!   K = (4 pi i tau)^{-1/2} [e^{i D^2/(4 tau)} + int e^{i(p+D)^2/(4 tau)} psihat(x,y,p) dp].
//! Pairs outside [x_L, x_R] (the outermost field nodes beyond the cutoff) are
//! reduced to a profile inside it: mixed pairs clamp to the boundary node,
//! same-side pairs reuse the boundary profile shifted by 2|x - x_R| (resp.
//! 2|y - x_L|). Inside [x_L, x_R] every node must be a field node.
class FresnelKernel {
public:
  FresnelKernel(const JostField &field, const ScatteringData &sd);
  ~FresnelKernel();
  FresnelKernel(const FresnelKernel &) = delete;
  FresnelKernel &operator=(const FresnelKernel &) = delete;

  double x_left() const { return xl_; }
  double x_right() const { return xr_; }

  //! One KernelField per tau, on xs x ys.
  std::vector<KernelField> fields(const std::vector<double> &xs, const std::vector<double> &ys,
                                  const std::vector<cplx> &taus) const;
  KernelField field(const std::vector<double> &xs, const std::vector<double> &ys,
                    cplx tau) const;

  //! For each tau, max over node pairs of |K(x,y)| / ((1+|x|)(1+|y|))^sigma,
  //! without storing the field (nodes sorted; O(#distinct profile shifts)
  //! chirp sums). `half`, if given, receives the same sup restricted to
  //! |x|, |y| <= half_radius.
  std::vector<double> window_sup(const std::vector<double> &nodes,
                                 const std::vector<cplx> &taus, double sigma,
                                 std::vector<double> *half = nullptr,
                                 double half_radius = 0.0) const;

  //! Single value (builds its profile on the fly).
  cplx value(double x, double y, cplx tau) const;

  struct Ref {
    std::size_t ix = 0, iy = 0; //!< profile pair (field nodes)
    double shift = 0.0;         //!< chirp argument offset (D plus any boundary shift)
    double D = 0.0;
  };
  Ref reduce(double x, double y) const;

private:
  const JostField &field_;
  const ScatteringData &sd_;
  std::unique_ptr<ProfileBuilder> pb_;
  double xl_, xr_;
  std::size_t il_, ir_;
  bool left_free_, right_free_;
};

//! Free part plus the p-sum with a prebuilt profile.
cplx fresnel_chirp_sum(const WienerProfile &prof, double shift, cplx tau);

KernelField schrodinger_kernel_fresnel(const JostField &field, const ScatteringData &sd,
                                       double t, const std::vector<double> &window,
                                       double eps = 0.0);

struct DirectOptions {
  double rtol = 1e-7;
  double atol = 1e-10; //!< on the k-integrals (the kernel is this / 2pi)
  double psi_taper = 0.1; //!< psi is tapered to 0 over [(1 - psi_taper) K, K]
};

//! K = (1/2pi) int e^{-i(tau k^2 - |y-x| k)} (1 + psi(x,y,k)) dk by oscint.
//! The free part is cut at K_c = max(1.5 K, 100/sqrt t, D/t + 20/sqrt t) with
//! a 10% cosine taper; psi is spline-interpolated on the k-grid.
cplx direct_kernel_value(const JostField &field, const ScatteringData &sd, const FresnelKernel &fk,
                         double x, double y, cplx tau, const DirectOptions &opt = {});
KernelField schrodinger_kernel_direct(const JostField &field, const ScatteringData &sd,
                                      double t, const std::vector<double> &window,
                                      double eps = 0.0, const DirectOptions &opt = {});

//! M_t(k) entries for omega = sqrt(k^2 + m^2): 11 = cos, 12 = sin/omega,
//! 21 = -omega sin, 22 = cos.
double kg_symbol(int entry, double k, double m, double t);
//! sup over the sampled k of |det M_t(k) - 1|.
double kg_det_residual(const std::vector<double> &ks, double m, double t);

//! A(x_i, k_j) = int e^{i|y-x|k}(1 + psi(x,y,k)) f(y) dy for f sampled on the
//! field x-grid (trapezoid, split at y = x). Layout [i * nk + j].
std::vector<cplx> kg_inner(const JostField &field, const ScatteringData &sd,
                           const std::vector<double> &f);

//! u = (1/2pi) int M_t^{entry}(k) A(x,k) dk on the field x-grid; f must
//! already be P_c-projected. Entries 11, 12, 21, 22.
std::vector<cplx> kg_apply(const JostField &field, const ScatteringData &sd, double m, double t,
                           const std::vector<double> &f, int entry);

//! Same with a precomputed kg_inner (several t share it).
std::vector<cplx> kg_apply_inner(const JostField &field, const std::vector<cplx> &A, double m,
                                 double t, int entry);

//! Far field: for x beyond both the support of f and the cutoff,
//! A(x,k) = e^{+-ikx} F_+-(k), so u is one Fourier integral evaluated by FFT
//! on a refined k-grid (cubic-spline interpolation of F_+-).
struct KgFarField {
  std::vector<double> x; //!< |x| values (ascending), same for both sides
  std::vector<cplx> right, left;
};
KgFarField kg_far_field(const JostField &field, const ScatteringData &sd, double m, double t,
                        const std::vector<double> &f, int entry, double xmin, double xmax,
                        double dx = 0.05);

} // namespace disperse1d
