#pragma once
#include <functional>
#include <limits>
#include <vector>

#include "disperse1d/grid.hpp"
#include "disperse1d/wiener.hpp"

namespace disperse1d {

//! Fresnel integrals C(z) = int_0^z cos(pi s^2/2) ds, S(z) likewise with sin.
struct Fresnel {
  double C = 0.0, S = 0.0;
};
Fresnel fresnel(double z);

//! int_a^b e^{i t phi(k)} f(k) dk. b (or a) may be infinite: the window is
//! then cut at 10 max(|a|, t, 6) with a cosine taper over its last 10%.
struct OscIntegral {
  std::function<double(double)> phi, dphi, ddphi;
  std::function<cplx(double)> f;
  double a = 0.0, b = 1.0;
  double t = 1.0;
};

struct OscOptions {
  double rtol = 1e-8;
  double atol = 0.0; //!< absolute target for the whole integral
  std::size_t max_panels = 1u << 20;
  double taper_fraction = 0.1;
};

struct OscResult {
  cplx value;
  std::size_t panels = 0;
  double error_estimate = 0.0;
};

OscResult oscint_detailed(const OscIntegral &I, const OscOptions &opt = {});
cplx oscint(const OscIntegral &I, const OscOptions &opt = {});

//! Integral of a single Filon panel [lo, hi]: the phase is linearized at the
//! midpoint and the remainder expanded in Legendre polynomials (12 nodes).
//! `l1`, if given, receives the panel quadrature of |f|.
cplx filon_panel(const OscIntegral &I, double lo, double hi, double *l1 = nullptr);

//! Stationary points of phi on [a, b] (sign scan of phi' + bisection).
std::vector<double> stationary_points(const std::function<double(double)> &dphi, double a,
                                      double b, std::size_t scan = 400);

//! C_2 = 2^{8/3}
inline double vdc_constant() { return 6.3496042078727978990; }

struct VdcRow {
  double t = 0.0;
  cplx I{0.0, 0.0};
  double ratio = 0.0; //!< |I| [t min|phi''|]^{1/2} / ||f||_A1
};
struct VdcReport {
  double min_ddphi = 0.0;
  double norm_A1 = 0.0;
  std::vector<VdcRow> rows;
  double max_ratio = 0.0;
  bool ok = true; //!< max_ratio <= 1.05 C_2
};
//! f enters through its profile (norm) and its resynthesis (integrand).
VdcReport vdc_check(const std::function<double(double)> &phi,
                    const std::function<double(double)> &dphi,
                    const std::function<double(double)> &ddphi, const WienerProfile &f,
                    double a, double b, const std::vector<double> &ts, bool throw_on_violation = false);
//! Same with the integrand given directly (e.g. f = const) and its norm.
VdcReport vdc_check(const std::function<double(double)> &phi,
                    const std::function<double(double)> &dphi,
                    const std::function<double(double)> &ddphi,
                    const std::function<cplx(double)> &f, double norm_A1, double a, double b,
                    const std::vector<double> &ts, bool throw_on_violation = false);

//! Psi(k, t) = int_0^k e^{it(sqrt(tau^2+1) + v tau)} dtau, accumulated panel by
//! panel on a k-grid that is uniform on [0, 1] and geometric beyond.
struct PsiTable {
  double v = 0.0, t = 1.0;
  std::vector<double> k;
  std::vector<cplx> psi;
};
PsiTable appendix_psi(double v, double t, double kmax, std::size_t per_decade = 2000);
//! Psi(k, t) at a single k by oscint.
cplx appendix_psi_at(double v, double t, double k);

struct AppendixRow {
  double t = 0.0, v = 0.0, J = 0.0, sqrt_t_J = 0.0;
};
struct AppendixReport {
  std::vector<AppendixRow> rows;     //!< every (t, v)
  std::vector<double> ts, max_over_v; //!< max_v t^{1/2} J(t) per t
  double median = 0.0, max = 0.0;
  bool bounded = true;               //!< max <= 2 median
};
//! J(t) = int_1^t |Psi(k,t)| k^{-5/2} dk.
AppendixReport appendix_psi_check(const std::vector<double> &vs, const std::vector<double> &ts);

//! sup over samples of |Psi(k,t)| / (t^{-1/2}(k+1)^{3/2}) on k in [0, kmax].
struct EnvelopeReport {
  double max_ratio = 0.0;   //!< against t^{-1/2}(k+1)^{3/2}
  double C_hat = 0.0;       //!< |Psi(1,1)| / 2^{3/2}
  double worst_k = 0.0, worst_t = 0.0, worst_v = 0.0;
  bool ok = true;           //!< max_ratio <= 1.05 C_2
};
EnvelopeReport psi_envelope_check(const std::vector<double> &vs, const std::vector<double> &ts,
                                  double kmax = 50.0);

} // namespace disperse1d
