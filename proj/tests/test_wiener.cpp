#include <gtest/gtest.h>

#include "disperse1d/errors.hpp"
#include "disperse1d/wiener.hpp"
#include "shared.hpp"

using namespace d1test;

namespace {
const KGrid &kgrid() {
  static const KGrid kg = make_kgrid(40.0, 4097);
  return kg;
}
} // namespace

TEST(Profile, NuTransform) {
  const auto &kg = kgrid();
  std::vector<cplx> f(kg.n);
  for (std::size_t j = 0; j < kg.n; ++j)
    f[j] = 1.0 / (I * kg.k(j) - 1.0);
  const auto p = to_profile(f, kg);
  EXPECT_LT(std::abs(p.c), 1e-6);
  EXPECT_NEAR(p.l1_norm, 1.0, 1e-3);
  double e = 0.0;
  for (std::size_t m = 0; m < p.size(); ++m) {
    const double q = p.p(m);
    if (std::abs(q) < 0.05)
      continue;
    e = std::max(e, std::abs(p.hat[m] - (q > 0 ? -std::exp(-q) : 0.0)));
  }
  EXPECT_LT(e, 1e-3);
  double r = 0.0;
  for (std::size_t j = 0; j < kg.n; j += 7)
    r = std::max(r, std::abs(p.resynthesize(kg.k(j)) - f[j]));
  EXPECT_LT(r, 1e-6);
}

TEST(Profile, Constant) {
  const auto &kg = kgrid();
  const auto p = to_profile(std::vector<cplx>(kg.n, 1.0), kg);
  EXPECT_LT(std::abs(p.c - 1.0), 1e-10);
  for (const auto &h : p.hat)
    EXPECT_LT(std::abs(h), 1e-10);
}

TEST(Profile, TransmissionOfPoschlTeller) {
  const auto &sd = cache().get(sech2()).sd;
  const auto p = to_profile(sd.T, sd.kg);
  EXPECT_NEAR(p.c.real(), 1.0, 1e-6);
  EXPECT_NEAR(p.c.imag(), 0.0, 1e-6);
  EXPECT_TRUE(std::isfinite(p.l1_norm));
  EXPECT_GT(p.l1_norm, 0.0);
}

TEST(Profile, RejectsFunctionsWithoutLimit) {
  const auto &kg = kgrid();
  std::vector<cplx> f(kg.n);
  for (std::size_t j = 0; j < kg.n; ++j)
    f[j] = std::cos(3.0 * kg.k(j));
  try {
    to_profile(f, kg);
    FAIL() << "expected NoLimitAtInfinity";
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoLimitAtInfinity);
  }
}

TEST(Psi, VanishesForFreePotential) {
  const auto &fx = cache().get(free_potential());
  const auto p = psi_profile(fx.field, fx.sd, fx.field.node(-3.0), fx.field.node(7.0));
  EXPECT_LT(p.l1_norm, 1e-12);
}

TEST(Psi, PoschlTellerAtOrigin) {
  const auto &fx = cache().get(sech2());
  const std::size_t i0 = fx.field.node(0.0);
  const auto s = psi_samples(fx.field, fx.sd, i0, i0);
  const auto p = psi_profile(fx.field, fx.sd, i0, i0);
  double e = 0.0, r = 0.0;
  for (std::size_t j = 0; j < fx.field.nk(); j += 3) {
    const double k = fx.field.kg.k(j);
    const cplx exact = k * k / ((k + I) * (k - I)) - 1.0;
    e = std::max(e, std::abs(s[j] - exact));
    r = std::max(r, std::abs(p.resynthesize(k) - exact));
  }
  EXPECT_LT(e, 1e-6);
  EXPECT_LT(r, 1e-5);
  EXPECT_TRUE(std::isfinite(p.l1_norm));
}

TEST(Psi, NormsArePiecewiseConstantOutsideTheSupport) {
  // beyond the cutoff psi reduces to a shifted reflection coefficient (same
  // side) or to T - 1 (opposite sides), so its l1 norm cannot grow
  const auto &fx = cache().get(gaussian_well());
  ProfileBuilder pb(fx.field.kg);
  std::vector<cplx> tm(fx.sd.T.size());
  for (std::size_t j = 0; j < tm.size(); ++j)
    tm[j] = fx.sd.T[j] - 1.0;
  const double same_right = to_profile(fx.sd.Rp, fx.sd.kg).l1_norm;
  const double same_left = to_profile(fx.sd.Rm, fx.sd.kg).l1_norm;
  const double opposite = to_profile(tm, fx.sd.kg).l1_norm;
  auto l1 = [&](double x, double y) {
    return psi_profile(fx.field, fx.sd, fx.field.node(x), fx.field.node(y), pb).l1_norm;
  };
  for (double x : {10.0, 20.0})
    for (double y : {10.0, 20.0}) {
      EXPECT_NEAR(l1(x, y), same_right, 1e-5 * same_right);
      EXPECT_NEAR(l1(-x, -y), same_left, 1e-5 * same_left);
      EXPECT_NEAR(l1(x, -y), opposite, 1e-5 * opposite);
      EXPECT_NEAR(l1(-x, y), opposite, 1e-5 * opposite);
    }
}

TEST(Psi, TrendOnProbeGridIsReported) {
  const auto c = wiener_trend_check(cache().get(gaussian_well()));
  EXPECT_TRUE(std::isfinite(c.value));
  EXPECT_NE(c.detail.find("slope"), std::string::npos);
  EXPECT_EQ(c.pass, c.value < 0.01);
}

TEST(WeightedPsi, FiniteForNonResonantAndGatedForResonant) {
  const auto &g = cache().get(gaussian_well());
  const std::size_t i0 = g.field.node(0.0);
  const auto w = weighted_psi_profiles(g.field, g.sd, i0, i0);
  for (int j = 0; j < 3; ++j)
    for (int s = 0; s < 2; ++s)
      EXPECT_TRUE(std::isfinite(w.l1(j, s)));
  const auto &r = cache().get(sech2());
  try {
    weighted_psi_profiles(r.field, r.sd, i0, i0);
    FAIL() << "expected ResonantInput";
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::ResonantInput);
  }
}

TEST(WeightedPsi, BoundedByLinearWeights) {
  const auto &g = cache().get(gaussian_well());
  ProfileBuilder pb(g.field.kg);
  double lo = 1e300, hi = 0.0;
  for (double x : {-20.0, 0.0, 20.0})
    for (double y : {-20.0, 0.0, 20.0}) {
      const auto w = weighted_psi_profiles(g.field, g.sd, g.field.node(x), g.field.node(y), pb);
      const double ratio = w.max_l1() / ((1.0 + std::abs(x)) * (1.0 + std::abs(y)));
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  EXPECT_TRUE(std::isfinite(hi));
  EXPECT_GT(lo, 0.0);
}

TEST(Resonant, FreeDiagnosticsVanish) {
  const auto &fx = cache().get(free_potential());
  const auto d = resonant_diagnostics(fx.field, fx.sd);
  for (const auto &s : d.side) {
    for (double h : s.H)
      EXPECT_LT(std::abs(h), 1e-10);
    EXPECT_LT(s.glm_residual, 1e-10);
  }
}

TEST(Resonant, PoschlTellerTailsAndGlm) {
  const auto &fx = cache().get(sech2());
  const auto d = resonant_diagnostics(fx.field, fx.sd);
  for (const auto &s : d.side) {
    EXPECT_LT(s.last_decade_increment, 1e-3);
    EXPECT_LT(s.glm_residual, 1e-4);
  }
}
