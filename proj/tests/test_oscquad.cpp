#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "disperse1d/errors.hpp"
#include "disperse1d/oscquad.hpp"
#include "disperse1d/wiener.hpp"

using namespace disperse1d;

namespace {

OscIntegral square_phase(double a, double b, double t, std::function<cplx(double)> f) {
  OscIntegral q;
  q.phi = [](double k) { return k * k; };
  q.dphi = [](double k) { return 2.0 * k; };
  q.ddphi = [](double) { return 2.0; };
  q.f = std::move(f);
  q.a = a;
  q.b = b;
  q.t = t;
  return q;
}

double quad(std::function<double(double)> g, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, a, b, 15, 1e-15);
}

} // namespace

TEST(Fresnel, ZeroAndOddness) {
  const auto z = fresnel(0.0);
  EXPECT_EQ(z.C, 0.0);
  EXPECT_EQ(z.S, 0.0);
  for (double x : {0.3, 1.2, 1.7, 4.0, 30.0}) {
    const auto p = fresnel(x), m = fresnel(-x);
    EXPECT_EQ(p.C, -m.C);
    EXPECT_EQ(p.S, -m.S);
  }
}

TEST(Fresnel, AgreesWithQuadrature) {
  for (double z : {0.5, 1.0, 1.55, 1.6, 1.65, 2.0, 5.0}) {
    const auto f = fresnel(z);
    EXPECT_NEAR(f.C, quad([](double s) { return std::cos(pi * s * s / 2.0); }, 0.0, z), 1e-12);
    EXPECT_NEAR(f.S, quad([](double s) { return std::sin(pi * s * s / 2.0); }, 0.0, z), 1e-12);
  }
}

TEST(Fresnel, LargeArgument) {
  const auto f = fresnel(1e6);
  EXPECT_NEAR(f.C, 0.5, 1e-6);
  EXPECT_NEAR(f.S, 0.5, 1e-6);
  // C^2 + S^2 = 1/2 + (sin u - cos u)/(pi z) + O(z^-2) with u = pi z^2 / 2
  for (double z : {50.0, 80.5}) {
    const auto g = fresnel(z);
    const double u = pi * z * z / 2.0;
    const double lead = 0.5 + (std::sin(u) - std::cos(u)) / (pi * z);
    EXPECT_NEAR(g.C * g.C + g.S * g.S, lead, 2.0 / (pi * pi * z * z));
  }
}

TEST(Oscint, GaussianFresnelClosedForm) {
  for (double t : {1.0, 10.0, 100.0}) {
    const auto v = oscint(square_phase(-INFINITY, INFINITY, t, [](double) { return cplx(1.0); }));
    const cplx exact = std::sqrt(pi / t) * std::exp(I * pi / 4.0);
    EXPECT_LT(std::abs(v - exact) / std::abs(exact), 1e-6) << "t = " << t;
  }
}

TEST(Oscint, ZeroTimeIsPlainQuadrature) {
  const auto v = oscint(square_phase(0.0, 2.0, 0.0, [](double k) { return cplx(std::exp(-k), k); }));
  EXPECT_NEAR(v.real(), 1.0 - std::exp(-2.0), 1e-10);
  EXPECT_NEAR(v.imag(), 2.0, 1e-10);
}

TEST(Oscint, Linearity) {
  auto f = [](double k) { return cplx(1.0 / (1.0 + k * k), 0.0); };
  auto g = [](double k) { return cplx(0.0, std::exp(-k * k)); };
  const double a = 2.5, b = -0.7;
  const auto If = oscint(square_phase(-3.0, 4.0, 20.0, f));
  const auto Ig = oscint(square_phase(-3.0, 4.0, 20.0, g));
  const auto Ih = oscint(square_phase(-3.0, 4.0, 20.0, [&](double k) { return a * f(k) + b * g(k); }));
  EXPECT_LT(std::abs(Ih - (a * If + b * Ig)) / std::abs(Ih), 1e-8);
}

TEST(Oscint, MatchesAppendixPsi) {
  for (double v : {-0.6, 0.0})
    for (double t : {10.0, 1000.0}) {
      OscIntegral q;
      q.phi = [v](double s) { return std::sqrt(s * s + 1.0) + v * s; };
      q.dphi = [v](double s) { return s / std::sqrt(s * s + 1.0) + v; };
      q.ddphi = [](double s) { return std::pow(s * s + 1.0, -1.5); };
      q.f = [](double) { return cplx(1.0); };
      q.a = 0.0;
      q.b = 20.0;
      q.t = t;
      const auto direct = oscint(q);
      const auto tab = appendix_psi(v, t, 20.0);
      EXPECT_LT(std::abs(tab.psi.back() - direct) / std::abs(direct), 1e-8);
    }
}

TEST(Vdc, SquarePhaseAndHomogeneity) {
  auto phi = [](double k) { return k * k; };
  auto dphi = [](double k) { return 2.0 * k; };
  auto ddphi = [](double) { return 2.0; };
  const auto r1 = vdc_check(phi, dphi, ddphi, [](double) { return cplx(1.0); }, 1.0, -1.0, 1.0,
                            {1.0, 10.0, 100.0});
  EXPECT_LE(r1.max_ratio, vdc_constant());
  EXPECT_TRUE(r1.ok);
  const auto r7 = vdc_check(phi, dphi, ddphi, [](double) { return cplx(7.0); }, 7.0, -1.0, 1.0,
                            {1.0, 10.0, 100.0});
  EXPECT_NEAR(r7.max_ratio, r1.max_ratio, 1e-10);
}

TEST(Vdc, KleinGordonPhaseWithNuProfile) {
  const KGrid kg = make_kgrid(40.0, 4097);
  std::vector<cplx> nu(kg.n);
  for (std::size_t j = 0; j < kg.n; ++j)
    nu[j] = 1.0 / (I * kg.k(j) - 1.0);
  const auto r = vdc_check([](double k) { return std::sqrt(k * k + 1.0); },
                           [](double k) { return k / std::sqrt(k * k + 1.0); },
                           [](double k) { return std::pow(k * k + 1.0, -1.5); },
                           to_profile(nu, kg), -2.0, 2.0, {1.0, 10.0, 100.0});
  EXPECT_LE(r.max_ratio, 1.05 * vdc_constant());
}

TEST(Appendix, EmptyIntervalAtUnitTime) {
  const auto r = appendix_psi_check({0.0}, {1.0});
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].J, 0.0);
}

TEST(Appendix, StationaryRegimeBounded) {
  const auto r = appendix_psi_check({-0.6}, {10.0, 100.0, 1000.0});
  for (const auto &row : r.rows)
    EXPECT_TRUE(std::isfinite(row.sqrt_t_J));
  EXPECT_TRUE(r.bounded);
  const auto v0 = appendix_psi_check({0.0}, {100.0});
  EXPECT_TRUE(std::isfinite(v0.rows[0].sqrt_t_J));
  EXPECT_GT(v0.rows[0].sqrt_t_J, 0.0);
}

TEST(Appendix, EnvelopeHoldsWithVanDerCorputConstant) {
  const auto env = psi_envelope_check({-0.6, 0.0, 0.5}, {1.0, 100.0, 10000.0}, 50.0);
  EXPECT_TRUE(env.ok);
  EXPECT_LE(env.max_ratio, 1.05 * vdc_constant());
}
