#include <gtest/gtest.h>

#include "disperse1d/decayfit.hpp"
#include "disperse1d/errors.hpp"
#include "shared.hpp"

using namespace d1test;

TEST(Ladder, GeometricEndpoints) {
  const auto t = t_ladder(10.0, 1000.0, 8);
  ASSERT_EQ(t.size(), 8u);
  EXPECT_DOUBLE_EQ(t.front(), 10.0);
  EXPECT_NEAR(t.back(), 1000.0, 1e-10);
  for (std::size_t i = 1; i + 1 < t.size(); ++i)
    EXPECT_NEAR(t[i] * t[i], t[i - 1] * t[i + 1], 1e-9 * t[i] * t[i]);
}

TEST(Fit, RecoversSyntheticPowerLaws) {
  const auto t = t_ladder(10.0, 1000.0, 8);
  for (double s : {-0.5, -1.5, -0.25}) {
    std::vector<double> v;
    for (double x : t)
      v.push_back(3.7 * std::pow(x, s));
    const auto f = fit_decay(t, v);
    EXPECT_NEAR(f.slope, s, 1e-12);
    EXPECT_NEAR(f.intercept, std::log(3.7), 1e-10);
    EXPECT_NEAR(f.r2, 1.0, 1e-12);
    EXPECT_LT(f.stderr_slope, 1e-10);
  }
}

TEST(Fit, ScaleInvariantSlope) {
  const auto t = t_ladder(10.0, 1000.0, 8);
  std::vector<double> v, w;
  for (std::size_t i = 0; i < t.size(); ++i) {
    v.push_back(std::pow(t[i], -0.5) * (1.0 + 0.1 * std::sin(double(i))));
    w.push_back(1e6 * v.back());
  }
  EXPECT_NEAR(fit_decay(t, v).slope, fit_decay(t, w).slope, 1e-12);
}

TEST(Fit, RejectsBadSamples) {
  const auto t = t_ladder(10.0, 1000.0, 8);
  std::vector<double> v(t.size(), 1.0);
  v[3] = 0.0;
  try {
    fit_decay(t, v);
    FAIL() << "expected NonPositiveValue";
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonPositiveValue);
  }
  EXPECT_THROW(fit_decay(t_ladder(10.0, 20.0, 8), std::vector<double>(8, 1.0)), Error);
  EXPECT_THROW(fit_decay(t_ladder(10.0, 1000.0, 5), std::vector<double>(5, 1.0)), Error);
}

TEST(Decay, FreeSupSlopeIsExactlyOneHalf) {
  const auto &fx = cache().get(free_potential());
  const auto s = schrodinger_decay(*fx.fk, t_ladder(10.0, 1000.0, 8), 0.0, standard_window());
  EXPECT_NEAR(s.fit.slope, -0.5, 1e-6);
  EXPECT_EQ(s.descriptor, "sup");
}

TEST(Decay, NodesMergeWindowAndExtension) {
  const auto n = decay_nodes(200.0, 1.0);
  EXPECT_DOUBLE_EQ(n.front(), -200.0);
  EXPECT_DOUBLE_EQ(n.back(), 200.0);
  EXPECT_TRUE(std::is_sorted(n.begin(), n.end()));
  for (double w : standard_window())
    EXPECT_TRUE(std::binary_search(n.begin(), n.end(), w));
}

TEST(Decay, WeightedGaussianWellRatio) {
  const auto &fx = cache().get(gaussian_well());
  const auto v = fx.fk->window_sup(decay_nodes(), {cplx(100.0, 0.0), cplx(400.0, 0.0)}, 1.0);
  EXPECT_NEAR(v[0] / v[1], 8.0, 2.0);
}

TEST(SupNorm, WeightOrdering) {
  const auto &fx = cache().get(sech2());
  const auto K = fx.fk->field(standard_window(), standard_window(), cplx(10.0, 0.0));
  EXPECT_GE(sup_kernel_norm(K, 0.0), sup_kernel_norm(K, 1.0));
}

TEST(Sobolev, UnitGaussianMass) {
  const auto x = uniform_nodes(-20.0, 20.0, 801);
  const auto g = unit_gaussian(x);
  EXPECT_NEAR(sobolev_norm(x, g, 0.0, 0.0), 1.0, 1e-6);
  // the weight (1+|x|) has a kink at 0: the trapezoid error there is O(h^2)
  EXPECT_NEAR(sobolev_norm(x, g, 0.0, 1.0), 1.0 + std::sqrt(2.0 / pi), 5e-4);
  EXPECT_GT(sobolev_norm(x, g, 0.5, 0.0), sobolev_norm(x, g, 0.0, 0.0));
  EXPECT_GT(sobolev_norm(x, g, 0.5, 1.0), sobolev_norm(x, g, 0.5, 0.0));
}
