#include <gtest/gtest.h>

#include <numeric>

#include "disperse1d/decayfit.hpp"
#include "disperse1d/errors.hpp"
#include "disperse1d/oracle.hpp"
#include "shared.hpp"

using namespace d1test;

TEST(Oracle, FreeDirichletSpectrum) {
  const double L = 40.0;
  const std::size_t N = 1600;
  const auto Hd = discretize(free_potential(), L, N);
  const double h = 2.0 * L / double(N + 1);
  EXPECT_NEAR(Hd.h, h, 1e-15);
  for (std::size_t n : {0u, 1u, 10u, 100u}) {
    const double exact = 4.0 / (h * h) * std::pow(std::sin(double(n + 1) * pi / (2.0 * double(N + 1))), 2);
    EXPECT_NEAR(Hd.lambda[n], exact, 1e-9 * std::max(1.0, exact));
  }
  EXPECT_EQ(Hd.first_continuum, 0u);
  EXPECT_LT(orthonormality_residual(Hd), 1e-10);
}

TEST(Oracle, PoschlTellerGroundState) {
  const auto &Hd = cache().oracle(sech2());
  const auto E = Hd.bound_energies();
  ASSERT_EQ(E.size(), 1u);
  EXPECT_NEAR(E[0], -1.0, 1e-3);
  EXPECT_LT(orthonormality_residual(Hd), 1e-10);
}

TEST(Oracle, RejectsOversizedGrid) {
  try {
    discretize(free_potential(), 100.0, kMaxOracleNodes + 1);
    FAIL() << "expected TooLarge";
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::TooLarge);
  }
}

TEST(Oracle, ProjectorAndPropagatorAtTimeZero) {
  const auto &Hd = cache().oracle(gaussian_well());
  const auto f = unit_gaussian(Hd.x, 1.0, 0.3);
  const auto p = pc_apply(Hd, f);
  const auto pp = pc_apply(Hd, p);
  std::vector<cplx> pc(p.begin(), p.end());
  const auto u = eig_apply(Hd, cplx(0.0, 0.0), pc);
  double e1 = 0.0, e2 = 0.0;
  for (std::size_t i = 0; i < Hd.N; ++i) {
    e1 = std::max(e1, std::abs(pp[i] - p[i]));
    e2 = std::max(e2, std::abs(u[i] - p[i]));
  }
  EXPECT_LT(e1, 1e-10);
  EXPECT_LT(e2, 1e-10);
}

TEST(Oracle, PropagatorPreservesNorm) {
  const auto &Hd = cache().oracle(sech2());
  const auto f = pc_apply(Hd, unit_gaussian(Hd.x, 2.0, -1.0));
  std::vector<cplx> fc(f.begin(), f.end());
  const auto u = eig_apply(Hd, cplx(7.5, 0.0), fc);
  double n0 = 0.0, n1 = 0.0;
  for (std::size_t i = 0; i < Hd.N; ++i) {
    n0 += f[i] * f[i];
    n1 += std::norm(u[i]);
  }
  EXPECT_NEAR(n1 / n0, 1.0, 1e-10);
}

TEST(Oracle, KernelMatchesDenseMatrix) {
  const auto &Hd = cache().oracle(gaussian_well());
  const std::vector<double> w{-3.0, 0.0, 4.0};
  std::vector<std::size_t> idx;
  for (double v : w)
    idx.push_back(Hd.node(v));
  const cplx tau(5.0, -1.0);
  const auto K = oracle_kernel(Hd, tau, w, w);
  const auto M = eig_propagator(Hd, tau, idx, idx);
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j)
      EXPECT_LT(std::abs(K(i, j) * Hd.h - M[i * w.size() + j]), 1e-12);
}

TEST(Oracle, FreeKernelRegularized) {
  const auto &Hd = cache().oracle(free_potential());
  const std::vector<double> w{-10.0, -2.0, 0.0, 5.0, 10.0};
  const cplx tau(5.0, -1.0);
  const auto K = oracle_kernel(Hd, tau, w, w);
  double e = 0.0, s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j) {
      const cplx ref = free_kernel(w[i], w[j], tau);
      e = std::max(e, std::abs(K(i, j) - ref));
      s = std::max(s, std::abs(ref));
    }
  EXPECT_LT(e / s, 1e-3);
}

TEST(Oracle, KleinGordonBlocksAndEnergy) {
  const auto &Hd = cache().oracle(gaussian_well());
  const double m = 1.0;
  const auto u0 = pc_apply(Hd, unit_gaussian(Hd.x));
  const std::vector<double> u1(Hd.N, 0.0);
  const double E0 = kg_energy(Hd, m, u0, u1);
  for (double t : {1.0, 10.0, 100.0}) {
    const auto [u, ud] = kg_eig_apply(Hd, m, t, u0, u1);
    EXPECT_LT(std::abs(kg_energy(Hd, m, u, ud) - E0) / E0, 1e-8) << "t = " << t;
  }
}

TEST(Oracle, KleinGordonDenseBlocksAgree) {
  const auto Hd = discretize(gaussian_well(), 20.0, 200);
  const double m = 1.0, t = 3.0;
  const auto B = kg_eig_propagator(Hd, m, t);
  const auto u0 = pc_apply(Hd, unit_gaussian(Hd.x));
  const auto u1 = pc_apply(Hd, unit_gaussian(Hd.x, 0.7, 1.0));
  const auto [u, ud] = kg_eig_apply(Hd, m, t, u0, u1);
  double e = 0.0;
  for (std::size_t i = 0; i < Hd.N; ++i) {
    double a = 0.0, b = 0.0;
    for (std::size_t j = 0; j < Hd.N; ++j) {
      a += B.b11[i * Hd.N + j] * u0[j] + B.b12[i * Hd.N + j] * u1[j];
      b += B.b21[i * Hd.N + j] * u0[j] + B.b22[i * Hd.N + j] * u1[j];
    }
    e = std::max({e, std::abs(a - u[i]), std::abs(b - ud[i])});
  }
  EXPECT_LT(e, 1e-10);
}

TEST(Oracle, SplitStepAgreesForShortTimes) {
  const auto V = gaussian_well();
  const auto x = uniform_nodes(-40.0, 40.0 - 80.0 / 1024.0, 1024);
  std::vector<cplx> psi0(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    psi0[i] = std::exp(-x[i] * x[i] / 2.0);
  const auto a = split_step_evolve(V, x, psi0, 0.5, 400);
  const auto b = split_step_evolve(V, x, psi0, 0.5, 800);
  double e = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    e = std::max(e, std::abs(a[i] - b[i]));
  EXPECT_LT(e, 1e-4);
}
