#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <limits>

#include "disperse1d/errors.hpp"
#include "disperse1d/potential.hpp"
#include "shared.hpp"

using namespace d1test;

TEST(Potential, FamiliesEvaluate) {
  EXPECT_EQ(evaluate(free_potential(), 3.7), 0.0);
  EXPECT_NEAR(evaluate(sech2(), 0.0), -2.0, 1e-15);
  EXPECT_EQ(evaluate(square_well(), 0.5), -1.0);
  EXPECT_EQ(evaluate(square_well(), 1.5), 0.0);
  EXPECT_NEAR(evaluate(gaussian_well(), 1.0), -2.0 * std::exp(-1.0), 1e-15);
}

TEST(Potential, CutoffMakesTailsExactlyZero) {
  const auto V = gaussian_well();
  EXPECT_GT(V.cutoff(), 0.0);
  EXPECT_EQ(V(V.cutoff() + 1e-9), 0.0);
  EXPECT_EQ(V(-V.cutoff() - 1e-9), 0.0);
  EXPECT_EQ(square_well().cutoff(), 1.0);
}

TEST(Potential, MomentNorms) {
  EXPECT_EQ(moment_norm(free_potential(), 1), 0.0);
  const auto E = make_potential(Family::exp_decay, 1.0, 1.0);
  EXPECT_NEAR(moment_norm(E, 0), 2.0, 1e-8);
  EXPECT_NEAR(moment_norm(E, 1), 4.0, 1e-8);
  EXPECT_NEAR(moment_norm(square_well(), 0), 2.0, 1e-10);
}

TEST(Potential, TailMoments) {
  const auto z = tail_moments(free_potential(), 0.0, +1);
  EXPECT_EQ(z.eta, 0.0);
  EXPECT_EQ(z.gamma, 0.0);
  const auto e = tail_moments(make_potential(Family::exp_decay, 1.0, 1.0), 0.0, +1);
  EXPECT_NEAR(e.eta, 1.0, 1e-8);
  EXPECT_NEAR(e.gamma, 1.0, 1e-8);
  const auto s = tail_moments(square_well(), 2.0, +1);
  EXPECT_EQ(s.eta, 0.0);
  EXPECT_EQ(s.gamma, 0.0);
}

TEST(Potential, TabulatedPiecewiseLinear) {
  const std::string path = ::testing::TempDir() + "tab3.csv";
  {
    std::ofstream out(path);
    out << "x,V\n-1,0\n0,-1\n1,0\n";
  }
  const auto V = load_tabulated_csv(path);
  EXPECT_EQ(V.family(), Family::tabulated);
  EXPECT_NEAR(V(0.0), -1.0, 1e-15);
  EXPECT_NEAR(V(0.5), -0.5, 1e-15);
  EXPECT_EQ(V(2.0), 0.0);
  std::remove(path.c_str());
}

TEST(Potential, RejectsBadInput) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  try {
    make_potential(Family::sech2, nan);
    FAIL() << "expected NonFiniteParameter";
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonFiniteParameter);
  }
  PotentialSpec empty;
  empty.family = Family::tabulated;
  try {
    make_potential(empty);
    FAIL() << "expected EmptyTable";
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyTable);
  }
  EXPECT_THROW(family_from_string("harmonic"), Error);
}

TEST(Potential, HashIsStableAndDiscriminating) {
  EXPECT_EQ(sech2().hash(), sech2().hash());
  EXPECT_NE(sech2().hash(), make_potential(Family::sech2, 2.0).hash());
  EXPECT_NE(gaussian_well().hash(), make_potential(Family::gaussian_well, 1.0, 2.0).hash());
}
