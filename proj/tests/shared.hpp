#pragma once
#include <cmath>

#include "disperse1d/verify.hpp"

namespace d1test {

using namespace disperse1d;

inline FixtureCache &cache() {
  static FixtureCache c;
  return c;
}

inline Potential sech2() { return make_potential(Family::sech2, 1.0); }
inline Potential gaussian_well() { return make_potential(Family::gaussian_well, 2.0, 1.0); }
inline Potential square_well() { return make_potential(Family::square_well, 1.0, 1.0); }
inline Potential free_potential() { return make_potential(Family::zero); }

inline double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

} // namespace d1test
