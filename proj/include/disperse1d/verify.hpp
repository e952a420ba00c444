#pragma once
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "disperse1d/config.hpp"
#include "disperse1d/decayfit.hpp"
#include "disperse1d/jost.hpp"
#include "disperse1d/oracle.hpp"
#include "disperse1d/potential.hpp"
#include "disperse1d/propagator.hpp"
#include "disperse1d/scattering.hpp"

namespace disperse1d {

//! One named pass/fail verdict with the measured quantity and its tolerance.
struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
  double seconds = 0.0;
};

//! Potential plus its Jost field, scattering data and Fresnel kernel on the
//! standard window, built once.
struct Fixture {
  Potential V;
  JostField field;
  ScatteringData sd;
  std::unique_ptr<FresnelKernel> fk;

  Fixture(const Potential &V, const GridConfig &g = {});
};

//! Every other node of `window` with the given stride (ends included).
std::vector<double> probe_window(const std::vector<double> &window, std::size_t stride);

//! max |A - B| / max |B| over the common (x, y) nodes.
double sup_rel_error(const KernelField &A, const KernelField &B);

//! Trend of l1(psi-hat(x,y,.)) against |x|+|y| over the 5x5 probe grid
//! {-20,-10,0,10,20}^2; passes below 0.01 per unit.
Check wiener_trend_check(const Fixture &fx);

//! Lazily built fixtures for the test potentials, shared across checks.
class FixtureCache {
public:
  explicit FixtureCache(GridConfig g = {}) : grid_(g) {}
  const Fixture &get(const Potential &V);
  const DiscreteHamiltonian &oracle(const Potential &V);

private:
  GridConfig grid_;
  std::map<std::uint64_t, std::unique_ptr<Fixture>> fx_;
  std::map<std::uint64_t, std::unique_ptr<DiscreteHamiltonian>> hd_;
};

//! The desk-scale acceptance suite, criteria 1..11 in order.
struct AcceptanceOptions {
  double X_ext = 200.0;
  double dx_ext = 1.0;
  double oracle_eps = 1.0;
  std::vector<double> oracle_times{1.0, 5.0, 30.0};
};
using CriterionFn = std::function<Check(FixtureCache &, const AcceptanceOptions &)>;
std::vector<std::pair<std::string, CriterionFn>> acceptance_criteria();

//! Invariant suite for the configured potential (CLI `verify`).
std::vector<Check> verify_potential(const RunConfig &c, const Potential &V);

//! Machine-readable verdict: schema_version, pass, checks[].
std::string checks_json(const std::vector<Check> &checks);

} // namespace disperse1d
