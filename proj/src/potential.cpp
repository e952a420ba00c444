#include "disperse1d/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "disperse1d/errors.hpp"

namespace disperse1d {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double table_eval(const std::vector<double> &xs, const std::vector<double> &vs,
                  double x) {
  if (x < xs.front() || x > xs.back())
    return 0.0;
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  if (it == xs.end())
    return vs.back();
  const std::size_t i = std::size_t(it - xs.begin());
  const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return (1.0 - t) * vs[i - 1] + t * vs[i];
}

// Integral of w(y)|V(y)| over [a, b] (either may be infinite), split at the
// breakpoints so that every piece is smooth.
double integrate_abs(const Potential &V, double a, double b,
                     const std::function<double(double)> &w) {
  using boost::math::quadrature::gauss_kronrod;
  if (!(b > a))
    return 0.0;
  std::vector<double> cuts{a};
  for (double p : V.breakpoints())
    if (p > a && p < b)
      cuts.push_back(p);
  if (0.0 > a && 0.0 < b)
    cuts.push_back(0.0);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  auto f = [&](double y) { return w(y) * std::abs(V.raw(y)); };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i]))
      continue;
    if (V.family() == Family::tabulated) {
      // piecewise linear |V|: GK on each table cell is exact up to sign changes
      total += gauss_kronrod<double, 61>::integrate(f, cuts[i], cuts[i + 1], 8,
                                                    1e-14);
    } else {
      total += gauss_kronrod<double, 61>::integrate(f, cuts[i], cuts[i + 1],
                                                    15, 1e-13);
    }
  }
  return total;
}

} // namespace

const char *to_string(Family f) {
  switch (f) {
  case Family::zero:
    return "zero";
  case Family::gaussian_well:
    return "gaussian_well";
  case Family::sech2:
    return "sech2";
  case Family::square_well:
    return "square_well";
  case Family::exp_decay:
    return "exp_decay";
  case Family::tabulated:
    return "tabulated";
  }
  return "?";
}

Family family_from_string(const std::string &name) {
  for (Family f : {Family::zero, Family::gaussian_well, Family::sech2,
                   Family::square_well, Family::exp_decay, Family::tabulated})
    if (name == to_string(f))
      return f;
  throw Error(ErrorKind::InvalidArgument, "unknown potential family '" + name + "'");
}

double Potential::raw(double x) const {
  const auto &s = spec_;
  switch (s.family) {
  case Family::zero:
    return 0.0;
  case Family::gaussian_well: {
    const double u = x / s.b;
    return -s.a * std::exp(-u * u);
  }
  case Family::sech2: {
    const double c = 1.0 / std::cosh(x);
    return -s.a * (s.a + 1.0) * c * c;
  }
  case Family::square_well:
    return std::abs(x) <= s.b ? -s.a : 0.0;
  case Family::exp_decay:
    return s.a * std::exp(-std::abs(x) / s.b);
  case Family::tabulated:
    return table_eval(s.xs, s.vs, x);
  }
  return 0.0;
}

double Potential::operator()(double x) const {
  return std::abs(x) > cutoff_ ? 0.0 : raw(x);
}

bool Potential::is_even() const { return spec_.family != Family::tabulated; }

std::string Potential::name() const {
  std::ostringstream os;
  os << to_string(spec_.family);
  switch (spec_.family) {
  case Family::zero:
    break;
  case Family::sech2:
    os << '(' << spec_.a << ')';
    break;
  case Family::tabulated:
    os << '(' << spec_.xs.size() << " nodes)";
    break;
  default:
    os << '(' << spec_.a << ',' << spec_.b << ')';
  }
  return os.str();
}

std::uint64_t Potential::hash() const {
  // FNV-1a over the defining bytes
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void *p, std::size_t n) {
    auto b = static_cast<const unsigned char *>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ull;
    }
  };
  const int fam = int(spec_.family);
  mix(&fam, sizeof fam);
  mix(&spec_.a, sizeof(double));
  mix(&spec_.b, sizeof(double));
  if (!spec_.xs.empty()) {
    mix(spec_.xs.data(), spec_.xs.size() * sizeof(double));
    mix(spec_.vs.data(), spec_.vs.size() * sizeof(double));
  }
  return h;
}

Potential make_potential(Family family, double a, double b) {
  PotentialSpec s;
  s.family = family;
  s.a = a;
  s.b = b;
  return make_potential(s);
}

Potential make_potential(const PotentialSpec &spec) {
  Potential V;
  V.spec_ = spec;
  auto &s = V.spec_;
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(s.a) || !finite(s.b))
    throw Error(ErrorKind::NonFiniteParameter, "potential parameters must be finite");

  switch (s.family) {
  case Family::zero:
    s.a = s.b = 0.0;
    V.cutoff_ = 0.0;
    V.vmin_ = 0.0;
    return V;
  case Family::sech2:
    if (!(s.a > 0.0))
      throw Error(ErrorKind::NonFiniteParameter, "sech2 coupling must be > 0");
    s.b = 0.0;
    V.vmin_ = -s.a * (s.a + 1.0);
    break;
  case Family::gaussian_well:
    if (!(s.a > 0.0) || !(s.b > 0.0))
      throw Error(ErrorKind::NonFiniteParameter, "gaussian_well depth/width must be > 0");
    V.vmin_ = -s.a;
    break;
  case Family::square_well:
    if (!(s.a > 0.0) || !(s.b > 0.0))
      throw Error(ErrorKind::NonFiniteParameter, "square_well depth/halfwidth must be > 0");
    V.cutoff_ = s.b;
    V.breaks_ = {-s.b, s.b};
    V.vmin_ = -s.a;
    return V;
  case Family::exp_decay:
    if (!(s.b > 0.0))
      throw Error(ErrorKind::NonFiniteParameter, "exp_decay scale must be > 0");
    V.vmin_ = std::min(0.0, s.a);
    V.breaks_ = {0.0};
    break;
  case Family::tabulated: {
    if (s.xs.empty() || s.xs.size() != s.vs.size())
      throw Error(ErrorKind::EmptyTable, "tabulated potential needs matching non-empty x and V columns");
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      if (!finite(s.xs[i]) || !finite(s.vs[i]))
        throw Error(ErrorKind::NonFiniteParameter, "tabulated sample is not finite");
      if (i > 0 && !(s.xs[i] > s.xs[i - 1]))
        throw Error(ErrorKind::InvalidArgument, "tabulated x-grid must be strictly increasing");
    }
    V.cutoff_ = std::max(std::abs(s.xs.front()), std::abs(s.xs.back()));
    V.breaks_ = s.xs;
    V.vmin_ = std::min(0.0, *std::min_element(s.vs.begin(), s.vs.end()));
    return V;
  }
  }

  // analytic families with infinite support: bisect for the cutoff radius
  V.cutoff_ = inf;
  const double l1 = moment_norm(V, 0);
  const double thr = 1e-12 * (1.0 + l1);
  auto tails = [&](double L) {
    return tail_moments(V, L, +1).eta + tail_moments(V, -L, -1).eta;
  };
  double lo = 0.0, hi = 1.0;
  while (tails(hi) >= thr) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6)
      throw Error(ErrorKind::DivergentMoment, "potential tail does not decay");
  }
  for (int it = 0; it < 60 && hi - lo > 1e-6 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (tails(mid) < thr ? hi : lo) = mid;
  }
  V.cutoff_ = hi;
  if (!V.breaks_.empty()) {
    std::vector<double> kept;
    for (double p : V.breaks_)
      if (std::abs(p) <= hi)
        kept.push_back(p);
    V.breaks_ = kept;
  }
  return V;
}

double evaluate(const Potential &V, double x) { return V(x); }

double moment_norm(const Potential &V, int n) {
  if (n < 0 || n > 2)
    throw Error(ErrorKind::InvalidArgument, "moment order must be 0, 1 or 2");
  if (V.family() == Family::zero)
    return 0.0;
  auto w = [n](double y) { return std::pow(1.0 + std::abs(y), n); };
  if (V.family() == Family::tabulated || V.family() == Family::square_well) {
    const double L = V.cutoff();
    return integrate_abs(V, -L, L, w);
  }
  return integrate_abs(V, -inf, 0.0, w) + integrate_abs(V, 0.0, inf, w);
}

TailMoments tail_moments(const Potential &V, double x, int sign) {
  TailMoments out;
  if (V.family() == Family::zero)
    return out;
  const bool compact =
      V.family() == Family::tabulated || V.family() == Family::square_well;
  const double L = compact ? V.cutoff() : inf;
  double a, b;
  if (sign > 0) {
    a = x;
    b = L;
  } else {
    a = -L;
    b = x;
  }
  if (compact) {
    a = std::max(a, -L);
    b = std::min(b, L);
  }
  out.eta = integrate_abs(V, a, b, [](double) { return 1.0; });
  out.gamma = integrate_abs(V, a, b, [x](double y) { return std::abs(y - x); });
  return out;
}

Potential load_tabulated_csv(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::IoFailure, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorKind::EmptyTable, path + " is empty");
  line.erase(std::remove_if(line.begin(), line.end(), ::isspace), line.end());
  if (line != "x,V")
    throw Error(ErrorKind::ParseError, path + ": header must be 'x,V'");
  PotentialSpec s;
  s.family = Family::tabulated;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw Error(ErrorKind::ParseError,
                  path + ":" + std::to_string(lineno) + ": expected 'x,V'");
    try {
      s.xs.push_back(std::stod(line.substr(0, comma)));
      s.vs.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception &) {
      throw Error(ErrorKind::ParseError,
                  path + ":" + std::to_string(lineno) + ": not a number");
    }
  }
  return make_potential(s);
}

} // namespace disperse1d
