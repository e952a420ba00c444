#include "disperse1d/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "disperse1d/errors.hpp"
#include "disperse1d/parallel.hpp"

namespace disperse1d {

const char *to_string(ResonanceClass c) {
  switch (c) {
  case ResonanceClass::NonResonant:
    return "NonResonant";
  case ResonanceClass::ResonantA:
    return "ResonantA";
  case ResonanceClass::ResonantB:
    return "ResonantB";
  }
  return "?";
}

cplx extrapolate_to_zero(const std::vector<cplx> &v, std::size_t z) {
  if (z < 4 || z + 4 >= v.size())
    throw Error(ErrorKind::InvalidArgument, "extrapolation needs 4 nodes on each side");
  // degree-7 interpolant through k = +-1..+-4 (units of dk) evaluated at 0
  static constexpr double w[4] = {4.0 / 5.0, -2.0 / 5.0, 4.0 / 35.0, -1.0 / 70.0};
  cplx s = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    s += w[i] * (v[z + 1 + i] + v[z - 1 - i]);
  return s;
}

ScatteringMatrix scattering_matrix(const Wronskians &w, const KGrid &kg) {
  ScatteringMatrix S;
  const std::size_t n = kg.n, z = kg.zero();
  if (w.W.size() != n || w.Wp.size() != n || w.Wm.size() != n)
    throw Error(ErrorKind::InvalidArgument, "Wronskians do not match the k-grid");
  S.T.resize(n);
  S.Rp.resize(n);
  S.Rm.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (j == z)
      continue;
    const double k = kg.k(j);
    if (std::abs(w.W[j]) < 1e-12 * std::abs(2.0 * k))
      throw Error(ErrorKind::InteriorZero,
                  "W(k) vanishes at k = " + std::to_string(k));
    S.T[j] = 2.0 * I * k / w.W[j];
    S.Rp[j] = -w.Wp[j] / w.W[j];
    S.Rm[j] = w.Wm[j] / w.W[j];
  }
  S.T[z] = extrapolate_to_zero(S.T, z);
  S.Rp[z] = extrapolate_to_zero(S.Rp, z);
  S.Rm[z] = extrapolate_to_zero(S.Rm, z);
  return S;
}

ResonanceReport classify_resonance(const std::vector<cplx> &W, const JostField &F, double tau) {
  ResonanceReport r;
  const std::size_t z = F.kg.zero(), i0 = F.node(0.0);
  r.tau = tau;
  r.W0 = std::abs(W[z]);
  r.s = std::max(1.0, std::abs((W[z + 1] - W[z - 1]) / (2.0 * F.kg.dk())));
  r.h0 = std::abs(F.hp[F.at(i0, z)] * F.hm[F.at(i0, z)]);
  r.s_prime = (1.0 + std::abs(F.hp[F.at(i0, z + 1)])) * (1.0 + std::abs(F.hm[F.at(i0, z + 1)]));
  auto lg = [](double a, double b) { return std::log10(std::max(a, 1e-300) / b); };
  const double m1 = lg(r.W0, tau * r.s);
  if (m1 >= 0.0) {
    r.cls = ResonanceClass::NonResonant;
    r.margin = m1;
    r.borderline = m1 < 1.0;
    return r;
  }
  const double m2 = lg(r.h0, tau * r.s_prime);
  r.cls = m2 >= 0.0 ? ResonanceClass::ResonantA : ResonanceClass::ResonantB;
  r.margin = std::abs(m1) < std::abs(m2) ? m1 : m2;
  r.borderline = std::abs(m1) < 1.0 || std::abs(m2) < 1.0;
  return r;
}

double wronskian_imag_axis(const Potential &V, double kappa, const JostOptions &opt) {
  const std::vector<double> x0{0.0};
  const cplx k(0.0, kappa);
  const auto p = solve_h(V, k, +1, x0, opt);
  const auto m = solve_h(V, k, -1, x0, opt);
  const cplx W = 2.0 * I * k * p.h[0] * m.h[0] + m.h[0] * p.dh[0] - m.dh[0] * p.h[0];
  return W.real();
}

namespace {

// Simpson on [0, L] (n even intervals) of g(x)^2 where g is sampled on the nodes
double simpson_sq(const std::vector<double> &g, double h) {
  const std::size_t n = g.size() - 1;
  double s = g[0] * g[0] + g[n] * g[n];
  for (std::size_t i = 1; i < n; ++i)
    s += (i % 2 ? 4.0 : 2.0) * g[i] * g[i];
  return s * h / 3.0;
}

// f_+-(x, i kappa) = e^{-+kappa x} h_+-(x, i kappa)
std::vector<double> f_imag(const Potential &V, double kappa, int sign,
                           const std::vector<double> &x, const JostOptions &opt,
                           std::vector<double> *df = nullptr) {
  const auto s = solve_h(V, cplx(0.0, kappa), sign, x, opt);
  std::vector<double> f(x.size());
  if (df)
    df->resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = std::exp(-sign * kappa * x[i]);
    f[i] = e * s.h[i].real();
    if (df)
      (*df)[i] = e * (s.dh[i].real() - sign * kappa * s.h[i].real());
  }
  return f;
}

BoundState make_bound_state(const Potential &V, double kappa, const std::vector<double> &x,
                            const JostOptions &opt) {
  // each Jost solution is only used on its own decaying half-line; they are
  // glued at 0 with f_- = c f_+
  std::vector<double> dp, dm;
  const auto fp0 = f_imag(V, kappa, +1, {0.0}, opt, &dp);
  const auto fm0 = f_imag(V, kappa, -1, {0.0}, opt, &dm);
  const double c = std::abs(fp0[0]) * kappa >= std::abs(dp[0]) ? fm0[0] / fp0[0] : dm[0] / dp[0];

  const double L = std::max(V.cutoff(), 1e-3);
  const std::size_t n = 4000;
  std::vector<double> right(n + 1), left(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    right[i] = L * double(i) / double(n);
    left[i] = -L + L * double(i) / double(n);
  }
  const auto gp = f_imag(V, kappa, +1, right, opt);
  const auto gm = f_imag(V, kappa, -1, left, opt);
  const double h = L / double(n);
  const double tail = std::exp(-2.0 * kappa * L) / (2.0 * kappa);
  const double int_plus_right = simpson_sq(gp, h) + tail;
  const double int_minus_left = simpson_sq(gm, h) + tail;

  BoundState b;
  b.kappa = kappa;
  b.norm_sq_plus = int_plus_right + int_minus_left / (c * c);
  b.norm_sq_minus = c * c * b.norm_sq_plus;

  std::vector<double> xneg, xpos;
  for (double xv : x)
    (xv < 0.0 ? xneg : xpos).push_back(xv);
  const auto fneg = xneg.empty() ? std::vector<double>{} : f_imag(V, kappa, -1, xneg, opt);
  const auto fpos = xpos.empty() ? std::vector<double>{} : f_imag(V, kappa, +1, xpos, opt);
  const double nrm = std::sqrt(b.norm_sq_plus);
  b.phi.reserve(x.size());
  for (double v : fneg)
    b.phi.push_back(v / c / nrm);
  for (double v : fpos)
    b.phi.push_back(v / nrm);
  return b;
}

} // namespace

std::vector<BoundState> bound_states(const Potential &V, const std::vector<double> &x,
                                     std::vector<std::string> *warnings,
                                     const JostOptions &opt) {
  std::vector<BoundState> out;
  if (V.family() == Family::zero || V.min_value() >= 0.0)
    return out; // no negative spectrum for V >= 0
  const double kmax = 1.0 + std::sqrt(std::max(0.0, -V.min_value()));
  const double step = 1e-3;
  const std::size_t ncell = std::size_t(std::ceil(kmax / step));
  std::vector<double> w(ncell + 1);
  parallel_for(ncell + 1, [&](std::size_t i) {
    w[i] = wronskian_imag_axis(V, double(i + 1) * step, opt);
  });
  auto kap = [&](std::size_t i) { return double(i + 1) * step; };

  std::vector<double> roots;
  for (std::size_t i = 0; i < ncell; ++i) {
    if (w[i] == 0.0) {
      roots.push_back(kap(i));
      continue;
    }
    if (w[i] * w[i + 1] < 0.0) {
      auto f = [&](double k) { return wronskian_imag_axis(V, k, opt); };
      std::uintmax_t iters = 100;
      auto tol = [](double a, double b) { return std::abs(b - a) < 1e-12; };
      const auto r = boost::math::tools::toms748_solve(f, kap(i), kap(i + 1), w[i], w[i + 1],
                                                       tol, iters);
      roots.push_back(0.5 * (r.first + r.second));
    } else if (warnings && i > 0 && std::abs(w[i]) < std::abs(w[i - 1]) &&
               std::abs(w[i]) < std::abs(w[i + 1]) &&
               std::abs(w[i]) < 1e-3 * (std::abs(w[i - 1]) + std::abs(w[i + 1]))) {
      std::ostringstream os;
      os << "MissedRootSuspected: |W(i kappa)| has a near-zero minimum without a sign change at "
            "kappa = "
         << kap(i);
      warnings->push_back(os.str());
    }
  }
  // deepest state first
  std::sort(roots.rbegin(), roots.rend());
  for (double k : roots)
    out.push_back(make_bound_state(V, k, x, opt));

  if (warnings) {
    const double cap = 1.0 + moment_norm(V, 1);
    if (double(out.size()) > cap)
      warnings->push_back("bound-state count exceeds the 1 + ||V||_{L^1_1} sanity cap");
  }
  return out;
}

ScatteringData scatter(const Potential &V, const JostField &F, const JostOptions &opt) {
  ScatteringData sd;
  sd.kg = F.kg;
  sd.x = F.x;
  const auto w = wronskians(F);
  const auto S = scattering_matrix(w, F.kg);
  sd.W = w.W;
  sd.Wp = w.Wp;
  sd.Wm = w.Wm;
  sd.T = S.T;
  sd.Rp = S.Rp;
  sd.Rm = S.Rm;
  sd.resonance = classify_resonance(sd.W, F);
  if (sd.resonance.borderline)
    sd.warnings.push_back("resonance classification is borderline (margin " +
                          std::to_string(sd.resonance.margin) + " decades)");
  sd.bound = bound_states(V, F.x, &sd.warnings, opt);
  return sd;
}

std::vector<double> trapezoid_weights(const std::vector<double> &x) {
  std::vector<double> w(x.size(), 0.0);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double h = 0.5 * (x[i + 1] - x[i]);
    w[i] += h;
    w[i + 1] += h;
  }
  return w;
}

PcProjector::PcProjector(const std::vector<double> &x, const std::vector<std::vector<double>> &phis)
    : x_(x), w_(trapezoid_weights(x)) {
  for (const auto &p : phis) {
    if (p.size() != x.size())
      throw Error(ErrorKind::InvalidArgument, "eigenfunction does not match the x-grid");
    std::vector<double> v = p;
    for (const auto &q : phis_) {
      const double d = inner(q, v);
      for (std::size_t i = 0; i < v.size(); ++i)
        v[i] -= d * q[i];
    }
    const double n = std::sqrt(inner(v, v));
    if (n > 0.0) {
      for (double &e : v)
        e /= n;
      phis_.push_back(std::move(v));
    }
  }
}

double PcProjector::inner(const std::vector<double> &a, const std::vector<double> &b) const {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += w_[i] * a[i] * b[i];
  return s;
}

std::vector<cplx> PcProjector::apply(const std::vector<cplx> &f) const {
  std::vector<cplx> out = f;
  for (const auto &q : phis_) {
    cplx d = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
      d += w_[i] * q[i] * f[i];
    for (std::size_t i = 0; i < f.size(); ++i)
      out[i] -= d * q[i];
  }
  return out;
}

std::vector<double> PcProjector::apply(const std::vector<double> &f) const {
  std::vector<double> out = f;
  for (const auto &q : phis_) {
    const double d = inner(q, f);
    for (std::size_t i = 0; i < f.size(); ++i)
      out[i] -= d * q[i];
  }
  return out;
}

PcProjector pc_projector(const std::vector<BoundState> &bound, const std::vector<double> &x) {
  std::vector<std::vector<double>> phis;
  for (const auto &b : bound)
    phis.push_back(b.phi);
  return PcProjector(x, phis);
}

IdentityResiduals verify_identities(const ScatteringData &sd, const JostField &F, double kmin,
                                    double kmax) {
  IdentityResiduals r;
  const double X = F.x.back();
  const double L = F.cutoff > 0.0 ? std::min(F.cutoff, X) : X;
  std::vector<std::size_t> probes;
  for (double f : {-0.5, -0.25, 0.0, 0.25, 0.5}) {
    const std::size_t i = nearest_node(F.x, f * L);
    probes.push_back(i);
    r.sample_x.push_back(F.x[i]);
  }
  for (std::size_t j = 0; j < F.nk(); ++j) {
    const double k = F.kg.k(j), ak = std::abs(k);
    const std::size_t m = F.kg.mirror(j);
    r.T_bound = std::max(r.T_bound, std::abs(sd.T[j]) - 1.0);
    r.conjugation = std::max({r.conjugation, std::abs(sd.T[m] - std::conj(sd.T[j])),
                              std::abs(sd.Rp[m] - std::conj(sd.Rp[j])),
                              std::abs(sd.Rm[m] - std::conj(sd.Rm[j]))});
    if (ak < kmin || ak > kmax)
      continue;
    const double t2 = std::norm(sd.T[j]);
    r.unitarity = std::max({r.unitarity, std::abs(t2 + std::norm(sd.Rp[j]) - 1.0),
                            std::abs(t2 + std::norm(sd.Rm[j]) - 1.0)});
    r.consistency = std::max(
        r.consistency, std::abs(sd.T[j] * std::conj(sd.Rm[j]) + std::conj(sd.T[j]) * sd.Rp[j]));
    for (std::size_t ix : probes) {
      // T f_+ = R_- f_- + f_-(-k) and T f_- = R_+ f_+ + f_+(-k)
      const cplx a = sd.T[j] * F.f(+1, ix, j) - sd.Rm[j] * F.f(-1, ix, j) - F.f(-1, ix, m);
      const cplx b = sd.T[j] * F.f(-1, ix, j) - sd.Rp[j] * F.f(+1, ix, j) - F.f(+1, ix, m);
      r.scattering_relation = std::max({r.scattering_relation, std::abs(a), std::abs(b)});
    }
  }
  return r;
}

} // namespace disperse1d
