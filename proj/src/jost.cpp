#include "disperse1d/jost.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <boost/numeric/odeint.hpp>

#include "disperse1d/errors.hpp"
#include "disperse1d/parallel.hpp"
#include "disperse1d/wiener.hpp"

namespace disperse1d {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 4>; // Re h, Im h, Re h', Im h'

// free (V = 0) continuation of h'' = c h' from (x0, h0, d0)
void free_continue(cplx c, double x0, cplx h0, cplx d0, double x, cplx &h, cplx &d) {
  const double s = x - x0;
  if (std::abs(c) * std::abs(s) < 1e-300 || c == cplx(0.0)) {
    h = h0 + d0 * s;
    d = d0;
    return;
  }
  const cplx e = std::exp(c * s);
  h = h0 + d0 * (e - 1.0) / c;
  d = d0 * e;
}

} // namespace

HSolution solve_h(const Potential &V, cplx k, int sign, const std::vector<double> &xs,
                  const JostOptions &opt) {
  if (!std::isfinite(k.real()) || !std::isfinite(k.imag()))
    throw Error(ErrorKind::InvalidArgument, "k must be finite");
  const bool on_axis = k.real() == 0.0 && k.imag() > 0.0;
  if (!(k.imag() == 0.0 || on_axis))
    throw Error(ErrorKind::InvalidArgument, "k must be real or on the positive imaginary axis");
  if (!std::is_sorted(xs.begin(), xs.end()))
    throw Error(ErrorKind::InvalidArgument, "x nodes must be sorted");
  sign = sign >= 0 ? 1 : -1;

  HSolution out;
  out.h.assign(xs.size(), cplx(1.0));
  out.dh.assign(xs.size(), cplx(0.0));
  const cplx c = -double(sign) * 2.0 * I * k;
  const double L = std::isfinite(V.cutoff()) ? V.cutoff() : 0.0;
  const double start = sign * L, stop = -sign * L;

  // targets strictly inside the integration range, in integration order
  std::vector<double> targets;
  for (double x : xs)
    if (std::abs(x) < L)
      targets.push_back(x);
  for (double b : V.breakpoints())
    if (std::abs(b) < L)
      targets.push_back(b);
  targets.push_back(stop);
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  if (sign > 0)
    std::reverse(targets.begin(), targets.end());

  std::vector<std::pair<double, std::pair<cplx, cplx>>> hits;
  hits.reserve(targets.size());
  if (L > 0.0) {
    auto rhs = [&](const State &s, State &ds, double x) {
      const double v = V(x);
      const cplx h(s[0], s[1]), d(s[2], s[3]);
      const cplx dd = v * h + c * d;
      ds[0] = s[2];
      ds[1] = s[3];
      ds[2] = dd.real();
      ds[3] = dd.imag();
    };
    auto stepper =
        odeint::make_controlled(opt.atol, opt.rtol, odeint::runge_kutta_fehlberg78<State>());
    State s{1.0, 0.0, 0.0, 0.0};
    double x = start;
    // initial step: resolve the oscillation scale 1/|2k| and the potential scale
    double dt = -sign * std::min(0.05, 0.5 / (1.0 + std::abs(c)));
    for (double target : targets) {
      int failures = 0;
      while (x != target) {
        double step = dt;
        bool clip = false;
        if (std::abs(target - x) <= std::abs(step)) {
          step = target - x;
          clip = true;
        }
        double xx = x;
        const auto res = stepper.try_step(rhs, s, xx, step);
        if (res == odeint::success) {
          x = clip ? target : xx;
          if (!clip)
            dt = step;
          failures = 0;
          for (double v : s)
            if (!std::isfinite(v))
              throw Error(ErrorKind::StepFailure,
                          "overflow in Jost integration at k = (" + std::to_string(k.real()) +
                              "," + std::to_string(k.imag()) + ")");
        } else {
          dt = step;
          if (++failures > 200 || std::abs(dt) < 1e-13 * (1.0 + std::abs(x)))
            throw Error(ErrorKind::StepFailure,
                        "step size underflow in Jost integration at k = (" +
                            std::to_string(k.real()) + "," + std::to_string(k.imag()) + ")");
        }
      }
      hits.push_back({target, {cplx(s[0], s[1]), cplx(s[2], s[3])}});
    }
  }

  // assemble: launch side is exactly (1, 0); far side by free continuation
  const cplx hs = hits.empty() ? cplx(1.0) : hits.back().second.first;
  const cplx ds = hits.empty() ? cplx(0.0) : hits.back().second.second;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    if (sign * x >= L) {
      out.h[i] = 1.0;
      out.dh[i] = 0.0;
    } else if (sign * x <= -L) {
      free_continue(c, stop, hs, ds, x, out.h[i], out.dh[i]);
    } else {
      auto it = std::find_if(hits.begin(), hits.end(),
                             [x](const auto &p) { return p.first == x; });
      out.h[i] = it->second.first;
      out.dh[i] = it->second.second;
    }
  }
  return out;
}

cplx JostField::f(int sign, std::size_t ix, std::size_t jk) const {
  return std::exp(double(sign) * I * kg.k(jk) * x[ix]) * h(sign, ix, jk);
}

cplx JostField::df(int sign, std::size_t ix, std::size_t jk) const {
  const double k = kg.k(jk);
  return std::exp(double(sign) * I * k * x[ix]) *
         (dh(sign, ix, jk) + double(sign) * I * k * h(sign, ix, jk));
}

std::size_t JostField::node(double xv) const {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::abs(x[i] - xv) <= 1e-12 * (1.0 + std::abs(xv)))
      return i;
  throw Error(ErrorKind::InvalidArgument, "x = " + std::to_string(xv) + " is not a grid node");
}

double JostField::conjugation_residual() const {
  double r = 0.0;
  for (std::size_t i = 0; i < nx(); ++i)
    for (std::size_t j = 0; j < nk(); ++j) {
      const std::size_t m = kg.mirror(j);
      for (const auto *a : {&hp, &hm, &dhp, &dhm})
        r = std::max(r, std::abs((*a)[at(i, j)] - std::conj((*a)[at(i, m)])));
    }
  return r;
}

double JostField::boundary_residual() const {
  double r = 0.0;
  for (std::size_t i = 0; i < nx(); ++i)
    for (std::size_t j = 0; j < nk(); ++j) {
      if (x[i] >= cutoff)
        r = std::max(r, std::abs(hp[at(i, j)] - 1.0));
      if (x[i] <= -cutoff)
        r = std::max(r, std::abs(hm[at(i, j)] - 1.0));
    }
  return r;
}

JostField jost_field(const Potential &V, const KGrid &kg, const std::vector<double> &xs,
                     const JostOptions &opt) {
  if (!std::is_sorted(xs.begin(), xs.end()) ||
      std::find(xs.begin(), xs.end(), 0.0) == xs.end())
    throw Error(ErrorKind::InvalidArgument, "x-grid must be sorted and contain 0");
  JostField F;
  F.x = xs;
  F.kg = kg;
  F.cutoff = V.cutoff();
  const std::size_t n = xs.size() * kg.n;
  F.hp.resize(n);
  F.hm.resize(n);
  F.dhp.resize(n);
  F.dhm.resize(n);
  parallel_for(kg.n, [&](std::size_t j) {
    for (int sign : {+1, -1}) {
      const auto sol = solve_h(V, cplx(kg.k(j), 0.0), sign, xs, opt);
      auto &H = sign > 0 ? F.hp : F.hm;
      auto &D = sign > 0 ? F.dhp : F.dhm;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        H[F.at(i, j)] = sol.h[i];
        D[F.at(i, j)] = sol.dh[i];
      }
    }
  });
  return F;
}

std::vector<double> standard_window(double X, std::size_t n) {
  return uniform_nodes(-X, X, n);
}

void wronskians_at(const JostField &F, std::size_t ix, std::vector<cplx> &W,
                   std::vector<cplx> &Wp, std::vector<cplx> &Wm) {
  const std::size_t nk = F.nk();
  W.resize(nk);
  Wp.resize(nk);
  Wm.resize(nk);
  const double x = F.x[ix];
  for (std::size_t j = 0; j < nk; ++j) {
    const double k = F.kg.k(j);
    const std::size_t m = F.kg.mirror(j);
    const cplx hp = F.hp[F.at(ix, j)], hm = F.hm[F.at(ix, j)];
    const cplx dp = F.dhp[F.at(ix, j)], dm = F.dhm[F.at(ix, j)];
    const cplx hpm = F.hp[F.at(ix, m)], hmm = F.hm[F.at(ix, m)];
    const cplx dpm = F.dhp[F.at(ix, m)], dmm = F.dhm[F.at(ix, m)];
    W[j] = 2.0 * I * k * hp * hm + hm * dp - dm * hp;
    Wp[j] = std::exp(-2.0 * I * k * x) * (hm * dpm - dm * hpm);
    Wm[j] = std::exp(2.0 * I * k * x) * (hp * dmm - dp * hmm);
  }
}

Wronskians wronskians(const JostField &F, double tol) {
  Wronskians out;
  const std::size_t i0 = F.node(0.0);
  wronskians_at(F, i0, out.W, out.Wp, out.Wm);

  // x-independence at the nodes nearest -L/2 and L/2 (clamped to the grid)
  const double L = std::isfinite(F.cutoff) ? F.cutoff : F.x.back();
  std::vector<std::size_t> probes{nearest_node(F.x, -0.5 * L), nearest_node(F.x, 0.5 * L)};
  std::vector<cplx> W, Wp, Wm;
  for (std::size_t ip : probes) {
    if (ip == i0)
      continue;
    wronskians_at(F, ip, W, Wp, Wm);
    for (std::size_t j = 0; j < F.nk(); ++j) {
      const double k = F.kg.k(j);
      const cplx hp = F.hp[F.at(i0, j)], hm = F.hm[F.at(i0, j)];
      const cplx dp = F.dhp[F.at(i0, j)], dm = F.dhm[F.at(i0, j)];
      // natural magnitude of the bilinear forms (stays O(1) where W(0) = 0)
      const double scale = std::max(
          (std::abs(hp) + std::abs(dp)) * (std::abs(hm) + std::abs(dm)) * (1.0 + 2.0 * std::abs(k)),
          1e-14);
      const double d = std::max({std::abs(W[j] - out.W[j]), std::abs(Wp[j] - out.Wp[j]),
                                 std::abs(Wm[j] - out.Wm[j])});
      out.drift = std::max(out.drift, d / scale);
    }
  }
  if (out.drift > tol)
    throw Error(ErrorKind::WronskianDrift,
                "Wronskian x-dependence " + std::to_string(out.drift) + " exceeds tolerance");
  return out;
}

BKernel b_kernel(const JostField &F, std::size_t ix, int sign, bool derivative,
                 double imag_tol) {
  sign = sign >= 0 ? 1 : -1;
  std::vector<cplx> g(F.nk());
  for (std::size_t j = 0; j < F.nk(); ++j)
    g[j] = derivative ? F.dh(sign, ix, j) : F.h(sign, ix, j) - 1.0;
  ProfileOptions po;
  po.zero_constant = true;
  po.crop = false;
  po.check_limit = false;
  const WienerProfile prof = to_profile(g, F.kg, po);

  BKernel out;
  double smax = 0.0, imax = 0.0, outside = 0.0;
  for (std::size_t m = 0; m < prof.size(); ++m) {
    const double p = prof.p(m);
    const cplx v = 2.0 * prof.hat[m];
    // B_+(x, y) = 2 ghat(2y), B_-(x, y) = 2 ghat(-2y)
    const double y = sign > 0 ? 0.5 * p : -0.5 * p;
    if (p >= 0.0) {
      out.y.push_back(y);
      out.B.push_back(v.real());
      smax = std::max(smax, std::abs(v.real()));
      imax = std::max(imax, std::abs(v.imag()));
    } else {
      outside = std::max(outside, std::abs(v));
    }
  }
  // p = 0 carries the midpoint of the tail jump; use the one-sided limit p -> 0+
  if (!out.B.empty())
    out.B[0] = (2.0 * (prof.at(0.0) - 0.5 * I * prof.tail_a)).real();
  out.imag_residual = imax / std::max(1.0, smax);
  out.outside_residual = outside / std::max(1.0, smax);
  if (out.imag_residual > imag_tol)
    throw Error(ErrorKind::NonRealKernel,
                "imaginary residual " + std::to_string(out.imag_residual) + " of B kernel");
  return out;
}

namespace {
constexpr char kMagic[8] = {'D', '1', 'D', 'J', 'O', 'S', 'T', '1'};
}

void save_jost_field(const JostField &F, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorKind::IoFailure, "cannot write " + path);
  const std::uint64_t nx = F.nx(), nk = F.nk();
  out.write(kMagic, 8);
  out.write(reinterpret_cast<const char *>(&nx), 8);
  out.write(reinterpret_cast<const char *>(&nk), 8);
  out.write(reinterpret_cast<const char *>(&F.kg.K), 8);
  out.write(reinterpret_cast<const char *>(&F.cutoff), 8);
  out.write(reinterpret_cast<const char *>(F.x.data()), std::streamsize(8 * nx));
  for (const auto *a : {&F.hp, &F.hm, &F.dhp, &F.dhm})
    out.write(reinterpret_cast<const char *>(a->data()), std::streamsize(16 * nx * nk));
  if (!out)
    throw Error(ErrorKind::IoFailure, "short write to " + path);
}

JostField load_jost_field(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorKind::IoFailure, "cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0)
    throw Error(ErrorKind::ParseError, path + ": not a Jost field dump");
  std::uint64_t nx = 0, nk = 0;
  JostField F;
  in.read(reinterpret_cast<char *>(&nx), 8);
  in.read(reinterpret_cast<char *>(&nk), 8);
  in.read(reinterpret_cast<char *>(&F.kg.K), 8);
  in.read(reinterpret_cast<char *>(&F.cutoff), 8);
  if (!in || nx == 0 || nx > (1u << 20) || nk < 3 || nk > (1u << 24))
    throw Error(ErrorKind::ParseError, path + ": bad header");
  F.kg = make_kgrid(F.kg.K, std::size_t(nk));
  F.x.resize(nx);
  in.read(reinterpret_cast<char *>(F.x.data()), std::streamsize(8 * nx));
  for (auto *a : {&F.hp, &F.hm, &F.dhp, &F.dhm}) {
    a->resize(nx * nk);
    in.read(reinterpret_cast<char *>(a->data()), std::streamsize(16 * nx * nk));
  }
  if (!in)
    throw Error(ErrorKind::ParseError, path + ": truncated");
  return F;
}

} // namespace disperse1d
