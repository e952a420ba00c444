#include "disperse1d/oscquad.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "disperse1d/errors.hpp"
#include "disperse1d/parallel.hpp"

namespace disperse1d {

Fresnel fresnel(double z) {
  if (!std::isfinite(z)) {
    if (std::isnan(z))
      return {z, z};
    return z > 0 ? Fresnel{0.5, 0.5} : Fresnel{-0.5, -0.5};
  }
  const double ax = std::abs(z);
  Fresnel r;
  if (ax <= 1.6) {
    // power series; terms alternate and shrink fast for |z| <= 1.6
    const double a = 0.5 * pi * ax * ax;
    double termc = ax, terms = ax * a / 3.0;
    double c = termc, s = terms;
    double fact_c = 1.0, fact_s = 1.0, apow_c = 1.0, apow_s = a;
    for (int n = 1; n < 40; ++n) {
      apow_c *= -a * a;
      fact_c *= double((2 * n - 1) * (2 * n));
      termc = ax * apow_c / (fact_c * double(4 * n + 1));
      apow_s *= -a * a;
      fact_s *= double((2 * n) * (2 * n + 1));
      terms = ax * apow_s / (fact_s * double(4 * n + 3));
      c += termc;
      s += terms;
      if (std::abs(termc) < 1e-17 * std::abs(c) && std::abs(terms) < 1e-17 * std::abs(s))
        break;
    }
    r = {c, s};
  } else {
    // continued fraction for the complementary error function (modified Lentz)
    const double pix2 = pi * ax * ax;
    cplx b(1.0, -pix2);
    cplx cc = 1e300, d = 1.0 / b, h = d;
    double n = -1.0;
    for (int k = 2; k < 200; ++k) {
      n += 2.0;
      const double an = -n * (n + 1.0);
      b += 4.0;
      d = 1.0 / (an * d + b);
      cc = b + an / cc;
      const cplx del = cc * d;
      h *= del;
      if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < 1e-16)
        break;
    }
    h *= cplx(ax, -ax);
    const cplx cs = cplx(0.5, 0.5) * (1.0 - cplx(std::cos(0.5 * pix2), std::sin(0.5 * pix2)) * h);
    r = {cs.real(), cs.imag()};
  }
  if (z < 0) {
    r.C = -r.C;
    r.S = -r.S;
  }
  return r;
}

namespace {

constexpr int kNodes = 12;

struct Legendre {
  std::array<double, kNodes> u{}, w{};
  std::array<std::array<double, kNodes>, kNodes> P{}; // P[j][i] = P_j(u_i)
  Legendre() {
    using G = boost::math::quadrature::gauss<double, kNodes>;
    const auto &ab = G::abscissa();
    const auto &wt = G::weights();
    // boost stores the non-negative half; 12 is even so there is no 0 node
    for (std::size_t i = 0; i < ab.size(); ++i) {
      u[kNodes / 2 + i] = ab[i];
      w[kNodes / 2 + i] = wt[i];
      u[kNodes / 2 - 1 - i] = -ab[i];
      w[kNodes / 2 - 1 - i] = wt[i];
    }
    for (int i = 0; i < kNodes; ++i) {
      double p0 = 1.0, p1 = u[i];
      P[0][i] = p0;
      P[1][i] = p1;
      for (int j = 2; j < kNodes; ++j) {
        const double p2 = ((2.0 * j - 1.0) * u[i] * p1 - (j - 1.0) * p0) / j;
        P[j][i] = p2;
        p0 = p1;
        p1 = p2;
      }
    }
  }
};

const Legendre &legendre() {
  static const Legendre L;
  return L;
}

// j_0..j_{n-1}(x) for x >= 0: upward recurrence where it is stable (x >= n),
// Miller's downward recurrence below, normalized on j_0 or j_1.
void sph_bessel_all(double x, std::array<double, kNodes> &j) {
  if (x < 1e-4) {
    double term = 1.0; // x^n / (2n+1)!!
    for (int n = 0; n < kNodes; ++n) {
      j[std::size_t(n)] = term * (1.0 - x * x / (2.0 * (2.0 * n + 3.0)));
      term *= x / (2.0 * n + 3.0);
    }
    return;
  }
  const double s = std::sin(x), c = std::cos(x);
  if (x >= double(kNodes)) {
    j[0] = s / x;
    j[1] = s / (x * x) - c / x;
    for (int n = 1; n + 1 < kNodes; ++n)
      j[std::size_t(n + 1)] = (2.0 * n + 1.0) / x * j[std::size_t(n)] - j[std::size_t(n - 1)];
    return;
  }
  const int top = kNodes + 40;
  double jp1 = 0.0, jn = 1e-200;
  std::array<double, kNodes> tmp{};
  for (int n = top; n > 0; --n) {
    const double jm1 = (2.0 * n + 1.0) / x * jn - jp1;
    jp1 = jn;
    jn = jm1;
    if (n - 1 < kNodes)
      tmp[std::size_t(n - 1)] = jn;
    if (n <= kNodes && n < kNodes)
      tmp[std::size_t(n)] = jp1;
    if (std::abs(jn) > 1e200) { // rescale
      jn *= 1e-200;
      jp1 *= 1e-200;
      for (auto &v : tmp)
        v *= 1e-200;
    }
  }
  const double j0 = s / x, j1 = s / (x * x) - c / x;
  const double norm = std::abs(j0) >= std::abs(j1) ? j0 / tmp[0] : j1 / tmp[1];
  for (int n = 0; n < kNodes; ++n)
    j[std::size_t(n)] = tmp[std::size_t(n)] * norm;
}

// int_{-1}^{1} P_j(u) e^{i w u} du = 2 i^j j_j(w)
void moments(double w, std::array<cplx, kNodes> &mu) {
  static const cplx ipow[4] = {1.0, I, -1.0, -I};
  std::array<double, kNodes> jj;
  sph_bessel_all(std::abs(w), jj);
  for (int j = 0; j < kNodes; ++j) {
    const double v = (w < 0 && (j % 2)) ? -jj[std::size_t(j)] : jj[std::size_t(j)];
    mu[std::size_t(j)] = 2.0 * ipow[j % 4] * v;
  }
}

struct Taper {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  double width_lo = 0.0, width_hi = 0.0;
  double operator()(double k) const {
    if (width_hi > 0.0 && k > hi - width_hi) {
      const double s = (k - (hi - width_hi)) / width_hi;
      return s >= 1.0 ? 0.0 : 0.5 * (1.0 + std::cos(pi * s));
    }
    if (width_lo > 0.0 && k < lo + width_lo) {
      const double s = ((lo + width_lo) - k) / width_lo;
      return s >= 1.0 ? 0.0 : 0.5 * (1.0 + std::cos(pi * s));
    }
    return 1.0;
  }
};

cplx gk_panel(const OscIntegral &q, double lo, double hi, double tol) {
  using boost::math::quadrature::gauss_kronrod;
  // complex integrand: the tolerance is relative to |integral|, not to a
  // component that may vanish
  auto g = [&](double k) { return std::exp(cplx(0.0, q.t * q.phi(k))) * q.f(k); };
  return gauss_kronrod<double, 31>::integrate(g, lo, hi, 8, tol);
}

} // namespace

cplx filon_panel(const OscIntegral &q, double lo, double hi, double *l1) {
  const auto &L = legendre();
  const double m = 0.5 * (lo + hi), hw = 0.5 * (hi - lo);
  const double ph0 = q.phi(m), d0 = q.dphi(m);
  std::array<cplx, kNodes> g;
  for (int i = 0; i < kNodes; ++i) {
    const double k = m + hw * L.u[i];
    const double r = q.t * (q.phi(k) - ph0 - d0 * (k - m));
    g[i] = q.f(k) * std::exp(cplx(0.0, r));
  }
  if (l1) {
    double a = 0.0;
    for (int i = 0; i < kNodes; ++i)
      a += L.w[i] * std::abs(g[i]);
    *l1 = hw * a;
  }
  std::array<cplx, kNodes> mu;
  moments(q.t * d0 * hw, mu);
  cplx acc = 0.0;
  for (int j = 0; j < kNodes; ++j) {
    cplx c = 0.0;
    for (int i = 0; i < kNodes; ++i)
      c += L.w[i] * g[i] * L.P[j][i];
    acc += (0.5 * (2.0 * j + 1.0)) * c * mu[std::size_t(j)];
  }
  return std::exp(cplx(0.0, q.t * ph0)) * hw * acc;
}

std::vector<double> stationary_points(const std::function<double(double)> &dphi, double a,
                                      double b, std::size_t scan) {
  std::vector<double> out;
  if (!(b > a))
    return out;
  double xprev = a, fprev = dphi(a);
  for (std::size_t i = 1; i <= scan; ++i) {
    const double x = a + (b - a) * double(i) / double(scan);
    const double fx = dphi(x);
    if (fprev == 0.0) {
      if (xprev > a)
        out.push_back(xprev);
    } else if (fprev * fx < 0.0) {
      double lo = xprev, hi = x, flo = fprev;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = dphi(mid);
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      out.push_back(0.5 * (lo + hi));
    }
    xprev = x;
    fprev = fx;
  }
  return out;
}

OscResult oscint_detailed(const OscIntegral &q0, const OscOptions &opt) {
  if (!(q0.t >= 0.0) || !std::isfinite(q0.t))
    throw Error(ErrorKind::InvalidArgument, "oscint needs a finite t >= 0");
  OscIntegral q = q0;
  if (!(q.b > q.a))
    return {};
  // infinite limits: cosine-tapered finite window
  Taper tp;
  const double reach = 10.0 * std::max({std::isfinite(q.a) ? std::abs(q.a) : 0.0, 6.0 / std::sqrt(std::max(q.t, 1e-12)),
                                        std::isfinite(q.b) ? std::abs(q.b) : 0.0, q.t, 6.0});
  std::vector<double> cuts;
  if (!std::isfinite(q.b)) {
    q.b = std::isfinite(q.a) ? std::max(q.a, 0.0) + reach : reach;
    tp.hi = q.b;
  }
  if (!std::isfinite(q.a)) {
    q.a = std::isfinite(q0.b) ? std::min(q0.b, 0.0) - reach : -reach;
    tp.lo = q.a;
  }
  if (!std::isfinite(q0.b)) {
    tp.width_hi = opt.taper_fraction * (q.b - std::max(q.a, 0.0));
    cuts.push_back(tp.hi - tp.width_hi);
  }
  if (!std::isfinite(q0.a)) {
    tp.width_lo = opt.taper_fraction * (std::min(q.b, 0.0) - q.a);
    cuts.push_back(tp.lo + tp.width_lo);
  }
  if (tp.width_hi > 0.0 || tp.width_lo > 0.0) {
    auto f = q0.f;
    q.f = [f, tp](double k) { return f(k) * tp(k); };
  }

  // panel seeds: ends, taper joints, stationary points
  cuts.push_back(q.a);
  cuts.push_back(q.b);
  if (q.t > 0.0)
    for (double s : stationary_points(q.dphi, q.a, q.b))
      cuts.push_back(s);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // initial panels: keep the residual chirp t|phi''| h^2 / 8 small
  std::vector<std::pair<double, double>> panels;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double lo = cuts[s], hi = cuts[s + 1];
    if (!(hi > lo))
      continue;
    double dd = 0.0;
    for (int i = 0; i <= 16; ++i)
      dd = std::max(dd, std::abs(q.ddphi(lo + (hi - lo) * i / 16.0)));
    std::size_t n = 1;
    if (q.t > 0.0 && dd > 0.0)
      n = std::size_t(std::ceil((hi - lo) * std::sqrt(q.t * dd) / 4.0));
    n = std::clamp<std::size_t>(n, 1, opt.max_panels / 4);
    for (std::size_t i = 0; i < n; ++i)
      panels.push_back({lo + (hi - lo) * double(i) / double(n),
                        i + 1 == n ? hi : lo + (hi - lo) * double(i + 1) / double(n)});
  }

  auto slow = [&](double lo, double hi) {
    const double m = 0.5 * (lo + hi);
    return q.t * std::max({std::abs(q.dphi(lo)), std::abs(q.dphi(m)), std::abs(q.dphi(hi))}) *
               (hi - lo) <=
           1.0;
  };
  // Gauss-Kronrod panels need not be resolved far below the global target
  // (amplitudes given by splines are only piecewise smooth)
  const double gk_tol = std::max(1e-13, 1e-2 * opt.rtol);
  auto eval = [&](double lo, double hi, double *l1 = nullptr) {
    return slow(lo, hi) ? gk_panel(q, lo, hi, gk_tol) : filon_panel(q, lo, hi, l1);
  };

  std::vector<cplx> coarse(panels.size());
  cplx total0 = 0.0;
  for (std::size_t i = 0; i < panels.size(); ++i) {
    coarse[i] = eval(panels[i].first, panels[i].second);
    total0 += coarse[i];
  }
  const double span = q.b - q.a;
  double scale = std::abs(total0);
  if (scale == 0.0)
    scale = 1e-300;

  OscResult res;
  struct Item {
    double lo, hi;
    cplx val;
    int depth;
  };
  std::vector<Item> stack;
  for (std::size_t i = panels.size(); i-- > 0;)
    stack.push_back({panels[i].first, panels[i].second, coarse[i], 0});
  std::size_t count = panels.size();
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    if (slow(it.lo, it.hi)) {
      res.value += it.val; // Gauss-Kronrod already adaptive
      continue;
    }
    const double mid = 0.5 * (it.lo + it.hi);
    double al = 0.0, ar = 0.0;
    const cplx l = eval(it.lo, mid, &al), r = eval(mid, it.hi, &ar);
    count += 2;
    const double err = std::abs(l + r - it.val);
    // relative target, floored at the rounding level of the panel sums (the
    // phase t*phi itself carries an absolute error ~ eps |t phi|)
    const double tol = std::max(opt.rtol * std::max(std::abs(l + r), scale * (it.hi - it.lo) / span),
                                opt.atol * (it.hi - it.lo) / span) +
                       4e-16 * (16.0 + std::abs(q.t * q.phi(mid))) * (al + ar);
    if (err <= tol || it.depth > 30 || (it.hi - it.lo) < 1e-13 * span) {
      res.value += l + r;
      res.error_estimate += err;
      continue;
    }
    if (count > opt.max_panels)
      throw Error(ErrorKind::NoConvergence, "oscint panel budget exhausted");
    stack.push_back({mid, it.hi, r, it.depth + 1});
    stack.push_back({it.lo, mid, l, it.depth + 1});
  }
  res.panels = count;
  return res;
}

cplx oscint(const OscIntegral &q, const OscOptions &opt) { return oscint_detailed(q, opt).value; }

namespace {

VdcReport vdc_impl(const std::function<double(double)> &phi,
                   const std::function<double(double)> &dphi,
                   const std::function<double(double)> &ddphi, const std::function<cplx(double)> &f,
                   double norm, double a, double b, const std::vector<double> &ts, bool do_throw) {
  VdcReport rep;
  rep.norm_A1 = norm;
  double mn = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 2000; ++i)
    mn = std::min(mn, std::abs(ddphi(a + (b - a) * i / 2000.0)));
  rep.min_ddphi = mn;
  if (!(mn > 0.0))
    throw Error(ErrorKind::InvalidArgument, "phi'' vanishes on the interval");
  for (double t : ts) {
    OscIntegral oi{phi, dphi, ddphi, f, a, b, t};
    VdcRow row;
    row.t = t;
    row.I = oscint(oi);
    row.ratio = std::abs(row.I) * std::sqrt(t * mn) / norm;
    rep.max_ratio = std::max(rep.max_ratio, row.ratio);
    rep.rows.push_back(row);
  }
  rep.ok = rep.max_ratio <= 1.05 * vdc_constant();
  if (!rep.ok && do_throw)
    throw Error(ErrorKind::BoundViolated,
                "van der Corput ratio " + std::to_string(rep.max_ratio) + " exceeds 1.05 C_2");
  return rep;
}

} // namespace

VdcReport vdc_check(const std::function<double(double)> &phi,
                    const std::function<double(double)> &dphi,
                    const std::function<double(double)> &ddphi, const WienerProfile &f, double a,
                    double b, const std::vector<double> &ts, bool throw_on_violation) {
  return vdc_impl(phi, dphi, ddphi, [&f](double k) { return f.resynthesize(k); }, f.norm_A1(), a,
                  b, ts, throw_on_violation);
}

VdcReport vdc_check(const std::function<double(double)> &phi,
                    const std::function<double(double)> &dphi,
                    const std::function<double(double)> &ddphi,
                    const std::function<cplx(double)> &f, double norm_A1, double a, double b,
                    const std::vector<double> &ts, bool throw_on_violation) {
  return vdc_impl(phi, dphi, ddphi, f, norm_A1, a, b, ts, throw_on_violation);
}

namespace {

OscIntegral appendix_integral(double v, double t, double a, double b) {
  OscIntegral oi;
  oi.phi = [v](double s) { return std::sqrt(s * s + 1.0) + v * s; };
  oi.dphi = [v](double s) { return s / std::sqrt(s * s + 1.0) + v; };
  oi.ddphi = [](double s) { return std::pow(s * s + 1.0, -1.5); };
  oi.f = [](double) { return cplx(1.0); };
  oi.a = a;
  oi.b = b;
  oi.t = t;
  return oi;
}

} // namespace

cplx appendix_psi_at(double v, double t, double k) {
  return oscint(appendix_integral(v, t, 0.0, k), OscOptions{1e-10});
}

PsiTable appendix_psi(double v, double t, double kmax, std::size_t per_decade) {
  PsiTable tab;
  tab.v = v;
  tab.t = t;
  const OscIntegral oi = appendix_integral(v, t, 0.0, 1.0);
  // uniform on [0, 1] then geometric; each step is one (or a few) Filon panels
  const std::size_t nu = std::max<std::size_t>(50, per_decade / 10);
  std::vector<double> ks;
  for (std::size_t i = 0; i <= nu; ++i)
    ks.push_back(double(i) / double(nu));
  const double q = std::pow(10.0, 1.0 / double(per_decade));
  for (double k = q; k < kmax * (1.0 + 1e-12); k *= q)
    ks.push_back(k);
  if (ks.back() < kmax)
    ks.push_back(kmax);
  tab.k = ks;
  tab.psi.resize(ks.size());
  tab.psi[0] = 0.0;
  cplx acc = 0.0;
  for (std::size_t i = 1; i < ks.size(); ++i) {
    const double lo = ks[i - 1], hi = ks[i];
    // keep the residual chirp within a panel small
    const double dd = std::pow(lo * lo + 1.0, -1.5);
    const std::size_t n =
        std::max<std::size_t>(1, std::size_t(std::ceil((hi - lo) * std::sqrt(t * dd) / 2.0)));
    for (std::size_t j = 0; j < n; ++j)
      acc += filon_panel(oi, lo + (hi - lo) * double(j) / double(n),
                         lo + (hi - lo) * double(j + 1) / double(n));
    tab.psi[i] = acc;
  }
  return tab;
}

AppendixReport appendix_psi_check(const std::vector<double> &vs, const std::vector<double> &ts) {
  AppendixReport rep;
  rep.ts = ts;
  rep.rows.resize(vs.size() * ts.size());
  parallel_for(rep.rows.size(), [&](std::size_t idx) {
    const double t = ts[idx / vs.size()], v = vs[idx % vs.size()];
    AppendixRow row;
    row.t = t;
    row.v = v;
    if (t > 1.0) {
      const auto tab = appendix_psi(v, t, t);
      double J = 0.0;
      for (std::size_t i = 1; i < tab.k.size(); ++i) {
        const double k0 = tab.k[i - 1], k1 = tab.k[i];
        if (k0 < 1.0)
          continue;
        J += 0.5 * (k1 - k0) *
             (std::abs(tab.psi[i - 1]) * std::pow(k0, -2.5) + std::abs(tab.psi[i]) * std::pow(k1, -2.5));
      }
      row.J = J;
    }
    row.sqrt_t_J = std::sqrt(t) * row.J;
    rep.rows[idx] = row;
  });
  for (std::size_t it = 0; it < ts.size(); ++it) {
    double m = 0.0;
    for (std::size_t iv = 0; iv < vs.size(); ++iv)
      m = std::max(m, rep.rows[it * vs.size() + iv].sqrt_t_J);
    rep.max_over_v.push_back(m);
  }
  std::vector<double> s = rep.max_over_v;
  std::sort(s.begin(), s.end());
  if (!s.empty()) {
    rep.median = s.size() % 2 ? s[s.size() / 2] : 0.5 * (s[s.size() / 2 - 1] + s[s.size() / 2]);
    rep.max = s.back();
  }
  rep.bounded = rep.max <= 2.0 * rep.median;
  return rep;
}

EnvelopeReport psi_envelope_check(const std::vector<double> &vs, const std::vector<double> &ts,
                                  double kmax) {
  EnvelopeReport rep;
  std::vector<EnvelopeReport> part(vs.size() * ts.size());
  parallel_for(part.size(), [&](std::size_t idx) {
    const double t = ts[idx / vs.size()], v = vs[idx % vs.size()];
    const auto tab = appendix_psi(v, t, kmax, 400);
    auto &p = part[idx];
    for (std::size_t i = 1; i < tab.k.size(); ++i) {
      const double k = tab.k[i];
      const double r = std::abs(tab.psi[i]) * std::sqrt(t) * std::pow(k + 1.0, -1.5);
      if (r > p.max_ratio) {
        p.max_ratio = r;
        p.worst_k = k;
        p.worst_t = t;
        p.worst_v = v;
      }
    }
  });
  for (const auto &p : part)
    if (p.max_ratio > rep.max_ratio) {
      rep.max_ratio = p.max_ratio;
      rep.worst_k = p.worst_k;
      rep.worst_t = p.worst_t;
      rep.worst_v = p.worst_v;
    }
  for (double v : vs)
    rep.C_hat = std::max(rep.C_hat, std::abs(appendix_psi_at(v, 1.0, 1.0)) / std::pow(2.0, 1.5));
  rep.ok = rep.max_ratio <= 1.05 * vdc_constant();
  return rep;
}

} // namespace disperse1d
