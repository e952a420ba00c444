#include "disperse1d/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "disperse1d/errors.hpp"
#include "disperse1d/oscquad.hpp"
#include "disperse1d/wiener.hpp"

namespace disperse1d {

namespace {

class Stopwatch {
public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << std::scientific << v;
  return s.str();
}

Potential sech2() { return make_potential(Family::sech2, 1.0); }
Potential gaussian_well() { return make_potential(Family::gaussian_well, 2.0, 1.0); }
Potential square_well() { return make_potential(Family::square_well, 1.0, 1.0); }
Potential free_potential() { return make_potential(Family::zero); }

Check make_check(std::string name, double value, double tol, bool pass, std::string detail,
                 const Stopwatch &sw) {
  Check c;
  c.name = std::move(name);
  c.value = value;
  c.tolerance = tol;
  c.pass = pass;
  c.detail = std::move(detail);
  c.seconds = sw.seconds();
  return c;
}

// least-squares slope of v against u
double trend_slope(const std::vector<double> &u, const std::vector<double> &v) {
  double mu = 0.0, mv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    mu += u[i];
    mv += v[i];
  }
  mu /= double(u.size());
  mv /= double(v.size());
  double suu = 0.0, suv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    suu += (u[i] - mu) * (u[i] - mu);
    suv += (u[i] - mu) * (v[i] - mv);
  }
  return suv / suu;
}

const std::vector<double> &probe_coords() {
  static const std::vector<double> p{-20.0, -10.0, 0.0, 10.0, 20.0};
  return p;
}

//! max over the 5x5 probe grid of |trend slope| of l1(psi-hat) against |x|+|y|
double psi_l1_trend(const Fixture &fx, std::string *detail) {
  ProfileBuilder pb(fx.field.kg);
  std::vector<double> u, v;
  for (double x : probe_coords())
    for (double y : probe_coords()) {
      const auto prof = psi_profile(fx.field, fx.sd, fx.field.node(x), fx.field.node(y), pb);
      u.push_back(std::abs(x) + std::abs(y));
      v.push_back(prof.l1_norm);
    }
  const double s = trend_slope(u, v);
  if (detail) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    *detail += fx.V.name() + ": l1 in [" + fmt(*lo) + ", " + fmt(*hi) + "], slope " + fmt(s) + "; ";
  }
  return std::abs(s);
}

//! Largest relative slope deviation of a decay series.
double slope_gap(const DecaySeries &s, double target) { return std::abs(s.fit.slope - target); }

std::string series_detail(const std::string &label, const DecaySeries &s) {
  return label + " slope " + fmt(s.fit.slope) + " (se " + fmt(s.fit.stderr_slope) + ", R2 " +
         fmt(s.fit.r2) + ", half-window gap " + fmt(s.half_window_gap) + "); ";
}

//! Relative drift of the KG energy and the group-law defect on the oracle.
struct KgPhysics {
  double drift = 0.0, group = 0.0;
};
KgPhysics kg_physics(const DiscreteHamiltonian &Hd, double m) {
  std::vector<double> u0(Hd.N), u1(Hd.N);
  for (std::size_t i = 0; i < Hd.N; ++i) {
    const double x = Hd.x[i];
    u0[i] = std::exp(-x * x);
    u1[i] = x * std::exp(-0.5 * (x - 1.0) * (x - 1.0));
  }
  u0 = pc_apply(Hd, u0);
  u1 = pc_apply(Hd, u1);
  KgPhysics r;
  const double E0 = kg_energy(Hd, m, u0, u1);
  for (int q = 1; q <= 10; ++q) {
    const auto [u, ud] = kg_eig_apply(Hd, m, 10.0 * q, u0, u1);
    r.drift = std::max(r.drift, std::abs(kg_energy(Hd, m, u, ud) - E0) / E0);
  }
  for (auto [t, s] : {std::pair{30.0, 70.0}, std::pair{3.7, 11.2}}) {
    const auto [a, ad] = kg_eig_apply(Hd, m, t, u0, u1);
    const auto [b, bd] = kg_eig_apply(Hd, m, s, a, ad);
    const auto [c, cd] = kg_eig_apply(Hd, m, t + s, u0, u1);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < Hd.N; ++i) {
      num = std::max({num, std::abs(b[i] - c[i]), std::abs(bd[i] - cd[i])});
      den = std::max({den, std::abs(c[i]), std::abs(cd[i])});
    }
    r.group = std::max(r.group, num / den);
  }
  return r;
}

// ---- criteria ----

Check free_kernel_exactness(FixtureCache &fc, const AcceptanceOptions &) {
  Stopwatch sw;
  const Fixture &fx = fc.get(free_potential());
  const auto win = standard_window();
  const auto probe = probe_window(win, 20);
  const std::vector<double> ts{0.1, 1.0, 10.0, 100.0};
  double fres = 0.0, dir = 0.0;
  std::vector<cplx> taus;
  for (double t : ts)
    taus.emplace_back(t, 0.0);
  const auto fields = fx.fk->fields(win, win, taus);
  for (std::size_t q = 0; q < ts.size(); ++q) {
    const double ref = 1.0 / std::sqrt(4.0 * pi * ts[q]);
    for (std::size_t i = 0; i < win.size(); ++i)
      for (std::size_t j = 0; j < win.size(); ++j)
        fres = std::max(fres, std::abs(fields[q](i, j) - free_kernel(win[i], win[j], ts[q])) / ref);
    const auto kd = schrodinger_kernel_direct(fx.field, fx.sd, ts[q], probe);
    for (std::size_t i = 0; i < probe.size(); ++i)
      for (std::size_t j = 0; j < probe.size(); ++j)
        dir = std::max(dir, std::abs(kd(i, j) - free_kernel(probe[i], probe[j], ts[q])) / ref);
  }
  const double worst = std::max(fres, dir);
  return make_check("free-kernel exactness", worst, 1e-4, worst <= 1e-4,
                    "fresnel " + fmt(fres) + " (full window), direct " + fmt(dir) +
                        " (11x11 probe), t in {0.1, 1, 10, 100}",
                    sw);
}

Check scattering_identities(FixtureCache &fc, const AcceptanceOptions &) {
  Stopwatch sw;
  double worst = 0.0;
  std::string detail;
  for (const auto &V : {sech2(), gaussian_well(), square_well()}) {
    const Fixture &fx = fc.get(V);
    const auto r = verify_identities(fx.sd, fx.field, 0.05, 20.0);
    const double w = std::max({r.unitarity, r.consistency, r.scattering_relation});
    worst = std::max(worst, w);
    detail += V.name() + ": unitarity " + fmt(r.unitarity) + ", consistency " +
              fmt(r.consistency) + ", relations " + fmt(r.scattering_relation) + "; ";
  }
  const double secs = sw.seconds();
  detail += "runtime " + fmt(secs) + " s (limit 60 s)";
  return make_check("scattering identities", worst, 1e-7, worst <= 1e-7 && secs < 60.0, detail,
                    sw);
}

Check poschl_teller(FixtureCache &fc, const AcceptanceOptions &) {
  Stopwatch sw;
  const Fixture &pt = fc.get(sech2());
  double eT = 0.0, eR = 0.0;
  for (std::size_t j = 0; j < pt.sd.kg.n; ++j) {
    const double k = pt.sd.kg.k(j);
    eT = std::max(eT, std::abs(pt.sd.T[j] - (k + I) / (k - I)));
    eR = std::max({eR, std::abs(pt.sd.Rp[j]), std::abs(pt.sd.Rm[j])});
  }
  double eK = 1.0;
  if (pt.sd.bound.size() == 1)
    eK = std::abs(pt.sd.bound[0].kappa - 1.0);
  const auto cPT = pt.sd.resonance_class();
  const auto c0 = fc.get(free_potential()).sd.resonance_class();
  const auto cG = fc.get(gaussian_well()).sd.resonance_class();
  const double worst = std::max({eT, eR, eK});
  const bool ok = worst <= 1e-6 && cPT == ResonanceClass::ResonantB &&
                  c0 == ResonanceClass::ResonantA && cG == ResonanceClass::NonResonant;
  return make_check("closed-form Poschl-Teller", worst, 1e-6, ok,
                    "T " + fmt(eT) + ", R " + fmt(eR) + ", kappa " + fmt(eK) + " (" +
                        std::to_string(pt.sd.bound.size()) + " bound states); classes " +
                        to_string(cPT) + " / " + to_string(c0) + " / " + to_string(cG),
                    sw);
}

Check oracle_equivalence(FixtureCache &fc, const AcceptanceOptions &o) {
  Stopwatch sw;
  const auto win = standard_window();
  double worst = 0.0;
  std::string detail;
  for (const auto &V : {sech2(), gaussian_well()}) {
    const Fixture &fx = fc.get(V);
    const auto &Hd = fc.oracle(V);
    std::vector<cplx> taus;
    for (double t : o.oracle_times)
      taus.emplace_back(t, -o.oracle_eps);
    const auto kf = fx.fk->fields(win, win, taus);
    detail += V.name() + ":";
    for (std::size_t q = 0; q < taus.size(); ++q) {
      const auto ko = oracle_kernel(Hd, taus[q], win, win);
      const double e = sup_rel_error(kf[q], ko);
      worst = std::max(worst, e);
      detail += " t=" + fmt(o.oracle_times[q]) + " " + fmt(e);
    }
    detail += "; ";
  }
  detail += "eps " + fmt(o.oracle_eps);
  return make_check("oracle equivalence", worst, 1e-2, worst <= 1e-2, detail, sw);
}

Check schrodinger_plain_decay(FixtureCache &fc, const AcceptanceOptions &o) {
  Stopwatch sw;
  const auto ts = t_ladder(10.0, 1000.0, 8);
  const auto nodes = decay_nodes(o.X_ext, o.dx_ext);
  double worst = 0.0;
  std::string detail;
  for (const auto &V : {sech2(), gaussian_well()}) {
    const auto s = schrodinger_decay(*fc.get(V).fk, ts, 0.0, nodes);
    worst = std::max(worst, slope_gap(s, -0.5));
    detail += series_detail(V.name(), s);
  }
  return make_check("sup decay t^-1/2 (resonant and non-resonant)", worst, 0.05, worst <= 0.05,
                    detail, sw);
}

Check schrodinger_weighted_decay(FixtureCache &fc, const AcceptanceOptions &o) {
  Stopwatch sw;
  const auto ts = t_ladder(10.0, 1000.0, 8);
  const auto s =
      schrodinger_decay(*fc.get(gaussian_well()).fk, ts, 1.0, decay_nodes(o.X_ext, o.dx_ext));
  const double g = slope_gap(s, -1.5);
  return make_check("weighted decay t^-3/2 (non-resonant)", g, 0.1, g <= 0.1,
                    series_detail(gaussian_well().name(), s), sw);
}

Check kg_decay(FixtureCache &fc, const AcceptanceOptions &) {
  Stopwatch sw;
  const auto ts = t_ladder(10.0, 1000.0, 8);
  const Fixture &r = fc.get(sech2());
  const Fixture &n = fc.get(gaussian_well());
  const auto sr = kg_response(r.sd, r.field, 1.0, unit_gaussian(r.field.x), ts, 0.0);
  const auto sn = kg_response(n.sd, n.field, 1.0, unit_gaussian(n.field.x), ts, 1.0);
  const double gr = slope_gap(sr, -0.5), gn = slope_gap(sn, -1.5);
  const bool ok = gr <= 0.07 && gn <= 0.15;
  return make_check("Klein-Gordon 12-entry decay", std::max(gr / 0.07, gn / 0.15), 1.0, ok,
                    series_detail(r.V.name() + " sigma=0 (tol 0.07)", sr) +
                        series_detail(n.V.name() + " sigma=1 (tol 0.15)", sn),
                    sw);
}

Check wiener_uniformity(FixtureCache &fc, const AcceptanceOptions &) {
  Stopwatch sw;
  std::string detail;
  double trend = 0.0;
  for (const auto &V : {sech2(), gaussian_well()})
    trend = std::max(trend, psi_l1_trend(fc.get(V), &detail));
  // weighted decomposition: C calibrated on the inner probes |x|,|y| <= 10
  // must bound the outer ring as well
  const Fixture &g = fc.get(gaussian_well());
  ProfileBuilder pb(g.field.kg);
  double C_inner = 0.0, ratio_outer = 0.0;
  for (double x : probe_coords())
    for (double y : probe_coords()) {
      const auto w = weighted_psi_profiles(g.field, g.sd, g.field.node(x), g.field.node(y), pb);
      const double ratio = w.max_l1() / ((1.0 + std::abs(x)) * (1.0 + std::abs(y)));
      if (std::abs(x) <= 10.0 && std::abs(y) <= 10.0)
        C_inner = std::max(C_inner, ratio);
      else
        ratio_outer = std::max(ratio_outer, ratio);
    }
  detail += "weighted: C(inner) " + fmt(C_inner) + ", outer ratio " + fmt(ratio_outer);
  const bool ok = trend < 0.01 && ratio_outer <= C_inner;
  return make_check("Wiener-norm uniformity", trend, 0.01, ok, detail, sw);
}

Check resonant_tails(FixtureCache &fc, const AcceptanceOptions &) {
  Stopwatch sw;
  const Fixture &fx = fc.get(sech2());
  const auto rd = resonant_diagnostics(fx.field, fx.sd);
  double inc = 0.0, glm = 0.0;
  for (const auto &s : rd.side) {
    inc = std::max(inc, s.last_decade_increment);
    glm = std::max(glm, s.glm_residual);
  }
  return make_check("resonant tail integrals and GLM", inc, 1e-3, inc < 1e-3 && glm < 1e-4,
                    "last-decade increment " + fmt(inc) + " (< 1e-3), GLM residual " + fmt(glm) +
                        " (< 1e-4)",
                    sw);
}

Check oscillatory_bounds(FixtureCache &, const AcceptanceOptions &) {
  Stopwatch sw;
  const double limit = 1.05 * vdc_constant();
  const auto sq = vdc_check([](double k) { return k * k; }, [](double k) { return 2.0 * k; },
                            [](double) { return 2.0; }, [](double) { return cplx(1.0); }, 1.0,
                            -1.0, 1.0, {1.0, 10.0, 100.0});
  const KGrid kg = make_kgrid(40.0, 4097);
  std::vector<cplx> nu(kg.n);
  for (std::size_t j = 0; j < kg.n; ++j)
    nu[j] = 1.0 / (I * kg.k(j) - 1.0);
  const auto kg_phase = vdc_check([](double k) { return std::sqrt(k * k + 1.0); },
                                  [](double k) { return k / std::sqrt(k * k + 1.0); },
                                  [](double k) { return std::pow(k * k + 1.0, -1.5); },
                                  to_profile(nu, kg), -2.0, 2.0, {1.0, 10.0, 100.0});
  const std::vector<double> vs{-2.0, -1.5, -0.9, -0.6, -0.3, 0.0, 0.5, 1.0};
  const auto app = appendix_psi_check(vs, {10.0, 100.0, 1000.0, 10000.0});
  const auto env = psi_envelope_check(vs, {1.0, 10.0, 100.0, 1000.0, 10000.0}, 50.0);
  const double vdc = std::max(sq.max_ratio, kg_phase.max_ratio);
  const bool ok = vdc <= limit && app.bounded && env.ok;
  return make_check("van der Corput and appendix bounds", vdc, limit, ok,
                    "vdc ratios k^2 " + fmt(sq.max_ratio) + ", sqrt(k^2+1)/nu " +
                        fmt(kg_phase.max_ratio) + "; max_v t^1/2 J: max " + fmt(app.max) +
                        " vs 2 x median " + fmt(2.0 * app.median) + "; envelope ratio " +
                        fmt(env.max_ratio) + " (limit " + fmt(limit) + ")",
                    sw);
}

Check kg_oracle_physics(FixtureCache &fc, const AcceptanceOptions &) {
  Stopwatch sw;
  const auto phys = kg_physics(fc.oracle(gaussian_well()), 1.0);
  double det = 0.0;
  const auto ks = make_kgrid(40.0, 4097).nodes();
  for (double t : t_ladder(0.1, 1000.0, 9))
    det = std::max(det, kg_det_residual(ks, 1.0, t));
  const bool ok = phys.drift <= 1e-8 && det <= 1e-12 && phys.group <= 1e-9;
  return make_check("Klein-Gordon oracle physics", phys.drift, 1e-8, ok,
                    "energy drift " + fmt(phys.drift) + " (<= 1e-8), det M - 1 " + fmt(det) +
                        " (<= 1e-12), group law " + fmt(phys.group) + " (<= 1e-9)",
                    sw);
}

} // namespace

Fixture::Fixture(const Potential &Vin, const GridConfig &g)
    : V(Vin), field(jost_field(V, make_kgrid(g.K, g.Nk), standard_window(g.L, g.Nx))),
      sd(scatter(V, field)), fk(std::make_unique<FresnelKernel>(field, sd)) {}

std::vector<double> probe_window(const std::vector<double> &window, std::size_t stride) {
  if (stride == 0)
    throw Error(ErrorKind::InvalidArgument, "probe stride must be >= 1");
  std::vector<double> p;
  for (std::size_t i = 0; i < window.size(); i += stride)
    p.push_back(window[i]);
  if ((window.size() - 1) % stride != 0)
    p.push_back(window.back());
  return p;
}

double sup_rel_error(const KernelField &A, const KernelField &B) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < B.x.size(); ++i) {
    const std::size_t ia = nearest_node(A.x, B.x[i]);
    if (std::abs(A.x[ia] - B.x[i]) > 1e-9)
      continue;
    for (std::size_t j = 0; j < B.y.size(); ++j) {
      const std::size_t ja = nearest_node(A.y, B.y[j]);
      if (std::abs(A.y[ja] - B.y[j]) > 1e-9)
        continue;
      num = std::max(num, std::abs(A(ia, ja) - B(i, j)));
      den = std::max(den, std::abs(B(i, j)));
    }
  }
  if (den == 0.0)
    throw Error(ErrorKind::InvalidArgument, "kernel fields share no nodes");
  return num / den;
}

Check wiener_trend_check(const Fixture &fx) {
  Stopwatch sw;
  std::string detail;
  const double s = psi_l1_trend(fx, &detail);
  return make_check("Wiener-norm trend", s, 0.01, s < 0.01, detail, sw);
}

const Fixture &FixtureCache::get(const Potential &V) {
  auto &slot = fx_[V.hash()];
  if (!slot)
    slot = std::make_unique<Fixture>(V, grid_);
  return *slot;
}

const DiscreteHamiltonian &FixtureCache::oracle(const Potential &V) {
  auto &slot = hd_[V.hash()];
  if (!slot)
    slot = std::make_unique<DiscreteHamiltonian>(discretize(V, grid_.L_o, grid_.N_o));
  return *slot;
}

std::vector<std::pair<std::string, CriterionFn>> acceptance_criteria() {
  return {{"free_kernel", free_kernel_exactness},
          {"scattering", scattering_identities},
          {"poschl_teller", poschl_teller},
          {"oracle", oracle_equivalence},
          {"decay_plain", schrodinger_plain_decay},
          {"decay_weighted", schrodinger_weighted_decay},
          {"kg_decay", kg_decay},
          {"wiener", wiener_uniformity},
          {"resonant_tails", resonant_tails},
          {"oscillatory", oscillatory_bounds},
          {"kg_physics", kg_oracle_physics}};
}

std::vector<Check> verify_potential(const RunConfig &c, const Potential &V) {
  std::vector<Check> out;
  auto run = [&](const std::string &name, const std::function<Check()> &body) {
    try {
      out.push_back(body());
    } catch (const Error &e) {
      Check ch;
      ch.name = name;
      ch.detail = e.what();
      out.push_back(ch);
    }
  };
  Stopwatch build;
  const Fixture fx(V, c.grid);
  const auto win = standard_window(c.grid.L, c.grid.Nx);

  run("scattering identities", [&] {
    Stopwatch sw;
    const auto r = verify_identities(fx.sd, fx.field, 0.05, 20.0);
    const double w = std::max({r.unitarity, r.consistency, r.scattering_relation});
    return make_check("scattering identities", w, 1e-7, w <= 1e-7,
                      "unitarity " + fmt(r.unitarity) + ", consistency " + fmt(r.consistency) +
                          ", relations " + fmt(r.scattering_relation),
                      sw);
  });
  run("|T| <= 1", [&] {
    Stopwatch sw;
    const auto r = verify_identities(fx.sd, fx.field, 0.05, 20.0);
    return make_check("|T| <= 1", r.T_bound, 1e-8, r.T_bound <= 1e-8, "sup |T| - 1", sw);
  });
  run("Jost conjugation symmetry", [&] {
    Stopwatch sw;
    const double r = fx.field.conjugation_residual();
    return make_check("Jost conjugation symmetry", r, 1e-8, r <= 1e-8, "h(x,-k) = conj h(x,k)",
                      sw);
  });

  std::vector<cplx> taus;
  for (double t : c.kernel_times)
    taus.emplace_back(t, 0.0);
  const auto kf = fx.fk->fields(win, win, taus);
  run("kernel symmetry", [&] {
    Stopwatch sw;
    double s = 0.0;
    bool finite = true;
    for (const auto &K : kf) {
      s = std::max(s, K.symmetry_residual());
      finite = finite && K.finite();
    }
    return make_check("kernel symmetry", s, 1e-6, s <= 1e-6 && finite,
                      finite ? "K(x,y) = K(y,x), all finite" : "non-finite kernel entries", sw);
  });
  run("route agreement", [&] {
    Stopwatch sw;
    const auto probe = probe_window(win, std::max<std::size_t>(1, (win.size() - 1) / 10));
    double worst = 0.0;
    std::string detail;
    for (std::size_t q = 0; q < taus.size(); ++q) {
      if (c.kernel_times[q] < 1.0 || c.kernel_times[q] > 50.0)
        continue;
      const auto kd = schrodinger_kernel_direct(fx.field, fx.sd, c.kernel_times[q], probe);
      const double e = sup_rel_error(kd, kf[q]);
      worst = std::max(worst, e);
      detail += "t=" + fmt(c.kernel_times[q]) + " " + fmt(e) + "; ";
    }
    return make_check("route agreement", worst, 5e-3, worst < 5e-3, detail + "probe sub-grid", sw);
  });

  const auto Hd = discretize(V, c.grid.L_o, c.grid.N_o);
  run("oracle orthonormality", [&] {
    Stopwatch sw;
    const double r = orthonormality_residual(Hd);
    return make_check("oracle orthonormality", r, 1e-10, r <= 1e-10, "sampled mode pairs", sw);
  });
  run("oracle equivalence", [&] {
    Stopwatch sw;
    std::vector<cplx> reg;
    for (double t : c.kernel_times)
      reg.emplace_back(t, -c.oracle_eps);
    const auto kr = fx.fk->fields(win, win, reg);
    double worst = 0.0;
    std::string detail;
    for (std::size_t q = 0; q < reg.size(); ++q) {
      const double e = sup_rel_error(kr[q], oracle_kernel(Hd, reg[q], win, win));
      worst = std::max(worst, e);
      detail += "t=" + fmt(c.kernel_times[q]) + " " + fmt(e) + "; ";
    }
    return make_check("oracle equivalence", worst, 1e-2, worst <= 1e-2,
                      detail + "eps " + fmt(c.oracle_eps), sw);
  });
  run("Wiener-norm trend", [&] { return wiener_trend_check(fx); });

  const auto ts = t_ladder(c.tladder.a, c.tladder.b, c.tladder.n);
  const auto nodes = decay_nodes(c.X_ext, c.dx_ext, win);
  run("sup decay", [&] {
    Stopwatch sw;
    const auto s = schrodinger_decay(*fx.fk, ts, 0.0, nodes);
    const double g = slope_gap(s, -0.5);
    return make_check("sup decay", g, 0.05, g <= 0.05, series_detail("sigma=0", s), sw);
  });
  if (fx.sd.resonance_class() == ResonanceClass::NonResonant)
    run("weighted decay", [&] {
      Stopwatch sw;
      const auto s = schrodinger_decay(*fx.fk, ts, 1.0, nodes);
      const double g = slope_gap(s, -1.5);
      return make_check("weighted decay", g, 0.1, g <= 0.1, series_detail("sigma=1", s), sw);
    });

  run("det M_t = 1", [&] {
    Stopwatch sw;
    double det = 0.0;
    for (double t : ts)
      det = std::max(det, kg_det_residual(fx.field.kg.nodes(), c.mass, t));
    return make_check("det M_t = 1", det, 1e-12, det <= 1e-12, "sampled (t, k)", sw);
  });
  run("KG energy and group law", [&] {
    Stopwatch sw;
    const auto p = kg_physics(Hd, c.mass);
    return make_check("KG energy and group law", p.drift, 1e-8, p.drift <= 1e-8 && p.group <= 1e-9,
                      "energy drift " + fmt(p.drift) + ", group law " + fmt(p.group) +
                          " (<= 1e-9)",
                      sw);
  });
  return out;
}

std::string checks_json(const std::vector<Check> &checks) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  bool all = true;
  auto arr = nlohmann::ordered_json::array();
  for (const auto &c : checks) {
    all = all && c.pass;
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["pass"] = c.pass;
    e["value"] = c.value;
    e["tolerance"] = c.tolerance;
    e["detail"] = c.detail;
    arr.push_back(e);
  }
  j["pass"] = all;
  j["checks"] = arr;
  return j.dump(2) + "\n";
}

} // namespace disperse1d
