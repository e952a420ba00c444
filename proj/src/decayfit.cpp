#include "disperse1d/decayfit.hpp"

#include <algorithm>
#include <cmath>

#include <fftw3.h>

#include "disperse1d/errors.hpp"
#include "disperse1d/parallel.hpp"
#include "fft_lock.hpp"

namespace disperse1d {

DecayFit fit_decay(const std::vector<double> &t, const std::vector<double> &v) {
  const std::size_t n = t.size();
  if (n != v.size() || n < 6)
    throw Error(ErrorKind::InvalidArgument, "decay fit needs >= 6 matching samples");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(v[i] > 0.0))
      throw Error(ErrorKind::NonPositiveValue, "decay value " + std::to_string(v[i]) + " at t = " +
                                                   std::to_string(t[i]));
    if (!(t[i] > 0.0))
      throw Error(ErrorKind::InvalidArgument, "decay fit needs t > 0");
  }
  const auto [tmin, tmax] = std::minmax_element(t.begin(), t.end());
  if (std::log10(*tmax / *tmin) < 1.5 - 1e-12)
    throw Error(ErrorKind::InvalidArgument, "decay fit needs a ladder spanning >= 1.5 decades");
  double mx = 0.0, my = 0.0;
  std::vector<double> X(n), Y(n);
  for (std::size_t i = 0; i < n; ++i) {
    X[i] = std::log(t[i]);
    Y[i] = std::log(v[i]);
    mx += X[i];
    my += Y[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (X[i] - mx) * (X[i] - mx);
    sxy += (X[i] - mx) * (Y[i] - my);
    syy += (Y[i] - my) * (Y[i] - my);
  }
  DecayFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = Y[i] - f.intercept - f.slope * X[i];
    sse += r * r;
  }
  f.stderr_slope = std::sqrt(sse / double(n - 2) / sxx);
  f.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  return f;
}

std::vector<double> t_ladder(double a, double b, std::size_t n) {
  if (!(a > 0.0) || !(b > a) || n < 2)
    throw Error(ErrorKind::InvalidArgument, "t-ladder needs 0 < a < b and n >= 2");
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i)
    t[i] = a * std::pow(b / a, double(i) / double(n - 1));
  t.back() = b;
  return t;
}

double sup_kernel_norm(const KernelField &K, double sigma) {
  double s = 0.0;
  for (std::size_t i = 0; i < K.x.size(); ++i) {
    const double wx = std::pow(1.0 + std::abs(K.x[i]), -sigma);
    for (std::size_t j = 0; j < K.y.size(); ++j)
      s = std::max(s, std::abs(K(i, j)) * wx * std::pow(1.0 + std::abs(K.y[j]), -sigma));
  }
  return s;
}

std::vector<double> decay_nodes(double X_ext, double dx_ext, const std::vector<double> &inner) {
  if (!(dx_ext > 0.0))
    throw Error(ErrorKind::InvalidArgument, "extension spacing must be > 0");
  std::vector<double> n = inner;
  const double edge = std::max(std::abs(inner.front()), std::abs(inner.back()));
  for (double x = edge + dx_ext; x <= X_ext + 1e-9; x += dx_ext) {
    n.push_back(x);
    n.push_back(-x);
  }
  std::sort(n.begin(), n.end());
  return n;
}

DecaySeries schrodinger_decay(const FresnelKernel &fk, const std::vector<double> &ts, double sigma,
                              const std::vector<double> &nodes) {
  std::vector<cplx> taus;
  for (double t : ts)
    taus.emplace_back(t, 0.0);
  const double R = std::max(std::abs(nodes.front()), std::abs(nodes.back()));
  std::vector<double> half;
  DecaySeries s;
  s.t = ts;
  s.sigma = sigma;
  s.descriptor = sigma == 0.0 ? "sup" : "weighted_sup";
  s.value = fk.window_sup(nodes, taus, sigma, &half, 0.5 * R);
  for (std::size_t q = 0; q < ts.size(); ++q)
    s.half_window_gap = std::max(s.half_window_gap, std::abs(s.value[q] - half[q]) / s.value[q]);
  s.fit = fit_decay(s.t, s.value);
  return s;
}

double sobolev_norm(const std::vector<double> &x, const std::vector<double> &f, double alpha,
                    double sigma) {
  const std::size_t n = x.size();
  if (n < 4 || f.size() != n)
    throw Error(ErrorKind::InvalidArgument, "Sobolev norm needs >= 4 matching samples");
  const double dx = x[1] - x[0];
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(x[i] - x[i - 1] - dx) > 1e-9 * (1.0 + std::abs(dx)))
      throw Error(ErrorKind::InvalidArgument, "Sobolev norm needs a uniform grid");
  const std::size_t N = 4 * n, lead = (N - n) / 2;
  fftw_complex *buf = fftw_alloc_complex(N);
  fftw_plan fwd, bwd;
  {
    std::lock_guard<std::mutex> lk(planner_mutex());
    fwd = fftw_plan_dft_1d(int(N), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_1d(int(N), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  for (std::size_t j = 0; j < N; ++j) {
    buf[j][0] = (j >= lead && j < lead + n) ? f[j - lead] : 0.0;
    buf[j][1] = 0.0;
  }
  fftw_execute(fwd);
  for (std::size_t j = 0; j < N; ++j) {
    const std::ptrdiff_t q = j < N / 2 ? std::ptrdiff_t(j) : std::ptrdiff_t(j) - std::ptrdiff_t(N);
    const double k = 2.0 * pi * double(q) / (double(N) * dx);
    const double m = std::pow(1.0 + k * k, 0.5 * alpha) / double(N);
    buf[j][0] *= m;
    buf[j][1] *= m;
  }
  fftw_execute(bwd);
  double total = 0.0, pad = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    const double xj = x[0] + (double(j) - double(lead)) * dx;
    const double v = std::hypot(buf[j][0], buf[j][1]) * std::pow(1.0 + std::abs(xj), sigma) * dx;
    total += v;
    if (j < lead || j >= lead + n)
      pad += v;
  }
  {
    std::lock_guard<std::mutex> lk(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  fftw_free(buf);
  if (pad > 1e-6 * total)
    throw Error(ErrorKind::SpectralLeakage,
                "padding holds " + std::to_string(pad / total) + " of the norm");
  return total;
}

std::vector<double> unit_gaussian(const std::vector<double> &x, double width, double centre) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double u = (x[i] - centre) / width;
    g[i] = std::exp(-0.5 * u * u) / (width * std::sqrt(2.0 * pi));
  }
  return g;
}

DecaySeries kg_response(const ScatteringData &sd, const JostField &field, double m,
                        const std::vector<double> &f, const std::vector<double> &ts, double sigma,
                        const KgResponseOptions &opt) {
  const auto Pc = pc_projector(sd.bound, field.x);
  const auto g = Pc.apply(f);
  const double norm = sobolev_norm(field.x, f, 0.5, sigma);
  const auto A = kg_inner(field, sd, g);
  const double X = std::max(std::abs(field.x.front()), std::abs(field.x.back()));
  DecaySeries s;
  s.t = ts;
  s.sigma = sigma;
  s.descriptor = "kg_response";
  s.value.resize(ts.size());
  std::vector<double> half(ts.size());
  for (std::size_t q = 0; q < ts.size(); ++q) {
    const double t = ts[q];
    const double xmax = opt.xmax_factor * t + X, R = 0.5 * xmax;
    double sup = 0.0, sup_half = 0.0;
    auto visit = [&](double x, cplx u) {
      const double v = std::abs(u) * std::pow(1.0 + std::abs(x), -sigma);
      sup = std::max(sup, v);
      if (std::abs(x) <= R)
        sup_half = std::max(sup_half, v);
    };
    const auto u = kg_apply_inner(field, A, m, t, 12);
    for (std::size_t i = 0; i < field.nx(); ++i)
      visit(field.x[i], u[i]);
    const auto far = kg_far_field(field, sd, m, t, g, 12, X, xmax, opt.far_dx);
    for (std::size_t i = 0; i < far.x.size(); ++i) {
      visit(far.x[i], far.right[i]);
      visit(-far.x[i], far.left[i]);
    }
    s.value[q] = sup / norm;
    half[q] = sup_half / norm;
    s.half_window_gap = std::max(s.half_window_gap, std::abs(sup - sup_half) / sup);
  }
  s.fit = fit_decay(s.t, s.value);
  return s;
}

} // namespace disperse1d
