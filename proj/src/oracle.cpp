#include "disperse1d/oracle.hpp"

#include <algorithm>
#include <cmath>

#include <fftw3.h>
#include <lapacke.h>

#include "disperse1d/errors.hpp"
#include "disperse1d/parallel.hpp"
#include "fft_lock.hpp"

namespace disperse1d {

std::size_t DiscreteHamiltonian::node(double xv) const {
  const double u = (xv + L) / h - 1.0;
  const double r = std::round(u);
  if (r < 0.0 || r >= double(N) || std::abs(u - r) > 1e-8)
    throw Error(ErrorKind::InvalidArgument,
                "x = " + std::to_string(xv) + " is not an oracle node");
  return std::size_t(r);
}

std::vector<double> DiscreteHamiltonian::apply(const std::vector<double> &u) const {
  const double c = 1.0 / (h * h);
  std::vector<double> r(N);
  for (std::size_t i = 0; i < N; ++i) {
    double s = (2.0 * c + V[i]) * u[i];
    if (i > 0)
      s -= c * u[i - 1];
    if (i + 1 < N)
      s -= c * u[i + 1];
    r[i] = s;
  }
  return r;
}

std::vector<double> DiscreteHamiltonian::bound_energies() const {
  return {lambda.begin(), lambda.begin() + std::ptrdiff_t(first_continuum)};
}

DiscreteHamiltonian discretize(const Potential &V, double L, std::size_t N) {
  if (N > kMaxOracleNodes)
    throw Error(ErrorKind::TooLarge, "oracle size " + std::to_string(N) + " exceeds " +
                                         std::to_string(kMaxOracleNodes));
  if (N < 3 || !(L > 0.0))
    throw Error(ErrorKind::InvalidArgument, "oracle needs N >= 3 and L > 0");
  DiscreteHamiltonian Hd;
  Hd.L = L;
  Hd.N = N;
  Hd.h = 2.0 * L / double(N + 1);
  const double c = 1.0 / (Hd.h * Hd.h);
  Hd.x.resize(N);
  Hd.V.resize(N);
  std::vector<double> d(N), e(N, -c);
  for (std::size_t i = 0; i < N; ++i) {
    Hd.x[i] = -L + double(i + 1) * Hd.h;
    Hd.V[i] = V(Hd.x[i]);
    d[i] = 2.0 * c + Hd.V[i];
  }
  Hd.lambda.resize(N);
  Hd.vec.resize(N * N);
  std::vector<lapack_int> isuppz(2 * N);
  lapack_int m = 0;
  lapack_logical tryrac = 1;
  const lapack_int info = LAPACKE_dstemr(
      LAPACK_COL_MAJOR, 'V', 'A', lapack_int(N), d.data(), e.data(), 0.0, 0.0, 0, 0, &m,
      Hd.lambda.data(), Hd.vec.data(), lapack_int(N), lapack_int(N), isuppz.data(), &tryrac);
  if (info != 0 || std::size_t(m) != N)
    throw Error(ErrorKind::NoConvergence, "dstemr failed (info " + std::to_string(info) + ")");
  Hd.first_continuum = std::size_t(
      std::lower_bound(Hd.lambda.begin(), Hd.lambda.end(), -Hd.eps_c) - Hd.lambda.begin());
  return Hd;
}

double orthonormality_residual(const DiscreteHamiltonian &Hd, std::size_t samples) {
  const std::size_t N = Hd.N;
  auto dot = [&](std::size_t a, std::size_t b) {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i)
      s += Hd.v(a, i) * Hd.v(b, i);
    return s;
  };
  double r = 0.0;
  for (std::size_t n = 0; n < N; ++n)
    r = std::max(r, std::abs(dot(n, n) - 1.0));
  // deterministic pseudo-random pairs (LCG)
  std::uint64_t s = 88172645463325252ull;
  for (std::size_t q = 0; q < samples; ++q) {
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    const std::size_t a = std::size_t(s >> 33) % N;
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    const std::size_t b = std::size_t(s >> 33) % N;
    r = std::max(r, std::abs(dot(a, b) - (a == b ? 1.0 : 0.0)));
  }
  return r;
}

namespace {

std::vector<double> coefficients(const DiscreteHamiltonian &Hd, const std::vector<double> &f) {
  if (f.size() != Hd.N)
    throw Error(ErrorKind::InvalidArgument, "vector length differs from the oracle size");
  std::vector<double> c(Hd.N, 0.0);
  parallel_for(Hd.N - Hd.first_continuum, [&](std::size_t q) {
    const std::size_t n = Hd.first_continuum + q;
    const double *v = &Hd.vec[n * Hd.N];
    double s = 0.0;
    for (std::size_t i = 0; i < Hd.N; ++i)
      s += v[i] * f[i];
    c[n] = s;
  });
  return c;
}

template <class T> std::vector<T> synthesize(const DiscreteHamiltonian &Hd, const std::vector<T> &c) {
  std::vector<T> u(Hd.N, T(0.0));
  for (std::size_t n = Hd.first_continuum; n < Hd.N; ++n) {
    const T cn = c[n];
    if (cn == T(0.0))
      continue;
    const double *v = &Hd.vec[n * Hd.N];
    for (std::size_t i = 0; i < Hd.N; ++i)
      u[i] += cn * v[i];
  }
  return u;
}

} // namespace

std::vector<cplx> eig_apply(const DiscreteHamiltonian &Hd, cplx tau, const std::vector<cplx> &f) {
  std::vector<double> re(Hd.N), im(Hd.N);
  for (std::size_t i = 0; i < Hd.N; ++i) {
    re[i] = f[i].real();
    im[i] = f[i].imag();
  }
  const auto a = coefficients(Hd, re), b = coefficients(Hd, im);
  std::vector<cplx> c(Hd.N, 0.0);
  for (std::size_t n = Hd.first_continuum; n < Hd.N; ++n)
    c[n] = std::exp(-I * Hd.lambda[n] * tau) * cplx(a[n], b[n]);
  return synthesize(Hd, c);
}

std::vector<double> pc_apply(const DiscreteHamiltonian &Hd, const std::vector<double> &f) {
  return synthesize(Hd, coefficients(Hd, f));
}

std::vector<cplx> eig_propagator(const DiscreteHamiltonian &Hd, cplx tau,
                                 const std::vector<std::size_t> &rows0,
                                 const std::vector<std::size_t> &cols0) {
  std::vector<std::size_t> all;
  if (rows0.empty() || cols0.empty())
    for (std::size_t i = 0; i < Hd.N; ++i)
      all.push_back(i);
  const auto &rows = rows0.empty() ? all : rows0;
  const auto &cols = cols0.empty() ? all : cols0;
  const std::size_t nr = rows.size(), nc = cols.size();
  std::vector<cplx> P(nr * nc, 0.0);
  std::vector<cplx> ph(Hd.N);
  for (std::size_t n = Hd.first_continuum; n < Hd.N; ++n)
    ph[n] = std::exp(-I * Hd.lambda[n] * tau);
  parallel_for(nr, [&](std::size_t r) {
    cplx *row = &P[r * nc];
    for (std::size_t n = Hd.first_continuum; n < Hd.N; ++n) {
      const double *v = &Hd.vec[n * Hd.N];
      const cplx a = ph[n] * v[rows[r]];
      for (std::size_t c = 0; c < nc; ++c)
        row[c] += a * v[cols[c]];
    }
  });
  return P;
}

KernelField oracle_kernel(const DiscreteHamiltonian &Hd, cplx tau, const std::vector<double> &xs,
                          const std::vector<double> &ys) {
  std::vector<std::size_t> r, c;
  for (double x : xs)
    r.push_back(Hd.node(x));
  for (double y : ys)
    c.push_back(Hd.node(y));
  KernelField kf;
  kf.t = tau.real();
  kf.eps = -tau.imag();
  kf.x = xs;
  kf.y = ys;
  kf.route = Route::oracle;
  kf.K = eig_propagator(Hd, tau, r, c);
  for (auto &v : kf.K)
    v /= Hd.h;
  return kf;
}

namespace {

std::vector<double> frequencies(const DiscreteHamiltonian &Hd, double m) {
  if (!(m > 0.0) || !std::isfinite(m))
    throw Error(ErrorKind::NonFiniteMass, "KG mass must be finite and > 0");
  std::vector<double> w(Hd.N, 0.0);
  for (std::size_t n = Hd.first_continuum; n < Hd.N; ++n) {
    const double w2 = Hd.lambda[n] + m * m;
    if (!(w2 > 0.0))
      throw Error(ErrorKind::NegativeFrequency,
                  "lambda + m^2 <= 0 on a retained mode (check the continuum threshold)");
    w[n] = std::sqrt(w2);
  }
  return w;
}

} // namespace

std::pair<std::vector<double>, std::vector<double>>
kg_eig_apply(const DiscreteHamiltonian &Hd, double m, double t, const std::vector<double> &u0,
             const std::vector<double> &u1) {
  const auto w = frequencies(Hd, m);
  const auto a = coefficients(Hd, u0), b = coefficients(Hd, u1);
  std::vector<double> cu(Hd.N, 0.0), cd(Hd.N, 0.0);
  for (std::size_t n = Hd.first_continuum; n < Hd.N; ++n) {
    const double c = std::cos(t * w[n]), s = std::sin(t * w[n]);
    cu[n] = a[n] * c + b[n] * s / w[n];
    cd[n] = -a[n] * w[n] * s + b[n] * c;
  }
  return {synthesize(Hd, cu), synthesize(Hd, cd)};
}

KgBlocks kg_eig_propagator(const DiscreteHamiltonian &Hd, double m, double t) {
  const auto w = frequencies(Hd, m);
  const std::size_t N = Hd.N;
  KgBlocks B;
  for (auto *b : {&B.b11, &B.b12, &B.b21, &B.b22})
    b->assign(N * N, 0.0);
  parallel_for(N, [&](std::size_t r) {
    for (std::size_t n = Hd.first_continuum; n < N; ++n) {
      const double *v = &Hd.vec[n * N];
      const double c = std::cos(t * w[n]), s = std::sin(t * w[n]);
      const double a11 = c * v[r], a12 = s / w[n] * v[r], a21 = -w[n] * s * v[r];
      for (std::size_t q = 0; q < N; ++q) {
        B.b11[r * N + q] += a11 * v[q];
        B.b12[r * N + q] += a12 * v[q];
        B.b21[r * N + q] += a21 * v[q];
      }
    }
  });
  B.b22 = B.b11;
  return B;
}

double kg_energy(const DiscreteHamiltonian &Hd, double m, const std::vector<double> &u,
                 const std::vector<double> &ud) {
  const auto Hu = Hd.apply(u);
  double e = 0.0;
  for (std::size_t i = 0; i < Hd.N; ++i)
    e += ud[i] * ud[i] + u[i] * Hu[i] + m * m * u[i] * u[i];
  return e * Hd.h;
}

std::vector<cplx> split_step_evolve(const Potential &V, const std::vector<double> &x,
                                    const std::vector<cplx> &psi0, double t, std::size_t steps) {
  const std::size_t n = x.size();
  if (n < 4 || psi0.size() != n || steps == 0)
    throw Error(ErrorKind::InvalidArgument, "split-step needs a grid, matching data and steps");
  const double dx = x[1] - x[0], dt = t / double(steps);
  fftw_complex *buf = fftw_alloc_complex(n);
  fftw_plan fwd, bwd;
  {
    std::lock_guard<std::mutex> lk(planner_mutex());
    fwd = fftw_plan_dft_1d(int(n), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_1d(int(n), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  std::vector<cplx> half(n), kin(n), psi = psi0;
  for (std::size_t i = 0; i < n; ++i) {
    half[i] = std::exp(-0.5 * I * V(x[i]) * dt);
    const double k = 2.0 * pi * double(i < (n + 1) / 2 ? std::ptrdiff_t(i) : std::ptrdiff_t(i) - std::ptrdiff_t(n)) /
                     (double(n) * dx);
    kin[i] = std::exp(-I * k * k * dt) / double(n);
  }
  for (std::size_t s = 0; s < steps; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      const cplx v = psi[i] * half[i];
      buf[i][0] = v.real();
      buf[i][1] = v.imag();
    }
    fftw_execute(fwd);
    for (std::size_t i = 0; i < n; ++i) {
      const cplx v = cplx(buf[i][0], buf[i][1]) * kin[i];
      buf[i][0] = v.real();
      buf[i][1] = v.imag();
    }
    fftw_execute(bwd);
    for (std::size_t i = 0; i < n; ++i)
      psi[i] = cplx(buf[i][0], buf[i][1]) * half[i];
  }
  {
    std::lock_guard<std::mutex> lk(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  fftw_free(buf);
  return psi;
}

} // namespace disperse1d
