#include "disperse1d/wiener.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include <fftw3.h>

#include "disperse1d/errors.hpp"
#include "fft_lock.hpp"

namespace disperse1d {

std::mutex &planner_mutex() {
  static std::mutex m;
  return m;
}

namespace {

// exact transforms of the tail model: k/(k^2+1) -> -(i/2) sgn(p) e^{-|p|},
// 1/(k^2+1) -> (1/2) e^{-|p|}; `side` selects sgn(0) (0, +1 or -1)
cplx tail_hat(cplx a, cplx b, double p, int side = 0) {
  const double e = std::exp(-std::abs(p));
  const double sg = p > 0.0 ? 1.0 : p < 0.0 ? -1.0 : double(side);
  return -0.5 * I * a * sg * e + 0.5 * b * e;
}

// Least squares on real columns with a complex right-hand side (modified
// Gram-Schmidt; the columns are nearly collinear at large |k|).
std::vector<cplx> lsq(std::vector<std::vector<double>> cols, const std::vector<cplx> &rhs) {
  const std::size_t nc = cols.size(), nr = rhs.size();
  std::vector<std::vector<double>> R(nc, std::vector<double>(nc, 0.0));
  for (std::size_t j = 0; j < nc; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      double d = 0.0;
      for (std::size_t r = 0; r < nr; ++r)
        d += cols[i][r] * cols[j][r];
      R[i][j] = d;
      for (std::size_t r = 0; r < nr; ++r)
        cols[j][r] -= d * cols[i][r];
    }
    double nrm = 0.0;
    for (double v : cols[j])
      nrm += v * v;
    nrm = std::sqrt(nrm);
    R[j][j] = nrm;
    if (nrm > 0.0)
      for (double &v : cols[j])
        v /= nrm;
  }
  std::vector<cplx> qb(nc);
  for (std::size_t j = 0; j < nc; ++j) {
    cplx d = 0.0;
    for (std::size_t r = 0; r < nr; ++r)
      d += cols[j][r] * rhs[r];
    qb[j] = d;
  }
  std::vector<cplx> beta(nc);
  for (std::size_t j = nc; j-- > 0;) {
    cplx s = qb[j];
    for (std::size_t i = j + 1; i < nc; ++i)
      s -= R[j][i] * beta[i];
    beta[j] = R[j][j] > 0.0 ? s / R[j][j] : cplx(0.0);
  }
  return beta;
}

} // namespace

cplx WienerProfile::at(double pv) const {
  cplx v = tail_hat(tail_a, tail_b, pv);
  if (hat_res.empty())
    return v;
  const double u = (pv - p0) / dp;
  if (u < 0.0 || u > double(hat_res.size() - 1))
    return v;
  const std::size_t i = std::min(std::size_t(u), hat_res.size() - 2);
  const double t = u - double(i);
  return v + (1.0 - t) * hat_res[i] + t * hat_res[i + 1];
}

cplx WienerProfile::resynthesize(double k) const {
  cplx s = c + tail_a * k / (k * k + 1.0) + tail_b / (k * k + 1.0);
  const cplx step = std::exp(I * k * dp);
  cplx e = std::exp(I * k * p0);
  for (std::size_t m = 0; m < hat_res.size(); ++m) {
    if (m % 64 == 0)
      e = std::exp(I * k * p(m));
    s += hat_res[m] * e * dp;
    e *= step;
  }
  return s;
}

struct ProfileBuilder::Impl {
  fftw_plan plan = nullptr;
};

ProfileBuilder::ProfileBuilder(const KGrid &kg, std::size_t pad)
    : kg_(kg), npad_(0), impl_(std::make_unique<Impl>()) {
  if (pad < 1)
    throw Error(ErrorKind::InvalidArgument, "padding factor must be >= 1");
  npad_ = pad * (kg.n - 1);
  auto *buf = static_cast<fftw_complex *>(fftw_malloc(sizeof(fftw_complex) * npad_));
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    impl_->plan = fftw_plan_dft_1d(int(npad_), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_free(buf);
}

ProfileBuilder::~ProfileBuilder() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (impl_ && impl_->plan)
    fftw_destroy_plan(impl_->plan);
}

double ProfileBuilder::dp() const { return 2.0 * pi / (double(npad_) * kg_.dk()); }

WienerProfile ProfileBuilder::build(const std::vector<cplx> &f, const ProfileOptions &opt) const {
  const std::size_t n = kg_.n;
  if (f.size() != n)
    throw Error(ErrorKind::InvalidArgument, "profile input does not match the k-grid");
  double sup = 0.0;
  for (const cplx &v : f) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorKind::NonFiniteParameter, "profile input is not finite");
    sup = std::max(sup, std::abs(v));
  }

  WienerProfile P;
  // tail model on the outer nodes of both ends
  const std::size_t nt =
      std::max<std::size_t>(4, std::size_t(std::ceil(opt.tail_fraction * double(n))));
  std::vector<std::size_t> rows;
  for (std::size_t j = 0; j < nt; ++j) {
    rows.push_back(j);
    rows.push_back(n - 1 - j);
  }
  std::vector<std::vector<double>> cols;
  if (!opt.zero_constant)
    cols.emplace_back(rows.size(), 1.0);
  std::vector<double> ca(rows.size()), cb(rows.size());
  std::vector<cplx> rhs(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const double k = kg_.k(rows[r]);
    ca[r] = k / (k * k + 1.0);
    cb[r] = 1.0 / (k * k + 1.0);
    rhs[r] = f[rows[r]];
  }
  cols.push_back(ca);
  cols.push_back(cb);
  const auto beta = lsq(cols, rhs);
  std::size_t ib = 0;
  if (!opt.zero_constant)
    P.c = beta[ib++];
  P.tail_a = beta[ib++];
  P.tail_b = beta[ib++];
  auto model = [&](double k) {
    return P.c + P.tail_a * k / (k * k + 1.0) + P.tail_b / (k * k + 1.0);
  };
  for (std::size_t r = 0; r < rows.size(); ++r)
    P.fit_residual = std::max(P.fit_residual, std::abs(rhs[r] - model(kg_.k(rows[r]))));
  if (opt.check_limit && P.fit_residual > 0.01 * (1.0 + sup))
    throw Error(ErrorKind::NoLimitAtInfinity,
                "samples do not approach a constant at the grid ends (misfit " +
                    std::to_string(P.fit_residual) + ")");

  // transform of the residual
  const std::size_t N = npad_;
  auto *buf = static_cast<fftw_complex *>(fftw_malloc(sizeof(fftw_complex) * N));
  for (std::size_t j = 0; j < N; ++j) {
    cplx r = 0.0;
    if (j < n)
      r = f[j] - model(kg_.k(j));
    buf[j][0] = r.real();
    buf[j][1] = r.imag();
  }
  fftw_execute_dft(impl_->plan, buf, buf);

  const double dpv = dp(), scale = kg_.dk() / (2.0 * pi);
  const std::ptrdiff_t M = std::ptrdiff_t(N / 2);
  std::vector<cplx> res(N), full(N);
  double big = 0.0;
  for (std::size_t m = 0; m < N; ++m) {
    const std::ptrdiff_t q = std::ptrdiff_t(m) - M;
    const std::size_t idx = std::size_t((q + std::ptrdiff_t(N)) % std::ptrdiff_t(N));
    const double p = double(q) * dpv;
    res[m] = scale * std::exp(I * kg_.K * p) * cplx(buf[idx][0], buf[idx][1]);
    full[m] = res[m] + tail_hat(P.tail_a, P.tail_b, p);
    big = std::max(big, std::abs(full[m]));
  }
  fftw_free(buf);

  std::size_t lo = 0, hi = N - 1;
  if (opt.crop && big > 0.0) {
    const double thr = 1e-14 * big;
    while (lo < std::size_t(M) && std::abs(full[lo]) < thr && std::abs(res[lo]) < thr)
      ++lo;
    while (hi > std::size_t(M) && std::abs(full[hi]) < thr && std::abs(res[hi]) < thr)
      --hi;
  }
  P.dp = dpv;
  P.p0 = double(std::ptrdiff_t(lo) - M) * dpv;
  P.hat.assign(full.begin() + std::ptrdiff_t(lo), full.begin() + std::ptrdiff_t(hi) + 1);
  P.hat_res.assign(res.begin() + std::ptrdiff_t(lo), res.begin() + std::ptrdiff_t(hi) + 1);

  // trapezoid; the node p = 0 contributes its two one-sided limits
  double l1 = 0.0;
  for (std::size_t m = lo; m <= hi; ++m) {
    if (std::ptrdiff_t(m) == M) {
      const double left = std::abs(res[m] + tail_hat(P.tail_a, P.tail_b, 0.0, -1));
      const double right = std::abs(res[m] + tail_hat(P.tail_a, P.tail_b, 0.0, +1));
      l1 += 0.5 * (left + right);
    } else {
      l1 += std::abs(full[m]);
    }
  }
  P.l1_norm = l1 * dpv;
  return P;
}

WienerProfile to_profile(const std::vector<cplx> &f, const KGrid &kg, const ProfileOptions &opt) {
  ProfileBuilder pb(kg);
  return pb.build(f, opt);
}

std::vector<cplx> psi_samples(const JostField &F, const ScatteringData &sd, std::size_t ix,
                              std::size_t iy) {
  const std::size_t hi = F.x[ix] >= F.x[iy] ? ix : iy;
  const std::size_t lo = hi == ix ? iy : ix;
  std::vector<cplx> s(F.nk());
  for (std::size_t j = 0; j < F.nk(); ++j)
    s[j] = F.hp[F.at(hi, j)] * F.hm[F.at(lo, j)] * sd.T[j] - 1.0;
  return s;
}

WienerProfile psi_profile(const JostField &F, const ScatteringData &sd, std::size_t ix,
                          std::size_t iy, const ProfileBuilder &pb) {
  ProfileOptions po;
  po.zero_constant = true;
  return pb.build(psi_samples(F, sd, ix, iy), po);
}

WienerProfile psi_profile(const JostField &F, const ScatteringData &sd, std::size_t ix,
                          std::size_t iy) {
  ProfileBuilder pb(F.kg);
  return psi_profile(F, sd, ix, iy, pb);
}

std::vector<cplx> derivative(const std::vector<cplx> &f, double h) {
  const std::size_t n = f.size();
  std::vector<cplx> d(n);
  if (n < 5)
    throw Error(ErrorKind::InvalidArgument, "derivative needs at least 5 samples");
  for (std::size_t j = 2; j + 2 < n; ++j)
    d[j] = (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]) / (12.0 * h);
  // fourth-order one-sided stencils at the two outer nodes of each end
  d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
  d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
  d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] +
              3.0 * f[n - 5]) /
             (12.0 * h);
  d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) /
             (12.0 * h);
  return d;
}

double WeightedProfiles::max_l1() const {
  double m = 0.0;
  for (const auto &row : psi)
    for (const auto &p : row)
      m = std::max(m, p.l1_norm);
  return m;
}

WeightedProfiles weighted_psi_profiles(const JostField &F, const ScatteringData &sd,
                                       std::size_t ix, std::size_t iy, const ProfileBuilder &pb) {
  if (sd.resonance.cls != ResonanceClass::NonResonant)
    throw Error(ErrorKind::ResonantInput,
                "weighted profiles need a non-resonant potential (class " +
                    std::string(to_string(sd.resonance.cls)) + ")");
  const std::size_t nk = F.nk(), z = F.kg.zero();
  const double dist = std::abs(F.x[iy] - F.x[ix]);
  ProfileOptions po;
  po.zero_constant = true;
  WeightedProfiles out;
  for (int s = 0; s < 2; ++s) {
    const int sign = s == 0 ? 1 : -1;
    // P(k) = |T|^2 h(y,k) h(x,-k)
    std::vector<cplx> P(nk);
    for (std::size_t j = 0; j < nk; ++j)
      P[j] = std::norm(sd.T[j]) * F.h(sign, iy, j) * F.h(sign, ix, F.kg.mirror(j));
    const auto dP = derivative(P, F.kg.dk());
    std::vector<cplx> p1(nk), p2(nk), p3(nk);
    for (std::size_t j = 0; j < nk; ++j) {
      if (j == z)
        continue;
      const double k = F.kg.k(j);
      p1[j] = double(sign) * dist * P[j] / k;
      p2[j] = I * P[j] / (k * k);
      p3[j] = -I * dP[j] / k;
    }
    for (auto *v : {&p1, &p2, &p3})
      (*v)[z] = extrapolate_to_zero(*v, z);
    out.psi[0][std::size_t(s)] = pb.build(p1, po);
    out.psi[1][std::size_t(s)] = pb.build(p2, po);
    out.psi[2][std::size_t(s)] = pb.build(p3, po);
  }
  return out;
}

WeightedProfiles weighted_psi_profiles(const JostField &F, const ScatteringData &sd,
                                       std::size_t ix, std::size_t iy) {
  ProfileBuilder pb(F.kg);
  return weighted_psi_profiles(F, sd, ix, iy, pb);
}

namespace {

// int_u^inf g on a uniform grid (reverse cumulative trapezoid)
std::vector<double> tail_integral(const std::vector<double> &g, double h) {
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t i = g.size() - 1; i-- > 0;)
    out[i] = out[i + 1] + 0.5 * h * (g[i] + g[i + 1]);
  return out;
}

// composite Simpson of samples s[0..m] (m even), spacing h
template <class F> cplx simpson(std::size_t m, double h, F &&s) {
  if (m < 2)
    return 0.0;
  cplx acc = s(0) + s(m);
  for (std::size_t i = 1; i < m; ++i)
    acc += (i % 2 ? 4.0 : 2.0) * s(i);
  return acc * h / 3.0;
}

} // namespace

ResonantDiagnostics resonant_diagnostics(const JostField &F, const ScatteringData &sd) {
  ResonantDiagnostics out;
  const std::size_t i0 = F.node(0.0), z = F.kg.zero();
  ProfileBuilder pb(F.kg);
  ProfileOptions po;
  po.zero_constant = true;
  po.crop = false;
  po.check_limit = false;
  for (int s = 0; s < 2; ++s) {
    const int sign = s == 0 ? 1 : -1;
    auto &S = out.side[std::size_t(s)];
    const BKernel B = b_kernel(F, i0, sign, false, 1e-3);
    const BKernel dB = b_kernel(F, i0, sign, true, 1e-3);
    S.y = B.y;
    S.B = B.B;
    S.dB = dB.B;
    const std::size_t n = S.y.size();
    const double h = n > 1 ? std::abs(S.y[1] - S.y[0]) : 1.0;
    // in u = +-y >= 0 both signs read K(u) = int_u^inf B
    S.K = tail_integral(S.B, h);
    S.D = tail_integral(S.dB, h);
    const double h0 = F.h(sign, i0, z).real(), d0 = F.dh(sign, i0, z).real();
    S.H.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      S.H[i] = S.D[i] * h0 - S.K[i] * d0;

    // running int_0^X |H| on a geometric X ladder
    std::vector<double> cum(n, 0.0);
    for (std::size_t i = 1; i < n; ++i)
      cum[i] = cum[i - 1] + 0.5 * h * (std::abs(S.H[i - 1]) + std::abs(S.H[i]));
    const double umax = n ? std::abs(S.y.back()) : 0.0;
    for (double X = 0.1; X < umax * (1.0 + 1e-12); X *= std::sqrt(10.0)) {
      S.X.push_back(X);
      S.tail.push_back(cum[std::min(n - 1, std::size_t(std::llround(X / h)))]);
    }
    S.X.push_back(umax);
    S.tail.push_back(cum.empty() ? 0.0 : cum.back());
    const double total = S.tail.back();
    const double decade = cum[std::min(n - 1, std::size_t(std::llround(0.1 * umax / h)))];
    S.last_decade_increment = total > 0.0 ? (total - decade) / total : 0.0;
    S.converged = S.last_decade_increment < 1e-3;
    out.slow_convergence = out.slow_convergence || !S.converged;

    // F(u) = 2 Rhat(-2u) + 2 sum_j e^{-2 kappa_j u} / int f^2 in the u variable
    const auto &R = sign > 0 ? sd.Rp : sd.Rm;
    const WienerProfile Rp = pb.build(R, po);
    std::vector<cplx> Fu(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = std::abs(S.y[i]);
      cplx v = i == 0 ? 2.0 * (Rp.at(0.0) + 0.5 * I * Rp.tail_a) : 2.0 * Rp.at(-2.0 * u);
      for (const auto &b : sd.bound) {
        const double nsq = sign > 0 ? b.norm_sq_plus : b.norm_sq_minus;
        v += 2.0 * std::exp(-2.0 * b.kappa * u) / nsq;
      }
      Fu[i] = v;
    }
    S.F.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      S.F[i] = Fu[i].real();
    // residual on u <= min(20, umax/2); the neglected z-tail is beyond the grid
    double worst = 0.0;
    const std::size_t imax = std::min(n / 2, std::size_t(20.0 / h));
    for (std::size_t i = 0; i <= imax && i < n; ++i) {
      std::size_t m = n - 1 - i;
      m -= m % 2;
      const cplx conv = simpson(m, h, [&](std::size_t w) { return S.B[w] * Fu[i + w]; });
      worst = std::max(worst, std::abs(Fu[i] + S.B[i] + conv));
    }
    S.glm_residual = worst;
  }
  return out;
}

} // namespace disperse1d
