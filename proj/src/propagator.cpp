#include "disperse1d/propagator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <fftw3.h>

#include "disperse1d/errors.hpp"
#include "disperse1d/oscquad.hpp"
#include "disperse1d/parallel.hpp"
#include "fft_lock.hpp"

namespace disperse1d {

namespace {

using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;

//! Complex cubic spline on a uniform grid.
struct CSpline {
  Spline re, im;
  CSpline(const std::vector<cplx> &v, double k0, double h) {
    std::vector<double> a(v.size()), b(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
      a[j] = v[j].real();
      b[j] = v[j].imag();
    }
    re = Spline(a.data(), a.size(), k0, h);
    im = Spline(b.data(), b.size(), k0, h);
  }
  cplx operator()(double k) const { return {re(k), im(k)}; }
};

double cos_taper(double k, double K, double frac) {
  const double a = std::abs(k), k0 = (1.0 - frac) * K;
  if (a <= k0)
    return 1.0;
  if (a >= K)
    return 0.0;
  return 0.5 * (1.0 + std::cos(pi * (a - k0) / (K - k0)));
}

cplx prefactor(cplx tau) { return 1.0 / std::sqrt(4.0 * pi * I * tau); }

//! Index of x in a sorted grid, within a relative 1e-9 of a node.
std::size_t find_node(const std::vector<double> &xs, double x) {
  auto it = std::lower_bound(xs.begin(), xs.end(), x - 1e-9 * (1.0 + std::abs(x)));
  if (it != xs.end() && std::abs(*it - x) <= 1e-9 * (1.0 + std::abs(x)))
    return std::size_t(it - xs.begin());
  throw Error(ErrorKind::InvalidArgument,
              "x = " + std::to_string(x) + " is neither a field node nor beyond the cutoff");
}

struct RefKey {
  std::uint32_t ix, iy;
  std::int64_t sh;
  bool operator==(const RefKey &o) const { return ix == o.ix && iy == o.iy && sh == o.sh; }
};
struct RefKeyHash {
  std::size_t operator()(const RefKey &k) const {
    std::uint64_t h = (std::uint64_t(k.ix) << 32) ^ k.iy;
    h ^= std::uint64_t(k.sh) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return std::size_t(h);
  }
};

std::int64_t quantize(double shift) { return std::llround(shift * 1e8); }

//! Distinct (profile, shift) pairs grouped by profile.
struct ShiftTable {
  std::unordered_map<RefKey, std::size_t, RefKeyHash> slot;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> profiles;
  std::vector<std::vector<double>> shifts;   //!< per profile
  std::vector<std::vector<std::size_t>> out; //!< per profile: slot index of each shift
  std::size_t nslots = 0;

  std::size_t add(const FresnelKernel::Ref &r) {
    const RefKey key{std::uint32_t(r.ix), std::uint32_t(r.iy), quantize(r.shift)};
    auto it = slot.find(key);
    if (it != slot.end())
      return it->second;
    const RefKey pk{key.ix, key.iy, INT64_MIN};
    std::size_t g;
    auto pg = slot.find(pk);
    if (pg == slot.end()) {
      g = profiles.size();
      profiles.emplace_back(key.ix, key.iy);
      shifts.emplace_back();
      out.emplace_back();
      slot.emplace(pk, g);
    } else {
      g = pg->second;
    }
    shifts[g].push_back(r.shift);
    out[g].push_back(nslots);
    slot.emplace(key, nslots);
    return nslots++;
  }
};

} // namespace

const char *to_string(Route r) {
  switch (r) {
  case Route::direct:
    return "direct";
  case Route::fresnel:
    return "fresnel";
  case Route::kg12:
    return "kg12";
  case Route::kg11:
    return "kg11";
  case Route::kg21:
    return "kg21";
  case Route::kg22:
    return "kg22";
  case Route::oracle:
    return "oracle";
  }
  return "?";
}

Route route_from_string(const std::string &name) {
  for (Route r : {Route::direct, Route::fresnel, Route::kg12, Route::kg11, Route::kg21,
                  Route::kg22, Route::oracle})
    if (name == to_string(r))
      return r;
  throw Error(ErrorKind::InvalidArgument, "unknown route '" + name + "'");
}

double KernelField::symmetry_residual() const {
  if (x != y)
    throw Error(ErrorKind::InvalidArgument, "symmetry needs coinciding x- and y-grids");
  double big = 0.0, r = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) {
      big = std::max(big, std::abs((*this)(i, j)));
      r = std::max(r, std::abs((*this)(i, j) - (*this)(j, i)));
    }
  return big > 0.0 ? r / big : r;
}

bool KernelField::finite() const {
  return std::all_of(K.begin(), K.end(), [](cplx v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

cplx resolvent_kernel(const JostField &F, const ScatteringData &sd, std::size_t ix,
                      std::size_t iy, std::size_t jk, int side) {
  if (!(F.kg.k(jk) > 0.0))
    throw Error(ErrorKind::InvalidArgument, "resolvent kernel needs k > 0");
  const std::size_t j = side > 0 ? jk : F.kg.mirror(jk);
  const std::size_t hi = F.x[ix] >= F.x[iy] ? ix : iy;
  const std::size_t lo = hi == ix ? iy : ix;
  const cplx W = sd.W[j];
  if (std::abs(W) < 1e-12 * 2.0 * std::abs(F.kg.k(j)))
    throw Error(ErrorKind::InteriorZero, "W vanishes at k = " + std::to_string(F.kg.k(j)));
  return -F.f(+1, hi, j) * F.f(-1, lo, j) / W;
}

cplx resolvent_jump(const JostField &F, const ScatteringData &sd, std::size_t ix, std::size_t iy,
                    std::size_t jk) {
  const double k = F.kg.k(jk);
  if (!(k > 0.0))
    throw Error(ErrorKind::InvalidArgument, "resolvent jump needs k > 0");
  const std::size_t m = F.kg.mirror(jk);
  const double T2 = std::norm(sd.T[jk]);
  return T2 / (-2.0 * I * k) *
         (F.f(+1, iy, jk) * F.f(+1, ix, m) + F.f(-1, iy, jk) * F.f(-1, ix, m));
}

cplx free_kernel(double x, double y, cplx tau) {
  if (tau == 0.0)
    throw Error(ErrorKind::ZeroTime, "free kernel at t = 0");
  const double D = x - y;
  return std::exp(I * D * D / (4.0 * tau)) * prefactor(tau);
}

cplx fresnel_chirp_sum(const WienerProfile &prof, double shift, cplx tau) {
  const std::size_t n = prof.size();
  if (n == 0)
    return 0.0;
  const cplx alpha = 1.0 / (4.0 * tau);
  const double dp = prof.dp;
  // e^{i a (p+s)^2} by a restarted second-order recurrence
  const cplx step2 = std::exp(2.0 * I * alpha * dp * dp);
  cplx acc = 0.0, z = 0.0, r = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    if (m % 64 == 0) {
      const double q = prof.p(m) + shift;
      z = std::exp(I * alpha * q * q);
      r = std::exp(I * alpha * (2.0 * q * dp + dp * dp));
    }
    acc += z * prof.hat[m];
    z *= r;
    r *= step2;
  }
  return acc * dp;
}

FresnelKernel::FresnelKernel(const JostField &field, const ScatteringData &sd)
    : field_(field), sd_(sd), pb_(std::make_unique<ProfileBuilder>(field.kg)) {
  const auto &x = field.x;
  const double L = field.cutoff;
  right_free_ = x.back() >= L;
  left_free_ = x.front() <= -L;
  ir_ = x.size() - 1;
  il_ = 0;
  if (right_free_)
    ir_ = std::size_t(std::lower_bound(x.begin(), x.end(), L - 1e-12) - x.begin());
  if (left_free_)
    il_ = std::size_t(std::upper_bound(x.begin(), x.end(), -L + 1e-12) - x.begin()) - 1;
  xr_ = x[ir_];
  xl_ = x[il_];
}

FresnelKernel::~FresnelKernel() = default;

FresnelKernel::Ref FresnelKernel::reduce(double x, double y) const {
  if (x > y)
    std::swap(x, y);
  Ref r;
  r.D = y - x;
  if (right_free_ && x >= xr_) {
    r.ix = r.iy = ir_;
    r.shift = 2.0 * (x - xr_) + r.D;
  } else if (left_free_ && y <= xl_) {
    r.ix = r.iy = il_;
    r.shift = -2.0 * (y - xl_) + r.D;
  } else {
    r.ix = (left_free_ && x <= xl_) ? il_ : find_node(field_.x, x);
    r.iy = (right_free_ && y >= xr_) ? ir_ : find_node(field_.x, y);
    r.shift = r.D;
  }
  return r;
}

namespace {

//! Chirp sums for every (profile, shift) slot and every tau; [slot * ntau + q].
std::vector<cplx> chirp_table(const JostField &F, const ScatteringData &sd,
                              const ProfileBuilder &pb, const ShiftTable &tab,
                              const std::vector<cplx> &taus) {
  const std::size_t nt = taus.size();
  std::vector<cplx> out(tab.nslots * nt);
  parallel_for(tab.profiles.size(), [&](std::size_t g) {
    const auto [ix, iy] = tab.profiles[g];
    const WienerProfile prof = psi_profile(F, sd, ix, iy, pb);
    for (std::size_t s = 0; s < tab.shifts[g].size(); ++s)
      for (std::size_t q = 0; q < nt; ++q)
        out[tab.out[g][s] * nt + q] = fresnel_chirp_sum(prof, tab.shifts[g][s], taus[q]);
  });
  return out;
}

} // namespace

std::vector<KernelField> FresnelKernel::fields(const std::vector<double> &xs,
                                               const std::vector<double> &ys,
                                               const std::vector<cplx> &taus) const {
  for (cplx tau : taus)
    if (!(tau.real() > 0.0) || tau.imag() > 0.0)
      throw Error(ErrorKind::ZeroTime, "kernel needs Re tau > 0 and Im tau <= 0");
  ShiftTable tab;
  std::vector<std::size_t> slot(xs.size() * ys.size());
  std::vector<Ref> refs(slot.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j) {
      refs[i * ys.size() + j] = reduce(xs[i], ys[j]);
      slot[i * ys.size() + j] = tab.add(refs[i * ys.size() + j]);
    }
  const auto sums = chirp_table(field_, sd_, *pb_, tab, taus);
  std::vector<KernelField> out(taus.size());
  for (std::size_t q = 0; q < taus.size(); ++q) {
    auto &kf = out[q];
    kf.t = taus[q].real();
    kf.eps = -taus[q].imag();
    kf.x = xs;
    kf.y = ys;
    kf.route = Route::fresnel;
    kf.K.resize(slot.size());
    const cplx pre = prefactor(taus[q]), alpha = 1.0 / (4.0 * taus[q]);
    for (std::size_t n = 0; n < slot.size(); ++n) {
      const double D = refs[n].D;
      kf.K[n] = pre * (std::exp(I * alpha * D * D) + sums[slot[n] * taus.size() + q]);
    }
  }
  return out;
}

KernelField FresnelKernel::field(const std::vector<double> &xs, const std::vector<double> &ys,
                                 cplx tau) const {
  return std::move(fields(xs, ys, {tau}).front());
}

std::vector<double> FresnelKernel::window_sup(const std::vector<double> &nodes,
                                              const std::vector<cplx> &taus, double sigma,
                                              std::vector<double> *half,
                                              double half_radius) const {
  const std::size_t n = nodes.size(), nt = taus.size();
  ShiftTable tab;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      tab.add(reduce(nodes[i], nodes[j]));
  const auto sums = chirp_table(field_, sd_, *pb_, tab, taus);
  std::vector<cplx> pre(nt), alpha(nt);
  for (std::size_t q = 0; q < nt; ++q) {
    pre[q] = prefactor(taus[q]);
    alpha[q] = 1.0 / (4.0 * taus[q]);
  }
  std::vector<double> sup(nt, 0.0);
  if (half)
    half->assign(nt, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = std::pow(1.0 + std::abs(nodes[i]), -sigma);
    for (std::size_t j = i; j < n; ++j) {
      const bool inner = half && std::abs(nodes[i]) <= half_radius && std::abs(nodes[j]) <= half_radius;
      const Ref r = reduce(nodes[i], nodes[j]);
      const std::size_t s = tab.slot.at(RefKey{std::uint32_t(r.ix), std::uint32_t(r.iy),
                                               quantize(r.shift)});
      const double w = wi * std::pow(1.0 + std::abs(nodes[j]), -sigma);
      for (std::size_t q = 0; q < nt; ++q) {
        const cplx K = pre[q] * (std::exp(I * alpha[q] * r.D * r.D) + sums[s * nt + q]);
        sup[q] = std::max(sup[q], std::abs(K) * w);
        if (inner)
          (*half)[q] = std::max((*half)[q], std::abs(K) * w);
      }
    }
  }
  return sup;
}

cplx FresnelKernel::value(double x, double y, cplx tau) const {
  const Ref r = reduce(x, y);
  const WienerProfile prof = psi_profile(field_, sd_, r.ix, r.iy, *pb_);
  return prefactor(tau) *
         (std::exp(I * r.D * r.D / (4.0 * tau)) + fresnel_chirp_sum(prof, r.shift, tau));
}

KernelField schrodinger_kernel_fresnel(const JostField &field, const ScatteringData &sd,
                                       double t, const std::vector<double> &window, double eps) {
  FresnelKernel fk(field, sd);
  return fk.field(window, window, cplx(t, -eps));
}

cplx direct_kernel_value(const JostField &F, const ScatteringData &sd, const FresnelKernel &fk,
                         double x, double y, cplx tau, const DirectOptions &opt) {
  const double t = tau.real(), eps = -tau.imag();
  if (!(t > 0.0))
    throw Error(ErrorKind::ZeroTime, "direct route needs t > 0");
  const auto r = fk.reduce(x, y);
  const double K = F.kg.K;

  OscOptions oo;
  oo.rtol = opt.rtol;
  oo.atol = opt.atol;
  auto quad = [&](double a, double lim, const std::function<cplx(double)> &amp) {
    OscIntegral q;
    const double b = a / t;
    q.phi = [b](double k) { return -k * k + b * k; };
    q.dphi = [b](double k) { return -2.0 * k + b; };
    q.ddphi = [](double) { return -2.0; };
    q.f = amp;
    q.a = -lim;
    q.b = lim;
    q.t = t;
    const auto res = oscint_detailed(q, oo);
    if (!std::isfinite(std::abs(res.value)))
      throw Error(ErrorKind::NoConvergence, "direct route quadrature diverged");
    return res.value;
  };

  const double Kc = std::max({1.5 * K, 100.0 / std::sqrt(t), r.D / t + 20.0 / std::sqrt(t)});
  const cplx free = quad(r.D, Kc, [&](double k) {
    return cplx(cos_taper(k, Kc, 0.1) * std::exp(-eps * k * k), 0.0);
  });

  const CSpline psi(psi_samples(F, sd, r.ix, r.iy), -K, F.kg.dk());
  const double ft = opt.psi_taper;
  const cplx rest = quad(r.shift, K, [&](double k) {
    return psi(k) * (cos_taper(k, K, ft) * std::exp(-eps * k * k));
  });
  return (free + rest) / (2.0 * pi);
}

KernelField schrodinger_kernel_direct(const JostField &field, const ScatteringData &sd, double t,
                                      const std::vector<double> &window, double eps,
                                      const DirectOptions &opt) {
  FresnelKernel fk(field, sd);
  KernelField kf;
  kf.t = t;
  kf.eps = eps;
  kf.x = kf.y = window;
  kf.route = Route::direct;
  const std::size_t n = window.size();
  kf.K.resize(n * n);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = i; j < n; ++j) {
      const cplx v = direct_kernel_value(field, sd, fk, window[i], window[j], cplx(t, -eps), opt);
      kf.K[i * n + j] = v;
      kf.K[j * n + i] = v;
    }
  });
  return kf;
}

double kg_symbol(int entry, double k, double m, double t) {
  const double w = std::sqrt(k * k + m * m);
  switch (entry) {
  case 11:
  case 22:
    return std::cos(t * w);
  case 12:
    return std::sin(t * w) / w;
  case 21:
    return -w * std::sin(t * w);
  default:
    throw Error(ErrorKind::InvalidArgument, "KG entry must be 11, 12, 21 or 22");
  }
}

double kg_det_residual(const std::vector<double> &ks, double m, double t) {
  double r = 0.0;
  for (double k : ks) {
    const double det =
        kg_symbol(11, k, m, t) * kg_symbol(22, k, m, t) - kg_symbol(12, k, m, t) * kg_symbol(21, k, m, t);
    r = std::max(r, std::abs(det - 1.0));
  }
  return r;
}

namespace {

//! Filon-type interval integrals I_l = int_{x_l}^{x_{l+1}} g(y) e^{i kap y} dy on a
//! uniform grid: g is replaced by its local degree-5 interpolant (nodes
//! l-2..l+3, shifted inward at the ends) and the product integrated exactly,
//! so the rule stays accurate for kap h >> 1 where the trapezoid rule aliases.
class FilonRule {
public:
  static constexpr int kNodes = 6;

  FilonRule(double h, double kap) : kap_(kap) {
    // M_p = int_0^h u^p e^{i kap u} du
    std::array<cplx, kNodes> M{};
    const cplx z = I * kap * h;
    if (std::abs(z) < 2.0) {
      for (int p = 0; p < kNodes; ++p) {
        cplx term = 1.0, sum = 0.0;
        for (int n = 0; n < 60; ++n) {
          if (n > 0)
            term *= z / double(n);
          sum += term / double(n + p + 1);
        }
        M[p] = sum * std::pow(h, p + 1);
      }
    } else {
      const cplx e = std::exp(z);
      M[0] = (e - 1.0) / (I * kap);
      for (int p = 1; p < kNodes; ++p)
        M[p] = (std::pow(h, p) * e - double(p) * M[p - 1]) / (I * kap);
    }
    // stencil start relative to the interval's left node: -2 (interior) down to 0 / up to -4
    for (int s = 0; s < kNodes - 1; ++s) {
      const int start = -s;
      for (int q = 0; q < kNodes; ++q) {
        std::array<double, kNodes> c{};
        c[0] = 1.0;
        double den = 1.0;
        for (int r = 0; r < kNodes; ++r) {
          if (r == q)
            continue;
          const double ur = double(start + r) * h;
          for (int p = kNodes - 1; p >= 0; --p)
            c[p] = (p > 0 ? c[p - 1] : 0.0) - ur * c[p];
          den *= double(q - r) * h;
        }
        cplx w = 0.0;
        for (int p = 0; p < kNodes; ++p)
          w += c[p] * M[p];
        W_[s][q] = w / den;
      }
    }
  }

  //! g(l) for node l; x uniform with at least kNodes nodes.
  template <class G> std::vector<cplx> intervals(const std::vector<double> &x, G &&g) const {
    const std::ptrdiff_t n = std::ptrdiff_t(x.size());
    std::vector<cplx> gv(x.size()), out(x.size() - 1);
    for (std::size_t l = 0; l < x.size(); ++l)
      gv[l] = g(l);
    for (std::ptrdiff_t l = 0; l + 1 < n; ++l) {
      const std::ptrdiff_t start = std::clamp<std::ptrdiff_t>(l - 2, 0, n - kNodes);
      const auto &w = W_[std::size_t(l - start)];
      cplx acc = 0.0;
      for (int q = 0; q < kNodes; ++q)
        acc += w[q] * gv[std::size_t(start + q)];
      out[std::size_t(l)] = std::exp(I * kap_ * x[std::size_t(l)]) * acc;
    }
    return out;
  }

private:
  double kap_;
  std::array<std::array<cplx, kNodes>, kNodes - 1> W_{};
};

void require_uniform(const std::vector<double> &x) {
  if (x.size() < std::size_t(FilonRule::kNodes))
    throw Error(ErrorKind::InvalidArgument, "KG quadrature needs at least 6 x-nodes");
  const double h = x[1] - x[0];
  for (std::size_t i = 1; i < x.size(); ++i)
    if (std::abs(x[i] - x[i - 1] - h) > 1e-9 * h)
      throw Error(ErrorKind::InvalidArgument, "KG quadrature needs a uniform x-grid");
}

} // namespace

std::vector<cplx> kg_inner(const JostField &F, const ScatteringData &sd,
                           const std::vector<double> &f) {
  const std::size_t nx = F.nx(), nk = F.nk();
  if (f.size() != nx)
    throw Error(ErrorKind::InvalidArgument, "f must be sampled on the field x-grid");
  require_uniform(F.x);
  const double h = F.x[1] - F.x[0];
  std::vector<cplx> A(nx * nk);
  parallel_for(nk, [&](std::size_t j) {
    const double k = F.kg.k(j);
    // f_+-(y) = e^{+-iky} h_+-(y): the exponential is integrated exactly
    const auto Ip = FilonRule(h, k).intervals(F.x, [&](std::size_t l) { return f[l] * F.h(+1, l, j); });
    const auto Im = FilonRule(h, -k).intervals(F.x, [&](std::size_t l) { return f[l] * F.h(-1, l, j); });
    // below(i) = int_{y < x_i} f f_-; above(i) = int_{y > x_i} f f_+
    std::vector<cplx> above(nx, 0.0);
    for (std::size_t l = nx - 1; l-- > 0;)
      above[l] = above[l + 1] + Ip[l];
    cplx below = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
      A[i * nk + j] = sd.T[j] * (F.f(+1, i, j) * below + F.f(-1, i, j) * above[i]);
      if (i + 1 < nx)
        below += Im[i];
    }
  });
  return A;
}

namespace {

//! Half-width of the k-range carrying the amplitude (|A| > 1e-15 max).
std::size_t active_half_width(const std::vector<cplx> &A, std::size_t rows, std::size_t nk) {
  std::vector<double> col(nk, 0.0);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < nk; ++j)
      col[j] = std::max(col[j], std::abs(A[i * nk + j]));
  const double big = *std::max_element(col.begin(), col.end());
  const std::size_t z = nk / 2;
  std::size_t h = 8;
  for (std::size_t j = 0; j < nk; ++j)
    if (col[j] > 1e-15 * big)
      h = std::max(h, j > z ? j - z : z - j);
  return std::min(h + 4, z);
}

} // namespace

std::vector<cplx> kg_apply_inner(const JostField &F, const std::vector<cplx> &A, double m,
                                 double t, int entry) {
  if (!(m > 0.0) || !std::isfinite(m))
    throw Error(ErrorKind::NonFiniteMass, "KG mass must be finite and > 0");
  if (entry != 11 && entry != 12 && entry != 21 && entry != 22)
    throw Error(ErrorKind::InvalidArgument, "KG entry must be 11, 12, 21 or 22");
  const std::size_t nx = F.nx(), nk = F.nk();
  const KGrid &kg = F.kg;
  {
    const double r = kg_det_residual(kg.nodes(), m, t);
    if (r > 1e-12)
      throw Error(ErrorKind::BoundViolated, "det M_t deviates from 1 by " + std::to_string(r));
  }
  const std::size_t h = active_half_width(A, nx, nk);
  const std::size_t j0 = kg.zero() - h, n = 2 * h + 1;
  const double Ka = double(h) * kg.dk();

  // M = c_+ e^{it omega} + c_- e^{-it omega} with k-dependent c_+-
  auto coef = [entry, m](double k, int s) -> cplx {
    const double w = std::sqrt(k * k + m * m);
    switch (entry) {
    case 12:
      return double(s) / (2.0 * I * w);
    case 21:
      return -double(s) * w / (2.0 * I);
    default:
      return 0.5;
    }
  };

  OscOptions oo;
  oo.rtol = 1e-7;
  std::vector<cplx> u(nx);
  parallel_for(nx, [&](std::size_t i) {
    const CSpline a(std::vector<cplx>(A.begin() + std::ptrdiff_t(i * nk + j0),
                                      A.begin() + std::ptrdiff_t(i * nk + j0 + n)),
                    -Ka, kg.dk());
    // absolute floor well below the amplitude's l1 mass: panels where the
    // chirp cancels need not be resolved to a relative tolerance
    double mass = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      mass += std::abs(A[i * nk + j0 + j]) * kg.dk() / std::sqrt(kg.k(j0 + j) * kg.k(j0 + j) + m * m) *
              std::max(1.0, kg.k(j0 + j) * kg.k(j0 + j) + m * m);
    OscOptions oi = oo;
    oi.atol = 1e-10 * mass;
    cplx acc = 0.0;
    for (int s : {+1, -1}) {
      OscIntegral q;
      const double sd = s;
      q.phi = [sd, m](double k) { return sd * std::sqrt(k * k + m * m); };
      q.dphi = [sd, m](double k) { return sd * k / std::sqrt(k * k + m * m); };
      q.ddphi = [sd, m](double k) {
        const double w = std::sqrt(k * k + m * m);
        return sd * m * m / (w * w * w);
      };
      q.f = [&, s](double k) { return coef(k, s) * a(k); };
      q.a = -Ka;
      q.b = Ka;
      q.t = t;
      acc += oscint(q, oi);
    }
    u[i] = acc / (2.0 * pi);
  });
  return u;
}

std::vector<cplx> kg_apply(const JostField &field, const ScatteringData &sd, double m, double t,
                           const std::vector<double> &f, int entry) {
  return kg_apply_inner(field, kg_inner(field, sd, f), m, t, entry);
}

KgFarField kg_far_field(const JostField &F, const ScatteringData &sd, double m, double t,
                        const std::vector<double> &f, int entry, double xmin, double xmax,
                        double dx) {
  if (!(m > 0.0) || !std::isfinite(m))
    throw Error(ErrorKind::NonFiniteMass, "KG mass must be finite and > 0");
  const std::size_t nx = F.nx(), nk = F.nk();
  if (f.size() != nx)
    throw Error(ErrorKind::InvalidArgument, "f must be sampled on the field x-grid");
  double fmax = 0.0, xs = 0.0;
  for (double v : f)
    fmax = std::max(fmax, std::abs(v));
  for (std::size_t i = 0; i < nx; ++i)
    if (std::abs(f[i]) > 1e-16 * fmax)
      xs = std::max(xs, std::abs(F.x[i]));
  if (xmin < std::max(F.cutoff, xs))
    throw Error(ErrorKind::InvalidArgument,
                "far field starts inside the support of V or f");
  if (!(dx > 0.0) || !(xmax > xmin))
    throw Error(ErrorKind::InvalidArgument, "bad far-field range");

  require_uniform(F.x);
  const double hx = F.x[1] - F.x[0];
  std::vector<cplx> Fp(nk, 0.0), Fm(nk, 0.0);
  parallel_for(nk, [&](std::size_t j) {
    const double k = F.kg.k(j);
    for (const cplx v : FilonRule(hx, -k).intervals(F.x, [&](std::size_t l) { return f[l] * F.h(-1, l, j); }))
      Fp[j] += v;
    for (const cplx v : FilonRule(hx, k).intervals(F.x, [&](std::size_t l) { return f[l] * F.h(+1, l, j); }))
      Fm[j] += v;
    Fp[j] *= sd.T[j];
    Fm[j] *= sd.T[j];
  });
  const KGrid &kg = F.kg;
  const double K = kg.K;
  if (dx > pi / K)
    dx = pi / K;
  // period must hold everything the Fourier integral spreads into (speed <= 1)
  const double span = xmax + std::abs(t) + 2.0 * xs + 50.0;
  std::size_t N = 1024;
  while (double(N) * dx < span)
    N *= 2;
  const double dkf = 2.0 * pi / (double(N) * dx);
  const std::size_t nf = std::size_t(std::floor(2.0 * K / dkf)) + 1;

  const CSpline sp(Fp, -K, kg.dk()), sm(Fm, -K, kg.dk());
  fftw_complex *buf = fftw_alloc_complex(N);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lk(planner_mutex());
    plan = fftw_plan_dft_1d(int(N), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  KgFarField out;
  std::size_t n0 = std::size_t(std::ceil(xmin / dx)), n1 = std::size_t(std::floor(xmax / dx));
  for (std::size_t n = n0; n <= n1; ++n)
    out.x.push_back(double(n) * dx);
  for (int side : {+1, -1}) {
    const CSpline &s = side > 0 ? sp : sm;
    for (std::size_t q = 0; q < N; ++q)
      buf[q][0] = buf[q][1] = 0.0;
    for (std::size_t q = 0; q < nf; ++q) {
      const double k = -K + double(q) * dkf;
      const double wq = (q == 0 || q + 1 == nf) ? 0.5 : 1.0;
      const cplx g = wq * kg_symbol(entry, k, m, t) * s(k);
      buf[q][0] = g.real();
      buf[q][1] = g.imag();
    }
    fftw_execute(plan);
    auto &dst = side > 0 ? out.right : out.left;
    for (std::size_t n = n0; n <= n1; ++n) {
      const double x = double(n) * dx;
      const cplx v(buf[n % N][0], buf[n % N][1]);
      dst.push_back(v * std::exp(-I * K * x) * dkf / (2.0 * pi));
    }
  }
  {
    std::lock_guard<std::mutex> lk(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
  return out;
}

} // namespace disperse1d
