#include "disperse1d/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "disperse1d/errors.hpp"

namespace disperse1d {

namespace {

std::ofstream open_out(const std::string &path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out)
    throw Error(ErrorKind::IoFailure, "cannot write " + path);
  return out;
}

constexpr char kCacheMagic[8] = {'D', '1', 'K', 'E', 'R', 'N', '0', '1'};

template <class T> void put(std::ofstream &o, const T &v) {
  o.write(reinterpret_cast<const char *>(&v), sizeof(T));
}
template <class T> bool take(std::ifstream &in, T &v) {
  return bool(in.read(reinterpret_cast<char *>(&v), sizeof(T)));
}

std::vector<std::string> split(const std::string &line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep))
    out.push_back(item);
  return out;
}

} // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

void write_scattering_csv(const ScatteringData &sd, const std::string &path) {
  auto out = open_out(path);
  out << "k,Re_T,Im_T,Re_Rp,Im_Rp,Re_Rm,Im_Rm\n";
  for (std::size_t j = 0; j < sd.kg.n; ++j)
    out << format_double(sd.kg.k(j)) << ',' << format_double(sd.T[j].real()) << ','
        << format_double(sd.T[j].imag()) << ',' << format_double(sd.Rp[j].real()) << ','
        << format_double(sd.Rp[j].imag()) << ',' << format_double(sd.Rm[j].real()) << ','
        << format_double(sd.Rm[j].imag()) << '\n';
}

void write_bound_states_csv(const ScatteringData &sd, const std::string &path) {
  auto out = open_out(path);
  out << "kappa";
  for (double x : sd.x)
    out << ',' << format_double(x);
  out << '\n';
  for (const auto &b : sd.bound) {
    out << format_double(b.kappa);
    for (double v : b.phi)
      out << ',' << format_double(v);
    out << '\n';
  }
}

void write_profile_csv(const WienerProfile &prof, const std::string &path) {
  auto out = open_out(path);
  out << "# c = " << format_double(prof.c.real()) << ' ' << format_double(prof.c.imag()) << '\n';
  out << "# l1_norm = " << format_double(prof.l1_norm) << '\n';
  out << "p,Re_g,Im_g\n";
  for (std::size_t m = 0; m < prof.size(); ++m)
    out << format_double(prof.p(m)) << ',' << format_double(prof.hat[m].real()) << ','
        << format_double(prof.hat[m].imag()) << '\n';
}

void write_appendix_csv(const AppendixReport &rep, const std::string &path) {
  auto out = open_out(path);
  out << "t,v,J,sqrt_t_times_J\n";
  for (const auto &r : rep.rows)
    out << format_double(r.t) << ',' << format_double(r.v) << ',' << format_double(r.J) << ','
        << format_double(r.sqrt_t_J) << '\n';
}

void write_kernel_csv(const KernelField &K, const std::string &path) {
  auto out = open_out(path);
  out << "x,y,Re_K,Im_K,abs_K\n";
  for (std::size_t i = 0; i < K.x.size(); ++i)
    for (std::size_t j = 0; j < K.y.size(); ++j) {
      const cplx v = K(i, j);
      out << format_double(K.x[i]) << ',' << format_double(K.y[j]) << ','
          << format_double(v.real()) << ',' << format_double(v.imag()) << ','
          << format_double(std::abs(v)) << '\n';
    }
}

std::string kernel_cache_name(std::uint64_t potential_hash, double t, Route route) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "kernel_%016llx_%s_t%.6e.bin",
                static_cast<unsigned long long>(potential_hash), to_string(route), t);
  return buf;
}

void save_kernel_cache(const KernelField &K, std::uint64_t potential_hash,
                       const std::string &path) {
  auto out = open_out(path, true);
  out.write(kCacheMagic, sizeof kCacheMagic);
  put(out, potential_hash);
  put(out, K.t);
  put(out, K.eps);
  put(out, std::int32_t(K.route));
  put(out, K.mass);
  put(out, std::uint64_t(K.x.size()));
  put(out, std::uint64_t(K.y.size()));
  out.write(reinterpret_cast<const char *>(K.x.data()), std::streamsize(K.x.size() * 8));
  out.write(reinterpret_cast<const char *>(K.y.data()), std::streamsize(K.y.size() * 8));
  out.write(reinterpret_cast<const char *>(K.K.data()), std::streamsize(K.K.size() * 16));
  if (!out)
    throw Error(ErrorKind::IoFailure, "short write to " + path);
}

std::optional<KernelField> load_kernel_cache(const std::string &path,
                                             std::uint64_t potential_hash, double t, Route route) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    return std::nullopt;
  char magic[8];
  if (!in.read(magic, 8) || !std::equal(magic, magic + 8, kCacheMagic))
    return std::nullopt;
  std::uint64_t h = 0, nx = 0, ny = 0;
  std::int32_t r = 0;
  KernelField K;
  if (!take(in, h) || !take(in, K.t) || !take(in, K.eps) || !take(in, r) || !take(in, K.mass) ||
      !take(in, nx) || !take(in, ny))
    return std::nullopt;
  if (h != potential_hash || K.t != t || r != std::int32_t(route) || nx > (1u << 20) ||
      ny > (1u << 20))
    return std::nullopt;
  K.route = route;
  K.x.resize(nx);
  K.y.resize(ny);
  K.K.resize(nx * ny);
  in.read(reinterpret_cast<char *>(K.x.data()), std::streamsize(nx * 8));
  in.read(reinterpret_cast<char *>(K.y.data()), std::streamsize(ny * 8));
  in.read(reinterpret_cast<char *>(K.K.data()), std::streamsize(nx * ny * 16));
  if (!in)
    return std::nullopt;
  return K;
}

void write_decay_csv(const DecaySeries &s, const std::string &path) {
  auto out = open_out(path);
  out << "# sigma = " << format_double(s.sigma) << '\n';
  out << "# descriptor = " << s.descriptor << '\n';
  out << "t,value,weight\n";
  for (std::size_t q = 0; q < s.t.size(); ++q)
    out << format_double(s.t[q]) << ',' << format_double(s.value[q]) << ','
        << format_double(s.sigma) << '\n';
}

DecaySeries read_decay_csv(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::IoFailure, "cannot open " + path);
  DecaySeries s;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.rfind("# sigma = ", 0) == 0) {
      s.sigma = std::stod(line.substr(10));
    } else if (line.rfind("# descriptor = ", 0) == 0) {
      s.descriptor = line.substr(15);
    } else if (line == "t,value,weight") {
      header = true;
    } else if (!line.empty()) {
      const auto f = split(line, ',');
      if (!header || f.size() != 3)
        throw Error(ErrorKind::ParseError,
                    path + ": line " + std::to_string(lineno) + ", column 1: bad decay row");
      s.t.push_back(std::stod(f[0]));
      s.value.push_back(std::stod(f[1]));
    }
  }
  s.fit = fit_decay(s.t, s.value);
  return s;
}

std::string decay_summary_json(const DecaySeries &s, double target, double tolerance) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["descriptor"] = s.descriptor;
  j["sigma"] = s.sigma;
  j["slope"] = s.fit.slope;
  j["stderr"] = s.fit.stderr_slope;
  j["r2"] = s.fit.r2;
  j["target"] = target;
  j["tolerance"] = tolerance;
  j["pass"] = std::abs(s.fit.slope - target) <= tolerance;
  j["half_window_gap"] = s.half_window_gap;
  return j.dump(2) + "\n";
}

void write_text(const std::string &path, const std::string &text) {
  auto out = open_out(path);
  out << text;
}

void ensure_dir(const std::string &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw Error(ErrorKind::IoFailure, "cannot create " + dir + ": " + ec.message());
}

} // namespace disperse1d
