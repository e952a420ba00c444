#include "disperse1d/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "disperse1d/errors.hpp"

namespace disperse1d {

using nlohmann::ordered_json;

namespace {

void require(bool ok, const std::string &what) {
  if (!ok)
    throw Error(ErrorKind::InvalidArgument, "config: " + what);
}

bool is_pow2_plus_one(std::size_t n) {
  const std::size_t m = n - 1;
  return n >= 3 && (m & (m - 1)) == 0;
}

// typed accessor that names the key on failure
template <class T> T get(const ordered_json &j, const std::string &path, const char *key, T dflt,
                         bool required = false) {
  if (!j.contains(key)) {
    if (required)
      throw Error(ErrorKind::ParseError, "missing required key '" + path + key + "'");
    return dflt;
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception &) {
    throw Error(ErrorKind::ParseError, "key '" + path + key + "' has the wrong type");
  }
}

} // namespace

void validate(const RunConfig &c) {
  require(c.schema_version == kSchemaVersion,
          "schema_version " + std::to_string(c.schema_version) + " is not supported");
  const auto &g = c.grid;
  require(g.L > 0.0 && std::isfinite(g.L), "grid.L must be > 0");
  require(g.K > 0.0 && g.K <= kMaxK, "grid.K must be in (0, 200]");
  require(is_pow2_plus_one(g.Nk) && g.Nk <= kMaxNk, "grid.Nk must be 2^m + 1 and <= 16385");
  require(g.Nx >= 3 && g.Nx % 2 == 1 && g.Nx <= kMaxNx, "grid.Nx must be odd, 3..801");
  require(g.L_o > 0.0, "grid.L_o must be > 0");
  require(g.N_o >= 3 && g.N_o <= 4000, "grid.N_o must be 3..4000");
  require(c.mass > 0.0 && std::isfinite(c.mass), "mass must be finite and > 0");
  require(c.tladder.a > 0.0 && c.tladder.b > c.tladder.a && c.tladder.n >= 2,
          "tladder needs 0 < a < b and n >= 2");
  require(c.sigma == 0.0 || c.sigma == 1.0, "sigma must be 0 or 1");
  require(c.X_ext >= g.L && c.dx_ext > 0.0, "X_ext must be >= grid.L and dx_ext > 0");
  require(c.oracle_eps >= 0.0, "oracle_eps must be >= 0");
  for (double t : c.kernel_times)
    require(t > 0.0, "kernel_times must be > 0");
  require(!c.out.empty(), "out must be non-empty");
}

std::string to_json(const RunConfig &c) {
  ordered_json j;
  j["schema_version"] = c.schema_version;
  ordered_json p;
  p["family"] = to_string(c.potential.family);
  p["a"] = c.potential.a;
  p["b"] = c.potential.b;
  if (!c.table.empty())
    p["table"] = c.table;
  j["potential"] = p;
  ordered_json g;
  g["L"] = c.grid.L;
  g["K"] = c.grid.K;
  g["Nk"] = c.grid.Nk;
  g["Nx"] = c.grid.Nx;
  g["L_o"] = c.grid.L_o;
  g["N_o"] = c.grid.N_o;
  j["grid"] = g;
  j["mass"] = c.mass;
  j["tladder"] = {{"a", c.tladder.a}, {"b", c.tladder.b}, {"n", c.tladder.n}};
  j["sigma"] = c.sigma;
  std::vector<std::string> routes;
  for (Route r : c.routes)
    routes.emplace_back(to_string(r));
  j["routes"] = routes;
  j["out"] = c.out;
  j["X_ext"] = c.X_ext;
  j["dx_ext"] = c.dx_ext;
  j["oracle_eps"] = c.oracle_eps;
  j["kernel_times"] = c.kernel_times;
  return j.dump(2) + "\n";
}

RunConfig parse_config(const std::string &text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    // byte offset -> line/column
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ", column " +
                                           std::to_string(col) + ": " + e.what());
  }
  if (!j.is_object())
    throw Error(ErrorKind::ParseError, "line 1, column 1: top level must be an object");
  RunConfig c;
  c.schema_version = get<int>(j, "", "schema_version", 0, true);
  if (!j.contains("potential"))
    throw Error(ErrorKind::ParseError, "missing required key 'potential'");
  const auto &p = j.at("potential");
  if (!p.is_object())
    throw Error(ErrorKind::ParseError, "key 'potential' must be an object");
  try {
    c.potential.family = family_from_string(get<std::string>(p, "potential.", "family", "", true));
  } catch (const Error &e) {
    if (e.kind() == ErrorKind::ParseError)
      throw;
    throw Error(ErrorKind::ParseError, std::string("key 'potential.family': ") + e.what());
  }
  c.potential.a = get<double>(p, "potential.", "a", 0.0);
  c.potential.b = get<double>(p, "potential.", "b", 0.0);
  c.table = get<std::string>(p, "potential.", "table", "");
  if (c.potential.family == Family::tabulated && c.table.empty())
    throw Error(ErrorKind::ParseError, "missing required key 'potential.table'");
  if (j.contains("grid")) {
    const auto &g = j.at("grid");
    c.grid.L = get<double>(g, "grid.", "L", c.grid.L);
    c.grid.K = get<double>(g, "grid.", "K", c.grid.K);
    c.grid.Nk = get<std::size_t>(g, "grid.", "Nk", c.grid.Nk);
    c.grid.Nx = get<std::size_t>(g, "grid.", "Nx", c.grid.Nx);
    c.grid.L_o = get<double>(g, "grid.", "L_o", c.grid.L_o);
    c.grid.N_o = get<std::size_t>(g, "grid.", "N_o", c.grid.N_o);
  }
  c.mass = get<double>(j, "", "mass", c.mass);
  if (j.contains("tladder")) {
    const auto &t = j.at("tladder");
    c.tladder.a = get<double>(t, "tladder.", "a", c.tladder.a);
    c.tladder.b = get<double>(t, "tladder.", "b", c.tladder.b);
    c.tladder.n = get<std::size_t>(t, "tladder.", "n", c.tladder.n);
  }
  c.sigma = get<double>(j, "", "sigma", c.sigma);
  if (j.contains("routes")) {
    c.routes.clear();
    for (const auto &r : get<std::vector<std::string>>(j, "", "routes", {})) {
      try {
        c.routes.push_back(route_from_string(r));
      } catch (const Error &e) {
        throw Error(ErrorKind::ParseError, std::string("key 'routes': ") + e.what());
      }
    }
  }
  c.out = get<std::string>(j, "", "out", c.out);
  c.X_ext = get<double>(j, "", "X_ext", c.X_ext);
  c.dx_ext = get<double>(j, "", "dx_ext", c.dx_ext);
  c.oracle_eps = get<double>(j, "", "oracle_eps", c.oracle_eps);
  c.kernel_times = get<std::vector<double>>(j, "", "kernel_times", c.kernel_times);
  validate(c);
  return c;
}

RunConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::IoFailure, "cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void save_config(const RunConfig &c, const std::string &path) {
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorKind::IoFailure, "cannot write " + path);
  out << to_json(c);
}

Potential config_potential(const RunConfig &c, const std::string &base_dir) {
  if (c.potential.family == Family::tabulated) {
    const std::string path =
        (!c.table.empty() && c.table.front() == '/') ? c.table : base_dir + "/" + c.table;
    return load_tabulated_csv(path);
  }
  return make_potential(c.potential);
}

} // namespace disperse1d
