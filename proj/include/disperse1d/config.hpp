#pragma once
#include <cstddef>
#include <string>
#include <vector>

#include "disperse1d/potential.hpp"
#include "disperse1d/propagator.hpp"

namespace disperse1d {

inline constexpr int kSchemaVersion = 1;

//! Desk-scale caps on the grid sizes.
inline constexpr std::size_t kMaxNk = 16385;
inline constexpr std::size_t kMaxNx = 801;
inline constexpr double kMaxK = 200.0;

struct GridConfig {
  double L = 20.0;        //!< x-window half-width
  double K = 40.0;        //!< k-grid half-width
  std::size_t Nk = 4097;  //!< 2^m + 1
  std::size_t Nx = 201;
  double L_o = 100.0;     //!< oracle box half-width
  std::size_t N_o = 3999; //!< oracle interior nodes
};

struct LadderConfig {
  double a = 10.0, b = 1000.0;
  std::size_t n = 8;
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  PotentialSpec potential;
  std::string table; //!< CSV path for tabulated potentials (relative to the config file)
  GridConfig grid;
  double mass = 1.0;
  LadderConfig tladder;
  double sigma = 0.0;
  std::vector<Route> routes{Route::fresnel, Route::direct, Route::oracle, Route::kg12};
  std::string out = "out";
  //! Schrodinger sup window extension (|x| <= X_ext, spacing dx_ext)
  double X_ext = 200.0;
  double dx_ext = 1.0;
  //! oracle comparisons run at tau = t - i eps
  double oracle_eps = 1.0;
  std::vector<double> kernel_times{1.0, 5.0, 30.0};
};

//! Throws InvalidArgument naming the offending field.
void validate(const RunConfig &c);

std::string to_json(const RunConfig &c);
//! ParseError with line/column on malformed input, naming the key on a
//! missing required key (schema_version, potential.family) or bad type.
RunConfig parse_config(const std::string &text);
RunConfig load_config(const std::string &path);
void save_config(const RunConfig &c, const std::string &path);

//! The potential named by the config (loads the table if needed).
Potential config_potential(const RunConfig &c, const std::string &base_dir = ".");

} // namespace disperse1d
