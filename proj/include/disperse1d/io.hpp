#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "disperse1d/decayfit.hpp"
#include "disperse1d/oscquad.hpp"
#include "disperse1d/propagator.hpp"
#include "disperse1d/scattering.hpp"
#include "disperse1d/wiener.hpp"

namespace disperse1d {

//! All numbers are written as %.17e so that they round-trip exactly.
std::string format_double(double v);

//! k, Re_T, Im_T, Re_Rp, Im_Rp, Re_Rm, Im_Rm
void write_scattering_csv(const ScatteringData &sd, const std::string &path);
//! kappa, then the eigenfunction samples phi(x_i); first line lists the x-grid.
void write_bound_states_csv(const ScatteringData &sd, const std::string &path);
//! `# c = ...` and `# l1_norm = ...` header lines, then p, Re_g, Im_g.
void write_profile_csv(const WienerProfile &prof, const std::string &path);
//! t, v, J, sqrt_t_times_J
void write_appendix_csv(const AppendixReport &rep, const std::string &path);
//! x, y, Re_K, Im_K, abs_K
void write_kernel_csv(const KernelField &K, const std::string &path);

//! Compact binary cache of a KernelField keyed by (potential hash, t, route).
std::string kernel_cache_name(std::uint64_t potential_hash, double t, Route route);
void save_kernel_cache(const KernelField &K, std::uint64_t potential_hash,
                       const std::string &path);
//! nullopt if the file is missing or its key does not match.
std::optional<KernelField> load_kernel_cache(const std::string &path,
                                             std::uint64_t potential_hash, double t, Route route);

//! `# sigma`, `# descriptor` header lines, then t, value, weight.
void write_decay_csv(const DecaySeries &s, const std::string &path);
//! Reads a decay CSV back and refits it.
DecaySeries read_decay_csv(const std::string &path);
//! schema_version, descriptor, sigma, slope, stderr, r2, target, tolerance,
//! pass, half_window_gap
std::string decay_summary_json(const DecaySeries &s, double target, double tolerance);

void write_text(const std::string &path, const std::string &text);
//! Creates the directory (and parents); IoFailure on failure.
void ensure_dir(const std::string &dir);

} // namespace disperse1d
