#pragma once
#include <string>
#include <vector>

#include "disperse1d/grid.hpp"
#include "disperse1d/jost.hpp"
#include "disperse1d/potential.hpp"

namespace disperse1d {

enum class ResonanceClass { NonResonant, ResonantA, ResonantB };
const char *to_string(ResonanceClass c);

//! Outcome of the zero-energy classification with the measured margins.
struct ResonanceReport {
  ResonanceClass cls = ResonanceClass::NonResonant;
  double W0 = 0.0;        //!< |W(0)|
  double s = 1.0;         //!< max(1, |dW/dk(0)|)
  double h0 = 0.0;        //!< |h_+(0,0) h_-(0,0)|
  double s_prime = 1.0;   //!< (1+|h_+(0,dk)|)(1+|h_-(0,dk)|)
  double tau = 1e-6;
  double margin = 0.0;    //!< log10 distance of the deciding quantity to its threshold
  bool borderline = false; //!< |margin| < 1
};

struct BoundState {
  double kappa = 0.0;            //!< eigenvalue is -kappa^2
  std::vector<double> phi;       //!< f_+(x, i kappa) normalized in L^2, on the field x-grid
  double norm_sq_plus = 0.0;     //!< int f_+(x, i kappa)^2 dx
  double norm_sq_minus = 0.0;    //!< int f_-(x, i kappa)^2 dx
};

struct ScatteringData {
  KGrid kg;
  std::vector<double> x; //!< x-grid of the bound-state samples
  std::vector<cplx> T, Rp, Rm, W, Wp, Wm;
  std::vector<BoundState> bound;
  ResonanceReport resonance;
  std::vector<std::string> warnings;

  ResonanceClass resonance_class() const { return resonance.cls; }
};

struct ScatteringMatrix {
  std::vector<cplx> T, Rp, Rm;
};

//! T = 2ik/W, R_+- = -+W_+-/W for k != 0, k = 0 filled from
//! the four nearest nodes per side (degree-7 interpolation). InteriorZero if |W| < 1e-12|2k|.
ScatteringMatrix scattering_matrix(const Wronskians &w, const KGrid &kg);

//! Value at the middle node from the degree-7 interpolant through its 4+4 neighbours.
cplx extrapolate_to_zero(const std::vector<cplx> &v, std::size_t zero);

ResonanceReport classify_resonance(const std::vector<cplx> &W,
                                   const JostField &field, double tau = 1e-6);

//! W(i kappa) = 0 on (0, kappa_max], kappa_max = 1 + sqrt(max(0, -min V)),
//! sign scan with step 1e-3 then TOMS748 to 1e-10. Eigenfunctions sampled on
//! `x`. Suspected missed roots are appended to `warnings`.
std::vector<BoundState> bound_states(const Potential &V, const std::vector<double> &x,
                                     std::vector<std::string> *warnings = nullptr,
                                     const JostOptions &opt = {});

//! W(i kappa) at x = 0 (real).
double wronskian_imag_axis(const Potential &V, double kappa, const JostOptions &opt = {});

//! Full pipeline: Wronskians, scattering matrix, bound states, classification.
ScatteringData scatter(const Potential &V, const JostField &field,
                       const JostOptions &opt = {});

//! P_c = 1 - sum_j <phi_j, .> phi_j on a fixed x-grid (trapezoid inner
//! product; the phi_j are re-orthonormalized in that inner product so P_c is
//! idempotent on the grid).
class PcProjector {
public:
  PcProjector() = default;
  PcProjector(const std::vector<double> &x, const std::vector<std::vector<double>> &phis);
  std::vector<cplx> apply(const std::vector<cplx> &f) const;
  std::vector<double> apply(const std::vector<double> &f) const;
  const std::vector<double> &weights() const { return w_; }
  std::size_t rank() const { return phis_.size(); }
  double inner(const std::vector<double> &a, const std::vector<double> &b) const;

private:
  std::vector<double> x_, w_;
  std::vector<std::vector<double>> phis_;
};

PcProjector pc_projector(const std::vector<BoundState> &bound, const std::vector<double> &x);

//! Trapezoid weights on a sorted (possibly nonuniform) grid.
std::vector<double> trapezoid_weights(const std::vector<double> &x);

struct IdentityResiduals {
  double unitarity = 0.0;           //!< sup ||T|^2 + |R_+-|^2 - 1|
  double consistency = 0.0;         //!< sup |T conj(R_-) + conj(T) R_+|
  double scattering_relation = 0.0; //!< sup |T f_+- - R_-+ f_-+ - f_-+(-k)|
  double conjugation = 0.0;         //!< sup |T(-k) - conj T(k)| and same for R
  double T_bound = 0.0;             //!< sup |T| - 1 (should be <= 1e-8)
  std::vector<double> sample_x;
};

IdentityResiduals verify_identities(const ScatteringData &sd, const JostField &field,
                                    double kmin = 0.05, double kmax = 20.0);

} // namespace disperse1d
