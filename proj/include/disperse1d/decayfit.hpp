#pragma once
#include <cstddef>
#include <string>
#include <vector>

#include "disperse1d/jost.hpp"
#include "disperse1d/propagator.hpp"
#include "disperse1d/scattering.hpp"

namespace disperse1d {

//! Least squares of log(value) against log(t).
struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  double r2 = 0.0;
};

//! NonPositiveValue on a value <= 0; InvalidArgument unless >= 6 samples
//! spanning >= 1.5 decades.
DecayFit fit_decay(const std::vector<double> &t, const std::vector<double> &value);

struct DecaySeries {
  std::vector<double> t, value;
  double sigma = 0.0;
  std::string descriptor; //!< "sup", "weighted_sup" or "kg_response"
  DecayFit fit;
  //! largest relative gap between the value and its half-window counterpart
  double half_window_gap = 0.0;
};

//! Geometric ladder of n points from a to b.
std::vector<double> t_ladder(double a, double b, std::size_t n);

//! max over (x,y) of |K| / ((1+|x|)(1+|y|))^sigma.
double sup_kernel_norm(const KernelField &K, double sigma);

//! Nodes for the Schrodinger decay sup: the standard window (|x| <= 20,
//! spacing 0.2) merged with a coarse extension |x| <= X_ext of spacing dx_ext.
std::vector<double> decay_nodes(double X_ext = 200.0, double dx_ext = 1.0,
                                const std::vector<double> &inner = standard_window());

//! sup norms of the Fresnel-route kernel along a t-ladder. The window is
//! `nodes`; the half-window value uses |x| <= max|node| / 2.
DecaySeries schrodinger_decay(const FresnelKernel &fk, const std::vector<double> &ts, double sigma,
                              const std::vector<double> &nodes);

//! ||(1+k^2)^{alpha/2}-multiplier f||_{L^1((1+|x|)^sigma dx)} by a x4
//! zero-padded FFT; x uniform. SpectralLeakage if more than 1e-6 of the norm
//! sits in the padding.
double sobolev_norm(const std::vector<double> &x, const std::vector<double> &f, double alpha,
                    double sigma);

//! Unit-mass Gaussian e^{-(x-c)^2/(2 w^2)} / (w sqrt(2 pi)).
std::vector<double> unit_gaussian(const std::vector<double> &x, double width = 1.0,
                                  double centre = 0.0);

struct KgResponseOptions {
  double xmax_factor = 1.3; //!< far field out to xmax_factor * t + X
  double far_dx = 0.05;
};

//! sup_x (1+|x|)^{-sigma} |kg_apply(P_c f, entry 12)| over the whole line
//! (window by kg_apply, far field by kg_far_field), divided by
//! ||f||_{H^{1/2,1}_sigma}. f is sampled on the field x-grid.
DecaySeries kg_response(const ScatteringData &sd, const JostField &field, double m,
                        const std::vector<double> &f, const std::vector<double> &ts,
                        double sigma, const KgResponseOptions &opt = {});

} // namespace disperse1d
