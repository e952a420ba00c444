#pragma once
#include <cstddef>
#include <utility>
#include <vector>

#include "disperse1d/grid.hpp"
#include "disperse1d/potential.hpp"
#include "disperse1d/propagator.hpp"

namespace disperse1d {

//! -d^2/dx^2 + V by second-order central differences on the interior nodes
//! x_i = -L + (i+1) h, h = 2L/(N+1) (Dirichlet at +-L), fully diagonalized.
struct DiscreteHamiltonian {
  double L = 100.0;
  double h = 0.0;
  std::size_t N = 0;
  std::vector<double> x, V;
  std::vector<double> lambda; //!< ascending
  std::vector<double> vec;    //!< column-major: vec[n * N + i] = v_n(x_i), l2-orthonormal
  double eps_c = 1e-8;        //!< continuum threshold: modes with lambda >= -eps_c
  std::size_t first_continuum = 0;

  double v(std::size_t n, std::size_t i) const { return vec[n * N + i]; }
  std::size_t node(double xv) const;
  //! (H u)_i with the Dirichlet stencil.
  std::vector<double> apply(const std::vector<double> &u) const;
  std::vector<double> bound_energies() const;
};

inline constexpr std::size_t kMaxOracleNodes = 4000;

//! Eigendecomposition by LAPACK dstemr. TooLarge for N > 4000.
DiscreteHamiltonian discretize(const Potential &V, double L = 100.0, std::size_t N = 3999);

//! max |<v_a, v_b> - delta_ab| over `samples` pseudo-random mode pairs and all
//! mode norms.
double orthonormality_residual(const DiscreteHamiltonian &Hd, std::size_t samples = 2000);

//! Continuum-mode coefficients c_n = <v_n, f> and the synthesis back.
std::vector<cplx> eig_apply(const DiscreteHamiltonian &Hd, cplx tau, const std::vector<cplx> &f);
std::vector<double> pc_apply(const DiscreteHamiltonian &Hd, const std::vector<double> &f);

//! Dense e^{-i tau H} P_c restricted to rows x cols (node indices);
//! the full matrix when both are empty. Layout [r * cols + c].
std::vector<cplx> eig_propagator(const DiscreteHamiltonian &Hd, cplx tau,
                                 const std::vector<std::size_t> &rows = {},
                                 const std::vector<std::size_t> &cols = {});

//! Pointwise kernel K(x, y) = sum e^{-i lambda tau} v(x) v(y) / h on window
//! nodes (which must be oracle nodes).
KernelField oracle_kernel(const DiscreteHamiltonian &Hd, cplx tau, const std::vector<double> &xs,
                          const std::vector<double> &ys);

//! (u, du/dt) = e^{-t Hkg} P_c (u0, u1) with the blocks cos, sin/omega,
//! -omega sin, cos, omega = sqrt(lambda + m^2) on continuum modes.
std::pair<std::vector<double>, std::vector<double>>
kg_eig_apply(const DiscreteHamiltonian &Hd, double m, double t, const std::vector<double> &u0,
             const std::vector<double> &u1);

//! The four blocks (11, 12, 21, 22) as dense N x N matrices (row-major).
struct KgBlocks {
  std::vector<double> b11, b12, b21, b22;
};
KgBlocks kg_eig_propagator(const DiscreteHamiltonian &Hd, double m, double t);

//! h (|ud|^2 + <u, H u> + m^2 |u|^2)
double kg_energy(const DiscreteHamiltonian &Hd, double m, const std::vector<double> &u,
                 const std::vector<double> &ud);

//! Secondary check only: Strang split-step Fourier evolution of e^{-itH} psi0
//! on a periodic uniform grid.
std::vector<cplx> split_step_evolve(const Potential &V, const std::vector<double> &x,
                                    const std::vector<cplx> &psi0, double t, std::size_t steps);

} // namespace disperse1d
