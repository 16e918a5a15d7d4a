#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "lrsolve/gridstates.hpp"
#include "lrsolve/invariants.hpp"
#include "lrsolve/scenario.hpp"
#include "lrsolve/transforms.hpp"
#include "lrsolve/weyl.hpp"

namespace lrsolve::solutions {

using gridstates::Complex;
using gridstates::Wavefunction;

/** Matrix of a degree-<=2 normal-ordered polynomial in the Hermite basis
 *  (the eigenbasis of (q^2 + p^2)/2).  Throws on higher degrees. */
Eigen::MatrixXcd hermite_matrix(const weyl::OperatorPoly& poly, int size);

/** First `count` columns of exp(alpha p^2 + rho q^2) in the Hermite basis.
 *  The exponent couples only same-parity indices, so the matrix exponential
 *  is assembled from two tridiagonal eigenproblems and is exactly unitary
 *  on the truncated basis. */
Eigen::MatrixXcd squeeze_columns(const transforms::AlphaRho& ar, int size,
                                 int count);

/** Full truncated unitary of the squeeze factor (test/diagnostic use). */
Eigen::MatrixXcd squeeze_unitary(const transforms::AlphaRho& ar, int size);

/**
 * Quadratic-branch solution pipeline for one scenario.
 *
 * Construction integrates the invariant coefficients, reduces them to
 * isotropic form at every half-step of the phase grid, and accumulates the
 * accompanying phases phi_n by composite Simpson quadrature of
 *   d phi_n / dt = <n| V^dag (H - i d/dt) V |n>,   V = V1 V2.
 * The states  Psi_n(t) = exp(-i phi_n(t)) V(t)|n>  then solve the
 * time-dependent Schrödinger equation, and superpositions with constant
 * coefficients remain solutions.
 */
class QuadraticSolution {
 public:
  explicit QuadraticSolution(const Scenario& sc);

  const Scenario& scenario() const { return sc_; }
  const invariants::CoefficientPath& path() const { return path_; }
  const gridstates::Grid& grid() const { return grid_; }
  /** Nodes of the phase grid (spacing fine_step). */
  const std::vector<double>& fine_times() const { return fine_times_; }

  /** Reduction parameters at a node of the half-step grid. */
  const transforms::QuadraticReduction& reduction_at(double t) const;

  /** phi_n(t); t must be a node of the phase grid. */
  double phase(int n, double t) const;

  double varsigma() const { return reductions_.front().varsigma; }
  double offset() const { return reductions_.front().offset; }
  /** Spectrum constancy diagnostics over the sweep (should sit at roundoff
   *  level: the invariant's eigenvalues are time-independent). */
  double varsigma_drift() const { return varsigma_drift_; }
  double offset_drift() const { return offset_drift_; }
  /** Largest real part seen in <n|V2^dag dV2/dt|n> (should be ~0: the
   *  operator is anti-Hermitian, so its diagonal is imaginary). */
  double phase_imag_residue() const { return imag_residue_; }

  /** Eigenstate dressed with its phase: exp(-i phi_n(t)) V(t)|n>. */
  Wavefunction particular(int n, double t) const;

  /** Coefficients c_n = <V(t0) n | psi0> for n = 0..n_max.  Throws when the
   *  mass left outside the expansion exceeds the coefficient_tail budget. */
  std::vector<Complex> expand(const Wavefunction& psi0) const;

  /** Superposition sum_n c_n exp(-i phi_n(t)) V(t)|n>. */
  Wavefunction general(std::span<const Complex> coeffs, double t) const;

  /** || I(t) psi_n - lambda_n psi_n || / max(1, |lambda_n|) on the grid,
   *  lambda_n = varsigma (n + 1/2) + offset. */
  double eigen_residual(int n, double t) const;

 private:
  std::size_t half_index(double t) const;
  std::vector<double> coeffs_near(double t) const;  // RK4 step-off from a node

  Scenario sc_;
  gridstates::Grid grid_;
  invariants::OdeSystem system_;
  invariants::CoefficientPath path_;
  std::vector<double> fine_times_;
  std::vector<double> half_times_;
  std::vector<transforms::QuadraticReduction> reductions_;  // per half node
  Eigen::MatrixXd phases_;  // (n_max+1) x fine_times_.size()
  double varsigma_drift_ = 0.0;
  double offset_drift_ = 0.0;
  double imag_residue_ = 0.0;
};

/**
 * Linear-branch (plane-wave) solutions for a purely linear potential:
 *   psi_k(x, t) = L^{-1/2} exp(i [ (k - F(t)) x - S_k(t) ]),
 *   F(t) = integral of f,  S_k(t) = integral of (k - F)^2 / 2m.
 * They are eigenstates of the linear invariant p + F(t) with constant
 * eigenvalue k.  Requires omega == 0 and the canonical seed (A,B) = (1,0).
 */
class VolkovSolution {
 public:
  explicit VolkovSolution(const Scenario& sc);

  const Scenario& scenario() const { return sc_; }
  const invariants::CoefficientPath& path() const { return path_; }

  /** Accumulated momentum transfer F(t). */
  double drift(double t) const;
  /** Phase integral S_k(t) (stateless composite-Simpson quadrature). */
  double action(double k, double t) const;

  Wavefunction state(double k, double t) const;

  /** Windowed residual of (p + F(t)) psi = k psi, with p applied by a local
   *  8th-order stencil; `window` is the half-width as a fraction of the box. */
  double invariant_residual(double k, double t, double window = 0.25) const;

  /** Windowed residual of i d/dt psi = H psi, time derivative by an 8th-order
   *  stencil across +-4 offsets of the scenario's derivative delta. */
  double tdse_residual(double k, double t, double window = 0.25) const;

 private:
  double drift_near(double t) const;

  Scenario sc_;
  gridstates::Grid grid_;
  invariants::OdeSystem system_;
  invariants::CoefficientPath path_;
  std::vector<double> j1_, j2_;  // cumulative int F, int F^2 at path nodes
};

}  // namespace lrsolve::solutions
