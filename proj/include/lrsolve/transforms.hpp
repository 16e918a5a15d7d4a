#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "lrsolve/invariants.hpp"
#include "lrsolve/weyl.hpp"

namespace lrsolve::transforms {

/**
 * Parameters of the displacement factor V1 = exp(eta q + beta p) with
 * eta = i * eta_im and beta = i * beta_im (both exponents anti-Hermitian,
 * so V1 is unitary).  Conjugation acts as
 *   V1^dag q V1 = q - beta_im,   V1^dag p V1 = p + eta_im.
 */
struct EtaBeta {
  double eta_im = 0.0;
  double beta_im = 0.0;
};

/**
 * Displacement that cancels the linear part of the invariant:
 * solves the 2x2 system coming from completing the square.  Requires an
 * elliptic quadratic part (D F - E^2 > 0); throws std::domain_error otherwise.
 */
EtaBeta eta_beta(const invariants::QuadCoeffs& c);

/** V1^dag x V1, evaluated through the operator-algebra engine. */
weyl::OperatorPoly conjugate_by_v1(const weyl::OperatorPoly& x, const EtaBeta& eb);

/**
 * Parameters of the squeeze factor V2 = exp(alpha p^2 + rho q^2) with
 * alpha = i * alpha_im and rho = i * rho_im.
 */
struct AlphaRho {
  double alpha_im = 0.0;
  double rho_im = 0.0;
};

/** V2^dag x V2 via the operator-algebra engine (convergent ad-series). */
weyl::OperatorPoly conjugate_by_v2(const weyl::OperatorPoly& x, const AlphaRho& ar);

/**
 * 2x2 image of V2 conjugation on the coefficient pair (q, p):
 * (V2^dag q V2, V2^dag p V2)^T = T (q, p)^T with T = exp(M),
 * M = [[0, -2a], [2r, 0]], a = alpha_im, r = rho_im.
 */
Eigen::Matrix2d rep_matrix(const AlphaRho& ar);

/** Symmetric matrix of the quadratic part, S = [[F, E], [E, D]]. */
Eigen::Matrix2d quad_matrix(const invariants::QuadCoeffs& c);

/**
 * Coefficients of V2^dag I V2: quadratic block transforms as S -> T^T S T,
 * the linear pair (B', A') by T^T, and the constant is untouched.  Exact
 * (the conjugation of a degree-2 polynomial produces no ordering remainder).
 */
invariants::QuadCoeffs apply_v2(const invariants::QuadCoeffs& c, const AlphaRho& ar);

/**
 * Finds (alpha, rho) such that V2^dag (D p^2 + E(pq+qp) + F q^2) V2 equals
 * (varsigma/2)(p^2 + q^2) with varsigma = 2 sqrt(D F - E^2).  Only the
 * quadratic fields of `c` are read.  Requires D > 0 and D F - E^2 > 0
 * (positive definite quadratic part); throws std::domain_error otherwise.
 *
 * The solver builds a closed-form candidate from the inverse square root of
 * the quadratic matrix and polishes it with a damped Newton iteration; a
 * warm start (e.g. the solution at a neighbouring time) replaces the
 * closed-form candidate when it already lies in the convergence basin.
 */
AlphaRho solve_alpha_rho(const invariants::QuadCoeffs& c,
                         const AlphaRho* warm_start = nullptr,
                         double tol = 1e-12);

/** Full reduction of one quadratic invariant to isotropic form. */
struct QuadraticReduction {
  EtaBeta eb;
  AlphaRho ar;
  double varsigma = 0.0;  // 2 sqrt(D F - E^2)
  double offset = 0.0;    // constant left over after the displacement
};

/**
 * Computes the V1, V2 pair for one coefficient set, so that
 *   (V1 V2)^dag I (V1 V2) = (varsigma/2)(p^2 + q^2) + offset.
 * The displacement stage runs through the symbolic engine; the squeeze
 * stage through the 2x2 solver.
 */
QuadraticReduction reduce_quadratic(const invariants::QuadCoeffs& c,
                                    const AlphaRho* warm_start = nullptr);

/**
 * Reductions at every node of a quadratic coefficient path, warm-starting
 * each solve from the previous node.  Every node is re-verified through the
 * symbolic engine: the fully conjugated invariant must match
 * (varsigma/2)(p^2+q^2) + offset to within `verify_tol` (relative to the
 * coefficient scale); a violation throws std::runtime_error.
 */
std::vector<QuadraticReduction> build_v_sequence(const invariants::CoefficientPath& path,
                                                 double verify_tol = 1e-9);

}  // namespace lrsolve::transforms
