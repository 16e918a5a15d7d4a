#include "lrsolve/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lrsolve::transforms {

using invariants::QuadCoeffs;
using weyl::Complex;
using weyl::OperatorPoly;

namespace {

double coeff_scale(const QuadCoeffs& c) {
  double s = 1.0;
  for (double v : c.vec()) s = std::max(s, std::abs(v));
  return s;
}

void require_positive_definite(const QuadCoeffs& c) {
  if (!(c.casimir() > 0.0))
    throw std::domain_error("quadratic part must satisfy D F - E^2 > 0");
  if (!(c.D > 0.0))
    throw std::domain_error("quadratic part must be positive definite (D > 0)");
}

/** cos-like and sinc-like scalars of the 2x2 exponential, mu = 4 a r. */
void exp_scalars(double mu, double& c, double& s) {
  if (mu > 1e-12) {
    const double t = std::sqrt(mu);
    c = std::cos(t);
    s = std::sin(t) / t;
  } else if (mu < -1e-12) {
    const double t = std::sqrt(-mu);
    c = std::cosh(t);
    s = std::sinh(t) / t;
  } else {
    c = 1.0 - mu / 2.0 + mu * mu / 24.0;
    s = 1.0 - mu / 6.0 + mu * mu / 120.0;
  }
}

/** Residual of the isotropy condition: (E', D' - F') for S' = T^T S T. */
Eigen::Vector2d isotropy_residual(const Eigen::Matrix2d& S, const AlphaRho& ar) {
  const Eigen::Matrix2d T = rep_matrix(ar);
  const Eigen::Matrix2d Sp = T.transpose() * S * T;
  return {Sp(0, 1), Sp(1, 1) - Sp(0, 0)};
}

/**
 * Closed-form candidate: T0 = sqrt(s) * S^{-1/2} * R(phi), with phi chosen so
 * that T0 has equal diagonal entries (the shape of every exp(M)); then the
 * exponential is inverted for (a, r).
 */
AlphaRho closed_form_candidate(const QuadCoeffs& c) {
  const double s = std::sqrt(c.casimir());
  const double tr = c.D + c.F;
  const double denom = s * std::sqrt(tr + 2.0 * s);
  Eigen::Matrix2d P;
  P << c.D + s, -c.E, -c.E, c.F + s;
  P /= denom;  // P = S^{-1/2}, S = [[F, E], [E, D]]

  const double phi = std::atan2(c.D - c.F, 2.0 * c.E);
  Eigen::Matrix2d R;
  R << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  Eigen::Matrix2d T = std::sqrt(s) * P * R;
  if (T.trace() < 0.0) T = -T;  // pick the branch with the smaller generator

  const double cc = 0.5 * (T(0, 0) + T(1, 1));
  const double u = T(0, 1);  // -2 a * sinc
  const double v = T(1, 0);  // +2 r * sinc
  double sinc = 1.0;
  if (cc > 1.0 + 1e-12) {
    const double theta = std::acosh(cc);
    sinc = std::sinh(theta) / theta;
  } else if (cc < 1.0 - 1e-12) {
    const double theta = std::acos(std::clamp(cc, -1.0, 1.0));
    sinc = std::sin(theta) / theta;
  }
  return {-u / (2.0 * sinc), v / (2.0 * sinc)};
}

bool newton_polish(const Eigen::Matrix2d& S, double scale, double tol,
                   AlphaRho& x) {
  for (int iter = 0; iter < 50; ++iter) {
    const Eigen::Vector2d g = isotropy_residual(S, x);
    if (g.cwiseAbs().maxCoeff() <= tol * scale) return true;

    Eigen::Matrix2d J;
    const double ha = 1e-7 * std::max(1.0, std::abs(x.alpha_im));
    const double hr = 1e-7 * std::max(1.0, std::abs(x.rho_im));
    J.col(0) = (isotropy_residual(S, {x.alpha_im + ha, x.rho_im}) -
                isotropy_residual(S, {x.alpha_im - ha, x.rho_im})) /
               (2.0 * ha);
    J.col(1) = (isotropy_residual(S, {x.alpha_im, x.rho_im + hr}) -
                isotropy_residual(S, {x.alpha_im, x.rho_im - hr})) /
               (2.0 * hr);
    if (std::abs(J.determinant()) < 1e-300) return false;

    const Eigen::Vector2d dx = J.partialPivLu().solve(-g);
    double lambda = 1.0;
    const double g0 = g.norm();
    AlphaRho next = x;
    while (true) {
      next = {x.alpha_im + lambda * dx(0), x.rho_im + lambda * dx(1)};
      if (isotropy_residual(S, next).norm() <= (1.0 - 0.25 * lambda) * g0) break;
      lambda *= 0.5;
      if (lambda < 1e-4) break;  // accept the last trial; next loop re-checks
    }
    x = next;
  }
  return isotropy_residual(S, x).cwiseAbs().maxCoeff() <= tol * scale;
}

}  // namespace

EtaBeta eta_beta(const QuadCoeffs& c) {
  const double cas = c.casimir();
  if (!(cas > 0.0))
    throw std::domain_error("eta_beta: quadratic part must satisfy D F - E^2 > 0");
  return {(c.E * c.Bp - c.F * c.Ap) / (2.0 * cas),
          (c.D * c.Bp - c.E * c.Ap) / (2.0 * cas)};
}

OperatorPoly conjugate_by_v1(const OperatorPoly& x, const EtaBeta& eb) {
  OperatorPoly g = Complex(0.0, eb.eta_im) * OperatorPoly::q() +
                   Complex(0.0, eb.beta_im) * OperatorPoly::p();
  return weyl::conjugate_by_exponential(x, g);
}

OperatorPoly conjugate_by_v2(const OperatorPoly& x, const AlphaRho& ar) {
  OperatorPoly g = Complex(0.0, ar.alpha_im) * OperatorPoly::monomial(0, 2) +
                   Complex(0.0, ar.rho_im) * OperatorPoly::monomial(2, 0);
  return weyl::conjugate_by_exponential(x, g);
}

Eigen::Matrix2d rep_matrix(const AlphaRho& ar) {
  double c, s;
  exp_scalars(4.0 * ar.alpha_im * ar.rho_im, c, s);
  Eigen::Matrix2d T;
  T << c, -2.0 * ar.alpha_im * s, 2.0 * ar.rho_im * s, c;
  return T;
}

Eigen::Matrix2d quad_matrix(const QuadCoeffs& c) {
  Eigen::Matrix2d S;
  S << c.F, c.E, c.E, c.D;
  return S;
}

QuadCoeffs apply_v2(const QuadCoeffs& c, const AlphaRho& ar) {
  const Eigen::Matrix2d T = rep_matrix(ar);
  const Eigen::Matrix2d Sp = T.transpose() * quad_matrix(c) * T;
  const Eigen::Vector2d lin = T.transpose() * Eigen::Vector2d(c.Bp, c.Ap);
  QuadCoeffs out;
  out.D = Sp(1, 1);
  out.E = Sp(0, 1);
  out.F = Sp(0, 0);
  out.Bp = lin(0);
  out.Ap = lin(1);
  out.Cp = c.Cp;
  return out;
}

AlphaRho solve_alpha_rho(const QuadCoeffs& c, const AlphaRho* warm_start,
                         double tol) {
  require_positive_definite(c);
  const Eigen::Matrix2d S = quad_matrix(c);
  const double scale = std::max(1.0, std::sqrt(c.casimir()));

  if (warm_start != nullptr) {
    AlphaRho x = *warm_start;
    if (newton_polish(S, scale, tol, x)) return x;
  }
  AlphaRho x = closed_form_candidate(c);
  if (newton_polish(S, scale, tol, x)) return x;
  throw std::runtime_error("solve_alpha_rho: Newton iteration did not converge");
}

QuadraticReduction reduce_quadratic(const QuadCoeffs& c,
                                    const AlphaRho* warm_start) {
  require_positive_definite(c);
  QuadraticReduction red;
  red.eb = eta_beta(c);

  const QuadCoeffs displaced =
      QuadCoeffs::from_poly(conjugate_by_v1(c.to_poly(), red.eb));
  const double scale = coeff_scale(c);
  if (std::abs(displaced.Ap) > 1e-9 * scale || std::abs(displaced.Bp) > 1e-9 * scale)
    throw std::runtime_error("reduce_quadratic: displacement left linear terms");

  red.ar = solve_alpha_rho(displaced, warm_start);
  red.varsigma = 2.0 * std::sqrt(displaced.casimir());
  red.offset = displaced.Cp;
  return red;
}

std::vector<QuadraticReduction> build_v_sequence(const invariants::CoefficientPath& path,
                                                 double verify_tol) {
  if (path.family != weyl::InvariantFamily::quadratic)
    throw std::invalid_argument("build_v_sequence: quadratic path required");

  std::vector<QuadraticReduction> out;
  out.reserve(path.size());
  for (std::size_t i = 0; i < path.size(); ++i) {
    const QuadCoeffs c = QuadCoeffs::from_vec(path.values[i]);
    const AlphaRho* warm = out.empty() ? nullptr : &out.back().ar;
    QuadraticReduction red = reduce_quadratic(c, warm);

    OperatorPoly reduced =
        conjugate_by_v2(conjugate_by_v1(c.to_poly(), red.eb), red.ar);
    OperatorPoly expect =
        Complex(0.5 * red.varsigma) *
            (OperatorPoly::monomial(0, 2) + OperatorPoly::monomial(2, 0)) +
        Complex(red.offset) * OperatorPoly::one();
    const double err = weyl::distance(reduced, expect);
    if (err > verify_tol * coeff_scale(c)) {
      std::ostringstream msg;
      msg << "build_v_sequence: reduction check failed at t = " << path.times[i]
          << " (residual " << err << ")";
      throw std::runtime_error(msg.str());
    }
    out.push_back(red);
  }
  return out;
}

}  // namespace lrsolve::transforms
