#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lrsolve/weyl.hpp"

namespace lrsolve::invariants {

enum class DriveKind { constant, linear_ramp, sinusoid, tabulated };

/** Time profile for the force f(t) (and, optionally, the stiffness omega(t)). */
struct DriveSpec {
  DriveKind kind = DriveKind::constant;
  double amplitude = 0.0;  // constant value / ramp offset / sinusoid amplitude
  double slope = 0.0;      // linear_ramp: amplitude + slope * t
  double frequency = 0.0;  // sinusoid: amplitude * sin(frequency * t + phase)
  double phase = 0.0;
  std::vector<std::pair<double, double>> table;  // tabulated: (t, value), t strictly increasing

  double operator()(double t) const;
  void validate() const;

  static DriveSpec constant(double value);
  static DriveSpec linear_ramp(double offset, double slope);
  static DriveSpec sinusoid(double amplitude, double frequency, double phase = 0.0);
  static DriveSpec tabulated(std::vector<std::pair<double, double>> table);
};

/** Driven-particle model: H(t) = p^2/2m + f(t) q + (1/2) m omega(t)^2 q^2. */
struct LinearPotentialModel {
  double mass = 1.0;
  DriveSpec drive;
  std::optional<DriveSpec> omega;  // absent -> omega == 0

  double f(double t) const { return drive(t); }
  double omega2(double t) const;
  weyl::OperatorPoly hamiltonian(double t) const;
  void validate() const;
};

/** I_l = A p + B q + C. */
struct LinearCoeffs {
  double A = 0.0, B = 0.0, C = 0.0;
  weyl::OperatorPoly to_poly() const;
  static LinearCoeffs from_poly(const weyl::OperatorPoly& poly);
  std::vector<double> vec() const { return {A, B, C}; }
};

/** I_q = D p^2 + E (pq+qp) + F q^2 + A' p + B' q + C'. */
struct QuadCoeffs {
  double D = 0.0, E = 0.0, F = 0.0, Ap = 0.0, Bp = 0.0, Cp = 0.0;
  double casimir() const { return D * F - E * E; }
  bool elliptic() const { return casimir() > 0.0; }
  weyl::OperatorPoly to_poly() const;
  static QuadCoeffs from_poly(const weyl::OperatorPoly& poly);
  std::vector<double> vec() const { return {D, E, F, Ap, Bp, Cp}; }
  static QuadCoeffs from_vec(std::span<const double> v);
};

/**
 * First-order coefficient system produced by projecting the
 * Liouville-von Neumann condition onto the family generators.  The
 * right-hand side is evaluated through the operator algebra at each call,
 * never from a hand-written formula.
 */
struct OdeSystem {
  weyl::InvariantFamily family;
  int dim = 0;
  std::function<void(double t, std::span<const double> y, std::span<double> dy)> rhs;
};

OdeSystem generate_ode_system(weyl::InvariantFamily family,
                              const LinearPotentialModel& model);

/** Coefficient trajectory on a uniform time grid. */
struct CoefficientPath {
  weyl::InvariantFamily family{};
  double t0 = 0.0;
  double step = 0.0;
  std::vector<double> times;
  std::vector<std::vector<double>> values;  // values[i] has OdeSystem::dim entries

  std::size_t size() const { return times.size(); }
  bool contains(double t) const;
  /** Index of the node with time t; throws unless t matches one to 1e-9. */
  std::size_t node_index(double t) const;
  /** Coefficients at t by linear interpolation between bracketing nodes. */
  std::vector<double> value_at(double t) const;
};

/** One classical RK4 step of size h. */
std::vector<double> rk4_step(const OdeSystem& system, double t,
                             std::span<const double> y, double h);

/**
 * Fixed-step RK4 over [t0, t1].  Every run is verified by a half-step
 * Richardson re-run; disagreement beyond rel_tol (relative, floored at
 * magnitude 1) throws.  t1 == t0 yields the single seed sample.
 */
CoefficientPath integrate(const OdeSystem& system, std::span<const double> seed,
                          double t0, double t1, double step,
                          double rel_tol = 1e-9);

/** Invariant at time t as a normal-ordered polynomial (linear interpolation
 *  of coefficients between path samples). */
weyl::OperatorPoly materialize(const CoefficientPath& path, double t);

/** D F - E^2 along a quadratic path. */
std::vector<double> casimir_series(const CoefficientPath& path);

}  // namespace lrsolve::invariants
