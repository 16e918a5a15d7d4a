#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "lrsolve/gridstates.hpp"
#include "lrsolve/invariants.hpp"

namespace lrsolve {

/** Acceptance budgets used by the verification stages. */
struct Tolerances {
  double fidelity = 1e-5;        // allowed 1 - |overlap| against the propagator
  double phase = 1e-4;           // allowed phase disagreement (radians)
  double eigen_residual = 1e-7;  // relative invariant eigen-equation residual
  double norm_drift = 1e-10;     // propagator unitarity budget
  double coefficient_tail = 1e-8;  // expansion mass allowed beyond n_max

  void scale_all(double factor);
};

/**
 * One fully specified problem: the physical model, the time window, the
 * numerical rails, and the invariant seeds.  Everything downstream (solution
 * construction, the reference propagator, reporting) reads from here.
 */
struct Scenario {
  std::string name;
  invariants::LinearPotentialModel model;
  double t0 = 0.0;
  double t1 = 1.0;

  // Numerical rails.  fine_step must be an even multiple of ode_step so the
  // quadrature midpoints land on stored coefficient nodes; dt_record must be
  // a multiple of fine_step so records land on quadrature nodes.
  double ode_step = 1e-3;
  double fine_step = 4e-3;
  double dt_record = 4e-2;
  double oracle_dt = 1e-4;
  double offset_delta = 1e-4;  // one-sided step used for time derivatives

  int grid_n = 1024;
  double grid_length = 24.0;
  int n_max = 32;        // expansion order for initial-state coefficients
  int basis_size = 160;  // truncation of the squeeze matrix exponential

  std::array<double, 6> quad_seed{1.0, 0.0, 1.0, 0.0, 0.0, 0.0};
  std::array<double, 3> linear_seed{1.0, 0.0, 0.0};

  Tolerances tol;

  gridstates::Grid make_grid() const;
  std::vector<double> record_times() const;
  void validate() const;
};

/** Parses the flat `key = value` scenario format; throws on malformed input,
 *  unknown keys, or duplicate keys.  `origin` names the source in errors. */
Scenario parse_scenario(std::istream& in, const std::string& origin);

Scenario load_scenario(const std::string& path);

}  // namespace lrsolve
