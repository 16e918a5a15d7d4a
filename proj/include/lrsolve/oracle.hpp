#pragma once

#include <span>
#include <vector>

#include "lrsolve/gridstates.hpp"
#include "lrsolve/scenario.hpp"

namespace lrsolve::oracle {

struct Options {
  /** Step size; 0 uses the scenario's oracle.dt. */
  double dt = 0.0;
  /** Throw when mass leaks out of the interior 90% of the box. */
  bool check_interior = true;
  double interior_loss = 1e-6;
  /** Fraction of the half-box covered by a cosine-squared edge absorber
   *  applied after every step; 0 disables it (the propagation then stays
   *  exactly unitary).  With an absorber on, disable check_interior. */
  double absorber_width = 0.0;
};

struct Run {
  std::vector<double> times;
  std::vector<gridstates::Wavefunction> states;
  std::vector<double> norms;
  std::vector<gridstates::Moments> moments;
};

/**
 * Independent reference propagation: symmetric split-step Fourier with the
 * potential sampled at each substep midpoint (merged kinetic half-steps).
 * Second order in dt; works on ascending or descending record times, so a
 * reversed record list propagates backwards in time.  The initial state is
 * taken at record_times.front().  Uses the grid of `initial`, which may
 * differ from the scenario grid.
 */
Run propagate(const Scenario& sc, const gridstates::Wavefunction& initial,
              std::span<const double> record_times, const Options& opt = {});

struct FidelityPoint {
  double t = 0.0;
  double overlap = 0.0;  // |<a|b>|
  double phase = 0.0;    // arg <a|b>
};

std::vector<FidelityPoint> fidelity_series(
    std::span<const double> times,
    std::span<const gridstates::Wavefunction> a,
    std::span<const gridstates::Wavefunction> b);

}  // namespace lrsolve::oracle
