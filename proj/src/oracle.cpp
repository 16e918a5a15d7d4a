#include "lrsolve/oracle.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "lrsolve/fft.hpp"
#include "lrsolve/kernels.hpp"

namespace lrsolve::oracle {

using gridstates::Complex;
using gridstates::Grid;
using gridstates::Wavefunction;

namespace {

/** Mass fraction inside |x| <= 0.9 * L/2. */
double interior_fraction(const Wavefunction& w) {
  const double edge = 0.45 * w.grid.length;
  double inside = 0.0, total = 0.0;
  for (int j = 0; j < w.grid.n; ++j) {
    const double m = std::norm(w.psi[j]);
    total += m;
    if (std::abs(w.grid.x(j)) <= edge) inside += m;
  }
  return total > 0.0 ? inside / total : 1.0;
}

std::vector<double> absorber_mask(const Grid& g, double width) {
  std::vector<double> mask(g.n, 1.0);
  const double half = 0.5 * g.length;
  const double start = (1.0 - width) * half;
  for (int j = 0; j < g.n; ++j) {
    const double ax = std::abs(g.x(j));
    if (ax > start) {
      const double xi = std::min(1.0, (ax - start) / (half - start));
      const double c = std::cos(0.5 * std::numbers::pi * xi);
      mask[j] = c * c;
    }
  }
  return mask;
}

}  // namespace

Run propagate(const Scenario& sc, const Wavefunction& initial,
              std::span<const double> record_times, const Options& opt) {
  if (record_times.empty())
    throw std::invalid_argument("propagate: no record times");
  if (initial.grid.n <= 0 || initial.psi.size() != std::size_t(initial.grid.n))
    throw std::invalid_argument("propagate: malformed initial state");
  const double dt = opt.dt > 0.0 ? opt.dt : sc.oracle_dt;
  if (!(dt > 0.0)) throw std::invalid_argument("propagate: dt must be positive");

  const Grid& g = initial.grid;
  const std::vector<double> xs = g.xs();
  const std::vector<double> ks = g.ks();
  const double mass = sc.model.mass;

  std::vector<double> mask;
  if (opt.absorber_width > 0.0) mask = absorber_mask(g, opt.absorber_width);

  Run run;
  run.times.assign(record_times.begin(), record_times.end());
  run.states.reserve(record_times.size());

  auto record = [&](const Wavefunction& w) {
    run.states.push_back(w);
    run.norms.push_back(gridstates::norm(w));
    run.moments.push_back(gridstates::compute_moments(w));
    if (opt.check_interior && interior_fraction(w) < 1.0 - opt.interior_loss) {
      std::ostringstream msg;
      msg << "propagate: state reached the grid boundary at t = "
          << run.times[run.states.size() - 1] << "; enlarge the box";
      throw std::runtime_error(msg.str());
    }
  };

  Wavefunction w = initial;
  record(w);

  std::vector<double> phase(g.n);
  auto kinetic = [&](double tau) {
    fft::forward(w.psi, w.psi);
    const double c = -tau / (2.0 * mass);
    for (int j = 0; j < g.n; ++j) phase[j] = c * ks[j] * ks[j];
    kernels::expi_mul(phase, w.psi);
    fft::inverse(w.psi, w.psi);
  };
  auto potential = [&](double t, double h) {
    const double f = sc.model.f(t);
    const double c2 = 0.5 * mass * sc.model.omega2(t);
    for (int j = 0; j < g.n; ++j) phase[j] = -h * xs[j] * (f + c2 * xs[j]);
    kernels::expi_mul(phase, w.psi);
  };

  for (std::size_t seg = 1; seg < record_times.size(); ++seg) {
    const double ta = record_times[seg - 1];
    const double tb = record_times[seg];
    const double span = tb - ta;
    if (span == 0.0) {
      record(w);
      continue;
    }
    const auto n = std::max<long long>(1, std::llround(std::abs(span) / dt));
    const double h = span / double(n);

    kinetic(0.5 * h);
    for (long long j = 0; j < n; ++j) {
      potential(ta + (double(j) + 0.5) * h, h);
      kinetic(j + 1 < n ? h : 0.5 * h);
      if (!mask.empty())
        for (int i = 0; i < g.n; ++i) w.psi[i] *= mask[i];
    }
    record(w);
  }
  return run;
}

std::vector<FidelityPoint> fidelity_series(
    std::span<const double> times, std::span<const Wavefunction> a,
    std::span<const Wavefunction> b) {
  if (times.size() != a.size() || a.size() != b.size())
    throw std::invalid_argument("fidelity_series: length mismatch");
  std::vector<FidelityPoint> out;
  out.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Complex ov = gridstates::inner(a[i], b[i]);
    out.push_back({times[i], std::abs(ov), std::arg(ov)});
  }
  return out;
}

}  // namespace lrsolve::oracle
