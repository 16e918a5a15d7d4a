#include "lrsolve/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "lrsolve/gridstates.hpp"
#include "lrsolve/invariants.hpp"
#include "lrsolve/scenario.hpp"

using namespace lrsolve;
using gridstates::GaussianKind;
using gridstates::Grid;
using gridstates::Wavefunction;
using invariants::DriveSpec;

namespace {

constexpr double kPi = std::numbers::pi;

Scenario base_scenario() {
  Scenario sc;
  sc.name = "oracle-test";
  sc.model.mass = 1.0;
  sc.model.drive = DriveSpec::constant(0.0);
  return sc;
}

Wavefunction coherent(const Grid& g, double center, double momentum) {
  Wavefunction w = gridstates::hermite_state(g, 0);
  gridstates::apply_gaussian_unitary(w, GaussianKind::translate_q, center);
  gridstates::apply_gaussian_unitary(w, GaussianKind::boost_p, momentum);
  return w;
}

double distance(const Wavefunction& a, const Wavefunction& b) {
  REQUIRE(a.grid == b.grid);
  double acc = 0.0;
  for (std::size_t j = 0; j < a.psi.size(); ++j) acc += std::norm(a.psi[j] - b.psi[j]);
  return std::sqrt(a.grid.dx() * acc);
}

}  // namespace

TEST_CASE("free spreading matches the quadratic-chirp closed form") {
  const Scenario sc = base_scenario();
  const Grid g = sc.make_grid();
  const Wavefunction initial = gridstates::hermite_state(g, 0);
  const std::vector<double> times{0.0, 0.5, 1.0};

  // With no potential the splitting is exact for any step size.
  const auto run = oracle::propagate(sc, initial, times, {.dt = 0.01});

  Wavefunction expect = initial;
  gridstates::apply_gaussian_unitary(expect, GaussianKind::chirp_p2, -0.5);
  CHECK(distance(run.states.back(), expect) < 1e-11);

  // Ballistic variance growth of the ground Gaussian: <q^2>(t) = (1 + t^2)/2.
  CHECK(run.moments[1].q2 == doctest::Approx(0.5 * (1.0 + 0.25)).epsilon(1e-10));
  CHECK(run.moments[2].q2 == doctest::Approx(1.0).epsilon(1e-10));
  for (double n : run.norms) CHECK(std::abs(n - 1.0) < 1e-12);
}

TEST_CASE("harmonic oscillator returns after one period with phase pi") {
  Scenario sc = base_scenario();
  sc.model.omega = DriveSpec::constant(1.0);
  const Grid g = sc.make_grid();
  const Wavefunction initial = coherent(g, 1.5, 0.0);
  const std::vector<double> times{0.0, kPi, 2.0 * kPi};

  const auto run = oracle::propagate(sc, initial, times, {.dt = 5e-4});

  // Half period: the packet sits mirrored at -1.5.
  CHECK(run.moments[1].q == doctest::Approx(-1.5).epsilon(1e-6));

  const auto ov = gridstates::inner(initial, run.states.back());
  CHECK(std::abs(ov) >= 1.0 - 1e-8);
  CHECK(std::abs(std::abs(std::arg(ov)) - kPi) < 1e-5);
  for (double n : run.norms) CHECK(std::abs(n - 1.0) < 1e-10);
}

TEST_CASE("step halving cuts the error by four") {
  Scenario sc = base_scenario();
  sc.model.drive = DriveSpec::sinusoid(0.8, 1.9, 0.3);
  sc.model.omega = DriveSpec::constant(1.2);
  const Grid g = sc.make_grid();
  const Wavefunction initial = coherent(g, 1.0, 0.5);
  const std::vector<double> times{0.0, 0.5};

  const auto ref = oracle::propagate(sc, initial, times, {.dt = 5e-5});
  const auto coarse = oracle::propagate(sc, initial, times, {.dt = 8e-4});
  const auto fine = oracle::propagate(sc, initial, times, {.dt = 4e-4});

  const double e1 = distance(coarse.states.back(), ref.states.back());
  const double e2 = distance(fine.states.back(), ref.states.back());
  CHECK(e1 > 1e-9);  // errors are resolvable, not roundoff noise
  const double ratio = e1 / e2;
  CHECK(ratio > 3.7);
  CHECK(ratio < 4.3);
}

TEST_CASE("recorded moments obey the classical equations of motion") {
  Scenario sc = base_scenario();
  sc.model.mass = 1.3;
  sc.model.drive = DriveSpec::sinusoid(0.3, 1.7, 0.2);
  sc.model.omega = DriveSpec::constant(1.0);
  const Grid g = sc.make_grid();
  const Wavefunction initial = coherent(g, 0.5, 0.3);

  const double dt_rec = 5e-3;
  std::vector<double> times;
  for (int i = 0; i <= 200; ++i) times.push_back(double(i) * dt_rec);

  const auto run = oracle::propagate(sc, initial, times);

  // Five-point central first derivative of the recorded expectation values.
  auto deriv = [&](auto member, std::size_t i) {
    const double ym2 = run.moments[i - 2].*member, ym1 = run.moments[i - 1].*member;
    const double yp1 = run.moments[i + 1].*member, yp2 = run.moments[i + 2].*member;
    return (ym2 - 8.0 * ym1 + 8.0 * yp1 - yp2) / (12.0 * dt_rec);
  };

  double worst_q = 0.0, worst_p = 0.0;
  for (std::size_t i = 2; i + 2 < times.size(); ++i) {
    const double t = times[i];
    const double rq = deriv(&gridstates::Moments::q, i) - run.moments[i].p / sc.model.mass;
    const double rp = deriv(&gridstates::Moments::p, i) +
                      sc.model.f(t) + sc.model.mass * sc.model.omega2(t) * run.moments[i].q;
    worst_q = std::max(worst_q, std::abs(rq));
    worst_p = std::max(worst_p, std::abs(rp));
  }
  CHECK(worst_q < 1e-5);
  CHECK(worst_p < 1e-5);
}

TEST_CASE("reversed record times retrace the propagation exactly") {
  Scenario sc = base_scenario();
  sc.model.drive = DriveSpec::sinusoid(0.8, 1.9, 0.3);
  sc.model.omega = DriveSpec::constant(1.2);
  const Grid g = sc.make_grid();
  const Wavefunction initial = coherent(g, 1.0, 0.5);

  const auto fwd = oracle::propagate(sc, initial, std::vector<double>{0.0, 0.5});
  const auto back =
      oracle::propagate(sc, fwd.states.back(), std::vector<double>{0.5, 0.0});

  const auto ov = gridstates::inner(initial, back.states.back());
  CHECK(std::abs(ov) >= 1.0 - 1e-9);
  CHECK(std::abs(std::arg(ov)) < 1e-9);
}

TEST_CASE("record boundaries do not perturb the propagation") {
  Scenario sc = base_scenario();
  sc.model.drive = DriveSpec::sinusoid(0.8, 1.9, 0.3);
  const Grid g = sc.make_grid();
  const Wavefunction initial = coherent(g, 1.0, 0.0);

  const auto split =
      oracle::propagate(sc, initial, std::vector<double>{0.0, 0.3, 1.0}, {.dt = 1e-3});
  const auto merged =
      oracle::propagate(sc, initial, std::vector<double>{0.0, 1.0}, {.dt = 1e-3});
  CHECK(distance(split.states.back(), merged.states.back()) < 1e-11);
}

TEST_CASE("runaway packet trips the interior guard") {
  Scenario sc = base_scenario();
  sc.model.drive = DriveSpec::constant(3.0);
  const Grid g = sc.make_grid();
  const Wavefunction initial = gridstates::hermite_state(g, 0);
  const std::vector<double> times{0.0, 1.0, 2.0, 3.0};

  CHECK_THROWS_WITH_AS(oracle::propagate(sc, initial, times, {.dt = 1e-3}),
                       doctest::Contains("grid boundary"), std::runtime_error);
}

TEST_CASE("edge absorber drains an escaping packet instead of throwing") {
  Scenario sc = base_scenario();
  sc.model.drive = DriveSpec::constant(3.0);
  const Grid g = sc.make_grid();
  const Wavefunction initial = gridstates::hermite_state(g, 0);
  const std::vector<double> times{0.0, 1.0, 2.0, 3.0};

  oracle::Options opt;
  opt.dt = 1e-3;
  opt.check_interior = false;
  opt.absorber_width = 0.25;
  const auto run = oracle::propagate(sc, initial, times, opt);
  CHECK(run.norms.front() == doctest::Approx(1.0));
  CHECK(run.norms.back() < 0.5);
  CHECK(run.norms.back() >= 0.0);
}

TEST_CASE("fidelity series reports overlap magnitude and phase") {
  const Grid g = Grid::make(256, 16.0);
  Wavefunction a = gridstates::hermite_state(g, 0);
  Wavefunction b = a;
  gridstates::scale(b, std::polar(1.0, 0.3));

  const std::vector<double> times{0.0};
  const std::vector<Wavefunction> as{a}, bs{b};
  const auto series = oracle::fidelity_series(times, as, bs);
  REQUIRE(series.size() == 1);
  CHECK(series[0].overlap == doctest::Approx(1.0));
  CHECK(series[0].phase == doctest::Approx(0.3));

  CHECK_THROWS_AS(oracle::fidelity_series(times, as, {}), std::invalid_argument);
  CHECK_THROWS_AS(
      oracle::propagate(base_scenario(), a, std::vector<double>{}, {}),
      std::invalid_argument);
}
