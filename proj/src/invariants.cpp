#include "lrsolve/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lrsolve::invariants {

using weyl::Complex;
using weyl::OperatorPoly;

double DriveSpec::operator()(double t) const {
  switch (kind) {
    case DriveKind::constant:
      return amplitude;
    case DriveKind::linear_ramp:
      return amplitude + slope * t;
    case DriveKind::sinusoid:
      return amplitude * std::sin(frequency * t + phase);
    case DriveKind::tabulated: {
      if (table.empty()) throw std::runtime_error("drive: empty table");
      // constant extrapolation outside the tabulated window
      if (t <= table.front().first) return table.front().second;
      if (t >= table.back().first) return table.back().second;
      auto hi = std::upper_bound(table.begin(), table.end(), t,
                                 [](double v, const auto& e) { return v < e.first; });
      auto lo = hi - 1;
      const double w = (t - lo->first) / (hi->first - lo->first);
      return lo->second + w * (hi->second - lo->second);
    }
  }
  throw std::logic_error("drive: unknown kind");
}

void DriveSpec::validate() const {
  if (kind == DriveKind::tabulated) {
    if (table.size() < 2) throw std::runtime_error("drive: table needs at least 2 rows");
    for (std::size_t i = 1; i < table.size(); ++i)
      if (table[i].first <= table[i - 1].first)
        throw std::runtime_error("drive: table times must increase strictly");
  }
}

DriveSpec DriveSpec::constant(double value) {
  DriveSpec d;
  d.kind = DriveKind::constant;
  d.amplitude = value;
  return d;
}

DriveSpec DriveSpec::linear_ramp(double offset, double slope) {
  DriveSpec d;
  d.kind = DriveKind::linear_ramp;
  d.amplitude = offset;
  d.slope = slope;
  return d;
}

DriveSpec DriveSpec::sinusoid(double amplitude, double frequency, double phase) {
  DriveSpec d;
  d.kind = DriveKind::sinusoid;
  d.amplitude = amplitude;
  d.frequency = frequency;
  d.phase = phase;
  return d;
}

DriveSpec DriveSpec::tabulated(std::vector<std::pair<double, double>> table) {
  DriveSpec d;
  d.kind = DriveKind::tabulated;
  d.table = std::move(table);
  d.validate();
  return d;
}

double LinearPotentialModel::omega2(double t) const {
  if (!omega) return 0.0;
  const double w = (*omega)(t);
  return w * w;
}

OperatorPoly LinearPotentialModel::hamiltonian(double t) const {
  OperatorPoly h = Complex(0.5 / mass) * OperatorPoly::monomial(0, 2) +
                   Complex(f(t)) * OperatorPoly::q();
  const double w2 = omega2(t);
  if (w2 != 0.0) h += Complex(0.5 * mass * w2) * OperatorPoly::monomial(2, 0);
  return h;
}

void LinearPotentialModel::validate() const {
  if (mass <= 0.0) throw std::runtime_error("model: mass must be positive");
  drive.validate();
  if (omega) omega->validate();
}

OperatorPoly LinearCoeffs::to_poly() const {
  return Complex(A) * OperatorPoly::p() + Complex(B) * OperatorPoly::q() +
         OperatorPoly::one(Complex(C));
}

LinearCoeffs LinearCoeffs::from_poly(const OperatorPoly& poly) {
  if (poly.degree() > 1)
    throw std::invalid_argument("LinearCoeffs::from_poly: degree above 1");
  return {poly.coeff(0, 1).real(), poly.coeff(1, 0).real(), poly.coeff(0, 0).real()};
}

OperatorPoly QuadCoeffs::to_poly() const {
  OperatorPoly out = Complex(D) * OperatorPoly::monomial(0, 2) +
                     Complex(E) * OperatorPoly::symmetric_qp() +
                     Complex(F) * OperatorPoly::monomial(2, 0);
  out += Complex(Ap) * OperatorPoly::p() + Complex(Bp) * OperatorPoly::q() +
         OperatorPoly::one(Complex(Cp));
  return out;
}

QuadCoeffs QuadCoeffs::from_poly(const OperatorPoly& poly) {
  if (poly.degree() > 2)
    throw std::invalid_argument("QuadCoeffs::from_poly: degree above 2");
  QuadCoeffs c;
  c.D = poly.coeff(0, 2).real();
  c.F = poly.coeff(2, 0).real();
  c.E = 0.5 * poly.coeff(1, 1).real();
  c.Ap = poly.coeff(0, 1).real();
  c.Bp = poly.coeff(1, 0).real();
  // the symmetric term contributes -iE to the stored identity coefficient
  c.Cp = (poly.coeff(0, 0) + Complex(0.0, c.E)).real();
  return c;
}

QuadCoeffs QuadCoeffs::from_vec(std::span<const double> v) {
  if (v.size() != 6) throw std::invalid_argument("QuadCoeffs::from_vec: need 6 values");
  return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

OdeSystem generate_ode_system(weyl::InvariantFamily family,
                              const LinearPotentialModel& model) {
  model.validate();
  OdeSystem sys;
  sys.family = family;
  auto gens = weyl::family_generators(family);
  sys.dim = static_cast<int>(gens.size());
  sys.rhs = [gens = std::move(gens), model](double t, std::span<const double> y,
                                            std::span<double> dy) {
    auto rates = weyl::lvn_coefficient_rates(gens, y, model.hamiltonian(t));
    std::copy(rates.begin(), rates.end(), dy.begin());
  };
  return sys;
}

bool CoefficientPath::contains(double t) const {
  if (times.empty()) return false;
  const double tol = 1e-9 * std::max(1.0, std::abs(times.back()));
  return t >= times.front() - tol && t <= times.back() + tol;
}

std::size_t CoefficientPath::node_index(double t) const {
  if (times.empty()) throw std::runtime_error("path: empty");
  if (times.size() == 1 || step == 0.0) {
    if (std::abs(t - times.front()) > 1e-9)
      throw std::runtime_error("path: time off the sample grid");
    return 0;
  }
  const auto idx = static_cast<std::ptrdiff_t>(std::llround((t - t0) / step));
  if (idx < 0 || idx >= static_cast<std::ptrdiff_t>(times.size()) ||
      std::abs(times[idx] - t) > 1e-9)
    throw std::runtime_error("path: time off the sample grid");
  return static_cast<std::size_t>(idx);
}

std::vector<double> CoefficientPath::value_at(double t) const {
  if (!contains(t)) throw std::runtime_error("path: time outside the integrated window");
  if (times.size() == 1) return values.front();
  double pos = (t - t0) / step;
  pos = std::clamp(pos, 0.0, double(times.size() - 1));
  const auto lo = std::min(static_cast<std::size_t>(pos), times.size() - 2);
  const double w = std::clamp(pos - double(lo), 0.0, 1.0);
  std::vector<double> out(values[lo].size());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = (1.0 - w) * values[lo][k] + w * values[lo + 1][k];
  return out;
}

std::vector<double> rk4_step(const OdeSystem& system, double t,
                             std::span<const double> y, double h) {
  const std::size_t n = y.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n), out(n);
  system.rhs(t, y, k1);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
  system.rhs(t + 0.5 * h, tmp, k2);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
  system.rhs(t + 0.5 * h, tmp, k3);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
  system.rhs(t + h, tmp, k4);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

namespace {

CoefficientPath run_fixed_grid(const OdeSystem& system, std::span<const double> seed,
                               double t0, std::size_t n_steps, double step) {
  CoefficientPath path;
  path.family = system.family;
  path.t0 = t0;
  path.step = step;
  path.times.reserve(n_steps + 1);
  path.values.reserve(n_steps + 1);
  std::vector<double> y(seed.begin(), seed.end());
  path.times.push_back(t0);
  path.values.push_back(y);
  for (std::size_t i = 0; i < n_steps; ++i) {
    const double t = t0 + double(i) * step;
    y = rk4_step(system, t, y, step);
    path.times.push_back(t0 + double(i + 1) * step);
    path.values.push_back(y);
  }
  return path;
}

}  // namespace

CoefficientPath integrate(const OdeSystem& system, std::span<const double> seed,
                          double t0, double t1, double step, double rel_tol) {
  if (seed.size() != static_cast<std::size_t>(system.dim))
    throw std::invalid_argument("integrate: seed dimension mismatch");
  if (t1 < t0) throw std::invalid_argument("integrate: t1 must be >= t0");
  if (t1 == t0) {
    CoefficientPath path;
    path.family = system.family;
    path.t0 = t0;
    path.step = 0.0;
    path.times = {t0};
    path.values = {std::vector<double>(seed.begin(), seed.end())};
    return path;
  }
  if (step <= 0.0) throw std::invalid_argument("integrate: step must be positive");

  const auto n_steps = static_cast<std::size_t>(std::ceil((t1 - t0) / step - 1e-12));
  const double h = (t1 - t0) / double(n_steps);
  CoefficientPath full = run_fixed_grid(system, seed, t0, n_steps, h);
  CoefficientPath half = run_fixed_grid(system, seed, t0, 2 * n_steps, 0.5 * h);

  // Richardson verification: full-step and half-step runs must agree.
  for (std::size_t i = 0; i < full.size(); ++i) {
    for (std::size_t k = 0; k < full.values[i].size(); ++k) {
      const double a = full.values[i][k];
      const double b = half.values[2 * i][k];
      if (std::abs(a - b) > rel_tol * std::max(1.0, std::abs(b)))
        throw std::runtime_error(
            "integrate: half-step verification failed; reduce the step size");
    }
  }
  return full;
}

weyl::OperatorPoly materialize(const CoefficientPath& path, double t) {
  const std::vector<double> v = path.value_at(t);
  if (path.family == weyl::InvariantFamily::linear)
    return LinearCoeffs{v[0], v[1], v[2]}.to_poly();
  return QuadCoeffs::from_vec(v).to_poly();
}

std::vector<double> casimir_series(const CoefficientPath& path) {
  if (path.family != weyl::InvariantFamily::quadratic)
    throw std::invalid_argument("casimir_series: quadratic path required");
  std::vector<double> out;
  out.reserve(path.size());
  for (const auto& v : path.values) out.push_back(v[0] * v[2] - v[1] * v[1]);
  return out;
}

}  // namespace lrsolve::invariants
