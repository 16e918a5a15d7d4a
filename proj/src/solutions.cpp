#include "lrsolve/solutions.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <sstream>
#include <stdexcept>

#include "lrsolve/kernels.hpp"

namespace lrsolve::solutions {

using invariants::CoefficientPath;
using invariants::QuadCoeffs;
using transforms::AlphaRho;
using transforms::EtaBeta;

namespace {

constexpr Complex kI{0.0, 1.0};

// 8th-order central stencils; [m-1] weighs the +-m neighbour.
constexpr double kFirst[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
constexpr double kSecond0 = -205.0 / 72.0;
constexpr double kSecond[4] = {8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0};

[[noreturn]] void fail(const std::string& what) { throw std::runtime_error(what); }

double sqrt_half(int m) { return std::sqrt(0.5 * double(m)); }
double ladder2(int m) { return 0.5 * std::sqrt(double(m + 1) * double(m + 2)); }

/** Applies exp(i * lambda) through one parity sector of the eigensolve. */
struct ParitySector {
  Eigen::MatrixXd vecs;  // columns are eigenvectors
  Eigen::VectorXd vals;
};

ParitySector solve_sector(const AlphaRho& ar, int size, int parity) {
  const double a = ar.alpha_im, r = ar.rho_im;
  const int count = (size - parity + 1) / 2;
  Eigen::VectorXd diag(count), off(std::max(count - 1, 0));
  for (int i = 0; i < count; ++i) {
    const int m = 2 * i + parity;
    diag[i] = (a + r) * (m + 0.5);
    if (i + 1 < count) off[i] = (r - a) * ladder2(m);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  if (count == 1) {
    ParitySector s;
    s.vecs = Eigen::MatrixXd::Ones(1, 1);
    s.vals = diag;
    return s;
  }
  es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success)
    fail("squeeze_columns: tridiagonal eigensolve failed");
  return {es.eigenvectors(), es.eigenvalues()};
}

}  // namespace

Eigen::MatrixXcd hermite_matrix(const weyl::OperatorPoly& poly, int size) {
  if (size <= 0) throw std::invalid_argument("hermite_matrix: size must be positive");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(size, size);
  for (const auto& [mono, coeff] : poly.terms()) {
    const int qd = mono.qdeg, pd = mono.pdeg;
    if (qd + pd > 2)
      throw std::invalid_argument("hermite_matrix: polynomial degree exceeds 2");
    if (qd == 0 && pd == 0) {
      for (int j = 0; j < size; ++j) m(j, j) += coeff;
    } else if (qd == 1 && pd == 0) {  // q = (A + A^dag)/sqrt(2)
      for (int j = 0; j + 1 < size; ++j) {
        m(j + 1, j) += coeff * sqrt_half(j + 1);
        m(j, j + 1) += coeff * sqrt_half(j + 1);
      }
    } else if (qd == 0 && pd == 1) {  // p = i (A^dag - A)/sqrt(2)
      for (int j = 0; j + 1 < size; ++j) {
        m(j + 1, j) += coeff * kI * sqrt_half(j + 1);
        m(j, j + 1) -= coeff * kI * sqrt_half(j + 1);
      }
    } else if (qd == 2 && pd == 0) {
      for (int j = 0; j < size; ++j) m(j, j) += coeff * (j + 0.5);
      for (int j = 0; j + 2 < size; ++j) {
        m(j + 2, j) += coeff * ladder2(j);
        m(j, j + 2) += coeff * ladder2(j);
      }
    } else if (qd == 0 && pd == 2) {
      for (int j = 0; j < size; ++j) m(j, j) += coeff * (j + 0.5);
      for (int j = 0; j + 2 < size; ++j) {
        m(j + 2, j) -= coeff * ladder2(j);
        m(j, j + 2) -= coeff * ladder2(j);
      }
    } else {  // normal-ordered qp = (qp + pq)/2 + i/2
      for (int j = 0; j < size; ++j) m(j, j) += coeff * kI * 0.5;
      for (int j = 0; j + 2 < size; ++j) {
        m(j + 2, j) += coeff * kI * ladder2(j);
        m(j, j + 2) -= coeff * kI * ladder2(j);
      }
    }
  }
  return m;
}

Eigen::MatrixXcd squeeze_columns(const AlphaRho& ar, int size, int count) {
  if (size <= 0 || count <= 0 || count > size)
    throw std::invalid_argument("squeeze_columns: bad size/count");
  const ParitySector sector[2] = {solve_sector(ar, size, 0),
                                  solve_sector(ar, size, 1)};
  const Eigen::ArrayXd cosv[2] = {sector[0].vals.array().cos(),
                                  sector[1].vals.array().cos()};
  const Eigen::ArrayXd sinv[2] = {sector[0].vals.array().sin(),
                                  sector[1].vals.array().sin()};
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(size, count);
  for (int n = 0; n < count; ++n) {
    const int parity = n % 2;
    const auto& s = sector[parity];
    const Eigen::ArrayXd row = s.vecs.row(n / 2).transpose().array();
    const Eigen::VectorXd re = s.vecs * (row * cosv[parity]).matrix();
    const Eigen::VectorXd im = s.vecs * (row * sinv[parity]).matrix();
    for (int i = 0; i < re.size(); ++i)
      out(2 * i + parity, n) = Complex(re[i], im[i]);
  }
  return out;
}

Eigen::MatrixXcd squeeze_unitary(const AlphaRho& ar, int size) {
  return squeeze_columns(ar, size, size);
}

// ---------------------------------------------------------------------------
// Quadratic branch
// ---------------------------------------------------------------------------

namespace {

/** V1 psi = exp(i e q) exp(i b p) exp(i e b / 2) psi. */
void apply_v1_state(Wavefunction& w, const EtaBeta& eb) {
  const double e = eb.eta_im, b = eb.beta_im;
  gridstates::scale(w, std::polar(1.0, 0.5 * e * b));
  gridstates::apply_gaussian_unitary(w, gridstates::GaussianKind::translate_q, -b);
  gridstates::apply_gaussian_unitary(w, gridstates::GaussianKind::boost_p, e);
}

/** V1^dag psi (inverse factors in reverse order). */
void apply_v1_adjoint_state(Wavefunction& w, const EtaBeta& eb) {
  const double e = eb.eta_im, b = eb.beta_im;
  gridstates::apply_gaussian_unitary(w, gridstates::GaussianKind::boost_p, -e);
  gridstates::apply_gaussian_unitary(w, gridstates::GaussianKind::translate_q, b);
  gridstates::scale(w, std::polar(1.0, -0.5 * e * b));
}

}  // namespace

QuadraticSolution::QuadraticSolution(const Scenario& sc) : sc_(sc) {
  sc_.validate();
  grid_ = sc_.make_grid();
  const QuadCoeffs seed = QuadCoeffs::from_vec(sc_.quad_seed);
  if (!seed.elliptic() || !(seed.D > 0.0))
    throw std::invalid_argument(
        "quadratic seed must be positive definite (D > 0, D F - E^2 > 0)");

  system_ = invariants::generate_ode_system(weyl::InvariantFamily::quadratic,
                                            sc_.model);
  path_ = invariants::integrate(system_, sc_.quad_seed, sc_.t0, sc_.t1,
                                sc_.ode_step);

  const double half = 0.5 * sc_.fine_step;
  const auto half_count =
      sc_.t1 > sc_.t0 ? std::llround((sc_.t1 - sc_.t0) / half) : 0;
  half_times_.reserve(std::size_t(half_count) + 1);
  for (long long j = 0; j <= half_count; ++j)
    half_times_.push_back(sc_.t0 + double(j) * half);
  fine_times_.reserve(half_times_.size() / 2 + 1);
  for (std::size_t j = 0; j < half_times_.size(); j += 2)
    fine_times_.push_back(half_times_[j]);

  // Pass 1 (sequential): reductions along the path, warm-starting each
  // squeeze solve from its predecessor so the parameters stay on one branch.
  reductions_.reserve(half_times_.size());
  for (std::size_t j = 0; j < half_times_.size(); ++j) {
    const QuadCoeffs c =
        QuadCoeffs::from_vec(path_.value_at(half_times_[j]));
    const AlphaRho* warm = j == 0 ? nullptr : &reductions_.back().ar;
    reductions_.push_back(transforms::reduce_quadratic(c, warm));
    varsigma_drift_ = std::max(
        varsigma_drift_,
        std::abs(reductions_[j].varsigma - reductions_[0].varsigma));
    offset_drift_ = std::max(
        offset_drift_, std::abs(reductions_[j].offset - reductions_[0].offset));
  }

  // Pass 2 (parallel): phase-rate rows at every half node.
  const int ncols = sc_.n_max + 1;
  const int basis = sc_.basis_size;
  const double delta = sc_.offset_delta;
  Eigen::MatrixXd rates(ncols, half_times_.size());
  std::vector<double> imag_residues(half_times_.size(), 0.0);
  std::exception_ptr first_error;
  const bool parallel = kernels::jobs() != 1 && omp_get_max_threads() > 1;

#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::ptrdiff_t j = 0; j < std::ptrdiff_t(half_times_.size()); ++j) {
    try {
      const double t = half_times_[j];
      const auto& red = reductions_[j];
      const std::vector<double> y0 = path_.value_at(t);
      const std::vector<double> yp = invariants::rk4_step(system_, t, y0, delta);
      const std::vector<double> ym = invariants::rk4_step(system_, t, y0, -delta);
      const QuadCoeffs cp = QuadCoeffs::from_vec(yp);
      const QuadCoeffs cm = QuadCoeffs::from_vec(ym);
      const EtaBeta ebp = transforms::eta_beta(cp);
      const EtaBeta ebm = transforms::eta_beta(cm);
      const AlphaRho arp = transforms::solve_alpha_rho(cp, &red.ar);
      const AlphaRho arm = transforms::solve_alpha_rho(cm, &red.ar);

      const Eigen::MatrixXcd cols0 = squeeze_columns(red.ar, basis, ncols);
      const Eigen::MatrixXcd dcols =
          (squeeze_columns(arp, basis, ncols) -
           squeeze_columns(arm, basis, ncols)) /
          (2.0 * delta);

      const weyl::OperatorPoly shifted =
          transforms::conjugate_by_v1(sc_.model.hamiltonian(t), red.eb);
      const Eigen::MatrixXcd mu = hermite_matrix(shifted, basis) * cols0;

      const double edot = (ebp.eta_im - ebm.eta_im) / (2.0 * delta);
      const double bdot = (ebp.beta_im - ebm.beta_im) / (2.0 * delta);
      const double berry =
          0.5 * (red.eb.eta_im * bdot - red.eb.beta_im * edot);

      double residue = 0.0;
      for (int n = 0; n < ncols; ++n) {
        const Complex d_n = cols0.col(n).dot(dcols.col(n));
        residue = std::max(residue, std::abs(d_n.real()));
        rates(n, j) =
            cols0.col(n).dot(mu.col(n)).real() + berry + d_n.imag();
      }
      imag_residues[j] = residue;
    } catch (...) {
#pragma omp critical(lrsolve_solutions_error)
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  imag_residue_ =
      *std::max_element(imag_residues.begin(), imag_residues.end());

  // Pass 3: cumulative composite Simpson on the fine grid.
  phases_ = Eigen::MatrixXd::Zero(ncols, fine_times_.size());
  for (std::size_t i = 0; i + 1 < fine_times_.size(); ++i) {
    phases_.col(i + 1) =
        phases_.col(i) + (sc_.fine_step / 6.0) *
                             (rates.col(2 * i) + 4.0 * rates.col(2 * i + 1) +
                              rates.col(2 * i + 2));
  }
}

std::size_t QuadraticSolution::half_index(double t) const {
  if (half_times_.size() == 1) {
    if (std::abs(t - half_times_[0]) > 1e-9 * std::max(1.0, std::abs(t)))
      throw std::invalid_argument("time is not on the phase grid");
    return 0;
  }
  const double half = 0.5 * sc_.fine_step;
  const auto idx = std::llround((t - sc_.t0) / half);
  if (idx < 0 || std::size_t(idx) >= half_times_.size() ||
      std::abs(half_times_[std::size_t(idx)] - t) >
          1e-9 * std::max(1.0, std::abs(t)))
    throw std::invalid_argument("time is not on the phase grid");
  return std::size_t(idx);
}

const transforms::QuadraticReduction& QuadraticSolution::reduction_at(
    double t) const {
  return reductions_[half_index(t)];
}

double QuadraticSolution::phase(int n, double t) const {
  if (n < 0 || n > sc_.n_max)
    throw std::invalid_argument("phase: n outside 0..n_max");
  const std::size_t h = half_index(t);
  if (h % 2 != 0)
    throw std::invalid_argument("phase: time is a midpoint, not a fine node");
  return phases_(n, Eigen::Index(h / 2));
}

Wavefunction QuadraticSolution::general(std::span<const Complex> coeffs,
                                        double t) const {
  if (coeffs.size() != std::size_t(sc_.n_max) + 1)
    throw std::invalid_argument("general: need exactly n_max + 1 coefficients");
  const std::size_t h = half_index(t);
  if (h % 2 != 0)
    throw std::invalid_argument("general: time is a midpoint, not a fine node");
  const auto& red = reductions_[h];

  Eigen::VectorXcd weighted(sc_.n_max + 1);
  for (int n = 0; n <= sc_.n_max; ++n)
    weighted[n] = coeffs[std::size_t(n)] *
                  std::polar(1.0, -phases_(n, Eigen::Index(h / 2)));
  const Eigen::MatrixXcd cols =
      squeeze_columns(red.ar, sc_.basis_size, sc_.n_max + 1);
  const Eigen::VectorXcd v = cols * weighted;

  const double total = v.squaredNorm();
  if (!(total > 0.0))
    throw std::invalid_argument("general: zero coefficient vector");
  const int guard = std::min(16, sc_.basis_size / 2);
  if (v.tail(guard).squaredNorm() > sc_.tol.coefficient_tail * total) {
    std::ostringstream msg;
    msg << "basis.size = " << sc_.basis_size
        << " cannot hold the squeezed state at t = " << t
        << " (tail mass " << v.tail(guard).squaredNorm() / total << ")";
    fail(msg.str());
  }
  const int resolvable = gridstates::max_resolvable_hermite(grid_, 0.9);
  if (resolvable + 1 < sc_.basis_size) {
    const auto len = sc_.basis_size - resolvable - 1;
    if (v.segment(resolvable + 1, len).squaredNorm() >
        sc_.tol.coefficient_tail * total) {
      std::ostringstream msg;
      msg << "grid " << grid_.n << "x" << grid_.length
          << " cannot resolve the squeezed state at t = " << t
          << "; enlarge the box";
      fail(msg.str());
    }
  }

  Wavefunction w = gridstates::synthesize_hermite(
      grid_, std::span<const Complex>(v.data(), std::size_t(v.size())));
  apply_v1_state(w, red.eb);
  return w;
}

Wavefunction QuadraticSolution::particular(int n, double t) const {
  if (n < 0 || n > sc_.n_max)
    throw std::invalid_argument("particular: n outside 0..n_max");
  std::vector<Complex> coeffs(std::size_t(sc_.n_max) + 1, Complex{0.0, 0.0});
  coeffs[std::size_t(n)] = 1.0;
  return general(coeffs, t);
}

std::vector<Complex> QuadraticSolution::expand(const Wavefunction& psi0) const {
  if (!(psi0.grid == grid_))
    throw std::invalid_argument("expand: state lives on a different grid");
  const auto& red = reductions_.front();

  Wavefunction shifted = psi0;
  apply_v1_adjoint_state(shifted, red.eb);
  const std::vector<Complex> d =
      gridstates::hermite_coefficients(shifted, sc_.basis_size - 1);
  const Eigen::Map<const Eigen::VectorXcd> dvec(d.data(),
                                                Eigen::Index(d.size()));

  const Eigen::MatrixXcd cols =
      squeeze_columns(red.ar, sc_.basis_size, sc_.n_max + 1);
  std::vector<Complex> c(std::size_t(sc_.n_max) + 1);
  double captured = 0.0;
  for (int n = 0; n <= sc_.n_max; ++n) {
    c[std::size_t(n)] = cols.col(n).dot(dvec);
    captured += std::norm(c[std::size_t(n)]);
  }
  const double total = gridstates::norm(psi0);
  const double missing = total * total - captured;
  if (missing > sc_.tol.coefficient_tail * total * total) {
    std::ostringstream msg;
    msg << "expansion with n_max = " << sc_.n_max << " misses mass fraction "
        << missing / (total * total) << "; raise n_max";
    fail(msg.str());
  }
  return c;
}

double QuadraticSolution::eigen_residual(int n, double t) const {
  const auto& red = reductions_[half_index(t)];
  const Wavefunction chi = particular(n, t);
  const weyl::OperatorPoly invariant = invariants::materialize(path_, t);
  Wavefunction applied = gridstates::apply_operator_poly(chi, invariant);
  const double lambda = red.varsigma * (n + 0.5) + red.offset;
  kernels::axpy(Complex{-lambda, 0.0}, chi.psi, applied.psi);
  return gridstates::norm(applied) / std::max(1.0, std::abs(lambda));
}

// ---------------------------------------------------------------------------
// Linear (plane-wave) branch
// ---------------------------------------------------------------------------

VolkovSolution::VolkovSolution(const Scenario& sc) : sc_(sc) {
  sc_.validate();
  if (sc_.model.omega.has_value())
    throw std::invalid_argument(
        "plane-wave branch requires a purely linear potential (omega == 0)");
  if (sc_.linear_seed[0] != 1.0 || sc_.linear_seed[1] != 0.0)
    throw std::invalid_argument(
        "plane-wave branch requires the canonical linear seed (A, B) = (1, 0)");
  grid_ = sc_.make_grid();
  system_ = invariants::generate_ode_system(weyl::InvariantFamily::linear,
                                            sc_.model);
  path_ = invariants::integrate(system_, sc_.linear_seed, sc_.t0, sc_.t1,
                                sc_.ode_step);

  // Cumulative Simpson tables of int F and int F^2 at the path nodes, so a
  // later action query costs only the fractional tail of one step.
  j1_.assign(path_.size(), 0.0);
  j2_.assign(path_.size(), 0.0);
  for (std::size_t i = 0; i + 1 < path_.size(); ++i) {
    const double h = path_.times[i + 1] - path_.times[i];
    const double fl = path_.values[i][2];
    const double fr = path_.values[i + 1][2];
    const double fm =
        invariants::rk4_step(system_, path_.times[i], path_.values[i],
                             0.5 * h)[2];
    j1_[i + 1] = j1_[i] + (h / 6.0) * (fl + 4.0 * fm + fr);
    j2_[i + 1] = j2_[i] + (h / 6.0) * (fl * fl + 4.0 * fm * fm + fr * fr);
  }
}

double VolkovSolution::drift_near(double t) const {
  const auto last = path_.size() - 1;
  std::size_t node = 0;
  if (path_.size() > 1) {
    const auto idx = std::llround((t - sc_.t0) / path_.step);
    node = std::size_t(std::clamp<long long>(idx, 0, (long long)last));
  }
  const double tn = path_.times[node];
  if (std::abs(t - tn) <= 1e-13 * std::max(1.0, std::abs(t)))
    return path_.values[node][2];
  const std::vector<double> y =
      invariants::rk4_step(system_, tn, path_.values[node], t - tn);
  return y[2];
}

double VolkovSolution::drift(double t) const { return drift_near(t); }

double VolkovSolution::action(double k, double t) const {
  // S_k(t) = [k^2 (t - t0) - 2k J1 + J2] / (2m), J1 = int F, J2 = int F^2.
  // Whole steps come from the precomputed tables; the fractional tail is a
  // single Simpson interval with RK4 step-off evaluations.
  std::size_t node = 0;
  if (path_.size() > 1) {
    const auto idx = (long long)std::floor((t - sc_.t0) / path_.step + 1e-12);
    node = std::size_t(std::clamp<long long>(idx, 0, (long long)(path_.size() - 1)));
  }
  double j1 = j1_[node], j2 = j2_[node];
  const double tn = path_.times[node];
  const double h = t - tn;
  if (std::abs(h) > 1e-15 * std::max(1.0, std::abs(t))) {
    const double fl = path_.values[node][2];
    const double fm = drift_near(tn + 0.5 * h);
    const double fr = drift_near(t);
    j1 += (h / 6.0) * (fl + 4.0 * fm + fr);
    j2 += (h / 6.0) * (fl * fl + 4.0 * fm * fm + fr * fr);
  }
  return (k * k * (t - sc_.t0) - 2.0 * k * j1 + j2) / (2.0 * sc_.model.mass);
}

Wavefunction VolkovSolution::state(double k, double t) const {
  const double kappa = k - drift_near(t);
  const double s = action(k, t);
  const double amp = 1.0 / std::sqrt(grid_.length);
  Wavefunction w = gridstates::zero_state(grid_);
  const std::vector<double> xs = grid_.xs();
  for (int j = 0; j < grid_.n; ++j)
    w.psi[j] = std::polar(amp, kappa * xs[j] - s);
  return w;
}

namespace {

struct WindowRange {
  int lo = 0, hi = 0;  // inclusive, stencil-safe
};

WindowRange window_range(const gridstates::Grid& g, double window) {
  if (!(window > 0.0) || window >= 0.5)
    throw std::invalid_argument("window fraction must lie in (0, 0.5)");
  WindowRange r{g.n, -1};
  const double reach = window * g.length;
  for (int j = 4; j + 4 < g.n; ++j) {
    if (std::abs(g.x(j)) <= reach) {
      r.lo = std::min(r.lo, j);
      r.hi = std::max(r.hi, j);
    }
  }
  if (r.hi < r.lo) throw std::invalid_argument("window selects no grid points");
  return r;
}

}  // namespace

double VolkovSolution::invariant_residual(double k, double t,
                                          double window) const {
  const Wavefunction w = state(k, t);
  const double f_t = drift_near(t);
  const WindowRange r = window_range(grid_, window);
  const double inv_dx = 1.0 / grid_.dx();
  double num = 0.0, den = 0.0;
  for (int j = r.lo; j <= r.hi; ++j) {
    Complex dpsi{0.0, 0.0};
    for (int m = 1; m <= 4; ++m)
      dpsi += kFirst[m - 1] * (w.psi[j + m] - w.psi[j - m]);
    const Complex res = -kI * dpsi * inv_dx + (f_t - k) * w.psi[j];
    num += std::norm(res);
    den += std::norm(w.psi[j]);
  }
  return std::sqrt(num / den);
}

double VolkovSolution::tdse_residual(double k, double t, double window) const {
  const double delta = sc_.offset_delta;
  std::vector<Wavefunction> shifts;
  shifts.reserve(8);
  for (int m = -4; m <= 4; ++m)
    if (m != 0) shifts.push_back(state(k, t + double(m) * delta));
  const Wavefunction w = state(k, t);

  const WindowRange r = window_range(grid_, window);
  const std::vector<double> xs = grid_.xs();
  const double f_t = sc_.model.f(t);
  const double inv_dx2 = 1.0 / (grid_.dx() * grid_.dx());
  const double kin = -0.5 / sc_.model.mass;
  double num = 0.0, den = 0.0;
  for (int j = r.lo; j <= r.hi; ++j) {
    Complex dt_psi{0.0, 0.0};
    for (int m = 1; m <= 4; ++m)
      dt_psi += kFirst[m - 1] * (shifts[std::size_t(4 + m - 1)].psi[j] -
                                 shifts[std::size_t(4 - m)].psi[j]);
    dt_psi /= delta;

    Complex lap = kSecond0 * w.psi[j];
    for (int m = 1; m <= 4; ++m)
      lap += kSecond[m - 1] * (w.psi[j + m] + w.psi[j - m]);
    const Complex h_psi = kin * lap * inv_dx2 + f_t * xs[j] * w.psi[j];

    num += std::norm(kI * dt_psi - h_psi);
    den += std::norm(w.psi[j]);
  }
  return std::sqrt(num / den);
}

}  // namespace lrsolve::solutions
