#include "lrsolve/gridstates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lrsolve/fft.hpp"
#include "lrsolve/kernels.hpp"

namespace lrsolve::gridstates {

namespace {

void require_state(const Wavefunction& w) {
  if (w.grid.n <= 0 || w.psi.size() != std::size_t(w.grid.n))
    throw std::invalid_argument("wavefunction: buffer does not match its grid");
}

std::vector<double> power_weights(const std::vector<double>& base, int power) {
  std::vector<double> w(base.size(), 1.0);
  for (int rep = 0; rep < power; ++rep)
    for (std::size_t i = 0; i < w.size(); ++i) w[i] *= base[i];
  return w;
}

}  // namespace

double Grid::k(int j) const {
  const int half = n / 2;
  const int s = (j >= half) ? j - n : j;
  return 2.0 * std::numbers::pi / length * s;
}

std::vector<double> Grid::xs() const {
  std::vector<double> v(n);
  for (int j = 0; j < n; ++j) v[j] = x(j);
  return v;
}

std::vector<double> Grid::ks() const {
  std::vector<double> v(n);
  for (int j = 0; j < n; ++j) v[j] = k(j);
  return v;
}

Grid Grid::make(int n, double length) {
  if (n < 8 || n % 2 != 0) throw std::invalid_argument("grid: n must be even and >= 8");
  if (!(length > 0.0)) throw std::invalid_argument("grid: length must be positive");
  return {n, length};
}

Wavefunction zero_state(const Grid& g) {
  return {g, std::vector<Complex>(g.n, Complex{0.0, 0.0})};
}

Complex inner(const Wavefunction& a, const Wavefunction& b) {
  require_state(a);
  require_state(b);
  if (!(a.grid == b.grid)) throw std::invalid_argument("inner: grids differ");
  return a.grid.dx() * kernels::dot(a.psi, b.psi);
}

double norm(const Wavefunction& a) {
  require_state(a);
  return std::sqrt(a.grid.dx() * kernels::sumsq(a.psi));
}

void normalize(Wavefunction& w) {
  const double n = norm(w);
  if (n < 1e-300) throw std::runtime_error("normalize: zero state");
  scale(w, Complex{1.0 / n, 0.0});
}

void scale(Wavefunction& w, Complex factor) {
  require_state(w);
  for (Complex& v : w.psi) v *= factor;
}

Wavefunction hermite_state(const Grid& g, int n) {
  const std::vector<double> xs = g.xs();
  std::vector<double> vals(xs.size());
  kernels::hermite_single(n, xs, vals);
  Wavefunction w = zero_state(g);
  for (std::size_t i = 0; i < vals.size(); ++i) w.psi[i] = vals[i];
  return w;
}

Wavefunction synthesize_hermite(const Grid& g, std::span<const Complex> coeffs) {
  const std::vector<double> xs = g.xs();
  Wavefunction w = zero_state(g);
  kernels::hermite_synth(coeffs, xs, w.psi);
  return w;
}

std::vector<Complex> hermite_coefficients(const Wavefunction& w, int n_max) {
  require_state(w);
  if (n_max < 0) throw std::invalid_argument("hermite_coefficients: n_max < 0");
  const std::vector<double> xs = w.grid.xs();
  std::vector<double> vals(xs.size());
  std::vector<Complex> basis(xs.size());
  std::vector<Complex> out(std::size_t(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    kernels::hermite_single(n, xs, vals);
    for (std::size_t i = 0; i < vals.size(); ++i) basis[i] = vals[i];
    out[n] = w.grid.dx() * kernels::dot(basis, w.psi);
  }
  return out;
}

void apply_gaussian_unitary(Wavefunction& w, GaussianKind kind, double param) {
  require_state(w);
  switch (kind) {
    case GaussianKind::boost_p: {
      const std::vector<double> xs = w.grid.xs();
      std::vector<double> phase(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) phase[i] = param * xs[i];
      kernels::expi_mul(phase, w.psi);
      return;
    }
    case GaussianKind::chirp_q2: {
      const std::vector<double> xs = w.grid.xs();
      std::vector<double> phase(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) phase[i] = param * xs[i] * xs[i];
      kernels::expi_mul(phase, w.psi);
      return;
    }
    case GaussianKind::translate_q:
    case GaussianKind::chirp_p2: {
      fft::forward(w.psi, w.psi);
      const std::vector<double> ks = w.grid.ks();
      std::vector<double> phase(ks.size());
      if (kind == GaussianKind::translate_q)
        for (std::size_t i = 0; i < ks.size(); ++i) phase[i] = -param * ks[i];
      else
        for (std::size_t i = 0; i < ks.size(); ++i) phase[i] = param * ks[i] * ks[i];
      kernels::expi_mul(phase, w.psi);
      fft::inverse(w.psi, w.psi);
      return;
    }
  }
  throw std::logic_error("apply_gaussian_unitary: unknown kind");
}

Wavefunction apply_operator_poly(const Wavefunction& w, const weyl::OperatorPoly& poly) {
  require_state(w);
  int max_p = 0;
  for (const auto& [mono, c] : poly.terms()) {
    if (mono.qdeg > 4 || mono.pdeg > 4)
      throw std::invalid_argument("apply_operator_poly: degree above 4");
    max_p = std::max(max_p, mono.pdeg);
  }

  const std::vector<double> xs = w.grid.xs();
  const std::vector<double> ks = w.grid.ks();

  std::vector<Complex> tilde;
  if (max_p > 0) {
    tilde.resize(w.psi.size());
    fft::forward(w.psi, tilde);
  }

  Wavefunction out = zero_state(w.grid);
  std::vector<Complex> momentum_applied(w.psi.size());
  std::vector<Complex> buffer(w.psi.size());
  for (int b = 0; b <= max_p; ++b) {
    // Collect the position-polynomial attached to p^b.
    std::vector<Complex> cq(5, Complex{0.0, 0.0});
    int max_q = -1;
    for (const auto& [mono, c] : poly.terms()) {
      if (mono.pdeg != b) continue;
      cq[mono.qdeg] = c;
      max_q = std::max(max_q, mono.qdeg);
    }
    if (max_q < 0) continue;

    const std::vector<Complex>* source = &w.psi;
    if (b > 0) {
      const std::vector<double> kb = power_weights(ks, b);
      for (std::size_t i = 0; i < tilde.size(); ++i) buffer[i] = tilde[i] * kb[i];
      fft::inverse(buffer, momentum_applied);
      source = &momentum_applied;
    }

    for (std::size_t i = 0; i < out.psi.size(); ++i) {
      Complex horner = cq[max_q];
      for (int a = max_q - 1; a >= 0; --a) horner = horner * xs[i] + cq[a];
      out.psi[i] += horner * (*source)[i];
    }
  }
  return out;
}

Moments compute_moments(const Wavefunction& w) {
  require_state(w);
  Moments m;
  const double total = kernels::sumsq(w.psi);
  if (total < 1e-300) throw std::runtime_error("compute_moments: zero state");

  const std::vector<double> xs = w.grid.xs();
  m.q = kernels::weighted_sumsq(xs, w.psi) / total;
  m.q2 = kernels::weighted_sumsq(power_weights(xs, 2), w.psi) / total;

  std::vector<Complex> tilde(w.psi.size());
  fft::forward(w.psi, tilde);
  const double ktotal = kernels::sumsq(tilde);
  const std::vector<double> ks = w.grid.ks();
  m.p = kernels::weighted_sumsq(ks, tilde) / ktotal;
  m.p2 = kernels::weighted_sumsq(power_weights(ks, 2), tilde) / ktotal;
  return m;
}

double spectral_tail_fraction(const Wavefunction& w, double band) {
  require_state(w);
  if (!(band > 0.0) || band > 1.0)
    throw std::invalid_argument("spectral_tail_fraction: band must be in (0, 1]");
  std::vector<Complex> tilde(w.psi.size());
  fft::forward(w.psi, tilde);
  const double total = kernels::sumsq(tilde);
  if (total < 1e-300) return 0.0;

  const double kmax = std::numbers::pi / w.grid.dx();
  const double cutoff = (1.0 - band) * kmax;
  double tail = 0.0;
  for (int j = 0; j < w.grid.n; ++j)
    if (std::abs(w.grid.k(j)) >= cutoff) tail += std::norm(tilde[j]);
  return tail / total;
}

int max_resolvable_hermite(const Grid& g, double margin) {
  const double kmax = std::numbers::pi / g.dx();
  const double reach = margin * std::min(0.5 * g.length, kmax);
  const int n = int(std::floor((reach * reach - 1.0) / 2.0));
  return std::max(n, -1);
}

}  // namespace lrsolve::gridstates
