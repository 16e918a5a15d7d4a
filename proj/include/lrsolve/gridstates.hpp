#pragma once

#include <complex>
#include <span>
#include <vector>

#include "lrsolve/weyl.hpp"

namespace lrsolve::gridstates {

using Complex = std::complex<double>;

/** Uniform periodic grid on [-length/2, length/2), x_j = -length/2 + j dx. */
struct Grid {
  int n = 0;
  double length = 0.0;

  double dx() const { return length / n; }
  double x(int j) const { return -0.5 * length + j * dx(); }
  /** Signed wavenumber of FFT bin j (bins above n/2 wrap to negatives). */
  double k(int j) const;
  std::vector<double> xs() const;
  std::vector<double> ks() const;  // in FFT bin order

  static Grid make(int n, double length);
  bool operator==(const Grid&) const = default;
};

struct Wavefunction {
  Grid grid;
  std::vector<Complex> psi;
};

Wavefunction zero_state(const Grid& g);

/** <a|b> = dx * sum conj(a) b (exact trapezoid weight on a periodic grid). */
Complex inner(const Wavefunction& a, const Wavefunction& b);
double norm(const Wavefunction& a);
void normalize(Wavefunction& w);
void scale(Wavefunction& w, Complex factor);

/** n-th normalized Hermite function sampled on the grid. */
Wavefunction hermite_state(const Grid& g, int n);

/** sum_n coeffs[n] h_n on the grid. */
Wavefunction synthesize_hermite(const Grid& g, std::span<const Complex> coeffs);

/** Overlaps <h_n|psi> for n = 0 .. n_max. */
std::vector<Complex> hermite_coefficients(const Wavefunction& w, int n_max);

/**
 * Elementary Gaussian unitaries.
 *   translate_q(d): psi(x) -> psi(x - d)      (= exp(-i d p))
 *   boost_p(b):     psi   -> e^{i b x} psi    (= exp(i b q))
 *   chirp_q2(c):    psi   -> e^{i c x^2} psi  (= exp(i c q^2))
 *   chirp_p2(c):    e^{i c k^2} in the momentum representation (= exp(i c p^2))
 */
enum class GaussianKind { translate_q, boost_p, chirp_q2, chirp_p2 };

void apply_gaussian_unitary(Wavefunction& w, GaussianKind kind, double param);

/**
 * Applies a normal-ordered polynomial in (q, p) by splitting it into
 * momentum powers (diagonal after an FFT) and position polynomials.
 * Degrees above 4 in either variable are rejected.
 */
Wavefunction apply_operator_poly(const Wavefunction& w, const weyl::OperatorPoly& poly);

struct Moments {
  double q = 0.0, p = 0.0, q2 = 0.0, p2 = 0.0;
};

/** Normalized expectation values of q, p, q^2, p^2. */
Moments compute_moments(const Wavefunction& w);

/** Mass fraction carried by the top `band` of |k| (aliasing canary). */
double spectral_tail_fraction(const Wavefunction& w, double band = 0.125);

/**
 * Largest Hermite index whose classical turning point sqrt(2n+1) stays
 * within margin * min(length/2, k_max); beyond it the grid clips the state.
 */
int max_resolvable_hermite(const Grid& g, double margin = 0.8);

}  // namespace lrsolve::gridstates
