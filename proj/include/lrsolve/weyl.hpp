#pragma once

#include <complex>
#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lrsolve::weyl {

using Complex = std::complex<double>;

/** Monomial q^qdeg p^pdeg, stored in normal order (all q left of all p). */
struct Monomial {
  int qdeg = 0;
  int pdeg = 0;
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
  int degree() const { return qdeg + pdeg; }
};

/**
 * Polynomial in the canonical pair (q, p) with [q, p] = i, kept in normal
 * order.  Products are reduced with the closed-form contraction
 *   (q^a p^b)(q^c p^d) = sum_k k! C(b,k) C(c,k) (-i)^k q^{a+c-k} p^{b+d-k},
 * so every arithmetic result is again normal ordered.  Coefficients whose
 * magnitude drops to kZeroTol or below are pruned.
 */
class OperatorPoly {
 public:
  static constexpr double kZeroTol = 1e-12;

  OperatorPoly() = default;

  static OperatorPoly zero() { return {}; }
  static OperatorPoly one(Complex c = 1.0) { return monomial(0, 0, c); }
  static OperatorPoly q() { return monomial(1, 0); }
  static OperatorPoly p() { return monomial(0, 1); }
  static OperatorPoly monomial(int qdeg, int pdeg, Complex c = 1.0);
  /** pq + qp, i.e. 2·qp - i in normal order. */
  static OperatorPoly symmetric_qp();

  const std::map<Monomial, Complex>& terms() const { return terms_; }
  Complex coeff(const Monomial& m) const;
  Complex coeff(int qdeg, int pdeg) const { return coeff({qdeg, pdeg}); }
  bool empty() const { return terms_.empty(); }
  int degree() const;
  double max_abs_coeff() const;
  bool is_hermitian(double tol = kZeroTol) const;
  std::string str() const;

  /** Accumulate c onto monomial m, pruning if the result is negligible. */
  void insert(const Monomial& m, Complex c);

  OperatorPoly& operator+=(const OperatorPoly& rhs);
  OperatorPoly& operator-=(const OperatorPoly& rhs);
  OperatorPoly& operator*=(Complex s);
  friend OperatorPoly operator+(OperatorPoly a, const OperatorPoly& b) { return a += b; }
  friend OperatorPoly operator-(OperatorPoly a, const OperatorPoly& b) { return a -= b; }
  friend OperatorPoly operator*(Complex s, OperatorPoly a) { return a *= s; }
  friend OperatorPoly operator*(OperatorPoly a, Complex s) { return a *= s; }
  friend OperatorPoly operator-(OperatorPoly a) { return a *= Complex(-1.0); }
  friend OperatorPoly operator*(const OperatorPoly& a, const OperatorPoly& b);
  friend bool operator==(const OperatorPoly&, const OperatorPoly&) = default;

 private:
  std::map<Monomial, Complex> terms_;
};

OperatorPoly commutator(const OperatorPoly& a, const OperatorPoly& b);

/** Hermitian adjoint: coefficients conjugated, each word reversed and
 *  re-reduced to normal order. */
OperatorPoly adjoint(const OperatorPoly& a);

/** Largest coefficient magnitude of a - b. */
double distance(const OperatorPoly& a, const OperatorPoly& b);
bool approx_equal(const OperatorPoly& a, const OperatorPoly& b, double tol = 1e-10);

/**
 * e^{-G} X e^{G} = X + [X,G] + [[X,G],G]/2! + ...
 * The series terminates exactly when G is linear in (q,p) and converges for
 * any G of degree <= 2; throws if max_terms is exhausted first.
 */
OperatorPoly conjugate_by_exponential(const OperatorPoly& x, const OperatorPoly& g,
                                      int max_terms = 400);

/**
 * Least-squares expansion of target over span{basis}.  Returns the
 * coefficient vector; *residual_norm (if given) receives the l2 norm of the
 * unrepresentable remainder.
 */
std::vector<Complex> span_project(const OperatorPoly& target,
                                  std::span<const OperatorPoly> basis,
                                  double* residual_norm = nullptr);

struct ClosureReport {
  bool closed = true;
  double max_residual = 0.0;  // worst projection residual over all pairs
  struct Witness {
    std::size_t gen_i = 0, gen_j = 0;
    OperatorPoly bracket;       // [G_i, G_j]
    OperatorPoly out_of_span;   // component the span cannot represent
  };
  std::optional<Witness> witness;  // present iff !closed
};

/** Tests whether all pairwise commutators stay in the linear span of the
 *  generator list (least-squares residual below residual_tol). */
ClosureReport check_closure(std::span<const OperatorPoly> generators,
                            double residual_tol = 1e-9);

enum class InvariantFamily { linear, quadratic };

/** Hermitian generator basis of the family:
 *  linear    -> {p, q, 1}                 coefficients (A, B, C)
 *  quadratic -> {p^2, pq+qp, q^2, p, q, 1} coefficients (D, E, F, A', B', C') */
std::vector<OperatorPoly> family_generators(InvariantFamily family);

/** dI/dt + (1/i)[I, H] at one instant, with I = sum_k coeffs[k] G_k and
 *  dI/dt = sum_k coeff_dots[k] G_k. */
OperatorPoly lvn_residual(std::span<const OperatorPoly> generators,
                          std::span<const double> coeffs,
                          std::span<const double> coeff_dots,
                          const OperatorPoly& hamiltonian);

/** Coefficient rates that zero the residual above:
 *  sum_k rate[k] G_k = -(1/i)[I, H].  Throws if the bracket leaves the span
 *  of the generators or acquires an imaginary part in the Hermitian basis. */
std::vector<double> lvn_coefficient_rates(std::span<const OperatorPoly> generators,
                                          std::span<const double> coeffs,
                                          const OperatorPoly& hamiltonian);

}  // namespace lrsolve::weyl
