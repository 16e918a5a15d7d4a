#include "wordref.hpp"

#include <cmath>
#include <stdexcept>

namespace wordref {

namespace {

constexpr double kTol = 1e-14;

Word word_of(const lrsolve::weyl::Monomial& m) {
  Word w;
  w.insert(w.end(), m.qdeg, 'q');
  w.insert(w.end(), m.pdeg, 'p');
  return w;
}

// Reduces a single word to a sum of normal-ordered words by rewriting the
// leftmost "pq" as "qp" + (-i) * (word with the pair removed).
void reduce_word(const Word& w, Complex c, std::map<Word, Complex>& out) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (w[i] == 'p' && w[i + 1] == 'q') {
      Word swapped = w;
      std::swap(swapped[i], swapped[i + 1]);
      Word contracted = w;
      contracted.erase(contracted.begin() + i, contracted.begin() + i + 2);
      reduce_word(swapped, c, out);
      reduce_word(contracted, c * Complex(0.0, -1.0), out);
      return;
    }
  }
  out[w] += c;  // already normal ordered
}

}  // namespace

WordPoly::WordPoly(const lrsolve::weyl::OperatorPoly& poly) {
  for (const auto& [m, c] : poly.terms()) add(word_of(m), c);
}

void WordPoly::add(const Word& w, Complex c) {
  terms_[w] += c;
  if (std::abs(terms_[w]) <= kTol) terms_.erase(w);
}

WordPoly WordPoly::operator*(const WordPoly& rhs) const {
  WordPoly out;
  for (const auto& [wa, ca] : terms_) {
    for (const auto& [wb, cb] : rhs.terms_) {
      Word w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      out.add(w, ca * cb);
    }
  }
  return out;
}

WordPoly WordPoly::operator+(const WordPoly& rhs) const {
  WordPoly out = *this;
  for (const auto& [w, c] : rhs.terms_) out.add(w, c);
  return out;
}

WordPoly WordPoly::operator-(const WordPoly& rhs) const {
  WordPoly out = *this;
  for (const auto& [w, c] : rhs.terms_) out.add(w, -c);
  return out;
}

lrsolve::weyl::OperatorPoly WordPoly::normal_ordered() const {
  std::map<Word, Complex> reduced;
  for (const auto& [w, c] : terms_) reduce_word(w, c, reduced);
  lrsolve::weyl::OperatorPoly out;
  for (const auto& [w, c] : reduced) {
    int qd = 0, pd = 0;
    for (char ch : w) (ch == 'q' ? qd : pd)++;
    out.insert({qd, pd}, c);
  }
  return out;
}

WordPoly commutator(const WordPoly& a, const WordPoly& b) {
  return a * b - b * a;
}

lrsolve::weyl::OperatorPoly bracket_oracle(const lrsolve::weyl::OperatorPoly& a,
                                           const lrsolve::weyl::OperatorPoly& b) {
  return commutator(WordPoly(a), WordPoly(b)).normal_ordered();
}

std::vector<double> lvn_rates_oracle(lrsolve::weyl::InvariantFamily family,
                                     std::span<const double> coeffs,
                                     const lrsolve::weyl::OperatorPoly& hamiltonian) {
  using lrsolve::weyl::OperatorPoly;
  auto gens = lrsolve::weyl::family_generators(family);
  if (coeffs.size() != gens.size())
    throw std::invalid_argument("lvn_rates_oracle: coefficient count mismatch");
  OperatorPoly inv;
  for (std::size_t k = 0; k < gens.size(); ++k)
    inv += Complex(coeffs[k]) * gens[k];
  OperatorPoly target =
      Complex(0.0, 1.0) * bracket_oracle(inv, hamiltonian);  // dI/dt = i[I,H]

  // Direct coefficient reads.  The symmetric generator pq+qp contributes
  // 2 qp - i to the normal order, so its rate comes from half the qp
  // coefficient and shifts the identity read-back by +i*that.
  if (family == lrsolve::weyl::InvariantFamily::linear) {
    return {target.coeff(0, 1).real(), target.coeff(1, 0).real(),
            target.coeff(0, 0).real()};
  }
  const double e_rate = 0.5 * target.coeff(1, 1).real();
  const Complex c0 = target.coeff(0, 0) + Complex(0.0, e_rate);
  return {target.coeff(0, 2).real(), e_rate,          target.coeff(2, 0).real(),
          target.coeff(0, 1).real(), target.coeff(1, 0).real(), c0.real()};
}

}  // namespace wordref
