#include "lrsolve/weyl.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lrsolve::weyl {

namespace {

constexpr Complex kMinusI{0.0, -1.0};

// Appends the normal-ordered expansion of c * q^A p^B q^C p^D onto out.
void accumulate_product(OperatorPoly& out, int A, int B, int C, int D, Complex c) {
  double comb = 1.0;  // k! C(B,k) C(C,k), updated iteratively
  Complex phase = 1.0;
  const int kmax = std::min(B, C);
  for (int k = 0; k <= kmax; ++k) {
    if (k > 0) {
      comb *= double(B - k + 1) * double(C - k + 1) / double(k);
      phase *= kMinusI;
    }
    out.insert({A + C - k, B + D - k}, c * comb * phase);
  }
}

}  // namespace

OperatorPoly OperatorPoly::monomial(int qdeg, int pdeg, Complex c) {
  if (qdeg < 0 || pdeg < 0) throw std::invalid_argument("monomial: negative degree");
  OperatorPoly out;
  out.insert({qdeg, pdeg}, c);
  return out;
}

OperatorPoly OperatorPoly::symmetric_qp() {
  OperatorPoly out;
  out.insert({1, 1}, 2.0);
  out.insert({0, 0}, kMinusI);
  return out;
}

Complex OperatorPoly::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Complex{} : it->second;
}

int OperatorPoly::degree() const {
  int deg = 0;
  for (const auto& [m, c] : terms_) deg = std::max(deg, m.degree());
  return deg;
}

double OperatorPoly::max_abs_coeff() const {
  double mx = 0.0;
  for (const auto& [m, c] : terms_) mx = std::max(mx, std::abs(c));
  return mx;
}

bool OperatorPoly::is_hermitian(double tol) const {
  return distance(*this, adjoint(*this)) <= tol;
}

std::string OperatorPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
    if (m.qdeg > 0) os << " q^" << m.qdeg;
    if (m.pdeg > 0) os << " p^" << m.pdeg;
  }
  return os.str();
}

void OperatorPoly::insert(const Monomial& m, Complex c) {
  auto [it, fresh] = terms_.try_emplace(m, c);
  if (!fresh) it->second += c;
  if (std::abs(it->second) <= kZeroTol) terms_.erase(it);
}

OperatorPoly& OperatorPoly::operator+=(const OperatorPoly& rhs) {
  for (const auto& [m, c] : rhs.terms_) insert(m, c);
  return *this;
}

OperatorPoly& OperatorPoly::operator-=(const OperatorPoly& rhs) {
  for (const auto& [m, c] : rhs.terms_) insert(m, -c);
  return *this;
}

OperatorPoly& OperatorPoly::operator*=(Complex s) {
  if (std::abs(s) <= kZeroTol) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= s;
  // rescaling can push small coefficients under the floor
  std::erase_if(terms_, [](const auto& kv) { return std::abs(kv.second) <= kZeroTol; });
  return *this;
}

OperatorPoly operator*(const OperatorPoly& a, const OperatorPoly& b) {
  OperatorPoly out;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_)
      accumulate_product(out, ma.qdeg, ma.pdeg, mb.qdeg, mb.pdeg, ca * cb);
  return out;
}

OperatorPoly commutator(const OperatorPoly& a, const OperatorPoly& b) {
  return a * b - b * a;
}

OperatorPoly adjoint(const OperatorPoly& a) {
  OperatorPoly out;
  // (q^a p^b)^dagger = p^b q^a; reduce that word back to normal order.
  for (const auto& [m, c] : a.terms())
    accumulate_product(out, 0, m.pdeg, m.qdeg, 0, std::conj(c));
  return out;
}

double distance(const OperatorPoly& a, const OperatorPoly& b) {
  return (a - b).max_abs_coeff();
}

bool approx_equal(const OperatorPoly& a, const OperatorPoly& b, double tol) {
  return distance(a, b) <= tol;
}

OperatorPoly conjugate_by_exponential(const OperatorPoly& x, const OperatorPoly& g,
                                      int max_terms) {
  OperatorPoly sum = x;
  OperatorPoly term = x;
  for (int k = 1; k <= max_terms; ++k) {
    term = commutator(term, g);
    term *= Complex(1.0 / k);
    if (term.empty()) return sum;
    sum += term;
  }
  throw std::runtime_error("conjugate_by_exponential: series did not terminate");
}

std::vector<Complex> span_project(const OperatorPoly& target,
                                  std::span<const OperatorPoly> basis,
                                  double* residual_norm) {
  // Collect the union of monomials so every polynomial maps to one column.
  std::map<Monomial, int> rows;
  auto index_terms = [&rows](const OperatorPoly& poly) {
    for (const auto& [m, c] : poly.terms()) rows.try_emplace(m, 0);
  };
  index_terms(target);
  for (const auto& g : basis) index_terms(g);
  int r = 0;
  for (auto& [m, idx] : rows) idx = r++;

  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(r, static_cast<int>(basis.size()));
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(r);
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (const auto& [m, c] : basis[j].terms()) A(rows.at(m), static_cast<int>(j)) = c;
  for (const auto& [m, c] : target.terms()) b(rows.at(m)) = c;

  Eigen::VectorXcd x = r == 0 ? Eigen::VectorXcd::Zero(A.cols())
                              : A.colPivHouseholderQr().solve(b).eval();
  if (residual_norm) *residual_norm = r == 0 ? 0.0 : (A * x - b).norm();
  return {x.data(), x.data() + x.size()};
}

ClosureReport check_closure(std::span<const OperatorPoly> generators,
                            double residual_tol) {
  ClosureReport report;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    for (std::size_t j = i + 1; j < generators.size(); ++j) {
      OperatorPoly bracket = commutator(generators[i], generators[j]);
      double residual = 0.0;
      std::vector<Complex> x = span_project(bracket, generators, &residual);
      report.max_residual = std::max(report.max_residual, residual);
      if (residual > residual_tol &&
          (!report.witness || residual >= report.max_residual)) {
        report.closed = false;
        OperatorPoly reachable;
        for (std::size_t k = 0; k < generators.size(); ++k)
          reachable += x[k] * generators[k];
        report.witness = ClosureReport::Witness{i, j, bracket, bracket - reachable};
      }
    }
  }
  return report;
}

std::vector<OperatorPoly> family_generators(InvariantFamily family) {
  using OP = OperatorPoly;
  switch (family) {
    case InvariantFamily::linear:
      return {OP::p(), OP::q(), OP::one()};
    case InvariantFamily::quadratic:
      return {OP::monomial(0, 2), OP::symmetric_qp(), OP::monomial(2, 0),
              OP::p(), OP::q(), OP::one()};
  }
  throw std::logic_error("family_generators: unknown family");
}

OperatorPoly lvn_residual(std::span<const OperatorPoly> generators,
                          std::span<const double> coeffs,
                          std::span<const double> coeff_dots,
                          const OperatorPoly& hamiltonian) {
  if (coeffs.size() != generators.size() || coeff_dots.size() != generators.size())
    throw std::invalid_argument("lvn_residual: coefficient count mismatch");
  OperatorPoly inv, dinv;
  for (std::size_t k = 0; k < generators.size(); ++k) {
    inv += Complex(coeffs[k]) * generators[k];
    dinv += Complex(coeff_dots[k]) * generators[k];
  }
  return dinv + kMinusI * commutator(inv, hamiltonian);
}

std::vector<double> lvn_coefficient_rates(std::span<const OperatorPoly> generators,
                                          std::span<const double> coeffs,
                                          const OperatorPoly& hamiltonian) {
  if (coeffs.size() != generators.size())
    throw std::invalid_argument("lvn_coefficient_rates: coefficient count mismatch");
  OperatorPoly inv;
  for (std::size_t k = 0; k < generators.size(); ++k)
    inv += Complex(coeffs[k]) * generators[k];
  // dI/dt = -(1/i)[I,H] = i [I,H]
  OperatorPoly target = Complex(0.0, 1.0) * commutator(inv, hamiltonian);
  double residual = 0.0;
  std::vector<Complex> x = span_project(target, generators, &residual);
  const double scale = std::max(1.0, target.max_abs_coeff());
  if (residual > 1e-9 * scale)
    throw std::runtime_error("lvn_coefficient_rates: bracket leaves the generator span");
  std::vector<double> rates(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (std::abs(x[k].imag()) > 1e-9 * scale)
      throw std::runtime_error("lvn_coefficient_rates: non-real rate in Hermitian basis");
    rates[k] = x[k].real();
  }
  return rates;
}

}  // namespace lrsolve::weyl
