#include "lrsolve/weyl.hpp"

#include <doctest.h>

#include "lrsolve/rng.hpp"
#include "support/wordref.hpp"

using namespace lrsolve;
using weyl::Complex;
using weyl::OperatorPoly;

namespace {

const Complex I{0.0, 1.0};

OperatorPoly random_int_poly(Rng& rng, int max_degree) {
  OperatorPoly out;
  for (int a = 0; a <= max_degree; ++a)
    for (int b = 0; a + b <= max_degree; ++b) {
      int re = rng.uniform_int(-3, 3);
      int im = rng.uniform_int(-3, 3);
      if (re || im) out.insert({a, b}, Complex(re, im));
    }
  return out;
}

}  // namespace

TEST_CASE("canonical commutator [q,p] = i") {
  OperatorPoly c = weyl::commutator(OperatorPoly::q(), OperatorPoly::p());
  CHECK(c == OperatorPoly::one(I));
}

TEST_CASE("normal-ordered products against the word-rewriting oracle") {
  // [q^2, p^2] = 4i qp + 2
  OperatorPoly lhs = weyl::commutator(OperatorPoly::monomial(2, 0),
                                      OperatorPoly::monomial(0, 2));
  OperatorPoly expect;
  expect.insert({1, 1}, 4.0 * I);
  expect.insert({0, 0}, 2.0);
  CHECK(lhs == expect);
  CHECK(lhs == wordref::bracket_oracle(OperatorPoly::monomial(2, 0),
                                       OperatorPoly::monomial(0, 2)));

  // [q^3, p^3] = 9i q^2 p^2 + 18 qp - 6i
  OperatorPoly cubic = weyl::commutator(OperatorPoly::monomial(3, 0),
                                        OperatorPoly::monomial(0, 3));
  OperatorPoly expect3;
  expect3.insert({2, 2}, 9.0 * I);
  expect3.insert({1, 1}, 18.0);
  expect3.insert({0, 0}, -6.0 * I);
  CHECK(cubic == expect3);
  CHECK(cubic == wordref::bracket_oracle(OperatorPoly::monomial(3, 0),
                                         OperatorPoly::monomial(0, 3)));
}

TEST_CASE("random products agree with the word-rewriting oracle") {
  Rng rng(0x5eed0001);
  for (int iter = 0; iter < 50; ++iter) {
    OperatorPoly a = random_int_poly(rng, 3);
    OperatorPoly b = random_int_poly(rng, 3);
    OperatorPoly prod = a * b;
    OperatorPoly ref = (wordref::WordPoly(a) * wordref::WordPoly(b)).normal_ordered();
    CHECK(weyl::distance(prod, ref) == 0.0);  // integer inputs stay exact
  }
}

TEST_CASE("commutator is antisymmetric and bilinear") {
  Rng rng(0x5eed0002);
  for (int iter = 0; iter < 25; ++iter) {
    OperatorPoly a = random_int_poly(rng, 3);
    OperatorPoly b = random_int_poly(rng, 3);
    OperatorPoly c = random_int_poly(rng, 3);
    CHECK(weyl::commutator(a, b) == -weyl::commutator(b, a));
    CHECK(weyl::commutator(a + b, c) ==
          weyl::commutator(a, c) + weyl::commutator(b, c));
    Complex s(2.0, -1.0);
    CHECK(weyl::commutator(s * a, b) == s * weyl::commutator(a, b));
  }
}

TEST_CASE("Jacobi identity holds exactly on degree <= 2 polynomials") {
  Rng rng(0x5eed0003);
  for (int iter = 0; iter < 100; ++iter) {
    OperatorPoly a = random_int_poly(rng, 2);
    OperatorPoly b = random_int_poly(rng, 2);
    OperatorPoly c = random_int_poly(rng, 2);
    OperatorPoly jac = weyl::commutator(a, weyl::commutator(b, c)) +
                       weyl::commutator(b, weyl::commutator(c, a)) +
                       weyl::commutator(c, weyl::commutator(a, b));
    CHECK(jac.max_abs_coeff() == 0.0);
  }
}

TEST_CASE("commutator degree law deg[A,B] <= degA + degB - 2") {
  Rng rng(0x5eed0004);
  for (int iter = 0; iter < 50; ++iter) {
    OperatorPoly a = random_int_poly(rng, 3);
    OperatorPoly b = random_int_poly(rng, 3);
    if (a.empty() || b.empty()) continue;
    OperatorPoly c = weyl::commutator(a, b);
    if (!c.empty()) CHECK(c.degree() <= a.degree() + b.degree() - 2);
  }
}

TEST_CASE("adjoint: examples and involution") {
  // (q + i p)^dagger = q - i p
  OperatorPoly x = OperatorPoly::q() + I * OperatorPoly::p();
  CHECK(weyl::adjoint(x) == OperatorPoly::q() - I * OperatorPoly::p());

  // (qp)^dagger = pq = qp - i; and back
  OperatorPoly qp = OperatorPoly::monomial(1, 1);
  OperatorPoly pq = qp;
  pq.insert({0, 0}, -I);
  CHECK(weyl::adjoint(qp) == pq);
  CHECK(weyl::adjoint(pq) == qp);

  // Hermitian generators are fixed points
  for (const auto& g : weyl::family_generators(weyl::InvariantFamily::quadratic))
    CHECK(weyl::adjoint(g) == g);

  Rng rng(0x5eed0005);
  for (int iter = 0; iter < 50; ++iter) {
    OperatorPoly a = random_int_poly(rng, 3);
    CHECK(weyl::adjoint(weyl::adjoint(a)) == a);
    OperatorPoly b = random_int_poly(rng, 3);
    // (AB)^dagger = B^dagger A^dagger
    CHECK(weyl::adjoint(a * b) == weyl::adjoint(b) * weyl::adjoint(a));
  }
}

TEST_CASE("conjugation by a linear exponential terminates and matches shifts") {
  // e^{-G} q e^{G} with G = beta p shifts q by i*beta ([q, beta p] = i beta)
  OperatorPoly g = Complex(0.0, 1.5) * OperatorPoly::p();
  OperatorPoly shifted = weyl::conjugate_by_exponential(OperatorPoly::q(), g);
  OperatorPoly expect = OperatorPoly::q();
  expect.insert({0, 0}, Complex(-1.5, 0.0));  // q + i*(1.5i) = q - 1.5
  CHECK(weyl::approx_equal(shifted, expect, 1e-14));

  // p is untouched by exp(beta p)
  CHECK(weyl::conjugate_by_exponential(OperatorPoly::p(), g) == OperatorPoly::p());
}

TEST_CASE("closure: linear and quadratic generator sets close") {
  auto lin = weyl::family_generators(weyl::InvariantFamily::linear);
  auto rep_lin = weyl::check_closure(lin);
  CHECK(rep_lin.closed);

  auto quad = weyl::family_generators(weyl::InvariantFamily::quadratic);
  auto rep_quad = weyl::check_closure(quad);
  CHECK(rep_quad.closed);
  CHECK(rep_quad.max_residual < 1e-9);
}

TEST_CASE("closure: {p^2, pq+qp, q^2} closes on its own") {
  std::vector<OperatorPoly> gens = {OperatorPoly::monomial(0, 2),
                                    OperatorPoly::symmetric_qp(),
                                    OperatorPoly::monomial(2, 0)};
  CHECK(weyl::check_closure(gens).closed);

  // and the commutator table matches the word oracle
  for (const auto& a : gens)
    for (const auto& b : gens)
      CHECK(weyl::commutator(a, b) == wordref::bracket_oracle(a, b));
}

TEST_CASE("closure: degree <= 3 monomials do not close; witness has degree 4") {
  std::vector<OperatorPoly> gens;
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; a + b <= 3; ++b) gens.push_back(OperatorPoly::monomial(a, b));
  auto rep = weyl::check_closure(gens);
  CHECK(!rep.closed);
  REQUIRE(rep.witness.has_value());
  CHECK(rep.witness->out_of_span.degree() == 4);

  // the classic witness pair: [q^3, p^3] contains 9i q^2 p^2
  OperatorPoly w = weyl::commutator(OperatorPoly::monomial(3, 0),
                                    OperatorPoly::monomial(0, 3));
  CHECK(std::abs(w.coeff(2, 2) - 9.0 * I) == 0.0);
}

TEST_CASE("lvn residual: conserved momentum for the free particle") {
  auto gens = weyl::family_generators(weyl::InvariantFamily::linear);
  // I = p, H = p^2/2m: constant coefficients solve the invariant condition
  double coeffs[] = {1.0, 0.0, 0.0};
  double dots[] = {0.0, 0.0, 0.0};
  OperatorPoly h = Complex(0.5) * OperatorPoly::monomial(0, 2);
  OperatorPoly res = weyl::lvn_residual(gens, coeffs, dots, h);
  CHECK(res.empty());
}

TEST_CASE("lvn rates match the word-rewriting oracle for both families") {
  Rng rng(0x5eed0006);
  for (int iter = 0; iter < 40; ++iter) {
    const double m = rng.uniform(0.5, 2.0);
    const double f = rng.uniform(-2.0, 2.0);
    const double w2 = iter % 2 ? rng.uniform(0.0, 4.0) : 0.0;
    OperatorPoly h = Complex(0.5 / m) * OperatorPoly::monomial(0, 2) +
                     Complex(f) * OperatorPoly::q() +
                     Complex(0.5 * m * w2) * OperatorPoly::monomial(2, 0);
    for (auto family : {weyl::InvariantFamily::linear, weyl::InvariantFamily::quadratic}) {
      auto gens = weyl::family_generators(family);
      std::vector<double> coeffs(gens.size());
      for (auto& c : coeffs) c = rng.uniform(-2.0, 2.0);
      auto rates = weyl::lvn_coefficient_rates(gens, coeffs, h);
      auto ref = wordref::lvn_rates_oracle(family, coeffs, h);
      REQUIRE(rates.size() == ref.size());
      for (std::size_t k = 0; k < rates.size(); ++k)
        CHECK(std::abs(rates[k] - ref[k]) < 1e-12);
      // plugging the rates back in zeroes the residual
      OperatorPoly res = weyl::lvn_residual(gens, coeffs, rates, h);
      CHECK(res.max_abs_coeff() < 1e-12);
    }
  }
}

TEST_CASE("lvn rates reproduce the driven-particle coefficient system") {
  // H = p^2/2m + f q.  Linear family (A,B,C): A' = -B/m, B' = 0, C' = A f.
  const double m = 1.7, f = 0.6;
  OperatorPoly h = Complex(0.5 / m) * OperatorPoly::monomial(0, 2) +
                   Complex(f) * OperatorPoly::q();
  auto lin = weyl::family_generators(weyl::InvariantFamily::linear);
  double lc[] = {1.2, -0.4, 0.3};
  auto lr = weyl::lvn_coefficient_rates(lin, lc, h);
  CHECK(lr[0] == doctest::Approx(-lc[1] / m).epsilon(1e-14));
  CHECK(lr[1] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(lr[2] == doctest::Approx(lc[0] * f).epsilon(1e-14));

  // Quadratic family (D,E,F,A',B',C'):
  // D' = -2E/m, E' = -F/m, F' = 0, A'' = 2Df - B'/m, B'' = 2Ef, C'' = A'f.
  auto quad = weyl::family_generators(weyl::InvariantFamily::quadratic);
  double qc[] = {0.8, -0.5, 1.1, 0.9, -1.3, 0.2};
  auto qr = weyl::lvn_coefficient_rates(quad, qc, h);
  CHECK(qr[0] == doctest::Approx(-2.0 * qc[1] / m).epsilon(1e-14));
  CHECK(qr[1] == doctest::Approx(-qc[2] / m).epsilon(1e-14));
  CHECK(qr[2] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(qr[3] == doctest::Approx(2.0 * qc[0] * f - qc[4] / m).epsilon(1e-14));
  CHECK(qr[4] == doctest::Approx(2.0 * qc[1] * f).epsilon(1e-14));
  CHECK(qr[5] == doctest::Approx(qc[3] * f).epsilon(1e-14));
}
