#include "lrsolve/transforms.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lrsolve/rng.hpp"

using namespace lrsolve;
using invariants::QuadCoeffs;
using transforms::AlphaRho;
using transforms::EtaBeta;
using weyl::Complex;
using weyl::OperatorPoly;

namespace {

/** Random positive-definite quadratic coefficients with linear tail. */
QuadCoeffs random_elliptic(Rng& rng) {
  QuadCoeffs c;
  c.D = rng.uniform(0.2, 5.0);
  c.F = rng.uniform(0.2, 5.0);
  const double emax = 0.95 * std::sqrt(c.D * c.F);
  c.E = rng.uniform(-emax, emax);
  c.Ap = rng.uniform(-2.0, 2.0);
  c.Bp = rng.uniform(-2.0, 2.0);
  c.Cp = rng.uniform(-2.0, 2.0);
  return c;
}

OperatorPoly isotropic(double varsigma, double offset = 0.0) {
  return Complex(0.5 * varsigma) *
             (OperatorPoly::monomial(0, 2) + OperatorPoly::monomial(2, 0)) +
         Complex(offset) * OperatorPoly::one();
}

}  // namespace

TEST_CASE("displacement parameters for p^2 + q^2 + 2q") {
  QuadCoeffs c{1.0, 0.0, 1.0, 0.0, 2.0, 0.0};
  EtaBeta eb = transforms::eta_beta(c);
  CHECK(eb.eta_im == doctest::Approx(0.0));
  CHECK(eb.beta_im == doctest::Approx(1.0));

  OperatorPoly out = transforms::conjugate_by_v1(c.to_poly(), eb);
  CHECK(weyl::distance(out, isotropic(2.0, -1.0)) < 1e-12);
}

TEST_CASE("displacement shifts q against beta and p along eta") {
  // beta = i: q -> q - 1.  eta = i e: p -> p + e.
  CHECK(weyl::distance(transforms::conjugate_by_v1(OperatorPoly::q(), {0.0, 1.0}),
                       OperatorPoly::q() - OperatorPoly::one()) < 1e-12);
  OperatorPoly p_shift = transforms::conjugate_by_v1(OperatorPoly::p(), {0.7, 0.0});
  CHECK(weyl::distance(p_shift, OperatorPoly::p() + Complex(0.7) * OperatorPoly::one()) <
        1e-12);
  // A pure displacement never alters the quadratic part.
  OperatorPoly quad = transforms::conjugate_by_v1(
      QuadCoeffs{1.5, -0.3, 0.8, 0.0, 0.0, 0.0}.to_poly(), {0.4, -1.2});
  QuadCoeffs back = QuadCoeffs::from_poly(quad);
  CHECK(back.D == doctest::Approx(1.5));
  CHECK(back.E == doctest::Approx(-0.3));
  CHECK(back.F == doctest::Approx(0.8));
}

TEST_CASE("displacement cancels the linear strip for random invariants") {
  Rng rng(0x51a7e5u);
  for (int trial = 0; trial < 100; ++trial) {
    QuadCoeffs c = random_elliptic(rng);
    QuadCoeffs out =
        QuadCoeffs::from_poly(transforms::conjugate_by_v1(c.to_poly(), transforms::eta_beta(c)));
    CHECK(std::abs(out.Ap) < 1e-12 * 10.0);
    CHECK(std::abs(out.Bp) < 1e-12 * 10.0);
    CHECK(out.D == doctest::Approx(c.D).epsilon(1e-12));
    CHECK(out.E == doctest::Approx(c.E).epsilon(1e-12));
    CHECK(out.F == doctest::Approx(c.F).epsilon(1e-12));
  }
}

TEST_CASE("eta_beta rejects a degenerate quadratic part") {
  CHECK_THROWS_AS(transforms::eta_beta(QuadCoeffs{1.0, 1.0, 1.0, 0.5, 0.5, 0.0}),
                  std::domain_error);
}

TEST_CASE("squeeze map matches the symbolic engine on the letters") {
  const AlphaRho ar{0.3, -0.45};
  const Eigen::Matrix2d T = transforms::rep_matrix(ar);

  OperatorPoly q_img = transforms::conjugate_by_v2(OperatorPoly::q(), ar);
  OperatorPoly p_img = transforms::conjugate_by_v2(OperatorPoly::p(), ar);
  // Row 0 of T is the (q, p) content of the image of q, row 1 of p.
  CHECK(q_img.coeff(1, 0).real() == doctest::Approx(T(0, 0)).epsilon(1e-12));
  CHECK(q_img.coeff(0, 1).real() == doctest::Approx(T(0, 1)).epsilon(1e-12));
  CHECK(p_img.coeff(1, 0).real() == doctest::Approx(T(1, 0)).epsilon(1e-12));
  CHECK(p_img.coeff(0, 1).real() == doctest::Approx(T(1, 1)).epsilon(1e-12));
  CHECK(std::abs(q_img.coeff(1, 0).imag()) < 1e-12);
  CHECK(T.determinant() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("matrix congruence reproduces the symbolic conjugation") {
  Rng rng(0xc0ffee5u);
  for (int trial = 0; trial < 25; ++trial) {
    QuadCoeffs c = random_elliptic(rng);
    AlphaRho ar{rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8)};
    QuadCoeffs fast = transforms::apply_v2(c, ar);
    QuadCoeffs slow = QuadCoeffs::from_poly(transforms::conjugate_by_v2(c.to_poly(), ar));
    for (int k = 0; k < 6; ++k)
      CHECK(fast.vec()[k] == doctest::Approx(slow.vec()[k]).epsilon(1e-10));
  }
}

TEST_CASE("already isotropic invariants need no squeeze") {
  AlphaRho ar = transforms::solve_alpha_rho(QuadCoeffs{1.0, 0.0, 1.0, 0.0, 0.0, 0.0});
  CHECK(std::abs(ar.alpha_im) < 1e-12);
  CHECK(std::abs(ar.rho_im) < 1e-12);
}

TEST_CASE("anisotropic diagonal seed 4p^2 + q^2/4") {
  using std::numbers::pi;
  QuadCoeffs c{4.0, 0.0, 0.25, 0.0, 0.0, 0.0};
  AlphaRho ar = transforms::solve_alpha_rho(c);

  // The unique minimal-generator solution quarters the plane: the squeeze
  // swaps the axes while rescaling them into balance.
  CHECK(std::abs(ar.alpha_im) == doctest::Approx(pi / 2).epsilon(1e-12));
  CHECK(std::abs(ar.rho_im) == doctest::Approx(pi / 8).epsilon(1e-12));

  QuadCoeffs out = transforms::apply_v2(c, ar);
  CHECK(out.D == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(out.F == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(out.E) < 1e-12);

  // Ground truth: the operator algebra itself.
  OperatorPoly reduced = transforms::conjugate_by_v2(c.to_poly(), ar);
  CHECK(weyl::distance(reduced, isotropic(2.0)) < 1e-10);
}

TEST_CASE("squeeze solver handles random positive-definite seeds") {
  Rng rng(0xdecade5u);
  for (int trial = 0; trial < 100; ++trial) {
    QuadCoeffs c = random_elliptic(rng);
    c.Ap = c.Bp = c.Cp = 0.0;
    const double s = std::sqrt(c.casimir());
    AlphaRho ar = transforms::solve_alpha_rho(c);
    QuadCoeffs out = transforms::apply_v2(c, ar);
    CHECK(std::abs(out.E) < 1e-11 * std::max(1.0, s));
    CHECK(out.D == doctest::Approx(s).epsilon(1e-10));
    CHECK(out.F == doctest::Approx(s).epsilon(1e-10));
    if (trial % 5 == 0) {
      OperatorPoly reduced = transforms::conjugate_by_v2(c.to_poly(), ar);
      CHECK(weyl::distance(reduced, isotropic(2.0 * s)) < 1e-9 * std::max(1.0, s));
    }
  }
}

TEST_CASE("squeeze solver rejects non-elliptic input") {
  CHECK_THROWS_AS(transforms::solve_alpha_rho(QuadCoeffs{1.0, 0.0, -1.0, 0, 0, 0}),
                  std::domain_error);
  CHECK_THROWS_AS(transforms::solve_alpha_rho(QuadCoeffs{-1.0, 0.0, -1.0, 0, 0, 0}),
                  std::domain_error);
}

TEST_CASE("full reduction of a displaced anisotropic invariant") {
  QuadCoeffs c{1.0, 0.0, 1.0, 0.0, 2.0, 0.0};  // p^2 + q^2 + 2q
  transforms::QuadraticReduction red = transforms::reduce_quadratic(c);
  CHECK(red.varsigma == doctest::Approx(2.0));
  CHECK(red.offset == doctest::Approx(-1.0));
  CHECK(red.eb.beta_im == doctest::Approx(1.0));
  CHECK(std::abs(red.ar.alpha_im) < 1e-12);
}

TEST_CASE("reductions along a path stay continuous and verified") {
  auto sys = invariants::generate_ode_system(weyl::InvariantFamily::quadratic,
                                             invariants::LinearPotentialModel{});
  double seed[] = {1.0, 0.0, 1.0, 0.0, 0.0, 0.0};
  auto path = invariants::integrate(sys, seed, 0.0, 2.0, 0.01);
  auto reds = transforms::build_v_sequence(path);
  REQUIRE(reds.size() == path.size());
  for (std::size_t i = 0; i < reds.size(); ++i) {
    CHECK(reds[i].varsigma == doctest::Approx(2.0).epsilon(1e-9));
    if (i > 0) {
      CHECK(std::abs(reds[i].ar.alpha_im - reds[i - 1].ar.alpha_im) < 0.1);
      CHECK(std::abs(reds[i].ar.rho_im - reds[i - 1].ar.rho_im) < 0.1);
    }
  }
  // t = 0 needs no transformation at all for this seed.
  CHECK(std::abs(reds[0].ar.alpha_im) < 1e-12);
  CHECK(std::abs(reds[0].eb.beta_im) < 1e-12);
}
