#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <random>

#include "ccfrac/sos.hpp"
#include "test_support.hpp"

using namespace ccfrac;
using test::poly;

namespace {

Polynomiald motzkin() { return poly(2, {{{4, 2}, 1}, {{2, 4}, 1}, {{2, 2}, -3}, {{0, 0}, 1}}); }

double min_hessian_eig(const Polynomiald& p, const std::vector<double>& x) {
  const Eigen::MatrixXd h = evaluate(hessian(p), std::span<const double>(x));
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h).eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("locator matrices in one variable") {
  const LocatorFamily fam = coefficient_locator_matrices(1, 1);
  REQUIRE(fam.size() == 3);
  Eigen::Matrix2d b0, b1, b2;
  b0 << 1, 0, 0, 0;
  b1 << 0, 1, 1, 0;
  b2 << 0, 0, 0, 1;
  CHECK(fam.matrix(0) == Eigen::MatrixXd(b0));
  CHECK(fam.matrix(1) == Eigen::MatrixXd(b1));
  CHECK(fam.matrix(2) == Eigen::MatrixXd(b2));

  const Eigen::Vector3d y(1.0, 2.0, 5.0);
  Eigen::MatrixXd sum = y(0) * fam.matrix(0) + y(1) * fam.matrix(1) + y(2) * fam.matrix(2);
  Eigen::Matrix2d hankel;
  hankel << 1, 2, 2, 5;
  CHECK(sum == Eigen::MatrixXd(hankel));
  CHECK(moment_matrix(MomentVector(1, 1, y)) == Eigen::MatrixXd(hankel));
}

TEST_CASE("moment matrix layout for n = 2") {
  // y00, y10, y01, y20, y11, y02 = 1, a, b, c, e, f
  Eigen::VectorXd y(6);
  y << 1, 2, 3, 4, 5, 6;
  const Eigen::MatrixXd m = moment_matrix(MomentVector(2, 1, y));
  Eigen::Matrix3d expect;
  expect << 1, 2, 3, 2, 4, 5, 3, 5, 6;
  CHECK(m == Eigen::MatrixXd(expect));

  const MonomialBasis full = monomial_basis(2, 8);
  const Eigen::MatrixXd m4 = moment_matrix(MomentVector(2, 4, Eigen::VectorXd::LinSpaced(full.size(), 0, 1)));
  CHECK(m4.rows() == 15);
  CHECK(m4.cols() == 15);

  CHECK_THROWS_AS(MomentVector(2, 1, Eigen::VectorXd::Zero(5)), DimensionError);
}

TEST_CASE("moment matrix symmetry and locator reconstruction on random y") {
  std::mt19937 rng(1);
  std::normal_distribution<double> nd;
  for (std::size_t n = 1; n <= 3; ++n) {
    for (int d = 0; d <= 3; ++d) {
      const LocatorFamily fam = coefficient_locator_matrices(n, d);
      Eigen::VectorXd y(fam.products().size());
      for (Eigen::Index k = 0; k < y.size(); ++k) y(k) = nd(rng);
      const Eigen::MatrixXd m = moment_matrix(MomentVector(n, d, y));
      CHECK(m == m.transpose());
      Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(m.rows(), m.cols());
      for (std::size_t k = 0; k < fam.size(); ++k) sum += y(k) * fam.matrix(k);
      CHECK(sum == m);
    }
  }
}

TEST_CASE("linear functional") {
  Eigen::VectorXd y(6);
  y << 0.5, 2, 3, 4, 5, 6;
  const MomentVector mv(2, 1, y);
  CHECK(linear_functional(mv, Polynomiald::constant(2, 1.0)) == 0.5);
  CHECK(linear_functional(mv, Polynomiald::variable(2, 0)) == 2.0);
  CHECK(linear_functional(mv, Polynomiald::variable(2, 1)) == 3.0);
  // 1 + L_y(g1) = 1 + y20 + y02 - 8 y00
  const Polynomiald g1 = test::fp1().g();
  CHECK(1.0 + linear_functional(mv, g1) == doctest::Approx(1.0 + 4 + 6 - 8 * 0.5));
  CHECK_THROWS_AS(linear_functional(mv, poly(2, {{{3, 0}, 1.0}})), DimensionError);
}

TEST_CASE("is_sos: (x - 1)^2 is certified") {
  const Polynomiald p = poly(1, {{{2}, 1}, {{1}, -2}, {{0}, 1}});
  const SosResult r = is_sos(p);
  REQUIRE(r.verdict == SosVerdict::Certified);
  REQUIRE(r.certificate);
  Eigen::Matrix2d q;
  q << 1, -1, -1, 1;
  // The Gram matrix is unique here.
  CHECK((r.certificate->Q - Eigen::MatrixXd(q)).norm() <= 1e-6);
  CHECK(r.certificate->coefficient_residual <= 1e-7);
  CHECK(r.certificate->min_eigenvalue >= -1e-8);
}

TEST_CASE("is_sos: odd degree is refuted") {
  CHECK(is_sos(Polynomiald::variable(1, 0)).verdict == SosVerdict::Refuted);
}

TEST_CASE("is_sos: Motzkin form is nonnegative but refuted") {
  const Polynomiald m = motzkin();
  // Grid cross-check: nonnegative, so the refutation is about SOS, not sign.
  double lo = 1e300;
  for (int i = -60; i <= 60; ++i)
    for (int j = -60; j <= 60; ++j) lo = std::min(lo, m.evaluate(std::vector<double>{i / 30.0, j / 30.0}));
  CHECK(lo >= -1e-12);
  const SosResult r = is_sos(m);
  CHECK(r.verdict == SosVerdict::Refuted);
  CHECK(r.margin < -1e-4);
}

TEST_CASE("is_sos accepts constructed sums of squares and they are nonnegative") {
  std::mt19937 rng(9);
  const SosTolerances tol;
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const int d = 1 + trial % 2;
    Polynomiald p(n);
    for (int j = 0; j < 3; ++j) {
      const Polynomiald q = test::random_polynomial(rng, n, d);
      p += q * q;
    }
    const SosResult r = is_sos(p, tol);
    REQUIRE(r.verdict == SosVerdict::Certified);
    CHECK(r.certificate->coefficient_residual <= tol.gram_tol);
    CHECK(r.certificate->min_eigenvalue >= -tol.psd_tol);
    const MonomialBasis& basis = r.certificate->basis;
    for (int k = 0; k < 100; ++k) {
      const auto x = test::random_point(rng, n, 2.0);
      double mono2 = 0.0;
      for (const MultiIndex& b : basis) {
        const double v = Polynomiald::monomial(b).evaluate(x);
        mono2 += v * v;
      }
      CHECK(p.evaluate(x) >= -tol.gram_tol * (1.0 + mono2));
    }
  }
}

TEST_CASE("is_sos_convex on the FP1 data") {
  const auto fp = test::fp1();
  CHECK(is_sos_convex(fp.f()).verdict == SosVerdict::Certified);
  CHECK(is_sos_convex(fp.g()).verdict == SosVerdict::Certified);
  for (const auto& h : fp.h()) CHECK(is_sos_convex(h).verdict == SosVerdict::Certified);

  const Polynomiald nonconvex = poly(2, {{{2, 2}, 1}, {{1, 1}, -2}, {{0, 0}, 1}, {{2, 0}, 1}});
  CHECK(is_sos_convex(nonconvex).verdict == SosVerdict::Refuted);

  const Polynomiald affine = poly(3, {{{1, 0, 0}, 2}, {{0, 0, 1}, -1}, {{0, 0, 0}, 4}});
  const SosResult ra = is_sos_convex(affine);
  CHECK(ra.verdict == SosVerdict::Certified);

  CHECK(is_sos_convex(poly(1, {{{3}, 1}})).verdict == SosVerdict::Refuted);
}

TEST_CASE("hessian_form") {
  // p = x1^2 x2^2: Hess = [[2 x2^2, 4 x1 x2], [4 x1 x2, 2 x1^2]]
  const Polynomiald q = hessian_form(poly(2, {{{2, 2}, 1}}));
  const Polynomiald expect =
      poly(4, {{{0, 2, 2, 0}, 2}, {{1, 1, 1, 1}, 8}, {{2, 0, 0, 2}, 2}});
  CHECK(q == expect);
}

TEST_CASE("certified SOS-convex polynomials have PSD Hessians at samples") {
  std::mt19937 rng(21);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t n = 2;
    // convex quadratic + (a'x + b)^4
    Polynomiald p(n);
    Eigen::MatrixXd a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = nd(rng);
    const Eigen::MatrixXd hq = a.transpose() * a;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        p.add_term(MultiIndex::unit(n, i) + MultiIndex::unit(n, j), 0.5 * hq(i, j));
    Polynomiald lin = Polynomiald::constant(n, nd(rng));
    for (std::size_t i = 0; i < n; ++i) lin += nd(rng) * Polynomiald::variable(n, i);
    p += (lin * lin) * (lin * lin);

    const SosResult r = is_sos_convex(p);
    REQUIRE(r.verdict == SosVerdict::Certified);
    for (int k = 0; k < 100; ++k) CHECK(min_hessian_eig(p, test::random_point(rng, n, 2.0)) >= -1e-6);
  }
}

TEST_CASE("L_y(p) >= p(L_y(x)) for SOS-convex p and point-mass mixtures") {
  std::mt19937 rng(33);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::uniform_real_distribution<double> w(0.1, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const int d = 2;
    // p = sum_k (a_k'x + b_k)^4 + |x|^2: SOS-convex, degree 4 <= 2d.
    Polynomiald p(n);
    for (int k = 0; k < 2; ++k) {
      Polynomiald lin = Polynomiald::constant(n, u(rng));
      for (std::size_t i = 0; i < n; ++i) lin += u(rng) * Polynomiald::variable(n, i);
      p += (lin * lin) * (lin * lin);
    }
    for (std::size_t i = 0; i < n; ++i) p += Polynomiald::variable(n, i) * Polynomiald::variable(n, i);

    // y = moments of a probability measure with 4 atoms.
    const MonomialBasis full = monomial_basis(n, 2 * d);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(full.size());
    std::vector<double> weights(4);
    double total = 0.0;
    for (double& v : weights) total += (v = w(rng));
    for (int atom = 0; atom < 4; ++atom) {
      const auto x = test::random_point(rng, n, 1.5);
      for (std::size_t k = 0; k < full.size(); ++k) y(k) += weights[atom] / total * Polynomiald::monomial(full[k]).evaluate(x);
    }
    const MomentVector mv(n, d, y);
    CHECK(mv.mass() == doctest::Approx(1.0));
    std::vector<double> mean(n);
    for (std::size_t i = 0; i < n; ++i) mean[i] = linear_functional(mv, Polynomiald::variable(n, i));
    CHECK(linear_functional(mv, p) >= p.evaluate(mean) - 1e-8);
  }
}

TEST_CASE("make_certificate flags a wrong Gram matrix") {
  const Polynomiald p = poly(1, {{{2}, 1}, {{1}, -2}, {{0}, 1}});
  const LocatorFamily fam = coefficient_locator_matrices(1, 1);
  const GramCertificate good = make_certificate(p, fam, (Eigen::Matrix2d() << 1, -1, -1, 1).finished(), {});
  CHECK(good.valid);
  CHECK(good.coefficient_residual == 0.0);
}
