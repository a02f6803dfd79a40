#include <gtest/gtest.h>

#include <cmath>

#include "momlab/errors.hpp"
#include "momlab/poly.hpp"
#include "support/oracles.hpp"

using namespace momlab;

namespace {

Polynomial bilinear_cost() { return Polynomial(2, {{{1, 0}, -1.0}, {{0, 1}, -1.0}, {{1, 1}, 1.0}}); }

double max_coeff_diff(const Polynomial& a, const Polynomial& b) {
  double m = 0.0;
  const Polynomial d = a - b;
  for (const auto& [alpha, c] : d.terms()) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace

TEST(Polynomial, DifferenceOfSquares) {
  const Polynomial x1 = Polynomial::variable(2, 0), x2 = Polynomial::variable(2, 1);
  const Polynomial p = (x1 + x2) * (x1 - x2);
  EXPECT_EQ(p.num_terms(), 2u);
  EXPECT_DOUBLE_EQ(p.coeff(MultiIndex({2, 0})), 1.0);
  EXPECT_DOUBLE_EQ(p.coeff(MultiIndex({0, 2})), -1.0);
  EXPECT_DOUBLE_EQ(p.coeff(MultiIndex({1, 1})), 0.0);
}

TEST(Polynomial, TimesZeroIsZero) {
  const Polynomial p = bilinear_cost() * Polynomial(2);
  EXPECT_TRUE(p.is_zero());
  EXPECT_EQ(p.degree(), 0);
  EXPECT_TRUE((bilinear_cost() * 0.0).is_zero());
}

TEST(Polynomial, EvaluatesBilinearCost) {
  const Polynomial f = bilinear_cost();
  EXPECT_DOUBLE_EQ(f(Point(Eigen::Vector2d(1, 1))), -1.0);
  EXPECT_DOUBLE_EQ(f(Point(Eigen::Vector2d(1, 0))), -1.0);
  EXPECT_DOUBLE_EQ(f(Point(Eigen::Vector2d(0, 0))), 0.0);
}

TEST(Polynomial, EvaluationBasics) {
  EXPECT_DOUBLE_EQ(Polynomial::monomial(MultiIndex({2, 3}))(Point(Eigen::Vector2d(2, 1))), 4.0);
  Polynomial p = bilinear_cost();
  p.add_term(MultiIndex::zero(2), 3.5);
  EXPECT_DOUBLE_EQ(p(Point(Eigen::Vector2d::Zero())), 3.5);
}

TEST(Polynomial, DimensionMismatchThrows) {
  EXPECT_THROW(Polynomial::variable(2, 0) + Polynomial::variable(3, 0), DimensionMismatch);
  EXPECT_THROW(Polynomial::variable(2, 0)(Point(Eigen::Vector3d::Zero())), DimensionMismatch);
}

TEST(Polynomial, CoeffNorm) {
  EXPECT_DOUBLE_EQ(coeff_norm(Polynomial(2, {{{1, 0}, 1.0}, {{0, 1}, 1.0}})), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(coeff_norm(Polynomial(2)), 0.0);
  EXPECT_DOUBLE_EQ(coeff_norm(bilinear_cost()), std::sqrt(3.0));
}

TEST(Polynomial, SupNormBox) {
  EXPECT_DOUBLE_EQ(sup_norm_box(Polynomial(1, {{{2}, 1.0}}), 101), 1.0);
  EXPECT_DOUBLE_EQ(sup_norm_box(Polynomial::constant(3, 0.5), 101), 0.5);
  EXPECT_DOUBLE_EQ(sup_norm_box(Polynomial(2, {{{1, 1}, 1.0}}), 101), 1.0);
}

TEST(Polynomial, SupNormBoxAgreesWithDirectGrid) {
  oracle::Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = oracle::uniform_int(rng, 1, 2);
    const Polynomial p = oracle::random_polynomial(rng, n, 4, 5);
    const int res = 33;
    const double ref = -oracle::grid_min([&](const Eigen::VectorXd& x) { return -std::abs(oracle::eval(p, x)); },
                                         {}, n, -1.0, 1.0, res);
    EXPECT_NEAR(sup_norm_box(p, res), ref, 1e-12);
  }
}

TEST(MonomialBasis, IndexRoundTrip) {
  for (int n = 1; n <= 4; ++n) {
    for (int d = 0; d <= 5; ++d) {
      const MonomialBasis b(n, d);
      ASSERT_EQ(b.size(), basis_size(n, d));
      for (std::size_t k = 0; k < b.size(); ++k) EXPECT_EQ(b.index_of(b[k]), static_cast<long>(k));
    }
  }
}

TEST(MonomialBasis, GradedOrder) {
  const MonomialBasis b(2, 2);
  const std::vector<std::vector<int>> expected{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  ASSERT_EQ(b.size(), expected.size());
  for (std::size_t k = 0; k < b.size(); ++k) EXPECT_EQ(b[k].exponents(), expected[k]);
  EXPECT_EQ(b.prefix_size(1), 3u);
  EXPECT_EQ(b.index_of(MultiIndex({3, 0})), -1);
}

TEST(MonomialBasis, CountMatchesEnumeration) {
  for (int n = 1; n <= 4; ++n) {
    for (int d = 0; d <= 6; ++d) EXPECT_EQ(basis_size(n, d), oracle::exponents_up_to(n, d).size());
  }
}

TEST(Polynomial, MonomialLipschitzBound) {
  oracle::Rng rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = oracle::uniform_int(rng, 1, 4);
    std::vector<int> a(n, 0);
    int left = oracle::uniform_int(rng, 0, 6);
    for (int i = 0; i < n; ++i) {
      a[i] = i + 1 == n ? left : oracle::uniform_int(rng, 0, left);
      left -= a[i];
    }
    const MultiIndex alpha(a);
    const Eigen::VectorXd x = oracle::random_point(rng, n, 0.0, 1.0);
    const Eigen::VectorXd y = oracle::random_point(rng, n, 0.0, 1.0);
    const double lhs = std::abs(alpha.eval(std::span<const double>(x.data(), n)) -
                                alpha.eval(std::span<const double>(y.data(), n)));
    EXPECT_LE(lhs, alpha.degree() * (x - y).norm() + 1e-14);
  }
}

TEST(Polynomial, RingAxiomsOnRandomPolynomials) {
  oracle::Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = oracle::uniform_int(rng, 1, 3);
    const Polynomial a = oracle::random_polynomial(rng, n, 3, 4);
    const Polynomial b = oracle::random_polynomial(rng, n, 3, 4);
    const Polynomial c = oracle::random_polynomial(rng, n, 3, 4);
    EXPECT_LE(max_coeff_diff((a + b) * c, a * c + b * c), 1e-12);
    EXPECT_LE(max_coeff_diff(a * b, b * a), 1e-12);
    EXPECT_LE(max_coeff_diff((a * b) * c, a * (b * c)), 1e-11);
  }
}

TEST(Polynomial, EvaluationMatchesNaiveSum) {
  oracle::Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = oracle::uniform_int(rng, 1, 4);
    const Polynomial p = oracle::random_polynomial(rng, n, 6, 8);
    const Eigen::VectorXd x = oracle::random_point(rng, n);
    EXPECT_NEAR(p(Point(x)), oracle::eval(p, x), 1e-12);
  }
}

TEST(Polynomial, BatchedEvaluationMatchesPointwise) {
  oracle::Rng rng(19);
  const int n = 3;
  const Polynomial p = oracle::random_polynomial(rng, n, 5, 12);
  const std::size_t npts = 257;
  std::vector<double> coords(n * npts);
  for (auto& c : coords) c = oracle::uniform(rng, -1.0, 1.0);
  const std::vector<double> v = eval_points(p, coords, npts);
  for (std::size_t k = 0; k < npts; ++k) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = coords[i * npts + k];
    EXPECT_NEAR(v[k], oracle::eval(p, x), 1e-12);
  }
}

TEST(Polynomial, ComposeAffineMatchesSubstitution) {
  oracle::Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = oracle::uniform_int(rng, 1, 3);
    const Polynomial p = oracle::random_polynomial(rng, n, 4, 6);
    const Eigen::VectorXd c = oracle::random_point(rng, n);
    const Eigen::VectorXd s = oracle::random_point(rng, n, 0.5, 2.0);
    const Polynomial q = compose_affine(p, std::span<const double>(c.data(), n),
                                        std::span<const double>(s.data(), n));
    const Eigen::VectorXd u = oracle::random_point(rng, n);
    const Eigen::VectorXd x = c + s.cwiseProduct(u);
    EXPECT_NEAR(q(Point(u)), oracle::eval(p, x), 1e-10);
  }
}

TEST(Polynomial, PowerMatchesRepeatedProduct) {
  const Polynomial p = bilinear_cost();
  EXPECT_LE(max_coeff_diff(p.pow(3), p * p * p), 1e-12);
  EXPECT_TRUE(max_coeff_diff(p.pow(0), Polynomial::constant(2, 1.0)) == 0.0);
}

TEST(Polynomial, SumOfSquaredMonomials) {
  const Polynomial e = sum_of_squared_monomials(2, 1);
  const Eigen::Vector2d x(0.3, -0.4);
  EXPECT_NEAR(e(Point(x)), 1.0 + 0.09 + 0.16, 1e-15);
  EXPECT_EQ(e.degree(), 2);
}
