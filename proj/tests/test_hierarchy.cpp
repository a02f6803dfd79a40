#include <gtest/gtest.h>

#include <cmath>

#include "momlab/errors.hpp"
#include "momlab/extraction.hpp"
#include "momlab/hierarchy.hpp"
#include "support/oracles.hpp"

using namespace momlab;

namespace {

// min -x1 - x2 + x1 x2 on {0,1}^2.
SemialgebraicProblem boolean_square() {
  SemialgebraicProblem prob(Polynomial(2, {{{1, 0}, -1.0}, {{0, 1}, -1.0}, {{1, 1}, 1.0}}), {});
  prob.add_equality(Polynomial(2, {{{1, 0}, 1.0}, {{2, 0}, -1.0}}));
  prob.add_equality(Polynomial(2, {{{0, 1}, 1.0}, {{0, 2}, -1.0}}));
  return prob;
}

Polynomial one_minus_sq(int n) {
  Polynomial p = Polynomial::constant(n, 1.0);
  for (int i = 0; i < n; ++i) p -= Polynomial::variable(n, i) * Polynomial::variable(n, i);
  return p;
}

std::function<double(const Eigen::VectorXd&)> as_fn(const Polynomial& p) {
  return [p](const Eigen::VectorXd& x) { return oracle::eval(p, x); };
}

}  // namespace

TEST(Hierarchy, TruncationDegree) {
  EXPECT_EQ(truncation_degree(2), 2);
  EXPECT_EQ(truncation_degree(3), 4);
  EXPECT_EQ(truncation_degree(4), 4);
  EXPECT_EQ(truncation_degree(0), 0);
}

TEST(Hierarchy, BooleanSquareLevelTwo) {
  const auto r = solve_moment_relaxation(boolean_square(), 2);
  ASSERT_TRUE(r.ok()) << r.message;
  // Analytic optimum of the level-two program, attained at (3/4, 3/4, 3/8).
  EXPECT_NEAR(r.m_star, -9.0 / 8.0, 1e-6);
  EXPECT_NEAR(r.pseudo_moments[MultiIndex({1, 0})], 0.75, 1e-4);
  EXPECT_NEAR(r.pseudo_moments[MultiIndex({0, 1})], 0.75, 1e-4);
  EXPECT_NEAR(r.pseudo_moments[MultiIndex({1, 1})], 0.375, 1e-4);
  const Point c = candidate_minimizer(r.pseudo_moments, AffineScale::identity(2));
  EXPECT_FALSE(boolean_square().contains(c, 1e-6));
}

TEST(Hierarchy, BooleanSquareLevelThreeIsExact) {
  const auto r = solve_moment_relaxation(boolean_square(), 3);
  ASSERT_TRUE(r.ok()) << r.message;
  EXPECT_NEAR(r.m_star, -1.0, 1e-6);
  EXPECT_EQ(r.truncation, 4);
}

TEST(Hierarchy, BooleanSquareStrongDuality) {
  const auto [f2, cert] = solve_sos_tightening(boolean_square(), 2);
  EXPECT_NEAR(f2, -9.0 / 8.0, 1e-6);
  EXPECT_LE(cert.compute_residual(), 1e-6);
  EXPECT_GE(cert.min_gram_eigenvalue(), -1e-8);
}

TEST(Hierarchy, ConstantObjective) {
  const SemialgebraicProblem prob(Polynomial::constant(2, 2.5), {one_minus_sq(2)});
  for (int d : {2, 4}) {
    const auto r = solve_moment_relaxation(prob, d);
    ASSERT_TRUE(r.ok());
    EXPECT_NEAR(r.m_star, 2.5, 1e-7);
  }
}

TEST(Hierarchy, LinearOnIntervalCertificate) {
  const SemialgebraicProblem prob(Polynomial::variable(1, 0), {one_minus_sq(1)});
  const auto [f2, cert] = solve_sos_tightening(prob, 2);
  EXPECT_NEAR(f2, -1.0, 1e-6);
  // x + 1 = (1 + x)^2 / 2 + (1 - x^2) / 2
  EXPECT_LE(cert.compute_residual(), 1e-6);
  EXPECT_GE(cert.min_gram_eigenvalue(), -1e-8);
  ASSERT_EQ(cert.grams.size(), 2u);
  EXPECT_NEAR(cert.grams[1](0, 0), 0.5, 1e-4);
  const Polynomial s0 = cert.sos(0);
  EXPECT_NEAR(s0.coeff(MultiIndex({2})), 0.5, 1e-4);
  EXPECT_NEAR(s0.coeff(MultiIndex({1})), 1.0, 1e-4);
}

TEST(Hierarchy, LinearOnIntervalAllLevels) {
  const SemialgebraicProblem prob(Polynomial::variable(1, 0), {one_minus_sq(1)});
  const auto rs = run_hierarchy(prob, 2, 6);
  ASSERT_EQ(rs.size(), 5u);
  for (const auto& r : rs) {
    ASSERT_TRUE(r.ok());
    EXPECT_NEAR(r.m_star, -1.0, 1e-6);
  }
  EXPECT_TRUE(is_monotone(rs));
}

TEST(Hierarchy, CertificatesCarryOneGramPerConstraint) {
  const auto r = solve_moment_relaxation(boolean_square(), 3);
  ASSERT_TRUE(r.certificate.has_value());
  EXPECT_EQ(r.certificate->grams.size(), boolean_square().all_constraints().size() + 1);
  EXPECT_LE(r.certificate->compute_residual(), 1e-6);
  EXPECT_GE(r.certificate->min_gram_eigenvalue(), -1e-8);
}

TEST(Membership, Examples) {
  const SemialgebraicProblem interval(Polynomial::variable(1, 0), {one_minus_sq(1)});
  const auto one = qmodule_membership(Polynomial::constant(1, 1.0), interval, 2);
  EXPECT_TRUE(one.member);
  const auto self = qmodule_membership(one_minus_sq(1), interval, 2);
  EXPECT_TRUE(self.member);
  ASSERT_TRUE(self.certificate.has_value());
  EXPECT_LE(self.certificate->compute_residual(), 1e-6);

  const SemialgebraicProblem cubic(Polynomial::variable(1, 0), {Polynomial(1, {{{3}, 1.0}})});
  const auto x = qmodule_membership(Polynomial::variable(1, 0), cubic, 2);
  EXPECT_FALSE(x.member);
  EXPECT_LT(x.margin, -kMembershipTol);
}

TEST(Membership, DegreeZeroOffset) {
  SemialgebraicProblem half(Polynomial::variable(1, 0), {one_minus_sq(1) * 0.5}, 1.0);
  EXPECT_EQ(compute_d0(half, 6), std::optional<int>(2));
  EXPECT_EQ(compute_d0(half, 1), std::nullopt);
  const SemialgebraicProblem trivial(Polynomial::variable(1, 0), {Polynomial::constant(1, 1.0)});
  EXPECT_EQ(compute_d0(trivial, 4), std::optional<int>(0));
}

TEST(Hierarchy, SandwichOnRandomBallProblems) {
  oracle::Rng rng(41);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = oracle::uniform_int(rng, 1, 2);
    const Polynomial f = oracle::random_polynomial(rng, n, 4, 5);
    const SemialgebraicProblem prob(f, {one_minus_sq(n)});
    const double grid = oracle::grid_min(as_fn(f), {as_fn(one_minus_sq(n))}, n, -1.0, 1.0, n == 1 ? 4001 : 301);
    double prev = -std::numeric_limits<double>::infinity();
    for (int d : {4, 6}) {
      const auto r = solve_moment_relaxation(prob, d);
      ASSERT_TRUE(r.ok()) << r.message;
      EXPECT_LE(r.m_star, grid + 1e-6);
      EXPECT_GE(r.m_star, prev - 1e-6);
      ASSERT_TRUE(r.certificate.has_value());
      EXPECT_LE(r.certificate->s, r.m_star + 1e-6);
      prev = r.m_star;
    }
  }
}

TEST(Hierarchy, NormalizationPreservesOptimum) {
  // min x^2 + y on the disc of radius 2: optimum -2 at (0, -2).
  const Polynomial f(2, {{{2, 0}, 1.0}, {{0, 1}, 1.0}});
  const Polynomial disc(2, {{{0, 0}, 4.0}, {{2, 0}, -1.0}, {{0, 2}, -1.0}});
  const SemialgebraicProblem prob(f, {disc}, 2.0);
  const auto raw = solve_moment_relaxation(prob, 2);
  const auto norm = solve_moment_relaxation(normalize(prob), 2);
  ASSERT_TRUE(raw.ok());
  ASSERT_TRUE(norm.ok());
  EXPECT_NEAR(raw.m_star, norm.m_star, 1e-6);
  EXPECT_NEAR(raw.m_star, -2.0, 1e-5);
  const auto mapped = map_to_original(norm.pseudo_moments, normalize(prob).scale);
  EXPECT_NEAR(mapped[MultiIndex({1, 0})], 0.0, 1e-4);
  EXPECT_NEAR(mapped[MultiIndex({0, 1})], -2.0, 1e-4);
}

TEST(Hierarchy, InvalidLevelThrows) {
  const SemialgebraicProblem prob(Polynomial(1, {{{4}, 1.0}}), {one_minus_sq(1)});
  EXPECT_THROW(solve_moment_relaxation(prob, 2), std::exception);
}

TEST(Hierarchy, MonotonicityCheck) {
  std::vector<RelaxationResult> rs(3);
  for (int i = 0; i < 3; ++i) {
    rs[i].level = i + 2;
    rs[i].status = SdpStatus::Optimal;
  }
  rs[0].m_star = -2.0;
  rs[1].m_star = -1.5;
  rs[2].m_star = -1.5;
  EXPECT_TRUE(is_monotone(rs));
  rs[2].m_star = -1.6;
  EXPECT_FALSE(is_monotone(rs));
}
