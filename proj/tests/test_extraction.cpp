#include <gtest/gtest.h>

#include <cmath>

#include "momlab/errors.hpp"
#include "momlab/extraction.hpp"
#include "momlab/hierarchy.hpp"
#include "support/oracles.hpp"

using namespace momlab;

namespace {

AtomicMeasure collinear_three() {
  AtomicMeasure mu;
  for (double x : {-1.0, 0.0, 1.0}) mu.add(Eigen::Vector2d(x, 0.0), 1.0 / 3.0);
  return mu;
}

// Largest weight error after matching each true atom to its nearest
// recovered atom.
double weight_error(const AtomicMeasure& truth, const AtomicMeasure& got) {
  double worst = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < got.size(); ++j) {
      if ((got.atoms[j] - truth.atoms[i]).norm() < (got.atoms[best] - truth.atoms[i]).norm()) best = j;
    }
    worst = std::max(worst, std::abs(got.weights[best] - truth.weights[i]));
  }
  return worst;
}

Eigen::VectorXd moment_vector(const AtomicMeasure& mu, int t) {
  const auto e = oracle::exponents_up_to(mu.dim(), t);
  Eigen::VectorXd v(e.size());
  for (std::size_t k = 0; k < e.size(); ++k) v[k] = oracle::measure_moment(mu, e[k]);
  return v;
}

}  // namespace

TEST(Flatness, DiracIsFlat) {
  AtomicMeasure mu;
  mu.add(Eigen::Vector2d(0.3, -0.7), 1.0);
  const auto rep = check_flatness(PseudoMomentSequence::from_measure(mu, 4), 2, 1);
  EXPECT_EQ(rep.rank_full, 1);
  EXPECT_EQ(rep.rank_truncated, 1);
  EXPECT_TRUE(rep.is_flat);
}

TEST(Flatness, IntervalLebesgueIsNotFlat) {
  Eigen::VectorXd y(5);
  y << 1.0, 0.0, 1.0 / 3.0, 0.0, 1.0 / 5.0;
  const auto rep = check_flatness(PseudoMomentSequence(1, 4, y), 2, 1);
  EXPECT_EQ(rep.rank_full, 3);
  EXPECT_EQ(rep.rank_truncated, 2);
  EXPECT_FALSE(rep.is_flat);
}

TEST(Flatness, NumericalRankCountsRelativeToLargest) {
  Eigen::VectorXd s(4);
  s << 10.0, 1.0, 1e-5, 1e-9;
  EXPECT_EQ(numerical_rank(s, 1e-6), 3);
  EXPECT_EQ(numerical_rank(s, 1e-3), 2);
  EXPECT_EQ(numerical_rank(Eigen::VectorXd::Zero(3), 1e-6), 0);
}

TEST(Extraction, SymmetricTwoAtoms) {
  Eigen::VectorXd y(5);
  y << 1.0, 0.0, 1.0, 0.0, 1.0;
  const AtomicMeasure mu = extract_atoms(PseudoMomentSequence(1, 4, y), 2);
  ASSERT_EQ(mu.size(), 2u);
  std::vector<Point> expected{Eigen::VectorXd::Constant(1, -1.0), Eigen::VectorXd::Constant(1, 1.0)};
  EXPECT_LE(oracle::hausdorff(mu.atoms, expected), 1e-8);
  for (double w : mu.weights) EXPECT_NEAR(w, 0.5, 1e-8);
}

TEST(Extraction, Dirac) {
  AtomicMeasure d;
  d.add(Eigen::Vector2d(0.3, -0.7), 1.0);
  const AtomicMeasure mu = extract_atoms(PseudoMomentSequence::from_measure(d, 2), 1);
  ASSERT_EQ(mu.size(), 1u);
  EXPECT_LE((mu.atoms[0] - d.atoms[0]).norm(), 1e-10);
  EXPECT_NEAR(mu.weights[0], 1.0, 1e-10);
}

TEST(Extraction, NonFlatInputThrows) {
  Eigen::VectorXd y(5);
  y << 1.0, 0.0, 1.0 / 3.0, 0.0, 1.0 / 5.0;
  EXPECT_THROW(extract_atoms(PseudoMomentSequence(1, 4, y), 2), NumericalError);
}

TEST(Extraction, RandomRoundTrip) {
  oracle::Rng rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = oracle::uniform_int(rng, 1, 3);
    const int k = oracle::uniform_int(rng, 1, 4);
    const AtomicMeasure truth = oracle::random_measure(rng, n, k);
    int d = 1;
    while (basis_size(n, d - 1) < static_cast<std::size_t>(k)) ++d;
    const auto y = PseudoMomentSequence::from_measure(truth, 2 * d);
    const auto flat = check_flatness(y, d, 1);
    ASSERT_TRUE(flat.is_flat) << "trial " << trial;
    const AtomicMeasure got = extract_atoms(y, d);
    ASSERT_EQ(got.size(), truth.size()) << "trial " << trial;
    EXPECT_LE(oracle::hausdorff(got.atoms, truth.atoms), 1e-6) << "trial " << trial;
    EXPECT_LE(weight_error(truth, got), 1e-6) << "trial " << trial;
  }
}

TEST(Extraction, BooleanSquareAtLevelThree) {
  SemialgebraicProblem prob(Polynomial(2, {{{1, 0}, -1.0}, {{0, 1}, -1.0}, {{1, 1}, 1.0}}), {});
  prob.add_equality(Polynomial(2, {{{1, 0}, 1.0}, {{2, 0}, -1.0}}));
  prob.add_equality(Polynomial(2, {{{0, 1}, 1.0}, {{0, 2}, -1.0}}));
  const auto r = solve_moment_relaxation(prob, 3);
  ASSERT_TRUE(r.ok());
  const auto rep = flatness_at_level(r.pseudo_moments, 3, 2);
  EXPECT_TRUE(rep.is_flat);
  EXPECT_EQ(rep.rank_full, 3);
  const AtomicMeasure mu = extract_atoms(r.pseudo_moments, truncation_degree(3) / 2);
  std::vector<Point> expected{Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1), Eigen::Vector2d(1, 1)};
  EXPECT_LE(oracle::hausdorff(mu.atoms, expected), 1e-4);
  for (const auto& x : mu.atoms) EXPECT_NEAR(prob.objective(x), -1.0, 1e-5);
}

TEST(Candidate, DiracAndScale) {
  AtomicMeasure d;
  d.add(Eigen::Vector2d(0.25, -0.5), 1.0);
  const auto y = PseudoMomentSequence::from_measure(d, 2);
  EXPECT_LE((candidate_minimizer(y, AffineScale::identity(2)) - d.atoms[0]).norm(), 1e-15);
  const AffineScale s{Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(2.0, 2.0)};
  EXPECT_LE((candidate_minimizer(y, s) - Eigen::Vector2d(1.5, -1.0)).norm(), 1e-15);
}

TEST(Candidate, LiesInConvexHullOfAtoms) {
  oracle::Rng rng(59);
  for (int trial = 0; trial < 50; ++trial) {
    const AtomicMeasure mu = oracle::random_measure(rng, 1, oracle::uniform_int(rng, 1, 5), 0.0);
    const auto x = candidate_minimizer(PseudoMomentSequence::from_measure(mu, 1), AffineScale::identity(1));
    double lo = 1e9, hi = -1e9;
    for (const auto& a : mu.atoms) {
      lo = std::min(lo, a[0]);
      hi = std::max(hi, a[0]);
    }
    EXPECT_GE(x[0], lo - 1e-12);
    EXPECT_LE(x[0], hi + 1e-12);
  }
}

TEST(Tchakaloff, ThreeCollinearAtomsDegreeOne) {
  AtomicMeasure mu;
  for (double x : {-0.5, 0.0, 0.7}) mu.add(Eigen::VectorXd::Constant(1, x), 1.0 / 3.0);
  const AtomicMeasure p = tchakaloff_prune(mu, 1);
  EXPECT_LE(p.size(), 2u);
  EXPECT_NEAR(p.total_mass(), 1.0, 1e-12);
  EXPECT_NEAR(integrate(p, Polynomial::variable(1, 0)), 0.2 / 3.0, 1e-12);
  for (double w : p.weights) EXPECT_GE(w, 0.0);
}

TEST(Tchakaloff, SingleAtomUnchanged) {
  AtomicMeasure mu;
  mu.add(Eigen::Vector2d(0.1, 0.2), 0.7);
  const AtomicMeasure p = tchakaloff_prune(mu, 3);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p.atoms[0], mu.atoms[0]);
  EXPECT_EQ(p.weights[0], 0.7);
}

TEST(Tchakaloff, RandomInputsPreserveMoments) {
  oracle::Rng rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = oracle::uniform_int(rng, 1, 3), t = oracle::uniform_int(rng, 1, 3);
    const AtomicMeasure mu = oracle::random_measure(rng, n, oracle::uniform_int(rng, 1, 30), 0.0);
    const AtomicMeasure p = tchakaloff_prune(mu, t);
    EXPECT_LE(p.size(), basis_size(n, t));
    for (double w : p.weights) EXPECT_GE(w, 0.0);
    EXPECT_LE((moment_vector(p, t) - moment_vector(mu, t)).lpNorm<Eigen::Infinity>(), 1e-10) << "trial " << trial;
  }
}

TEST(RankProfile, CollinearAtoms) {
  const RankProfile p = rank_profile(collinear_three(), 4);
  ASSERT_EQ(p.ranks.size(), 5u);
  EXPECT_EQ(p.ranks[0], 1);
  EXPECT_EQ(p.ranks[1], 2);
  for (int d = 2; d <= 4; ++d) EXPECT_EQ(p.ranks[d], 3);
  EXPECT_EQ(p.stabilization_degree, 2);
}

TEST(RankProfile, CollinearMomentMatrixEntries) {
  const auto m = moment_matrix(PseudoMomentSequence::from_measure(collinear_three(), 2), 1);
  Eigen::Matrix3d expected = Eigen::Matrix3d::Zero();
  expected(0, 0) = 1.0;
  expected(1, 1) = 2.0 / 3.0;
  EXPECT_LE((m - expected).norm(), 1e-15);
}

TEST(RankProfile, DiracIsRankOne) {
  AtomicMeasure mu;
  mu.add(Eigen::Vector3d(0.4, -0.1, 0.9), 1.0);
  for (int r : rank_profile(mu, 4).ranks) EXPECT_EQ(r, 1);
}

TEST(RankProfile, VandermondeInOneDimension) {
  oracle::Rng rng(67);
  for (int trial = 0; trial < 20; ++trial) {
    const int l = oracle::uniform_int(rng, 1, 4);
    const AtomicMeasure mu = oracle::random_measure(rng, 1, l, 0.3);
    const RankProfile p = rank_profile(mu, l + 1);
    for (int d = l - 1; d <= l + 1; ++d) EXPECT_EQ(p.ranks[d], l) << "d=" << d;
  }
}
