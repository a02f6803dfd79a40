#include <gtest/gtest.h>

#include <cmath>

#include "momlab/errors.hpp"
#include "momlab/support.hpp"
#include "momlab/upperbound.hpp"
#include "support/oracles.hpp"

using namespace momlab;

namespace {

GridBox unit_box(int n) { return {Eigen::VectorXd::Constant(n, -1.0), Eigen::VectorXd::Constant(n, 1.0)}; }

// int K(x,x) dx over [-1,1]^n, expanding K = v^T F^T F v and integrating
// the monomial products in closed form.
double integrated_kernel(const CdKernel& k) {
  const Eigen::MatrixXd g = k.factor().transpose() * k.factor();
  const MonomialBasis& b = k.basis();
  double s = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      double m = 1.0;
      for (int a = 0; a < b.dim(); ++a) m *= oracle::interval_moment(b[i][a] + b[j][a]);
      s += g(i, j) * m;
    }
  }
  return s;
}

}  // namespace

TEST(CdKernel, IntervalDegreeZero) {
  const CdKernel k(lebesgue_box_moments(1, 0), 0);
  for (double x : {-1.0, 0.0, 0.3, 2.0}) EXPECT_NEAR(k(Eigen::VectorXd::Constant(1, x)), 0.5, 1e-14);
  EXPECT_FALSE(k.singular());
}

TEST(CdKernel, IntervalDegreeOne) {
  const CdKernel k(lebesgue_box_moments(1, 2), 1);
  for (double x : {-1.0, -0.4, 0.0, 0.7, 1.5}) {
    EXPECT_NEAR(k(Eigen::VectorXd::Constant(1, x)), 0.5 + 1.5 * x * x, 1e-13);
  }
  EXPECT_NEAR(integrated_kernel(k), 2.0, 1e-12);
  EXPECT_NEAR(oracle::simpson([&](double x) { return k(Eigen::VectorXd::Constant(1, x)); }, -1.0, 1.0), 2.0, 1e-10);
}

TEST(CdKernel, DiracUsesPseudoInverse) {
  AtomicMeasure mu;
  mu.add(Eigen::Vector2d(0.2, -0.6), 1.0);
  const CdKernel k(PseudoMomentSequence::from_measure(mu, 4), 2);
  EXPECT_TRUE(k.singular());
  EXPECT_EQ(k.rank(), 1);
  EXPECT_NEAR(k(mu.atoms[0]), 1.0, 1e-10);
}

TEST(CdKernel, TraceIdentityOnBoxes) {
  for (int n = 1; n <= 2; ++n) {
    for (int d = 0; d <= 6; ++d) {
      const CdKernel k(lebesgue_box_moments(n, 2 * d), d);
      EXPECT_FALSE(k.singular()) << "n=" << n << " d=" << d;
      EXPECT_NEAR(integrated_kernel(k), static_cast<double>(basis_size(n, d)), 1e-6) << "n=" << n << " d=" << d;
    }
  }
}

TEST(CdKernel, TraceIdentityOnAtomicMeasures) {
  oracle::Rng rng(79);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = oracle::uniform_int(rng, 1, 2), d = oracle::uniform_int(rng, 1, 2);
    const int atoms = static_cast<int>(basis_size(n, d)) + 3;
    const AtomicMeasure mu = oracle::random_measure(rng, n, atoms, 0.1);
    const CdKernel k(PseudoMomentSequence::from_measure(mu, 2 * d), d);
    double s = 0.0;
    for (std::size_t j = 0; j < mu.size(); ++j) s += mu.weights[j] * k(mu.atoms[j]);
    EXPECT_NEAR(s, static_cast<double>(k.rank()), 1e-6);
  }
}

TEST(CdKernel, BatchedMatchesPointwise) {
  const CdKernel k(lebesgue_box_moments(2, 8), 4);
  const auto coords = grid_coords(unit_box(2), 9);
  const auto v = k.evaluate(coords, 81);
  for (std::size_t p = 0; p < 81; ++p) {
    const Eigen::Vector2d x(coords[p], coords[81 + p]);
    EXPECT_NEAR(v[p], k(x), 1e-9 * k(x));
  }
}

TEST(CdThreshold, Formula) {
  EXPECT_DOUBLE_EQ(cd_threshold(4, 0.0, 5), 2.4446247393325086e-06);
  const double base = cd_threshold(3, 0.0, 4);
  EXPECT_NEAR(16.0 * base, std::exp(8.0) * std::pow(3.0, 4) / std::pow(12.0, 8), 1e-18);
  EXPECT_NEAR(cd_threshold(3, 0.5, 4), 0.5 * base, 1e-20);
  EXPECT_LT(cd_threshold(3, 1.0 - 1e-12, 4), 1e-12 * base * 2);
  EXPECT_THROW(cd_threshold(4, 0.0, 4), InvalidArgument);
  EXPECT_THROW(cd_threshold(4, 1.0, 5), InvalidArgument);
}

TEST(SupportGrid, LargeThresholdIncludesEverything) {
  const CdKernel k(lebesgue_box_moments(1, 4), 2);
  const auto g = cd_support_grid(k, unit_box(1), 51, 1e9);
  EXPECT_DOUBLE_EQ(g.volume_fraction, 1.0);
  const auto none = cd_support_grid(k, unit_box(1), 51, 0.0);
  EXPECT_DOUBLE_EQ(none.volume_fraction, 0.0);
  const auto raw = cd_support_grid(k, unit_box(1), 51, std::nullopt);
  EXPECT_DOUBLE_EQ(raw.volume_fraction, 0.0);
  EXPECT_FALSE(raw.threshold.has_value());
}

TEST(SupportGrid, SubIntervalIsRecovered) {
  Eigen::VectorXd lo(1), hi(1);
  lo << -0.5;
  hi << 0.5;
  const CdKernel k(lebesgue_box_moments(lo, hi, 16), 8);
  double on_support = 0.0;
  for (int i = 0; i <= 100; ++i) on_support = std::max(on_support, k(Eigen::VectorXd::Constant(1, -0.5 + i / 100.0)));
  const auto g = cd_support_grid(k, unit_box(1), 401, on_support * 1.01);
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double x = g.point(p)[0];
    if (g.included[p]) EXPECT_LE(std::abs(x), 0.6) << x;
    if (std::abs(x) <= 0.5) EXPECT_TRUE(g.included[p]) << x;
  }
}

TEST(SupportGrid, HausdorffToReference) {
  const CdKernel k(lebesgue_box_moments(1, 2), 1);
  const std::vector<Point> ref{Eigen::VectorXd::Constant(1, 0.0)};
  const auto g = cd_support_grid(k, unit_box(1), 3, 0.6, &ref);  // only x = 0 has K = 0.5 < 0.6
  EXPECT_NEAR(g.volume_fraction, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(g.hausdorff_to_reference.value(), 0.0, 1e-15);
}

TEST(PowerMethod, SymmetricTwoAtoms) {
  Eigen::VectorXd y(9);
  for (int k = 0; k <= 8; ++k) y[k] = k % 2 ? 0.0 : 1.0;
  const PseudoMomentSequence seq(1, 8, y);
  const std::vector<Polynomial> fam{Polynomial::variable(1, 0)};
  const auto b = power_bounds(seq, 4, fam);
  EXPECT_NEAR(b[0].bound, 1.0, 1e-15);
  for (double x : {-1.0, -0.3, 0.0, 1.0}) EXPECT_GE(power_method_margin(seq, 4, fam, Eigen::VectorXd::Constant(1, x)), 0.0);
  EXPECT_LT(power_method_margin(seq, 4, fam, Eigen::VectorXd::Constant(1, 1.01)), 0.0);
}

TEST(PowerMethod, ConstantFamilyHasZeroMargin) {
  const auto seq = lebesgue_box_moments(1, 4);
  Eigen::VectorXd y = seq.values() / 2.0;
  const PseudoMomentSequence prob(1, 4, y);
  const std::vector<Polynomial> fam{Polynomial::constant(1, 1.0)};
  for (double x : {-3.0, 0.0, 0.5}) EXPECT_NEAR(power_method_margin(prob, 2, fam, Eigen::VectorXd::Constant(1, x)), 0.0, 1e-14);
}

TEST(PowerMethod, DiracAtOrigin) {
  AtomicMeasure mu;
  mu.add(Eigen::VectorXd::Zero(1), 1.0);
  const auto y = PseudoMomentSequence::from_measure(mu, 8);
  const std::vector<Polynomial> fam{Polynomial::variable(1, 0)};
  EXPECT_EQ(power_bounds(y, 4, fam)[0].bound, 0.0);
  const auto g = power_support_grid(power_bounds(y, 4, fam), unit_box(1), 11);
  for (std::size_t p = 0; p < g.size(); ++p) EXPECT_EQ(static_cast<bool>(g.included[p]), std::abs(g.point(p)[0]) < 1e-15);
}

TEST(PowerMethod, InadmissibleDegreeThrows) {
  const auto y = lebesgue_box_moments(1, 8);
  EXPECT_THROW(power_bounds(y, 1, {Polynomial(1, {{{2}, 1.0}})}), InvalidArgument);
}

TEST(PowerMethod, NegativeEvenMomentThrows) {
  Eigen::VectorXd y(5);
  y << 1.0, 0.0, -1.0, 0.0, 1.0;
  EXPECT_THROW(power_bounds(PseudoMomentSequence(1, 4, y), 2, {Polynomial::variable(1, 0)}), NumericalError);
}

TEST(PowerMethod, AtomsAreInsideAtInfiniteOrder) {
  oracle::Rng rng(83);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = oracle::uniform_int(rng, 1, 3);
    const AtomicMeasure mu = oracle::random_measure(rng, n, oracle::uniform_int(rng, 1, 6), 0.0);
    const auto bounds = power_bounds(mu, default_power_family(n));
    for (const auto& x : mu.atoms) EXPECT_GE(power_margin(bounds, x), -1e-8);
  }
}

TEST(PowerMethod, FiniteOrderBoundsIncreaseTowardMaximum) {
  // Each finite-order bound is at most the bound at infinite order.
  oracle::Rng rng(89);
  for (int trial = 0; trial < 20; ++trial) {
    const AtomicMeasure mu = oracle::random_measure(rng, 2, 3, 0.0);
    const auto fam = default_power_family(2);
    const auto inf = power_bounds(mu, fam);
    const auto fin = power_bounds(PseudoMomentSequence::from_measure(mu, 16), 8, fam);
    for (std::size_t i = 0; i < fam.size(); ++i) EXPECT_LE(fin[i].bound, inf[i].bound + 1e-12);
  }
}

TEST(Grid, CoordinatesFirstAxisFastest) {
  const GridBox box{Eigen::Vector2d(0.0, 10.0), Eigen::Vector2d(1.0, 12.0)};
  const auto c = grid_coords(box, 3);
  ASSERT_EQ(c.size(), 18u);
  EXPECT_EQ(c[0], 0.0);
  EXPECT_EQ(c[1], 0.5);
  EXPECT_EQ(c[2], 1.0);
  EXPECT_EQ(c[9 + 0], 10.0);
  EXPECT_EQ(c[9 + 3], 11.0);
  EXPECT_EQ(c[9 + 8], 12.0);
}
