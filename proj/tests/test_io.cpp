#include <gtest/gtest.h>

#include "momlab/errors.hpp"
#include "momlab/io.hpp"
#include "support/oracles.hpp"

using namespace momlab;
using momlab::io::json;

TEST(Io, PolynomialRoundTrip) {
  oracle::Rng rng(103);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = oracle::uniform_int(rng, 1, 3);
    const Polynomial p = oracle::random_polynomial(rng, n, 4, 6);
    const Polynomial q = io::polynomial_from_json(json::parse(io::to_json(p).dump()));
    EXPECT_TRUE((p - q).is_zero());
  }
}

TEST(Io, PolynomialFormat) {
  const auto j = json::parse(R"({"n": 2, "terms": [{"alpha": [1, 0], "c": -1}, {"alpha": [1, 1], "c": 2.5}]})");
  const Polynomial p = io::polynomial_from_json(j);
  EXPECT_EQ(p.dim(), 2);
  EXPECT_DOUBLE_EQ(p.coeff(MultiIndex({1, 1})), 2.5);
  EXPECT_THROW(io::polynomial_from_json(json::parse(R"({"n": 2, "terms": [{"alpha": [1], "c": 1}]})")),
               std::exception);
  EXPECT_THROW(io::polynomial_from_json(json::parse(R"({"terms": []})")), std::exception);
}

TEST(Io, ProblemRoundTrip) {
  const auto j = json::parse(R"({
    "n": 1,
    "objective": {"n": 1, "terms": [{"alpha": [1], "c": 1}]},
    "constraints": [{"n": 1, "terms": [{"alpha": [0], "c": 1}, {"alpha": [2], "c": -1}]}],
    "equalities": [{"n": 1, "terms": [{"alpha": [3], "c": 1}]}],
    "ball_radius": 1.5
  })");
  const SemialgebraicProblem p = io::problem_from_json(j);
  EXPECT_EQ(p.constraints.size(), 3u);
  EXPECT_DOUBLE_EQ(p.ball_radius.value(), 1.5);
  const SemialgebraicProblem q = io::problem_from_json(io::to_json(p));
  EXPECT_EQ(q.constraints.size(), p.constraints.size());
  EXPECT_EQ(q.ball_radius, p.ball_radius);
  EXPECT_TRUE((q.objective - p.objective).is_zero());
}

TEST(Io, ProblemWithoutBall) {
  const auto j = json::parse(R"({"n": 1, "objective": {"n": 1, "terms": []}, "constraints": [], "ball_radius": null})");
  EXPECT_FALSE(io::problem_from_json(j).ball_radius.has_value());
}

TEST(Io, MomentsRoundTrip) {
  oracle::Rng rng(107);
  const AtomicMeasure mu = oracle::random_measure(rng, 2, 3);
  const auto y = PseudoMomentSequence::from_measure(mu, 4);
  const auto back = io::moments_from_json(io::to_json(y));
  EXPECT_EQ(back.order(), 4);
  EXPECT_LE((back.values() - y.values()).norm(), 1e-15);
  json atoms = io::to_json(mu);
  atoms["order"] = 4;
  EXPECT_LE((io::moments_from_json(atoms).values() - y.values()).norm(), 1e-15);
  const AtomicMeasure nu = io::measure_from_json(io::to_json(mu));
  EXPECT_EQ(nu.weights, mu.weights);
}

TEST(Io, ReferenceMeasures) {
  EXPECT_EQ(io::reference_measure_from_json("box", 2, 4).kind(), ReferenceMeasure::Kind::Box);
  EXPECT_EQ(io::reference_measure_from_json("ball", 2, 4).kind(), ReferenceMeasure::Kind::Ball);
  const auto box = io::reference_measure_from_json(json::parse(R"({"box": [0, 1]})"), 1, 4);
  EXPECT_NEAR(box.moments(2)[MultiIndex({2})], 1.0 / 3.0, 1e-15);
  const auto tab = io::reference_measure_from_json(json::parse(R"({"atoms": [[0], [1]], "weights": [0.5, 0.5]})"), 1, 4);
  EXPECT_EQ(tab.kind(), ReferenceMeasure::Kind::Table);
  EXPECT_TRUE(tab.hull_contains(Eigen::VectorXd::Constant(1, 0.5)).value());
  EXPECT_FALSE(tab.hull_contains(Eigen::VectorXd::Constant(1, 1.5)).value());
  EXPECT_THROW(io::reference_measure_from_json("sphere", 1, 4), std::exception);
}

TEST(Io, ParseLevels) {
  EXPECT_EQ(io::parse_levels("0:2:12"), (std::vector<int>{0, 2, 4, 6, 8, 10, 12}));
  EXPECT_EQ(io::parse_levels("2:4"), (std::vector<int>{2, 3, 4}));
  EXPECT_EQ(io::parse_levels("2,3,4"), (std::vector<int>{2, 3, 4}));
  EXPECT_EQ(io::parse_levels("4"), (std::vector<int>{4}));
  EXPECT_THROW(io::parse_levels("4:2"), InvalidArgument);
  EXPECT_THROW(io::parse_levels("a"), InvalidArgument);
  EXPECT_THROW(io::parse_levels("0:0:4"), InvalidArgument);
}

TEST(Io, ShippedCorpusLoads) {
  const std::filesystem::path dir = MOMLAB_DATA_DIR;
  const auto corpus = io::corpus_from_json(io::read_json_file(dir / "corpus.json"), dir);
  ASSERT_EQ(corpus.size(), 5u);
  for (const auto& e : corpus) {
    EXPECT_FALSE(e.levels.empty()) << e.id;
    EXPECT_LE(e.problem.n, 2) << e.id;
  }
}

TEST(Io, MissingFileThrows) {
  EXPECT_THROW(io::read_json_file("/nonexistent/file.json"), std::exception);
}
