#pragma once

// Upper bounds from SoS densities against a reference measure with known
// moments.

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "momlab/cone.hpp"
#include "momlab/hierarchy.hpp"
#include "momlab/measure.hpp"
#include "momlab/poly.hpp"

namespace momlab {

// int_{[lo,hi]} t^k dt
double interval_moment(int k, double lo, double hi);

// Lebesgue moments of [-1,1]^n: prod_i (1 + (-1)^a_i) / (a_i + 1).
PseudoMomentSequence lebesgue_box_moments(int n, int degree);

// Lebesgue moments of the box prod_i [lower_i, upper_i].
PseudoMomentSequence lebesgue_box_moments(const Eigen::VectorXd& lower,
                                          const Eigen::VectorXd& upper, int degree);

// Lebesgue moments of the unit ball in R^n.
PseudoMomentSequence lebesgue_ball_moments(int n, int degree);

class ReferenceMeasure {
 public:
  enum class Kind { Box, Ball, Table };

  static ReferenceMeasure box(int n);
  static ReferenceMeasure box(Eigen::VectorXd lower, Eigen::VectorXd upper);
  static ReferenceMeasure ball(int n);
  // Optional support atoms let estimators test convex-hull membership.
  static ReferenceMeasure table(PseudoMomentSequence moments,
                                std::optional<AtomicMeasure> support = std::nullopt);

  Kind kind() const { return kind_; }
  int dim() const { return n_; }
  std::string name() const;
  // Largest available moment degree (closed forms have none).
  std::optional<int> max_degree() const;
  PseudoMomentSequence moments(int degree) const;
  // Membership of x in the convex hull of the support; nullopt when the
  // support is unknown.
  std::optional<bool> hull_contains(const Point& x, double tol = 1e-9) const;

 private:
  Kind kind_ = Kind::Box;
  int n_ = 1;
  Eigen::VectorXd lower_, upper_;
  std::optional<PseudoMomentSequence> table_;
  std::optional<AtomicMeasure> support_;
};

struct UpperBoundResult {
  int level = 0;
  double u_star = 0.0;
  // sigma = q^2 with int q^2 dmu = 1.
  Polynomial sigma{1};
  Eigen::VectorXd q;
  Point estimator;
  bool estimator_feasible = false;
  std::optional<bool> estimator_in_hull;
  double cost_bound = 0.0;
  double density_mass = 0.0;
};

// Smallest generalized eigenvalue of (A, B) with A[a,b] = int f x^{a+b} dmu
// and B the moment matrix of mu, over the basis of degree floor(d/2).
// Throws NumericalError when B is not positive definite (after a 1e-12
// relative jitter).
UpperBoundResult solve_upper_bound(const Polynomial& f, const ReferenceMeasure& mu, int d);

// Same, with x-check feasibility tested against the constraints of prob
// (the measure lives in prob's coordinates).
UpperBoundResult solve_upper_bound(const SemialgebraicProblem& prob, const ReferenceMeasure& mu,
                                   int d);

struct EstimatorResult {
  Point x;
  double cost = 0.0;
  std::optional<bool> in_hull;
};

// x_i = int X_i sigma dmu mapped through the scale record, cost = int f sigma dmu.
// Throws InvalidArgument when int sigma dmu differs from 1 by more than 1e-8.
EstimatorResult estimator_from_density(const Polynomial& f, const Polynomial& sigma,
                                       const ReferenceMeasure& mu, const AffineScale& scale);

struct SosConvexity {
  bool convex = false;
  // max t with y^T D^2 f(x) y - t e(x, y) a sum of squares.
  double margin = 0.0;
  std::optional<SosCertificate> certificate;
};

// Tests whether y^T D^2 f(x) y is a sum of squares in (x, y), with Gram
// monomials y_i x^beta, |beta| <= d_cert. d_cert < 0 picks
// floor((deg f - 2) / 2).
SosConvexity is_sos_convex(const Polynomial& f, int d_cert = -1, const SdpOptions& opts = {});

struct ConvexCostReport {
  int level = 0;
  double m_star = 0.0;
  Point candidate;
  double f_candidate = 0.0;
  // f(x^(d)) <= m_d* + 1e-6
  bool bound_holds = false;
  std::optional<double> gap_to_optimum;
  // The bounded-degree Putinar property is assumed, not verified.
  bool bounded_degree_assumed = true;
};

// Throws InvalidArgument unless the objective is SoS-convex.
ConvexCostReport convex_cost_bound(const SemialgebraicProblem& prob, int d,
                                   std::optional<double> f_star = std::nullopt,
                                   const SdpOptions& opts = {});

}  // namespace momlab
