#pragma once

// Semialgebraic problems, pseudo-moment sequences, moment and localizing
// matrices.

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "momlab/measure.hpp"
#include "momlab/poly.hpp"

namespace momlab {

// x = center + scale .* u, mapping normalized coordinates u to the
// original ones.
struct AffineScale {
  Eigen::VectorXd center;
  Eigen::VectorXd scale;

  static AffineScale identity(int dim);

  Point to_original(const Point& u) const;
  Point to_normalized(const Point& x) const;
  // Composition: first `inner`, then *this.
  AffineScale compose(const AffineScale& inner) const;
  bool is_identity() const;
};

// minimize f over K = {x : p_i(x) >= 0}.
struct SemialgebraicProblem {
  int n = 1;
  Polynomial objective{1};
  std::vector<Polynomial> constraints;
  // Archimedean ball R^2 - |x|^2, scaled by ball_weight, appended to the
  // constraint list by all_constraints().
  std::optional<double> ball_radius;
  double ball_weight = 1.0;
  // Coordinates of this problem relative to the original one.
  AffineScale scale = AffineScale::identity(1);

  SemialgebraicProblem() = default;
  SemialgebraicProblem(Polynomial f, std::vector<Polynomial> cons,
                       std::optional<double> radius = std::nullopt);

  // Adds h = 0 as the pair (h, -h).
  void add_equality(const Polynomial& h);

  std::vector<Polynomial> all_constraints() const;
  int max_degree() const;

  // min_i p_i(x) >= -tol at a point of this problem's coordinates.
  bool contains(const Point& x, double tol = 1e-6) const;
  double min_constraint_value(const Point& x) const;

  void validate() const;
};

// Map u = x / R onto the unit ball, then scale each constraint so its sup
// estimate on [-1,1]^n is at most 0.45. Positive scaling leaves K invariant,
// so applying normalize twice changes nothing.
SemialgebraicProblem normalize(const SemialgebraicProblem& prob);

// y_alpha = L(X^alpha) for |alpha| <= order.
class PseudoMomentSequence {
 public:
  PseudoMomentSequence(int dim, int order);
  PseudoMomentSequence(int dim, int order, Eigen::VectorXd values);

  static PseudoMomentSequence from_measure(const AtomicMeasure& mu, int order);

  int dim() const { return basis_.dim(); }
  int order() const { return basis_.degree(); }
  const MonomialBasis& basis() const { return basis_; }
  const Eigen::VectorXd& values() const { return y_; }
  Eigen::VectorXd& values() { return y_; }

  double operator[](const MultiIndex& alpha) const;
  // L(p); throws DegreeOverflow if deg p exceeds the order.
  double apply(const Polynomial& p) const;

  PseudoMomentSequence truncated(int order) const;

 private:
  MonomialBasis basis_;
  Eigen::VectorXd y_;
};

// M[a,b] = y_{a+b} over the basis of degree <= d.
Eigen::MatrixXd moment_matrix(const PseudoMomentSequence& y, int d);

// Entries sum_g g_gamma y_{a+b+gamma} over the basis of degree
// floor((d - deg g)/2). Throws DegreeOverflow if d < deg g or the
// required moments exceed the order of y.
Eigen::MatrixXd localizing_matrix(const PseudoMomentSequence& y, const Polynomial& g, int d);

// Smallest eigenvalue over the moment matrix and all localizing matrices
// at truncation degree d (L in Q_d(p)* iff this is >= 0).
double dual_cone_margin(const PseudoMomentSequence& y, const SemialgebraicProblem& prob,
                        int d);

// Euclidean norm of (y1 - y2) restricted to |alpha| <= t.
double op_norm_distance(const PseudoMomentSequence& y1, const PseudoMomentSequence& y2,
                        int t);

// (|| int h dmu ||_2, int ||h||_2 dmu)
std::pair<double, double> vector_integral_check(const AtomicMeasure& mu,
                                                const std::vector<Polynomial>& h);

}  // namespace momlab
