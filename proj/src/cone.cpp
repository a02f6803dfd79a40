#include "momlab/cone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "momlab/errors.hpp"

namespace momlab {

namespace {

constexpr double kConstraintSupTarget = 0.5 * 0.9;
constexpr int kNormalizeGrid = 65;

}  // namespace

AffineScale AffineScale::identity(int dim) {
  return {Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Ones(dim)};
}

Point AffineScale::to_original(const Point& u) const {
  if (u.size() != center.size()) throw DimensionMismatch("point dimension mismatch");
  return center + scale.cwiseProduct(u);
}

Point AffineScale::to_normalized(const Point& x) const {
  if (x.size() != center.size()) throw DimensionMismatch("point dimension mismatch");
  return (x - center).cwiseQuotient(scale);
}

AffineScale AffineScale::compose(const AffineScale& inner) const {
  // outer(inner(u)) = c + s .* (c' + s' .* u)
  return {center + scale.cwiseProduct(inner.center), scale.cwiseProduct(inner.scale)};
}

bool AffineScale::is_identity() const {
  return center.isZero(0.0) && (scale.array() == 1.0).all();
}

SemialgebraicProblem::SemialgebraicProblem(Polynomial f, std::vector<Polynomial> cons,
                                           std::optional<double> radius)
    : n(f.dim()),
      objective(std::move(f)),
      constraints(std::move(cons)),
      ball_radius(radius),
      scale(AffineScale::identity(n)) {
  validate();
}

void SemialgebraicProblem::add_equality(const Polynomial& h) {
  if (h.dim() != n) throw DimensionMismatch("equality dimension mismatch");
  constraints.push_back(h);
  constraints.push_back(-h);
}

std::vector<Polynomial> SemialgebraicProblem::all_constraints() const {
  std::vector<Polynomial> out = constraints;
  if (ball_radius) {
    const double r = *ball_radius;
    Polynomial ball = Polynomial::constant(n, r * r);
    for (int i = 0; i < n; ++i) {
      ball -= Polynomial::variable(n, i) * Polynomial::variable(n, i);
    }
    out.push_back(ball * ball_weight);
  }
  return out;
}

int SemialgebraicProblem::max_degree() const {
  int d = objective.degree();
  for (const auto& p : all_constraints()) d = std::max(d, p.degree());
  return d;
}

double SemialgebraicProblem::min_constraint_value(const Point& x) const {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& p : all_constraints()) worst = std::min(worst, p(x));
  return worst;
}

bool SemialgebraicProblem::contains(const Point& x, double tol) const {
  return min_constraint_value(x) >= -tol;
}

void SemialgebraicProblem::validate() const {
  if (n < 1) throw InvalidArgument("problem dimension must be positive");
  if (objective.dim() != n) throw DimensionMismatch("objective dimension mismatch");
  for (const auto& p : constraints) {
    if (p.dim() != n) throw DimensionMismatch("constraint dimension mismatch");
  }
  if (ball_radius && !(*ball_radius > 0.0)) throw InvalidArgument("ball radius must be positive");
  if (!(ball_weight > 0.0)) throw InvalidArgument("ball weight must be positive");
  if (scale.center.size() != n || scale.scale.size() != n) {
    throw DimensionMismatch("scale record dimension mismatch");
  }
}

SemialgebraicProblem normalize(const SemialgebraicProblem& prob) {
  prob.validate();
  if (!prob.ball_radius) throw InvalidArgument("normalize requires a ball radius");
  const int n = prob.n;
  const double r = *prob.ball_radius;

  AffineScale step{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Constant(n, r)};
  const std::span<const double> c(step.center.data(), n);
  const std::span<const double> s(step.scale.data(), n);

  SemialgebraicProblem out;
  out.n = n;
  out.objective = compose_affine(prob.objective, c, s);
  out.scale = prob.scale.compose(step);
  for (const auto& p : prob.constraints) {
    Polynomial q = compose_affine(p, c, s);
    const double sup = sup_norm_box(q, kNormalizeGrid);
    if (sup > kConstraintSupTarget) q *= kConstraintSupTarget / sup;
    out.constraints.push_back(std::move(q));
  }
  // R^2 - |R u|^2 = R^2 (1 - |u|^2); its sup over the unit box is R^2 * weight.
  out.ball_radius = 1.0;
  out.ball_weight = prob.ball_weight * r * r;
  if (out.ball_weight > kConstraintSupTarget) out.ball_weight = kConstraintSupTarget;
  out.validate();
  return out;
}

PseudoMomentSequence::PseudoMomentSequence(int dim, int order)
    : basis_(dim, order), y_(Eigen::VectorXd::Zero(basis_.size())) {}

PseudoMomentSequence::PseudoMomentSequence(int dim, int order, Eigen::VectorXd values)
    : basis_(dim, order), y_(std::move(values)) {
  if (static_cast<std::size_t>(y_.size()) != basis_.size()) {
    throw DimensionMismatch("pseudo-moment vector has length " + std::to_string(y_.size()) +
                            ", expected " + std::to_string(basis_.size()));
  }
}

PseudoMomentSequence PseudoMomentSequence::from_measure(const AtomicMeasure& mu, int order) {
  if (mu.size() == 0) throw InvalidArgument("empty measure");
  MonomialBasis basis(mu.dim(), order);
  return PseudoMomentSequence(mu.dim(), order, measure_moments(mu, basis));
}

double PseudoMomentSequence::operator[](const MultiIndex& alpha) const {
  const long k = basis_.index_of(alpha);
  if (k < 0) throw DegreeOverflow("moment of degree " + std::to_string(alpha.degree()) +
                                  " not available (order " + std::to_string(order()) + ")");
  return y_[k];
}

double PseudoMomentSequence::apply(const Polynomial& p) const {
  if (p.dim() != dim()) throw DimensionMismatch("polynomial dimension mismatch");
  double s = 0.0;
  for (const auto& [a, c] : p.terms()) s += c * (*this)[a];
  return s;
}

PseudoMomentSequence PseudoMomentSequence::truncated(int order) const {
  if (order > this->order()) throw DegreeOverflow("cannot extend a truncation");
  const std::size_t m = basis_size(dim(), order);
  return PseudoMomentSequence(dim(), order, y_.head(m));
}

Eigen::MatrixXd moment_matrix(const PseudoMomentSequence& y, int d) {
  return localizing_matrix(y, Polynomial::constant(y.dim(), 1.0), 2 * d);
}

Eigen::MatrixXd localizing_matrix(const PseudoMomentSequence& y, const Polynomial& g, int d) {
  if (g.dim() != y.dim()) throw DimensionMismatch("localizer dimension mismatch");
  if (d < g.degree()) throw DegreeOverflow("truncation degree below localizer degree");
  const int t = (d - g.degree()) / 2;
  if (2 * t + g.degree() > y.order()) {
    throw DegreeOverflow("localizing matrix needs moments of degree " +
                         std::to_string(2 * t + g.degree()) + ", sequence has order " +
                         std::to_string(y.order()));
  }
  const MonomialBasis basis(y.dim(), t);
  const std::size_t m = basis.size();
  Eigen::MatrixXd out(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      const MultiIndex ab = basis[i] + basis[j];
      double v = 0.0;
      for (const auto& [gamma, c] : g.terms()) v += c * y[ab + gamma];
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

double dual_cone_margin(const PseudoMomentSequence& y, const SemialgebraicProblem& prob,
                        int d) {
  auto min_eig = [](const Eigen::MatrixXd& m) {
    if (m.size() == 0) return std::numeric_limits<double>::infinity();
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly)
        .eigenvalues()
        .minCoeff();
  };
  double worst = min_eig(moment_matrix(y, d / 2));
  for (const auto& g : prob.all_constraints()) {
    if (g.degree() > d) continue;
    worst = std::min(worst, min_eig(localizing_matrix(y, g, d)));
  }
  return worst;
}

double op_norm_distance(const PseudoMomentSequence& y1, const PseudoMomentSequence& y2,
                        int t) {
  if (y1.dim() != y2.dim()) throw DimensionMismatch("sequence dimension mismatch");
  if (t > y1.order() || t > y2.order()) throw DegreeOverflow("sequences do not cover degree t");
  const auto m = static_cast<Eigen::Index>(basis_size(y1.dim(), t));
  return (y1.values().head(m) - y2.values().head(m)).norm();
}

std::pair<double, double> vector_integral_check(const AtomicMeasure& mu,
                                                const std::vector<Polynomial>& h) {
  mu.validate();
  Eigen::VectorXd integral = Eigen::VectorXd::Zero(h.size());
  double norm_integral = 0.0;
  for (std::size_t j = 0; j < mu.size(); ++j) {
    Eigen::VectorXd hx(h.size());
    for (std::size_t k = 0; k < h.size(); ++k) hx[k] = h[k](mu.atoms[j]);
    integral += mu.weights[j] * hx;
    norm_integral += mu.weights[j] * hx.norm();
  }
  return {integral.norm(), norm_integral};
}

}  // namespace momlab
