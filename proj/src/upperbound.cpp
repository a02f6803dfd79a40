#include "momlab/upperbound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "momlab/errors.hpp"
#include "relaxation.hpp"

namespace momlab {

namespace {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

constexpr double kMassTol = 1e-8;

}  // namespace

double interval_moment(int k, double lo, double hi) {
  if (k < 0) throw InvalidArgument("negative moment index");
  if (lo == -hi) return k % 2 == 1 ? 0.0 : 2.0 * std::pow(hi, k + 1) / (k + 1);
  return (std::pow(hi, k + 1) - std::pow(lo, k + 1)) / (k + 1);
}

PseudoMomentSequence lebesgue_box_moments(int n, int degree) {
  return lebesgue_box_moments(Vector::Constant(n, -1.0), Vector::Constant(n, 1.0), degree);
}

PseudoMomentSequence lebesgue_box_moments(const Eigen::VectorXd& lower,
                                          const Eigen::VectorXd& upper, int degree) {
  const auto n = static_cast<int>(lower.size());
  if (upper.size() != n) throw DimensionMismatch("box bounds dimension mismatch");
  for (int i = 0; i < n; ++i) {
    if (!(lower[i] < upper[i])) throw InvalidArgument("empty box");
  }
  PseudoMomentSequence y(n, degree);
  const auto& basis = y.basis();
  for (std::size_t k = 0; k < basis.size(); ++k) {
    double v = 1.0;
    for (int i = 0; i < n; ++i) v *= interval_moment(basis[k][i], lower[i], upper[i]);
    y.values()[k] = v;
  }
  return y;
}

PseudoMomentSequence lebesgue_ball_moments(int n, int degree) {
  PseudoMomentSequence y(n, degree);
  const auto& basis = y.basis();
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const MultiIndex& a = basis[k];
    bool odd = false;
    double log_num = std::log(2.0);
    double beta_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      if (a[i] % 2 == 1) odd = true;
      const double beta = 0.5 * (a[i] + 1);
      log_num += std::lgamma(beta);
      beta_sum += beta;
    }
    // 2 prod Gamma(beta_i) / (Gamma(sum beta_i) (|a| + n))
    y.values()[k] = odd ? 0.0
                        : std::exp(log_num - std::lgamma(beta_sum)) / (a.degree() + n);
  }
  return y;
}

ReferenceMeasure ReferenceMeasure::box(int n) {
  return box(Vector::Constant(n, -1.0), Vector::Constant(n, 1.0));
}

ReferenceMeasure ReferenceMeasure::box(Eigen::VectorXd lower, Eigen::VectorXd upper) {
  if (lower.size() != upper.size() || lower.size() < 1) {
    throw DimensionMismatch("box bounds dimension mismatch");
  }
  ReferenceMeasure m;
  m.kind_ = Kind::Box;
  m.n_ = static_cast<int>(lower.size());
  m.lower_ = std::move(lower);
  m.upper_ = std::move(upper);
  return m;
}

ReferenceMeasure ReferenceMeasure::ball(int n) {
  if (n < 1) throw InvalidArgument("dimension must be positive");
  ReferenceMeasure m;
  m.kind_ = Kind::Ball;
  m.n_ = n;
  return m;
}

ReferenceMeasure ReferenceMeasure::table(PseudoMomentSequence moments,
                                         std::optional<AtomicMeasure> support) {
  ReferenceMeasure m;
  m.kind_ = Kind::Table;
  m.n_ = moments.dim();
  if (support && support->dim() != m.n_) throw DimensionMismatch("support dimension mismatch");
  m.table_ = std::move(moments);
  m.support_ = std::move(support);
  return m;
}

std::string ReferenceMeasure::name() const {
  switch (kind_) {
    case Kind::Box: return "box";
    case Kind::Ball: return "ball";
    case Kind::Table: return "table";
  }
  return "?";
}

std::optional<int> ReferenceMeasure::max_degree() const {
  if (kind_ == Kind::Table) return table_->order();
  return std::nullopt;
}

PseudoMomentSequence ReferenceMeasure::moments(int degree) const {
  switch (kind_) {
    case Kind::Box: return lebesgue_box_moments(lower_, upper_, degree);
    case Kind::Ball: return lebesgue_ball_moments(n_, degree);
    case Kind::Table:
      if (degree > table_->order()) {
        throw DegreeOverflow("moment table has order " + std::to_string(table_->order()) +
                             ", degree " + std::to_string(degree) + " requested");
      }
      return table_->truncated(degree);
  }
  throw InvalidArgument("unknown measure kind");
}

std::optional<bool> ReferenceMeasure::hull_contains(const Point& x, double tol) const {
  if (x.size() != n_) throw DimensionMismatch("point dimension mismatch");
  switch (kind_) {
    case Kind::Box:
      return ((x - lower_).array() >= -tol).all() && ((upper_ - x).array() >= -tol).all();
    case Kind::Ball:
      return x.norm() <= 1.0 + tol;
    case Kind::Table: {
      if (!support_) return std::nullopt;
      Matrix a(n_, static_cast<Eigen::Index>(support_->size()));
      for (std::size_t j = 0; j < support_->size(); ++j) a.col(j) = support_->atoms[j];
      return simplex_fit(a, x).distance <= std::max(tol, 1e-7);
    }
  }
  return std::nullopt;
}

namespace {

// sum_gamma f_gamma y_{a+b+gamma} over the basis of degree t.
Matrix weighted_moment_matrix(const PseudoMomentSequence& y, const Polynomial& f, int t) {
  return localizing_matrix(y, f, 2 * t + f.degree());
}

}  // namespace

UpperBoundResult solve_upper_bound(const Polynomial& f, const ReferenceMeasure& mu, int d) {
  if (d < 0) throw InvalidArgument("negative level");
  if (f.dim() != mu.dim()) throw DimensionMismatch("objective and measure dimensions differ");
  const int t = d / 2;
  const int n = f.dim();
  const PseudoMomentSequence y = mu.moments(2 * t + std::max(f.degree(), 1));

  const Matrix a = weighted_moment_matrix(y, f, t);
  Matrix b = moment_matrix(y, t);
  Eigen::LLT<Matrix> llt(b);
  if (llt.info() != Eigen::Success) {
    const double jitter = 1e-12 * std::max(1.0, b.diagonal().maxCoeff());
    b += jitter * Matrix::Identity(b.rows(), b.cols());
    llt.compute(b);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("reference moment matrix is not positive definite at order " +
                           std::to_string(t));
    }
  }
  const Matrix l = llt.matrixL();
  const Matrix l_inv = l.triangularView<Eigen::Lower>().solve(Matrix::Identity(l.rows(), l.cols()));
  Matrix c = l_inv * a * l_inv.transpose();
  c = 0.5 * (c + c.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(c);
  const Vector z = eig.eigenvectors().col(0);
  Vector q = l.transpose().triangularView<Eigen::Upper>().solve(z);
  q /= std::sqrt(q.dot(moment_matrix(y, t) * q));

  UpperBoundResult r;
  r.level = d;
  r.q = q;
  const MonomialBasis basis(n, t);
  Polynomial qp(n);
  for (std::size_t k = 0; k < basis.size(); ++k) qp.add_term(basis[k], q[k]);
  r.sigma = qp * qp;
  r.density_mass = q.dot(moment_matrix(y, t) * q);
  r.u_star = q.dot(a * q);
  r.cost_bound = r.u_star;

  r.estimator = Point(n);
  for (int i = 0; i < n; ++i) {
    const Matrix bi = weighted_moment_matrix(y, Polynomial::variable(n, i), t);
    r.estimator[i] = q.dot(bi * q);
  }
  r.estimator_in_hull = mu.hull_contains(r.estimator, 1e-6);
  r.estimator_feasible = r.estimator_in_hull.value_or(false);
  return r;
}

UpperBoundResult solve_upper_bound(const SemialgebraicProblem& prob, const ReferenceMeasure& mu,
                                   int d) {
  UpperBoundResult r = solve_upper_bound(prob.objective, mu, d);
  r.estimator_feasible = prob.contains(r.estimator, 1e-6);
  r.estimator = prob.scale.to_original(r.estimator);
  return r;
}

EstimatorResult estimator_from_density(const Polynomial& f, const Polynomial& sigma,
                                       const ReferenceMeasure& mu, const AffineScale& scale) {
  const int n = mu.dim();
  if (f.dim() != n || sigma.dim() != n) throw DimensionMismatch("dimension mismatch");
  const PseudoMomentSequence y = mu.moments(sigma.degree() + std::max(f.degree(), 1));
  const double mass = y.apply(sigma);
  if (std::abs(mass - 1.0) > kMassTol) {
    throw InvalidArgument("density is not normalized: mass " + std::to_string(mass));
  }
  EstimatorResult out;
  Point u(n);
  for (int i = 0; i < n; ++i) u[i] = y.apply(sigma * Polynomial::variable(n, i));
  out.cost = y.apply(sigma * f);
  out.in_hull = mu.hull_contains(u, 1e-6);
  out.x = scale.to_original(u);
  return out;
}

SosConvexity is_sos_convex(const Polynomial& f, int d_cert, const SdpOptions& opts) {
  const int n = f.dim();
  SosConvexity out;
  if (f.degree() <= 1) {
    out.convex = true;
    return out;
  }
  if (d_cert < 0) d_cert = (f.degree() - 2) / 2;
  const int big = 2 * n;

  // Lift x^alpha to (x, y) space.
  auto lift = [&](const MultiIndex& a, int yi, int yj) {
    std::vector<int> e(big, 0);
    for (int i = 0; i < n; ++i) e[i] = a[i];
    if (yi >= 0) e[n + yi] += 1;
    if (yj >= 0) e[n + yj] += 1;
    return MultiIndex(std::move(e));
  };

  // h(x, y) = sum_ij y_i y_j d^2 f / dx_i dx_j
  Polynomial h(big);
  for (const auto& [a, c] : f.terms()) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        std::vector<int> e = a.exponents();
        double coef = c;
        coef *= e[i];
        if (e[i] == 0) continue;
        e[i] -= 1;
        coef *= e[j];
        if (e[j] == 0) continue;
        e[j] -= 1;
        h.add_term(lift(MultiIndex(e), i, j), coef);
      }
    }
  }

  std::vector<MultiIndex> gram;
  const MonomialBasis xb(n, d_cert);
  for (int i = 0; i < n; ++i) {
    for (const auto& beta : xb.elements()) gram.push_back(lift(beta, i, -1));
  }
  Polynomial e(big);
  for (const auto& g : gram) e.add_term(g + g, 1.0);

  detail::RelaxationSpec spec;
  spec.objective = h;
  spec.normalizer = e;
  spec.degree = 2 * (d_cert + 1);
  spec.gram_basis = gram;
  const auto built = detail::build(spec);
  const SdpSolution sol = solve(built.sdp, opts);
  if (sol.status == SdpStatus::Infeasible) {
    out.convex = false;
    out.margin = -std::numeric_limits<double>::infinity();
    return out;
  }
  if (!sol.optimal()) {
    throw SolverFailure(std::string("SoS-convexity test: ") + to_string(sol.status));
  }
  out.margin = sol.primal_objective;
  out.convex = out.margin >= -kMembershipTol;
  if (out.convex) {
    SosCertificate cert = detail::certificate(spec, built, sol);
    cert.grams[0] += cert.s * Matrix::Identity(cert.grams[0].rows(), cert.grams[0].cols());
    cert.s = 0.0;
    cert.residual = cert.compute_residual();
    out.certificate = std::move(cert);
  }
  return out;
}

ConvexCostReport convex_cost_bound(const SemialgebraicProblem& prob, int d,
                                   std::optional<double> f_star, const SdpOptions& opts) {
  if (!is_sos_convex(prob.objective, -1, opts).convex) {
    throw InvalidArgument("objective is not SoS-convex");
  }
  const RelaxationResult r = solve_moment_relaxation(prob, d, opts);
  ConvexCostReport rep;
  rep.level = d;
  rep.m_star = r.m_star;
  Point u(prob.n);
  for (int i = 0; i < prob.n; ++i) u[i] = r.pseudo_moments[MultiIndex::unit(prob.n, i)];
  rep.f_candidate = prob.objective(u);
  rep.candidate = prob.scale.to_original(u);
  rep.bound_holds = rep.f_candidate <= rep.m_star + 1e-6;
  if (f_star) rep.gap_to_optimum = *f_star - rep.f_candidate;
  return rep;
}

}  // namespace momlab
