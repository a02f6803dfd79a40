#include "momlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "momlab/errors.hpp"
#include "momlab/sdp.hpp"

namespace momlab {

double AtomicMeasure::total_mass() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

void AtomicMeasure::add(Point x, double w) {
  if (!atoms.empty() && x.size() != atoms.front().size()) {
    throw DimensionMismatch("atom dimension mismatch");
  }
  atoms.push_back(std::move(x));
  weights.push_back(w);
}

void AtomicMeasure::validate() const {
  if (atoms.size() != weights.size()) throw InvalidArgument("atom/weight count mismatch");
  for (const auto& a : atoms) {
    if (a.size() != atoms.front().size()) throw DimensionMismatch("atom dimension mismatch");
  }
}

Eigen::VectorXd measure_moments(const AtomicMeasure& mu, const MonomialBasis& basis) {
  mu.validate();
  Eigen::VectorXd y = Eigen::VectorXd::Zero(basis.size());
  for (std::size_t j = 0; j < mu.size(); ++j) {
    if (mu.atoms[j].size() != basis.dim()) throw DimensionMismatch("atom dimension mismatch");
    y += mu.weights[j] * basis.evaluate(std::span<const double>(mu.atoms[j].data(), basis.dim()));
  }
  return y;
}

double integrate(const AtomicMeasure& mu, const Polynomial& p) {
  double s = 0.0;
  for (std::size_t j = 0; j < mu.size(); ++j) s += mu.weights[j] * p(mu.atoms[j]);
  return s;
}

SimplexFit simplex_fit(const Eigen::MatrixXd& a, const Eigen::VectorXd& target) {
  const auto rows = a.rows();
  const auto k = a.cols();
  if (k == 0) throw InvalidArgument("simplex fit needs at least one column");
  if (target.size() != rows) throw DimensionMismatch("target length mismatch");
  // Variables w_0..w_{k-1}, t.
  const int t = static_cast<int>(k);
  SdpProblem lp(t + 1);
  for (int j = 0; j < t; ++j) lp.add_entry(j, lp.add_block(1), 0, 0, 1.0);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (double sign : {1.0, -1.0}) {
      const int b = lp.add_block(1);
      lp.add_entry(t, b, 0, 0, 1.0);
      lp.add_entry(SdpProblem::kConstant, b, 0, 0, -sign * target[r]);
      for (int j = 0; j < t; ++j) lp.add_entry(j, b, 0, 0, sign * a(r, j));
    }
  }
  Eigen::VectorXd ones = Eigen::VectorXd::Zero(t + 1);
  ones.head(t).setOnes();
  lp.add_equality(ones, 1.0);
  lp.cost[t] = 1.0;
  const SdpSolution sol = solve(lp);
  if (!sol.optimal()) {
    throw SolverFailure(std::string("simplex fit: ") + to_string(sol.status));
  }
  SimplexFit out;
  out.weights = sol.x.head(t).cwiseMax(0.0);
  out.weights /= out.weights.sum();
  out.distance = rows > 0 ? (target - a * out.weights).cwiseAbs().maxCoeff() : 0.0;
  return out;
}

double hausdorff_distance(const std::vector<Point>& a, const std::vector<Point>& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  auto directed = [](const std::vector<Point>& s, const std::vector<Point>& t) {
    double worst = 0.0;
    for (const auto& p : s) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : t) best = std::min(best, (p - q).norm());
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace momlab
