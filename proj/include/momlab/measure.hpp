#pragma once

// Finitely atomic measures mu = sum_i a_i delta_{x_i}.

#include <vector>

#include <Eigen/Dense>

#include "momlab/poly.hpp"

namespace momlab {

struct AtomicMeasure {
  std::vector<Point> atoms;
  std::vector<double> weights;

  std::size_t size() const { return atoms.size(); }
  int dim() const { return atoms.empty() ? 0 : static_cast<int>(atoms.front().size()); }
  double total_mass() const;

  void add(Point x, double w);

  // Throws if atoms and weights disagree in count or dimension.
  void validate() const;
};

// (int x^alpha dmu)_alpha over the basis.
Eigen::VectorXd measure_moments(const AtomicMeasure& mu, const MonomialBasis& basis);

// int p dmu
double integrate(const AtomicMeasure& mu, const Polynomial& p);

struct SimplexFit {
  double distance = 0.0;
  Eigen::VectorXd weights;
};

// min over probability vectors w of || target - A w ||_inf, solved as a
// linear program.
SimplexFit simplex_fit(const Eigen::MatrixXd& a, const Eigen::VectorXd& target);

// Hausdorff distance between two atom sets (Euclidean).
double hausdorff_distance(const std::vector<Point>& a, const std::vector<Point>& b);

}  // namespace momlab
