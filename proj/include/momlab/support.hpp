#pragma once

// Support estimation from (pseudo-)moments: Christoffel-Darboux sublevel
// sets and power-method outer approximations.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "momlab/cone.hpp"
#include "momlab/measure.hpp"
#include "momlab/poly.hpp"

namespace momlab {

inline constexpr double kDefaultPinvTol = 1e-8;

// K(x,x) = ||F v(x)||^2 with F^T F the (pseudo-)inverse of M_d.
class CdKernel {
 public:
  CdKernel(const PseudoMomentSequence& y, int d, double pinv_tol = kDefaultPinvTol);

  int degree() const { return basis_.degree(); }
  const MonomialBasis& basis() const { return basis_; }
  const Eigen::MatrixXd& factor() const { return factor_; }
  int rank() const { return static_cast<int>(factor_.rows()); }
  // True when eigenvalues were dropped by the pseudo-inverse.
  bool singular() const { return singular_; }
  double pinv_tol() const { return pinv_tol_; }

  double operator()(const Point& x) const;
  // Batched evaluation over axis-major coordinates.
  std::vector<double> evaluate(std::span<const double> coords, std::size_t npts) const;

 private:
  MonomialBasis basis_;
  Eigen::MatrixXd factor_;
  bool singular_ = false;
  double pinv_tol_;
};

CdKernel cd_kernel(const PseudoMomentSequence& y, int d, double pinv_tol = kDefaultPinvTol);

// (1 - alpha)/16 * e^{2r} d^r / (3r)^{2r}; requires 0 <= alpha < 1 and r > d.
double cd_threshold(int d, double alpha, int r);

struct GridBox {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

struct SupportGrid {
  GridBox box;
  int resolution = 0;
  // Axis-major coordinates: coords[axis * size() + p].
  std::vector<double> coords;
  std::vector<double> values;
  std::vector<char> included;
  std::optional<double> threshold;
  double volume_fraction = 0.0;
  // Hausdorff distance from the included points to the reference set.
  std::optional<double> hausdorff_to_reference;

  std::size_t size() const { return values.size(); }
  Point point(std::size_t p) const;
};

// Tensor grid with `resolution` points per axis, first axis fastest.
std::vector<double> grid_coords(const GridBox& box, int resolution);

// Included iff K(x,x) < threshold. Without a threshold nothing is marked.
SupportGrid cd_support_grid(const CdKernel& kernel, const GridBox& box, int resolution,
                            std::optional<double> threshold,
                            const std::vector<Point>* reference = nullptr);

// All monomials of degree <= 2.
std::vector<Polynomial> default_power_family(int n);

struct PowerBound {
  Polynomial q{1};
  // sup over admissible k of L(q^{2k})^{1/2k}
  double bound = 0.0;
};

inline constexpr double kPowerNegTol = 1e-9;

// Throws InvalidArgument when no k >= 1 has k deg q <= d, and
// NumericalError when some L(q^{2k}) < -kPowerNegTol.
std::vector<PowerBound> power_bounds(const PseudoMomentSequence& y, int d,
                                     const std::vector<Polynomial>& family);

// Bounds at d = infinity for an atomic measure: max |q| over the atoms
// carrying positive weight.
std::vector<PowerBound> power_bounds(const AtomicMeasure& mu, const std::vector<Polynomial>& family);

// min_q (bound_q - |q(x)|); x lies in the outer set iff this is >= 0.
double power_margin(const std::vector<PowerBound>& bounds, const Point& x);

double power_method_margin(const PseudoMomentSequence& y, int d,
                           const std::vector<Polynomial>& family, const Point& x);

SupportGrid power_support_grid(const std::vector<PowerBound>& bounds, const GridBox& box,
                               int resolution);

}  // namespace momlab
