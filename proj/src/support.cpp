#include "momlab/support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "momlab/errors.hpp"
#include "momlab/kernels.hpp"

namespace momlab {

namespace {

constexpr std::size_t kChunk = 4096;

}  // namespace

CdKernel::CdKernel(const PseudoMomentSequence& y, int d, double pinv_tol)
    : basis_(y.dim(), d), pinv_tol_(pinv_tol) {
  if (d < 0) throw InvalidArgument("negative kernel degree");
  const Eigen::MatrixXd m = moment_matrix(y, d);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  const Eigen::VectorXd& lam = eig.eigenvalues();
  const double lmax = lam.cwiseAbs().maxCoeff();
  if (!(lmax > 0.0)) throw NumericalError("moment matrix is zero");
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < lam.size(); ++k) {
    if (lam[k] > pinv_tol * lmax) keep.push_back(k);
  }
  singular_ = keep.size() < static_cast<std::size_t>(lam.size());
  factor_.resize(static_cast<Eigen::Index>(keep.size()), m.cols());
  for (std::size_t r = 0; r < keep.size(); ++r) {
    factor_.row(static_cast<Eigen::Index>(r)) =
        eig.eigenvectors().col(keep[r]).transpose() / std::sqrt(lam[keep[r]]);
  }
}

double CdKernel::operator()(const Point& x) const {
  const Eigen::VectorXd v = basis_.evaluate(std::span<const double>(x.data(), x.size()));
  return (factor_ * v).squaredNorm();
}

std::vector<double> CdKernel::evaluate(std::span<const double> coords, std::size_t npts) const {
  const int n = basis_.dim();
  if (coords.size() != static_cast<std::size_t>(n) * npts) {
    throw DimensionMismatch("coordinate buffer size mismatch");
  }
  const kernels::TermTable table = basis_.term_table();
  const auto nb = static_cast<Eigen::Index>(basis_.size());
  std::vector<double> out(npts);
  std::vector<double> chunk_coords(n * kChunk);
  std::vector<double> mono(static_cast<std::size_t>(nb) * kChunk);
  for (std::size_t start = 0; start < npts; start += kChunk) {
    const std::size_t m = std::min(kChunk, npts - start);
    for (int i = 0; i < n; ++i) {
      std::copy_n(coords.begin() + i * npts + start, m, chunk_coords.begin() + i * m);
    }
    kernels::eval_monomials(table, std::span<const double>(chunk_coords.data(), n * m), m,
                            std::span<double>(mono.data(), nb * m));
    // rows: points, cols: monomials
    Eigen::Map<const Eigen::MatrixXd> v(mono.data(), static_cast<Eigen::Index>(m), nb);
    const Eigen::MatrixXd fv = v * factor_.transpose();
    for (std::size_t p = 0; p < m; ++p) out[start + p] = fv.row(static_cast<Eigen::Index>(p)).squaredNorm();
  }
  return out;
}

CdKernel cd_kernel(const PseudoMomentSequence& y, int d, double pinv_tol) {
  return CdKernel(y, d, pinv_tol);
}

double cd_threshold(int d, double alpha, int r) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in [0, 1)");
  if (d < 0) throw InvalidArgument("degree must be nonnegative");
  if (r <= d) throw InvalidArgument("the threshold formula requires r > d");
  if (d == 0) return 0.0;
  const double lr = static_cast<double>(r);
  const double log_s = 2.0 * lr + lr * std::log(static_cast<double>(d)) - 2.0 * lr * std::log(3.0 * lr);
  return (1.0 - alpha) / 16.0 * std::exp(log_s);
}

Point SupportGrid::point(std::size_t p) const {
  const auto n = box.lower.size();
  Point x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = coords[static_cast<std::size_t>(i) * size() + p];
  return x;
}

std::vector<double> grid_coords(const GridBox& box, int resolution) {
  const auto n = static_cast<int>(box.lower.size());
  if (box.upper.size() != n) throw DimensionMismatch("box bounds dimension mismatch");
  if (resolution < 1) throw InvalidArgument("resolution must be positive");
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(resolution);
  std::vector<double> coords(total * n);
  for (std::size_t p = 0; p < total; ++p) {
    std::size_t idx = p;
    for (int i = 0; i < n; ++i) {
      const auto k = static_cast<double>(idx % resolution);
      idx /= resolution;
      const double step = resolution > 1 ? (box.upper[i] - box.lower[i]) / (resolution - 1) : 0.0;
      coords[i * total + p] = resolution > 1 ? box.lower[i] + step * k
                                             : 0.5 * (box.lower[i] + box.upper[i]);
    }
  }
  return coords;
}

namespace {

void finish(SupportGrid& g, const std::vector<Point>* reference) {
  std::size_t inside = 0;
  std::vector<Point> chosen;
  for (std::size_t p = 0; p < g.size(); ++p) {
    if (g.included[p]) {
      ++inside;
      if (reference) chosen.push_back(g.point(p));
    }
  }
  g.volume_fraction = g.size() ? static_cast<double>(inside) / static_cast<double>(g.size()) : 0.0;
  if (reference) g.hausdorff_to_reference = hausdorff_distance(chosen, *reference);
}

}  // namespace

SupportGrid cd_support_grid(const CdKernel& kernel, const GridBox& box, int resolution,
                            std::optional<double> threshold, const std::vector<Point>* reference) {
  if (box.lower.size() != kernel.basis().dim()) throw DimensionMismatch("box dimension mismatch");
  SupportGrid g;
  g.box = box;
  g.resolution = resolution;
  g.coords = grid_coords(box, resolution);
  const std::size_t npts = g.coords.size() / static_cast<std::size_t>(box.lower.size());
  g.values = kernel.evaluate(g.coords, npts);
  g.threshold = threshold;
  g.included.assign(npts, 0);
  if (threshold) {
    for (std::size_t p = 0; p < npts; ++p) g.included[p] = g.values[p] < *threshold;
  }
  finish(g, reference);
  return g;
}

std::vector<Polynomial> default_power_family(int n) {
  std::vector<Polynomial> out;
  const MonomialBasis basis(n, 2);
  for (const auto& a : basis.elements()) out.push_back(Polynomial::monomial(a));
  return out;
}

std::vector<PowerBound> power_bounds(const PseudoMomentSequence& y, int d,
                                     const std::vector<Polynomial>& family) {
  std::vector<PowerBound> out;
  for (const auto& q : family) {
    if (q.dim() != y.dim()) throw DimensionMismatch("family member dimension mismatch");
    const int deg = q.degree();
    const int k_max = deg == 0 ? std::max(d, 1) : d / deg;
    if (k_max < 1) {
      throw InvalidArgument("no admissible power for a family member of degree " +
                            std::to_string(deg) + " at d = " + std::to_string(d));
    }
    PowerBound b{q, 0.0};
    Polynomial q2 = q * q;
    Polynomial pow = q2;
    for (int k = 1; k <= k_max; ++k) {
      if (k > 1) pow = pow * q2;
      double v = y.apply(pow);
      if (v < -kPowerNegTol) {
        throw NumericalError("negative even pseudo-moment L(q^" + std::to_string(2 * k) +
                             ") = " + std::to_string(v));
      }
      v = std::max(v, 0.0);
      b.bound = std::max(b.bound, std::pow(v, 1.0 / (2.0 * k)));
    }
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<PowerBound> power_bounds(const AtomicMeasure& mu, const std::vector<Polynomial>& family) {
  mu.validate();
  std::vector<PowerBound> out;
  for (const auto& q : family) {
    PowerBound b{q, 0.0};
    for (std::size_t j = 0; j < mu.size(); ++j) {
      if (mu.weights[j] > 0.0) b.bound = std::max(b.bound, std::abs(q(mu.atoms[j])));
    }
    out.push_back(std::move(b));
  }
  return out;
}

double power_margin(const std::vector<PowerBound>& bounds, const Point& x) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& b : bounds) m = std::min(m, b.bound - std::abs(b.q(x)));
  return m;
}

double power_method_margin(const PseudoMomentSequence& y, int d,
                           const std::vector<Polynomial>& family, const Point& x) {
  return power_margin(power_bounds(y, d, family), x);
}

SupportGrid power_support_grid(const std::vector<PowerBound>& bounds, const GridBox& box,
                               int resolution) {
  SupportGrid g;
  g.box = box;
  g.resolution = resolution;
  g.coords = grid_coords(box, resolution);
  const std::size_t npts = g.coords.size() / static_cast<std::size_t>(box.lower.size());
  g.values.assign(npts, std::numeric_limits<double>::infinity());
  for (const auto& b : bounds) {
    const std::vector<double> qv = eval_points(b.q, g.coords, npts);
    for (std::size_t p = 0; p < npts; ++p) g.values[p] = std::min(g.values[p], b.bound - std::abs(qv[p]));
  }
  g.threshold = 0.0;
  g.included.assign(npts, 0);
  for (std::size_t p = 0; p < npts; ++p) g.included[p] = g.values[p] >= 0.0;
  finish(g, nullptr);
  return g;
}

}  // namespace momlab
