#include "momlab/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "momlab/errors.hpp"

namespace momlab {

namespace {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

Vector singular_values(const Matrix& m) {
  if (m.size() == 0) return Vector(0);
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues();
}

std::string str(int v) { return std::to_string(v); }

}  // namespace

int numerical_rank(const Eigen::VectorXd& singular_values, double tol) {
  if (singular_values.size() == 0) return 0;
  const double smax = singular_values.maxCoeff();
  if (!(smax > 0.0)) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < singular_values.size(); ++i) {
    if (singular_values[i] > tol * smax) ++r;
  }
  return r;
}

FlatnessReport check_flatness(const PseudoMomentSequence& y, int d, int r, double tol) {
  if (r < 0 || r > d) throw InvalidArgument("flatness shift must satisfy 0 <= r <= d");
  if (2 * d > y.order()) {
    throw DegreeOverflow("flatness at order " + str(d) + " needs moments of degree " + str(2 * d));
  }
  FlatnessReport rep;
  rep.d = d;
  rep.r = r;
  rep.tol = tol;
  rep.singular_values_full = singular_values(moment_matrix(y, d));
  rep.singular_values_truncated = singular_values(moment_matrix(y, d - r));
  rep.rank_full = numerical_rank(rep.singular_values_full, tol);
  rep.rank_truncated = numerical_rank(rep.singular_values_truncated, tol);
  rep.is_flat = rep.rank_full == rep.rank_truncated;
  return rep;
}

FlatnessReport flatness_at_level(const PseudoMomentSequence& y, int level, int r_degree,
                                 double tol) {
  const int order = (level + 1) / 2;
  const int shift = (r_degree + 1) / 2;
  return check_flatness(y, order, std::min(shift, order), tol);
}

AtomicMeasure extract_atoms(const PseudoMomentSequence& y, int d, const ExtractionOptions& opts) {
  if (d < 1) throw InvalidArgument("extraction needs order d >= 1");
  const FlatnessReport flat = check_flatness(y, d, 1, opts.rank_tol);
  if (!flat.is_flat) {
    throw NumericalError("moment matrix is not flat: rank " + str(flat.rank_full) +
                         " at order " + str(d) + " vs " + str(flat.rank_truncated) +
                         " at order " + str(d - 1));
  }
  const int n = y.dim();
  const int rank = flat.rank_full;
  const MonomialBasis basis(n, d);
  const auto lower = static_cast<Eigen::Index>(basis.prefix_size(d - 1));

  // M = V V^T with V spanning the column space.
  const Matrix m = moment_matrix(y, d);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  Matrix v(m.rows(), rank);
  for (int k = 0; k < rank; ++k) {
    const Eigen::Index col = m.rows() - 1 - k;
    v.col(k) = eig.eigenvectors().col(col) * std::sqrt(std::max(eig.eigenvalues()[col], 0.0));
  }

  // Well-conditioned rows of degree <= d-1 act as the coordinate basis w.
  Eigen::ColPivHouseholderQR<Matrix> qr(v.topRows(lower).transpose());
  std::vector<int> pivots(rank);
  for (int k = 0; k < rank; ++k) pivots[k] = qr.colsPermutation().indices()[k];
  std::sort(pivots.begin(), pivots.end());
  Matrix v_piv(rank, rank);
  for (int k = 0; k < rank; ++k) v_piv.row(k) = v.row(pivots[k]);
  // Row alpha of U expresses x^alpha in terms of w at every atom.
  const Matrix u = v_piv.transpose().fullPivLu().solve(v.transpose()).transpose();

  std::vector<Matrix> shifts(n, Matrix(rank, rank));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < rank; ++k) {
      const long row = basis.index_of(basis[pivots[k]] + MultiIndex::unit(n, i));
      shifts[i].row(k) = u.row(row);
    }
  }

  double scale = 1.0;
  for (const auto& s : shifts) scale = std::max(scale, s.norm());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double c = (shifts[i] * shifts[j] - shifts[j] * shifts[i]).norm();
      if (c > opts.commutation_tol * scale * scale) {
        throw NumericalError("shift matrices do not commute (residual " + std::to_string(c) + ")");
      }
    }
  }

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Point> atoms;
  std::string failure = "no attempt made";
  for (int attempt = 0; attempt < opts.max_attempts && atoms.empty(); ++attempt) {
    Vector coef(n);
    for (int i = 0; i < n; ++i) coef[i] = 0.1 + unif(rng);
    coef /= coef.sum();
    Matrix combo = Matrix::Zero(rank, rank);
    for (int i = 0; i < n; ++i) combo += coef[i] * shifts[i];
    Eigen::RealSchur<Matrix> schur(combo);
    if (schur.info() != Eigen::Success) {
      failure = "Schur decomposition failed";
      continue;
    }
    const Matrix& q = schur.matrixU();
    const Matrix& t = schur.matrixT();
    bool complex_pair = false;
    for (int k = 0; k + 1 < rank; ++k) {
      if (std::abs(t(k + 1, k)) > 1e-10 * std::max(1.0, t.norm())) complex_pair = true;
    }
    if (complex_pair) {
      failure = "combination has complex eigenvalues";
      continue;
    }
    std::vector<Point> found(rank, Point(n));
    bool triangular = true;
    for (int i = 0; i < n; ++i) {
      const Matrix ti = q.transpose() * shifts[i] * q;
      const double below = ti.triangularView<Eigen::StrictlyLower>().toDenseMatrix().norm();
      if (below > 1e-6 * std::max(1.0, ti.norm())) triangular = false;
      for (int k = 0; k < rank; ++k) found[k][i] = ti(k, k);
    }
    if (!triangular) {
      failure = "Schur vectors do not triangularize every shift matrix";
      continue;
    }
    atoms = std::move(found);
  }
  if (atoms.empty()) throw NumericalError("joint diagonalization failed: " + failure);

  std::sort(atoms.begin(), atoms.end(), [](const Point& a, const Point& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });

  Matrix vander(basis.size(), rank);
  for (int k = 0; k < rank; ++k) {
    vander.col(k) = basis.evaluate(std::span<const double>(atoms[k].data(), n));
  }
  const Vector sv = singular_values(vander);
  if (sv.minCoeff() < 1e-12 * sv.maxCoeff()) {
    throw NumericalError("Vandermonde system is ill-conditioned (atoms nearly coincide)");
  }
  const Vector w = vander.colPivHouseholderQr().solve(y.values().head(basis.size()));

  AtomicMeasure mu;
  for (int k = 0; k < rank; ++k) mu.add(atoms[k], w[k]);
  return mu;
}

Point candidate_minimizer(const PseudoMomentSequence& y, const AffineScale& scale) {
  const int n = y.dim();
  if (y.order() < 1) throw DegreeOverflow("candidate minimizer needs first moments");
  Point u(n);
  for (int i = 0; i < n; ++i) u[i] = y[MultiIndex::unit(n, i)];
  return scale.to_original(u);
}

AtomicMeasure tchakaloff_prune(const AtomicMeasure& mu, int t) {
  mu.validate();
  if (t < 0) throw InvalidArgument("negative basis degree");
  if (mu.size() == 0) return mu;
  const int n = mu.dim();
  const MonomialBasis basis(n, t);
  const std::size_t l = basis.size();
  if (mu.size() <= l) return mu;

  std::vector<Point> atoms = mu.atoms;
  std::vector<double> w = mu.weights;
  for (double wi : w) {
    if (wi < 0.0) throw InvalidArgument("pruning needs nonnegative weights");
  }
  // Exact-zero weights carry no moments.
  for (std::size_t j = atoms.size(); j-- > 0;) {
    if (w[j] == 0.0) {
      atoms.erase(atoms.begin() + static_cast<long>(j));
      w.erase(w.begin() + static_cast<long>(j));
    }
  }
  while (atoms.size() > l) {
    const auto k = static_cast<Eigen::Index>(atoms.size());
    Matrix a(static_cast<Eigen::Index>(l), k);
    for (Eigen::Index j = 0; j < k; ++j) {
      a.col(j) = basis.evaluate(std::span<const double>(atoms[j].data(), n));
    }
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
    Vector v = svd.matrixV().col(k - 1);
    if (v.maxCoeff() <= 0.0) v = -v;
    // Largest theta keeping w - theta v >= 0; the argmin weight drops out.
    Eigen::Index drop = -1;
    double theta = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (v[j] > 0.0) {
        const double ratio = w[j] / v[j];
        if (drop < 0 || ratio < theta) {
          theta = ratio;
          drop = j;
        }
      }
    }
    for (Eigen::Index j = 0; j < k; ++j) w[j] = std::max(0.0, w[j] - theta * v[j]);
    w[drop] = 0.0;
    for (std::size_t j = atoms.size(); j-- > 0;) {
      if (w[j] == 0.0) {
        atoms.erase(atoms.begin() + static_cast<long>(j));
        w.erase(w.begin() + static_cast<long>(j));
      }
    }
  }
  AtomicMeasure out;
  for (std::size_t j = 0; j < atoms.size(); ++j) out.add(atoms[j], w[j]);
  return out;
}

RankProfile rank_profile(const AtomicMeasure& mu, int d_max, double tol) {
  if (d_max < 0) throw InvalidArgument("negative degree");
  const auto y = PseudoMomentSequence::from_measure(mu, 2 * d_max);
  RankProfile p;
  for (int d = 0; d <= d_max; ++d) {
    p.ranks.push_back(numerical_rank(singular_values(moment_matrix(y, d)), tol));
    if (p.stabilization_degree < 0 && p.ranks.back() == static_cast<int>(mu.size())) {
      p.stabilization_degree = d;
    }
  }
  return p;
}

}  // namespace momlab
