#include "momlab/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <string>

#include "momlab/errors.hpp"
#include "momlab/kernels.hpp"

namespace momlab {

SdpProblem::SdpProblem(int vars) : num_vars(vars), cost(Eigen::VectorXd::Zero(vars)) {
  if (vars < 0) throw InvalidArgument("negative variable count");
  eq_matrix.resize(0, vars);
}

int SdpProblem::add_block(int size) {
  if (size < 1) throw InvalidArgument("block size must be positive");
  block_sizes.push_back(size);
  return static_cast<int>(block_sizes.size()) - 1;
}

void SdpProblem::add_entry(int var, int block, int row, int col, double value) {
  if (var < kConstant || var >= num_vars) throw InvalidArgument("variable index out of range");
  if (block < 0 || block >= static_cast<int>(block_sizes.size())) {
    throw InvalidArgument("block index out of range");
  }
  const int size = block_sizes[block];
  if (row < 0 || col < 0 || row >= size || col >= size) {
    throw InvalidArgument("entry outside block");
  }
  if (value == 0.0) return;
  entries.push_back({var, block, std::min(row, col), std::max(row, col), value});
}

void SdpProblem::add_equality(const Eigen::VectorXd& row, double rhs) {
  if (row.size() != num_vars) throw DimensionMismatch("equality row length mismatch");
  const Eigen::Index k = eq_matrix.rows();
  eq_matrix.conservativeResize(k + 1, num_vars);
  eq_matrix.row(k) = row.transpose();
  eq_rhs.conservativeResize(k + 1);
  eq_rhs[k] = rhs;
}

void SdpProblem::validate() const {
  if (cost.size() != num_vars) throw DimensionMismatch("cost vector length mismatch");
  if (eq_matrix.rows() != eq_rhs.size()) throw DimensionMismatch("equality rhs length mismatch");
  if (eq_matrix.rows() > 0 && eq_matrix.cols() != num_vars) {
    throw DimensionMismatch("equality matrix width mismatch");
  }
  for (const auto& e : entries) {
    if (e.var < kConstant || e.var >= num_vars || e.block < 0 ||
        e.block >= static_cast<int>(block_sizes.size()) || e.row < 0 ||
        e.col >= block_sizes[e.block] || e.row > e.col) {
      throw InvalidArgument("malformed SDP entry");
    }
  }
}

const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::Optimal: return "Optimal";
    case SdpStatus::Infeasible: return "Infeasible";
    case SdpStatus::MaxIter: return "MaxIter";
    case SdpStatus::IllConditioned: return "IllConditioned";
  }
  return "?";
}

namespace {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Blocks = std::vector<Matrix>;

Blocks zero_blocks(const std::vector<int>& sizes) {
  Blocks b;
  b.reserve(sizes.size());
  for (int s : sizes) b.push_back(Matrix::Zero(s, s));
  return b;
}

double inner(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    s += kernels::dot(std::span<const double>(a[k].data(), a[k].size()),
                      std::span<const double>(b[k].data(), b[k].size()));
  }
  return s;
}

double frob(const Blocks& a) { return std::sqrt(inner(a, a)); }

void axpy(double alpha, const Blocks& x, Blocks& y) {
  for (std::size_t k = 0; k < x.size(); ++k) y[k] += alpha * x[k];
}

// Dense F_{k,var} for var = -1 .. num_vars-1 (index shifted by one).
std::vector<Blocks> dense_coefficients(const SdpProblem& p) {
  std::vector<Blocks> f(p.num_vars + 1, zero_blocks(p.block_sizes));
  for (const auto& e : p.entries) {
    Matrix& m = f[e.var + 1][e.block];
    m(e.row, e.col) += e.value;
    if (e.row != e.col) m(e.col, e.row) += e.value;
  }
  return f;
}

// Largest step a in (0, inf] keeping X + a dX positive semidefinite.
double max_step(const Blocks& x, const Blocks& dx) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < x.size(); ++k) {
    Eigen::LLT<Matrix> llt(x[k]);
    if (llt.info() != Eigen::Success) return 0.0;
    Matrix l_inv = llt.matrixL().solve(Matrix::Identity(x[k].rows(), x[k].cols()));
    Matrix w = l_inv * dx[k] * l_inv.transpose();
    w = 0.5 * (w + w.transpose());
    const double lmin =
        Eigen::SelfAdjointEigenSolver<Matrix>(w, Eigen::EigenvaluesOnly).eigenvalues()[0];
    if (lmin < 0.0) best = std::min(best, -1.0 / lmin);
  }
  return best;
}

double min_eigenvalue(const Blocks& b) {
  double lmin = std::numeric_limits<double>::infinity();
  for (const auto& m : b) {
    if (m.size() == 0) continue;
    lmin = std::min(lmin, Eigen::SelfAdjointEigenSolver<Matrix>(m, Eigen::EigenvaluesOnly)
                              .eigenvalues()[0]);
  }
  return lmin;
}

// The problem after removing equalities and directions invisible to every
// block: x = x0 + basis * w, S(x) = sum_j w_j A_j - C.
struct Reduced {
  Vector x0;
  Matrix basis;
  Blocks c;
  std::vector<Blocks> a;
  Vector cost;
  double cost_offset = 0.0;
};

struct ReductionResult {
  bool ok = true;
  std::string message;
  Reduced r;
};

ReductionResult reduce(const SdpProblem& p, const std::vector<Blocks>& f) {
  ReductionResult out;
  const int m = p.num_vars;
  Vector x0 = Vector::Zero(m);
  Matrix null_basis = Matrix::Identity(m, m);

  if (p.eq_matrix.rows() > 0) {
    Eigen::JacobiSVD<Matrix> svd(p.eq_matrix, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vector& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv[0] : 0.0;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv[i] > 1e-12 * smax) ++rank;
    }
    svd.setThreshold(1e-12);
    x0 = svd.solve(p.eq_rhs);
    const double resid = (p.eq_matrix * x0 - p.eq_rhs).norm();
    if (resid > 1e-9 * (1.0 + p.eq_rhs.norm())) {
      out.ok = false;
      out.message = "equality constraints are inconsistent";
      return out;
    }
    null_basis = svd.matrixV().rightCols(m - rank);
  }

  const int k = static_cast<int>(null_basis.cols());
  std::size_t total = 0;
  for (int s : p.block_sizes) total += static_cast<std::size_t>(s) * s;

  // Vectorized operator of the reduced variables; its right singular
  // vectors split visible and invisible directions.
  Matrix op(static_cast<Eigen::Index>(total), k);
  for (int j = 0; j < k; ++j) {
    Eigen::Index off = 0;
    for (std::size_t b = 0; b < p.block_sizes.size(); ++b) {
      Matrix blk = Matrix::Zero(p.block_sizes[b], p.block_sizes[b]);
      for (int i = 0; i < m; ++i) {
        if (null_basis(i, j) != 0.0) blk += null_basis(i, j) * f[i + 1][b];
      }
      op.col(j).segment(off, blk.size()) = Eigen::Map<const Vector>(blk.data(), blk.size());
      off += blk.size();
    }
  }

  Vector reduced_cost = null_basis.transpose() * p.cost;
  Matrix visible;
  if (k > 0 && total > 0) {
    Eigen::JacobiSVD<Matrix> svd(op, Eigen::ComputeFullV);
    const Vector& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv[0] : 0.0;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv[i] > 1e-10 * smax && sv[i] > 1e-14) ++rank;
    }
    const Matrix& v = svd.matrixV();
    if (rank < k) {
      const Vector along = v.rightCols(k - rank).transpose() * reduced_cost;
      if (along.norm() > 1e-9 * (1.0 + reduced_cost.norm())) {
        out.ok = false;
        out.message = "unbounded: the cost decreases along a direction that leaves every block unchanged";
        return out;
      }
    }
    visible = v.leftCols(rank);
  } else if (k > 0) {
    if (reduced_cost.norm() > 1e-9) {
      out.ok = false;
      out.message = "unbounded: no block depends on the free variables";
      return out;
    }
    visible.resize(k, 0);
  } else {
    visible.resize(0, 0);
  }

  Reduced& r = out.r;
  r.x0 = x0;
  r.basis = null_basis * visible;
  r.cost = r.basis.transpose() * p.cost;
  r.cost_offset = p.cost.dot(x0);
  r.c = f[0];
  for (int i = 0; i < m; ++i) {
    if (x0[i] != 0.0) axpy(x0[i], f[i + 1], r.c);
  }
  for (auto& blk : r.c) blk = -blk;
  r.a.assign(r.basis.cols(), zero_blocks(p.block_sizes));
  for (Eigen::Index j = 0; j < r.basis.cols(); ++j) {
    for (int i = 0; i < m; ++i) {
      if (r.basis(i, j) != 0.0) axpy(r.basis(i, j), f[i + 1], r.a[j]);
    }
  }
  return out;
}

Vector apply_op(const std::vector<Blocks>& a, const Blocks& x) {
  Vector out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = inner(a[j], x);
  return out;
}

Blocks apply_adjoint(const std::vector<Blocks>& a, const Vector& y, const std::vector<int>& sizes) {
  Blocks out = zero_blocks(sizes);
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (y[j] != 0.0) axpy(y[j], a[j], out);
  }
  return out;
}

void symmetrize(Blocks& b) {
  for (auto& m : b) m = 0.5 * (m + m.transpose()).eval();
}

constexpr int kMaxPolishIter = 25;

struct IpmResult {
  SdpStatus status = SdpStatus::MaxIter;
  std::string message;
  Vector y;
  Blocks x;
  int iterations = 0;
};

// Infeasible-start HKM path following with Mehrotra predictor-corrector on
//   (P) max C.X  s.t. A_j.X = a_j, X psd
//   (D) min a^T y s.t. Z = sum_j y_j A_j - C psd.
IpmResult run_ipm(const Reduced& r, const std::vector<int>& sizes, const SdpOptions& opts) {
  const auto& a_ops = r.a;
  const Vector& a = r.cost;
  const Blocks& c = r.c;
  const int m = static_cast<int>(a_ops.size());
  const int nb = static_cast<int>(sizes.size());
  double n_total = 0.0;
  for (int s : sizes) n_total += s;

  double max_a_norm = 0.0;
  for (const auto& aj : a_ops) max_a_norm = std::max(max_a_norm, frob(aj));
  const double c_norm = frob(c);
  const double a_norm = a.norm();

  IpmResult res;
  res.x = zero_blocks(sizes);
  Blocks z = zero_blocks(sizes);
  for (int k = 0; k < nb; ++k) {
    const double sk = std::sqrt(static_cast<double>(sizes[k]));
    double xi = std::max(10.0, sk);
    double eta = std::max({10.0, sk, c_norm});
    for (int j = 0; j < m; ++j) {
      const double ajk = a_ops[j][k].norm();
      xi = std::max(xi, sk * (1.0 + std::abs(a[j])) / (1.0 + ajk));
      eta = std::max(eta, ajk);
    }
    res.x[k].diagonal().setConstant(xi);
    z[k].diagonal().setConstant(eta);
  }
  res.y = Vector::Zero(m);
  const double x_scale0 = frob(res.x);

  double mu0 = -1.0, infeas0 = -1.0;
  // Last iterate meeting the tolerances; later failures fall back to it.
  std::optional<IpmResult> accepted;
  int polish_iters = 0;
  auto bail = [&](SdpStatus status, const char* message) {
    if (accepted) return *accepted;
    res.status = status;
    res.message = message;
    return res;
  };

  for (int iter = 0; iter <= opts.max_iter; ++iter) {
    res.iterations = iter;
    Blocks& x = res.x;
    Vector& y = res.y;

    Blocks rd = apply_adjoint(a_ops, y, sizes);
    for (int k = 0; k < nb; ++k) rd[k] -= c[k] + z[k];
    const Vector ax = apply_op(a_ops, x);
    const Vector rp = a - ax;

    const double pobj = a.dot(y) + r.cost_offset;
    const double dobj = inner(c, x) + r.cost_offset;
    const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    const double pinf = rp.norm() / (1.0 + a_norm);
    const double dinf = frob(rd) / (1.0 + c_norm);
    const double mu = inner(x, z) / n_total;

    if (opts.log) {
      *opts.log << "iter " << iter << " obj " << pobj << " dual " << dobj << " gap " << gap
                << " pinf " << pinf << " dinf " << dinf << " mu " << mu << '\n';
    }

    if (gap <= opts.gap_tol && pinf <= opts.feas_tol && dinf <= opts.feas_tol) {
      accepted = res;
      accepted->status = SdpStatus::Optimal;
      const double target = opts.polish;
      if (target <= 0.0 || (gap <= opts.gap_tol * target && pinf <= opts.feas_tol * target &&
                            dinf <= opts.feas_tol * target)) {
        return *accepted;
      }
      if (++polish_iters > kMaxPolishIter) return *accepted;
    }

    const double x_norm = frob(x);
    if (x_norm > 1e8 * x_scale0) {
      const double cx = inner(c, x);
      if (cx > 0.0 && ax.norm() <= 1e-7 * (1.0 + max_a_norm) * x_norm &&
          cx >= 1e-8 * (1.0 + c_norm) * x_norm) {
        return bail(SdpStatus::Infeasible, "infeasible: the linear matrix inequality has no solution");
      }
    }
    const double y_norm = y.norm();
    if (y_norm > 1e8) {
      const double ay = a.dot(y);
      Blocks diff = apply_adjoint(a_ops, y, sizes);
      for (int k = 0; k < nb; ++k) diff[k] -= z[k];
      if (ay < 0.0 && frob(diff) <= 1e-7 * (1.0 + max_a_norm) * y_norm) {
        return bail(SdpStatus::Infeasible, "unbounded: the objective decreases without bound");
      }
    }
    if (iter == opts.max_iter) break;
    const double infeas = std::max(pinf, dinf);
    if (mu0 < 0.0) {
      mu0 = mu;
      infeas0 = std::max(infeas, 1e-300);
    }

    Blocks z_inv(nb);
    for (int k = 0; k < nb; ++k) {
      Eigen::LLT<Matrix> llt(z[k]);
      if (llt.info() != Eigen::Success) {
        return bail(SdpStatus::IllConditioned, "dual slack lost positive definiteness");
      }
      z_inv[k] = llt.solve(Matrix::Identity(sizes[k], sizes[k]));
      z_inv[k] = 0.5 * (z_inv[k] + z_inv[k].transpose()).eval();
    }

    // Schur complement M_ij = <A_i, X A_j Z^-1> = <P_i, P_j> with
    // P_j = Lx^T A_j Lz^-T. Factoring the stacked P_j by QR avoids forming
    // M and squaring its condition number.
    std::size_t rows = 0;
    for (int s : sizes) rows += static_cast<std::size_t>(s) * s;
    Matrix p_stack(static_cast<Eigen::Index>(rows), m);
    {
      Eigen::Index off = 0;
      for (int k = 0; k < nb; ++k) {
        Eigen::LLT<Matrix> lx(x[k]);
        Eigen::LLT<Matrix> lz(z[k]);
        if (lx.info() != Eigen::Success) {
          return bail(SdpStatus::IllConditioned, "primal iterate lost positive definiteness");
        }
        const Matrix lxt = lx.matrixU();
        const Matrix lz_inv_t =
            lz.matrixL().solve(Matrix::Identity(sizes[k], sizes[k])).transpose();
        const Eigen::Index sz = static_cast<Eigen::Index>(sizes[k]) * sizes[k];
        for (int j = 0; j < m; ++j) {
          const Matrix pj = lxt * a_ops[j][k] * lz_inv_t;
          p_stack.col(j).segment(off, sz) = Eigen::Map<const Vector>(pj.data(), sz);
        }
        off += sz;
      }
    }
    Matrix schur_r;
    Eigen::LDLT<Matrix> schur_ldlt;
    bool use_qr = true;
    if (m > 0) {
      Eigen::HouseholderQR<Matrix> qr(p_stack);
      schur_r = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
      const Vector diag = schur_r.diagonal().cwiseAbs();
      if (!(diag.minCoeff() > 1e-15 * diag.maxCoeff())) {
        use_qr = false;
        const Matrix schur = p_stack.transpose() * p_stack;
        const double reg = 1e-12 * std::max(1.0, schur.diagonal().maxCoeff());
        schur_ldlt.compute(schur + reg * Matrix::Identity(m, m));
        if (schur_ldlt.info() != Eigen::Success) {
          return bail(SdpStatus::IllConditioned, "Schur complement is singular");
        }
      }
    }
    auto schur_solve = [&](const Vector& rhs) -> Vector {
      if (m == 0) return Vector(0);
      if (!use_qr) return schur_ldlt.solve(rhs);
      const Vector t = schur_r.transpose().triangularView<Eigen::Lower>().solve(rhs);
      return schur_r.triangularView<Eigen::Upper>().solve(t);
    };

    // X Rd Z^-1 is shared by predictor and corrector.
    Blocks x_rd_zinv(nb);
    for (int k = 0; k < nb; ++k) x_rd_zinv[k].noalias() = x[k] * rd[k] * z_inv[k];

    auto direction = [&](double sigma_mu, const Blocks* second_order, Vector& dy, Blocks& dx,
                         Blocks& dz) {
      Blocks t(nb);
      for (int k = 0; k < nb; ++k) {
        t[k] = sigma_mu * z_inv[k] - x[k] - x_rd_zinv[k];
        if (second_order) t[k] -= (*second_order)[k];
      }
      const Vector rhs = apply_op(a_ops, t) - rp;
      dy = schur_solve(rhs);
      dz = apply_adjoint(a_ops, dy, sizes);
      for (int k = 0; k < nb; ++k) dz[k] += rd[k];
      dx.resize(nb);
      for (int k = 0; k < nb; ++k) {
        dx[k] = sigma_mu * z_inv[k] - x[k] - x[k] * dz[k] * z_inv[k];
        if (second_order) dx[k] -= (*second_order)[k];
      }
      symmetrize(dx);
      // Iterative refinement against A dX = rp, keeping the HKM structure.
      for (int pass = 0; pass < 2 && m > 0; ++pass) {
        const Vector drift = apply_op(a_ops, dx) - rp;
        if (drift.norm() <= 1e-14 * (1.0 + rp.norm())) break;
        const Vector delta = schur_solve(drift);
        dy += delta;
        const Blocks dz_corr = apply_adjoint(a_ops, delta, sizes);
        for (int k = 0; k < nb; ++k) {
          dz[k] += dz_corr[k];
          dx[k] -= x[k] * dz_corr[k] * z_inv[k];
        }
        symmetrize(dx);
      }
      symmetrize(dz);
    };

    Vector dy_a;
    Blocks dx_a, dz_a;
    direction(0.0, nullptr, dy_a, dx_a, dz_a);
    const double ap_a = std::min(1.0, max_step(x, dx_a));
    const double ad_a = std::min(1.0, max_step(z, dz_a));
    Blocks x_trial = x, z_trial = z;
    axpy(ap_a, dx_a, x_trial);
    axpy(ad_a, dz_a, z_trial);
    const double mu_aff = inner(x_trial, z_trial) / n_total;
    double sigma = mu > 0.0 ? std::pow(std::max(mu_aff, 0.0) / mu, 3.0) : 0.0;
    sigma = std::clamp(sigma, 0.0, 1.0);
    // Keep the complementarity from outrunning the infeasibility, otherwise
    // the iterates hug the boundary and the steps stall.
    if (infeas > opts.feas_tol && infeas / infeas0 > 100.0 * mu / mu0) sigma = std::max(sigma, 0.5);

    Blocks second(nb);
    for (int k = 0; k < nb; ++k) second[k].noalias() = dx_a[k] * dz_a[k] * z_inv[k];
    Vector dy;
    Blocks dx, dz;
    direction(sigma * mu, &second, dy, dx, dz);

    const double gamma = 0.95;
    double ap = std::min(1.0, gamma * max_step(x, dx));
    double ad = std::min(1.0, gamma * max_step(z, dz));
    if (!std::isfinite(ap) || !std::isfinite(ad) || dy.hasNaN()) {
      return bail(SdpStatus::IllConditioned, "non-finite search direction");
    }
    if (ap < 1e-12 && ad < 1e-12) {
      return bail(SdpStatus::IllConditioned, "step length collapsed");
    }
    if (opts.log) *opts.log << "  sigma " << sigma << " step " << ap << ' ' << ad << '\n';
    axpy(ap, dx, x);
    symmetrize(x);
    y += ad * dy;
    axpy(ad, dz, z);
    symmetrize(z);
  }
  return bail(SdpStatus::MaxIter, "iteration limit reached");
}

}  // namespace

std::vector<Eigen::MatrixXd> assemble_blocks(const SdpProblem& problem, const Eigen::VectorXd& x) {
  if (x.size() != problem.num_vars) throw DimensionMismatch("point length mismatch");
  Blocks out = zero_blocks(problem.block_sizes);
  for (const auto& e : problem.entries) {
    const double v = e.value * (e.var == SdpProblem::kConstant ? 1.0 : x[e.var]);
    out[e.block](e.row, e.col) += v;
    if (e.row != e.col) out[e.block](e.col, e.row) += v;
  }
  return out;
}

SdpSolution solve(const SdpProblem& problem, const SdpOptions& opts) {
  problem.validate();
  const auto f = dense_coefficients(problem);
  SdpSolution sol;
  sol.dual_blocks = zero_blocks(problem.block_sizes);
  sol.eq_dual = Vector::Zero(problem.eq_matrix.rows());

  ReductionResult red = reduce(problem, f);
  if (!red.ok) {
    sol.status = SdpStatus::Infeasible;
    sol.message = red.message;
    sol.x = Vector::Zero(problem.num_vars);
    return sol;
  }
  const Reduced& r = red.r;

  IpmResult ipm;
  if (r.a.empty()) {
    // Every variable is pinned; only feasibility of the fixed point remains.
    ipm.y = Vector(0);
    ipm.x = zero_blocks(problem.block_sizes);
    Blocks s = r.c;
    for (auto& b : s) b = -b;
    ipm.status = min_eigenvalue(s) >= -opts.feas_tol ? SdpStatus::Optimal : SdpStatus::Infeasible;
    if (ipm.status == SdpStatus::Infeasible) ipm.message = "fixed point violates a block";
  } else {
    ipm = run_ipm(r, problem.block_sizes, opts);
  }

  sol.status = ipm.status;
  sol.message = ipm.message;
  sol.iterations = ipm.iterations;
  sol.x = r.x0 + r.basis * ipm.y;
  sol.dual_blocks = ipm.x;

  // Equality multipliers from B^T lambda = c - F*(X).
  Vector resid = problem.cost;
  for (int i = 0; i < problem.num_vars; ++i) resid[i] -= inner(f[i + 1], sol.dual_blocks);
  if (problem.eq_matrix.rows() > 0) {
    sol.eq_dual = problem.eq_matrix.transpose().completeOrthogonalDecomposition().solve(resid);
    resid -= problem.eq_matrix.transpose() * sol.eq_dual;
  }
  sol.dual_infeasibility = resid.norm() / (1.0 + problem.cost.norm());

  const Blocks s = assemble_blocks(problem, sol.x);
  const double lmin = min_eigenvalue(s);
  double eq_resid = 0.0;
  if (problem.eq_matrix.rows() > 0) {
    eq_resid = (problem.eq_matrix * sol.x - problem.eq_rhs).norm() / (1.0 + problem.eq_rhs.norm());
  }
  sol.primal_infeasibility = std::max(eq_resid, std::max(0.0, -lmin));
  sol.primal_objective = problem.cost.dot(sol.x);
  sol.dual_objective =
      (problem.eq_rhs.size() > 0 ? problem.eq_rhs.dot(sol.eq_dual) : 0.0) - inner(f[0], sol.dual_blocks);
  sol.gap = std::abs(sol.primal_objective - sol.dual_objective) /
            (1.0 + std::abs(sol.primal_objective) + std::abs(sol.dual_objective));

  if (sol.status == SdpStatus::Optimal && std::isfinite(lmin) && lmin < -opts.feas_tol) {
    sol.status = SdpStatus::IllConditioned;
    sol.message = "final point violates a block by " + std::to_string(-lmin);
  }
  return sol;
}

Eigen::MatrixXd extract_dual_gram(const SdpSolution& sol, int block) {
  if (!sol.optimal()) {
    throw SolverFailure(std::string("dual Gram requested from a ") + to_string(sol.status) +
                        " solution");
  }
  if (block < 0 || block >= static_cast<int>(sol.dual_blocks.size())) {
    throw InvalidArgument("block index out of range");
  }
  const Matrix& x = sol.dual_blocks[block];
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (x + x.transpose()));
  const Vector lam = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace momlab
