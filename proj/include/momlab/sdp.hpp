#pragma once

// Dense primal-dual interior-point solver for block-diagonal LMIs
//
//   minimize    c^T x
//   subject to  S_k(x) = F_k0 + sum_i x_i F_ki  PSD  for every block k,
//               B x = b.
//
// The dual program is
//
//   maximize    b^T lambda - sum_k <F_k0, X_k>
//   subject to  sum_k <F_ki, X_k> + (B^T lambda)_i = c_i,  X_k PSD.

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace momlab {

struct SdpProblem {
  // One coefficient of F_{block,var}; var == kConstant addresses F_block0.
  // Only row <= col is stored; the symmetric entry is implied.
  struct Entry {
    int var;
    int block;
    int row;
    int col;
    double value;
  };
  static constexpr int kConstant = -1;

  int num_vars = 0;
  std::vector<int> block_sizes;
  std::vector<Entry> entries;
  Eigen::VectorXd cost;
  Eigen::MatrixXd eq_matrix;
  Eigen::VectorXd eq_rhs;

  SdpProblem() = default;
  explicit SdpProblem(int vars);

  int add_block(int size);
  // Adds value to F_{block,var}(row, col) and its mirror.
  void add_entry(int var, int block, int row, int col, double value);
  void add_equality(const Eigen::VectorXd& row, double rhs);

  void validate() const;
};

enum class SdpStatus { Optimal, Infeasible, MaxIter, IllConditioned };

const char* to_string(SdpStatus s);

struct SdpOptions {
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iter = 200;
  // Once the tolerances are met, keep iterating toward polish times them
  // and return the last iterate that met them; 0 stops at once.
  double polish = 1e-3;
  std::ostream* log = nullptr;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::IllConditioned;
  Eigen::VectorXd x;
  // Dual matrix per block.
  std::vector<Eigen::MatrixXd> dual_blocks;
  Eigen::VectorXd eq_dual;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  // |primal - dual| / (1 + |primal| + |dual|)
  double gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  std::string message;

  bool optimal() const { return status == SdpStatus::Optimal; }
};

SdpSolution solve(const SdpProblem& problem, const SdpOptions& opts = {});

// S_k(x) for every block.
std::vector<Eigen::MatrixXd> assemble_blocks(const SdpProblem& problem, const Eigen::VectorXd& x);

// The dual matrix of a block with negative eigenvalues floored at 0.
// Throws SolverFailure unless the solution is optimal.
Eigen::MatrixXd extract_dual_gram(const SdpSolution& sol, int block);

// SDPA sparse format. Equalities are written as pairs of 1x1 diagonal
// blocks (b_j - B_j x >= 0 and B_j x - b_j >= 0).
void write_sdpa(const SdpProblem& problem, std::ostream& os);
SdpProblem read_sdpa(std::istream& is);

}  // namespace momlab
