#include <cctype>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "momlab/errors.hpp"
#include "momlab/sdp.hpp"

namespace momlab {

// SDPA reads: minimize c^T x s.t. sum_i F_i x_i - F_0 psd. Our constant
// term enters with the opposite sign.
void write_sdpa(const SdpProblem& problem, std::ostream& os) {
  problem.validate();
  const auto neq = problem.eq_matrix.rows();
  const std::size_t nblocks = problem.block_sizes.size() + (neq > 0 ? 1 : 0);
  os << "\"momlab SDP export\n";
  os << problem.num_vars << " = mDIM\n";
  os << nblocks << " = nBLOCK\n";
  for (std::size_t k = 0; k < problem.block_sizes.size(); ++k) {
    os << (k ? " " : "") << problem.block_sizes[k];
  }
  if (neq > 0) os << (problem.block_sizes.empty() ? "" : " ") << -2 * neq;
  os << " = bLOCKsTRUCT\n";
  os << std::setprecision(17);
  for (int i = 0; i < problem.num_vars; ++i) os << (i ? " " : "") << problem.cost[i];
  os << '\n';
  for (const auto& e : problem.entries) {
    const int mat = e.var == SdpProblem::kConstant ? 0 : e.var + 1;
    const double v = e.var == SdpProblem::kConstant ? -e.value : e.value;
    os << mat << ' ' << e.block + 1 << ' ' << e.row + 1 << ' ' << e.col + 1 << ' ' << v << '\n';
  }
  const int lp_block = static_cast<int>(problem.block_sizes.size()) + 1;
  for (Eigen::Index j = 0; j < neq; ++j) {
    const int up = static_cast<int>(2 * j + 1);
    const int down = up + 1;
    // B_j x - b_j >= 0 and b_j - B_j x >= 0
    if (problem.eq_rhs[j] != 0.0) {
      os << 0 << ' ' << lp_block << ' ' << up << ' ' << up << ' ' << problem.eq_rhs[j] << '\n';
      os << 0 << ' ' << lp_block << ' ' << down << ' ' << down << ' ' << -problem.eq_rhs[j] << '\n';
    }
    for (int i = 0; i < problem.num_vars; ++i) {
      const double b = problem.eq_matrix(j, i);
      if (b == 0.0) continue;
      os << i + 1 << ' ' << lp_block << ' ' << up << ' ' << up << ' ' << b << '\n';
      os << i + 1 << ' ' << lp_block << ' ' << down << ' ' << down << ' ' << -b << '\n';
    }
  }
}

namespace {

// Skips comment lines and turns SDPA punctuation into whitespace.
std::string strip_sdpa(std::istream& is) {
  std::string text, line;
  bool header = true;
  while (std::getline(is, line)) {
    if (header && (line.empty() || line[0] == '"' || line[0] == '*')) continue;
    header = false;
    const auto eq = line.find('=');
    if (eq != std::string::npos) line = line.substr(0, eq);
    for (char& ch : line) {
      if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') ch = ' ';
    }
    text += line;
    text += '\n';
  }
  return text;
}

}  // namespace

// Diagonal (negative-size) blocks come back as 1x1 blocks.
SdpProblem read_sdpa(std::istream& is) {
  std::istringstream in(strip_sdpa(is));
  int mdim = 0, nblock = 0;
  if (!(in >> mdim >> nblock) || mdim < 0 || nblock < 0) {
    throw InvalidArgument("malformed SDPA header");
  }
  std::vector<int> structure(nblock);
  for (int& s : structure) {
    if (!(in >> s) || s == 0) throw InvalidArgument("malformed SDPA block structure");
  }
  SdpProblem p(mdim);
  // first[k]: index of our first block for SDPA block k.
  std::vector<int> first(nblock);
  for (int k = 0; k < nblock; ++k) {
    first[k] = static_cast<int>(p.block_sizes.size());
    if (structure[k] > 0) {
      p.add_block(structure[k]);
    } else {
      for (int i = 0; i < -structure[k]; ++i) p.add_block(1);
    }
  }
  for (int i = 0; i < mdim; ++i) {
    if (!(in >> p.cost[i])) throw InvalidArgument("malformed SDPA cost vector");
  }
  int mat, blk, r, c;
  double v;
  while (in >> mat >> blk >> r >> c >> v) {
    if (mat < 0 || mat > mdim || blk < 1 || blk > nblock) {
      throw InvalidArgument("SDPA entry out of range");
    }
    const int var = mat == 0 ? SdpProblem::kConstant : mat - 1;
    const double value = mat == 0 ? -v : v;
    if (structure[blk - 1] > 0) {
      p.add_entry(var, first[blk - 1], r - 1, c - 1, value);
    } else {
      if (r != c) throw InvalidArgument("off-diagonal entry in a diagonal SDPA block");
      p.add_entry(var, first[blk - 1] + r - 1, 0, 0, value);
    }
  }
  if (!in.eof()) throw InvalidArgument("trailing garbage in SDPA data");
  return p;
}

}  // namespace momlab
