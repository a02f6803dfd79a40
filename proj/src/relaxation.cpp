#include "relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "momlab/errors.hpp"

namespace momlab::detail {

namespace {

constexpr double kPairTol = 1e-12;

bool is_negation(const Polynomial& a, const Polynomial& b) {
  const double scale = std::max(coeff_norm(a), coeff_norm(b));
  return scale > 0.0 && coeff_norm(a + b) <= kPairTol * scale;
}

int variable(const BuiltRelaxation& b, const MultiIndex& alpha) {
  auto it = b.index.find(alpha);
  if (it == b.index.end()) {
    throw DegreeOverflow("monomial of degree " + std::to_string(alpha.degree()) +
                         " lies outside the relaxation");
  }
  return it->second;
}

void add_localizing_block(BuiltRelaxation& b, const Polynomial& g,
                          const std::vector<MultiIndex>& basis, int block) {
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i; j < basis.size(); ++j) {
      const MultiIndex ab = basis[i] + basis[j];
      for (const auto& [gamma, c] : g.terms()) {
        b.sdp.add_entry(variable(b, ab + gamma), block, static_cast<int>(i),
                        static_cast<int>(j), c);
      }
    }
  }
}

Eigen::VectorXd row_of(const BuiltRelaxation& b, const Polynomial& p) {
  Eigen::VectorXd row = Eigen::VectorXd::Zero(b.sdp.num_vars);
  for (const auto& [a, c] : p.terms()) row[variable(b, a)] += c;
  return row;
}

// Splits gamma = a + b with |a|, |b| <= t (requires |gamma| <= 2t).
std::pair<MultiIndex, MultiIndex> split(const MultiIndex& gamma, int t) {
  std::vector<int> a(gamma.dim(), 0);
  int need = std::min(gamma.degree(), t);
  for (int i = 0; i < gamma.dim() && need > 0; ++i) {
    const int take = std::min(gamma[i], need);
    a[i] = take;
    need -= take;
  }
  MultiIndex ma(a);
  std::vector<int> rest(gamma.exponents());
  for (int i = 0; i < gamma.dim(); ++i) rest[i] -= a[i];
  return {ma, MultiIndex(rest)};
}

}  // namespace

BuiltRelaxation build(const RelaxationSpec& spec) {
  const int n = spec.objective.dim();
  const int D = spec.degree;
  if (D < 0) throw InvalidArgument("negative truncation degree");
  if (spec.normalizer.dim() != n) throw DimensionMismatch("normalizer dimension mismatch");
  for (const auto& g : spec.constraints) {
    if (g.dim() != n) throw DimensionMismatch("constraint dimension mismatch");
  }
  if (spec.gram_basis && !spec.constraints.empty()) {
    throw InvalidArgument("a custom Gram basis admits no localizing blocks");
  }

  BuiltRelaxation b;
  b.dim = n;
  if (spec.gram_basis) {
    b.gram_basis = *spec.gram_basis;
    std::set<MultiIndex, GradedLess> vars;
    for (const auto& x : b.gram_basis) {
      for (const auto& y : b.gram_basis) vars.insert(x + y);
    }
    for (const auto& [a, c] : spec.objective.terms()) vars.insert(a);
    for (const auto& [a, c] : spec.normalizer.terms()) vars.insert(a);
    b.variables.assign(vars.begin(), vars.end());
  } else {
    if (spec.objective.degree() > D) {
      throw DegreeOverflow("objective degree " + std::to_string(spec.objective.degree()) +
                           " exceeds truncation degree " + std::to_string(D));
    }
    b.variables = MonomialBasis(n, D).elements();
    b.gram_basis = MonomialBasis(n, D / 2).elements();
  }
  for (std::size_t k = 0; k < b.variables.size(); ++k) {
    b.index.emplace(b.variables[k], static_cast<int>(k));
  }

  b.sdp = SdpProblem(static_cast<int>(b.variables.size()));
  for (const auto& [a, c] : spec.objective.terms()) b.sdp.cost[variable(b, a)] += c;

  b.moment_block = b.sdp.add_block(static_cast<int>(b.gram_basis.size()));
  add_localizing_block(b, Polynomial::constant(n, 1.0), b.gram_basis, b.moment_block);

  b.normalizer_row = 0;
  b.sdp.add_equality(row_of(b, spec.normalizer), 1.0);

  const int m = static_cast<int>(spec.constraints.size());
  b.slots.assign(m, ConstraintSlot{});
  for (int i = 0; i < m; ++i) {
    if (b.slots[i].kind != ConstraintSlot::Kind::Skipped || b.slots[i].partner >= 0) continue;
    const Polynomial& g = spec.constraints[i];
    if (g.is_zero() || g.degree() > D) continue;
    const int t = (D - g.degree()) / 2;

    int partner = -1;
    for (int j = i + 1; j < m; ++j) {
      if (b.slots[j].partner < 0 && b.slots[j].kind == ConstraintSlot::Kind::Skipped &&
          is_negation(g, spec.constraints[j])) {
        partner = j;
        break;
      }
    }

    ConstraintSlot& slot = b.slots[i];
    slot.order = t;
    if (partner >= 0) {
      slot.kind = ConstraintSlot::Kind::EqualityFirst;
      slot.partner = partner;
      slot.first_row = static_cast<int>(b.sdp.eq_matrix.rows());
      slot.gammas = MonomialBasis(n, 2 * t).elements();
      for (const auto& gamma : slot.gammas) {
        b.sdp.add_equality(row_of(b, g * Polynomial::monomial(gamma)), 0.0);
      }
      ConstraintSlot& other = b.slots[partner];
      other.kind = ConstraintSlot::Kind::EqualitySecond;
      other.partner = i;
      other.order = t;
    } else {
      slot.kind = ConstraintSlot::Kind::Block;
      const auto basis = MonomialBasis(n, t).elements();
      slot.block = b.sdp.add_block(static_cast<int>(basis.size()));
      add_localizing_block(b, g, basis, slot.block);
    }
  }
  return b;
}

SosCertificate certificate(const RelaxationSpec& spec, const BuiltRelaxation& built,
                           const SdpSolution& sol) {
  const int n = built.dim;
  SosCertificate cert;
  cert.s = sol.eq_dual[built.normalizer_row];
  cert.target = spec.objective;
  cert.normalizer = spec.normalizer;

  cert.multipliers.push_back(Polynomial::constant(n, 1.0));
  cert.bases.push_back(built.gram_basis);
  cert.grams.push_back(extract_dual_gram(sol, built.moment_block));

  const int m = static_cast<int>(spec.constraints.size());
  std::vector<Eigen::MatrixXd> shifted(m);
  for (int i = 0; i < m; ++i) {
    const auto& slot = built.slots[i];
    cert.multipliers.push_back(spec.constraints[i]);
    using Kind = ConstraintSlot::Kind;
    if (slot.kind == Kind::Skipped) {
      cert.bases.emplace_back();
      cert.grams.emplace_back(0, 0);
      continue;
    }
    const auto basis = MonomialBasis(n, slot.order).elements();
    cert.bases.push_back(basis);
    if (slot.kind == Kind::Block) {
      cert.grams.push_back(extract_dual_gram(sol, slot.block));
    } else if (slot.kind == Kind::EqualityFirst) {
      // psi = sum_gamma lambda_gamma X^gamma written as v^T Lambda v, then
      // psi * h = (Lambda + cI) * h + cI * (-h).
      const MonomialBasis index(n, slot.order);
      const auto size = static_cast<Eigen::Index>(basis.size());
      Eigen::MatrixXd lambda = Eigen::MatrixXd::Zero(size, size);
      for (std::size_t k = 0; k < slot.gammas.size(); ++k) {
        const double v = sol.eq_dual[slot.first_row + static_cast<Eigen::Index>(k)];
        const auto [a, b] = split(slot.gammas[k], slot.order);
        const long ia = index.index_of(a);
        const long ib = index.index_of(b);
        lambda(ia, ib) += 0.5 * v;
        lambda(ib, ia) += 0.5 * v;
      }
      const double lmin =
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(lambda, Eigen::EigenvaluesOnly)
              .eigenvalues()
              .minCoeff();
      const double c = std::max(0.0, -lmin);
      cert.grams.push_back(lambda + c * Eigen::MatrixXd::Identity(size, size));
      shifted[slot.partner] = c * Eigen::MatrixXd::Identity(size, size);
    } else {
      cert.grams.push_back(shifted[i]);
    }
  }
  cert.residual = cert.compute_residual();
  return cert;
}

}  // namespace momlab::detail
