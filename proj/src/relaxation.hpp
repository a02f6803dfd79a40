#pragma once

// Generic assembler shared by the relaxations, membership tests and the
// SoS-convexity check:
//
//   minimize L(objective)  s.t.  L(normalizer) = 1,
//                                moment block over the Gram basis psd,
//                                localizing blocks psd,
//                                L(h X^gamma) = 0 for detected pairs (h, -h).

#include <optional>
#include <unordered_map>
#include <vector>

#include "momlab/hierarchy.hpp"
#include "momlab/poly.hpp"
#include "momlab/sdp.hpp"

namespace momlab::detail {

struct RelaxationSpec {
  Polynomial objective{1};
  std::vector<Polynomial> constraints;
  int degree = 0;
  Polynomial normalizer{1};
  // Replaces the monomials of degree <= degree/2 for the moment block; no
  // localizing blocks are allowed with it.
  std::optional<std::vector<MultiIndex>> gram_basis;
};

struct ConstraintSlot {
  enum class Kind { Block, EqualityFirst, EqualitySecond, Skipped };
  Kind kind = Kind::Skipped;
  int block = -1;
  int order = -1;
  int partner = -1;
  int first_row = -1;
  std::vector<MultiIndex> gammas;
};

struct BuiltRelaxation {
  SdpProblem sdp;
  int dim = 1;
  std::vector<MultiIndex> variables;
  std::unordered_map<MultiIndex, int, MultiIndexHash> index;
  std::vector<MultiIndex> gram_basis;
  int moment_block = 0;
  int normalizer_row = 0;
  std::vector<ConstraintSlot> slots;
};

BuiltRelaxation build(const RelaxationSpec& spec);

// Certificate for objective - s * normalizer from an optimal solve.
SosCertificate certificate(const RelaxationSpec& spec, const BuiltRelaxation& built,
                           const SdpSolution& sol);

}  // namespace momlab::detail
