#pragma once

// Flatness tests, atom extraction from flat moment matrices, linear
// candidate minimizers and Caratheodory pruning.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "momlab/cone.hpp"
#include "momlab/measure.hpp"

namespace momlab {

inline constexpr double kDefaultRankTol = 1e-6;

// Number of singular values above tol * sigma_max.
int numerical_rank(const Eigen::VectorXd& singular_values, double tol);

struct FlatnessReport {
  int d = 0;
  int r = 0;
  int rank_full = 0;
  int rank_truncated = 0;
  Eigen::VectorXd singular_values_full;
  Eigen::VectorXd singular_values_truncated;
  bool is_flat = false;
  double tol = kDefaultRankTol;
};

// Compares rank M_d with rank M_{d-r} (moment-matrix orders, so y must
// cover degree 2d).
FlatnessReport check_flatness(const PseudoMomentSequence& y, int d, int r,
                              double tol = kDefaultRankTol);

// Flatness of the pseudo-moments of relaxation level `level` for
// constraints of degree up to r_degree: orders ceil(level/2) and
// ceil(level/2) - ceil(r_degree/2).
FlatnessReport flatness_at_level(const PseudoMomentSequence& y, int level, int r_degree,
                                 double tol = kDefaultRankTol);

struct ExtractionOptions {
  double rank_tol = kDefaultRankTol;
  std::uint64_t seed = 20240611;
  int max_attempts = 5;
  double commutation_tol = 1e-6;
};

// Atoms and weights of the measure represented by a flat M_d. Throws
// NumericalError when M_d is not flat against M_{d-1} or when the shift
// matrices cannot be diagonalized jointly.
AtomicMeasure extract_atoms(const PseudoMomentSequence& y, int d,
                            const ExtractionOptions& opts = {});

// (y_{e_1}, ..., y_{e_n}) mapped through the scale record.
Point candidate_minimizer(const PseudoMomentSequence& y, const AffineScale& scale);

// At most r(n, t) atoms of mu with nonnegative weights and the same
// moments of degree <= t.
AtomicMeasure tchakaloff_prune(const AtomicMeasure& mu, int t);

struct RankProfile {
  std::vector<int> ranks;
  // First d with rank equal to the atom count, or -1.
  int stabilization_degree = -1;
};

RankProfile rank_profile(const AtomicMeasure& mu, int d_max, double tol = kDefaultRankTol);

}  // namespace momlab
