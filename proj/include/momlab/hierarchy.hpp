#pragma once

// Moment relaxations, SoS tightenings and Putinar certificates.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "momlab/cone.hpp"
#include "momlab/poly.hpp"
#include "momlab/sdp.hpp"

namespace momlab {

// target - s * normalizer = sum_i sigma_i * multiplier_i with
// sigma_i = v_i^T G_i v_i over the monomial list bases[i]; multiplier 0 is 1.
struct SosCertificate {
  double s = 0.0;
  Polynomial target{1};
  Polynomial normalizer{1};
  std::vector<Polynomial> multipliers;
  std::vector<std::vector<MultiIndex>> bases;
  std::vector<Eigen::MatrixXd> grams;
  double residual = 0.0;

  Polynomial sos(std::size_t i) const;
  // sum_i sigma_i * multiplier_i
  Polynomial expand() const;
  // ||target - s * normalizer - expand()||_coeff
  double compute_residual() const;
  double min_gram_eigenvalue() const;
};

// Truncation degree used at relaxation level d: odd levels round up.
int truncation_degree(int level);

struct RelaxationResult {
  int level = 0;
  int truncation = 0;
  double m_star = 0.0;
  double f_star = 0.0;
  PseudoMomentSequence pseudo_moments{1, 0};
  std::optional<SosCertificate> certificate;
  SdpStatus status = SdpStatus::IllConditioned;
  std::string message;
  int iterations = 0;
  double seconds = 0.0;

  bool ok() const { return status == SdpStatus::Optimal; }
};

// The SDP of level d in the problem's coordinates.
SdpProblem build_relaxation_sdp(const SemialgebraicProblem& prob, int d);

// Throws SolverFailure (annotated with the level) unless the SDP is solved.
RelaxationResult solve_moment_relaxation(const SemialgebraicProblem& prob, int d,
                                         const SdpOptions& opts = {});

std::pair<double, SosCertificate> solve_sos_tightening(const SemialgebraicProblem& prob, int d,
                                                       const SdpOptions& opts = {});

struct MembershipResult {
  bool member = false;
  // max t with q - t * e in Q_d(p), e the sum of squared basis monomials.
  double margin = 0.0;
  std::optional<SosCertificate> certificate;
  SdpStatus status = SdpStatus::IllConditioned;
  std::string message;
};

inline constexpr double kMembershipTol = 1e-7;

// Q_d(p) here bounds deg(sigma_i p_i) <= d literally. Throws SolverFailure
// only when the solver breaks down; "not a member" is a valid answer.
MembershipResult qmodule_membership(const Polynomial& q, const SemialgebraicProblem& prob, int d,
                                    const SdpOptions& opts = {});

// Smallest k <= d_max with 1 - p_i in Q_k(p) for every constraint.
std::optional<int> compute_d0(const SemialgebraicProblem& prob, int d_max,
                              const SdpOptions& opts = {});

// Levels d_min..d_max; a failed level is recorded with its status and the
// run continues.
std::vector<RelaxationResult> run_hierarchy(const SemialgebraicProblem& prob, int d_min,
                                            int d_max, const SdpOptions& opts = {});

// True when m_d* is nondecreasing within tol over the solved levels.
bool is_monotone(const std::vector<RelaxationResult>& results, double tol = 1e-6);

// L(X^alpha) in original coordinates, given pseudo-moments in normalized
// coordinates u with x = scale(u).
PseudoMomentSequence map_to_original(const PseudoMomentSequence& y, const AffineScale& scale);

}  // namespace momlab
