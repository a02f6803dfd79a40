#pragma once

// Problem corpus, grid oracles, empirical rate fits and reports.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "momlab/cone.hpp"
#include "momlab/sdp.hpp"
#include "momlab/support.hpp"
#include "momlab/upperbound.hpp"

namespace momlab {

struct OracleResult {
  double f_star = 0.0;
  Point x_star;
  // Grid points within 1e-6 of the minimum.
  std::vector<Point> s_star;
  int resolution = 0;
  std::size_t feasible_points = 0;
};

inline constexpr double kOracleFeasTol = 1e-9;
inline constexpr double kOracleSetTol = 1e-6;

// Default grid resolution per axis: 201 for n <= 2, 61 for n = 3.
int default_oracle_resolution(int n);

// Grid minimum over box intersected with K, feasibility p_i >= -1e-9. The
// problem is taken in its own coordinates. Throws InvalidArgument for
// n > 3 and NumericalError when no grid point is feasible.
OracleResult brute_force_oracle(const SemialgebraicProblem& prob, const GridBox& box,
                                int resolution = 0);

struct RateFit {
  bool fitted = false;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int points_used = 0;
  std::optional<int> finite_convergence_level;
  std::string note;
};

// Least squares on (log d, log gap). Gaps <= zero_tol count as finite
// convergence and are excluded; the first such level is reported. Throws
// InvalidArgument when neither a fit (3 positive gaps) nor finite
// convergence is available.
RateFit fit_rate(const std::vector<int>& levels, const std::vector<double>& gaps,
                 double zero_tol = 1e-9);

inline constexpr std::size_t kMaxDistanceSamples = 400;

// min over probability weights w on the samples of
// max_{1 <= |alpha| <= r} |y_alpha - sum_j w_j x_j^alpha|. Sample sets above
// kMaxDistanceSamples are thinned with a fixed stride.
double moment_distance_to_optimal(const PseudoMomentSequence& y, const std::vector<Point>& samples,
                                  int r);

struct CorpusEntry {
  std::string id;
  SemialgebraicProblem problem;
  bool normalize = false;
  std::vector<int> levels;
  std::vector<int> upper_levels;
  std::optional<ReferenceMeasure> measure;
  GridBox oracle_box;
  int oracle_resolution = 0;
  bool unique_minimizer = false;
  bool convex_objective = false;
  bool convex_set = false;
};

struct SuiteConfig {
  SdpOptions sdp;
  // Moment truncation for the distance to M(S*).
  int distance_order = 2;
  double rank_tol = 1e-6;
  // Gap below which a level counts as exact in the rate fits.
  double zero_tol = 1e-6;
};

struct LevelRecord {
  int d = 0;
  std::optional<double> m_d;
  std::optional<double> f_d;
  std::optional<double> u_d;
  std::optional<double> est_err;
  std::optional<double> upper_est_err;
  std::optional<double> mom_dist;
  std::optional<double> certificate_residual;
  std::optional<double> certificate_min_eig;
  std::optional<bool> flat;
  std::optional<double> upper_cost_gap;
  std::optional<bool> upper_estimator_feasible;
  std::string status;
  double seconds = 0.0;
};

struct RateReport {
  std::string id;
  int n = 0;
  bool unique_minimizer = false;
  OracleResult oracle;
  std::vector<LevelRecord> levels;
  std::optional<RateFit> lower_fit;
  std::optional<RateFit> upper_fit;
  std::optional<RateFit> estimator_fit;
  std::vector<std::string> violations;
  std::string error;
};

std::vector<RateReport> run_suite(const std::vector<CorpusEntry>& corpus, const SuiteConfig& config);

// problem,d,m_d,f_d,u_d,est_err,mom_dist,status
void write_report_csv(const std::vector<RateReport>& reports, std::ostream& os);
void write_summary_md(const std::vector<RateReport>& reports, std::ostream& os);

}  // namespace momlab
