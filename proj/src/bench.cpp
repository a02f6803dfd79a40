#include "momlab/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "momlab/errors.hpp"
#include "momlab/extraction.hpp"
#include "momlab/hierarchy.hpp"
#include "momlab/support.hpp"

namespace momlab {

int default_oracle_resolution(int n) { return n <= 2 ? 201 : 61; }

OracleResult brute_force_oracle(const SemialgebraicProblem& prob, const GridBox& box,
                                int resolution) {
  prob.validate();
  const int n = prob.n;
  if (n > 3) throw InvalidArgument("grid oracle supports n <= 3");
  if (box.lower.size() != n) throw DimensionMismatch("oracle box dimension mismatch");
  if (resolution <= 0) resolution = default_oracle_resolution(n);
  if (resolution < 2) throw InvalidArgument("oracle resolution must be at least 2");

  const std::vector<double> coords = grid_coords(box, resolution);
  const std::size_t npts = coords.size() / n;
  const std::vector<double> fv = eval_points(prob.objective, coords, npts);
  std::vector<char> feasible(npts, 1);
  for (const auto& p : prob.all_constraints()) {
    const std::vector<double> pv = eval_points(p, coords, npts);
    for (std::size_t k = 0; k < npts; ++k) {
      if (pv[k] < -kOracleFeasTol) feasible[k] = 0;
    }
  }

  OracleResult out;
  out.resolution = resolution;
  out.f_star = std::numeric_limits<double>::infinity();
  std::size_t best = 0;
  for (std::size_t k = 0; k < npts; ++k) {
    if (!feasible[k]) continue;
    ++out.feasible_points;
    if (fv[k] < out.f_star) {
      out.f_star = fv[k];
      best = k;
    }
  }
  if (out.feasible_points == 0) {
    throw NumericalError("no feasible grid point; K misses the grid or is empty");
  }
  auto point = [&](std::size_t k) {
    Point x(n);
    for (int i = 0; i < n; ++i) x[i] = coords[i * npts + k];
    return x;
  };
  out.x_star = point(best);
  for (std::size_t k = 0; k < npts; ++k) {
    if (feasible[k] && fv[k] <= out.f_star + kOracleSetTol) out.s_star.push_back(point(k));
  }
  return out;
}

RateFit fit_rate(const std::vector<int>& levels, const std::vector<double>& gaps, double zero_tol) {
  if (levels.size() != gaps.size()) throw DimensionMismatch("levels and gaps differ in length");
  RateFit fit;
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (!std::isfinite(gaps[k])) continue;
    if (gaps[k] <= zero_tol) {
      if (!fit.finite_convergence_level) fit.finite_convergence_level = levels[k];
      continue;
    }
    if (levels[k] <= 0) continue;
    lx.push_back(std::log(static_cast<double>(levels[k])));
    ly.push_back(std::log(gaps[k]));
  }
  fit.points_used = static_cast<int>(lx.size());
  if (fit.finite_convergence_level) {
    fit.note = "finite convergence at level " + std::to_string(*fit.finite_convergence_level);
  }
  if (lx.size() < 3) {
    if (fit.finite_convergence_level) return fit;
    throw InvalidArgument("rate fit needs at least 3 positive gaps, got " +
                          std::to_string(lx.size()));
  }
  const auto m = static_cast<double>(lx.size());
  double sx = 0, sy = 0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sx += lx[k];
    sy += ly[k];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
    syy += (ly[k] - my) * (ly[k] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("rate fit needs at least two distinct levels");
  fit.fitted = true;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

double moment_distance_to_optimal(const PseudoMomentSequence& y, const std::vector<Point>& samples,
                                  int r) {
  if (samples.empty()) throw InvalidArgument("empty optimal set sample");
  if (r < 1) throw InvalidArgument("distance order must be positive");
  if (r > y.order()) throw DegreeOverflow("pseudo-moments do not cover the distance order");
  std::vector<Point> pts;
  const std::size_t stride = (samples.size() + kMaxDistanceSamples - 1) / kMaxDistanceSamples;
  for (std::size_t k = 0; k < samples.size(); k += stride) pts.push_back(samples[k]);

  const MonomialBasis basis(y.dim(), r);
  // Row 0 (the mass) is matched exactly by the simplex constraint.
  const auto rows = static_cast<Eigen::Index>(basis.size()) - 1;
  Eigen::MatrixXd a(rows, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const Eigen::VectorXd v = basis.evaluate(std::span<const double>(pts[j].data(), pts[j].size()));
    a.col(static_cast<Eigen::Index>(j)) = v.tail(rows);
  }
  const Eigen::VectorXd target = y.values().segment(1, rows);
  return simplex_fit(a, target).distance;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

double nearest(const Point& x, const std::vector<Point>& set) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : set) best = std::min(best, (x - p).norm());
  return best;
}

int max_constraint_degree(const SemialgebraicProblem& p) {
  int r = 1;
  for (const auto& g : p.all_constraints()) r = std::max(r, g.degree());
  return r;
}

void run_entry(const CorpusEntry& entry, const SuiteConfig& cfg, RateReport& rep) {
  const SemialgebraicProblem& original = entry.problem;
  rep.n = original.n;
  rep.unique_minimizer = entry.unique_minimizer;
  rep.oracle = brute_force_oracle(original, entry.oracle_box, entry.oracle_resolution);
  const double f_star = rep.oracle.f_star;
  const SemialgebraicProblem work = entry.normalize ? normalize(original) : original;
  const int r_degree = max_constraint_degree(work);

  std::map<int, LevelRecord> rows;
  auto row = [&](int d) -> LevelRecord& {
    auto& r = rows[d];
    r.d = d;
    return r;
  };

  std::vector<int> lower_levels;
  std::vector<double> lower_gaps, est_errs;
  double prev_m = -std::numeric_limits<double>::infinity();
  std::optional<double> prev_dist;
  for (int d : entry.levels) {
    LevelRecord& rec = row(d);
    const auto start = std::chrono::steady_clock::now();
    try {
      const RelaxationResult r = solve_moment_relaxation(work, d, cfg.sdp);
      rec.status = to_string(r.status);
      rec.m_d = r.m_star;
      rec.f_d = r.f_star;
      const PseudoMomentSequence y = map_to_original(r.pseudo_moments, work.scale);
      const Point x = candidate_minimizer(r.pseudo_moments, work.scale);
      rec.est_err = nearest(x, rep.oracle.s_star);
      if (cfg.distance_order <= y.order()) {
        rec.mom_dist = moment_distance_to_optimal(y, rep.oracle.s_star, cfg.distance_order);
      }
      if (r.certificate) {
        rec.certificate_residual = r.certificate->residual;
        rec.certificate_min_eig = r.certificate->min_gram_eigenvalue();
      }
      rec.flat = flatness_at_level(r.pseudo_moments, d, r_degree, cfg.rank_tol).is_flat;

      if (r.m_star > f_star + 1e-5) {
        rep.violations.push_back("level " + std::to_string(d) + ": m_d* " + fmt(r.m_star) +
                                 " exceeds f* " + fmt(f_star));
      }
      if (r.f_star > r.m_star + 1e-5) {
        rep.violations.push_back("level " + std::to_string(d) + ": f_d* exceeds m_d*");
      }
      if (r.m_star < prev_m - 1e-6) {
        rep.violations.push_back("level " + std::to_string(d) + ": m_d* decreased");
      }
      prev_m = std::max(prev_m, r.m_star);
      if (entry.unique_minimizer && rec.mom_dist && prev_dist && *rec.mom_dist > *prev_dist + 1e-4) {
        rep.violations.push_back("level " + std::to_string(d) + ": moment distance increased");
      }
      if (rec.mom_dist) prev_dist = rec.mom_dist;
      lower_levels.push_back(d);
      lower_gaps.push_back(f_star - r.m_star);
      est_errs.push_back(*rec.est_err);
    } catch (const Error& e) {
      rec.status = e.what();
    }
    rec.seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }

  std::vector<int> upper_levels;
  std::vector<double> upper_gaps;
  double prev_u = std::numeric_limits<double>::infinity();
  if (entry.measure) {
    for (int d : entry.upper_levels) {
      LevelRecord& rec = row(d);
      const auto start = std::chrono::steady_clock::now();
      try {
        const UpperBoundResult u = solve_upper_bound(original, *entry.measure, d);
        rec.u_d = u.u_star;
        rec.upper_est_err = nearest(u.estimator, rep.oracle.s_star);
        rec.upper_estimator_feasible = u.estimator_feasible;
        rec.upper_cost_gap = u.cost_bound - original.objective(u.estimator);
        if (rec.status.empty()) rec.status = "upper-only";
        if (u.u_star < f_star - 1e-5) {
          rep.violations.push_back("level " + std::to_string(d) + ": u_d* below f*");
        }
        if (u.u_star > prev_u + 1e-6) {
          rep.violations.push_back("level " + std::to_string(d) + ": u_d* increased");
        }
        prev_u = std::min(prev_u, u.u_star);
        if (entry.convex_objective && *rec.upper_cost_gap < -1e-8) {
          rep.violations.push_back("level " + std::to_string(d) + ": f(x) exceeds the density cost");
        }
        if (entry.convex_set && !u.estimator_feasible) {
          rep.violations.push_back("level " + std::to_string(d) + ": density estimator outside K");
        }
        upper_levels.push_back(d);
        upper_gaps.push_back(u.u_star - f_star);
      } catch (const Error& e) {
        if (rec.status.empty() || rec.status == "upper-only") {
          rec.status = std::string("upper: ") + e.what();
        }
      }
      rec.seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  }

  for (auto& [d, rec] : rows) rep.levels.push_back(rec);

  if (entry.unique_minimizer && est_errs.size() >= 2 && est_errs.back() > est_errs.front() + 1e-6) {
    rep.violations.push_back("estimator error at the final level exceeds the initial one");
  }
  auto try_fit = [&](const std::vector<int>& lv, const std::vector<double>& gaps,
                     std::optional<RateFit>& slot) {
    try {
      slot = fit_rate(lv, gaps, cfg.zero_tol);
    } catch (const Error& e) {
      RateFit f;
      f.note = e.what();
      slot = f;
    }
  };
  try_fit(lower_levels, lower_gaps, rep.lower_fit);
  // Level 0 has no meaningful log; fits use positive levels only.
  try_fit(upper_levels, upper_gaps, rep.upper_fit);
  if (entry.unique_minimizer) try_fit(lower_levels, est_errs, rep.estimator_fit);
}

}  // namespace

std::vector<RateReport> run_suite(const std::vector<CorpusEntry>& corpus, const SuiteConfig& config) {
  std::vector<std::future<RateReport>> jobs;
  for (const auto& entry : corpus) {
    jobs.push_back(std::async(std::launch::async, [&entry, &config] {
      RateReport rep;
      rep.id = entry.id;
      try {
        run_entry(entry, config, rep);
      } catch (const std::exception& e) {
        rep.error = e.what();
      }
      return rep;
    }));
  }
  std::vector<RateReport> out;
  for (auto& j : jobs) out.push_back(j.get());
  std::stable_sort(out.begin(), out.end(),
                   [](const RateReport& a, const RateReport& b) { return a.id < b.id; });
  return out;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? fmt(*v) : ""; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c == '\n' ? ' ' : c;
  }
  return q + "\"";
}

std::string describe(const std::optional<RateFit>& f) {
  if (!f) return "-";
  std::ostringstream os;
  if (f->fitted) {
    os << "slope " << std::setprecision(4) << f->slope << ", R^2 " << f->r_squared << " ("
       << f->points_used << " levels)";
    if (!f->note.empty()) os << "; ";
  }
  os << f->note;
  return os.str();
}

}  // namespace

void write_report_csv(const std::vector<RateReport>& reports, std::ostream& os) {
  os << "problem,d,m_d,f_d,u_d,est_err,mom_dist,status\n";
  for (const auto& r : reports) {
    if (!r.error.empty()) {
      os << csv_field(r.id) << ",,,,,,," << csv_field("error: " + r.error) << '\n';
      continue;
    }
    for (const auto& l : r.levels) {
      os << csv_field(r.id) << ',' << l.d << ',' << opt(l.m_d) << ',' << opt(l.f_d) << ','
         << opt(l.u_d) << ',' << opt(l.est_err) << ',' << opt(l.mom_dist) << ','
         << csv_field(l.status) << '\n';
    }
  }
}

void write_summary_md(const std::vector<RateReport>& reports, std::ostream& os) {
  os << "# Benchmark summary\n\n";
  std::size_t violations = 0;
  for (const auto& r : reports) violations += r.violations.size() + (r.error.empty() ? 0 : 1);
  os << reports.size() << " problems, " << violations << " invariant violations.\n\n";
  os << "Fitted slopes are log-log least squares of the gap against the level; they are "
        "reported, not checked.\n\n";
  for (const auto& r : reports) {
    os << "## " << r.id << "\n\n";
    if (!r.error.empty()) {
      os << "Failed: " << r.error << "\n\n";
      continue;
    }
    os << "- n = " << r.n << ", oracle f* = " << fmt(r.oracle.f_star) << " on a "
       << r.oracle.resolution << "-point grid per axis, " << r.oracle.s_star.size()
       << " near-optimal grid points\n";
    os << "- lower gap f* - m_d*: " << describe(r.lower_fit) << "\n";
    os << "- upper gap u_d* - f*: " << describe(r.upper_fit) << "\n";
    if (r.unique_minimizer) os << "- estimator error: " << describe(r.estimator_fit) << "\n";
    os << "\n| d | m_d* | f_d* | u_d* | est. error | moment dist. | flat | cert. residual | status |\n";
    os << "|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& l : r.levels) {
      os << "| " << l.d << " | " << opt(l.m_d) << " | " << opt(l.f_d) << " | " << opt(l.u_d)
         << " | " << opt(l.est_err) << " | " << opt(l.mom_dist) << " | "
         << (l.flat ? (*l.flat ? "yes" : "no") : "") << " | " << opt(l.certificate_residual)
         << " | " << l.status << " |\n";
    }
    os << '\n';
    if (r.violations.empty()) {
      os << "All invariants hold.\n\n";
    } else {
      os << "Violations:\n\n";
      for (const auto& v : r.violations) os << "- " << v << '\n';
      os << '\n';
    }
  }
}

}  // namespace momlab
