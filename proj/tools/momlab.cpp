#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "momlab/bench.hpp"
#include "momlab/errors.hpp"
#include "momlab/extraction.hpp"
#include "momlab/hierarchy.hpp"
#include "momlab/io.hpp"
#include "momlab/kernels.hpp"
#include "momlab/sdp.hpp"
#include "momlab/support.hpp"
#include "momlab/upperbound.hpp"

using namespace momlab;
using io::json;

namespace {

struct Common {
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iter = 200;
  bool verbose = false;
  std::string out;
  std::string isa = "auto";
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--gap-tol", c.gap_tol, "SDP relative gap tolerance");
  app->add_option("--feas-tol", c.feas_tol, "SDP feasibility tolerance");
  app->add_option("--max-iter", c.max_iter, "SDP iteration limit");
  app->add_flag("-v,--verbose", c.verbose, "log solver iterations to stderr");
  app->add_option("-o,--out", c.out, "write the result here instead of stdout");
  app->add_option("--isa", c.isa, "kernel instruction set: auto, scalar, avx2, neon");
}

SdpOptions sdp_options(const Common& c) {
  SdpOptions o;
  o.gap_tol = c.gap_tol;
  o.feas_tol = c.feas_tol;
  o.max_iter = c.max_iter;
  if (c.verbose) o.log = &std::cerr;
  return o;
}

void apply_isa(const std::string& name) {
  if (name == "auto") return;
  if (name == "scalar") {
    kernels::set_isa(kernels::Isa::Scalar);
  } else if (name == "avx2") {
    kernels::set_isa(kernels::Isa::Avx2);
  } else if (name == "neon") {
    kernels::set_isa(kernels::Isa::Neon);
  } else {
    throw InvalidArgument("unknown isa '" + name + "'");
  }
}

void emit(const Common& c, const json& j) {
  if (c.out.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream os(c.out);
  if (!os) throw InvalidArgument("cannot write " + c.out);
  os << j.dump(2) << '\n';
}

// Problems with a ball radius are solved in normalized coordinates.
SemialgebraicProblem working_problem(const SemialgebraicProblem& p) {
  return p.ball_radius ? normalize(p) : p;
}

int run_solve(const std::string& path, int level, bool sos, const std::string& sdpa,
              const Common& c) {
  const SemialgebraicProblem prob = io::problem_from_json(io::read_json_file(path));
  const SemialgebraicProblem work = working_problem(prob);
  if (!sdpa.empty()) {
    std::ofstream os(sdpa);
    if (!os) throw InvalidArgument("cannot write " + sdpa);
    write_sdpa(build_relaxation_sdp(work, level), os);
  }
  json out;
  if (sos) {
    const auto [f, cert] = solve_sos_tightening(work, level, sdp_options(c));
    out = {{"level", level},
           {"f_star", f},
           {"certificate_residual", cert.residual},
           {"certificate", io::to_json(cert)}};
  } else {
    RelaxationResult r = solve_moment_relaxation(work, level, sdp_options(c));
    const PseudoMomentSequence y = map_to_original(r.pseudo_moments, work.scale);
    const Point x = candidate_minimizer(r.pseudo_moments, work.scale);
    out = io::to_json(r);
    out["pseudo_moments"] = io::to_json(y);
    out["candidate_minimizer"] = io::to_json(x);
    out["candidate_feasible"] = prob.contains(x);
    out["normalized"] = !work.scale.is_identity();
  }
  emit(c, out);
  return 0;
}

int run_extract(const std::string& path, int level, double rank_tol, const Common& c) {
  const SemialgebraicProblem prob = io::problem_from_json(io::read_json_file(path));
  const SemialgebraicProblem work = working_problem(prob);
  const RelaxationResult r = solve_moment_relaxation(work, level, sdp_options(c));
  int r_degree = 1;
  for (const auto& g : work.all_constraints()) r_degree = std::max(r_degree, g.degree());
  const FlatnessReport flat = flatness_at_level(r.pseudo_moments, level, r_degree, rank_tol);
  const Point x = candidate_minimizer(r.pseudo_moments, work.scale);

  json out = {{"level", level},
              {"m_star", r.m_star},
              {"status", to_string(r.status)},
              {"flatness", io::to_json(flat)},
              {"candidate_minimizer", io::to_json(x)},
              {"candidate_feasible", prob.contains(x)},
              {"candidate_value", prob.objective(x)}};
  json atoms = json::array();
  if (flat.is_flat) {
    try {
      ExtractionOptions opts;
      opts.rank_tol = rank_tol;
      const AtomicMeasure mu = extract_atoms(r.pseudo_moments, truncation_degree(level) / 2, opts);
      for (std::size_t k = 0; k < mu.size(); ++k) {
        const Point a = work.scale.to_original(mu.atoms[k]);
        atoms.push_back({{"x", io::to_json(a)},
                         {"weight", mu.weights[k]},
                         {"f", prob.objective(a)},
                         {"feasible", prob.contains(a)}});
      }
    } catch (const Error& e) {
      out["extraction_error"] = e.what();
    }
  }
  out["atoms"] = atoms;
  emit(c, out);
  return 0;
}

int run_upper(const std::string& path, const std::string& measure, const std::string& levels,
              const Common& c) {
  const SemialgebraicProblem prob = io::problem_from_json(io::read_json_file(path));
  const std::vector<int> lv = io::parse_levels(levels);
  int top = 0;
  for (int d : lv) top = std::max(top, d);
  const int order = 2 * (top / 2) + prob.objective.degree();
  const json mj = (measure == "box" || measure == "ball") ? json(measure) : io::read_json_file(measure);
  const ReferenceMeasure mu = io::reference_measure_from_json(mj, prob.n, order);
  json out = {{"measure", mu.name()}, {"levels", json::array()}};
  for (int d : lv) {
    try {
      out["levels"].push_back(io::to_json(solve_upper_bound(prob, mu, d)));
    } catch (const Error& e) {
      out["levels"].push_back({{"level", d}, {"error", e.what()}});
    }
  }
  emit(c, out);
  return 0;
}

GridBox parse_box(const std::string& spec, int n) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw InvalidArgument("box must be lo:hi");
  const double lo = std::stod(spec.substr(0, colon));
  const double hi = std::stod(spec.substr(colon + 1));
  if (!(lo < hi)) throw InvalidArgument("box needs lo < hi");
  return {Eigen::VectorXd::Constant(n, lo), Eigen::VectorXd::Constant(n, hi)};
}

int run_support(const std::string& path, const std::string& method, const std::string& box,
                int res, int degree, std::optional<double> threshold, std::optional<double> alpha,
                std::optional<int> r, double pinv_tol, const Common& c) {
  const PseudoMomentSequence y = io::moments_from_json(io::read_json_file(path));
  const GridBox b = parse_box(box, y.dim());
  SupportGrid g;
  if (method == "cd") {
    if (alpha) {
      if (!r) throw InvalidArgument("--alpha needs --r");
      threshold = cd_threshold(degree, *alpha, *r);
    }
    const CdKernel k(y, degree, pinv_tol);
    if (k.singular()) std::cerr << "note: moment matrix is singular, pseudo-inverse used\n";
    g = cd_support_grid(k, b, res, threshold);
  } else if (method == "power") {
    g = power_support_grid(power_bounds(y, degree, default_power_family(y.dim())), b, res);
  } else {
    throw InvalidArgument("method must be cd or power");
  }
  std::ofstream file;
  if (!c.out.empty()) {
    file.open(c.out);
    if (!file) throw InvalidArgument("cannot write " + c.out);
  }
  std::ostream& os = c.out.empty() ? std::cout : file;
  for (int i = 0; i < y.dim(); ++i) os << 'x' << (i + 1) << ',';
  os << "value,included\n";
  os << std::setprecision(12);
  for (std::size_t p = 0; p < g.size(); ++p) {
    for (int i = 0; i < y.dim(); ++i) os << g.coords[static_cast<std::size_t>(i) * g.size() + p] << ',';
    os << g.values[p] << ',' << (g.included[p] ? 1 : 0) << '\n';
  }
  return 0;
}

int run_bench(const std::string& corpus_path, const std::string& out_dir, int r,
              double rank_tol, const Common& c) {
  const std::filesystem::path cp(corpus_path);
  const auto corpus = io::corpus_from_json(io::read_json_file(cp), cp.parent_path());
  SuiteConfig cfg;
  cfg.sdp = sdp_options(c);
  cfg.sdp.log = nullptr;
  cfg.distance_order = r;
  cfg.rank_tol = rank_tol;
  const auto reports = run_suite(corpus, cfg);
  std::filesystem::create_directories(out_dir);
  std::ofstream csv(std::filesystem::path(out_dir) / "report.csv");
  std::ofstream md(std::filesystem::path(out_dir) / "summary.md");
  if (!csv || !md) throw InvalidArgument("cannot write into " + out_dir);
  write_report_csv(reports, csv);
  write_summary_md(reports, md);
  std::size_t bad = 0;
  for (const auto& rep : reports) {
    bad += rep.violations.size() + (rep.error.empty() ? 0 : 1);
    for (const auto& v : rep.violations) std::cerr << rep.id << ": " << v << '\n';
    if (!rep.error.empty()) std::cerr << rep.id << ": " << rep.error << '\n';
  }
  std::cout << reports.size() << " problems, " << bad << " violations; report in " << out_dir
            << '\n';
  return bad == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moment-SoS hierarchy toolkit"};
  app.require_subcommand(1);

  Common common;
  std::string problem;
  int level = 2;

  auto* solve = app.add_subcommand("solve", "solve one moment relaxation or SoS tightening");
  bool sos = false;
  std::string sdpa;
  solve->add_option("--problem", problem, "problem JSON")->required()->check(CLI::ExistingFile);
  solve->add_option("--level", level, "relaxation level d")->required()->check(CLI::NonNegativeNumber);
  solve->add_flag("--sos", sos, "solve the SoS tightening instead");
  solve->add_option("--export-sdpa", sdpa, "also write the moment SDP in SDPA format");
  add_common(solve, common);

  auto* extract = app.add_subcommand("extract", "extract minimizers at a relaxation level");
  double rank_tol = kDefaultRankTol;
  extract->add_option("--problem", problem, "problem JSON")->required()->check(CLI::ExistingFile);
  extract->add_option("--level", level, "relaxation level d")->required()->check(CLI::NonNegativeNumber);
  extract->add_option("--rank-tol", rank_tol, "relative numerical rank tolerance");
  add_common(extract, common);

  auto* upper = app.add_subcommand("upper", "upper bounds from SoS densities");
  std::string measure = "box";
  std::string levels = "0:2:12";
  upper->add_option("--problem", problem, "problem JSON")->required()->check(CLI::ExistingFile);
  upper->add_option("--measure", measure, "box, ball or a measure JSON file");
  upper->add_option("--levels", levels, "start:step:stop or a comma list");
  add_common(upper, common);

  auto* support = app.add_subcommand("support", "support estimation on a grid, CSV output");
  std::string moments, method = "cd", box = "-1:1";
  int res = 201, degree = 2;
  std::optional<double> threshold, alpha;
  std::optional<int> r_param;
  double pinv_tol = kDefaultPinvTol;
  support->add_option("--moments", moments, "moments JSON")->required()->check(CLI::ExistingFile);
  support->add_option("--method", method, "cd or power")->check(CLI::IsMember({"cd", "power"}));
  support->add_option("--box", box, "grid bounds lo:hi on every axis");
  support->add_option("--res", res, "grid points per axis")->check(CLI::PositiveNumber);
  support->add_option("--degree", degree, "kernel degree or power-method level")->check(CLI::NonNegativeNumber);
  support->add_option("--threshold", threshold, "include points with K(x,x) below this");
  support->add_option("--alpha", alpha, "use the formula threshold with this alpha");
  support->add_option("--r", r_param, "r parameter of the formula threshold");
  support->add_option("--pinv-tol", pinv_tol, "relative pseudo-inverse tolerance");
  add_common(support, common);

  auto* bench = app.add_subcommand("bench", "run the benchmark corpus");
  std::string corpus, out_dir = "report";
  int dist_r = 2;
  bench->add_option("--corpus", corpus, "corpus JSON")->required()->check(CLI::ExistingFile);
  bench->add_option("--out", out_dir, "report directory");
  bench->add_option("--distance-order", dist_r, "moment truncation r of the distance")->check(CLI::PositiveNumber);
  bench->add_option("--rank-tol", rank_tol, "relative numerical rank tolerance");
  bench->add_option("--gap-tol", common.gap_tol, "SDP relative gap tolerance");
  bench->add_option("--feas-tol", common.feas_tol, "SDP feasibility tolerance");
  bench->add_option("--isa", common.isa, "kernel instruction set");

  CLI11_PARSE(app, argc, argv);

  try {
    apply_isa(common.isa);
    if (*solve) return run_solve(problem, level, sos, sdpa, common);
    if (*extract) return run_extract(problem, level, rank_tol, common);
    if (*upper) return run_upper(problem, measure, levels, common);
    if (*support) {
      return run_support(moments, method, box, res, degree, threshold, alpha, r_param, pinv_tol,
                         common);
    }
    if (*bench) return run_bench(corpus, out_dir, dist_r, rank_tol, common);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
