#include "momlab/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "momlab/errors.hpp"

namespace momlab::io {

namespace {

int require_dim(const json& j) {
  if (!j.contains("n") || !j["n"].is_number_integer()) throw InvalidArgument("missing integer field n");
  const int n = j["n"].get<int>();
  if (n < 1) throw InvalidArgument("n must be positive");
  return n;
}

MultiIndex index_from(const json& a, int n) {
  auto e = a.get<std::vector<int>>();
  if (static_cast<int>(e.size()) != n) throw DimensionMismatch("exponent length differs from n");
  for (int k : e) {
    if (k < 0) throw InvalidArgument("negative exponent");
  }
  return MultiIndex(std::move(e));
}

Point point_from(const json& a) {
  const auto v = a.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::VectorXd vector_from(const json& a) { return point_from(a); }

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(row);
  }
  return rows;
}

GridBox box_from(const json& j, int n) {
  GridBox b;
  if (j.is_object()) {
    b.lower = vector_from(j.at("lower"));
    b.upper = vector_from(j.at("upper"));
  } else if (j.is_array() && j.size() == 2 && j[0].is_number()) {
    b.lower = Eigen::VectorXd::Constant(n, j[0].get<double>());
    b.upper = Eigen::VectorXd::Constant(n, j[1].get<double>());
  } else {
    throw InvalidArgument("box must be {lower, upper} or [lo, hi]");
  }
  if (b.lower.size() != n || b.upper.size() != n) throw DimensionMismatch("box dimension mismatch");
  return b;
}

}  // namespace

Polynomial polynomial_from_json(const json& j) {
  const int n = require_dim(j);
  Polynomial p(n);
  if (!j.contains("terms")) return p;
  for (const auto& t : j.at("terms")) {
    p.add_term(index_from(t.at("alpha"), n), t.at("c").get<double>());
  }
  return p;
}

json to_json(const Polynomial& p) {
  json terms = json::array();
  for (const auto& [alpha, c] : p.terms()) terms.push_back({{"alpha", alpha.exponents()}, {"c", c}});
  return {{"n", p.dim()}, {"terms", terms}};
}

SemialgebraicProblem problem_from_json(const json& j) {
  const int n = require_dim(j);
  SemialgebraicProblem p;
  p.n = n;
  p.scale = AffineScale::identity(n);
  p.objective = polynomial_from_json(j.at("objective"));
  if (j.contains("constraints")) {
    for (const auto& c : j["constraints"]) p.constraints.push_back(polynomial_from_json(c));
  }
  if (j.contains("equalities")) {
    for (const auto& h : j["equalities"]) p.add_equality(polynomial_from_json(h));
  }
  if (j.contains("ball_radius") && !j["ball_radius"].is_null()) {
    p.ball_radius = j["ball_radius"].get<double>();
  }
  p.validate();
  return p;
}

json to_json(const SemialgebraicProblem& p) {
  json cons = json::array();
  for (const auto& c : p.constraints) cons.push_back(to_json(c));
  json out = {{"n", p.n},
              {"objective", to_json(p.objective)},
              {"constraints", cons},
              {"equalities", json::array()}};
  out["ball_radius"] = p.ball_radius ? json(*p.ball_radius) : json(nullptr);
  return out;
}

AtomicMeasure measure_from_json(const json& j) {
  AtomicMeasure mu;
  const auto& atoms = j.at("atoms");
  const auto& weights = j.at("weights");
  if (atoms.size() != weights.size()) throw DimensionMismatch("atoms and weights differ in count");
  for (std::size_t k = 0; k < atoms.size(); ++k) mu.add(point_from(atoms[k]), weights[k].get<double>());
  mu.validate();
  return mu;
}

json to_json(const AtomicMeasure& mu) {
  json atoms = json::array();
  for (const auto& a : mu.atoms) atoms.push_back(to_json(a));
  return {{"atoms", atoms}, {"weights", mu.weights}};
}

PseudoMomentSequence moments_from_json(const json& j) {
  if (j.contains("atoms")) {
    return PseudoMomentSequence::from_measure(measure_from_json(j), j.at("order").get<int>());
  }
  const int n = require_dim(j);
  const auto& entries = j.at("moments");
  int order = 0;
  for (const auto& e : entries) order = std::max(order, index_from(e.at("alpha"), n).degree());
  if (j.contains("order")) order = j["order"].get<int>();
  PseudoMomentSequence y(n, order);
  std::vector<char> seen(y.basis().size(), 0);
  for (const auto& e : entries) {
    const long k = y.basis().index_of(index_from(e.at("alpha"), n));
    if (k < 0) throw DegreeOverflow("moment exponent exceeds the declared order");
    y.values()[k] = e.at("y").get<double>();
    seen[k] = 1;
  }
  if (std::count(seen.begin(), seen.end(), 0) > 0) {
    throw InvalidArgument("moment table is missing entries up to order " + std::to_string(order));
  }
  return y;
}

json to_json(const PseudoMomentSequence& y) {
  json entries = json::array();
  for (std::size_t k = 0; k < y.basis().size(); ++k) {
    entries.push_back({{"alpha", y.basis()[k].exponents()}, {"y", y.values()[static_cast<Eigen::Index>(k)]}});
  }
  return {{"n", y.dim()}, {"order", y.order()}, {"moments", entries}};
}

ReferenceMeasure reference_measure_from_json(const json& j, int n, int order) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "box") return ReferenceMeasure::box(n);
    if (s == "ball") return ReferenceMeasure::ball(n);
    throw InvalidArgument("unknown reference measure '" + s + "'");
  }
  if (j.contains("box")) {
    const GridBox b = box_from(j["box"], n);
    return ReferenceMeasure::box(b.lower, b.upper);
  }
  if (j.contains("atoms")) {
    const AtomicMeasure mu = measure_from_json(j);
    if (mu.dim() != n) throw DimensionMismatch("measure dimension differs from the problem");
    return ReferenceMeasure::table(PseudoMomentSequence::from_measure(mu, order), mu);
  }
  if (j.contains("moments")) {
    PseudoMomentSequence y = moments_from_json(j);
    if (y.dim() != n) throw DimensionMismatch("moment table dimension differs from the problem");
    return ReferenceMeasure::table(std::move(y));
  }
  throw InvalidArgument("unrecognized reference measure");
}

std::vector<CorpusEntry> corpus_from_json(const json& j, const std::filesystem::path& base_dir) {
  std::vector<CorpusEntry> out;
  if (!j.contains("problems")) return out;
  for (const auto& e : j.at("problems")) {
    CorpusEntry c;
    c.id = e.at("id").get<std::string>();
    const auto& pj = e.at("problem");
    c.problem = pj.is_string() ? problem_from_json(read_json_file(base_dir / pj.get<std::string>()))
                               : problem_from_json(pj);
    const int n = c.problem.n;
    c.normalize = e.value("normalize", false);
    c.levels = e.value("levels", std::vector<int>{});
    c.upper_levels = e.value("upper_levels", std::vector<int>{});
    if (e.contains("measure") && !e["measure"].is_null()) {
      int top = 0;
      for (int d : c.upper_levels) top = std::max(top, d);
      const int order = 2 * (top / 2) + c.problem.objective.degree();
      c.measure = reference_measure_from_json(e["measure"], n, order);
    }
    c.oracle_box = e.contains("oracle_box") ? box_from(e["oracle_box"], n)
                                            : GridBox{Eigen::VectorXd::Constant(n, -1.0),
                                                      Eigen::VectorXd::Constant(n, 1.0)};
    c.oracle_resolution = e.value("oracle_resolution", 0);
    c.unique_minimizer = e.value("unique_minimizer", false);
    c.convex_objective = e.value("convex_objective", false);
    c.convex_set = e.value("convex_set", false);
    out.push_back(std::move(c));
  }
  return out;
}

json to_json(const Point& x) {
  return std::vector<double>(x.data(), x.data() + x.size());
}

json to_json(const SosCertificate& c) {
  json blocks = json::array();
  for (std::size_t i = 0; i < c.grams.size(); ++i) {
    json basis = json::array();
    for (const auto& a : c.bases[i]) basis.push_back(a.exponents());
    blocks.push_back({{"multiplier", to_json(c.multipliers[i])},
                      {"basis", basis},
                      {"gram", matrix_json(c.grams[i])}});
  }
  return {{"s", c.s},
          {"residual", c.residual},
          {"min_gram_eigenvalue", c.min_gram_eigenvalue()},
          {"blocks", blocks}};
}

json to_json(const RelaxationResult& r) {
  json out = {{"level", r.level},
              {"truncation", r.truncation},
              {"status", to_string(r.status)},
              {"message", r.message},
              {"m_star", r.m_star},
              {"f_star", r.f_star},
              {"iterations", r.iterations},
              {"seconds", r.seconds},
              {"pseudo_moments", to_json(r.pseudo_moments)}};
  if (r.certificate) {
    out["certificate_residual"] = r.certificate->residual;
    out["certificate"] = to_json(*r.certificate);
  }
  return out;
}

json to_json(const FlatnessReport& f) {
  return {{"d", f.d},
          {"r", f.r},
          {"rank_full", f.rank_full},
          {"rank_truncated", f.rank_truncated},
          {"singular_values_full", to_json(f.singular_values_full)},
          {"singular_values_truncated", to_json(f.singular_values_truncated)},
          {"is_flat", f.is_flat},
          {"tol", f.tol}};
}

json to_json(const UpperBoundResult& u) {
  json out = {{"level", u.level},
              {"u_star", u.u_star},
              {"sigma", to_json(u.sigma)},
              {"estimator", to_json(u.estimator)},
              {"estimator_feasible", u.estimator_feasible},
              {"cost_bound", u.cost_bound},
              {"density_mass", u.density_mass}};
  out["estimator_in_hull"] = u.estimator_in_hull ? json(*u.estimator_in_hull) : json(nullptr);
  return out;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

std::vector<int> parse_levels(const std::string& spec) {
  auto to_int = [&](const std::string& s) {
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != s.size()) throw InvalidArgument("bad level spec '" + spec + "'");
    return v;
  };
  std::vector<std::string> parts;
  std::vector<int> out;
  if (spec.find(':') != std::string::npos) {
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() < 2 || parts.size() > 3) throw InvalidArgument("bad level spec '" + spec + "'");
    const int start = to_int(parts[0]);
    const int step = parts.size() == 3 ? to_int(parts[1]) : 1;
    const int stop = to_int(parts.back());
    if (step <= 0 || stop < start) throw InvalidArgument("bad level range '" + spec + "'");
    for (int d = start; d <= stop; d += step) out.push_back(d);
  } else {
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(to_int(p));
  }
  for (int d : out) {
    if (d < 0) throw InvalidArgument("levels must be nonnegative");
  }
  return out;
}

}  // namespace momlab::io
