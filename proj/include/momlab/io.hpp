#pragma once

// JSON reading and writing for polynomials, problems, moment tables,
// corpora and results.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "momlab/bench.hpp"
#include "momlab/cone.hpp"
#include "momlab/extraction.hpp"
#include "momlab/hierarchy.hpp"
#include "momlab/measure.hpp"
#include "momlab/poly.hpp"
#include "momlab/upperbound.hpp"

namespace momlab::io {

using json = nlohmann::json;

// {"n": int, "terms": [{"alpha": [...], "c": float}, ...]}
Polynomial polynomial_from_json(const json& j);
json to_json(const Polynomial& p);

// {"n", "objective", "constraints", "equalities", "ball_radius": float|null}
SemialgebraicProblem problem_from_json(const json& j);
json to_json(const SemialgebraicProblem& p);

// Either {"n", "order", "moments": [{"alpha", "y"}, ...]} or an atomic
// measure {"atoms": [[...]], "weights": [...], "order"}.
PseudoMomentSequence moments_from_json(const json& j);
json to_json(const PseudoMomentSequence& y);

AtomicMeasure measure_from_json(const json& j);
json to_json(const AtomicMeasure& mu);

// "box", "ball", {"box": {"lower": [...], "upper": [...]}},
// {"atoms": ..., "weights": ...} (uniform table with that support) or
// {"moments": ...}. `n` is the problem dimension, `order` the moment order
// needed for table measures.
ReferenceMeasure reference_measure_from_json(const json& j, int n, int order);

// {"problems": [{"id", "problem", "normalize", "levels", "upper_levels",
// "measure", "oracle_box", "oracle_resolution", "unique_minimizer",
// "convex_objective", "convex_set"}, ...]}. A "problem" given as a string
// is a path relative to base_dir.
std::vector<CorpusEntry> corpus_from_json(const json& j, const std::filesystem::path& base_dir);

json to_json(const SosCertificate& c);
json to_json(const RelaxationResult& r);
json to_json(const FlatnessReport& f);
json to_json(const UpperBoundResult& u);
json to_json(const Point& x);

json read_json_file(const std::filesystem::path& path);

// "0:2:12" (start:step:stop), "a:b" (step 1), "2,3,4" or "4".
std::vector<int> parse_levels(const std::string& spec);

}  // namespace momlab::io
