#pragma once

// Subcommand drivers: each returns a JSON report (stable key order) plus
// named output files. Shared by the C API and the tests.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ergolab/averaging.hpp"

namespace ergolab::report {

using Json = nlohmann::ordered_json;

struct Settings {
  std::optional<std::int64_t> N;
  int precision_digits = 50;
  Tolerances tol{};
  int jobs = 1;
  std::uint64_t seed = 0;
};

struct Output {
  Json json;
  std::vector<std::pair<std::string, std::string>> files;  // (name, contents)
  bool failed = false;  // an expectation or a build-failing property tripped
};

/// Appends `seed=<seed>` to rand:/bern: specs that do not name one.
std::string with_default_seed(const std::string& spec, std::uint64_t seed);

Output classify(const std::string& expr, const Settings& s);
Output sequence(const std::string& f, const std::string& h, bool dedup, bool binary, const Settings& s);
Output bk(const std::string& f, std::int64_t K, const Settings& s);

struct SetOptions {
  int regularity_K = -1;        // -1: no word statistics
  std::string format = "none";  // "none", "elements", "rle1"
  std::optional<std::pair<std::int64_t, std::int64_t>> akm;  // extract A_{k,m}
};
Output index_set(const std::string& spec, const SetOptions& opt, const Settings& s);

Output weyl(const std::string& weight, int m_max, const Settings& s);
Output bosh(const std::string& expr, const Settings& s);
Output qtest(const std::string& weight, int k_max, int m_bound, const Settings& s);

/// Experiment keys: model, vector, f, h, A, weight, N, checkpoints, dedup,
/// witnesses, difference_k, materialize, expected, tol.
ExperimentConfig config_from_json(const Json& cfg, const Settings& s);
Json config_to_json(const ExperimentConfig& cfg);
Output average(const Json& cfg, const Settings& s);

/// Runs every experiment of a battery file and the van der Corput gate.
Output battery(const Json& spec, const Settings& s);

std::string trace_csv(const AverageTrace& tr);
Json trace_json(const TraceSummary& t);

}  // namespace ergolab::report
