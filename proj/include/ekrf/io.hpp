#pragma once

// Persistence and batch running: JSONL trial records, edge files, CSV law
// tables, flat key=value config files and the parallel trial runner.

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "ekrf/core.hpp"
#include "ekrf/stats.hpp"

namespace ekrf {

nlohmann::json config_to_json(const TrialConfig& config);
TrialConfig config_from_json(const nlohmann::json& j);

nlohmann::json record_to_json(const TrialRecord& rec);
/// Throws std::invalid_argument on a malformed record.
TrialRecord record_from_json(const nlohmann::json& j);

/// One line, no trailing newline.
std::string record_to_jsonl(const TrialRecord& rec);

/// Records from a JSONL stream; summary lines and blank lines are skipped.
std::vector<TrialRecord> read_jsonl(std::istream& in);

nlohmann::json summary_to_json(const Summary& s);

/// One edge per line, ascending vertices separated by spaces.
void write_edges(std::ostream& out, std::span<const Edge> edges);
/// Lines starting with '#' and blank lines are ignored. Throws
/// std::invalid_argument (with the line number) on malformed input.
std::vector<Edge> read_edges(std::istream& in, int n, int r);

inline constexpr const char* kCsvHeader = "law,parameter,empirical,se,theory,n";
void write_comparisons_csv(std::ostream& out, std::span<const LawComparison> rows);
std::vector<LawComparison> read_comparisons_csv(std::istream& in);

/// Flat key=value lines; '#' starts a comment line. Keys and values are
/// trimmed. Throws std::invalid_argument on a line without '='.
std::map<std::string, std::string> parse_config_file(std::istream& in);

struct RunConfig {
  TrialConfig trial;
  std::uint64_t trials = 1;
  std::uint64_t seed_base = 0;
  unsigned workers = 1;
};

/// Runs every trial with seed derive_seed(seed_base, index) on up to
/// `workers` threads and hands records to `sink` in trial-index order. The
/// first trial error is rethrown after the workers stop.
void run_trials(const RunConfig& config, const std::function<void(const TrialRecord&)>& sink);

}  // namespace ekrf
