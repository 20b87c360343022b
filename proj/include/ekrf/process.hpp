#pragma once

// Trial driver: runs the process, records phase events, renders fixation
// verdicts and produces TrialRecords.

#include <optional>
#include <string>
#include <vector>

#include "ekrf/core.hpp"
#include "ekrf/counting.hpp"
#include "ekrf/oracle.hpp"
#include "ekrf/sampler.hpp"

namespace ekrf {

/// A trial failed mid-run. what() carries (n, r, seed, step) and the edge
/// list so the state can be replayed.
class TrialError : public Error {
 public:
  TrialError(const std::string& message, std::string replay) : Error(message), replay_(std::move(replay)) {}
  const std::string& replay() const { return replay_; }

 private:
  std::string replay_;
};

/// Sets containing x that meet every edge: nu_all of the instance on
/// [n] \ {x} with subset size r - 1 and the edges avoiding x as constraints.
BigCount nu_containing(const ProcessState& state, Vertex x, int ie_cap = kDefaultIeCap);

struct VerdictOptions {
  int delta_stop = 0;  // 0 means Δ₀ for (n, r)
  double eps_fix = 1e-6;
  int ie_cap = kDefaultIeCap;
  /// Unchosen candidates, when known explicitly; replaces counting for rule (b).
  const std::vector<oracle::VertexMask>* pool = nullptr;
  /// nu_all for the state, when already known.
  const BigCount* nu_all = nullptr;
};

/// Rules (a) and (b): NotFixed when the common intersection is empty,
/// Fixed(x, nu_all) when every candidate contains some x. nullopt when
/// neither applies or the counts are out of reach.
std::optional<Verdict> exact_verdict(const ProcessState& state, const VerdictOptions& opts = {});

/// Rule (c): the maximum-degree vertex v has degree >= Δ_stop and the
/// remaining candidates avoiding v are at most an eps_fix fraction of the
/// remaining pool. The predicted final size is tbar + final_family_size
/// when the edges avoiding v are pairwise simple with distinct witnesses,
/// otherwise tbar + nu_containing(v).
std::optional<Verdict> predicted_verdict(const ProcessState& state, const VerdictOptions& opts = {});

/// Rules (a) through (d) in order.
Verdict verdict(const ProcessState& state, const VerdictOptions& opts = {});

/// Exact next-step probabilities on the current state. Ratios are over the
/// remaining pool ν_all - t.
struct StepProfile {
  std::size_t t = 0;
  BigCount nu_all;
  BigCount pool;
  // Regime "simple, maxdeg <= 2": candidates keeping both properties.
  std::optional<BigCount> keeps_simple;
  std::optional<BigCount> nu_emp_closed;  // closed form on the same (n, r, t)
  // Regime "simple, unique hub v of degree >= 3".
  std::optional<Vertex> v;
  std::optional<BigCount> nu_A;  // all sets containing v (chosen ones included)
  std::optional<BigCount> nu_B;  // all sets avoiding v (chosen ones included)
  std::optional<BigCount> emp_A;  // candidates through v keeping the family simple
  std::optional<BigCount> emp_B;  // candidates avoiding v keeping it simple
  std::optional<std::pair<BigCount, BigCount>> emp_AB_closed;

  std::optional<double> p_keeps_simple;
  std::optional<double> p_hits_v;
  std::optional<double> p_avoids_v;
  std::optional<double> p_emp_A;
  std::optional<double> p_emp_B;
};

/// Throws CapExceeded when t > ie_cap.
StepProfile step_probability_profile(const ProcessState& state, int ie_cap = kDefaultIeCap);

/// How a prospective next edge changes the state.
struct EdgeClassification {
  bool keeps_simple = false;  // meets every edge in exactly one vertex
  int new_maxdeg = 0;
  bool keeps_simple_maxdeg2 = false;
  std::optional<bool> hits_v;
};
EdgeClassification classify_next_edge(const ProcessState& state, const Edge& e,
                                      std::optional<Vertex> v = std::nullopt);

/// Messages for (n, r) outside the regimes the theory covers; empty when
/// none apply. Such configurations still run.
std::vector<std::string> regime_warnings(int n, int r);

/// Throws std::invalid_argument for an unusable configuration.
void validate_config(const TrialConfig& config);

/// One independent run of the process.
TrialRecord run_trial(const TrialConfig& config, std::uint64_t seed, std::uint64_t trial_index = 0);

/// Runs one trial on a caller-owned state (useful for replays); the state
/// is left at the stopping point.
TrialRecord run_trial_on(ProcessState& state, const TrialConfig& config, std::uint64_t seed,
                         std::uint64_t trial_index = 0);

}  // namespace ekrf
