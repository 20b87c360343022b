#pragma once

// Domain types for the growing intersecting family: edges, incremental
// process state, phase times, verdicts and trial records.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "ekrf/exactmath.hpp"

namespace ekrf {

using Vertex = std::uint32_t;  // 1-based, in [1, n]

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A counting or enumeration cap was exceeded; the caller must pick a
/// different strategy.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// An r-subset of [n], stored strictly increasing.
class Edge {
 public:
  Edge() = default;

  /// Validates against (n, r). Input order is irrelevant; duplicates and
  /// out-of-range vertices throw std::invalid_argument.
  static Edge make(std::vector<Vertex> vertices, int n, int r);
  /// Trusts the caller: vertices must already be strictly increasing.
  static Edge from_sorted(std::vector<Vertex> vertices);

  std::span<const Vertex> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  bool contains(Vertex v) const;
  bool intersects(const Edge& other) const;
  std::vector<Vertex> intersection(const Edge& other) const;
  std::string to_string() const;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;

 private:
  std::vector<Vertex> vertices_;
};

struct EdgeHash {
  std::size_t operator()(const Edge& e) const noexcept;
};

struct StructuralFlags {
  int maxdeg = 0;
  std::vector<Vertex> maxdeg_vertices;  // ascending
  bool is_simple = true;                // every pairwise intersection has size 1
  std::optional<Vertex> distinguished_v;  // the unique vertex of degree >= 3

  friend bool operator==(const StructuralFlags&, const StructuralFlags&) = default;
};

struct PhaseRecord {
  std::map<int, std::uint64_t> t_k;  // k >= 3 -> first t with maxdeg == k
  std::optional<std::uint64_t> t_nonsimple;
  std::optional<std::uint64_t> t_delta0;
  std::optional<std::uint64_t> t_common_empty;  // first t with an empty common intersection
  int deg3_multiplicity = 0;  // vertices reaching degree 3 at step t3

  std::optional<std::uint64_t> t3() const { return at(3); }
  std::optional<std::uint64_t> t4() const { return at(4); }
  std::optional<std::uint64_t> at(int k) const;

  friend bool operator==(const PhaseRecord&, const PhaseRecord&) = default;
};

/// floor(sqrt(r / n^(1/3))), never below 1.
int default_delta0(int n, int r);

/// H_t with incremental degree, witness and flag tracking.
///
/// Pair witnesses are materialized while t <= witness_table_limit; past that
/// `intersection(i, j)` recomputes from the edges.
class ProcessState {
 public:
  ProcessState(int n, int r, int delta0 = 0, std::size_t witness_table_limit = 2048);

  int n() const { return n_; }
  int r() const { return r_; }
  std::size_t t() const { return edges_.size(); }
  int delta0() const { return delta0_; }

  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(std::size_t i) const { return edges_.at(i); }
  int degree(Vertex v) const { return degree_.at(v); }
  std::span<const std::uint32_t> incidence(Vertex v) const { return incidence_.at(v); }
  /// E_i ∩ E_j for 0-based indices i != j.
  std::vector<Vertex> intersection(std::size_t i, std::size_t j) const;
  bool witness_table_complete() const { return t() <= witness_limit_; }
  const std::vector<Vertex>& common_intersection() const { return common_; }
  const StructuralFlags& flags() const { return flags_; }
  const PhaseRecord& phases() const { return phases_; }
  bool contains_edge(const Edge& e) const { return edge_set_.contains(e); }
  /// Vertices lying in at least one edge, ascending.
  std::vector<Vertex> used_vertices() const;
  /// Number of vertices with degree >= 3.
  int high_degree_count() const { return high_degree_count_; }

  /// Appends e. Throws std::invalid_argument for a malformed, duplicate or
  /// non-intersecting edge.
  void apply_edge(const Edge& e);

 private:
  int n_;
  int r_;
  int delta0_;
  std::size_t witness_limit_;
  std::vector<Edge> edges_;
  std::unordered_set<Edge, EdgeHash> edge_set_;
  std::vector<int> degree_;
  std::vector<std::vector<std::uint32_t>> incidence_;
  // witnesses_[j][i] = E_i ∩ E_j for i < j
  std::vector<std::vector<std::vector<Vertex>>> witnesses_;
  std::vector<Vertex> common_;
  StructuralFlags flags_;
  PhaseRecord phases_;
  int high_degree_count_ = 0;
  Vertex first_high_degree_ = 0;
};

/// From-scratch recomputation of the flags; the oracle for the incremental
/// version.
StructuralFlags structural_flags(const ProcessState& state);

// ------------------------------------------------------------ configuration

enum class SamplerKind { Pool, Rejection, Structured, Auto };
std::string to_string(SamplerKind kind);
SamplerKind sampler_kind_from_string(const std::string& name);

struct SamplerSettings {
  SamplerKind kind = SamplerKind::Auto;
  std::uint64_t pool_cap = 2'000'000;
  std::uint64_t rejection_cap = 10'000'000;
  double rejection_floor = 1e-5;
  int ie_cap = 22;

  friend bool operator==(const SamplerSettings&, const SamplerSettings&) = default;
};

enum class StopMode { ExactCompletion, Structural };
std::string to_string(StopMode mode);
StopMode stop_mode_from_string(const std::string& name);

struct StoppingPolicy {
  StopMode mode = StopMode::Structural;
  std::uint64_t t_max = 10'000'000;  // above the default pool cap, so exact runs complete
  int delta_stop = 0;  // 0 means the default Δ₀ for (n, r)
  double eps_fix = 1e-6;
  bool continue_after_verdict = true;

  friend bool operator==(const StoppingPolicy&, const StoppingPolicy&) = default;
};

struct TrialConfig {
  int n = 0;
  int r = 0;
  SamplerSettings sampler;
  StoppingPolicy stopping;

  friend bool operator==(const TrialConfig&, const TrialConfig&) = default;
};

// ------------------------------------------------------------ verdicts

enum class VerdictKind { Fixed, NotFixed, PredictedFixed, Undetermined };
std::string to_string(VerdictKind kind);
VerdictKind verdict_kind_from_string(const std::string& name);

struct Verdict {
  VerdictKind kind = VerdictKind::Undetermined;
  std::optional<Vertex> vertex;
  std::optional<BigCount> size;
  std::optional<double> residual_ratio;

  static Verdict fixed(Vertex x, BigCount size);
  static Verdict not_fixed();
  static Verdict predicted_fixed(Vertex x, BigCount size, double residual);
  static Verdict undetermined() { return {}; }

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

enum class StopReason { Completed, VerdictFixed, VerdictNotFixed, PredictedFixed, Horizon, SamplerExhausted };
std::string to_string(StopReason reason);
StopReason stop_reason_from_string(const std::string& name);

struct StrategyRun {
  SamplerKind kind;
  std::uint64_t steps;
  friend bool operator==(const StrategyRun&, const StrategyRun&) = default;
};

struct TrialRecord {
  TrialConfig config;
  std::uint64_t trial_index = 0;
  std::uint64_t seed = 0;
  PhaseRecord phases;
  // structure at t4
  std::optional<bool> simple_at_t4;
  std::optional<Vertex> unique_v;  // unique vertex of degree >= 3 at t4
  Verdict verdict;
  std::optional<std::uint64_t> verdict_at;  // step at which rule (a)/(b)/(c) first fired
  std::optional<BigCount> final_size_exact;
  std::optional<BigCount> final_size_predicted;
  StopReason stop_reason = StopReason::Horizon;
  std::uint64_t steps = 0;
  std::vector<StrategyRun> strategy_log;
  double wall_time = 0.0;  // seconds; never serialized

  /// Equality ignoring wall_time.
  friend bool operator==(const TrialRecord& a, const TrialRecord& b);
};

}  // namespace ekrf
