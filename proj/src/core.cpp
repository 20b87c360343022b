#include "ekrf/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ekrf {

// ------------------------------------------------------------------ Edge

Edge Edge::make(std::vector<Vertex> vertices, int n, int r) {
  if (static_cast<int>(vertices.size()) != r) {
    throw std::invalid_argument("edge has " + std::to_string(vertices.size()) + " vertices, expected " +
                                std::to_string(r));
  }
  std::sort(vertices.begin(), vertices.end());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i] < 1 || vertices[i] > static_cast<Vertex>(n)) {
      throw std::invalid_argument("vertex " + std::to_string(vertices[i]) + " outside [1, " + std::to_string(n) + "]");
    }
    if (i > 0 && vertices[i] == vertices[i - 1]) {
      throw std::invalid_argument("repeated vertex " + std::to_string(vertices[i]));
    }
  }
  return from_sorted(std::move(vertices));
}

Edge Edge::from_sorted(std::vector<Vertex> vertices) {
  Edge e;
  e.vertices_ = std::move(vertices);
  return e;
}

bool Edge::contains(Vertex v) const { return std::binary_search(vertices_.begin(), vertices_.end(), v); }

bool Edge::intersects(const Edge& other) const {
  auto a = vertices_.begin();
  auto b = other.vertices_.begin();
  while (a != vertices_.end() && b != other.vertices_.end()) {
    if (*a == *b) return true;
    if (*a < *b) {
      ++a;
    } else {
      ++b;
    }
  }
  return false;
}

std::vector<Vertex> Edge::intersection(const Edge& other) const {
  std::vector<Vertex> out;
  std::set_intersection(vertices_.begin(), vertices_.end(), other.vertices_.begin(), other.vertices_.end(),
                        std::back_inserter(out));
  return out;
}

std::string Edge::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < vertices_.size(); ++i) os << (i ? "," : "") << vertices_[i];
  os << '}';
  return os.str();
}

std::size_t EdgeHash::operator()(const Edge& e) const noexcept {
  std::uint64_t h = 0x9E3779B97F4A7C15ull;
  for (Vertex v : e.vertices()) {
    h ^= v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

// ------------------------------------------------------------------ phases

std::optional<std::uint64_t> PhaseRecord::at(int k) const {
  auto it = t_k.find(k);
  if (it == t_k.end()) return std::nullopt;
  return it->second;
}

int default_delta0(int n, int r) {
  const double d = std::floor(std::sqrt(static_cast<double>(r) / std::cbrt(static_cast<double>(n))));
  return std::max(1, static_cast<int>(d));
}

// ------------------------------------------------------------------ state

ProcessState::ProcessState(int n, int r, int delta0, std::size_t witness_table_limit)
    : n_(n),
      r_(r),
      delta0_(delta0 > 0 ? delta0 : default_delta0(n, r)),
      witness_limit_(witness_table_limit),
      degree_(static_cast<std::size_t>(n) + 1, 0),
      incidence_(static_cast<std::size_t>(n) + 1) {
  if (r < 1 || n < r) throw std::invalid_argument("ProcessState requires 1 <= r <= n");
}

std::vector<Vertex> ProcessState::intersection(std::size_t i, std::size_t j) const {
  if (i == j) throw std::invalid_argument("intersection: identical indices");
  if (i > j) std::swap(i, j);
  if (j < witnesses_.size()) return witnesses_[j][i];
  return edges_.at(i).intersection(edges_.at(j));
}

std::vector<Vertex> ProcessState::used_vertices() const {
  std::vector<Vertex> out;
  for (Vertex v = 1; v <= static_cast<Vertex>(n_); ++v) {
    if (degree_[v] > 0) out.push_back(v);
  }
  return out;
}

void ProcessState::apply_edge(const Edge& e) {
  if (static_cast<int>(e.size()) != r_) throw std::invalid_argument("apply_edge: wrong edge size " + e.to_string());
  const auto vs = e.vertices();
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (vs[i] < 1 || vs[i] > static_cast<Vertex>(n_) || (i > 0 && vs[i] <= vs[i - 1])) {
      throw std::invalid_argument("apply_edge: malformed edge " + e.to_string());
    }
  }
  if (edge_set_.contains(e)) throw std::invalid_argument("apply_edge: duplicate edge " + e.to_string());

  const std::size_t j = edges_.size();
  const bool trivially_intersecting = 2 * r_ > n_;
  const bool build_row = j < witness_limit_;
  bool became_nonsimple = false;
  if (!trivially_intersecting || flags_.is_simple || build_row) {
    std::vector<std::uint32_t> overlap(j, 0);
    for (Vertex u : vs) {
      for (std::uint32_t i : incidence_[u]) ++overlap[i];
    }
    if (!trivially_intersecting) {
      for (std::size_t i = 0; i < j; ++i) {
        if (overlap[i] == 0) {
          throw std::invalid_argument("apply_edge: " + e.to_string() + " misses edge " + edges_[i].to_string());
        }
      }
    }
    if (flags_.is_simple) {
      became_nonsimple = std::any_of(overlap.begin(), overlap.end(), [](std::uint32_t c) { return c >= 2; });
    }
    if (build_row) {
      std::vector<std::vector<Vertex>> row(j);
      for (Vertex u : vs) {
        for (std::uint32_t i : incidence_[u]) row[i].push_back(u);
      }
      witnesses_.push_back(std::move(row));
    }
  }

  edges_.push_back(e);
  edge_set_.insert(e);
  const auto t_now = static_cast<std::uint64_t>(edges_.size());

  const int old_maxdeg = flags_.maxdeg;
  int reached3 = 0;
  for (Vertex u : vs) {
    const int d = ++degree_[u];
    incidence_[u].push_back(static_cast<std::uint32_t>(j));
    if (d > flags_.maxdeg) {
      flags_.maxdeg = d;
      flags_.maxdeg_vertices.assign(1, u);
    } else if (d == flags_.maxdeg) {
      auto pos = std::lower_bound(flags_.maxdeg_vertices.begin(), flags_.maxdeg_vertices.end(), u);
      flags_.maxdeg_vertices.insert(pos, u);
    }
    if (d == 3) {
      if (high_degree_count_ == 0) first_high_degree_ = u;
      ++high_degree_count_;
      ++reached3;
    }
  }
  if (high_degree_count_ == 1) {
    flags_.distinguished_v = first_high_degree_;
  } else {
    flags_.distinguished_v.reset();
  }

  if (became_nonsimple) {
    flags_.is_simple = false;
    phases_.t_nonsimple = t_now;
  }
  for (int k = std::max(old_maxdeg + 1, 3); k <= flags_.maxdeg; ++k) {
    phases_.t_k.emplace(k, t_now);
    if (k == 3) phases_.deg3_multiplicity = reached3;
  }
  if (!phases_.t_delta0 && flags_.maxdeg >= delta0_) phases_.t_delta0 = t_now;

  if (j == 0) {
    common_.assign(vs.begin(), vs.end());
  } else if (!common_.empty()) {
    std::vector<Vertex> next;
    std::set_intersection(common_.begin(), common_.end(), vs.begin(), vs.end(), std::back_inserter(next));
    common_ = std::move(next);
    if (common_.empty()) phases_.t_common_empty = t_now;
  }
}

StructuralFlags structural_flags(const ProcessState& state) {
  StructuralFlags out;
  std::vector<int> deg(static_cast<std::size_t>(state.n()) + 1, 0);
  for (const Edge& e : state.edges()) {
    for (Vertex v : e.vertices()) ++deg[v];
  }
  int high = 0;
  Vertex high_v = 0;
  for (Vertex v = 1; v <= static_cast<Vertex>(state.n()); ++v) {
    if (deg[v] > out.maxdeg) {
      out.maxdeg = deg[v];
      out.maxdeg_vertices.assign(1, v);
    } else if (deg[v] == out.maxdeg && deg[v] > 0) {
      out.maxdeg_vertices.push_back(v);
    }
    if (deg[v] >= 3) {
      ++high;
      high_v = v;
    }
  }
  if (high == 1) out.distinguished_v = high_v;
  const auto edges = state.edges();
  for (std::size_t i = 0; i < edges.size() && out.is_simple; ++i) {
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      if (edges[i].intersection(edges[j]).size() != 1) {
        out.is_simple = false;
        break;
      }
    }
  }
  return out;
}

// ------------------------------------------------------------------ enums

namespace {
template <typename E, std::size_t N>
E parse_enum(const std::string& name, const std::pair<E, const char*> (&table)[N], const char* what) {
  for (const auto& [value, label] : table) {
    if (name == label) return value;
  }
  throw std::invalid_argument(std::string("unknown ") + what + ": " + name);
}
template <typename E, std::size_t N>
std::string print_enum(E value, const std::pair<E, const char*> (&table)[N]) {
  for (const auto& [v, label] : table) {
    if (v == value) return label;
  }
  return "?";
}

const std::pair<SamplerKind, const char*> kSamplerNames[] = {{SamplerKind::Pool, "pool"},
                                                             {SamplerKind::Rejection, "rejection"},
                                                             {SamplerKind::Structured, "structured"},
                                                             {SamplerKind::Auto, "auto"}};
const std::pair<StopMode, const char*> kModeNames[] = {{StopMode::ExactCompletion, "exact"},
                                                       {StopMode::Structural, "structural"}};
const std::pair<VerdictKind, const char*> kVerdictNames[] = {{VerdictKind::Fixed, "fixed"},
                                                             {VerdictKind::NotFixed, "not_fixed"},
                                                             {VerdictKind::PredictedFixed, "predicted_fixed"},
                                                             {VerdictKind::Undetermined, "undetermined"}};
const std::pair<StopReason, const char*> kStopNames[] = {{StopReason::Completed, "completed"},
                                                         {StopReason::VerdictFixed, "verdict_fixed"},
                                                         {StopReason::VerdictNotFixed, "verdict_not_fixed"},
                                                         {StopReason::PredictedFixed, "predicted_fixed"},
                                                         {StopReason::Horizon, "horizon"},
                                                         {StopReason::SamplerExhausted, "sampler_exhausted"}};
}  // namespace

std::string to_string(SamplerKind kind) { return print_enum(kind, kSamplerNames); }
SamplerKind sampler_kind_from_string(const std::string& name) { return parse_enum(name, kSamplerNames, "strategy"); }
std::string to_string(StopMode mode) { return print_enum(mode, kModeNames); }
StopMode stop_mode_from_string(const std::string& name) { return parse_enum(name, kModeNames, "mode"); }
std::string to_string(VerdictKind kind) { return print_enum(kind, kVerdictNames); }
VerdictKind verdict_kind_from_string(const std::string& name) { return parse_enum(name, kVerdictNames, "verdict"); }
std::string to_string(StopReason reason) { return print_enum(reason, kStopNames); }
StopReason stop_reason_from_string(const std::string& name) { return parse_enum(name, kStopNames, "stop reason"); }

Verdict Verdict::fixed(Vertex x, BigCount size) {
  Verdict v;
  v.kind = VerdictKind::Fixed;
  v.vertex = x;
  v.size = std::move(size);
  return v;
}

Verdict Verdict::not_fixed() {
  Verdict v;
  v.kind = VerdictKind::NotFixed;
  return v;
}

Verdict Verdict::predicted_fixed(Vertex x, BigCount size, double residual) {
  Verdict v;
  v.kind = VerdictKind::PredictedFixed;
  v.vertex = x;
  v.size = std::move(size);
  v.residual_ratio = residual;
  return v;
}

bool operator==(const TrialRecord& a, const TrialRecord& b) {
  return a.config == b.config && a.trial_index == b.trial_index && a.seed == b.seed && a.phases == b.phases &&
         a.simple_at_t4 == b.simple_at_t4 && a.unique_v == b.unique_v && a.verdict == b.verdict &&
         a.verdict_at == b.verdict_at && a.final_size_exact == b.final_size_exact &&
         a.final_size_predicted == b.final_size_predicted && a.stop_reason == b.stop_reason &&
         a.steps == b.steps && a.strategy_log == b.strategy_log;
}

}  // namespace ekrf
