#pragma once

// Brute-force ground truth on small instances: explicit candidate pools and
// exhaustive enumerations of the appendix functionals.

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "ekrf/core.hpp"
#include "ekrf/counting.hpp"

namespace ekrf::oracle {

inline constexpr int kMaxPoolUniverse = 128;
inline constexpr std::uint64_t kDefaultPoolCap = 2'000'000;

/// Subset of [1, 128]; bit v-1 encodes vertex v.
struct VertexMask {
  std::array<std::uint64_t, 2> words{};

  static VertexMask of(std::span<const Vertex> vertices);
  static VertexMask of(const Edge& e) { return of(e.vertices()); }
  bool test(Vertex v) const { return (words[(v - 1) >> 6] >> ((v - 1) & 63)) & 1u; }
  void set(Vertex v) { words[(v - 1) >> 6] |= std::uint64_t{1} << ((v - 1) & 63); }
  bool intersects(const VertexMask& o) const { return (words[0] & o.words[0]) | (words[1] & o.words[1]); }
  int count() const;
  std::vector<Vertex> vertices() const;
  Edge to_edge() const;

  friend bool operator==(const VertexMask&, const VertexMask&) = default;
};

/// Lexicographic order of the sorted vertex lists.
bool lex_less(const VertexMask& a, const VertexMask& b);

struct VertexMaskHash {
  std::size_t operator()(const VertexMask& m) const noexcept {
    return static_cast<std::size_t>(m.words[0] * 0x9E3779B97F4A7C15ull ^ (m.words[1] + 0x7F4A7C15ull));
  }
};

/// All r-subsets satisfying an instance, lexicographically ordered.
struct CandidatePool {
  ConstraintInstance instance;
  std::vector<VertexMask> members;

  std::size_t size() const { return members.size(); }
  friend bool operator==(const CandidatePool& a, const CandidatePool& b) { return a.members == b.members; }
};

/// Visits every r-subset of [n] in lexicographic order (n <= 128).
void for_each_subset(int n, int r, const std::function<void(const VertexMask&)>& visit);

/// Throws CapExceeded when C(n, r) > pool_cap or n > 128.
CandidatePool enumerate_pool(const ConstraintInstance& inst, std::uint64_t pool_cap = kDefaultPoolCap);

/// Members of `pool` meeting e; idempotent.
CandidatePool filter_pool(const CandidatePool& pool, const Edge& e);

/// Counts r-subsets of [n] satisfying `pred`.
std::uint64_t count_subsets(int n, int r, const std::function<bool(const VertexMask&)>& pred,
                            std::uint64_t pool_cap = kDefaultPoolCap);

// ---------------------------------------------------------- functionals

inline constexpr int kMaxGraphT = 7;
inline constexpr int kMaxGridCells = 20;

/// Σ x^f y^s over nonempty subgraphs G of K_t split by class, where f is the
/// number of edges and s the number of non-isolated vertices.
struct GraphSums {
  double matching_f1 = 0;
  double matching_f2plus = 0;
  double nonmatching = 0;
};
GraphSums graph_functional_sums(int t, double x, double y);

/// Number of f-edge matchings in K_t by enumeration (t <= 8).
std::uint64_t matching_count_enumerated(int t, int f);

/// Σ x^h y^(u+l) over nonempty H ⊆ [tbar] × [delta]; h = |H|, u and l the
/// numbers of occupied rows and columns.
double grid_functional_sum(int tbar, int delta, double x, double y);

/// Number of H ⊆ [u] × [l] with |H| = h occupying every row and column.
std::uint64_t grid_exact_count(int h, int u, int l);

enum class FunctionalClass { MatchingF1, MatchingF2Plus, NonMatching };

/// Oracle entry point for a single class or the grid.
double oracle_count_functional(int t, double x, double y, FunctionalClass cls);

/// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double v);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0;
  double comp_ = 0;
};

}  // namespace ekrf::oracle
