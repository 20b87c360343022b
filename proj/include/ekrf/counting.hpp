#pragma once

// Exact counts of r-sets meeting every edge of a family, their star and
// non-star parts, and the closed forms for idealized simple families.

#include <optional>
#include <utility>
#include <vector>

#include "ekrf/core.hpp"
#include "ekrf/exactmath.hpp"

namespace ekrf {

inline constexpr int kDefaultIeCap = 22;

/// "Count the r-subsets of [n] meeting every listed set", optionally forced
/// to contain one vertex or avoid another.
struct ConstraintInstance {
  int universe_size = 0;
  int subset_size = 0;
  std::vector<std::vector<Vertex>> edges;
  std::optional<Vertex> required_vertex;
  std::optional<Vertex> excluded_vertex;

  static ConstraintInstance from_state(const ProcessState& state);
  /// Throws std::invalid_argument on empty or out-of-range sets.
  void validate() const;
};

/// Number of r-sets meeting every edge (chosen edges included). Throws
/// CapExceeded when more than ie_cap edges remain after reduction.
BigCount nu_all(const ConstraintInstance& inst, int ie_cap = kDefaultIeCap);

/// (sets containing v, sets avoiding v); the two parts sum to nu_all.
std::pair<BigCount, BigCount> nu_split(const ConstraintInstance& inst, Vertex v, int ie_cap = kDefaultIeCap);

/// Closed forms. They assume a simple family with maximum degree <= 2 (or a
/// single hub v of degree Δ) whose pairwise witnesses are all distinct.
/// A negative universe argument throws std::domain_error; a negative lower
/// argument yields zero.
BigCount nu_emp(int n, int r, int t);
BigCount nu_G(int n, int r, int t, int s, int f);
/// (ν_emp^A, ν_emp^B) for a hub of degree delta among t edges.
std::pair<BigCount, BigCount> nu_emp_AB(int n, int r, int t, int delta);

/// Sets containing v that meet tbar pairwise-simple edges avoiding v:
/// Σ_i (-1)^i C(tbar, i) C(n-1-ri+i(i-1)/2, r-1).
BigCount final_family_size(int n, int r, int tbar);

/// (r^2/n)^tbar C(n-1, r-1). Requires r^2 < n.
LogNum final_family_approx(int n, int r, int tbar);

/// r^t C(n, r-t). The relative error against the exact count is
/// O(t r^2/n + t^2 n/r^3), which is far from negligible at desk-scale (n, r).
LogNum nu_all_approx(int n, int r, int t);

}  // namespace ekrf
