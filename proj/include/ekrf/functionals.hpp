#pragma once

// Graph functionals over subgraphs of K_t and the grid functional over
// [tbar] x [delta]: closed forms plus exact enumerations.

#include <cstdint>

#include "ekrf/exactmath.hpp"
#include "ekrf/oracle.hpp"

namespace ekrf {

struct GraphParams {
  int t = 0;
  double x = 0;
  double y = 0;
};

struct GridParams {
  int tbar = 0;
  int delta = 0;
  double x = 0;
  double y = 0;
};

enum class GraphClass { NonMatching, MatchingF2Plus };

/// C(t, 2) x y^2: the single-edge subgraphs.
double graph_sum_f1(const GraphParams& p);

/// Number of f-edge matchings in K_t: (t)_{2f} / (2^f f!).
BigCount matching_count(int t, int f);

/// Exact Σ x^f y^s over one class of nonempty subgraphs of K_t (t <= 7).
double graph_sum_class(const GraphParams& p, GraphClass cls);

/// Exact Σ x^h y^(u+l) over nonempty H ⊆ [tbar] x [delta] (tbar*delta <= 20).
double grid_sum(const GridParams& p);

/// tbar delta x y^2.
double grid_leading(const GridParams& p);

/// l^u C(ul, h-l) when u >= l, else u^l C(ul, h-u).
BigCount grid_bound_nhul(int h, int u, int l);

}  // namespace ekrf
