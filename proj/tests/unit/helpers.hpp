#pragma once

#include <vector>

#include "ekrf/core.hpp"
#include "ekrf/oracle.hpp"
#include "ekrf/rng.hpp"
#include "ekrf/sampler.hpp"

namespace testutil {

using ekrf::Edge;
using ekrf::ProcessState;
using ekrf::Vertex;

inline ProcessState make_state(int n, int r, const std::vector<std::vector<Vertex>>& edges) {
  ProcessState s(n, r);
  for (const auto& e : edges) s.apply_edge(Edge::make(e, n, r));
  return s;
}

// Random intersecting family grown by the pool sampler (n <= 128).
inline ProcessState random_state(int n, int r, int t, ekrf::RngStream& rng) {
  ProcessState s(n, r);
  for (int i = 0; i < t; ++i) {
    auto res = ekrf::pool_sample(s, rng);
    if (std::holds_alternative<ekrf::Exhausted>(res)) break;
    s.apply_edge(std::get<Edge>(res));
  }
  return s;
}

inline ekrf::oracle::VertexMask mask_of(const Edge& e) { return ekrf::oracle::VertexMask::of(e); }

// Brute force: r-subsets meeting every edge of `s`, optionally with a
// required or excluded vertex.
inline std::uint64_t brute_nu(const ProcessState& s, Vertex required = 0, Vertex excluded = 0) {
  std::vector<ekrf::oracle::VertexMask> edges;
  for (const auto& e : s.edges()) edges.push_back(mask_of(e));
  return ekrf::oracle::count_subsets(s.n(), s.r(), [&](const ekrf::oracle::VertexMask& m) {
    if (required && !m.test(required)) return false;
    if (excluded && m.test(excluded)) return false;
    for (const auto& e : edges) {
      if (!m.intersects(e)) return false;
    }
    return true;
  });
}

}  // namespace testutil
