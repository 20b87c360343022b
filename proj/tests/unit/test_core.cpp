#include "doctest.h"

#include "ekrf/core.hpp"
#include "helpers.hpp"

using namespace ekrf;
using testutil::make_state;

TEST_SUITE("core") {

TEST_CASE("edge validation") {
  CHECK(Edge::make({3, 1, 2}, 5, 3).to_string() == "{1,2,3}");
  CHECK_THROWS_AS(Edge::make({1, 1, 2}, 5, 3), std::invalid_argument);
  CHECK_THROWS_AS(Edge::make({1, 2}, 5, 3), std::invalid_argument);
  CHECK_THROWS_AS(Edge::make({0, 1, 2}, 5, 3), std::invalid_argument);
  CHECK_THROWS_AS(Edge::make({1, 2, 6}, 5, 3), std::invalid_argument);
  const Edge a = Edge::make({1, 2, 3}, 9, 3), b = Edge::make({3, 4, 5}, 9, 3);
  CHECK(a.intersects(b));
  CHECK(a.intersection(b) == std::vector<Vertex>{3});
  CHECK_FALSE(a.intersects(Edge::make({4, 5, 6}, 9, 3)));
}

TEST_CASE("apply_edge rejects duplicates and disjoint edges") {
  auto s = make_state(9, 3, {{1, 2, 3}});
  CHECK_THROWS_AS(s.apply_edge(Edge::make({1, 2, 3}, 9, 3)), std::invalid_argument);
  CHECK_THROWS_AS(s.apply_edge(Edge::make({4, 5, 6}, 9, 3)), std::invalid_argument);
  CHECK_THROWS_AS(s.apply_edge(Edge::make({1, 2, 3, 4}, 9, 4)), std::invalid_argument);
  CHECK(s.t() == 1);
}

TEST_CASE("degrees, witnesses and phase times") {
  auto s = make_state(20, 3, {{1, 2, 3}, {1, 4, 5}, {2, 4, 6}});
  CHECK(s.flags().maxdeg == 2);
  CHECK(s.flags().is_simple);
  CHECK(s.common_intersection().empty());
  CHECK(s.phases().t_common_empty == 3u);
  s.apply_edge(Edge::make({1, 6, 7}, 20, 3));
  CHECK(s.flags().maxdeg == 3);
  CHECK(s.flags().distinguished_v == Vertex{1});
  CHECK(s.phases().t3() == 4u);
  CHECK(s.phases().deg3_multiplicity == 1);
  CHECK(s.flags().is_simple);
}

TEST_CASE("non-simple pair detection") {
  auto s = make_state(20, 3, {{1, 2, 3}, {1, 2, 4}});
  CHECK_FALSE(s.flags().is_simple);
  CHECK(s.phases().t_nonsimple == 2u);
  CHECK(s.intersection(0, 1) == std::vector<Vertex>{1, 2});
}

TEST_CASE("incremental flags match recomputation along random runs") {
  RngStream rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 8 + static_cast<int>(rng.below(20));
    const int r = 2 + static_cast<int>(rng.below(3));
    ProcessState s(n, r);
    for (int step = 0; step < 12; ++step) {
      auto res = pool_sample(s, rng);
      if (std::holds_alternative<Exhausted>(res)) break;
      s.apply_edge(std::get<Edge>(res));
      CHECK(s.flags() == structural_flags(s));
      bool simple = true;
      for (std::size_t i = 0; i < s.t(); ++i) {
        for (std::size_t j = i + 1; j < s.t(); ++j) simple = simple && s.edges()[i].intersection(s.edges()[j]).size() == 1;
      }
      CHECK(s.flags().is_simple == simple);
    }
  }
}

TEST_CASE("witness table limit falls back to recomputation") {
  ProcessState full(12, 3), capped(12, 3, 0, 2);
  const std::vector<std::vector<Vertex>> edges{{1, 2, 3}, {1, 4, 5}, {2, 4, 6}, {3, 5, 6}, {1, 6, 7}};
  for (const auto& e : edges) {
    full.apply_edge(Edge::make(e, 12, 3));
    capped.apply_edge(Edge::make(e, 12, 3));
  }
  CHECK_FALSE(capped.witness_table_complete());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (std::size_t j = 0; j < edges.size(); ++j) {
      if (i != j) CHECK(full.intersection(i, j) == capped.intersection(i, j));
    }
  }
  CHECK(full.flags() == capped.flags());
  CHECK(full.phases() == capped.phases());
}

TEST_CASE("default delta0") {
  CHECK(default_delta0(100000, 94) == 1);
  CHECK(default_delta0(1000, 95) == 3);
  CHECK(default_delta0(1000000, 10) == 1);
  CHECK(default_delta0(1000, 40) == 2);
}

TEST_CASE("enum names round-trip") {
  for (auto k : {SamplerKind::Pool, SamplerKind::Rejection, SamplerKind::Structured, SamplerKind::Auto}) {
    CHECK(sampler_kind_from_string(to_string(k)) == k);
  }
  for (auto k : {StopReason::Completed, StopReason::VerdictFixed, StopReason::VerdictNotFixed,
                 StopReason::PredictedFixed, StopReason::Horizon, StopReason::SamplerExhausted}) {
    CHECK(stop_reason_from_string(to_string(k)) == k);
  }
  CHECK(stop_mode_from_string("exact") == StopMode::ExactCompletion);
  CHECK(verdict_kind_from_string("predicted_fixed") == VerdictKind::PredictedFixed);
  CHECK_THROWS_AS(sampler_kind_from_string("magic"), std::invalid_argument);
}

}
