#include "doctest.h"

#include "ekrf/process.hpp"
#include "helpers.hpp"

using namespace ekrf;
using oracle::VertexMask;
using testutil::brute_nu;
using testutil::make_state;

namespace {

TrialConfig exact_config(int n, int r) {
  TrialConfig c;
  c.n = n;
  c.r = r;
  c.sampler.kind = SamplerKind::Pool;
  c.stopping.mode = StopMode::ExactCompletion;
  return c;
}

}  // namespace

TEST_SUITE("process") {

TEST_CASE("nu_containing") {
  auto s = make_state(7, 3, {{1, 2, 3}, {3, 4, 5}});
  CHECK(nu_containing(s, 3) == BigCount(15));
  CHECK(nu_containing(make_state(7, 3, {{1, 2, 3}}), 7) == BigCount(12));
  CHECK(nu_containing(make_state(9, 3, {{1, 2, 3}, {1, 4, 5}}), 1) == binom(8, 2));
  RngStream rng(8);
  for (int i = 0; i < 40; ++i) {
    auto st = testutil::random_state(10, 3, 1 + static_cast<int>(rng.below(4)), rng);
    const Vertex x = 1 + static_cast<Vertex>(rng.below(10));
    CHECK(nu_containing(st, x) == BigCount(brute_nu(st, x)));
  }
}

TEST_CASE("verdict rules") {
  CHECK(verdict(make_state(7, 3, {{1, 2, 3}})).kind == VerdictKind::Undetermined);
  CHECK(verdict(make_state(9, 3, {{1, 2, 3}, {3, 4, 5}, {1, 4, 6}})).kind == VerdictKind::NotFixed);

  // Every set meeting {1,2}, {1,3}, {1,4} contains 1.
  auto star = make_state(6, 2, {{1, 2}, {1, 3}, {1, 4}});
  auto v = verdict(star);
  CHECK(v.kind == VerdictKind::Fixed);
  CHECK(v.vertex == Vertex{1});
  CHECK(v.size == BigCount(5));
  // the same verdict from the explicit pool
  Sampler sampler(SamplerSettings{SamplerKind::Pool});
  RngStream rng(1);
  (void)sampler.next(star, rng);
  VerdictOptions opts;
  opts.pool = sampler.remaining_pool(star);
  CHECK(exact_verdict(star, opts) == v);
}

TEST_CASE("Fixed verdicts agree with running the pool dry") {
  RngStream rng(31);
  int fixed_seen = 0;
  for (int trial = 0; trial < 200 && fixed_seen < 20; ++trial) {
    ProcessState s(8, 3);
    Sampler sampler(SamplerSettings{SamplerKind::Pool});
    std::optional<Verdict> early;
    while (true) {
      auto out = sampler.next(s, rng);
      if (std::holds_alternative<Exhausted>(out.result)) break;
      s.apply_edge(std::get<Edge>(out.result));
      if (!early) early = exact_verdict(s);
    }
    REQUIRE(early);
    if (early->kind == VerdictKind::Fixed) {
      ++fixed_seen;
      CHECK(BigCount(s.t()) == *early->size);
      CHECK(s.common_intersection().size() >= 1);
    } else {
      CHECK(s.common_intersection().empty());
    }
  }
  CHECK(fixed_seen > 0);
}

TEST_CASE("predicted verdict on a hub whose avoiding candidates are rare") {
  // Ten edges through 1, one edge avoiding it, at n large enough that a
  // set avoiding 1 must hit ten disjoint blocks.
  const int n = 400, r = 12;
  std::vector<std::vector<Vertex>> edges;
  std::vector<Vertex> avoid;
  Vertex next = 2;
  for (int i = 0; i < 10; ++i) {
    std::vector<Vertex> e{1};
    while (e.size() < static_cast<std::size_t>(r)) e.push_back(next++);
    avoid.push_back(e[1]);
    edges.push_back(e);
  }
  while (avoid.size() < static_cast<std::size_t>(r)) avoid.push_back(next++);
  std::sort(avoid.begin(), avoid.end());
  edges.push_back(avoid);
  auto s = make_state(n, r, edges);
  VerdictOptions opts;
  opts.eps_fix = 1e-3;
  auto pv = predicted_verdict(s, opts);
  REQUIRE(pv);
  CHECK(pv->vertex == Vertex{1});
  CHECK(*pv->residual_ratio <= 1e-3);
  CHECK(*pv->size == BigCount(1) + final_family_size(n, r, 1));
  CHECK(*pv->size == BigCount(1) + nu_containing(s, 1));
  opts.eps_fix = 1e-30;
  CHECK_FALSE(predicted_verdict(s, opts));
}

TEST_CASE("step profile") {
  auto empty = step_probability_profile(ProcessState(9, 3));
  REQUIRE(empty.p_keeps_simple);
  CHECK(*empty.p_keeps_simple == 1.0);

  // 48 sets meet both edges at n = 9 (27 is the n = 7 count), so 46 remain.
  auto s = make_state(9, 3, {{1, 2, 3}, {3, 4, 5}});
  auto p = step_probability_profile(s);
  CHECK(p.nu_all == BigCount(brute_nu(s)));
  CHECK(p.pool == BigCount(46));
  CHECK(p.keeps_simple == BigCount(16));
  CHECK(p.nu_emp_closed == BigCount(16));
  CHECK(*p.p_keeps_simple == doctest::Approx(16.0 / 46));
  std::uint64_t keeps = 0;
  oracle::for_each_subset(9, 3, [&](const VertexMask& m) {
    const Edge e = m.to_edge();
    bool meets = true;
    for (const auto& f : s.edges()) meets = meets && e.intersects(f);
    if (meets && !s.contains_edge(e)) keeps += classify_next_edge(s, e).keeps_simple_maxdeg2;
  });
  CHECK(keeps == 16);

  auto hub = make_state(20, 4, {{2, 5, 8, 11}, {1, 2, 3, 4}, {1, 5, 6, 7}, {1, 8, 9, 10}});
  auto q = step_probability_profile(hub);
  CHECK(q.v == Vertex{1});
  CHECK(q.emp_A == BigCount(36));
  CHECK(q.emp_B == BigCount(8));
  REQUIRE(q.emp_AB_closed);
  CHECK(q.emp_AB_closed->first == BigCount(36));
  CHECK(q.emp_AB_closed->second == BigCount(8));
  CHECK(*q.p_hits_v + *q.p_avoids_v == doctest::Approx(1.0));
  CHECK(*q.nu_A == BigCount(brute_nu(hub, 1)));
}

TEST_CASE("next-edge classification") {
  auto s = make_state(9, 3, {{1, 2, 3}, {3, 4, 5}});
  auto c = classify_next_edge(s, Edge::make({1, 4, 6}, 9, 3));
  CHECK(c.keeps_simple_maxdeg2);
  c = classify_next_edge(s, Edge::make({3, 6, 7}, 9, 3), Vertex{3});
  CHECK(c.keeps_simple);
  CHECK(c.new_maxdeg == 3);
  CHECK_FALSE(c.keeps_simple_maxdeg2);
  CHECK(c.hits_v == true);
  CHECK_FALSE(classify_next_edge(s, Edge::make({1, 2, 4}, 9, 3)).keeps_simple);
}

TEST_CASE("exact completion at r > n/2 runs through every set") {
  auto rec = run_trial(exact_config(20, 11), 123);
  CHECK(rec.stop_reason == StopReason::Completed);
  CHECK(rec.final_size_exact == binom(20, 11));
  CHECK(rec.verdict.kind == VerdictKind::NotFixed);
  CHECK(rec.steps == 167960);
}

TEST_CASE("exact trials at (27, 3)") {
  int fixed = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto rec = run_trial(exact_config(27, 3), seed);
    CHECK(rec.stop_reason == StopReason::Completed);
    if (rec.verdict.kind == VerdictKind::Fixed) {
      ++fixed;
      CHECK(rec.final_size_exact == BigCount(325));
    } else {
      CHECK(rec.verdict.kind == VerdictKind::NotFixed);
    }
    CHECK(run_trial(exact_config(27, 3), seed) == rec);
  }
  CHECK(fixed > 0);
}

TEST_CASE("early stop on verdicts") {
  auto cfg = exact_config(27, 3);
  cfg.stopping.continue_after_verdict = false;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto rec = run_trial(cfg, seed);
    CHECK((rec.stop_reason == StopReason::VerdictFixed || rec.stop_reason == StopReason::VerdictNotFixed));
    if (rec.stop_reason == StopReason::VerdictFixed) CHECK(rec.final_size_exact == BigCount(325));
  }
}

TEST_CASE("structural smoke run at n = 10^5") {
  TrialConfig cfg;
  cfg.n = 100000;
  cfg.r = 80;
  cfg.stopping.t_max = 60;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto rec = run_trial(cfg, seed);
    CHECK((rec.stop_reason == StopReason::PredictedFixed || rec.stop_reason == StopReason::Horizon));
    CHECK(rec.phases.t3());
    CHECK(rec.phases.t4());
    if (rec.stop_reason == StopReason::PredictedFixed) {
      CHECK(rec.final_size_predicted);
      CHECK(*rec.verdict.residual_ratio <= cfg.stopping.eps_fix);
    }
    std::uint64_t logged = 0;
    for (const auto& run : rec.strategy_log) logged += run.steps;
    CHECK(logged == rec.steps);
  }
}

TEST_CASE("horizon") {
  TrialConfig cfg;
  cfg.n = 1000;
  cfg.r = 10;
  cfg.stopping.t_max = 3;
  auto rec = run_trial(cfg, 4);
  CHECK(rec.stop_reason == StopReason::Horizon);
  CHECK(rec.steps == 3);
}

TEST_CASE("structural runs stop at the counting horizon") {
  TrialConfig cfg;
  cfg.n = 10000;
  cfg.r = 44;
  cfg.sampler.ie_cap = 4;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto rec = run_trial(cfg, seed);
    CHECK(rec.steps <= 4);
    if (rec.stop_reason != StopReason::PredictedFixed) {
      CHECK(rec.stop_reason == StopReason::Horizon);
      CHECK(rec.steps == 4);
    }
  }
}

TEST_CASE("configuration checks and failures") {
  TrialConfig bad;
  bad.n = 10;
  bad.r = 10;
  CHECK_THROWS_AS(run_trial(bad, 1), std::invalid_argument);
  CHECK_THROWS_AS(run_trial(exact_config(100, 10), 1), std::invalid_argument);
  CHECK_FALSE(regime_warnings(10, 6).empty());
  CHECK(regime_warnings(100000, 60).empty());
  CHECK_FALSE(regime_warnings(100000, 40).empty());

  TrialConfig tight;
  tight.n = 2000;
  tight.r = 10;
  tight.sampler.kind = SamplerKind::Rejection;
  tight.sampler.rejection_cap = 1;
  tight.stopping.t_max = 50;
  bool threw = false;
  for (std::uint64_t seed = 0; seed < 5 && !threw; ++seed) {
    try {
      run_trial(tight, seed);
    } catch (const TrialError& e) {
      threw = true;
      CHECK(e.replay().find("seed=") != std::string::npos);
      CHECK(std::string(e.what()).find("cap") != std::string::npos);
    }
  }
  CHECK(threw);
}

}
