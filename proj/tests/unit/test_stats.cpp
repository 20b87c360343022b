#include "doctest.h"

#include <cmath>

#include "ekrf/stats.hpp"
#include "ekrf/rng.hpp"

using namespace ekrf;

TEST_SUITE("stats") {

TEST_CASE("law values") {
  CHECK(law_value({Law::FixProbability, 0, 0, 1.0}) == 0.5);
  CHECK(law_value({Law::T3Tail, 0, 0, 0.0}) == 1.0);
  CHECK(law_value({Law::T3Tail, 0, 0, 1.0}) == doctest::Approx(0.846482).epsilon(1e-6));
  CHECK(law_value({Law::T4GapGeometric, 100, 10, 0.0}) == 1.0);
  CHECK(law_value({Law::T4GapGeometric, 100, 10, 1.0}) == doctest::Approx(1e5 / (1e4 + 1e5)));
  double prev = 2;
  for (double a = 0; a < 3; a += 0.1) {
    const double v = law_value({Law::T3Tail, 0, 0, a});
    CHECK(v < prev);
    prev = v;
  }
  prev = 2;
  for (double xi = 0; xi < 5; xi += 0.5) {
    const double v = law_value({Law::T4GapGeometric, 10000, 44, xi});
    CHECK(v < prev);
    prev = v;
  }
  CHECK(law_from_string("t4_scaled_exponential") == Law::T4ScaledExponential);
  CHECK_THROWS_AS(law_value({Law::T3Tail, 0, 0, -1}), std::invalid_argument);
}

TEST_CASE("empirical tail") {
  std::vector<double> s{1, 2, 3, 4};
  CHECK(empirical_tail(s, 2.5).value == 0.5);
  CHECK(empirical_tail(s, 0).value == 1.0);
  CHECK_THROWS_AS(empirical_tail(std::vector<double>{}, 1), std::invalid_argument);
  RngStream rng(9);
  std::vector<double> e;
  for (int i = 0; i < 2000; ++i) e.push_back(-std::log1p(-rng.uniform01()));
  auto est = empirical_tail(e, 1.0);
  CHECK(std::abs(est.value - std::exp(-1.0)) < 3 * est.se);
  std::vector<double> rev(e.rbegin(), e.rend());
  CHECK(empirical_tail(rev, 1.0).value == est.value);
}

TEST_CASE("KS distance") {
  auto exp_cdf = [](double x) { return x <= 0 ? 0.0 : 1 - std::exp(-x); };
  RngStream rng(10);
  std::vector<double> e;
  for (int i = 0; i < 10000; ++i) e.push_back(-std::log1p(-rng.uniform01()));
  CHECK(ks_distance(e, exp_cdf) < 0.02);
  std::vector<double> constant(40, 1.0);
  CHECK(ks_distance(constant, exp_cdf) == doctest::Approx(std::max(exp_cdf(1.0), 1 - exp_cdf(1.0))));
  std::vector<double> rev(e.rbegin(), e.rend());
  CHECK(ks_distance(rev, exp_cdf) == ks_distance(e, exp_cdf));
  CHECK_THROWS_AS(ks_distance(std::vector<double>(29, 1.0), exp_cdf), std::invalid_argument);
}

TEST_CASE("chi-square") {
  std::vector<std::uint64_t> equal{10, 10, 10};
  CHECK(chi_square_uniform(equal).statistic == 0.0);
  std::vector<std::uint64_t> skew{10, 0};
  auto c = chi_square_uniform(skew);
  CHECK(c.statistic == 10.0);
  CHECK(c.dof == 1);
  CHECK_THROWS_AS(chi_square_uniform(std::vector<std::uint64_t>{3, 3}), std::invalid_argument);
  CHECK(chi_square_quantile(0.999, 26) == doctest::Approx(54.0520).epsilon(1e-5));
  int below = 0;
  RngStream rng(11);
  const double limit = chi_square_quantile(0.999, 26);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<std::uint64_t> counts(27, 0);
    for (int i = 0; i < 100000; ++i) ++counts[rng.below(27)];
    below += chi_square_uniform(counts).statistic < limit;
  }
  CHECK(below >= 99);
  std::vector<std::uint64_t> a{10, 20, 30}, b{20, 40, 60};
  CHECK(chi_square_two_sample(a, b).statistic == doctest::Approx(0.0));
  CHECK(chi_square_two_sample(a, b).dof == 2);
}

TEST_CASE("summaries") {
  TrialRecord fixed;
  fixed.config.n = 27;
  fixed.config.r = 3;
  fixed.verdict = Verdict::fixed(1, BigCount(325));
  fixed.phases.t_k = {{3, 4}, {4, 5}};
  fixed.simple_at_t4 = true;
  fixed.unique_v = 1;
  TrialRecord other = fixed;
  other.verdict = Verdict::not_fixed();
  other.phases.t_k = {{3, 4}};
  std::vector<TrialRecord> recs{fixed, other};
  auto s = summarize(recs);
  CHECK(s.fixed == 0.5);
  CHECK(s.gap_one == 1.0);
  CHECK(s.simple_unique_v == 1.0);
  bool saw_fix = false;
  for (const auto& c : s.comparisons) {
    if (c.law == "fix_probability") {
      saw_fix = true;
      CHECK(c.theory == doctest::Approx(0.5));
    }
    if (c.law == "t4_tail" && c.parameter == 1.0) CHECK(c.empirical == 1.0);
  }
  CHECK(saw_fix);
  auto single = summarize(std::vector<TrialRecord>{fixed});
  CHECK(single.trials == 1);
  TrialRecord mixed = fixed;
  mixed.config.n = 28;
  recs.push_back(mixed);
  CHECK_THROWS_AS(summarize(recs), std::invalid_argument);
  CHECK_THROWS_AS(summarize(std::vector<TrialRecord>{}), std::invalid_argument);
}

}
