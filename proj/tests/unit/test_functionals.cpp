#include "doctest.h"

#include "ekrf/functionals.hpp"
#include "ekrf/rng.hpp"

using namespace ekrf;

TEST_SUITE("functionals") {

TEST_CASE("single-edge class") {
  CHECK(graph_sum_f1({4, 0.1, 2}) == doctest::Approx(2.4).epsilon(1e-15));
  CHECK(graph_sum_f1({2, 0.3, 5}) == doctest::Approx(0.3 * 25).epsilon(1e-15));
  RngStream rng(4);
  for (int t = 2; t <= 7; ++t) {
    for (int i = 0; i < 5; ++i) {
      const double x = 0.01 + rng.uniform01(), y = 0.1 + 3 * rng.uniform01();
      CHECK(graph_sum_f1({t, x, y}) == doctest::Approx(oracle::graph_functional_sums(t, x, y).matching_f1).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(graph_sum_f1({1, 0.1, 2}), std::invalid_argument);
}

TEST_CASE("matching counts") {
  CHECK(matching_count(4, 2) == BigCount(3));
  CHECK(matching_count(9, 0) == BigCount(1));
  CHECK(matching_count(5, 1) == BigCount(10));
  for (int t = 0; t <= 8; ++t) {
    for (int f = 0; 2 * f <= t; ++f) CHECK(matching_count(t, f) == BigCount(oracle::matching_count_enumerated(t, f)));
  }
  CHECK_THROWS_AS(matching_count(3, 2), std::invalid_argument);
}

TEST_CASE("class sums") {
  const double x = 0.2, y = 1.5;
  CHECK(graph_sum_class({3, x, y}, GraphClass::NonMatching) ==
        doctest::Approx(3 * x * x * y * y * y + x * x * x * y * y * y).epsilon(1e-13));
  CHECK(graph_sum_class({3, x, y}, GraphClass::MatchingF2Plus) == 0.0);
  // three 2-matchings on K_4, each with s = 4
  CHECK(graph_sum_class({4, x, y}, GraphClass::MatchingF2Plus) == doctest::Approx(3 * x * x * std::pow(y, 4)).epsilon(1e-13));
  CHECK_THROWS_AS(graph_sum_class({8, x, y}, GraphClass::NonMatching), CapExceeded);
}

TEST_CASE("non-matching sum stays within a bounded multiple of t^4 x^2 y^3") {
  std::vector<double> ratios;
  for (double x = 1.0 / (36 * 16); x > 1e-6; x /= 2) {
    ratios.push_back(graph_sum_class({6, x, 4}, GraphClass::NonMatching) / (std::pow(6, 4) * x * x * 64));
  }
  for (std::size_t i = 1; i < ratios.size(); ++i) CHECK(ratios[i] <= ratios[i - 1] * (1 + 1e-12));
  CHECK(ratios.back() > 0);
}

TEST_CASE("grid") {
  CHECK(grid_sum({1, 1, 0.4, 3}) == doctest::Approx(grid_leading({1, 1, 0.4, 3})));
  CHECK(grid_sum({2, 1, 0.5, 2}) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(grid_leading({2, 1, 0.5, 2}) == doctest::Approx(4.0));
  const double near = grid_sum({3, 3, 1e-4, 10}) / grid_leading({3, 3, 1e-4, 10});
  const double nearer = grid_sum({3, 3, 1e-5, 10}) / grid_leading({3, 3, 1e-5, 10});
  CHECK(near >= 1.0);
  CHECK(near <= 1.2);
  CHECK(nearer < near);
  CHECK(nearer >= 1.0);
  CHECK_THROWS_AS(grid_sum({5, 5, 0.1, 1}), CapExceeded);
  CHECK_THROWS_AS(grid_sum({1, 1, -0.1, 1}), std::invalid_argument);
}

TEST_CASE("n(h,u,l) bound holds on every small grid") {
  CHECK(grid_bound_nhul(1, 1, 1) == BigCount(1));
  CHECK(grid_bound_nhul(2, 2, 1) == BigCount(2));
  for (int u = 1; u <= 16; ++u) {
    for (int l = 1; u * l <= 16; ++l) {
      for (int h = std::max(u, l); h <= u * l; ++h) {
        CHECK(BigCount(oracle::grid_exact_count(h, u, l)) <= grid_bound_nhul(h, u, l));
      }
    }
  }
  CHECK_THROWS_AS(grid_bound_nhul(1, 2, 1), std::invalid_argument);
}

}
