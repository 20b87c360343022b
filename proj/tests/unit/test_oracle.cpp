#include "doctest.h"

#include "ekrf/oracle.hpp"
#include "helpers.hpp"

using namespace ekrf;
using oracle::VertexMask;

TEST_SUITE("oracle") {

TEST_CASE("subset enumeration is complete and lexicographic") {
  std::vector<VertexMask> seen;
  oracle::for_each_subset(6, 3, [&](const VertexMask& m) { seen.push_back(m); });
  CHECK(seen.size() == 20);
  for (std::size_t i = 1; i < seen.size(); ++i) CHECK(lex_less(seen[i - 1], seen[i]));
  CHECK(seen.front().vertices() == std::vector<Vertex>{1, 2, 3});
  CHECK(seen.back().vertices() == std::vector<Vertex>{4, 5, 6});
}

TEST_CASE("vertex masks span both words") {
  std::vector<Vertex> vs{1, 64, 65, 128};
  auto m = VertexMask::of(vs);
  CHECK(m.count() == 4);
  CHECK(m.vertices() == vs);
  CHECK(m.test(65));
  CHECK_FALSE(m.test(66));
  CHECK_THROWS_AS(VertexMask::of(std::vector<Vertex>{129}), std::invalid_argument);
}

TEST_CASE("pool of a two-edge instance") {
  ConstraintInstance inst{7, 3, {{1, 2, 3}, {3, 4, 5}}, std::nullopt, std::nullopt};
  CHECK(oracle::enumerate_pool(inst).size() == 27);
  inst.required_vertex = 3;
  CHECK(oracle::enumerate_pool(inst).size() == 15);
  inst.required_vertex.reset();
  inst.excluded_vertex = 3;
  CHECK(oracle::enumerate_pool(inst).size() == 12);
}

TEST_CASE("filtering by an edge equals enumerating with it") {
  ConstraintInstance inst{9, 3, {{1, 2, 3}}, std::nullopt, std::nullopt};
  auto pool = oracle::enumerate_pool(inst);
  const Edge e = Edge::make({3, 4, 5}, 9, 3);
  auto filtered = oracle::filter_pool(pool, e);
  inst.edges.push_back({3, 4, 5});
  CHECK(filtered == oracle::enumerate_pool(inst));
  CHECK(oracle::filter_pool(filtered, e) == filtered);
}

TEST_CASE("pool cap") {
  ConstraintInstance inst{40, 10, {}, std::nullopt, std::nullopt};
  CHECK_THROWS_AS(oracle::enumerate_pool(inst), CapExceeded);
  ConstraintInstance big{130, 2, {}, std::nullopt, std::nullopt};
  CHECK_THROWS_AS(oracle::enumerate_pool(big), CapExceeded);
}

TEST_CASE("graph functional enumeration on K_3") {
  const double x = 0.3, y = 1.7;
  auto s = oracle::graph_functional_sums(3, x, y);
  CHECK(s.matching_f1 == doctest::Approx(3 * x * y * y).epsilon(1e-14));
  CHECK(s.matching_f2plus == 0.0);
  CHECK(s.nonmatching == doctest::Approx(3 * x * x * y * y * y + x * x * x * y * y * y).epsilon(1e-14));
  CHECK_THROWS_AS(oracle::graph_functional_sums(8, x, y), CapExceeded);
}

TEST_CASE("matching enumeration") {
  CHECK(oracle::matching_count_enumerated(4, 2) == 3);
  CHECK(oracle::matching_count_enumerated(5, 1) == 10);
  CHECK(oracle::matching_count_enumerated(6, 3) == 15);
  CHECK(oracle::matching_count_enumerated(7, 0) == 1);
  CHECK(oracle::matching_count_enumerated(5, 3) == 0);
}

TEST_CASE("grid enumeration") {
  const double x = 0.5, y = 2;
  CHECK(oracle::grid_functional_sum(1, 1, x, y) == doctest::Approx(x * y * y));
  CHECK(oracle::grid_functional_sum(2, 1, x, y) == doctest::Approx(6.0));
  CHECK(oracle::grid_exact_count(1, 1, 1) == 1);
  CHECK(oracle::grid_exact_count(2, 2, 1) == 1);
  CHECK(oracle::grid_exact_count(2, 2, 2) == 2);
  CHECK(oracle::grid_exact_count(4, 2, 2) == 1);
  CHECK_THROWS_AS(oracle::grid_functional_sum(5, 5, x, y), CapExceeded);
}

TEST_CASE("compensated summation") {
  oracle::CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000; ++i) s.add(1e-16);
  s.add(-1.0);
  CHECK(s.value() == doctest::Approx(1e-13).epsilon(1e-6));
}

}
