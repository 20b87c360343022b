#include "ekrf/oracle.hpp"

#include <bit>
#include <cmath>

namespace ekrf::oracle {

VertexMask VertexMask::of(std::span<const Vertex> vertices) {
  VertexMask m;
  for (Vertex v : vertices) {
    if (v < 1 || v > kMaxPoolUniverse) throw std::invalid_argument("VertexMask: vertex outside [1, 128]");
    m.set(v);
  }
  return m;
}

int VertexMask::count() const { return std::popcount(words[0]) + std::popcount(words[1]); }

std::vector<Vertex> VertexMask::vertices() const {
  std::vector<Vertex> out;
  for (int w = 0; w < 2; ++w) {
    std::uint64_t bits = words[static_cast<std::size_t>(w)];
    while (bits) {
      out.push_back(static_cast<Vertex>(w * 64 + std::countr_zero(bits) + 1));
      bits &= bits - 1;
    }
  }
  return out;
}

Edge VertexMask::to_edge() const { return Edge::from_sorted(vertices()); }

bool lex_less(const VertexMask& a, const VertexMask& b) { return a.vertices() < b.vertices(); }

void for_each_subset(int n, int r, const std::function<void(const VertexMask&)>& visit) {
  if (n > kMaxPoolUniverse) throw CapExceeded("oracle enumeration supports n <= 128");
  if (r < 0 || r > n) return;
  std::vector<int> idx(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    VertexMask m;
    for (int i : idx) m.set(static_cast<Vertex>(i + 1));
    visit(m);
    int i = r - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - r + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < r; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

namespace {
void check_cap(int n, int r, std::uint64_t pool_cap) {
  if (n > kMaxPoolUniverse) throw CapExceeded("pool mode requires n <= 128");
  if (binom(n, r) > BigCount(pool_cap)) {
    throw CapExceeded("C(" + std::to_string(n) + ", " + std::to_string(r) + ") exceeds pool cap " +
                      std::to_string(pool_cap));
  }
}
}  // namespace

CandidatePool enumerate_pool(const ConstraintInstance& inst, std::uint64_t pool_cap) {
  inst.validate();
  check_cap(inst.universe_size, inst.subset_size, pool_cap);
  std::vector<VertexMask> constraints;
  for (const auto& e : inst.edges) constraints.push_back(VertexMask::of(e));
  CandidatePool pool;
  pool.instance = inst;
  for_each_subset(inst.universe_size, inst.subset_size, [&](const VertexMask& m) {
    if (inst.required_vertex && !m.test(*inst.required_vertex)) return;
    if (inst.excluded_vertex && m.test(*inst.excluded_vertex)) return;
    for (const auto& c : constraints) {
      if (!m.intersects(c)) return;
    }
    pool.members.push_back(m);
  });
  return pool;
}

CandidatePool filter_pool(const CandidatePool& pool, const Edge& e) {
  const VertexMask em = VertexMask::of(e);
  CandidatePool out;
  out.instance = pool.instance;
  out.instance.edges.emplace_back(e.vertices().begin(), e.vertices().end());
  out.members.reserve(pool.members.size());
  for (const auto& m : pool.members) {
    if (m.intersects(em)) out.members.push_back(m);
  }
  return out;
}

std::uint64_t count_subsets(int n, int r, const std::function<bool(const VertexMask&)>& pred,
                            std::uint64_t pool_cap) {
  check_cap(n, r, pool_cap);
  std::uint64_t count = 0;
  for_each_subset(n, r, [&](const VertexMask& m) {
    if (pred(m)) ++count;
  });
  return count;
}

// ---------------------------------------------------------- functionals

void CompensatedSum::add(double v) {
  const double t = sum_ + v;
  if (std::abs(sum_) >= std::abs(v)) {
    comp_ += (sum_ - t) + v;
  } else {
    comp_ += (v - t) + sum_;
  }
  sum_ = t;
}

GraphSums graph_functional_sums(int t, double x, double y) {
  if (t < 1) throw std::invalid_argument("graph functional: t must be positive");
  if (t > kMaxGraphT) throw CapExceeded("graph functional enumeration supports t <= " + std::to_string(kMaxGraphT));
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < t; ++i) {
    for (int j = i + 1; j < t; ++j) pairs.emplace_back(i, j);
  }
  const int m = static_cast<int>(pairs.size());
  std::vector<double> xp(static_cast<std::size_t>(m) + 1), yp(static_cast<std::size_t>(t) + 1);
  for (int i = 0; i <= m; ++i) xp[static_cast<std::size_t>(i)] = std::pow(x, i);
  for (int i = 0; i <= t; ++i) yp[static_cast<std::size_t>(i)] = std::pow(y, i);

  CompensatedSum f1, f2, nm;
  for (std::uint32_t sub = 1; sub < (std::uint32_t{1} << m); ++sub) {
    std::array<int, kMaxGraphT> deg{};
    for (int e = 0; e < m; ++e) {
      if (sub >> e & 1u) {
        ++deg[static_cast<std::size_t>(pairs[static_cast<std::size_t>(e)].first)];
        ++deg[static_cast<std::size_t>(pairs[static_cast<std::size_t>(e)].second)];
      }
    }
    int s = 0, maxd = 0;
    for (int v = 0; v < t; ++v) {
      s += deg[static_cast<std::size_t>(v)] > 0;
      maxd = std::max(maxd, deg[static_cast<std::size_t>(v)]);
    }
    const int f = std::popcount(sub);
    const double term = xp[static_cast<std::size_t>(f)] * yp[static_cast<std::size_t>(s)];
    if (maxd >= 2) {
      nm.add(term);
    } else if (f == 1) {
      f1.add(term);
    } else {
      f2.add(term);
    }
  }
  return {f1.value(), f2.value(), nm.value()};
}

namespace {
std::uint64_t count_matchings(int t, int f, int first_pair, std::uint32_t used,
                              const std::vector<std::pair<int, int>>& pairs) {
  if (f == 0) return 1;
  std::uint64_t total = 0;
  for (int p = first_pair; p < static_cast<int>(pairs.size()); ++p) {
    const auto [a, b] = pairs[static_cast<std::size_t>(p)];
    const std::uint32_t bits = (1u << a) | (1u << b);
    if (used & bits) continue;
    total += count_matchings(t, f - 1, p + 1, used | bits, pairs);
  }
  return total;
}
}  // namespace

std::uint64_t matching_count_enumerated(int t, int f) {
  if (t < 0 || f < 0) throw std::invalid_argument("matching count: negative argument");
  if (t > 16) throw CapExceeded("matching enumeration supports t <= 16");
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < t; ++i) {
    for (int j = i + 1; j < t; ++j) pairs.emplace_back(i, j);
  }
  return count_matchings(t, f, 0, 0, pairs);
}

double grid_functional_sum(int tbar, int delta, double x, double y) {
  if (tbar < 1 || delta < 1) throw std::invalid_argument("grid functional: dimensions must be positive");
  const int cells = tbar * delta;
  if (cells > kMaxGridCells) throw CapExceeded("grid enumeration supports tbar*delta <= " + std::to_string(kMaxGridCells));
  const std::uint32_t row_bits = (1u << delta) - 1;
  std::vector<double> xp(static_cast<std::size_t>(cells) + 1), yp(static_cast<std::size_t>(tbar + delta) + 1);
  for (std::size_t i = 0; i < xp.size(); ++i) xp[i] = std::pow(x, static_cast<double>(i));
  for (std::size_t i = 0; i < yp.size(); ++i) yp[i] = std::pow(y, static_cast<double>(i));
  CompensatedSum sum;
  for (std::uint32_t h = 1; h < (1u << cells); ++h) {
    int rows = 0;
    std::uint32_t cols = 0;
    for (int i = 0; i < tbar; ++i) {
      const std::uint32_t row = (h >> (i * delta)) & row_bits;
      rows += row != 0;
      cols |= row;
    }
    sum.add(xp[static_cast<std::size_t>(std::popcount(h))] *
            yp[static_cast<std::size_t>(rows + std::popcount(cols))]);
  }
  return sum.value();
}

std::uint64_t grid_exact_count(int h, int u, int l) {
  if (u < 1 || l < 1 || h < 0) throw std::invalid_argument("grid count: bad arguments");
  const int cells = u * l;
  if (cells > kMaxGridCells) throw CapExceeded("grid enumeration supports u*l <= " + std::to_string(kMaxGridCells));
  const std::uint32_t row_bits = (1u << l) - 1;
  std::uint64_t count = 0;
  for (std::uint32_t s = 0; s < (1u << cells); ++s) {
    if (std::popcount(s) != h) continue;
    bool all_rows = true;
    std::uint32_t cols = 0;
    for (int i = 0; i < u; ++i) {
      const std::uint32_t row = (s >> (i * l)) & row_bits;
      all_rows &= row != 0;
      cols |= row;
    }
    if (all_rows && cols == row_bits) ++count;
  }
  return count;
}

double oracle_count_functional(int t, double x, double y, FunctionalClass cls) {
  const GraphSums sums = graph_functional_sums(t, x, y);
  switch (cls) {
    case FunctionalClass::MatchingF1:
      return sums.matching_f1;
    case FunctionalClass::MatchingF2Plus:
      return sums.matching_f2plus;
    case FunctionalClass::NonMatching:
      return sums.nonmatching;
  }
  return 0;
}

}  // namespace ekrf::oracle
