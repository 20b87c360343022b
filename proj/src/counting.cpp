#include "ekrf/counting.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "ekrf/detail/inclusion_exclusion.hpp"

namespace ekrf {

namespace detail {

SignedHistogram avoid_histogram(std::span<const TypeCount> types, std::uint64_t free_count,
                                std::uint32_t cover_mask) {
  const int u = std::popcount(cover_mask);
  const std::size_t size = std::size_t{1} << u;
  std::vector<std::uint64_t> within(size, 0);  // after the transform: vertices whose type ⊆ X
  std::uint64_t total = 0;
  for (const TypeCount& tc : types) {
    within[extract_bits(tc.mask, cover_mask)] += tc.count;
    total += tc.count;
  }
  for (int b = 0; b < u; ++b) {
    const std::size_t bit = std::size_t{1} << b;
    for (std::size_t x = 0; x < size; ++x) {
      if (x & bit) within[x] += within[x ^ bit];
    }
  }
  SignedHistogram hist;
  hist.base = free_count;
  hist.coeff.assign(total + 1, 0);
  const std::size_t full = size - 1;
  for (std::size_t s = 0; s < size; ++s) {
    hist.coeff[within[full ^ s]] += (std::popcount(s) & 1) ? -1 : 1;
  }
  return hist;
}

BigCount evaluate_histogram(const SignedHistogram& hist, std::int64_t k, BinomialTable& binomials) {
  mpz_class acc = 0;
  if (k < 0) return BigCount{};
  for (std::size_t i = 0; i < hist.coeff.size(); ++i) {
    const std::int64_t c = hist.coeff[i];
    if (c == 0) continue;
    const mpz_class& b = binomials.get(static_cast<std::int64_t>(hist.base + i), k);
    if (c > 0) {
      mpz_addmul_ui(acc.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(c));
    } else {
      mpz_submul_ui(acc.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(-c));
    }
  }
  return BigCount(std::move(acc));
}

BigCount count_covering(std::span<const TypeCount> types, std::uint64_t free_count, std::uint32_t cover_mask,
                        std::int64_t k, BinomialTable& binomials) {
  return evaluate_histogram(avoid_histogram(types, free_count, cover_mask), k, binomials);
}

}  // namespace detail

namespace {

constexpr int kMaskBits = 30;

// Core routine: k-subsets of [n] \ (required ∪ excluded), plus the required
// vertices, meeting every edge.
BigCount count_with(int n, int r, const std::vector<std::vector<Vertex>>& edges, const std::vector<Vertex>& required,
                    const std::vector<Vertex>& excluded, int ie_cap) {
  const std::int64_t k = r - static_cast<std::int64_t>(required.size());
  if (k < 0) return BigCount{};
  auto is_in = [](const std::vector<Vertex>& set, Vertex v) {
    return std::find(set.begin(), set.end(), v) != set.end();
  };

  std::vector<std::vector<Vertex>> kept;
  for (const auto& e : edges) {
    if (std::any_of(e.begin(), e.end(), [&](Vertex v) { return is_in(required, v); })) continue;
    std::vector<Vertex> restricted;
    for (Vertex v : e) {
      if (!is_in(excluded, v)) restricted.push_back(v);
    }
    if (restricted.empty()) return BigCount{};
    kept.push_back(std::move(restricted));
  }
  const int cap = std::min(ie_cap, kMaskBits);
  if (static_cast<int>(kept.size()) > cap) {
    throw CapExceeded("inclusion-exclusion over " + std::to_string(kept.size()) + " sets exceeds cap " +
                      std::to_string(cap));
  }

  std::vector<std::uint32_t> type(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    for (Vertex v : kept[i]) type[v] |= std::uint32_t{1} << i;
  }
  std::vector<std::uint32_t> masks;
  for (Vertex v = 1; v <= static_cast<Vertex>(n); ++v) {
    if (type[v] != 0) masks.push_back(type[v]);
  }
  std::sort(masks.begin(), masks.end());
  std::vector<detail::TypeCount> types;
  for (std::uint32_t m : masks) {
    if (!types.empty() && types.back().mask == m) {
      ++types.back().count;
    } else {
      types.push_back({m, 1});
    }
  }
  const std::uint64_t universe = static_cast<std::uint64_t>(n) - required.size() - excluded.size();
  const std::uint64_t free_count = universe - masks.size();
  const std::uint32_t cover = kept.empty() ? 0u : static_cast<std::uint32_t>((std::uint64_t{1} << kept.size()) - 1);
  BinomialTable binomials;
  return detail::count_covering(types, free_count, cover, k, binomials);
}

void check_regime(std::int64_t universe, const char* what) {
  if (universe < 0) throw std::domain_error(std::string(what) + ": parameter regime violated (negative universe)");
}

BigCount pow_count(std::int64_t base, std::int64_t exp) {
  if (base < 0) throw std::domain_error("negative base in closed form");
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(exp));
  return BigCount(std::move(out));
}

}  // namespace

ConstraintInstance ConstraintInstance::from_state(const ProcessState& state) {
  ConstraintInstance inst;
  inst.universe_size = state.n();
  inst.subset_size = state.r();
  for (const Edge& e : state.edges()) inst.edges.emplace_back(e.vertices().begin(), e.vertices().end());
  return inst;
}

void ConstraintInstance::validate() const {
  if (universe_size < 1 || subset_size < 0) throw std::invalid_argument("instance: bad (n, r)");
  auto in_range = [&](Vertex v) { return v >= 1 && v <= static_cast<Vertex>(universe_size); };
  for (const auto& e : edges) {
    if (e.empty()) throw std::invalid_argument("instance: empty constraint set");
    for (Vertex v : e) {
      if (!in_range(v)) throw std::invalid_argument("instance: vertex " + std::to_string(v) + " out of range");
    }
  }
  if (required_vertex && !in_range(*required_vertex)) throw std::invalid_argument("instance: bad required vertex");
  if (excluded_vertex && !in_range(*excluded_vertex)) throw std::invalid_argument("instance: bad excluded vertex");
  if (required_vertex && excluded_vertex && *required_vertex == *excluded_vertex) {
    throw std::invalid_argument("instance: required and excluded vertex coincide");
  }
}

BigCount nu_all(const ConstraintInstance& inst, int ie_cap) {
  inst.validate();
  std::vector<Vertex> required, excluded;
  if (inst.required_vertex) required.push_back(*inst.required_vertex);
  if (inst.excluded_vertex) excluded.push_back(*inst.excluded_vertex);
  return count_with(inst.universe_size, inst.subset_size, inst.edges, required, excluded, ie_cap);
}

std::pair<BigCount, BigCount> nu_split(const ConstraintInstance& inst, Vertex v, int ie_cap) {
  inst.validate();
  if (v < 1 || v > static_cast<Vertex>(inst.universe_size)) throw std::invalid_argument("nu_split: bad vertex");
  BigCount total = nu_all(inst, ie_cap);
  if (inst.required_vertex == v) return {total, BigCount{}};
  if (inst.excluded_vertex == v) return {BigCount{}, total};
  std::vector<Vertex> required{v}, excluded;
  if (inst.required_vertex) required.push_back(*inst.required_vertex);
  if (inst.excluded_vertex) excluded.push_back(*inst.excluded_vertex);
  BigCount with_v = count_with(inst.universe_size, inst.subset_size, inst.edges, required, excluded, ie_cap);
  BigCount without_v = total - with_v;
  return {std::move(with_v), std::move(without_v)};
}

BigCount nu_emp(int n, int r, int t) { return nu_G(n, r, t, 0, 0); }

BigCount nu_G(int n, int r, int t, int s, int f) {
  if (t < 0 || s < 0 || f < 0 || s > t) throw std::invalid_argument("nu_G: need 0 <= s <= t, f >= 0");
  const std::int64_t per_edge = static_cast<std::int64_t>(r) - t + 1;
  const std::int64_t universe = n - static_cast<std::int64_t>(t) * per_edge - static_cast<std::int64_t>(t) * (t - 1) / 2;
  check_regime(universe, "nu_G");
  if (per_edge < 0) throw std::domain_error("nu_G: parameter regime violated (t > r + 1)");
  return pow_count(per_edge, t - s) * binom(universe, static_cast<std::int64_t>(r) - t + s - f);
}

std::pair<BigCount, BigCount> nu_emp_AB(int n, int r, int t, int delta) {
  if (delta < 3 || delta > t) throw std::invalid_argument("nu_emp_AB: need 3 <= delta <= t");
  const std::int64_t tbar = t - delta;
  const std::int64_t per_edge = static_cast<std::int64_t>(r) - t + 1;
  const std::int64_t per_hub_edge = static_cast<std::int64_t>(r) - tbar - 1;
  const std::int64_t distinct = static_cast<std::int64_t>(r) * t - tbar * (tbar - 1) / 2 - delta * tbar - (delta - 1);
  const std::int64_t universe = n - distinct;
  check_regime(universe, "nu_emp_AB");
  if (per_edge < 0 || per_hub_edge < 0) throw std::domain_error("nu_emp_AB: parameter regime violated");
  BigCount a = pow_count(per_edge, tbar) * binom(universe, r - tbar - 1);
  BigCount b = pow_count(per_edge, tbar) * pow_count(per_hub_edge, delta) * binom(universe, r - t);
  return {std::move(a), std::move(b)};
}

BigCount final_family_size(int n, int r, int tbar) {
  if (tbar < 0) throw std::invalid_argument("final_family_size: negative tbar");
  if (static_cast<std::int64_t>(tbar) * r + 1 > n) {
    throw std::domain_error("final_family_size: tbar*r + 1 > n, no simple configuration avoiding v fits");
  }
  mpz_class acc = 0;
  for (std::int64_t i = 0; i <= tbar; ++i) {
    const std::int64_t top = n - 1 - static_cast<std::int64_t>(r) * i + i * (i - 1) / 2;
    mpz_class term = binom(tbar, i).raw() * binom(top, r - 1).raw();
    if (i & 1) {
      acc -= term;
    } else {
      acc += term;
    }
  }
  return BigCount(std::move(acc));
}

LogNum final_family_approx(int n, int r, int tbar) {
  if (static_cast<std::int64_t>(r) * r >= n) throw std::domain_error("final_family_approx: requires r^2 < n");
  if (tbar < 0) throw std::invalid_argument("final_family_approx: negative tbar");
  const double scale = 2.0 * std::log(static_cast<double>(r)) - std::log(static_cast<double>(n));
  return LogNum::from_log(tbar * scale + log_binom_value(n - 1, r - 1));
}

LogNum nu_all_approx(int n, int r, int t) {
  if (t < 0 || t > r) throw std::invalid_argument("nu_all_approx: need 0 <= t <= r");
  if (t == 0) return LogNum::from_count(binom(n, r));
  return LogNum::from_log(t * std::log(static_cast<double>(r)) + log_binom_value(n, r - t));
}

}  // namespace ekrf
