#include "ekrf/sampler.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <unordered_set>

#include "ekrf/counting.hpp"
#include "ekrf/detail/inclusion_exclusion.hpp"

namespace ekrf {

namespace detail {

// Vertex types of the used vertices for one state; everything a structured
// draw needs besides the random stream.
struct StructuredPlan {
  std::size_t t = 0;
  int n = 0;
  int r = 0;
  std::vector<Vertex> used;  // ascending
  std::vector<std::uint32_t> group_mask;
  std::vector<std::vector<Vertex>> group_members;
  BigCount total;  // nu_all, chosen edges included
};

}  // namespace detail

namespace {

using detail::StructuredPlan;
using detail::TypeCount;
using oracle::VertexMask;

// k distinct values of [0, m), ascending (Floyd).
std::vector<std::uint64_t> floyd_draw(std::uint64_t m, std::uint64_t k, RngStream& rng) {
  std::vector<std::uint64_t> out;
  out.reserve(k);
  for (std::uint64_t j = m - k; j < m; ++j) {
    const std::uint64_t x = rng.below(j + 1);
    auto it = std::lower_bound(out.begin(), out.end(), x);
    if (it != out.end() && *it == x) {
      out.insert(std::lower_bound(out.begin(), out.end(), j), j);
    } else {
      out.insert(it, x);
    }
  }
  return out;
}

std::uint32_t full_mask(std::size_t t) {
  return t == 0 ? 0u : static_cast<std::uint32_t>((std::uint64_t{1} << t) - 1);
}

StructuredPlan build_plan(const ProcessState& state, int ie_cap, BinomialTable& binomials) {
  const std::size_t t = state.t();
  if (static_cast<int>(t) > std::min(ie_cap, 30)) {
    throw CapExceeded("structured sampling over " + std::to_string(t) + " edges exceeds cap " +
                      std::to_string(ie_cap));
  }
  StructuredPlan plan;
  plan.t = t;
  plan.n = state.n();
  plan.r = state.r();
  plan.used = state.used_vertices();
  std::map<std::uint32_t, std::vector<Vertex>> groups;
  for (Vertex u : plan.used) {
    std::uint32_t mask = 0;
    for (std::uint32_t i : state.incidence(u)) mask |= std::uint32_t{1} << i;
    groups[mask].push_back(u);
  }
  std::vector<TypeCount> types;
  for (auto& [mask, members] : groups) {
    types.push_back({mask, members.size()});
    plan.group_mask.push_back(mask);
    plan.group_members.push_back(std::move(members));
  }
  const std::uint64_t untouched = static_cast<std::uint64_t>(plan.n) - plan.used.size();
  plan.total = detail::count_covering(types, untouched, full_mask(t), plan.r, binomials);
  return plan;
}

// The i-th (0-based) vertex of [n] outside `used`.
Vertex select_untouched(const std::vector<Vertex>& used, int n, std::uint64_t i) {
  Vertex lo = 1, hi = static_cast<Vertex>(n);
  while (lo < hi) {
    const Vertex mid = lo + (hi - lo) / 2;
    const std::uint64_t below_mid =
        mid - static_cast<std::uint64_t>(std::upper_bound(used.begin(), used.end(), mid) - used.begin());
    if (below_mid >= i + 1) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

struct ActiveType {
  std::uint32_t key;  // type restricted to the constraints still uncovered
  std::vector<std::size_t> groups;
  std::uint64_t count;
};

// One exact draw from the nu_all family (chosen edges included).
//
// Types are decided one at a time: the number k of vertices taken from type
// j has weight C(c_j, k) N(rest, R - k, U_k), where N counts completions
// covering the still-uncovered constraints U_k. Those weights sum to the
// count of the current subproblem, so the marginal is exact.
std::vector<Vertex> structured_draw_once(const StructuredPlan& plan, RngStream& rng, BinomialTable& binomials) {
  std::uint32_t uncovered = full_mask(plan.t);
  std::int64_t remaining_size = plan.r;
  mpz_class remaining = plan.total.raw();
  const std::uint64_t untouched = static_cast<std::uint64_t>(plan.n) - plan.used.size();

  std::vector<ActiveType> active;
  std::vector<std::size_t> free_groups;
  std::uint64_t free_explicit = 0;
  for (std::size_t g = 0; g < plan.group_mask.size(); ++g) {
    active.push_back({plan.group_mask[g], {g}, plan.group_members[g].size()});
  }

  auto recompress = [&] {
    std::vector<ActiveType> merged;
    std::map<std::uint32_t, std::size_t> index;
    for (auto& a : active) {
      const std::uint32_t key = a.key & uncovered;
      if (key == 0) {
        for (std::size_t g : a.groups) {
          free_groups.push_back(g);
          free_explicit += plan.group_members[g].size();
        }
        continue;
      }
      auto [it, inserted] = index.emplace(key, merged.size());
      if (inserted) {
        merged.push_back({key, std::move(a.groups), a.count});
      } else {
        auto& m = merged[it->second];
        m.groups.insert(m.groups.end(), a.groups.begin(), a.groups.end());
        m.count += a.count;
      }
    }
    active = std::move(merged);
  };
  recompress();

  std::vector<Vertex> chosen;
  while (!active.empty()) {
    std::size_t j = 0;
    for (std::size_t i = 1; i < active.size(); ++i) {
      const int pi = std::popcount(active[i].key), pj = std::popcount(active[j].key);
      if (pi > pj || (pi == pj && (active[i].count > active[j].count ||
                                   (active[i].count == active[j].count && active[i].key < active[j].key)))) {
        j = i;
      }
    }
    std::vector<TypeCount> rest;
    for (std::size_t i = 0; i < active.size(); ++i) {
      if (i != j) rest.push_back({active[i].key, active[i].count});
    }
    const std::uint64_t free_total = untouched + free_explicit;
    mpz_class x = rng.below(remaining);

    const auto keep_hist = detail::avoid_histogram(rest, free_total, uncovered);
    BigCount w0 = detail::evaluate_histogram(keep_hist, remaining_size, binomials);
    if (x < w0.raw()) {
      remaining = w0.raw();
      active.erase(active.begin() + static_cast<std::ptrdiff_t>(j));
      continue;
    }
    x -= w0.raw();

    const std::uint32_t next_uncovered = uncovered & ~active[j].key;
    const auto take_hist = detail::avoid_histogram(rest, free_total, next_uncovered);
    const std::uint64_t c = active[j].count;
    std::int64_t picked = 0;
    for (std::int64_t k = 1; k <= std::min<std::int64_t>(static_cast<std::int64_t>(c), remaining_size); ++k) {
      BigCount base = detail::evaluate_histogram(take_hist, remaining_size - k, binomials);
      mpz_class w = binom(static_cast<std::int64_t>(c), k).raw() * base.raw();
      if (x < w) {
        picked = k;
        remaining = base.raw();
        break;
      }
      x -= w;
    }
    if (picked == 0) throw std::logic_error("structured sampler: weights do not sum to the subproblem count");

    std::vector<Vertex> members;
    for (std::size_t g : active[j].groups) {
      members.insert(members.end(), plan.group_members[g].begin(), plan.group_members[g].end());
    }
    for (std::uint64_t idx : floyd_draw(members.size(), static_cast<std::uint64_t>(picked), rng)) {
      chosen.push_back(members[idx]);
    }
    remaining_size -= picked;
    uncovered = next_uncovered;
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(j));
    recompress();
  }

  if (uncovered != 0) throw std::logic_error("structured sampler: constraints left uncovered");
  std::vector<Vertex> explicit_free;
  for (std::size_t g : free_groups) {
    explicit_free.insert(explicit_free.end(), plan.group_members[g].begin(), plan.group_members[g].end());
  }
  const std::uint64_t free_total = untouched + explicit_free.size();
  if (remaining != binom(static_cast<std::int64_t>(free_total), remaining_size).raw()) {
    throw std::logic_error("structured sampler: free-pool count mismatch");
  }
  for (std::uint64_t idx : floyd_draw(free_total, static_cast<std::uint64_t>(remaining_size), rng)) {
    chosen.push_back(idx < explicit_free.size() ? explicit_free[idx]
                                                : select_untouched(plan.used, plan.n, idx - explicit_free.size()));
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

SampleResult structured_from_plan(const StructuredPlan& plan, const ProcessState& state, RngStream& rng,
                                  BinomialTable& binomials) {
  if (plan.total == BigCount(plan.t)) return Exhausted{};
  while (true) {
    Edge e = Edge::from_sorted(structured_draw_once(plan, rng, binomials));
    if (!state.contains_edge(e)) return e;
  }
}

std::vector<VertexMask> unchosen_pool(const ProcessState& state, std::uint64_t pool_cap) {
  auto pool = oracle::enumerate_pool(ConstraintInstance::from_state(state), pool_cap);
  std::unordered_set<VertexMask, oracle::VertexMaskHash> chosen;
  for (const Edge& e : state.edges()) chosen.insert(VertexMask::of(e));
  std::erase_if(pool.members, [&](const VertexMask& m) { return chosen.contains(m); });
  return std::move(pool.members);
}

bool pool_feasible(int n, int r, std::uint64_t pool_cap) {
  return n <= oracle::kMaxPoolUniverse && binom(n, r) <= BigCount(pool_cap);
}

SamplerKind choose_counting_strategy(const ProcessState& state, const SamplerSettings& settings,
                                     const std::optional<BigCount>& nu, const BigCount& all_sets) {
  if (nu) {
    const double acceptance = ratio(*nu - BigCount(state.t()), all_sets);
    return acceptance >= settings.rejection_floor ? SamplerKind::Rejection : SamplerKind::Structured;
  }
  // Beyond the cap: the sets meeting one edge bound the acceptance from above.
  const BigCount one_edge = all_sets - binom(state.n() - state.r(), state.r());
  if (ratio(one_edge, all_sets) >= settings.rejection_floor) return SamplerKind::Rejection;
  throw CapExceeded("no sampler applies: t = " + std::to_string(state.t()) + " exceeds ie_cap and C(n, r) is too large");
}

}  // namespace

SampleResult pool_sample(const ProcessState& state, RngStream& rng, std::uint64_t pool_cap) {
  const auto pool = unchosen_pool(state, pool_cap);
  if (pool.empty()) return Exhausted{};
  return pool[rng.below(pool.size())].to_edge();
}

Edge rejection_sample(const ProcessState& state, RngStream& rng, std::uint64_t cap) {
  const std::size_t t = state.t();
  std::vector<std::uint64_t> stamp(t, 0);
  std::uint64_t epoch = 0;
  for (std::uint64_t attempt = 0; attempt < cap; ++attempt) {
    const auto draw = floyd_draw(static_cast<std::uint64_t>(state.n()), static_cast<std::uint64_t>(state.r()), rng);
    ++epoch;
    std::size_t covered = 0;
    for (std::uint64_t x : draw) {
      for (std::uint32_t i : state.incidence(static_cast<Vertex>(x + 1))) {
        if (stamp[i] != epoch) {
          stamp[i] = epoch;
          ++covered;
        }
      }
    }
    if (covered != t) continue;
    std::vector<Vertex> vertices(draw.size());
    std::transform(draw.begin(), draw.end(), vertices.begin(), [](std::uint64_t x) { return static_cast<Vertex>(x + 1); });
    Edge e = Edge::from_sorted(std::move(vertices));
    if (!state.contains_edge(e)) return e;
  }
  throw RejectionCapReached("rejection sampler reached its cap of " + std::to_string(cap) + " attempts");
}

SampleResult structured_sample(const ProcessState& state, RngStream& rng, int ie_cap) {
  BinomialTable binomials;
  const StructuredPlan plan = build_plan(state, ie_cap, binomials);
  return structured_from_plan(plan, state, rng, binomials);
}

SamplerKind auto_dispatch(const ProcessState& state, const SamplerSettings& settings) {
  if (pool_feasible(state.n(), state.r(), settings.pool_cap)) return SamplerKind::Pool;
  std::optional<BigCount> nu;
  if (static_cast<int>(state.t()) <= settings.ie_cap) nu = nu_all(ConstraintInstance::from_state(state), settings.ie_cap);
  return choose_counting_strategy(state, settings, nu, binom(state.n(), state.r()));
}

SampleOutcome sample_next(const ProcessState& state, RngStream& rng, const SamplerSettings& settings) {
  const SamplerKind kind = settings.kind == SamplerKind::Auto ? auto_dispatch(state, settings) : settings.kind;
  switch (kind) {
    case SamplerKind::Pool:
      return {pool_sample(state, rng, settings.pool_cap), kind};
    case SamplerKind::Rejection:
      return {rejection_sample(state, rng, settings.rejection_cap), kind};
    case SamplerKind::Structured:
    case SamplerKind::Auto:
      break;
  }
  return {structured_sample(state, rng, settings.ie_cap), SamplerKind::Structured};
}

// ------------------------------------------------------------------ Sampler

Sampler::Sampler(SamplerSettings settings) : settings_(settings), binomials_(std::make_unique<BinomialTable>()) {}
Sampler::~Sampler() = default;
Sampler::Sampler(Sampler&&) noexcept = default;
Sampler& Sampler::operator=(Sampler&&) noexcept = default;

const detail::StructuredPlan& Sampler::plan(const ProcessState& state) {
  if (!plan_ || plan_->t != state.t()) {
    plan_ = std::make_unique<StructuredPlan>(build_plan(state, settings_.ie_cap, *binomials_));
  }
  return *plan_;
}

const std::optional<BigCount>& Sampler::nu_all(const ProcessState& state) {
  if (count_t_ != state.t()) {
    count_t_ = state.t();
    count_.reset();
    if (static_cast<int>(state.t()) <= std::min(settings_.ie_cap, 30)) count_ = plan(state).total;
  }
  return count_;
}

SamplerKind Sampler::dispatch(const ProcessState& state) {
  if (!pool_feasible_) {
    pool_feasible_ = pool_feasible(state.n(), state.r(), settings_.pool_cap);
    all_sets_ = binom(state.n(), state.r());
  }
  if (*pool_feasible_) return SamplerKind::Pool;
  return choose_counting_strategy(state, settings_, nu_all(state), all_sets_);
}

void Sampler::sync_pool(const ProcessState& state) {
  if (!pool_active_) {
    pool_ = unchosen_pool(state, settings_.pool_cap);
    pool_active_ = true;
    pool_t_ = state.t();
    last_pool_index_.reset();
    return;
  }
  const bool all_meet = 2 * state.r() > state.n();
  for (; pool_t_ < state.t(); ++pool_t_) {
    const VertexMask em = VertexMask::of(state.edge(pool_t_));
    if (all_meet) {
      std::size_t idx = pool_.size();
      if (last_pool_index_ && *last_pool_index_ < pool_.size() && pool_[*last_pool_index_] == em) {
        idx = *last_pool_index_;
      } else {
        idx = static_cast<std::size_t>(std::find(pool_.begin(), pool_.end(), em) - pool_.begin());
      }
      if (idx < pool_.size()) {
        pool_[idx] = pool_.back();
        pool_.pop_back();
      }
    } else {
      std::erase_if(pool_, [&](const VertexMask& m) { return m == em || !m.intersects(em); });
    }
    last_pool_index_.reset();
  }
}

const std::vector<oracle::VertexMask>* Sampler::remaining_pool(const ProcessState& state) {
  if (!pool_active_) return nullptr;
  sync_pool(state);
  return &pool_;
}

SampleOutcome Sampler::next(const ProcessState& state, RngStream& rng) {
  const SamplerKind kind = settings_.kind == SamplerKind::Auto ? dispatch(state) : settings_.kind;
  switch (kind) {
    case SamplerKind::Pool: {
      sync_pool(state);
      if (pool_.empty()) return {Exhausted{}, kind};
      const std::size_t idx = rng.below(pool_.size());
      last_pool_index_ = idx;
      return {pool_[idx].to_edge(), kind};
    }
    case SamplerKind::Rejection: {
      const auto& nu = nu_all(state);
      if (nu && *nu == BigCount(state.t())) return {Exhausted{}, kind};
      return {rejection_sample(state, rng, settings_.rejection_cap), kind};
    }
    case SamplerKind::Structured:
    case SamplerKind::Auto:
      break;
  }
  return {structured_from_plan(plan(state), state, rng, *binomials_), SamplerKind::Structured};
}

}  // namespace ekrf
