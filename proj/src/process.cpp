#include "ekrf/process.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace ekrf {

namespace {

int effective_delta_stop(const ProcessState& state, int delta_stop) {
  return delta_stop > 0 ? delta_stop : default_delta0(state.n(), state.r());
}

std::size_t edges_avoiding(const ProcessState& state, Vertex v) {
  return state.t() - static_cast<std::size_t>(state.degree(v));
}

// Degree-1 vertices of edge i.
std::uint64_t private_count(const ProcessState& state, std::size_t i) {
  std::uint64_t p = 0;
  for (Vertex u : state.edge(i).vertices()) p += state.degree(u) == 1;
  return p;
}

// Edges avoiding v pairwise meet in one vertex and no vertex other than v
// lies in three edges avoiding v.
bool avoiding_edges_simple(const ProcessState& state, Vertex v) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < state.t(); ++i) {
    if (!state.edge(i).contains(v)) idx.push_back(i);
  }
  std::vector<Vertex> witnesses;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      const auto w = state.intersection(idx[a], idx[b]);
      if (w.size() != 1) return false;
      witnesses.push_back(w.front());
    }
  }
  std::sort(witnesses.begin(), witnesses.end());
  return std::adjacent_find(witnesses.begin(), witnesses.end()) == witnesses.end();
}

std::string replay_string(const ProcessState& state, std::uint64_t seed) {
  std::ostringstream out;
  out << "n=" << state.n() << " r=" << state.r() << " seed=" << seed << " t=" << state.t() << " edges=";
  for (std::size_t i = 0; i < state.t(); ++i) out << (i ? ";" : "") << state.edge(i).to_string();
  return out.str();
}

}  // namespace

BigCount nu_containing(const ProcessState& state, Vertex x, int ie_cap) {
  ConstraintInstance inst = ConstraintInstance::from_state(state);
  inst.required_vertex = x;
  return nu_all(inst, ie_cap);
}

std::optional<Verdict> exact_verdict(const ProcessState& state, const VerdictOptions& opts) {
  if (state.t() == 0) return std::nullopt;
  const auto& common = state.common_intersection();
  if (common.empty()) return Verdict::not_fixed();
  if (opts.pool) {
    for (Vertex x : common) {
      const bool all_contain = std::all_of(opts.pool->begin(), opts.pool->end(),
                                           [x](const oracle::VertexMask& m) { return m.test(x); });
      if (all_contain) return Verdict::fixed(x, BigCount(state.t() + opts.pool->size()));
    }
    return std::nullopt;
  }
  if (static_cast<int>(state.t()) > opts.ie_cap) return std::nullopt;
  const BigCount nu = opts.nu_all ? *opts.nu_all : nu_all(ConstraintInstance::from_state(state), opts.ie_cap);
  // x lies in every edge, so the sets containing x are exactly C(n-1, r-1).
  if (nu == binom(state.n() - 1, state.r() - 1)) return Verdict::fixed(common.front(), nu);
  return std::nullopt;
}

std::optional<Verdict> predicted_verdict(const ProcessState& state, const VerdictOptions& opts) {
  if (state.t() == 0 || static_cast<int>(state.t()) > opts.ie_cap) return std::nullopt;
  const Vertex v = state.flags().maxdeg_vertices.front();
  if (state.degree(v) < effective_delta_stop(state, opts.delta_stop)) return std::nullopt;
  const BigCount nu = opts.nu_all ? *opts.nu_all : nu_all(ConstraintInstance::from_state(state), opts.ie_cap);
  const BigCount pool = nu - BigCount(state.t());
  if (pool.is_zero()) return std::nullopt;
  const BigCount with_v = nu_containing(state, v, opts.ie_cap);
  const std::size_t tbar = edges_avoiding(state, v);
  const double residual = ratio(nu - with_v - BigCount(tbar), pool);
  if (residual > opts.eps_fix) return std::nullopt;
  const int tb = static_cast<int>(tbar);
  const bool closed_form = avoiding_edges_simple(state, v) &&
                           static_cast<std::int64_t>(tb) * state.r() + 1 <= state.n();
  BigCount size = BigCount(tbar) + (closed_form ? final_family_size(state.n(), state.r(), tb) : with_v);
  return Verdict::predicted_fixed(v, std::move(size), residual);
}

Verdict verdict(const ProcessState& state, const VerdictOptions& opts) {
  if (auto v = exact_verdict(state, opts)) return *v;
  if (auto v = predicted_verdict(state, opts)) return *v;
  return Verdict::undetermined();
}

StepProfile step_probability_profile(const ProcessState& state, int ie_cap) {
  const std::size_t t = state.t();
  if (static_cast<int>(t) > ie_cap) throw CapExceeded("step profile needs t <= ie_cap");
  const int n = state.n(), r = state.r();
  StepProfile p;
  p.t = t;
  p.nu_all = nu_all(ConstraintInstance::from_state(state), ie_cap);
  p.pool = p.nu_all - BigCount(t);
  const auto& flags = state.flags();
  const std::uint64_t untouched = static_cast<std::uint64_t>(n) - state.used_vertices().size();
  auto share = [&](const BigCount& c) -> std::optional<double> {
    if (p.pool.is_zero()) return std::nullopt;
    return ratio(c, p.pool);
  };

  if (flags.is_simple && flags.maxdeg <= 2) {
    BigCount keeps = binom(static_cast<std::int64_t>(untouched), static_cast<std::int64_t>(r) - static_cast<std::int64_t>(t));
    for (std::size_t i = 0; i < t; ++i) keeps *= BigCount(private_count(state, i));
    p.keeps_simple = keeps;
    p.p_keeps_simple = share(keeps);
    try {
      p.nu_emp_closed = nu_emp(n, r, static_cast<int>(t));
    } catch (const std::domain_error&) {
    }
  }

  if (flags.is_simple && state.high_degree_count() == 1 && flags.distinguished_v) {
    const Vertex v = *flags.distinguished_v;
    const int delta = state.degree(v);
    const std::size_t tbar = t - static_cast<std::size_t>(delta);
    p.v = v;
    p.nu_A = nu_containing(state, v, ie_cap);
    p.nu_B = p.nu_all - *p.nu_A;
    p.p_hits_v = share(*p.nu_A - BigCount(static_cast<std::uint64_t>(delta)));
    p.p_avoids_v = share(*p.nu_B - BigCount(tbar));
    BigCount a = binom(static_cast<std::int64_t>(untouched), static_cast<std::int64_t>(r) - 1 - static_cast<std::int64_t>(tbar));
    BigCount b = binom(static_cast<std::int64_t>(untouched), static_cast<std::int64_t>(r) - static_cast<std::int64_t>(t));
    for (std::size_t i = 0; i < t; ++i) {
      const BigCount pi(private_count(state, i));
      if (!state.edge(i).contains(v)) a *= pi;
      b *= pi;
    }
    p.emp_A = a;
    p.emp_B = b;
    p.p_emp_A = share(a);
    p.p_emp_B = share(b);
    try {
      p.emp_AB_closed = nu_emp_AB(n, r, static_cast<int>(t), delta);
    } catch (const std::exception&) {
    }
  }
  return p;
}

EdgeClassification classify_next_edge(const ProcessState& state, const Edge& e, std::optional<Vertex> v) {
  EdgeClassification c;
  std::vector<int> overlap(state.t(), 0);
  c.new_maxdeg = state.flags().maxdeg;
  for (Vertex u : e.vertices()) {
    for (std::uint32_t i : state.incidence(u)) ++overlap[i];
    c.new_maxdeg = std::max(c.new_maxdeg, state.degree(u) + 1);
  }
  c.keeps_simple = state.flags().is_simple && std::all_of(overlap.begin(), overlap.end(), [](int k) { return k == 1; });
  c.keeps_simple_maxdeg2 = c.keeps_simple && c.new_maxdeg <= 2;
  if (v) c.hits_v = e.contains(*v);
  return c;
}

std::vector<std::string> regime_warnings(int n, int r) {
  std::vector<std::string> out;
  if (2 * r > n) out.push_back("r > n/2: every pair of r-sets meets, outside the theorem regime");
  const double lo = std::cbrt(static_cast<double>(n));
  const double hi = std::pow(static_cast<double>(n), 5.0 / 12.0);
  if (r < lo || r > hi) {
    std::ostringstream msg;
    msg << "r = " << r << " lies outside the window n^(1/3) <= r <= n^(5/12) = [" << lo << ", " << hi << "]";
    out.push_back(msg.str());
  }
  return out;
}

void validate_config(const TrialConfig& config) {
  if (config.r < 1 || config.r >= config.n) throw std::invalid_argument("need 1 <= r < n");
  const auto& s = config.sampler;
  if (s.ie_cap < 0 || s.ie_cap > 30) throw std::invalid_argument("ie_cap must lie in [0, 30]");
  if (s.rejection_cap == 0) throw std::invalid_argument("rejection_cap must be positive");
  if (!(s.rejection_floor >= 0.0 && s.rejection_floor <= 1.0)) throw std::invalid_argument("rejection_floor must lie in [0, 1]");
  const auto& p = config.stopping;
  if (!(p.eps_fix >= 0.0)) throw std::invalid_argument("eps_fix must be non-negative");
  if (p.delta_stop < 0) throw std::invalid_argument("delta_stop must be non-negative");
  if (p.mode == StopMode::ExactCompletion) {
    if (config.n > oracle::kMaxPoolUniverse || binom(config.n, config.r) > BigCount(s.pool_cap)) {
      throw std::invalid_argument("exact mode needs pool mode to be feasible: C(n, r) <= pool_cap and n <= 128");
    }
  }
}

TrialRecord run_trial(const TrialConfig& config, std::uint64_t seed, std::uint64_t trial_index) {
  validate_config(config);
  ProcessState state(config.n, config.r, default_delta0(config.n, config.r));
  return run_trial_on(state, config, seed, trial_index);
}

TrialRecord run_trial_on(ProcessState& state, const TrialConfig& config, std::uint64_t seed,
                         std::uint64_t trial_index) {
  validate_config(config);
  if (state.n() != config.n || state.r() != config.r) throw std::invalid_argument("state does not match config");
  const auto start = std::chrono::steady_clock::now();
  const auto& policy = config.stopping;
  const bool exact_mode = policy.mode == StopMode::ExactCompletion;

  TrialRecord rec;
  rec.config = config;
  rec.trial_index = trial_index;
  rec.seed = seed;

  Sampler sampler(config.sampler);
  RngStream rng(seed);
  VerdictOptions opts;
  opts.delta_stop = policy.delta_stop;
  opts.eps_fix = policy.eps_fix;
  opts.ie_cap = config.sampler.ie_cap;
  bool exact_final = false;

  auto log_kind = [&](SamplerKind kind) {
    if (!rec.strategy_log.empty() && rec.strategy_log.back().kind == kind) {
      ++rec.strategy_log.back().steps;
    } else {
      rec.strategy_log.push_back({kind, 1});
    }
  };

  while (true) {
    if (state.t() >= policy.t_max) {
      rec.stop_reason = StopReason::Horizon;
      break;
    }
    SampleOutcome out{Exhausted{}, SamplerKind::Auto};
    try {
      out = sampler.next(state, rng);
    } catch (const std::exception& e) {
      throw TrialError(std::string("trial ") + std::to_string(trial_index) + " failed at t=" +
                           std::to_string(state.t()) + ": " + e.what(),
                       replay_string(state, seed));
    }
    if (std::holds_alternative<Exhausted>(out.result)) {
      rec.stop_reason = exact_mode ? StopReason::Completed : StopReason::SamplerExhausted;
      rec.final_size_exact = BigCount(state.t());
      const auto& common = state.common_intersection();
      Verdict at_end = common.empty() ? Verdict::not_fixed() : Verdict::fixed(common.front(), BigCount(state.t()));
      if (exact_final) {
        if (rec.verdict.kind != at_end.kind || (rec.verdict.size && *rec.verdict.size != *at_end.size)) {
          throw std::logic_error("early verdict disagrees with the completed run: " + replay_string(state, seed));
        }
      } else {
        rec.verdict = std::move(at_end);
        rec.verdict_at = state.t();
      }
      break;
    }
    log_kind(out.used);
    state.apply_edge(std::get<Edge>(out.result));
    ++rec.steps;

    if (!rec.simple_at_t4 && state.phases().t4() == state.t()) {
      rec.simple_at_t4 = state.flags().is_simple;
      if (state.high_degree_count() == 1) rec.unique_v = state.flags().distinguished_v;
    }

    opts.pool = sampler.remaining_pool(state);
    std::optional<BigCount> nu;
    if (!opts.pool) nu = sampler.nu_all(state);
    opts.nu_all = nu ? &*nu : nullptr;

    if (!exact_final) {
      if (auto ev = exact_verdict(state, opts)) {
        rec.verdict = *ev;
        rec.verdict_at = state.t();
        exact_final = true;
        if (ev->kind == VerdictKind::Fixed) {
          rec.final_size_exact = ev->size;
          if (!exact_mode || !policy.continue_after_verdict) {
            rec.stop_reason = StopReason::VerdictFixed;
            break;
          }
        } else if (!policy.continue_after_verdict) {
          rec.stop_reason = StopReason::VerdictNotFixed;
          break;
        }
      }
    }
    if (!exact_mode) {
      if (auto pv = predicted_verdict(state, opts)) {
        rec.final_size_predicted = pv->size;
        rec.verdict = std::move(*pv);
        rec.verdict_at = state.t();
        rec.stop_reason = StopReason::PredictedFixed;
        break;
      }
      // Past ie_cap neither rule (c) nor the sampler dispatch can be counted.
      if (!opts.pool && static_cast<int>(state.t()) >= opts.ie_cap) {
        rec.stop_reason = StopReason::Horizon;
        break;
      }
    }
  }
  rec.phases = state.phases();
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

}  // namespace ekrf
