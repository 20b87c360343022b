#pragma once

// Uniform sampling of the next edge from A(H_t): the unchosen r-sets that
// meet every current edge.

#include <cstdint>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "ekrf/core.hpp"
#include "ekrf/oracle.hpp"
#include "ekrf/rng.hpp"

namespace ekrf {

/// A(H_t) is empty.
struct Exhausted {
  friend bool operator==(const Exhausted&, const Exhausted&) = default;
};

using SampleResult = std::variant<Edge, Exhausted>;

/// Rejection sampling gave up; says nothing about whether A(H_t) is empty.
class RejectionCapReached : public Error {
 public:
  using Error::Error;
};

struct SampleOutcome {
  SampleResult result;
  SamplerKind used;
};

/// Uniform draw from the explicitly enumerated pool (C(n, r) <= pool_cap, n <= 128).
SampleResult pool_sample(const ProcessState& state, RngStream& rng,
                         std::uint64_t pool_cap = oracle::kDefaultPoolCap);

/// Draws uniform r-subsets of [n] until one meets every edge and is new.
/// Throws RejectionCapReached after `cap` attempts.
Edge rejection_sample(const ProcessState& state, RngStream& rng, std::uint64_t cap);

/// Exact sequential conditional sampling over vertex types with big-integer
/// weights (no floating point in the weights, so the draw is exactly
/// uniform). Throws CapExceeded when t > ie_cap.
SampleResult structured_sample(const ProcessState& state, RngStream& rng, int ie_cap = 22);

/// Concrete strategy for the current state: Pool when C(n, r) fits the pool
/// cap, else Rejection when the acceptance probability is at least the
/// floor, else Structured. Throws CapExceeded when no strategy applies.
SamplerKind auto_dispatch(const ProcessState& state, const SamplerSettings& settings);

/// Stateless dispatch + draw.
SampleOutcome sample_next(const ProcessState& state, RngStream& rng, const SamplerSettings& settings);

namespace detail {
struct StructuredPlan;
}

/// Per-trial sampler with caches keyed on the state's size: the working
/// pool in Pool mode, the vertex-type plan and binomial tables in
/// Structured mode, and nu_all for dispatch. Must only be used with one
/// growing ProcessState.
class Sampler {
 public:
  explicit Sampler(SamplerSettings settings);
  ~Sampler();
  Sampler(Sampler&&) noexcept;
  Sampler& operator=(Sampler&&) noexcept;

  SampleOutcome next(const ProcessState& state, RngStream& rng);
  SamplerKind dispatch(const ProcessState& state);
  const SamplerSettings& settings() const { return settings_; }

  /// Exact nu_all for the state; nullopt beyond ie_cap.
  const std::optional<BigCount>& nu_all(const ProcessState& state);

  /// Unchosen candidates when running in Pool mode and synced with `state`.
  const std::vector<oracle::VertexMask>* remaining_pool(const ProcessState& state);

 private:
  void sync_pool(const ProcessState& state);

  const detail::StructuredPlan& plan(const ProcessState& state);

  SamplerSettings settings_;
  std::optional<bool> pool_feasible_;
  BigCount all_sets_;
  std::optional<std::size_t> count_t_;
  std::optional<BigCount> count_;
  bool pool_active_ = false;
  std::size_t pool_t_ = 0;
  std::vector<oracle::VertexMask> pool_;
  std::optional<std::size_t> last_pool_index_;
  std::unique_ptr<detail::StructuredPlan> plan_;
  std::unique_ptr<BinomialTable> binomials_;
};

}  // namespace ekrf
