#pragma once

// Shared inclusion-exclusion engine for "k-subsets covering every
// constraint" counts, used by counting and by the structured sampler.
//
// Vertices are grouped by type: the set of constraints (bit mask) they
// belong to. For S ⊆ cover, let M(S) be the number of vertices whose type
// misses S. The count is Σ_S (-1)^|S| C(M(S), k), which depends on S only
// through M(S); the histogram below collects the signs per M value so the
// big-integer work is one multiply-add per distinct M.

#include <cstdint>
#include <span>
#include <vector>

#include "ekrf/exactmath.hpp"

namespace ekrf::detail {

struct TypeCount {
  std::uint32_t mask;   // constraints containing the vertices of this type
  std::uint64_t count;  // number of such vertices
};

struct SignedHistogram {
  std::uint64_t base = 0;            // smallest M represented
  std::vector<std::int64_t> coeff;   // coeff[i] is the signed weight of M = base + i
};

/// Histogram of M(S) over all S ⊆ cover_mask. `free_count` vertices have an
/// empty type. Types may use bits outside cover_mask; those bits are ignored.
SignedHistogram avoid_histogram(std::span<const TypeCount> types, std::uint64_t free_count,
                                std::uint32_t cover_mask);

/// Σ coeff[i] C(base + i, k).
BigCount evaluate_histogram(const SignedHistogram& hist, std::int64_t k, BinomialTable& binomials);

/// Convenience: number of k-subsets covering every constraint in cover_mask.
BigCount count_covering(std::span<const TypeCount> types, std::uint64_t free_count, std::uint32_t cover_mask,
                        std::int64_t k, BinomialTable& binomials);

/// Compresses the bits of `value` selected by `mask` into the low bits.
inline std::uint32_t extract_bits(std::uint32_t value, std::uint32_t mask) {
  std::uint32_t out = 0;
  std::uint32_t bit = 1;
  while (mask) {
    const std::uint32_t low = mask & (~mask + 1);
    if (value & low) out |= bit;
    bit <<= 1;
    mask &= mask - 1;
  }
  return out;
}

}  // namespace ekrf::detail
