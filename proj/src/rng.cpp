#include "ekrf/rng.hpp"

#include <stdexcept>
#include <vector>

namespace ekrf {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t RngStream::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("RngStream::below: zero bound");
  // Lemire's multiply-shift with rejection of the biased low region.
  unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next_u64()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

mpz_class RngStream::below(const mpz_class& bound) {
  if (sgn(bound) <= 0) throw std::invalid_argument("RngStream::below: non-positive bound");
  const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  const std::size_t words = (bits + 63) / 64;
  const std::size_t top_bits = bits - (words - 1) * 64;
  const std::uint64_t top_mask = top_bits == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << top_bits) - 1);
  std::vector<std::uint64_t> buf(words);
  mpz_class out;
  while (true) {
    for (auto& w : buf) w = next_u64();
    buf[0] &= top_mask;  // most significant word first
    mpz_import(out.get_mpz_t(), words, 1, sizeof(std::uint64_t), 0, 0, buf.data());
    if (out < bound) return out;
  }
}

}  // namespace ekrf
