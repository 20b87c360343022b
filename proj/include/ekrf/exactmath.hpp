#pragma once

// Exact big-integer combinatorics and a log-domain companion type.

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace ekrf {

/// Arbitrary-precision nonnegative integer. Subtraction that would go
/// negative throws std::underflow_error.
class BigCount {
 public:
  BigCount() = default;
  BigCount(std::uint64_t value);  // NOLINT(google-explicit-constructor)
  explicit BigCount(mpz_class value);

  static BigCount from_string(std::string_view decimal);
  std::string to_string() const { return value_.get_str(10); }

  bool is_zero() const { return sgn(value_) == 0; }
  bool fits_u64() const;
  std::uint64_t to_u64() const;
  double to_double() const { return value_.get_d(); }
  /// Natural log; -inf for zero.
  double log() const;

  const mpz_class& raw() const { return value_; }

  BigCount& operator+=(const BigCount& o) {
    value_ += o.value_;
    return *this;
  }
  BigCount& operator-=(const BigCount& o);
  BigCount& operator*=(const BigCount& o) {
    value_ *= o.value_;
    return *this;
  }

  friend BigCount operator+(BigCount a, const BigCount& b) { return a += b; }
  friend BigCount operator-(BigCount a, const BigCount& b) { return a -= b; }
  friend BigCount operator*(BigCount a, const BigCount& b) { return a *= b; }

  friend bool operator==(const BigCount& a, const BigCount& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const BigCount& a, const BigCount& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpz_class value_;
};

/// a / b as a double, accurate to double precision even when both operands
/// overflow double range.
double ratio(const BigCount& a, const BigCount& b);

/// Natural logarithm of a positive quantity, or exact zero.
///
/// Each arithmetic operation adds at most one rounding of the stored log,
/// i.e. a relative error of |log| * 2^-53 in the represented value. For
/// |log| below 2^13 that stays under 2^-40.
class LogNum {
 public:
  LogNum() = default;  // zero
  static LogNum zero() { return {}; }
  static LogNum from_log(double log_value);
  static LogNum from_value(double value);
  static LogNum from_count(const BigCount& count);

  bool is_zero() const { return zero_; }
  double log() const;
  double value() const;

  LogNum& operator*=(const LogNum& o);
  LogNum& operator/=(const LogNum& o);
  LogNum& operator+=(const LogNum& o);
  friend LogNum operator*(LogNum a, const LogNum& b) { return a *= b; }
  friend LogNum operator/(LogNum a, const LogNum& b) { return a /= b; }
  friend LogNum operator+(LogNum a, const LogNum& b) { return a += b; }
  LogNum pow(double exponent) const;

 private:
  double log_ = 0.0;
  bool zero_ = true;
};

/// C(n, k); zero when k < 0 or k > n (including n < 0).
BigCount binom(std::int64_t n, std::int64_t k);

/// n (n-1) ... (n-k+1); 1 for k = 0, 0 for k > n.
BigCount falling(std::int64_t n, std::int64_t k);

/// log C(n, k) through a Stirling-corrected log-beta. Throws
/// std::domain_error unless 0 <= k <= n.
LogNum log_binom(std::int64_t n, std::int64_t k);

/// log C(n, k) as a plain double (same algorithm as log_binom).
double log_binom_value(std::int64_t n, std::int64_t k);

/// C(m, k) for a fixed k and many m, reusing neighbouring entries.
/// Values are cached over a contiguous m range that grows on demand.
class BinomialColumn {
 public:
  explicit BinomialColumn(std::int64_t k) : k_(k) {}
  std::int64_t k() const { return k_; }
  const mpz_class& get(std::int64_t m);

 private:
  std::int64_t k_;
  std::int64_t lo_ = 0;  // first cached m
  std::vector<mpz_class> values_;
  mpz_class zero_{0};
};

/// A set of BinomialColumns keyed by k.
class BinomialTable {
 public:
  const mpz_class& get(std::int64_t m, std::int64_t k);

 private:
  std::vector<BinomialColumn> columns_;  // index k
  mpz_class zero_{0};
};

}  // namespace ekrf
