#include "ekrf/exactmath.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ekrf {

BigCount::BigCount(std::uint64_t value) {
  // mpz_class has no portable uint64 constructor on every platform.
  mpz_import(value_.get_mpz_t(), 1, 1, sizeof(value), 0, 0, &value);
}

BigCount::BigCount(mpz_class value) : value_(std::move(value)) {
  if (sgn(value_) < 0) throw std::underflow_error("BigCount: negative value");
}

BigCount BigCount::from_string(std::string_view decimal) {
  if (decimal.empty()) throw std::invalid_argument("BigCount: empty string");
  for (char c : decimal) {
    if (c < '0' || c > '9') throw std::invalid_argument("BigCount: not a decimal integer: " + std::string(decimal));
  }
  return BigCount(mpz_class(std::string(decimal), 10));
}

bool BigCount::fits_u64() const { return mpz_sizeinbase(value_.get_mpz_t(), 2) <= 64; }

std::uint64_t BigCount::to_u64() const {
  if (!fits_u64()) throw std::overflow_error("BigCount does not fit in 64 bits");
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, value_.get_mpz_t());
  return out;
}

double BigCount::log() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, value_.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::numbers::ln2;
}

BigCount& BigCount::operator-=(const BigCount& o) {
  if (cmp(value_, o.value_) < 0) throw std::underflow_error("BigCount subtraction underflow");
  value_ -= o.value_;
  return *this;
}

double ratio(const BigCount& a, const BigCount& b) {
  if (b.is_zero()) throw std::domain_error("ratio: division by zero");
  if (a.is_zero()) return 0.0;
  long ea = 0, eb = 0;
  const double ma = mpz_get_d_2exp(&ea, a.raw().get_mpz_t());
  const double mb = mpz_get_d_2exp(&eb, b.raw().get_mpz_t());
  return std::ldexp(ma / mb, static_cast<int>(ea - eb));
}

// ---------------------------------------------------------------- LogNum

LogNum LogNum::from_log(double log_value) {
  if (!std::isfinite(log_value)) throw std::domain_error("LogNum: non-finite log");
  LogNum out;
  out.log_ = log_value;
  out.zero_ = false;
  return out;
}

LogNum LogNum::from_value(double value) {
  if (value < 0 || !std::isfinite(value)) throw std::domain_error("LogNum: value must be finite and >= 0");
  if (value == 0) return zero();
  return from_log(std::log(value));
}

LogNum LogNum::from_count(const BigCount& count) {
  if (count.is_zero()) return zero();
  return from_log(count.log());
}

double LogNum::log() const {
  if (zero_) return -std::numeric_limits<double>::infinity();
  return log_;
}

double LogNum::value() const { return zero_ ? 0.0 : std::exp(log_); }

LogNum& LogNum::operator*=(const LogNum& o) {
  if (zero_ || o.zero_) return *this = zero();
  log_ += o.log_;
  return *this;
}

LogNum& LogNum::operator/=(const LogNum& o) {
  if (o.zero_) throw std::domain_error("LogNum: division by zero");
  if (zero_) return *this;
  log_ -= o.log_;
  return *this;
}

LogNum& LogNum::operator+=(const LogNum& o) {
  if (o.zero_) return *this;
  if (zero_) return *this = o;
  const double hi = std::max(log_, o.log_);
  const double lo = std::min(log_, o.log_);
  log_ = hi + std::log1p(std::exp(lo - hi));
  return *this;
}

LogNum LogNum::pow(double exponent) const {
  if (zero_) {
    if (exponent == 0) return from_log(0.0);
    return zero();
  }
  return from_log(log_ * exponent);
}

// ---------------------------------------------------------------- binomials

BigCount binom(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) return BigCount{};
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return BigCount(std::move(out));
}

BigCount falling(std::int64_t n, std::int64_t k) {
  if (k < 0) throw std::invalid_argument("falling: negative k");
  if (k > n) return BigCount{};
  mpz_class out = 1;
  for (std::int64_t i = 0; i < k; ++i) out *= static_cast<unsigned long>(n - i);
  return BigCount(std::move(out));
}

namespace {

// Stirling series remainder: lgamma(x) - [(x-0.5) log x - x + log sqrt(2 pi)], x >= 10.
double lgamma_correction(double x) {
  static constexpr double kCoef[] = {
      1.0 / 12.0,       -1.0 / 360.0,   1.0 / 1260.0,       -1.0 / 1680.0,
      1.0 / 1188.0,     -691.0 / 360360.0, 1.0 / 156.0,     -3617.0 / 122400.0,
  };
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double term = inv;
  double sum = 0.0;
  for (double c : kCoef) {
    sum += c * term;
    term *= inv2;
  }
  return sum;
}

constexpr double kLnSqrt2Pi = 0.918938533204672741780329736406;

// log Beta(a, b) without the cancellation of lgamma differences.
double log_beta(double a, double b) {
  const double p = std::min(a, b);
  const double q = std::max(a, b);
  if (p >= 10) {
    const double corr = lgamma_correction(p) + lgamma_correction(q) - lgamma_correction(p + q);
    return -0.5 * std::log(q) + kLnSqrt2Pi + corr + (p - 0.5) * std::log(p / (p + q)) +
           q * std::log1p(-p / (p + q));
  }
  if (q >= 10) {
    const double corr = lgamma_correction(q) - lgamma_correction(p + q);
    return std::lgamma(p) + corr + p - p * std::log(p + q) + (q - 0.5) * std::log1p(-p / (p + q));
  }
  return std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q);
}

}  // namespace

double log_binom_value(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) throw std::domain_error("log_binom: k out of range");
  if (k == 0 || k == n) return 0.0;
  if (n <= 60) return binom(n, k).log();
  const double nd = static_cast<double>(n);
  return -std::log1p(nd) - log_beta(nd - static_cast<double>(k) + 1.0, static_cast<double>(k) + 1.0);
}

LogNum log_binom(std::int64_t n, std::int64_t k) { return LogNum::from_log(log_binom_value(n, k)); }

// ---------------------------------------------------------------- columns

const mpz_class& BinomialColumn::get(std::int64_t m) {
  if (m < k_ || m < 0) return zero_;
  constexpr std::int64_t kMaxGap = 4096;
  const auto hi = lo_ + static_cast<std::int64_t>(values_.size()) - 1;
  if (values_.empty() || m < lo_ - kMaxGap || m > hi + kMaxGap) {
    values_.clear();
    values_.emplace_back();
    mpz_bin_uiui(values_.back().get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(k_));
    lo_ = m;
    return values_.front();
  }
  if (m < lo_) {
    // C(M-1, k) = C(M, k) (M - k) / M
    std::vector<mpz_class> block(static_cast<std::size_t>(lo_ - m));
    mpz_class cur = values_.front();
    for (std::int64_t mm = lo_; mm > m; --mm) {
      cur *= static_cast<unsigned long>(mm - k_);
      mpz_divexact_ui(cur.get_mpz_t(), cur.get_mpz_t(), static_cast<unsigned long>(mm));
      block[static_cast<std::size_t>(mm - 1 - m)] = cur;
    }
    values_.insert(values_.begin(), std::make_move_iterator(block.begin()), std::make_move_iterator(block.end()));
    lo_ = m;
  } else if (m > hi) {
    // C(M+1, k) = C(M, k) (M + 1) / (M + 1 - k)
    for (std::int64_t mm = hi; mm < m; ++mm) {
      mpz_class next = values_.back() * static_cast<unsigned long>(mm + 1);
      mpz_divexact_ui(next.get_mpz_t(), next.get_mpz_t(), static_cast<unsigned long>(mm + 1 - k_));
      values_.push_back(std::move(next));
    }
  }
  return values_[static_cast<std::size_t>(m - lo_)];
}

const mpz_class& BinomialTable::get(std::int64_t m, std::int64_t k) {
  if (k < 0 || m < 0 || k > m) return zero_;
  while (static_cast<std::int64_t>(columns_.size()) <= k) {
    columns_.emplace_back(static_cast<std::int64_t>(columns_.size()));
  }
  return columns_[static_cast<std::size_t>(k)].get(m);
}

}  // namespace ekrf
