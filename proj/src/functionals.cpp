#include "ekrf/functionals.hpp"

#include <cmath>
#include <stdexcept>

namespace ekrf {

namespace {

void check_positive(double x, double y) {
  if (!(std::isfinite(x) && std::isfinite(y) && x > 0 && y > 0)) {
    throw std::invalid_argument("functional: x and y must be finite and positive");
  }
}

}  // namespace

double graph_sum_f1(const GraphParams& p) {
  if (p.t < 2) throw std::invalid_argument("graph_sum_f1: need t >= 2");
  check_positive(p.x, p.y);
  return static_cast<double>(p.t) * (p.t - 1) / 2.0 * p.x * p.y * p.y;
}

BigCount matching_count(int t, int f) {
  if (f < 0 || t < 0 || 2 * static_cast<std::int64_t>(f) > t) throw std::invalid_argument("matching_count: need 0 <= 2f <= t");
  mpz_class denom, fact;
  mpz_ui_pow_ui(denom.get_mpz_t(), 2, static_cast<unsigned long>(f));
  mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(f));
  denom *= fact;
  mpz_class out = falling(t, 2 * static_cast<std::int64_t>(f)).raw();
  mpz_divexact(out.get_mpz_t(), out.get_mpz_t(), denom.get_mpz_t());
  return BigCount(std::move(out));
}

double graph_sum_class(const GraphParams& p, GraphClass cls) {
  check_positive(p.x, p.y);
  const auto sums = oracle::graph_functional_sums(p.t, p.x, p.y);
  return cls == GraphClass::NonMatching ? sums.nonmatching : sums.matching_f2plus;
}

double grid_sum(const GridParams& p) {
  check_positive(p.x, p.y);
  return oracle::grid_functional_sum(p.tbar, p.delta, p.x, p.y);
}

double grid_leading(const GridParams& p) {
  if (p.tbar < 1 || p.delta < 1) throw std::invalid_argument("grid_leading: dimensions must be positive");
  check_positive(p.x, p.y);
  return static_cast<double>(p.tbar) * p.delta * p.x * p.y * p.y;
}

BigCount grid_bound_nhul(int h, int u, int l) {
  if (u < 1 || l < 1 || h < std::max(u, l)) throw std::invalid_argument("grid_bound_nhul: need u, l >= 1 and h >= max(u, l)");
  const std::int64_t cells = static_cast<std::int64_t>(u) * l;
  mpz_class power;
  if (u >= l) {
    mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(l), static_cast<unsigned long>(u));
    return BigCount(std::move(power)) * binom(cells, h - l);
  }
  mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(u), static_cast<unsigned long>(l));
  return BigCount(std::move(power)) * binom(cells, h - u);
}

}  // namespace ekrf
