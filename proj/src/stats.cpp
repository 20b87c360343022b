#include "ekrf/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace ekrf {

namespace {

const std::pair<Law, const char*> kLawNames[] = {{Law::T3Tail, "t3_tail"},
                                                 {Law::T4Tail, "t4_tail"},
                                                 {Law::T4ScaledExponential, "t4_scaled_exponential"},
                                                 {Law::FixProbability, "fix_probability"},
                                                 {Law::T4GapGeometric, "t4_gap_geometric"}};

double n_third(int n) { return std::cbrt(static_cast<double>(n)); }

}  // namespace

std::string to_string(Law law) {
  for (const auto& [l, name] : kLawNames) {
    if (l == law) return name;
  }
  throw std::invalid_argument("unknown law");
}

Law law_from_string(const std::string& name) {
  for (const auto& [l, s] : kLawNames) {
    if (name == s) return l;
  }
  throw std::invalid_argument("unknown law '" + name + "'");
}

double law_value(const LawSpec& spec) {
  const double a = spec.argument;
  if (!(a >= 0) || !std::isfinite(a)) throw std::invalid_argument("law argument must be finite and non-negative");
  switch (spec.law) {
    case Law::T3Tail:
    case Law::T4Tail:
      return std::exp(-a * a * a / 6.0);
    case Law::T4ScaledExponential:
      return std::exp(-a);
    case Law::FixProbability:
      return 1.0 / (1.0 + a * a * a);
    case Law::T4GapGeometric: {
      if (spec.n < 1 || spec.r < 1) throw std::invalid_argument("t4_gap_geometric needs n, r >= 1");
      // r⁵/(n²+r⁵) = 1/(1 + n²/r⁵), computed in logs to stay finite.
      const double log_ratio = 2.0 * std::log(static_cast<double>(spec.n)) - 5.0 * std::log(static_cast<double>(spec.r));
      return std::exp(-a * std::log1p(std::exp(log_ratio)));
    }
  }
  throw std::invalid_argument("unknown law");
}

TailEstimate empirical_tail(std::span<const double> samples, double threshold) {
  if (samples.empty()) throw std::invalid_argument("empirical_tail: no samples");
  const auto hits = std::count_if(samples.begin(), samples.end(), [&](double s) { return s >= threshold; });
  TailEstimate est;
  est.count = samples.size();
  est.value = static_cast<double>(hits) / static_cast<double>(samples.size());
  est.se = std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(samples.size()));
  return est;
}

double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.size() < kMinKsSamples) throw std::invalid_argument("ks_distance: need at least 30 samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double m = static_cast<double>(sorted.size());
  double d = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / m - f, f - static_cast<double>(i) / m});
  }
  return d;
}

ChiSquare chi_square_uniform(std::span<const std::uint64_t> counts) {
  if (counts.size() < 2) throw std::invalid_argument("chi_square_uniform: need at least two cells");
  double total = 0;
  for (auto c : counts) total += static_cast<double>(c);
  if (total < 5.0 * static_cast<double>(counts.size())) {
    throw std::invalid_argument("chi_square_uniform: need at least five observations per cell");
  }
  const double expected = total / static_cast<double>(counts.size());
  ChiSquare out;
  for (auto c : counts) {
    const double diff = static_cast<double>(c) - expected;
    out.statistic += diff * diff / expected;
  }
  out.dof = static_cast<int>(counts.size()) - 1;
  return out;
}

ChiSquare chi_square_two_sample(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  if (a.size() != b.size()) throw std::invalid_argument("chi_square_two_sample: cell counts differ");
  double na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    na += static_cast<double>(a[i]);
    nb += static_cast<double>(b[i]);
  }
  if (na == 0 || nb == 0) throw std::invalid_argument("chi_square_two_sample: empty sample");
  ChiSquare out;
  int cells = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double col = static_cast<double>(a[i] + b[i]);
    if (col == 0) continue;
    ++cells;
    const double ea = col * na / (na + nb), eb = col * nb / (na + nb);
    const double da = static_cast<double>(a[i]) - ea, db = static_cast<double>(b[i]) - eb;
    out.statistic += da * da / ea + db * db / eb;
  }
  if (cells < 2) throw std::invalid_argument("chi_square_two_sample: need at least two non-empty cells");
  out.dof = cells - 1;
  return out;
}

double chi_square_quantile(double p, int dof) {
  if (dof < 1 || !(p > 0 && p < 1)) throw std::invalid_argument("chi_square_quantile: bad arguments");
  return boost::math::quantile(boost::math::chi_squared_distribution<double>(dof), p);
}

double scaled_t4(int n, int r, std::uint64_t t4) {
  const double t = static_cast<double>(t4);
  return static_cast<double>(n) * t * t * t / (6.0 * static_cast<double>(r) * r * r);
}

Summary summarize(std::span<const TrialRecord> records, const SummaryRequest& request) {
  if (records.empty()) throw std::invalid_argument("summarize: no records");
  Summary s;
  s.n = records.front().config.n;
  s.r = records.front().config.r;
  s.trials = records.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> t3s, t4s, gaps, scaled;
  std::size_t reached_t4 = 0, simple = 0, simple_unique = 0, gap_one = 0, fixed = 0, predicted = 0;
  double steps = 0;
  for (const auto& rec : records) {
    if (rec.config.n != s.n || rec.config.r != s.r) throw std::invalid_argument("summarize: records mix (n, r)");
    const auto t3 = rec.phases.t3(), t4 = rec.phases.t4();
    t3s.push_back(t3 ? static_cast<double>(*t3) : inf);
    t4s.push_back(t4 ? static_cast<double>(*t4) : inf);
    if (t4) {
      ++reached_t4;
      scaled.push_back(scaled_t4(s.n, s.r, *t4));
      if (rec.simple_at_t4.value_or(false)) {
        ++simple;
        if (rec.unique_v) ++simple_unique;
      }
      if (t3) {
        gaps.push_back(static_cast<double>(*t4 - *t3));
        if (*t4 == *t3 + 1) ++gap_one;
      }
    }
    fixed += rec.verdict.kind == VerdictKind::Fixed;
    predicted += rec.verdict.kind == VerdictKind::PredictedFixed;
    steps += static_cast<double>(rec.steps);
  }
  const double m = static_cast<double>(records.size());
  if (reached_t4) {
    s.simple_at_t4 = static_cast<double>(simple) / static_cast<double>(reached_t4);
    s.simple_unique_v = static_cast<double>(simple_unique) / static_cast<double>(reached_t4);
    s.gap_one = static_cast<double>(gap_one) / static_cast<double>(reached_t4);
  }
  s.fixed = static_cast<double>(fixed) / m;
  s.predicted_fixed = static_cast<double>(predicted) / m;
  s.mean_steps = steps / m;

  const double scale = s.r / n_third(s.n);
  for (double alpha : request.alphas) {
    const auto est = empirical_tail(t3s, alpha * scale);
    s.comparisons.push_back({"t3_tail", alpha, est.value, est.se, law_value({Law::T3Tail, s.n, s.r, alpha}), est.count});
  }
  for (double c : request.cs) {
    const auto est = empirical_tail(t4s, c * scale);
    s.comparisons.push_back({"t4_tail", c, est.value, est.se, law_value({Law::T4Tail, s.n, s.r, c}), est.count});
  }
  if (!scaled.empty()) {
    const auto est = empirical_tail(scaled, request.scaled_x);
    s.comparisons.push_back({"t4_scaled_exponential", request.scaled_x, est.value, est.se,
                             law_value({Law::T4ScaledExponential, s.n, s.r, request.scaled_x}), est.count});
  }
  if (scaled.size() >= kMinKsSamples) {
    s.ks_scaled_t4 = ks_distance(scaled, [](double x) { return x <= 0 ? 0.0 : -std::expm1(-x); });
  }
  {
    // Predicted fixation counts: structural runs never see the pool close.
    const double c = request.fix_c.value_or(scale);
    const double p = s.fixed + s.predicted_fixed;
    s.comparisons.push_back({"fix_probability", c, p, std::sqrt(p * (1 - p) / m),
                             law_value({Law::FixProbability, s.n, s.r, c}), records.size()});
  }
  if (!gaps.empty()) {
    for (double xi : request.xis) {
      std::size_t above = 0;
      for (double g : gaps) above += g > xi;
      const double p = static_cast<double>(above) / static_cast<double>(gaps.size());
      s.comparisons.push_back({"t4_gap_geometric", xi, p, std::sqrt(p * (1 - p) / static_cast<double>(gaps.size())),
                               law_value({Law::T4GapGeometric, s.n, s.r, xi}), gaps.size()});
    }
  }
  return s;
}

}  // namespace ekrf
