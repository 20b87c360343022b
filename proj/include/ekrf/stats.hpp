#pragma once

// Limit laws, empirical tails, goodness-of-fit statistics and aggregation
// over trial records. Values come with standard errors; pass/fail
// decisions are left to callers.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ekrf/core.hpp"

namespace ekrf {

enum class Law { T3Tail, T4Tail, T4ScaledExponential, FixProbability, T4GapGeometric };
std::string to_string(Law law);
Law law_from_string(const std::string& name);

/// `argument` is α for t3_tail, c for t4_tail and fix_probability, x for
/// t4_scaled_exponential (tail at x) and ξ for t4_gap_geometric.
struct LawSpec {
  Law law = Law::T3Tail;
  int n = 0;
  int r = 0;
  double argument = 0;
};

/// t3_tail: e^(-α³/6). t4_tail: e^(-c³/6). t4_scaled_exponential: e^(-x).
/// fix_probability: 1/(1+c³). t4_gap_geometric: (r⁵/(n²+r⁵))^ξ, the
/// limiting Pr(t4 - t3 > ξ).
double law_value(const LawSpec& spec);

struct TailEstimate {
  double value = 0;
  double se = 0;
  std::size_t count = 0;
};

/// Fraction of samples >= threshold with its binomial standard error.
TailEstimate empirical_tail(std::span<const double> samples, double threshold);

inline constexpr std::size_t kMinKsSamples = 30;

/// sup |F_emp - cdf|. Needs at least 30 samples.
double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf);

struct ChiSquare {
  double statistic = 0;
  int dof = 0;
};

/// Pearson statistic against equal expected counts. Needs at least two
/// cells and a total of at least five per cell.
ChiSquare chi_square_uniform(std::span<const std::uint64_t> counts);

/// Homogeneity test of two count vectors over the same cells; cells empty
/// in both are dropped.
ChiSquare chi_square_two_sample(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

/// Quantile of the chi-square distribution.
double chi_square_quantile(double p, int dof);

struct LawComparison {
  std::string law;
  double parameter = 0;
  double empirical = 0;
  double se = 0;
  double theory = 0;
  std::size_t count = 0;
};

struct SummaryRequest {
  std::vector<double> alphas{1.0, 1.5};  // t3 tails
  std::vector<double> cs{1.0, 1.5};      // t4 tails
  std::vector<double> xis{1.0};          // gap tails
  double scaled_x = 1.0;                 // tail point of n t4³/(6 r³)
  std::optional<double> fix_c;           // theory argument; r/n^(1/3) of the data when unset
};

struct Summary {
  int n = 0;
  int r = 0;
  std::size_t trials = 0;
  double simple_at_t4 = 0;       // among trials reaching t4
  double simple_unique_v = 0;    // simple at t4 and a unique vertex of degree >= 3
  double gap_one = 0;            // t4 = t3 + 1 among trials reaching t4
  double fixed = 0;              // verdict Fixed
  double predicted_fixed = 0;    // verdict PredictedFixed
  double mean_steps = 0;
  std::optional<double> ks_scaled_t4;  // KS of n t4³/(6 r³) against Exp(1)
  std::vector<LawComparison> comparisons;
};

/// Trials that stop before reaching t_k count as t_k = ∞ in the tails.
/// Throws std::invalid_argument on an empty or mixed-(n, r) input.
Summary summarize(std::span<const TrialRecord> records, const SummaryRequest& request = {});

/// n t4³ / (6 r³).
double scaled_t4(int n, int r, std::uint64_t t4);

}  // namespace ekrf
