#pragma once

#include "rgg/graph.hpp"
#include "rgg/theory.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace rgg {

struct ExperimentSpec {
  Domain dom;
  DensityModel den;
  double n = 0.0;
  double r = 0.0;
  InputKind input = InputKind::Binomial;
  std::uint64_t trials = 1;
  std::uint64_t master_seed = 0;
  std::vector<Band> bands;
  DiameterMode diameters = DiameterMode::LargestOnly;
  unsigned threads = 1;  // 0: hardware concurrency
};

struct TrialRecord {
  std::uint64_t trial_index = 0;
  std::uint64_t seed = 0;
  std::uint64_t realized_count = 0;
  std::uint64_t K = 0;
  std::uint64_t S = 0;
  std::uint64_t R = 0;
  std::uint64_t L1 = 0;
  std::uint64_t L2 = 0;
  double diam_L1 = 0.0;
  std::vector<BandCount> census;
};

TrialRecord run_trial(const ExperimentSpec& spec, std::uint64_t trial_index);

/// Runs trials 0..trials-1; trial i uses seed trial_seed(master_seed, i).
/// The result is ordered by trial index and does not depend on `threads`.
std::vector<TrialRecord> run_experiment(const ExperimentSpec& spec);

enum class Field { Count, K, KMinus1, S, R, L1, L2, AbsKMinus1MinusS, AbsRMinusS };

std::string to_string(Field field);

std::vector<double> field_values(std::span<const TrialRecord> records, Field field);

using Histogram = std::map<std::int64_t, std::uint64_t>;

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;        // unbiased
  double standard_error = 0.0;  // sqrt(variance / count)
  double fourth_moment = 0.0;   // central
  double median = 0.0;
  Histogram histogram;          // values rounded to the nearest integer
};

Summary summarize_values(std::span<const double> values);
Summary summarize(std::span<const TrialRecord> records, Field field);

/// sup_k |F_emp(k) − F_Poisson(λ)(k)| over the comparison window.
double ks_to_poisson(const Histogram& hist, double lambda);

/// (1/2) Σ_k |p_emp(k) − p_Poisson(λ)(k)| over the same window, with the
/// Poisson tail beyond it folded into the last bin. For finite samples this
/// overestimates the distance between the underlying laws.
double tv_to_poisson(const Histogram& hist, double lambda);

/// One-sample Kolmogorov–Smirnov distance of (v − center)/scale to N(0,1).
double ks_to_normal(std::span<const double> values, double center, double scale);

double standard_normal_cdf(double z);

struct DistanceReport {
  double ks_poisson = 0.0;
  double tv_poisson = 0.0;
  double ks_normal = 0.0;
  double lambda_used = 0.0;
  double center = 0.0;
  double scale = 1.0;
};

struct StatisticRow {
  Field field = Field::KMinus1;
  std::size_t count = 0;
  double mean = 0.0;
  double standard_error = 0.0;
  double variance = 0.0;
  double mean_ratio = 0.0;  // mean / I_n
  double mean_ratio_ci = 0.0;
  double variance_ratio = 0.0;  // variance / I_n
  double variance_ratio_ci = 0.0;
  bool zero_variance = false;
  double ks_poisson = 0.0;
  double tv_poisson = 0.0;
  double ks_normal_empirical = 0.0;  // centred at the sample mean, scale √I_n
  double ks_normal_analytic = 0.0;   // centred at I_n, scale √I_n
};

struct ComparisonReport {
  double reference = 0.0;  // I_n
  double I_tilde_n = 0.0;
  std::vector<StatisticRow> rows;  // K-1, R, S
  double mean_S_over_I_tilde = 0.0;
};

/// Confidence half-widths are 1.96 standard errors. KS-to-normal entries are
/// NaN when fewer than 100 records are available.
ComparisonReport compare_predictions(std::span<const TrialRecord> records, const Predictions& predictions);

}  // namespace rgg
