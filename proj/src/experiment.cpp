#include "rgg/experiment.hpp"

#include "rgg/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace rgg {

namespace {

class KahanSum {
 public:
  void add(double x) {
    const double y = x - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

std::uint64_t histogram_total(const Histogram& hist) {
  std::uint64_t total = 0;
  for (const auto& [k, c] : hist) total += c;
  return total;
}

// Poisson pmf on 0..W with the tail folded into W.
std::vector<double> poisson_window(double lambda, std::int64_t W) {
  std::vector<double> pmf(static_cast<std::size_t>(W) + 1);
  double cdf = 0.0;
  const double log_lambda = std::log(lambda);
  for (std::int64_t k = 0; k <= W; ++k) {
    pmf[k] = std::exp(k * log_lambda - lambda - std::lgamma(k + 1.0));
    cdf += pmf[k];
  }
  pmf[W] += std::max(0.0, 1.0 - cdf);
  return pmf;
}

std::int64_t window_end(const Histogram& hist, double lambda) {
  const std::int64_t max_obs = hist.empty() ? 0 : std::max<std::int64_t>(0, hist.rbegin()->first);
  const double sd = std::sqrt(lambda);
  return std::max(max_obs + static_cast<std::int64_t>(std::ceil(10.0 * sd)),
                  static_cast<std::int64_t>(std::ceil(lambda + 10.0 * sd + 50.0)));
}

void check_poisson_args(const Histogram& hist, double lambda) {
  if (!(lambda > 0) || !std::isfinite(lambda)) throw std::domain_error("poisson comparison: lambda must be positive");
  if (histogram_total(hist) == 0) throw std::invalid_argument("poisson comparison: empty histogram");
}

}  // namespace

TrialRecord run_trial(const ExperimentSpec& spec, std::uint64_t trial_index) {
  const std::uint64_t seed = trial_seed(spec.master_seed, trial_index);
  PointSample sample;
  if (spec.input == InputKind::Binomial) {
    sample = sample_binomial(spec.dom, spec.den, static_cast<std::uint64_t>(std::llround(spec.n)), seed);
  } else {
    sample = sample_poisson(spec.dom, spec.den, spec.n, seed);
  }
  const ComponentSummary cs = components(sample, spec.r, spec.bands, spec.diameters);
  TrialRecord rec;
  rec.trial_index = trial_index;
  rec.seed = seed;
  rec.realized_count = sample.realized_count;
  rec.K = cs.K;
  rec.S = cs.S;
  rec.R = cs.R;
  rec.L1 = cs.L1;
  rec.L2 = cs.L2;
  rec.diam_L1 = cs.n_points == 0 ? 0.0 : cs.diam_L1;
  rec.census = cs.census;
  return rec;
}

std::vector<TrialRecord> run_experiment(const ExperimentSpec& spec) {
  if (spec.trials < 1) throw std::invalid_argument("run_experiment: trials must be >= 1");
  if (!(spec.n >= 0)) throw std::invalid_argument("run_experiment: n must be nonnegative");
  if (spec.input == InputKind::Poisson && !(spec.n > 0)) {
    throw std::invalid_argument("run_experiment: Poisson input needs a positive mean");
  }
  std::vector<TrialRecord> out(spec.trials);
  unsigned threads = spec.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : spec.threads;
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, spec.trials));

  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t i = next++; i < spec.trials; i = next++) out[i] = run_trial(spec, i);
  };
  if (threads <= 1) {
    worker();
    return out;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  pool.clear();
  return out;
}

std::string to_string(Field field) {
  switch (field) {
    case Field::Count:
      return "count";
    case Field::K:
      return "K";
    case Field::KMinus1:
      return "K-1";
    case Field::S:
      return "S";
    case Field::R:
      return "R";
    case Field::L1:
      return "L1";
    case Field::L2:
      return "L2";
    case Field::AbsKMinus1MinusS:
      return "|K-1-S|";
    case Field::AbsRMinusS:
      return "|R-S|";
  }
  return "?";
}

std::vector<double> field_values(std::span<const TrialRecord> records, Field field) {
  std::vector<double> v;
  v.reserve(records.size());
  for (const TrialRecord& t : records) {
    const double K = static_cast<double>(t.K);
    const double S = static_cast<double>(t.S);
    const double R = static_cast<double>(t.R);
    switch (field) {
      case Field::Count:
        v.push_back(static_cast<double>(t.realized_count));
        break;
      case Field::K:
        v.push_back(K);
        break;
      case Field::KMinus1:
        v.push_back(K - 1.0);
        break;
      case Field::S:
        v.push_back(S);
        break;
      case Field::R:
        v.push_back(R);
        break;
      case Field::L1:
        v.push_back(static_cast<double>(t.L1));
        break;
      case Field::L2:
        v.push_back(static_cast<double>(t.L2));
        break;
      case Field::AbsKMinus1MinusS:
        v.push_back(std::abs(K - 1.0 - S));
        break;
      case Field::AbsRMinusS:
        v.push_back(std::abs(R - S));
        break;
    }
  }
  return v;
}

Summary summarize_values(std::span<const double> values) {
  if (values.size() < 2) throw std::invalid_argument("summarize: need at least two records");
  Summary s;
  s.count = values.size();
  KahanSum sum;
  for (double v : values) sum.add(v);
  s.mean = sum.value() / static_cast<double>(s.count);
  KahanSum sq;
  KahanSum quart;
  for (double v : values) {
    const double d = v - s.mean;
    sq.add(d * d);
    quart.add(d * d * d * d);
  }
  s.variance = sq.value() / static_cast<double>(s.count - 1);
  s.fourth_moment = quart.value() / static_cast<double>(s.count);
  s.standard_error = std::sqrt(s.variance / static_cast<double>(s.count));

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = s.count / 2;
  s.median = s.count % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  for (double v : values) ++s.histogram[static_cast<std::int64_t>(std::llround(v))];
  return s;
}

Summary summarize(std::span<const TrialRecord> records, Field field) {
  const std::vector<double> v = field_values(records, field);
  return summarize_values(v);
}

double ks_to_poisson(const Histogram& hist, double lambda) {
  check_poisson_args(hist, lambda);
  const double total = static_cast<double>(histogram_total(hist));
  const std::int64_t W = window_end(hist, lambda);
  const std::vector<double> pmf = poisson_window(lambda, W);

  double below = 0.0;  // empirical mass at negative values
  for (const auto& [k, c] : hist) {
    if (k < 0) below += static_cast<double>(c);
  }
  double F_emp = below / total;
  double F_poi = 0.0;
  double sup = F_emp;
  for (std::int64_t k = 0; k <= W; ++k) {
    const auto it = hist.find(k);
    if (it != hist.end()) F_emp += static_cast<double>(it->second) / total;
    F_poi += pmf[k];
    sup = std::max(sup, std::abs(F_emp - F_poi));
  }
  return std::min(1.0, sup);
}

double tv_to_poisson(const Histogram& hist, double lambda) {
  check_poisson_args(hist, lambda);
  const double total = static_cast<double>(histogram_total(hist));
  const std::int64_t W = window_end(hist, lambda);
  const std::vector<double> pmf = poisson_window(lambda, W);
  double sum = 0.0;
  for (const auto& [k, c] : hist) {
    if (k < 0) sum += static_cast<double>(c) / total;
  }
  for (std::int64_t k = 0; k <= W; ++k) {
    const auto it = hist.find(k);
    const double p = it == hist.end() ? 0.0 : static_cast<double>(it->second) / total;
    sum += std::abs(p - pmf[k]);
  }
  return std::min(1.0, 0.5 * sum);
}

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double ks_to_normal(std::span<const double> values, double center, double scale) {
  if (!(scale > 0) || !std::isfinite(scale)) throw std::domain_error("ks_to_normal: scale must be positive");
  if (values.size() < 100) throw std::invalid_argument("ks_to_normal: need at least 100 values");
  std::vector<double> z(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) z[i] = (values[i] - center) / scale;
  std::sort(z.begin(), z.end());
  const double n = static_cast<double>(z.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double F = standard_normal_cdf(z[i]);
    sup = std::max({sup, (i + 1) / n - F, F - i / n});
  }
  return std::min(1.0, sup);
}

ComparisonReport compare_predictions(std::span<const TrialRecord> records, const Predictions& predictions) {
  if (records.empty()) throw std::invalid_argument("compare_predictions: no records");
  ComparisonReport report;
  const double I = predictions.I_n;
  report.reference = I;
  report.I_tilde_n = predictions.I_tilde_n;
  const double N = static_cast<double>(records.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();

  for (Field f : {Field::KMinus1, Field::R, Field::S}) {
    const std::vector<double> v = field_values(records, f);
    StatisticRow row;
    row.field = f;
    row.count = v.size();
    if (v.size() >= 2) {
      const Summary s = summarize_values(v);
      row.mean = s.mean;
      row.standard_error = s.standard_error;
      row.variance = s.variance;
      row.zero_variance = s.variance == 0.0;
      row.mean_ratio = s.mean / I;
      row.mean_ratio_ci = 1.96 * s.standard_error / I;
      row.variance_ratio = s.variance / I;
      const double var_se = std::sqrt(std::max(0.0, s.fourth_moment - s.variance * s.variance) / N);
      row.variance_ratio_ci = 1.96 * var_se / I;
      row.ks_poisson = I > 0 ? ks_to_poisson(s.histogram, I) : nan;
      row.tv_poisson = I > 0 ? tv_to_poisson(s.histogram, I) : nan;
      if (v.size() >= 100 && I > 0) {
        row.ks_normal_empirical = ks_to_normal(v, s.mean, std::sqrt(I));
        row.ks_normal_analytic = ks_to_normal(v, I, std::sqrt(I));
      } else {
        row.ks_normal_empirical = row.ks_normal_analytic = nan;
      }
    } else {
      row.mean = v.empty() ? nan : v[0];
      row.mean_ratio = row.mean / I;
      row.standard_error = row.variance = row.variance_ratio = nan;
      row.mean_ratio_ci = row.variance_ratio_ci = nan;
      row.zero_variance = true;
      Histogram hist;
      for (double x : v) ++hist[static_cast<std::int64_t>(std::llround(x))];
      row.ks_poisson = I > 0 ? ks_to_poisson(hist, I) : nan;
      row.tv_poisson = I > 0 ? tv_to_poisson(hist, I) : nan;
      row.ks_normal_empirical = row.ks_normal_analytic = nan;
    }
    if (f == Field::S) report.mean_S_over_I_tilde = row.mean / predictions.I_tilde_n;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace rgg
