#include "rgg/commands.hpp"

#include "rgg/quadrature.hpp"
#include "rgg/random.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rgg {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// NaN becomes null and ±∞ becomes "inf"/"-inf"; JSON has neither.
json number(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_field(const std::string& s, std::size_t line, const std::string& column) {
  if (s == "nan") return kNaN;
  if (s == "inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("csv line " + std::to_string(line) + ": bad value '" + s + "' in column " + column);
  }
}

std::uint64_t parse_count(const std::string& s, std::size_t line, const std::string& column) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != s.size() || (!s.empty() && s[0] == '-')) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("csv line " + std::to_string(line) + ": bad count '" + s + "' in column " + column);
  }
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// Config echo without thread count and output paths, so that summaries do
// not depend on how the run was executed.
json config_echo(const ExperimentConfig& config) {
  json j = config_to_json(config);
  j.erase("threads");
  j.erase("out_csv");
  j.erase("out_json");
  return j;
}

struct FieldStats {
  std::size_t count = 0;
  double mean = kNaN;
  double se = kNaN;
  double variance = kNaN;
  double median = kNaN;
  Histogram histogram;
};

FieldStats field_stats(const std::vector<TrialRecord>& records, Field field) {
  const std::vector<double> v = field_values(records, field);
  FieldStats s;
  s.count = v.size();
  if (v.size() >= 2) {
    const Summary sum = summarize_values(v);
    s.mean = sum.mean;
    s.se = sum.standard_error;
    s.variance = sum.variance;
    s.median = sum.median;
    s.histogram = sum.histogram;
  } else if (v.size() == 1) {
    s.mean = s.median = v[0];
    ++s.histogram[static_cast<std::int64_t>(std::llround(v[0]))];
  }
  return s;
}

Eigen::VectorXd random_point(const Domain& dom, Rng& rng) {
  const Eigen::VectorXd lo = dom.box_lo();
  const Eigen::VectorXd hi = dom.box_hi();
  Eigen::VectorXd x(dom.dim());
  do {
    for (int i = 0; i < dom.dim(); ++i) x[i] = lo[i] + (hi[i] - lo[i]) * rng.uniform();
  } while (!contains(dom, x));
  return x;
}

std::string describe(const Domain& dom, const DensitySpec& den, double n, double r, InputKind input,
                     std::uint64_t seed) {
  std::ostringstream os;
  os << "domain=" << dom.name() << " density=" << density_flag(den) << " n=" << fmt(n) << " r=" << fmt(r)
     << " input=" << to_string(input) << " seed=" << seed;
  return os.str();
}

std::string describe_summary(const ComponentSummary& s) {
  std::ostringstream os;
  os << "K=" << s.K << " S=" << s.S << " R=" << s.R << " L1=" << s.L1 << " L2=" << s.L2
     << " diamL1=" << fmt(s.diam_L1);
  for (std::size_t b = 0; b < s.census.size(); ++b) os << " band" << b << "=(" << s.census[b].K << "," << s.census[b].R << ")";
  return os.str();
}

OracleCase components_case(std::uint64_t index, Rng& rng, const OracleOptions& opt) {
  const int kind = static_cast<int>(rng.uniform() * 3.0);
  const Domain dom = kind == 0   ? Domain::unit_square()
                     : kind == 1 ? Domain::disk(0.5 + 1.5 * rng.uniform())
                                 : Domain::ball(0.5 + 1.5 * rng.uniform());
  const DensitySpec spec = rng.uniform() < 0.5 ? DensitySpec::uniform() : DensitySpec::tilt(-0.8 + 2.8 * rng.uniform());
  const DensityModel den = make_density(dom, spec);
  const double n = std::floor(rng.uniform() * 2001.0);
  const double r = dom.diameter() * std::exp(std::log(0.005) + rng.uniform() * std::log(0.3 / 0.005));
  const InputKind input = rng.uniform() < 0.5 || n == 0 ? InputKind::Binomial : InputKind::Poisson;
  const std::uint64_t seed = rng.next();
  const PointSample sample = input == InputKind::Binomial ? sample_binomial(dom, den, static_cast<std::uint64_t>(n), seed)
                                                          : sample_poisson(dom, den, n, seed);
  const std::vector<Band> bands = default_bands(std::max(n, 3.0));
  const ComponentSummary grid = components(sample, r * (1.0 + opt.radius_perturbation), bands, DiameterMode::All);
  const ComponentSummary brute = components_bruteforce(sample, r, bands, DiameterMode::All);
  OracleCase c;
  c.name = "components[" + std::to_string(index) + "]";
  c.passed = grid == brute;
  if (!c.passed) {
    c.detail = describe(dom, spec, n, r, input, seed) + " | grid: " + describe_summary(grid) +
               " | bruteforce: " + describe_summary(brute);
  }
  return c;
}

OracleCase volume_case(std::uint64_t index, Rng& rng, const OracleOptions& opt) {
  const int kind = static_cast<int>(rng.uniform() * 3.0);
  const Domain dom = kind == 0   ? Domain::unit_square()
                     : kind == 1 ? Domain::disk(0.5 + 1.5 * rng.uniform())
                                 : Domain::ball(0.5 + 1.5 * rng.uniform());
  const Eigen::VectorXd x = random_point(dom, rng);
  const double s = dom.diameter() * (0.01 + 0.6 * rng.uniform());
  const double exact = ball_region_volume(dom, x, s);

  const int d = dom.dim();
  const double box = std::pow(2.0 * s, d);
  std::uint64_t hits = 0;
  Eigen::VectorXd y(d);
  for (std::uint64_t k = 0; k < opt.mc_samples; ++k) {
    double q = 0.0;
    for (int i = 0; i < d; ++i) {
      const double u = (2.0 * rng.uniform() - 1.0) * s;
      y[i] = x[i] + u;
      q += u * u;
    }
    if (q <= s * s && contains(dom, y)) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(opt.mc_samples);
  const double estimate = box * p;
  const double se = box * std::sqrt(p * (1.0 - p) / static_cast<double>(opt.mc_samples));
  OracleCase c;
  c.name = "volume[" + std::to_string(index) + "]";
  c.passed = std::abs(estimate - exact) <= 4.0 * se + 1e-4;
  if (!c.passed) {
    std::ostringstream os;
    os << "domain=" << dom.name() << " x=(" << x.transpose() << ") s=" << fmt(s) << " exact=" << fmt(exact)
       << " mc=" << fmt(estimate) << " se=" << fmt(se);
    c.detail = os.str();
  }
  return c;
}

OracleCase g_case(std::uint64_t index, Rng& rng) {
  const int d = rng.uniform() < 0.5 ? 2 : 3;
  const double s = rng.uniform();
  const double closed = g_function(d, s);
  // Slab volume by integrating the (d-1)-ball cross-section of radius √(1−t²).
  auto slice = [d](double t) {
    const double w = std::max(0.0, 1.0 - t * t);
    return d == 2 ? 2.0 * std::sqrt(w) : std::numbers::pi * w;
  };
  const quad::Result q = quad::adaptive_simpson(slice, 0.0, s, {.rel_tol = 1e-12});
  OracleCase c;
  c.name = "g[" + std::to_string(index) + "]";
  c.passed = std::abs(q.value - closed) <= 1e-8 * std::max(1.0, closed);
  if (!c.passed) c.detail = "d=" + std::to_string(d) + " s=" + fmt(s) + " closed=" + fmt(closed) + " quad=" + fmt(q.value);
  return c;
}

}  // namespace

Resolved resolve(const ExperimentConfig& config) {
  validate(config);
  const Domain dom = make_domain(config.domain);
  return Resolved{dom, make_density(dom, config.density), resolve_radius(config),
                  config.bands ? *config.bands : default_bands(config.n)};
}

ExperimentSpec make_spec(const ExperimentConfig& config, const Resolved& res) {
  return ExperimentSpec{.dom = res.dom,
                        .den = res.den,
                        .n = config.n,
                        .r = res.r,
                        .input = config.input,
                        .trials = config.trials,
                        .master_seed = config.seed,
                        .bands = res.bands,
                        .diameters = DiameterMode::LargestOnly,
                        .threads = config.threads};
}

json predictions_to_json(const Predictions& p, int d) {
  json j;
  j["n"] = number(p.n);
  j["r"] = number(p.r);
  j["d"] = d;
  j["I_n"] = number(p.I_n);
  j["I_tilde_n"] = number(p.I_tilde_n);
  j["mu_n"] = number(p.mu_n);
  j["gamma"] = number(p.gamma);
  j["b_hat"] = number(p.b_hat);
  j["b_c"] = number(p.b_c);
  j["b_prime_c"] = number(p.b_prime_c);
  j["c_dA"] = number(p.c_dA);
  j["limit_intensity"] = number(p.limit_intensity);
  j["exponent"] = number(p.exponent);
  j["regime"] = to_string(p.regime);
  j["quadrature_error"] = number(p.quadrature_error);
  j["quadrature_converged"] = p.quadrature_converged;
  return j;
}

json report_to_json(const ComparisonReport& report) {
  json j;
  j["reference"] = number(report.reference);
  j["I_tilde_n"] = number(report.I_tilde_n);
  j["mean_S_over_I_tilde"] = number(report.mean_S_over_I_tilde);
  json rows = json::array();
  for (const StatisticRow& r : report.rows) {
    json row;
    row["statistic"] = to_string(r.field);
    row["count"] = r.count;
    row["mean"] = number(r.mean);
    row["standard_error"] = number(r.standard_error);
    row["variance"] = number(r.variance);
    row["mean_ratio"] = number(r.mean_ratio);
    row["mean_ratio_ci"] = number(r.mean_ratio_ci);
    row["variance_ratio"] = number(r.variance_ratio);
    row["variance_ratio_ci"] = number(r.variance_ratio_ci);
    row["zero_variance"] = r.zero_variance;
    row["ks_poisson"] = number(r.ks_poisson);
    row["tv_poisson"] = number(r.tv_poisson);
    row["ks_normal_empirical"] = number(r.ks_normal_empirical);
    row["ks_normal_analytic"] = number(r.ks_normal_analytic);
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j;
}

json cmd_predict(const ExperimentConfig& config) {
  const Resolved res = resolve(config);
  return predictions_to_json(predict(res.dom, res.den, config.n, res.r), res.dom.dim());
}

std::string csv_header(std::size_t bands) {
  std::string h = "trial,seed,count,K,S,R,L1,L2,diamL1";
  for (std::size_t b = 0; b < bands; ++b) h += ",band" + std::to_string(b) + "_K,band" + std::to_string(b) + "_R";
  return h;
}

std::string records_to_csv(const std::vector<TrialRecord>& records, std::size_t bands) {
  std::ostringstream os;
  os << csv_header(bands) << '\n';
  for (const TrialRecord& t : records) {
    if (t.census.size() != bands) throw std::invalid_argument("records_to_csv: band count mismatch");
    os << t.trial_index << ',' << t.seed << ',' << t.realized_count << ',' << t.K << ',' << t.S << ',' << t.R << ','
       << t.L1 << ',' << t.L2 << ',' << fmt(t.diam_L1);
    for (const BandCount& b : t.census) os << ',' << b.K << ',' << b.R;
    os << '\n';
  }
  return os.str();
}

std::vector<TrialRecord> records_from_csv(std::istream& in, std::size_t* bands_out) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split(line);
  if (header.size() < 9 || (header.size() - 9) % 2 != 0) throw std::runtime_error("csv: unexpected header");
  const std::size_t bands = (header.size() - 9) / 2;
  if (line != csv_header(bands)) throw std::runtime_error("csv: unexpected header '" + line + "'");
  if (bands_out) *bands_out = bands;

  std::vector<TrialRecord> records;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line);
    if (cells.size() != header.size()) throw std::runtime_error("csv line " + std::to_string(lineno) + ": wrong column count");
    TrialRecord t;
    t.trial_index = parse_count(cells[0], lineno, header[0]);
    t.seed = parse_count(cells[1], lineno, header[1]);
    t.realized_count = parse_count(cells[2], lineno, header[2]);
    t.K = parse_count(cells[3], lineno, header[3]);
    t.S = parse_count(cells[4], lineno, header[4]);
    t.R = parse_count(cells[5], lineno, header[5]);
    t.L1 = parse_count(cells[6], lineno, header[6]);
    t.L2 = parse_count(cells[7], lineno, header[7]);
    t.diam_L1 = parse_field(cells[8], lineno, header[8]);
    for (std::size_t b = 0; b < bands; ++b) {
      t.census.push_back({parse_count(cells[9 + 2 * b], lineno, header[9 + 2 * b]),
                          parse_count(cells[10 + 2 * b], lineno, header[10 + 2 * b])});
    }
    records.push_back(std::move(t));
  }
  return records;
}

json cmd_compare(const ExperimentConfig& config, const std::vector<TrialRecord>& records) {
  const Resolved res = resolve(config);
  json j;
  j["config"] = config_echo(config);
  // Predictions need n >= 1; an empty process has nothing to compare.
  if (config.n >= 1) {
    const Predictions p = predict(res.dom, res.den, config.n, res.r);
    j["predictions"] = predictions_to_json(p, res.dom.dim());
    if (!records.empty()) j["report"] = report_to_json(compare_predictions(records, p));
  } else {
    j["predictions"] = nullptr;
  }
  j["trials"] = records.size();
  json bands = json::array();
  for (const Band& b : res.bands) bands.push_back(json::array({number(b.lo), number(b.hi)}));
  j["bands"] = bands;
  if (!records.empty() && records.front().census.size() == res.bands.size()) {
    json census = json::array();
    for (std::size_t b = 0; b < res.bands.size(); ++b) {
      double k = 0.0;
      double v = 0.0;
      for (const TrialRecord& t : records) {
        k += static_cast<double>(t.census[b].K);
        v += static_cast<double>(t.census[b].R);
      }
      const double N = static_cast<double>(records.size());
      census.push_back({{"mean_K", k / N}, {"mean_R", v / N}});
    }
    j["census"] = census;
  }
  return j;
}

SimulationOutput cmd_simulate(const ExperimentConfig& config) {
  const Resolved res = resolve(config);
  SimulationOutput out;
  if (config.n >= 1) out.predictions = predict(res.dom, res.den, config.n, res.r);
  out.records = run_experiment(make_spec(config, res));
  out.csv = records_to_csv(out.records, res.bands.size());
  out.summary = cmd_compare(config, out.records);
  return out;
}

SweepAxis parse_sweep_axis(const std::string& text) {
  if (text == "gamma") return SweepAxis::Gamma;
  if (text == "b") return SweepAxis::B;
  if (text == "n") return SweepAxis::N;
  throw ConfigError("sweep.axis", "expected gamma, b or n");
}

std::string cmd_sweep(const ExperimentConfig& config, SweepAxis axis, const std::vector<double>& values) {
  if (values.size() < 2) throw ConfigError("sweep.values", "need at least two values");
  const char* axis_name = axis == SweepAxis::Gamma ? "gamma" : axis == SweepAxis::B ? "b" : "n";
  std::ostringstream os;
  os << "axis,value,n,r,gamma,b_hat,I_n,I_tilde_n,mu_n,limit_intensity,exponent,regime,statistic,trials,mean,se,"
        "variance,median,mean_ratio,ks_poisson,log_n_median\n";
  for (double value : values) {
    ExperimentConfig c = config;
    switch (axis) {
      case SweepAxis::Gamma:
        c.radius = RadiusConfig{RadiusKind::Gamma, value};
        break;
      case SweepAxis::B:
        c.radius = RadiusConfig{RadiusKind::B, value};
        break;
      case SweepAxis::N:
        c.n = value;
        break;
    }
    const Resolved res = resolve(c);
    const Predictions p = predict(res.dom, res.den, c.n, res.r);
    ExperimentSpec spec = make_spec(c, res);
    spec.bands.clear();
    spec.diameters = DiameterMode::None;
    const std::vector<TrialRecord> records = run_experiment(spec);
    const double log_n = std::log(c.n);
    for (Field f : {Field::K, Field::KMinus1, Field::R, Field::S}) {
      const FieldStats s = field_stats(records, f);
      const bool centred = f != Field::K;
      const double ks = centred && p.I_n > 0 && !s.histogram.empty() ? ks_to_poisson(s.histogram, p.I_n) : kNaN;
      const double log_med = s.median > 0 && log_n > 0 ? std::log(s.median) / log_n : kNaN;
      os << axis_name << ',' << fmt(value) << ',' << fmt(c.n) << ',' << fmt(res.r) << ',' << fmt(p.gamma) << ','
         << fmt(p.b_hat) << ',' << fmt(p.I_n) << ',' << fmt(p.I_tilde_n) << ',' << fmt(p.mu_n) << ','
         << fmt(p.limit_intensity) << ',' << fmt(p.exponent) << ',' << to_string(p.regime) << ',' << to_string(f)
         << ',' << s.count << ',' << fmt(s.mean) << ',' << fmt(s.se) << ',' << fmt(s.variance) << ','
         << fmt(s.median) << ',' << fmt(s.mean / p.I_n) << ',' << fmt(ks) << ',' << fmt(log_med) << '\n';
    }
  }
  return os.str();
}

OracleReport cmd_oracle_check(std::uint64_t seed, std::uint64_t cases, const OracleOptions& options) {
  if (cases < 1) throw ConfigError("oracle.cases", "must be at least 1");
  OracleReport report;
  for (std::uint64_t i = 0; i < cases; ++i) {
    Rng rng(trial_seed(seed, i));
    for (OracleCase c : {components_case(i, rng, options), volume_case(i, rng, options), g_case(i, rng)}) {
      if (!c.passed) ++report.failures;
      report.cases.push_back(std::move(c));
    }
  }
  return report;
}

}  // namespace rgg
