#pragma once

#include "rgg/config.hpp"
#include "rgg/experiment.hpp"
#include "rgg/theory.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rgg {

/// A validated config turned into concrete objects.
struct Resolved {
  Domain dom;
  DensityModel den;
  double r = 0.0;
  std::vector<Band> bands;
};

Resolved resolve(const ExperimentConfig& config);

ExperimentSpec make_spec(const ExperimentConfig& config, const Resolved& resolved);

/// Flat object with keys I_n, I_tilde_n, mu_n, gamma, b_hat, b_c, b_prime_c,
/// c_dA, limit_intensity, regime, quadrature_error (plus n, r, d, exponent,
/// quadrature_converged). Non-finite values are written as strings.
nlohmann::json predictions_to_json(const Predictions& p, int d);

nlohmann::json report_to_json(const ComparisonReport& report);

nlohmann::json cmd_predict(const ExperimentConfig& config);

/// trial,seed,count,K,S,R,L1,L2,diamL1,band0_K,band0_R,...
std::string csv_header(std::size_t bands);
std::string records_to_csv(const std::vector<TrialRecord>& records, std::size_t bands);
/// Inverse of records_to_csv; returns the band count through `bands`.
std::vector<TrialRecord> records_from_csv(std::istream& in, std::size_t* bands = nullptr);

struct SimulationOutput {
  std::vector<TrialRecord> records;
  Predictions predictions;
  std::string csv;
  nlohmann::json summary;
};

SimulationOutput cmd_simulate(const ExperimentConfig& config);

/// Summary of previously simulated records against fresh predictions.
nlohmann::json cmd_compare(const ExperimentConfig& config, const std::vector<TrialRecord>& records);

enum class SweepAxis { Gamma, B, N };

SweepAxis parse_sweep_axis(const std::string& text);

/// One row per (axis value, statistic); the statistics are K, K-1, R, S.
/// log_n_median is log(median)/log(n), NaN when the median is not positive.
std::string cmd_sweep(const ExperimentConfig& config, SweepAxis axis, const std::vector<double>& values);

struct OracleCase {
  std::string name;
  bool passed = true;
  std::string detail;  // parameter dump, filled for failures
};

struct OracleReport {
  std::vector<OracleCase> cases;
  std::size_t failures = 0;
  bool ok() const { return failures == 0; }
};

struct OracleOptions {
  /// Test hook: the grid route sees r·(1 + radius_perturbation).
  double radius_perturbation = 0.0;
  std::uint64_t mc_samples = 200'000;
};

/// Each case runs grid-vs-bruteforce components, exact-vs-Monte-Carlo
/// ball_region_volume and closed-form-vs-quadrature g.
OracleReport cmd_oracle_check(std::uint64_t seed, std::uint64_t cases, const OracleOptions& options = {});

}  // namespace rgg
