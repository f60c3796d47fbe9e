#include "rgg/commands.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kRuntime = 2;
constexpr int kOracleFailure = 3;

struct RuntimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonFlags {
  std::string config_path;
  rgg::FlagOverrides overrides;
};

void add_text_option(CLI::App* app, const std::string& name, std::optional<std::string>& slot,
                     const std::string& help) {
  app->add_option_function<std::string>(name, [&slot](const std::string& v) { slot = v; }, help);
}

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config_path, "JSON experiment config");
  auto& o = f.overrides;
  add_text_option(app, "--domain", o.domain, "square | disk:R | ball:R");
  add_text_option(app, "--density", o.density, "uniform | tilt:BETA");
  add_text_option(app, "--n", o.n, "number of points (binomial) or intensity (Poisson)");
  add_text_option(app, "--radius", o.r, "explicit connection radius r");
  add_text_option(app, "--gamma", o.gamma, "centred connectivity parameter");
  add_text_option(app, "--b", o.b, "logarithmic degree rate, n θ r^d = b log n");
  add_text_option(app, "--degree", o.degree, "thermodynamic degree, n r^d = a λ(A)");
  add_text_option(app, "--input", o.input, "binomial | poisson");
  add_text_option(app, "--trials", o.trials, "number of trials");
  add_text_option(app, "--seed", o.seed, "master seed");
  add_text_option(app, "--bands", o.bands, "diameter bands in units of r, lo:hi,...");
  add_text_option(app, "--threads", o.threads, "worker threads (0 = hardware); falls back to RGG_THREADS");
  add_text_option(app, "--out-csv", o.out_csv, "per-trial CSV output path");
  add_text_option(app, "--out-json", o.out_json, "JSON output path");
}

rgg::ExperimentConfig load_config(const CommonFlags& f) {
  nlohmann::json base = nlohmann::json::object();
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw rgg::ConfigError("config", "cannot open " + f.config_path);
    try {
      base = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw rgg::ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
  }
  rgg::FlagOverrides o = f.overrides;
  if (!o.threads) {
    if (const char* env = std::getenv("RGG_THREADS"); env && *env) o.threads = std::string(env);
  }
  return rgg::config_from_json(rgg::apply_overrides(base, o));
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw RuntimeError("write to " + path + " failed");
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text(path, text);
  }
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw rgg::ConfigError("sweep.values", "bad value '" + item + "'");
    }
  }
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Component counts of random geometric graphs: predictions and Monte Carlo checks"};
  app.require_subcommand(1);

  CommonFlags predict_flags;
  CLI::App* predict = app.add_subcommand("predict", "analytic predictions as JSON");
  add_common(predict, predict_flags);

  CommonFlags simulate_flags;
  CLI::App* simulate = app.add_subcommand("simulate", "run trials; per-trial CSV and JSON summary");
  add_common(simulate, simulate_flags);

  CommonFlags compare_flags;
  std::string compare_csv;
  CLI::App* compare = app.add_subcommand("compare", "summarise a trial CSV against predictions");
  add_common(compare, compare_flags);
  compare->add_option("--csv", compare_csv, "trial CSV written by simulate")->required();

  CommonFlags sweep_flags;
  std::string sweep_axis;
  std::string sweep_values;
  CLI::App* sweep = app.add_subcommand("sweep", "long-format CSV over gamma, b or n");
  add_common(sweep, sweep_flags);
  sweep->add_option("--axis", sweep_axis, "gamma | b | n")->required();
  sweep->add_option("--values", sweep_values, "comma-separated axis values")->required();

  std::uint64_t oracle_seed = 1;
  std::int64_t oracle_cases = 200;
  double oracle_perturb = 0.0;
  CLI::App* oracle = app.add_subcommand("oracle-check", "implementation self-checks against reference routes");
  oracle->add_option("--seed", oracle_seed, "seed for case generation");
  oracle->add_option("--cases", oracle_cases, "number of cases");
  oracle->add_option("--perturb-radius", oracle_perturb, "test hook: relative radius error for the grid route")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*predict) {
      const rgg::ExperimentConfig c = load_config(predict_flags);
      emit(c.out_json, rgg::cmd_predict(c).dump(2) + "\n");
    } else if (*simulate) {
      const rgg::ExperimentConfig c = load_config(simulate_flags);
      const rgg::SimulationOutput out = rgg::cmd_simulate(c);
      if (!c.out_csv.empty()) write_text(c.out_csv, out.csv);
      emit(c.out_json, out.summary.dump(2) + "\n");
    } else if (*compare) {
      const rgg::ExperimentConfig c = load_config(compare_flags);
      std::ifstream in(compare_csv);
      if (!in) throw RuntimeError("cannot open " + compare_csv);
      const std::vector<rgg::TrialRecord> records = rgg::records_from_csv(in);
      emit(c.out_json, rgg::cmd_compare(c, records).dump(2) + "\n");
    } else if (*sweep) {
      const rgg::SweepAxis axis = rgg::parse_sweep_axis(sweep_axis);
      const std::vector<double> values = parse_values(sweep_values);
      // A gamma or b axis supplies the radius, so a radius flag is not needed.
      rgg::FlagOverrides& o = sweep_flags.overrides;
      if (!o.r && !o.gamma && !o.b && !o.degree && !values.empty()) {
        if (axis == rgg::SweepAxis::Gamma) o.gamma = std::to_string(values.front());
        if (axis == rgg::SweepAxis::B) o.b = std::to_string(values.front());
      }
      const rgg::ExperimentConfig c = load_config(sweep_flags);
      const std::string csv = rgg::cmd_sweep(c, axis, values);
      emit(c.out_csv, csv);
    } else if (*oracle) {
      if (oracle_cases < 1) throw rgg::ConfigError("oracle.cases", "must be at least 1");
      const rgg::OracleReport report = rgg::cmd_oracle_check(
          oracle_seed, static_cast<std::uint64_t>(oracle_cases), {.radius_perturbation = oracle_perturb});
      for (const rgg::OracleCase& c : report.cases) {
        if (!c.passed) std::cout << "FAIL " << c.name << ": " << c.detail << "\n";
      }
      std::cout << (report.ok() ? "PASS" : "FAIL") << " oracle-check: " << report.cases.size() - report.failures
                << "/" << report.cases.size() << " checks passed\n";
      return report.ok() ? kOk : kOracleFailure;
    }
  } catch (const rgg::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kOk;
}
