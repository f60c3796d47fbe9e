#pragma once

#include "rgg/density.hpp"
#include "rgg/graph.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rgg {

/// Validation failure; `path` names the offending field, e.g. "config.radius".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct DomainConfig {
  DomainKind kind = DomainKind::UnitSquare2;
  double radius = 1.0;  // ignored for the square
  bool operator==(const DomainConfig&) const = default;
};

enum class RadiusKind { Explicit, Gamma, B, Degree };

/// Exactly one way of fixing r: r itself, γ, the log-degree rate b, or the
/// thermodynamic degree a with n r^d = a λ(A).
struct RadiusConfig {
  RadiusKind kind = RadiusKind::Gamma;
  double value = 0.0;
  bool operator==(const RadiusConfig&) const = default;
};

struct ExperimentConfig {
  DomainConfig domain;
  DensitySpec density;
  double n = 0.0;
  std::optional<RadiusConfig> radius;
  InputKind input = InputKind::Binomial;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  std::optional<std::vector<Band>> bands;  // defaults depend on n
  unsigned threads = 1;
  std::string out_csv;
  std::string out_json;

  bool operator==(const ExperimentConfig&) const = default;
};

int dimension_of(const DomainConfig& domain);
Domain make_domain(const DomainConfig& domain);

/// (0, 1/4], (1/4, 1], (1, (log n)^2], ((log n)^2, ∞) in units of r.
std::vector<Band> default_bands(double n);

/// Throws ConfigError for missing or inconsistent fields.
void validate(const ExperimentConfig& config);

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);

/// "square", "disk:R", "ball:R"
DomainConfig parse_domain_flag(const std::string& text);
/// "uniform", "tilt:BETA"
DensitySpec parse_density_flag(const std::string& text);
/// "lo:hi,lo:hi,..." with "inf" allowed for hi
std::vector<Band> parse_bands_flag(const std::string& text);
InputKind parse_input_flag(const std::string& text);

std::string domain_flag(const DomainConfig& domain);
std::string density_flag(const DensitySpec& density);
std::string to_string(InputKind input);

/// Command-line values, still as text; unset fields keep the base value.
struct FlagOverrides {
  std::optional<std::string> domain, density, n, input, trials, seed, bands, threads, out_csv, out_json;
  std::optional<std::string> r, gamma, b, degree;
};

/// Overlays flags on a JSON config object. Any radius flag replaces the
/// base radius spec; giving two radius flags is an error.
nlohmann::json apply_overrides(nlohmann::json base, const FlagOverrides& flags);

/// r implied by the radius config for this domain and n.
double resolve_radius(const ExperimentConfig& config);

}  // namespace rgg
