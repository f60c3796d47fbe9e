#include "rgg/config.hpp"

#include "rgg/theory.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace rgg {

namespace {

using nlohmann::json;

constexpr const char* kRadiusKeys[] = {"r", "gamma", "b", "degree"};

const char* radius_key(RadiusKind kind) {
  switch (kind) {
    case RadiusKind::Explicit:
      return "r";
    case RadiusKind::Gamma:
      return "gamma";
    case RadiusKind::B:
      return "b";
    case RadiusKind::Degree:
      return "degree";
  }
  return "?";
}

RadiusKind radius_kind_from_key(const std::string& key) {
  if (key == "r") return RadiusKind::Explicit;
  if (key == "gamma") return RadiusKind::Gamma;
  if (key == "b") return RadiusKind::B;
  return RadiusKind::Degree;
}

// Parses the whole string as a double; "inf" is accepted when allowed.
double parse_number(const std::string& text, const std::string& path, bool allow_inf = false) {
  if (allow_inf && (text == "inf" || text == "Inf" || text == "infinity")) {
    return std::numeric_limits<double>::infinity();
  }
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw ConfigError(path, "expected a number, got '" + text + "'");
  }
  if (!std::isfinite(value)) throw ConfigError(path, "value must be finite");
  return value;
}

double json_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

std::uint64_t json_uint(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    const auto v = j.get<std::int64_t>();
    if (v < 0) throw ConfigError(path, "must be nonnegative");
    return static_cast<std::uint64_t>(v);
  }
  throw ConfigError(path, "expected a nonnegative integer");
}

std::string json_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

double band_edge(const json& j, const std::string& path) {
  if (j.is_string()) return parse_number(j.get<std::string>(), path, true);
  return json_number(j, path);
}

json band_edge_to_json(double x) {
  if (std::isinf(x)) return "inf";
  return x;
}

std::string format_double(double x) {
  if (std::isinf(x)) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

int dimension_of(const DomainConfig& domain) { return domain.kind == DomainKind::Ball3 ? 3 : 2; }

Domain make_domain(const DomainConfig& domain) {
  switch (domain.kind) {
    case DomainKind::UnitSquare2:
      return Domain::unit_square();
    case DomainKind::Disk2:
      return Domain::disk(domain.radius);
    case DomainKind::Ball3:
      return Domain::ball(domain.radius);
  }
  throw ConfigError("config.domain", "unknown domain kind");
}

std::vector<Band> default_bands(double n) {
  const double L = n > 1.0 ? std::log(n) : 0.0;
  const double big = L * L;
  if (big <= 1.0) return {{0.0, 0.25}, {0.25, 1.0}, {1.0, std::numeric_limits<double>::infinity()}};
  return {{0.0, 0.25}, {0.25, 1.0}, {1.0, big}, {big, std::numeric_limits<double>::infinity()}};
}

void validate(const ExperimentConfig& c) {
  if (c.domain.kind != DomainKind::UnitSquare2 && !(c.domain.radius > 0 && std::isfinite(c.domain.radius))) {
    throw ConfigError("config.domain.radius", "must be positive and finite");
  }
  if (c.density.kind == DensityKind::BoundaryTilt && !(c.density.beta > -1.0 && std::isfinite(c.density.beta))) {
    throw ConfigError("config.density.beta", "must be finite and greater than -1");
  }
  if (!(c.n >= 0) || !std::isfinite(c.n)) throw ConfigError("config.n", "must be finite and nonnegative");
  if (c.input == InputKind::Binomial && c.n != std::floor(c.n)) {
    throw ConfigError("config.n", "binomial input needs an integer n");
  }
  if (c.input == InputKind::Poisson && !(c.n > 0)) throw ConfigError("config.n", "Poisson input needs n > 0");
  if (!c.radius) throw ConfigError("config.radius", "exactly one of r, gamma, b, degree is required");
  const double v = c.radius->value;
  if (!std::isfinite(v)) throw ConfigError(std::string("config.") + radius_key(c.radius->kind), "must be finite");
  switch (c.radius->kind) {
    case RadiusKind::Explicit:
      if (!(v > 0)) throw ConfigError("config.r", "must be positive");
      break;
    case RadiusKind::Gamma:
      if (!(c.n > (c.domain.kind == DomainKind::Ball3 ? std::exp(1.0) : 1.0))) {
        throw ConfigError("config.n", "gamma needs n > 1 (n > e in three dimensions)");
      }
      break;
    case RadiusKind::B:
      if (!(v > 0)) throw ConfigError("config.b", "must be positive");
      if (!(c.n > 1)) throw ConfigError("config.n", "b needs n > 1");
      break;
    case RadiusKind::Degree:
      if (!(v > 0)) throw ConfigError("config.degree", "must be positive");
      if (!(c.n > 0)) throw ConfigError("config.n", "degree needs n > 0");
      break;
  }
  if (c.trials < 1) throw ConfigError("config.trials", "must be at least 1");
  if (c.bands) {
    if (c.bands->empty()) throw ConfigError("config.bands", "must be nonempty when given");
    for (std::size_t i = 0; i < c.bands->size(); ++i) {
      const Band& b = (*c.bands)[i];
      const std::string path = "config.bands[" + std::to_string(i) + "]";
      if (!(b.lo >= 0) || !std::isfinite(b.lo)) throw ConfigError(path, "lower edge must be finite and >= 0");
      if (!(b.hi > b.lo)) throw ConfigError(path, "upper edge must exceed lower edge");
    }
  }
  make_domain(c.domain);
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config", "expected an object");
  static const std::set<std::string> known = {"domain", "density", "d",      "n",      "r",       "gamma",
                                              "b",      "degree",  "input",  "trials", "seed",    "bands",
                                              "threads", "out_csv", "out_json"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ConfigError("config." + key, "unknown field");
  }
  ExperimentConfig c;

  const json& dj = j.contains("domain") ? j["domain"] : json("square");
  if (dj.is_string()) {
    c.domain = parse_domain_flag(dj.get<std::string>());
  } else if (dj.is_object()) {
    const std::string kind = json_string(dj.value("kind", json()), "config.domain.kind");
    if (kind == "square") {
      c.domain = {DomainKind::UnitSquare2, 1.0};
    } else if (kind == "disk" || kind == "ball") {
      if (!dj.contains("radius")) throw ConfigError("config.domain.radius", "required for " + kind);
      c.domain = {kind == "disk" ? DomainKind::Disk2 : DomainKind::Ball3,
                  json_number(dj["radius"], "config.domain.radius")};
    } else {
      throw ConfigError("config.domain.kind", "expected square, disk or ball");
    }
  } else {
    throw ConfigError("config.domain", "expected an object or a string");
  }

  if (j.contains("density")) {
    const json& fj = j["density"];
    if (fj.is_string()) {
      c.density = parse_density_flag(fj.get<std::string>());
    } else if (fj.is_object()) {
      const std::string kind = json_string(fj.value("kind", json()), "config.density.kind");
      if (kind == "uniform") {
        c.density = DensitySpec::uniform();
      } else if (kind == "tilt") {
        if (!fj.contains("beta")) throw ConfigError("config.density.beta", "required for tilt");
        c.density = DensitySpec::tilt(json_number(fj["beta"], "config.density.beta"));
      } else {
        throw ConfigError("config.density.kind", "expected uniform or tilt");
      }
    } else {
      throw ConfigError("config.density", "expected an object or a string");
    }
  }

  if (j.contains("d")) {
    const std::uint64_t d = json_uint(j["d"], "config.d");
    if (static_cast<int>(d) != dimension_of(c.domain)) throw ConfigError("config.d", "does not match the domain");
  }

  if (!j.contains("n")) throw ConfigError("config.n", "required");
  c.n = json_number(j["n"], "config.n");

  int radius_count = 0;
  for (const char* key : kRadiusKeys) {
    if (!j.contains(key)) continue;
    ++radius_count;
    c.radius = RadiusConfig{radius_kind_from_key(key), json_number(j[key], std::string("config.") + key)};
  }
  if (radius_count > 1) throw ConfigError("config.radius", "give exactly one of r, gamma, b, degree");

  if (j.contains("input")) c.input = parse_input_flag(json_string(j["input"], "config.input"));
  if (j.contains("trials")) c.trials = json_uint(j["trials"], "config.trials");
  if (j.contains("seed")) c.seed = json_uint(j["seed"], "config.seed");
  if (j.contains("threads")) {
    const std::uint64_t t = json_uint(j["threads"], "config.threads");
    if (t > 4096) throw ConfigError("config.threads", "too large");
    c.threads = static_cast<unsigned>(t);
  }
  if (j.contains("out_csv")) c.out_csv = json_string(j["out_csv"], "config.out_csv");
  if (j.contains("out_json")) c.out_json = json_string(j["out_json"], "config.out_json");

  if (j.contains("bands")) {
    const json& bj = j["bands"];
    if (bj.is_string()) {
      c.bands = parse_bands_flag(bj.get<std::string>());
    } else if (bj.is_array()) {
      std::vector<Band> bands;
      for (std::size_t i = 0; i < bj.size(); ++i) {
        const std::string path = "config.bands[" + std::to_string(i) + "]";
        if (!bj[i].is_array() || bj[i].size() != 2) throw ConfigError(path, "expected [lo, hi]");
        bands.push_back({band_edge(bj[i][0], path), band_edge(bj[i][1], path)});
      }
      c.bands = std::move(bands);
    } else {
      throw ConfigError("config.bands", "expected an array of [lo, hi] pairs");
    }
  }

  validate(c);
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  json dj;
  switch (c.domain.kind) {
    case DomainKind::UnitSquare2:
      dj["kind"] = "square";
      break;
    case DomainKind::Disk2:
      dj["kind"] = "disk";
      dj["radius"] = c.domain.radius;
      break;
    case DomainKind::Ball3:
      dj["kind"] = "ball";
      dj["radius"] = c.domain.radius;
      break;
  }
  j["domain"] = dj;
  json fj;
  if (c.density.kind == DensityKind::Uniform) {
    fj["kind"] = "uniform";
  } else {
    fj["kind"] = "tilt";
    fj["beta"] = c.density.beta;
  }
  j["density"] = fj;
  j["d"] = dimension_of(c.domain);
  j["n"] = c.n;
  if (c.radius) j[radius_key(c.radius->kind)] = c.radius->value;
  j["input"] = to_string(c.input);
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  if (c.bands) {
    json bj = json::array();
    for (const Band& b : *c.bands) bj.push_back(json::array({band_edge_to_json(b.lo), band_edge_to_json(b.hi)}));
    j["bands"] = bj;
  }
  j["threads"] = c.threads;
  if (!c.out_csv.empty()) j["out_csv"] = c.out_csv;
  if (!c.out_json.empty()) j["out_json"] = c.out_json;
  return j;
}

DomainConfig parse_domain_flag(const std::string& text) {
  if (text == "square") return {DomainKind::UnitSquare2, 1.0};
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  if (kind != "disk" && kind != "ball") throw ConfigError("config.domain", "expected square, disk:R or ball:R");
  const double radius =
      colon == std::string::npos ? 1.0 : parse_number(text.substr(colon + 1), "config.domain.radius");
  if (!(radius > 0)) throw ConfigError("config.domain.radius", "must be positive");
  return {kind == "disk" ? DomainKind::Disk2 : DomainKind::Ball3, radius};
}

DensitySpec parse_density_flag(const std::string& text) {
  if (text == "uniform") return DensitySpec::uniform();
  const auto colon = text.find(':');
  if (text.substr(0, colon) != "tilt" || colon == std::string::npos) {
    throw ConfigError("config.density", "expected uniform or tilt:BETA");
  }
  return DensitySpec::tilt(parse_number(text.substr(colon + 1), "config.density.beta"));
}

std::vector<Band> parse_bands_flag(const std::string& text) {
  std::vector<Band> bands;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const std::string path = "config.bands[" + std::to_string(bands.size()) + "]";
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError(path, "expected lo:hi");
    bands.push_back({parse_number(item.substr(0, colon), path), parse_number(item.substr(colon + 1), path, true)});
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return bands;
}

InputKind parse_input_flag(const std::string& text) {
  if (text == "binomial") return InputKind::Binomial;
  if (text == "poisson") return InputKind::Poisson;
  throw ConfigError("config.input", "expected binomial or poisson");
}

std::string domain_flag(const DomainConfig& domain) {
  switch (domain.kind) {
    case DomainKind::UnitSquare2:
      return "square";
    case DomainKind::Disk2:
      return "disk:" + format_double(domain.radius);
    case DomainKind::Ball3:
      return "ball:" + format_double(domain.radius);
  }
  return "?";
}

std::string density_flag(const DensitySpec& density) {
  return density.kind == DensityKind::Uniform ? "uniform" : "tilt:" + format_double(density.beta);
}

std::string to_string(InputKind input) { return input == InputKind::Binomial ? "binomial" : "poisson"; }

nlohmann::json apply_overrides(nlohmann::json j, const FlagOverrides& f) {
  if (j.is_null()) j = json::object();
  if (!j.is_object()) throw ConfigError("config", "expected an object");
  auto uint_flag = [](const std::string& text, const std::string& path) {
    const double v = parse_number(text, path);
    if (v < 0 || v != std::floor(v) || v > 1.8e19) throw ConfigError(path, "expected a nonnegative integer");
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc() || ptr != text.data() + text.size()) throw ConfigError(path, "expected a nonnegative integer");
    return out;
  };
  if (f.domain) {
    j["domain"] = *f.domain;
    j.erase("d");  // the dimension follows the overriding domain
  }
  if (f.density) j["density"] = *f.density;
  if (f.n) j["n"] = parse_number(*f.n, "config.n");
  const std::pair<const char*, const std::optional<std::string>*> radius_flags[] = {
      {"r", &f.r}, {"gamma", &f.gamma}, {"b", &f.b}, {"degree", &f.degree}};
  int given = 0;
  for (const auto& [key, value] : radius_flags) given += value->has_value();
  if (given > 1) throw ConfigError("config.radius", "give exactly one of --radius, --gamma, --b, --degree");
  if (given == 1) {
    for (const char* key : kRadiusKeys) j.erase(key);
    for (const auto& [key, value] : radius_flags) {
      if (*value) j[key] = parse_number(**value, std::string("config.") + key);
    }
  }
  if (f.input) j["input"] = *f.input;
  if (f.trials) j["trials"] = uint_flag(*f.trials, "config.trials");
  if (f.seed) j["seed"] = uint_flag(*f.seed, "config.seed");
  if (f.bands) j["bands"] = *f.bands;
  if (f.threads) j["threads"] = uint_flag(*f.threads, "config.threads");
  if (f.out_csv) j["out_csv"] = *f.out_csv;
  if (f.out_json) j["out_json"] = *f.out_json;
  return j;
}

double resolve_radius(const ExperimentConfig& c) {
  if (!c.radius) throw ConfigError("config.radius", "exactly one of r, gamma, b, degree is required");
  const Domain dom = make_domain(c.domain);
  const double v = c.radius->value;
  switch (c.radius->kind) {
    case RadiusKind::Explicit:
      return v;
    case RadiusKind::Gamma:
      return radius_for_gamma(dom, c.n, v);
    case RadiusKind::B:
      return radius_for_b(dom, c.n, v);
    case RadiusKind::Degree:
      return std::pow(v * dom.volume() / c.n, 1.0 / dom.dim());
  }
  return v;
}

}  // namespace rgg
