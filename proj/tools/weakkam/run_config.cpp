#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "weakkam/errors.hpp"
#include "weakkam/io.hpp"
#include "weakkam/random.hpp"

namespace weakkam::cli {

using nlohmann::json;

namespace {

const char* to_string(InitialKind kind) {
  switch (kind) {
    case InitialKind::Fourier: return "fourier";
    case InitialKind::Cosine: return "cosine";
    case InitialKind::Zero: return "zero";
    default: return "lipschitz";
  }
}

InitialKind initial_from_string(const std::string& name) {
  if (name == "lipschitz") return InitialKind::Lipschitz;
  if (name == "fourier") return InitialKind::Fourier;
  if (name == "cosine") return InitialKind::Cosine;
  if (name == "zero") return InitialKind::Zero;
  throw ConfigError("unknown initial field kind '" + name + "'");
}

template <typename T>
void read(const json& j, const char* key, T& target) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  try {
    target = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

template <typename T>
void read(const json& j, const char* key, std::optional<T>& target) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  T value{};
  read(j, key, value);
  target = value;
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

RunConfig config_from_json(const json& input) {
  if (!input.is_object()) throw ConfigError("config must be a JSON object");
  const json& j = input.contains("config") && input.at("config").is_object() ? input.at("config") : input;

  RunConfig config;
  if (j.contains("spec")) config.spec = spec_from_json(j.at("spec").dump());
  VerifyConfig& r = config.run;
  read(j, "n_x", r.n_x);
  read(j, "m_t", r.m_t);
  read(j, "n_v", r.n_v);
  read(j, "v_max", r.v_max);
  read(j, "n_periods", r.n_periods);
  read(j, "q_max", r.q_max);
  read(j, "window", r.window);
  read(j, "rotation_probes", r.rotation_probes);
  read(j, "rotation_span", r.rotation_span);
  read(j, "seed", r.seed);
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (!t.is_object()) throw ConfigError("'tolerances' must be an object");
    read(t, "lambda_tol", r.tolerances.lambda_tol);
    read(t, "fixedpoint_tol", r.tolerances.fixedpoint_tol);
    read(t, "period_tol", r.tolerances.period_tol);
  }
  if (j.contains("initial")) {
    const json& init = j.at("initial");
    if (!init.is_object()) throw ConfigError("'initial' must be an object");
    std::string kind = to_string(config.initial);
    read(init, "kind", kind);
    config.initial = initial_from_string(kind);
    read(init, "amplitude", config.initial_amplitude);
  }
  read(j, "aubry_probes", config.aubry_probes);
  read(j, "aubry_span", config.aubry_span);
  read(j, "cluster_tolerance", config.cluster_tolerance);
  read(j, "output_dir", config.output_dir);
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const json j = json::parse(buffer.str(), nullptr, false);
  if (j.is_discarded()) throw ConfigError("config file '" + path + "' is not valid JSON");
  return config_from_json(j);
}

json config_to_json(const RunConfig& config) {
  const VerifyConfig& r = config.run;
  return {{"spec", json::parse(spec_to_json(config.spec))},
          {"n_x", r.n_x},
          {"m_t", r.m_t},
          {"n_v", r.n_v},
          {"v_max", optional_json(r.v_max)},
          {"n_periods", r.n_periods},
          {"q_max", r.q_max},
          {"window", r.window},
          {"rotation_probes", r.rotation_probes},
          {"rotation_span", r.rotation_span},
          {"aubry_probes", config.aubry_probes},
          {"aubry_span", config.aubry_span},
          {"cluster_tolerance", optional_json(config.cluster_tolerance)},
          {"initial", {{"kind", to_string(config.initial)}, {"amplitude", config.initial_amplitude}}},
          {"tolerances",
           {{"lambda_tol", r.tolerances.lambda_tol},
            {"fixedpoint_tol", r.tolerances.fixedpoint_tol},
            {"period_tol", r.tolerances.period_tol}}},
          {"seed", r.seed},
          {"output_dir", config.output_dir}};
}

void check(const RunConfig& config) {
  const VerifyConfig& r = config.run;
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  require(r.n_x >= 8 && r.n_x <= 20000, "n_x must lie in [8, 20000]");
  require(r.m_t >= 4 && r.m_t <= 20000, "m_t must lie in [4, 20000]");
  require(r.n_v >= 9 && r.n_v <= 4001 && r.n_v % 2 == 1, "n_v must be odd and lie in [9, 4001]");
  require(!r.v_max || *r.v_max > 0.0, "v_max must be positive");
  require(r.n_periods >= 1, "n_periods must be >= 1");
  require(r.q_max >= 1, "q_max must be >= 1");
  require(r.window >= 1, "window must be >= 1");
  require(r.rotation_probes >= 1, "rotation_probes must be >= 1");
  require(r.rotation_span >= 8, "rotation_span must be >= 8");
  require(r.tolerances.lambda_tol > 0.0 && r.tolerances.fixedpoint_tol > 0.0 && r.tolerances.period_tol > 0.0,
          "tolerances must be positive");
  require(config.aubry_probes >= 1 && config.aubry_span >= 1, "aubry_probes and aubry_span must be >= 1");
  require(!config.cluster_tolerance || *config.cluster_tolerance > 0.0, "cluster_tolerance must be positive");
  require(config.initial_amplitude >= 0.0 && std::isfinite(config.initial_amplitude),
          "initial amplitude must be finite and nonnegative");
  require(!config.output_dir.empty(), "output_dir must not be empty");
  validate(config.spec);
}

ValueField initial_field(const RunConfig& config, const CircleGrid& grid) {
  Lcg64 rng(config.run.seed);
  const double a = config.initial_amplitude;
  switch (config.initial) {
    case InitialKind::Fourier: return random_fourier_field(grid, rng, a);
    case InitialKind::Cosine:
      return sample(grid, [a](double x) { return a * std::cos(2.0 * std::numbers::pi * x); });
    case InitialKind::Zero: return sample(grid, [](double) { return 0.0; });
    default: return random_lipschitz_field(grid, rng, a);
  }
}

}  // namespace weakkam::cli
