#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"
#include "weakkam/convergence.hpp"
#include "weakkam/grid.hpp"

namespace weakkam::cli {

enum class InitialKind { Lipschitz, Fourier, Cosine, Zero };

struct RunConfig {
  HamiltonianSpec spec = HamiltonianSpec::mechanical(1.0, 0.5);
  VerifyConfig run;  // grids, n_periods, q_max, window, rotation probes, tolerances, seed
  InitialKind initial = InitialKind::Lipschitz;
  double initial_amplitude = 1.0;
  int aubry_probes = 32;
  int aubry_span = 32;
  std::optional<double> cluster_tolerance;  // 3 dx when absent
  std::string output_dir = "weakkam-out";
};

// Reads a config file or a manifest written by an earlier run (its
// "config" member). Throws ConfigError.
RunConfig load_config(const std::string& path);
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& config);

// Range checks on grid sizes, tolerances and spans. Throws ConfigError.
void check(const RunConfig& config);

ValueField initial_field(const RunConfig& config, const CircleGrid& grid);

}  // namespace weakkam::cli
