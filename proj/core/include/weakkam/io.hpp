#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "weakkam/characteristics.hpp"
#include "weakkam/convergence.hpp"
#include "weakkam/spectrum.hpp"

namespace weakkam {

// {"family": ..., "params": {...}, "lambda_shift": ..., "rescale": {"a", "b"} | null}
// For a rescaled spec "family" names the inner family. Parsing throws
// ConfigError on malformed input.
std::string spec_to_json(const HamiltonianSpec& spec);
HamiltonianSpec spec_from_json(std::string_view text);

std::string grids_to_json(const Grids& grids);

// One row per field: step_index, v_0, ..., v_{n-1}. Doubles round-trip.
void write_snapshots_csv(std::ostream& out, const std::vector<ValueField>& fields);
std::vector<ValueField> read_snapshots_csv(std::istream& in);

// A single-line JSON header (spec, grids, lambda, residual, iterations)
// followed by the snapshot CSV block.
void write_periodic_solution(std::ostream& out, const PeriodicSolution& solution);
PeriodicSolution read_periodic_solution(std::istream& in);

// curve, step_index, lifted_position, velocity, momentum. Velocity and
// momentum belong to the segment leaving the sample; empty on the last one.
void write_characteristics_csv(std::ostream& out, const std::vector<Characteristic>& curves);

std::string aubry_to_json(const AubrySample& sample);

// period_index, then one column per candidate T; blank past the trace end.
void write_residuals_csv(std::ostream& out, const PeriodDetection& detection);

std::string report_to_json(const ConvergenceReport& report);

// Binary foot-table dump: int64 n_x, m_t, W, then the retained argmin
// velocities as float64, row-major by step then node.
struct FootTableDump {
  std::int64_t n_x = 0;
  std::int64_t m_t = 0;
  std::int64_t window = 0;
  std::vector<std::vector<double>> rows;
};
void write_foot_tables(std::ostream& out, const EvolutionTrace& trace);
FootTableDump read_foot_tables(std::istream& in);

}  // namespace weakkam
