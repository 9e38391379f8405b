#include "weakkam/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "weakkam/errors.hpp"

namespace weakkam {

using nlohmann::json;

namespace {

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Family family_from_string(const std::string& name) {
  if (name == "mechanical") return Family::Mechanical;
  if (name == "tilted_quadratic") return Family::TiltedQuadratic;
  if (name == "quartic") return Family::Quartic;
  throw ConfigError("unknown Hamiltonian family '" + name + "'");
}

json spec_json(const HamiltonianSpec& spec) {
  json j;
  j["family"] = to_string(spec.base);
  if (spec.base == Family::TiltedQuadratic) {
    j["params"] = {{"c", spec.tilt}};
  } else {
    j["params"] = {{"A", spec.amplitude}, {"epsilon", spec.modulation}};
  }
  j["lambda_shift"] = spec.lambda_shift;
  if (spec.rescaling) {
    j["rescale"] = {{"a", spec.rescaling->a}, {"b", spec.rescaling->b}};
  } else {
    j["rescale"] = nullptr;
  }
  return j;
}

double number_or(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number()) throw ConfigError(std::string("parameter '") + key + "' must be a number");
  return obj.at(key).get<double>();
}

HamiltonianSpec spec_from(const json& j) {
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string()) {
    throw ConfigError("Hamiltonian spec needs a string 'family'");
  }
  const json params = j.value("params", json::object());
  if (!params.is_object()) throw ConfigError("'params' must be an object");
  HamiltonianSpec spec;
  spec.base = family_from_string(j.at("family").get<std::string>());
  if (spec.base == Family::TiltedQuadratic) {
    spec.tilt = number_or(params, "c", 0.0);
  } else {
    spec.amplitude = number_or(params, "A", 0.0);
    spec.modulation = number_or(params, "epsilon", 0.0);
  }
  spec.lambda_shift = number_or(j, "lambda_shift", 0.0);
  if (j.contains("rescale") && !j.at("rescale").is_null()) {
    const json& r = j.at("rescale");
    if (!r.is_object() || !r.contains("a") || !r.contains("b") || !r.at("a").is_number_integer() ||
        !r.at("b").is_number_integer()) {
      throw ConfigError("'rescale' must be {\"a\": int, \"b\": int} or null");
    }
    const double shift = spec.lambda_shift;
    spec.lambda_shift = 0.0;
    spec = rescale(spec, r.at("a").get<long>(), r.at("b").get<long>());
    spec.lambda_shift = shift;
  }
  validate(spec);
  return spec;
}

json grids_json(const Grids& grids) {
  return {{"n_x", grids.space.size()},
          {"m_t", grids.time.steps_per_period()},
          {"v_max", grids.velocity.v_max()},
          {"n_v", grids.velocity.size()}};
}

Grids grids_from(const json& j) {
  try {
    return make_grids(j.at("n_x").get<int>(), j.at("m_t").get<int>(), j.at("v_max").get<double>(),
                      j.at("n_v").get<int>());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed grids: ") + e.what());
  }
}

json lambda_json(const LambdaEstimate& e) {
  return {{"value", e.value},
          {"method", e.method == LambdaMethod::PerPeriodDrift ? "per_period_drift" : "long_time_average"},
          {"n_periods_used", e.n_periods_used},
          {"dispersion", e.dispersion},
          {"long_time_average", e.long_time_average},
          {"methods_agree", e.methods_agree()}};
}

}  // namespace

std::string spec_to_json(const HamiltonianSpec& spec) { return spec_json(spec).dump(); }

HamiltonianSpec spec_from_json(std::string_view text) {
  json j = json::parse(text.begin(), text.end(), nullptr, false);
  if (j.is_discarded()) throw ConfigError("Hamiltonian spec is not valid JSON");
  return spec_from(j);
}

std::string grids_to_json(const Grids& grids) { return grids_json(grids).dump(); }

void write_snapshots_csv(std::ostream& out, const std::vector<ValueField>& fields) {
  if (fields.empty()) return;
  out << "step_index";
  for (int i = 0; i < fields.front().size(); ++i) out << ",v" << i;
  out << '\n';
  for (const ValueField& f : fields) {
    out << f.step_index();
    for (double v : f.values()) out << ',' << number(v);
    out << '\n';
  }
}

std::vector<ValueField> read_snapshots_csv(std::istream& in) {
  std::vector<ValueField> fields;
  std::string line;
  if (!std::getline(in, line)) return fields;
  if (line.rfind("step_index", 0) != 0) throw ConfigError("snapshot CSV must start with a step_index header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');
    const std::int64_t step = std::stoll(cell);
    std::vector<double> values;
    while (std::getline(row, cell, ',')) values.push_back(std::stod(cell));
    fields.emplace_back(std::move(values), step);
  }
  return fields;
}

void write_periodic_solution(std::ostream& out, const PeriodicSolution& solution) {
  const json header = {{"spec", spec_json(solution.spec)},
                       {"grids", grids_json(solution.grids)},
                       {"lambda", solution.lambda()},
                       {"residual", solution.residual},
                       {"iterations", solution.iterations}};
  out << header.dump() << '\n';
  write_snapshots_csv(out, solution.snapshots);
}

PeriodicSolution read_periodic_solution(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty periodic solution file");
  const json header = json::parse(line, nullptr, false);
  if (header.is_discarded() || !header.is_object()) throw ConfigError("periodic solution header is not JSON");
  PeriodicSolution solution{spec_from(header.at("spec")), grids_from(header.at("grids")), read_snapshots_csv(in),
                            header.value("residual", 0.0), header.value("iterations", 0)};
  if (solution.snapshots.size() != static_cast<std::size_t>(solution.grids.time.steps_per_period()) + 1) {
    throw ConfigError("periodic solution needs m_t + 1 snapshots");
  }
  return solution;
}

void write_characteristics_csv(std::ostream& out, const std::vector<Characteristic>& curves) {
  out << "curve,step_index,lifted_position,velocity,momentum\n";
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const Characteristic& curve = curves[c];
    for (std::size_t k = 0; k < curve.lifted_positions.size(); ++k) {
      out << c << ',' << curve.start_step + static_cast<std::int64_t>(k) << ',' << number(curve.lifted_positions[k]);
      if (k < curve.velocities.size()) {
        out << ',' << number(curve.velocities[k]) << ',' << number(curve.momenta[k]);
      } else {
        out << ",,";
      }
      out << '\n';
    }
  }
}

std::string aubry_to_json(const AubrySample& sample) {
  const json j = {{"points", sample.points},
                  {"phase", sample.phase},
                  {"cluster_tolerance", sample.cluster_tolerance},
                  {"raw_points", sample.raw_points},
                  {"crossing", {{"violations", sample.crossing.violations}, {"max_overlap", sample.crossing.max_overlap}}}};
  return j.dump(2);
}

void write_residuals_csv(std::ostream& out, const PeriodDetection& detection) {
  out << "period_index";
  for (std::size_t T = 1; T <= detection.residual_history.size(); ++T) out << ",T" << T;
  out << '\n';
  const std::size_t rows = detection.residual_history.empty() ? 0 : detection.residual_history.front().size();
  for (std::size_t n = 0; n < rows; ++n) {
    out << n;
    for (const auto& history : detection.residual_history) {
      out << ',';
      if (n < history.size()) out << number(history[n]);
    }
    out << '\n';
  }
}

std::string report_to_json(const ConvergenceReport& report) {
  const VerifyConfig& c = report.config;
  json j;
  j["schema"] = 1;
  j["spec"] = spec_json(report.spec);
  j["config"] = {{"n_x", c.n_x},
                 {"m_t", c.m_t},
                 {"n_v", c.n_v},
                 {"v_max", c.v_max ? json(*c.v_max) : json(nullptr)},
                 {"n_periods", c.n_periods},
                 {"q_max", c.q_max},
                 {"window", c.window},
                 {"rotation_probes", c.rotation_probes},
                 {"rotation_span", c.rotation_span},
                 {"seed", c.seed},
                 {"tolerances",
                  {{"lambda_tol", c.tolerances.lambda_tol},
                   {"fixedpoint_tol", c.tolerances.fixedpoint_tol},
                   {"period_tol", c.tolerances.period_tol}}}};
  j["lambda"] = lambda_json(report.lambda);
  j["residual_drift"] = report.residual_drift;
  j["rho"] = report.rho;
  j["rho_spread"] = report.rho_spread;
  j["rho_hypothesis"] = report.rho_hypothesis();
  if (report.rational) {
    j["rational"] = {{"p", report.rational->p}, {"q", report.rational->q}, {"error", report.rational->error}};
  } else {
    j["rational"] = nullptr;
  }
  j["detected_period"] = report.detected_period ? json(*report.detected_period) : json(nullptr);
  j["tail_start"] = report.detection.tail_start;
  j["tail_max"] = report.detection.tail_max;
  j["residual_history"] = report.detection.residual_history;
  j["final_gap"] = report.final_gap;
  if (report.uniqueness) {
    j["uniqueness"] = {{"n_solutions", report.uniqueness->n_solutions},
                       {"max_gap", report.uniqueness->max_gap},
                       {"ok", report.uniqueness->ok}};
  } else {
    j["uniqueness"] = nullptr;
  }
  j["lambda_ok"] = report.lambda_ok;
  j["addendum_ok"] = report.addendum_ok;
  j["theorem_ok"] = report.theorem_ok;
  return j.dump(2);
}

void write_foot_tables(std::ostream& out, const EvolutionTrace& trace) {
  const std::int64_t header[3] = {trace.grids.space.size(), trace.grids.time.steps_per_period(), trace.window};
  out.write(reinterpret_cast<const char*>(header), sizeof header);
  for (const FootTable& table : trace.foot_tables) {
    out.write(reinterpret_cast<const char*>(table.argmin_velocity.data()),
              static_cast<std::streamsize>(table.argmin_velocity.size() * sizeof(double)));
  }
}

FootTableDump read_foot_tables(std::istream& in) {
  FootTableDump dump;
  std::int64_t header[3];
  if (!in.read(reinterpret_cast<char*>(header), sizeof header)) throw ConfigError("foot-table file too short");
  dump.n_x = header[0];
  dump.m_t = header[1];
  dump.window = header[2];
  if (dump.n_x < 8) throw ConfigError("foot-table header has an invalid n_x");
  std::vector<double> row(static_cast<std::size_t>(dump.n_x));
  const auto bytes = static_cast<std::streamsize>(row.size() * sizeof(double));
  while (in.read(reinterpret_cast<char*>(row.data()), bytes)) dump.rows.push_back(row);
  if (in.gcount() != 0) throw ConfigError("foot-table file ends mid-row");
  return dump;
}

}  // namespace weakkam
