// weakkam: command-line front end for the solver.
//
// Exit codes: 0 success, 2 configuration error, 3 no convergence,
// 4 invariant-suite failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "run_config.hpp"
#include "weakkam/characteristics.hpp"
#include "weakkam/convergence.hpp"
#include "weakkam/errors.hpp"
#include "weakkam/invariants.hpp"
#include "weakkam/io.hpp"
#include "weakkam/spectrum.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace weakkam;
using namespace weakkam::cli;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitInvariant = 4;

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

// Collects artifacts in memory, then writes them plus manifest.json.
class Output {
 public:
  Output(const RunConfig& config, std::string command) : config_(config), command_(std::move(command)) {}

  void add(const std::string& name, std::string contents) { files_.emplace_back(name, std::move(contents)); }

  void write() const {
    const fs::path dir(config_.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
    json artifacts = json::array();
    for (const auto& [name, contents] : files_) {
      std::ofstream out(dir / name, std::ios::binary);
      if (!out) throw ConfigError("cannot write '" + (dir / name).string() + "'");
      out << contents;
      artifacts.push_back({{"name", name}, {"bytes", contents.size()}, {"sha256", sha256_hex(contents)}});
    }
    const json manifest = {{"tool", "weakkam"},
                           {"version", "0.1.0"},
                           {"command", command_},
                           {"config", config_to_json(config_)},
                           {"artifacts", artifacts}};
    std::ofstream(dir / "manifest.json") << manifest.dump(2) << '\n';
  }

 private:
  const RunConfig& config_;
  std::string command_;
  std::vector<std::pair<std::string, std::string>> files_;
};

json lambda_json(const LambdaEstimate& e) {
  return {{"value", e.value},
          {"long_time_average", e.long_time_average},
          {"dispersion", e.dispersion},
          {"n_periods_used", e.n_periods_used},
          {"methods_agree", e.methods_agree()}};
}

std::string snapshots_csv(const std::vector<ValueField>& fields) {
  std::ostringstream out;
  write_snapshots_csv(out, fields);
  return out.str();
}

std::string characteristics_csv(const std::vector<Characteristic>& curves) {
  std::ostringstream out;
  write_characteristics_csv(out, curves);
  return out.str();
}

json report_base(const RunConfig& config, const Grids& grids) {
  return {{"schema", 1},
          {"spec", json::parse(spec_to_json(config.spec))},
          {"grids", json::parse(grids_to_json(grids))}};
}

// Evolution with lambda folded in, as used by rotation and aubry.
struct Normalized {
  LambdaEstimate lambda;
  HamiltonianSpec working;
  EvolutionTrace trace;
};

Normalized normalized_trace(const RunConfig& config, const Grids& grids, int window) {
  const ValueField u0 = initial_field(config, grids.space);
  const EvolutionTrace first = evolve(u0, config.spec, grids, config.run.n_periods, 1);
  const LambdaEstimate lambda = estimate_lambda(first);
  const HamiltonianSpec working = config.spec.with_lambda_shift(config.spec.lambda_shift + lambda.value);
  return {lambda, working, evolve(u0, working, grids, config.run.n_periods, window)};
}

int cmd_solve(const RunConfig& config, bool dump_feet) {
  const Grids grids = config.run.grids(config.spec);
  const EvolutionTrace trace =
      evolve(initial_field(config, grids.space), config.spec, grids, config.run.n_periods, config.run.window);
  Output out(config, "solve");
  json report = report_base(config, grids);
  report["n_periods"] = trace.n_periods_run;
  report["final_min"] = trace.snapshots.back().min();
  report["final_max"] = trace.snapshots.back().max();
  if (trace.n_periods_run >= 10) report["lambda"] = lambda_json(estimate_lambda(trace));
  out.add("report.json", report.dump(2) + "\n");
  out.add("snapshots.csv", snapshots_csv(trace.snapshots));
  if (dump_feet) {
    std::ostringstream feet;
    write_foot_tables(feet, trace);
    out.add("feet.bin", feet.str());
  }
  out.write();
  std::cout << "evolved " << trace.n_periods_run << " periods, final min " << trace.snapshots.back().min() << '\n';
  return 0;
}

int cmd_critical_value(const RunConfig& config) {
  const Grids grids = config.run.grids(config.spec);
  const EvolutionTrace trace = evolve(initial_field(config, grids.space), config.spec, grids, config.run.n_periods, 1);
  const LambdaEstimate lambda = estimate_lambda(trace);
  Output out(config, "critical-value");
  json report = report_base(config, grids);
  report["lambda"] = lambda_json(lambda);
  out.add("report.json", report.dump(2) + "\n");
  out.write();
  std::cout.precision(12);
  std::cout << "lambda = " << lambda.value << " (long-time average " << lambda.long_time_average << ", dispersion "
            << lambda.dispersion << ")\n";
  return 0;
}

int cmd_periodic(const RunConfig& config) {
  const Grids grids = config.run.grids(config.spec);
  const Normalized n = normalized_trace(config, grids, config.run.window);
  const double drift = estimate_lambda(n.trace).value;
  const PeriodicSolution power = periodic_solution(n.working, grids, initial_field(config, grids.space),
                                                   config.run.tolerances.fixedpoint_tol, config.run.n_periods);
  const PeriodicSolution liminf = liminf_solution(n.trace, drift);
  const double agreement = sup_dist(power.snapshots.front(), liminf.snapshots.front());

  Output out(config, "periodic");
  json report = report_base(config, grids);
  report["lambda"] = lambda_json(n.lambda);
  report["residual_drift"] = drift;
  report["power_iteration"] = {{"iterations", power.iterations}, {"residual", power.residual}};
  report["liminf"] = {{"residual", liminf.residual}};
  report["liminf_agreement"] = agreement;
  out.add("report.json", report.dump(2) + "\n");
  std::ostringstream solution;
  write_periodic_solution(solution, power);
  out.add("periodic_solution.txt", solution.str());
  out.add("snapshots.csv", snapshots_csv(power.snapshots));
  out.write();
  std::cout << "periodic solution after " << power.iterations << " periods, residual " << power.residual
            << ", liminf agreement " << agreement << '\n';
  return 0;
}

int cmd_rotation(const RunConfig& config) {
  const Grids grids = config.run.grids(config.spec);
  const int span = config.run.rotation_span;
  const Normalized n = normalized_trace(config, grids, span);
  const RotationEstimate rotation = rotation_number(n.trace, config.run.rotation_probes, span);
  std::vector<Characteristic> curves;
  for (int k = 0; k < config.run.rotation_probes; ++k) {
    curves.push_back(backtrack(n.trace, static_cast<double>(k) / config.run.rotation_probes, span));
  }
  const auto rational = rational_reduce(rotation.rho, config.run.q_max, rotation.spread);

  Output out(config, "rotation");
  json report = report_base(config, grids);
  report["lambda"] = lambda_json(n.lambda);
  report["rho"] = rotation.rho;
  report["rho_spread"] = rotation.spread;
  report["per_probe"] = rotation.per_probe;
  report["rational"] = rational ? json{{"p", rational->p}, {"q", rational->q}, {"error", rational->error}} : json(nullptr);
  out.add("report.json", report.dump(2) + "\n");
  out.add("characteristics.csv", characteristics_csv(curves));
  out.write();
  std::cout << "rho = " << rotation.rho << " (spread " << rotation.spread << ")\n";
  return 0;
}

int cmd_aubry(const RunConfig& config) {
  const Grids grids = config.run.grids(config.spec);
  const Normalized n = normalized_trace(config, grids, config.aubry_span);
  const double tolerance = config.cluster_tolerance.value_or(3.0 * grids.space.spacing());
  const AubrySample sample = aubry_sample(n.trace, config.aubry_probes, config.aubry_span, tolerance);

  Output out(config, "aubry");
  json report = report_base(config, grids);
  report["lambda"] = lambda_json(n.lambda);
  report["aubry"] = json::parse(aubry_to_json(sample));
  out.add("report.json", report.dump(2) + "\n");
  out.add("aubry.json", aubry_to_json(sample) + "\n");
  out.add("characteristics.csv", characteristics_csv(sample.curves));
  out.write();
  std::cout << sample.points.size() << " Aubry point(s), " << sample.crossing.violations << " crossing violation(s)\n";
  return 0;
}

int cmd_verify(const RunConfig& config) {
  const Grids grids = config.run.grids(config.spec);
  const ConvergenceReport report = verify_theorem(config.spec, initial_field(config, grids.space), config.run);
  Output out(config, "verify");
  out.add("report.json", report_to_json(report) + "\n");
  std::ostringstream residuals;
  write_residuals_csv(residuals, report.detection);
  out.add("residuals.csv", residuals.str());
  out.write();
  std::cout << "lambda " << report.lambda.value << ", rho " << report.rho << " (" << report.rho_hypothesis() << "), ";
  if (report.detected_period) {
    std::cout << "period " << *report.detected_period;
  } else {
    std::cout << "no period <= " << config.run.q_max;
  }
  std::cout << ", final gap " << report.final_gap << ", theorem " << (report.theorem_ok ? "ok" : "not ok")
            << ", addendum " << (report.addendum_ok ? "ok" : "not ok") << '\n';
  if (!report.detected_period) {
    std::cerr << "no period passed the tolerance; residual histories are in residuals.csv\n";
    return kExitNoConvergence;
  }
  return 0;
}

int cmd_selftest(const RunConfig& config) {
  InvariantSuiteConfig suite;
  suite.seed = config.run.seed;
  const std::vector<InvariantResult> results = run_invariant_suite(suite);
  bool all = true;
  json report = {{"schema", 1}, {"spec", json::parse(spec_to_json(suite.spec))}, {"invariants", json::array()}};
  for (const InvariantResult& r : results) {
    all = all && r.passed();
    std::cout << (r.passed() ? "PASS " : "FAIL ") << r.name << "  checks=" << r.checks
              << " violations=" << r.violations << " worst=" << r.worst << " bound=" << r.bound << '\n';
    report["invariants"].push_back({{"name", r.name},
                                    {"checks", r.checks},
                                    {"violations", r.violations},
                                    {"worst", r.worst},
                                    {"bound", r.bound},
                                    {"passed", r.passed()}});
  }
  Output out(config, "selftest");
  out.add("report.json", report.dump(2) + "\n");
  out.write();
  return all ? 0 : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weak-KAM solver for time-periodic convex Hamilton-Jacobi equations on the circle"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  int n_x = 0, m_t = 0, n_v = 0, n_periods = 0, q_max = 0, window = 0;
  double v_max = 0.0;
  std::uint64_t seed = 0;
  bool dump_feet = false;

  std::vector<CLI::Option*> overrides;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "JSON config file, or a manifest from an earlier run");
    overrides.push_back(sub->add_option("-o,--output-dir", output_dir, "Directory for report and data files"));
    overrides.push_back(sub->add_option("--n-x", n_x, "Spatial nodes"));
    overrides.push_back(sub->add_option("--m-t", m_t, "Time steps per period"));
    overrides.push_back(sub->add_option("--n-v", n_v, "Velocity nodes (odd)"));
    overrides.push_back(sub->add_option("--v-max", v_max, "Velocity truncation"));
    overrides.push_back(sub->add_option("--n-periods", n_periods, "Periods to evolve"));
    overrides.push_back(sub->add_option("--q-max", q_max, "Largest candidate period"));
    overrides.push_back(sub->add_option("--window", window, "Foot-table window in periods"));
    overrides.push_back(sub->add_option("--seed", seed, "Seed for random initial data"));
  };

  CLI::App* solve = app.add_subcommand("solve", "Evolve and write period-boundary snapshots");
  solve->add_flag("--dump-feet", dump_feet, "Also write the retained foot tables to feet.bin");
  CLI::App* critical = app.add_subcommand("critical-value", "Estimate the critical value lambda");
  CLI::App* periodic = app.add_subcommand("periodic", "Periodic solution by power iteration, cross-checked by liminf");
  CLI::App* rotation = app.add_subcommand("rotation", "Rotation number from backtracked curves");
  CLI::App* aubry = app.add_subcommand("aubry", "Sample the Aubry set at phase 0");
  CLI::App* verify = app.add_subcommand("verify", "Full convergence harness: lambda, rho, period, final gap");
  CLI::App* selftest = app.add_subcommand("selftest", "Operator invariant suite");
  for (CLI::App* sub : {solve, critical, periodic, rotation, aubry, verify, selftest}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
    auto given = [&](const std::string& name) {
      for (CLI::Option* o : overrides) {
        if (o->check_name(name) && o->count() > 0) return true;
      }
      return false;
    };
    if (given("--output-dir")) config.output_dir = output_dir;
    if (given("--n-x")) config.run.n_x = n_x;
    if (given("--m-t")) config.run.m_t = m_t;
    if (given("--n-v")) config.run.n_v = n_v;
    if (given("--v-max")) config.run.v_max = v_max;
    if (given("--n-periods")) config.run.n_periods = n_periods;
    if (given("--q-max")) config.run.q_max = q_max;
    if (given("--window")) config.run.window = window;
    if (given("--seed")) config.run.seed = seed;
    check(config);

    if (*solve) return cmd_solve(config, dump_feet);
    if (*critical) return cmd_critical_value(config);
    if (*periodic) return cmd_periodic(config);
    if (*rotation) return cmd_rotation(config);
    if (*aubry) return cmd_aubry(config);
    if (*verify) return cmd_verify(config);
    return cmd_selftest(config);
  } catch (const NoConvergence& e) {
    std::cerr << "error: " << e.what() << " (last residual " << e.last_residual() << ")\n";
    return kExitNoConvergence;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
