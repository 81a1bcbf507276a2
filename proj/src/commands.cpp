#include "covert/commands.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>
#include <thread>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <json.hpp>

#include "covert/errors.hpp"
#include "covert/io.hpp"
#include "covert/optimizer.hpp"
#include "covert/verify.hpp"

namespace covert {

namespace {

using nlohmann::json;

std::string utc_now() {
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(
                                                   std::chrono::system_clock::now())));
}

void prepare_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw IoError(fmt::format("cannot create output directory '{}': {}", dir.string(), ec.message()));
}

Scenario resolve_scenario(const std::string& config) {
  if (config.empty() || config == "scenario1") return default_scenario(ScenarioVariant::scenario1);
  if (config == "scenario2") return default_scenario(ScenarioVariant::scenario2);
  return load_scenario_file(config);
}

json tolerances(const Scenario& scn, const ScaOptions& opts) {
  return {{"sca_tol", opts.tol > 0.0 ? opts.tol : scn.sca_tol},
          {"max_iter", opts.max_iter},
          {"feas_tol", opts.solver.feas_tol},
          {"gap_tol", opts.solver.gap_tol}};
}

template <class F>
int guarded(std::ostream& err, F body) {
  try {
    return body();
  } catch (const std::exception& e) {
    err << error_json(e) << '\n';
    return exit_code_for(e);
  }
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const ValidationError*>(&e) ||
      dynamic_cast<const ReachabilityError*>(&e) || dynamic_cast<const ModeError*>(&e) ||
      dynamic_cast<const DomainError*>(&e))
    return kExitValidation;
  if (dynamic_cast<const BackendError*>(&e) || dynamic_cast<const LinearizationError*>(&e) ||
      dynamic_cast<const ShapeError*>(&e) || dynamic_cast<const BracketError*>(&e))
    return kExitSolver;
  return kExitOther;
}

std::string error_json(const std::exception& e) {
  const auto* ce = dynamic_cast<const Error*>(&e);
  return json{{"error", ce ? ce->kind() : std::string("Error")}, {"message", e.what()}}.dump();
}

int cmd_solve(const std::string& config, AntennaMode mode, Benchmark bench, const std::filesystem::path& out_dir,
              std::uint64_t seed, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario scn = resolve_scenario(config);
    validate_scenario(scn);
    const ScaOptions opts = options_from_env();
    prepare_dir(out_dir);

    const SolveResult res = sca_solve(scn, mode, bench, opts);
    write_file(out_dir / "trajectory.csv", trajectory_csv(res.final.traj));
    write_file(out_dir / "trace.json", trace_json(res));
    write_file(out_dir / "covert_report.csv", covert_report_csv(res.covert_report));

    json manifest{{"scenario_hash", scenario_hash(scn)},
                  {"scenario", json::parse(serialize_scenario(scn))},
                  {"mode", to_string(mode)},
                  {"bench", to_string(bench)},
                  {"seed", seed},
                  {"tolerances", tolerances(scn, opts)},
                  {"status", to_string(res.status)},
                  {"final_objective", res.final.objective},
                  {"max_covert_ratio", res.covert_report.max_ratio},
                  {"created_utc", utc_now()}};
    write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");

    if (res.status == RunStatus::subproblem_failure) {
      err << json{{"error", "SubproblemFailure"}, {"message", res.failure}}.dump() << '\n';
      return static_cast<int>(kExitSolver);
    }
    if (res.covert_report.max_ratio > 1.0 + 1e-6) {
      err << json{{"error", "CovertnessViolation"},
                  {"message", fmt::format("worst sampled SINR ratio {}", res.covert_report.max_ratio)}}
                 .dump()
          << '\n';
      return static_cast<int>(kExitVerification);
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_sweep(const std::filesystem::path& spec_path, const std::filesystem::path& out_dir, int parallelism,
              std::ostream& err) {
  return guarded(err, [&] {
    const SweepSpec spec = parse_sweep_spec(read_file(spec_path));
    const ScaOptions opts = options_from_env();
    prepare_dir(out_dir);
    const int cells = static_cast<int>(spec.values.size() * spec.benches.size());
    const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    const int workers = parallelism > 0 ? parallelism : std::min(cells, hw);

    const auto rows = run_sweep(spec, workers, opts);
    write_file(out_dir / "sweep.csv", sweep_csv(rows));
    json manifest{{"scenario_hash", scenario_hash(spec.base)},
                  {"scenario", json::parse(serialize_scenario(spec.base))},
                  {"axis", to_string(spec.axis)},
                  {"mode", to_string(spec.mode)},
                  {"parallelism", workers},
                  {"tolerances", tolerances(spec.base, opts)},
                  {"created_utc", utc_now()}};
    write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");

    json failed = json::array();
    for (const auto& r : rows)
      if (r.status != "converged" && r.status != "max_iter")
        failed.push_back({{"axis_value", r.axis_value}, {"bench", to_string(r.bench)}, {"status", r.status}});
    if (!failed.empty()) {
      err << json{{"error", "SweepCellFailure"}, {"cells", failed}}.dump() << '\n';
      return static_cast<int>(kExitSolver);
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_verify(const std::filesystem::path& out_dir, long trials, std::uint64_t seed, int parallelism,
               std::ostream& err) {
  return guarded(err, [&] {
    if (trials < 1) throw ValidationError("trials must be >= 1");
    prepare_dir(out_dir);
    VerifyOptions opts;
    opts.trials = trials;
    opts.seed = seed;
    opts.threads = parallelism > 0 ? parallelism
                                   : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    const VerifyReport rep = run_verification(opts);
    write_file(out_dir / "verification.json", verification_json(rep));
    if (!rep.ok()) {
      json failing = json::array();
      for (const auto& c : rep.cases)
        if (c.verdict == Verdict::fail) failing.push_back(c.group + ": " + c.name);
      err << json{{"error", "VerificationFailure"}, {"cases", failing}}.dump() << '\n';
      return static_cast<int>(kExitVerification);
    }
    return static_cast<int>(kExitOk);
  });
}

std::string cmd_defaults() {
  json doc{{"scenario1", json::parse(serialize_scenario(default_scenario(ScenarioVariant::scenario1)))},
           {"scenario2", json::parse(serialize_scenario(default_scenario(ScenarioVariant::scenario2)))}};
  return doc.dump(2) + "\n";
}

}  // namespace covert
