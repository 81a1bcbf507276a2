#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "covert/optimizer.hpp"
#include "covert/scenario.hpp"

namespace covert {

// Trajectory CSV: slot,x_s,y_s,x_j,y_j,p_s_watts
std::string trajectory_csv(const Trajectory& traj);
Trajectory parse_trajectory_csv(std::string_view text);

// Covert report CSV: slot,warden,max_ratio,min_dep
std::string covert_report_csv(const CovertReport& rep);
std::vector<CovertCheck> parse_covert_report_csv(std::string_view text);

/// Per-iteration trace. Only the wall_seconds fields vary between
/// otherwise identical runs.
std::string trace_json(const SolveResult& res);
/// Removes every wall_seconds field and re-serializes.
std::string strip_timing(std::string_view trace_json_text);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
std::string scenario_hash(const Scenario& scn);

void write_file(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

enum class SweepAxis { n_obs, epsilon, p_jam, radius_scale, n_antennas };
const char* to_string(SweepAxis a);
SweepAxis parse_axis(const std::string& s);

struct SweepSpec {
  SweepAxis axis = SweepAxis::n_obs;
  std::vector<double> values;
  Scenario base;
  std::vector<Benchmark> benches{Benchmark::proposed};
  AntennaMode mode = AntennaMode::single_antenna;
};

/// JSON document with keys axis, values, benches, mode and an optional
/// scenario object (same schema as a scenario file).
SweepSpec parse_sweep_spec(std::string_view document);
void validate_sweep_spec(const SweepSpec& spec);
/// Base scenario with one axis value applied. radius_scale multiplies every
/// warden radius.
Scenario apply_axis(const Scenario& base, SweepAxis axis, double value);

struct SweepRow {
  double axis_value = 0.0;
  Benchmark bench = Benchmark::proposed;
  std::string status;  // run status or error kind
  double min_avg_rate = 0.0;
  double avg_power = 0.0;
  int iterations = 0;
  double wall_seconds = 0.0;
};

/// One sca_solve per (value, bench) on up to `parallelism` threads. Rows
/// come back in (value, bench) order whatever the execution order; failed
/// cells carry their error kind in `status`.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, int parallelism, const ScaOptions& opts = {});

// Sweep CSV: axis_value,bench,min_avg_rate,avg_power,iterations,wall_seconds,status
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_sweep_csv(std::string_view text);

}  // namespace covert
