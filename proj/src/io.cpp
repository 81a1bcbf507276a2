#include "covert/io.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "covert/errors.hpp"

namespace covert {

namespace {

using nlohmann::json;

constexpr const char* kTrajectoryHeader = "slot,x_s,y_s,x_j,y_j,p_s_watts";
constexpr const char* kReportHeader = "slot,warden,max_ratio,min_dep";
constexpr const char* kSweepHeader = "axis_value,bench,min_avg_rate,avg_power,iterations,wall_seconds,status";

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Data rows of a CSV document after checking its header.
std::vector<std::vector<std::string>> csv_rows(std::string_view text, const char* header) {
  std::vector<std::vector<std::string>> rows;
  const std::size_t ncols = split(header, ',').size();
  bool seen_header = false;
  int line_no = 0;
  for (std::string line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!seen_header) {
      if (line != header) throw ParseError(fmt::format("expected CSV header '{}', got '{}'", header, line));
      seen_header = true;
      continue;
    }
    auto cols = split(line, ',');
    if (cols.size() != ncols)
      throw ParseError(fmt::format("line {}: expected {} columns, got {}", line_no, ncols, cols.size()));
    rows.push_back(std::move(cols));
  }
  if (!seen_header) throw ParseError("empty CSV document");
  return rows;
}

double to_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw ParseError(fmt::format("'{}' is not a number", s));
  return v;
}

int to_int(const std::string& s) {
  const double v = to_double(s);
  if (v != static_cast<int>(v)) throw ParseError(fmt::format("'{}' is not an integer", s));
  return static_cast<int>(v);
}

std::string num(double v) { return fmt::format("{:.17g}", v); }

void strip(json& j) {
  if (j.is_object()) {
    j.erase("wall_seconds");
    for (auto& [k, v] : j.items()) strip(v);
  } else if (j.is_array()) {
    for (auto& v : j) strip(v);
  }
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = std::string(kTrajectoryHeader) + "\n";
  for (std::size_t n = 0; n < traj.slots.size(); ++n) {
    const auto& s = traj.slots[n];
    out += fmt::format("{},{},{},{},{},{}\n", n, num(s.q_s.x()), num(s.q_s.y()), num(s.q_j.x()),
                       num(s.q_j.y()), num(s.p_s));
  }
  return out;
}

Trajectory parse_trajectory_csv(std::string_view text) {
  Trajectory traj;
  for (const auto& r : csv_rows(text, kTrajectoryHeader)) {
    if (to_int(r[0]) != static_cast<int>(traj.slots.size()))
      throw ParseError(fmt::format("slot {} out of order", r[0]));
    SlotState s;
    s.q_s = Vec2(to_double(r[1]), to_double(r[2]));
    s.q_j = Vec2(to_double(r[3]), to_double(r[4]));
    s.p_s = to_double(r[5]);
    traj.slots.push_back(s);
  }
  return traj;
}

std::string covert_report_csv(const CovertReport& rep) {
  std::string out = std::string(kReportHeader) + "\n";
  for (const auto& c : rep.entries)
    out += fmt::format("{},{},{},{}\n", c.slot, c.warden, num(c.max_ratio), num(c.min_dep));
  return out;
}

std::vector<CovertCheck> parse_covert_report_csv(std::string_view text) {
  std::vector<CovertCheck> out;
  for (const auto& r : csv_rows(text, kReportHeader))
    out.push_back({to_int(r[0]), to_int(r[1]), to_double(r[2]), to_double(r[3])});
  return out;
}

std::string trace_json(const SolveResult& res) {
  json doc;
  doc["status"] = to_string(res.status);
  if (!res.failure.empty()) doc["failure"] = res.failure;
  doc["rejected_steps"] = res.rejected_steps;
  doc["initial_objective"] = res.trace.empty() ? 0.0 : res.trace.front();
  doc["final_objective"] = res.final.objective;
  doc["iterations"] = json::array();
  for (const auto& r : res.iterations) {
    doc["iterations"].push_back({{"iteration", r.iteration},
                                 {"objective", r.objective},
                                 {"surrogate", r.surrogate},
                                 {"solver_status", r.solver_status},
                                 {"solver_iterations", r.solver_iterations},
                                 {"incumbent_residual", r.incumbent_residual},
                                 {"accepted", r.accepted},
                                 {"wall_seconds", r.wall_seconds}});
  }
  return doc.dump(2) + "\n";
}

std::string strip_timing(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  strip(doc);
  return doc.dump(2) + "\n";
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string scenario_hash(const Scenario& scn) {
  return fmt::format("{:016x}", fnv1a(serialize_scenario(scn)));
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError(fmt::format("write to '{}' failed", path.string()));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read '{}'", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::n_obs: return "n_obs";
    case SweepAxis::epsilon: return "epsilon";
    case SweepAxis::p_jam: return "p_jam";
    case SweepAxis::radius_scale: return "radius_scale";
    case SweepAxis::n_antennas: return "n_antennas";
  }
  return "unknown";
}

SweepAxis parse_axis(const std::string& s) {
  for (auto a : {SweepAxis::n_obs, SweepAxis::epsilon, SweepAxis::p_jam, SweepAxis::radius_scale,
                 SweepAxis::n_antennas})
    if (s == to_string(a)) return a;
  throw ValidationError(fmt::format("unknown sweep axis '{}'", s));
}

SweepSpec parse_sweep_spec(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!doc.is_object()) throw ParseError("sweep document must be a JSON object");
  for (const auto& item : doc.items()) {
    const auto& k = item.key();
    if (k != "axis" && k != "values" && k != "benches" && k != "mode" && k != "scenario")
      throw ValidationError(fmt::format("unknown sweep key '{}'", k));
  }
  SweepSpec spec;
  try {
    spec.axis = parse_axis(doc.at("axis").get<std::string>());
    spec.values = doc.at("values").get<std::vector<double>>();
    if (doc.contains("benches")) {
      spec.benches.clear();
      for (const auto& b : doc["benches"]) spec.benches.push_back(parse_benchmark(b.get<std::string>()));
    }
    if (doc.contains("mode")) spec.mode = parse_mode(doc["mode"].get<std::string>());
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
  spec.base = doc.contains("scenario") ? load_scenario(doc["scenario"].dump())
                                       : default_scenario(ScenarioVariant::scenario1);
  validate_sweep_spec(spec);
  return spec;
}

void validate_sweep_spec(const SweepSpec& spec) {
  if (spec.values.empty()) throw ValidationError("sweep values are empty");
  for (std::size_t i = 1; i < spec.values.size(); ++i)
    if (!(spec.values[i] > spec.values[i - 1])) throw ValidationError("sweep values must be strictly increasing");
  if (spec.benches.empty()) throw ValidationError("sweep bench set is empty");
  for (double v : spec.values) validate_scenario(apply_axis(spec.base, spec.axis, v));
}

Scenario apply_axis(const Scenario& base, SweepAxis axis, double value) {
  Scenario s = base;
  auto as_int = [&] {
    if (value != static_cast<int>(value)) throw ValidationError(fmt::format("{} must be an integer", to_string(axis)));
    return static_cast<int>(value);
  };
  switch (axis) {
    case SweepAxis::n_obs: s.n_obs = as_int(); break;
    case SweepAxis::epsilon: s.epsilon = value; break;
    case SweepAxis::p_jam: s.p_jam = value; break;
    case SweepAxis::radius_scale:
      if (!(value >= 0.0)) throw ValidationError("radius_scale must be nonnegative");
      for (auto& w : s.wardens) w.radius *= value;
      break;
    case SweepAxis::n_antennas: s.n_antennas = as_int(); break;
  }
  return s;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int parallelism, const ScaOptions& opts) {
  validate_sweep_spec(spec);
  const std::size_t nb = spec.benches.size();
  const std::size_t cells = spec.values.size() * nb;
  std::vector<SweepRow> rows(cells);

  auto run_cell = [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.axis_value = spec.values[i / nb];
    row.bench = spec.benches[i % nb];
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const Scenario scn = apply_axis(spec.base, spec.axis, row.axis_value);
      const SolveResult res = sca_solve(scn, spec.mode, row.bench, opts);
      row.status = to_string(res.status);
      row.min_avg_rate = res.final.objective;
      double p = 0.0;
      for (const auto& s : res.final.traj.slots) p += s.p_s;
      row.avg_power = res.final.traj.slots.empty() ? 0.0 : p / res.final.traj.slots.size();
      row.iterations = static_cast<int>(res.iterations.size());
    } catch (const Error& e) {
      row.status = e.kind();
    } catch (const std::exception& e) {
      row.status = "Error";
    }
    row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(parallelism, 1)), 1, cells);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells; i = next++) run_cell(i);
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = std::string(kSweepHeader) + "\n";
  for (const auto& r : rows)
    out += fmt::format("{},{},{},{},{},{},{}\n", num(r.axis_value), to_string(r.bench), num(r.min_avg_rate),
                       num(r.avg_power), r.iterations, num(r.wall_seconds), r.status);
  return out;
}

std::vector<SweepRow> parse_sweep_csv(std::string_view text) {
  std::vector<SweepRow> out;
  for (const auto& r : csv_rows(text, kSweepHeader)) {
    SweepRow row;
    row.axis_value = to_double(r[0]);
    row.bench = parse_benchmark(r[1]);
    row.min_avg_rate = to_double(r[2]);
    row.avg_power = to_double(r[3]);
    row.iterations = to_int(r[4]);
    row.wall_seconds = to_double(r[5]);
    row.status = r[6];
    out.push_back(row);
  }
  return out;
}

}  // namespace covert
