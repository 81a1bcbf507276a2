#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace covert {

using Vec2 = Eigen::Vector2d;

struct Warden {
  Vec2 est_pos = Vec2::Zero();
  double radius = 0.0;

  bool operator==(const Warden&) const = default;
};

enum class ScenarioVariant { scenario1, scenario2 };

/// Physical parameters of one deployment. All quantities are SI and linear
/// (meters, seconds, watts, power ratios) once loaded.
struct Scenario {
  int n_slots = 50;
  double slot_seconds = 2.0;
  double s_alt = 100.0;
  double j_alt = 70.0;
  Vec2 s_start{-100.0, 100.0};
  Vec2 s_end{700.0, 100.0};
  Vec2 j_start{-100.0, 0.0};
  Vec2 j_end{700.0, 0.0};
  std::vector<Vec2> users;
  std::vector<Warden> wardens;
  double p_max = 0.2;
  double p_jam = 0.1;
  double noise_power = 1e-15;
  double ref_gain = 1e-3;
  double v_s_max = 20.0;
  double v_j_max = 10.0;
  double epsilon = 0.05;
  int n_obs = 30;
  int n_antennas = 6;
  double sca_tol = 1e-3;

  /// Reference SNR rho0 / sigma^2.
  double gamma0() const { return ref_gain / noise_power; }
  double max_step_s() const { return v_s_max * slot_seconds; }
  double max_step_j() const { return v_j_max * slot_seconds; }
  double flight_seconds() const { return slot_seconds * n_slots; }

  bool operator==(const Scenario&) const = default;
};

double db_to_linear(double value_db);
/// dBm to watts.
double dbm_to_watts(double value_dbm);

Scenario default_scenario(ScenarioVariant variant);
ScenarioVariant parse_variant(std::string_view name);

/// Parses a JSON scenario document. Omitted keys take the values of the
/// `base` scenario (scenario1 unless the document names another).
Scenario load_scenario(std::string_view document);
Scenario load_scenario_file(const std::filesystem::path& path);
std::string serialize_scenario(const Scenario& scn);

/// Throws ValidationError or ReachabilityError.
void validate_scenario(const Scenario& scn);

}  // namespace covert
