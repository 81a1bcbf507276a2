#include "covert/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "covert/errors.hpp"

namespace covert {

using nlohmann::json;

double db_to_linear(double value_db) { return std::pow(10.0, value_db / 10.0); }

double dbm_to_watts(double value_dbm) { return db_to_linear(value_dbm - 30.0); }

Scenario default_scenario(ScenarioVariant variant) {
  Scenario scn;
  scn.users = {Vec2(100, 200), Vec2(300, 300), Vec2(500, 200)};
  if (variant == ScenarioVariant::scenario1) {
    scn.wardens = {{Vec2(100, 0), 15.0}, {Vec2(300, 100), 30.0}, {Vec2(500, 0), 15.0}};
  } else {
    scn.wardens = {{Vec2(100, 100), 15.0}, {Vec2(300, 0), 30.0}, {Vec2(500, 100), 15.0}};
  }
  scn.noise_power = dbm_to_watts(-120.0);
  scn.ref_gain = db_to_linear(-30.0);
  return scn;
}

ScenarioVariant parse_variant(std::string_view name) {
  if (name == "scenario1") return ScenarioVariant::scenario1;
  if (name == "scenario2") return ScenarioVariant::scenario2;
  throw ValidationError(fmt::format("unknown scenario variant '{}'", name));
}

namespace {

const std::set<std::string> kKnownKeys = {
    "base",        "n_slots",     "slot_seconds",  "flight_seconds",
    "s_alt",       "j_alt",       "s_start",       "s_end",
    "j_start",     "j_end",       "users",         "wardens",
    "p_max",       "p_max_dbm",   "p_jam",         "p_jam_dbm",
    "noise_power", "noise_power_dbm", "ref_gain",  "ref_gain_db",
    "v_s_max",     "v_j_max",     "epsilon",       "n_obs",
    "n_antennas",  "sca_tol"};

double get_number(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_number()) throw ParseError(fmt::format("'{}' must be a number", key));
  return v.get<double>();
}

int get_int(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_number_integer()) throw ParseError(fmt::format("'{}' must be an integer", key));
  return v.get<int>();
}

Vec2 to_vec2(const json& v, const std::string& key) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ParseError(fmt::format("'{}' must be a 2-element numeric array", key));
  return Vec2(v[0].get<double>(), v[1].get<double>());
}

void read_number(const json& doc, const char* key, double& out) {
  if (doc.contains(key)) out = get_number(doc, key);
}

// Accepts either the linear key or its logarithmic sibling, not both.
void read_power(const json& doc, const char* key, const char* log_key, bool dbm, double& out) {
  if (doc.contains(key) && doc.contains(log_key))
    throw ValidationError(fmt::format("both '{}' and '{}' given", key, log_key));
  if (doc.contains(key)) out = get_number(doc, key);
  if (doc.contains(log_key)) {
    const double v = get_number(doc, log_key);
    out = dbm ? dbm_to_watts(v) : db_to_linear(v);
  }
}

json vec_json(const Vec2& v) { return json::array({v.x(), v.y()}); }

}  // namespace

void validate_scenario(const Scenario& scn) {
  auto fail = [](const std::string& field, const std::string& why) {
    throw ValidationError(fmt::format("{}: {}", field, why));
  };
  if (scn.n_slots < 2) fail("n_slots", "must be >= 2");
  if (!(scn.slot_seconds > 0.0) || !std::isfinite(scn.slot_seconds))
    fail("slot_seconds", "must be positive");
  if (!(scn.s_alt >= 0.0)) fail("s_alt", "must be >= 0");
  if (!(scn.j_alt >= 0.0)) fail("j_alt", "must be >= 0");
  if (!(scn.p_max >= 0.0)) fail("p_max", "must be >= 0");
  if (!(scn.p_jam >= 0.0)) fail("p_jam", "must be >= 0");
  if (!(scn.noise_power > 0.0)) fail("noise_power", "must be > 0");
  if (!(scn.ref_gain > 0.0)) fail("ref_gain", "must be > 0");
  if (!(scn.v_s_max >= 0.0)) fail("v_s_max", "must be >= 0");
  if (!(scn.v_j_max >= 0.0)) fail("v_j_max", "must be >= 0");
  if (!(scn.epsilon > 0.0 && scn.epsilon < 1.0)) fail("epsilon", "must lie in (0, 1)");
  if (scn.n_obs < 1) fail("n_obs", "must be >= 1");
  if (scn.n_antennas < 1) fail("n_antennas", "must be >= 1");
  if (!(scn.sca_tol > 0.0)) fail("sca_tol", "must be > 0");
  if (scn.users.empty()) fail("users", "must be nonempty");
  if (scn.wardens.empty()) fail("wardens", "must be nonempty");
  for (std::size_t m = 0; m < scn.wardens.size(); ++m)
    if (!(scn.wardens[m].radius >= 0.0)) fail(fmt::format("wardens[{}].radius", m), "must be >= 0");
  for (const Vec2* v : {&scn.s_start, &scn.s_end, &scn.j_start, &scn.j_end})
    if (!v->allFinite()) fail("endpoints", "must be finite");

  const double span = scn.slot_seconds * (scn.n_slots - 1);
  const double ds = (scn.s_end - scn.s_start).norm();
  const double dj = (scn.j_end - scn.j_start).norm();
  if (ds > scn.v_s_max * span + 1e-9)
    throw ReachabilityError(fmt::format("S needs {:.3f} m but can fly {:.3f} m", ds, scn.v_s_max * span));
  if (dj > scn.v_j_max * span + 1e-9)
    throw ReachabilityError(fmt::format("J needs {:.3f} m but can fly {:.3f} m", dj, scn.v_j_max * span));
}

Scenario load_scenario(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!doc.is_object()) throw ParseError("scenario document must be a JSON object");
  for (const auto& item : doc.items())
    if (!kKnownKeys.count(item.key())) throw ValidationError(fmt::format("unknown key '{}'", item.key()));

  Scenario scn = default_scenario(ScenarioVariant::scenario1);
  if (doc.contains("base")) {
    if (!doc["base"].is_string()) throw ParseError("'base' must be a string");
    scn = default_scenario(parse_variant(doc["base"].get<std::string>()));
  }

  try {
    const double flight = scn.flight_seconds();
    if (doc.contains("n_slots")) scn.n_slots = get_int(doc, "n_slots");
    if (doc.contains("slot_seconds") && doc.contains("flight_seconds"))
      throw ValidationError("both 'slot_seconds' and 'flight_seconds' given");
    if (doc.contains("slot_seconds")) {
      scn.slot_seconds = get_number(doc, "slot_seconds");
    } else if (doc.contains("flight_seconds")) {
      scn.slot_seconds = get_number(doc, "flight_seconds") / scn.n_slots;
    } else if (doc.contains("n_slots")) {
      // Changing the slot count keeps the mission duration fixed.
      scn.slot_seconds = flight / scn.n_slots;
    }
    read_number(doc, "s_alt", scn.s_alt);
    read_number(doc, "j_alt", scn.j_alt);
    for (auto [key, dst] : {std::pair{"s_start", &scn.s_start}, {"s_end", &scn.s_end},
                            {"j_start", &scn.j_start}, {"j_end", &scn.j_end}})
      if (doc.contains(key)) *dst = to_vec2(doc[key], key);
    if (doc.contains("users")) {
      if (!doc["users"].is_array()) throw ParseError("'users' must be an array");
      scn.users.clear();
      for (std::size_t k = 0; k < doc["users"].size(); ++k)
        scn.users.push_back(to_vec2(doc["users"][k], fmt::format("users[{}]", k)));
    }
    if (doc.contains("wardens")) {
      if (!doc["wardens"].is_array()) throw ParseError("'wardens' must be an array");
      scn.wardens.clear();
      for (std::size_t m = 0; m < doc["wardens"].size(); ++m) {
        const json& w = doc["wardens"][m];
        const std::string name = fmt::format("wardens[{}]", m);
        if (!w.is_object() || !w.contains("est_pos") || !w.contains("radius"))
          throw ParseError(name + " must be an object with 'est_pos' and 'radius'");
        if (!w["radius"].is_number()) throw ParseError(name + ".radius must be a number");
        scn.wardens.push_back({to_vec2(w["est_pos"], name + ".est_pos"), w["radius"].get<double>()});
      }
    }
    read_power(doc, "p_max", "p_max_dbm", true, scn.p_max);
    read_power(doc, "p_jam", "p_jam_dbm", true, scn.p_jam);
    read_power(doc, "noise_power", "noise_power_dbm", true, scn.noise_power);
    read_power(doc, "ref_gain", "ref_gain_db", false, scn.ref_gain);
    read_number(doc, "v_s_max", scn.v_s_max);
    read_number(doc, "v_j_max", scn.v_j_max);
    read_number(doc, "epsilon", scn.epsilon);
    if (doc.contains("n_obs")) scn.n_obs = get_int(doc, "n_obs");
    if (doc.contains("n_antennas")) scn.n_antennas = get_int(doc, "n_antennas");
    read_number(doc, "sca_tol", scn.sca_tol);
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }

  validate_scenario(scn);
  return scn;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot read '{}'", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return load_scenario(ss.str());
}

std::string serialize_scenario(const Scenario& scn) {
  json doc;
  doc["n_slots"] = scn.n_slots;
  doc["slot_seconds"] = scn.slot_seconds;
  doc["s_alt"] = scn.s_alt;
  doc["j_alt"] = scn.j_alt;
  doc["s_start"] = vec_json(scn.s_start);
  doc["s_end"] = vec_json(scn.s_end);
  doc["j_start"] = vec_json(scn.j_start);
  doc["j_end"] = vec_json(scn.j_end);
  doc["users"] = json::array();
  for (const auto& u : scn.users) doc["users"].push_back(vec_json(u));
  doc["wardens"] = json::array();
  for (const auto& w : scn.wardens)
    doc["wardens"].push_back({{"est_pos", vec_json(w.est_pos)}, {"radius", w.radius}});
  doc["p_max"] = scn.p_max;
  doc["p_jam"] = scn.p_jam;
  doc["noise_power"] = scn.noise_power;
  doc["ref_gain"] = scn.ref_gain;
  doc["v_s_max"] = scn.v_s_max;
  doc["v_j_max"] = scn.v_j_max;
  doc["epsilon"] = scn.epsilon;
  doc["n_obs"] = scn.n_obs;
  doc["n_antennas"] = scn.n_antennas;
  doc["sca_tol"] = scn.sca_tol;
  return doc.dump(2);
}

}  // namespace covert
