/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 risd2d contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "risd2d/config.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <functional>
#include <sstream>

namespace risd2d {

namespace {

using nlohmann::json;

struct Field {
  std::string key;
  std::function<void(ScenarioConfig&, const json&)> set;
  std::function<json(const ScenarioConfig&)> get;
};

template <typename T>
Field scalar(const char* key, T ScenarioConfig::*member) {
  return {key, [member](ScenarioConfig& c, const json& v) { c.*member = v.get<T>(); },
          [member](const ScenarioConfig& c) { return json(c.*member); }};
}

template <typename Vec>
Field vector(const char* key, Vec ScenarioConfig::*member) {
  return {key,
          [member, key](ScenarioConfig& c, const json& v) {
            if (!v.is_array() || v.size() != static_cast<std::size_t>((c.*member).size()))
              throw ConfigError(std::string(key) + " needs " + std::to_string((c.*member).size()) + " numbers");
            for (std::size_t i = 0; i < v.size(); ++i) (c.*member)[i] = v[i].get<double>();
          },
          [member](const ScenarioConfig& c) {
            json a = json::array();
            for (int i = 0; i < static_cast<int>((c.*member).size()); ++i) a.push_back((c.*member)[i]);
            return a;
          }};
}

Field link_model(Segment s) {
  return {"path_loss." + to_string(s),
          [s](ScenarioConfig& c, const json& v) {
            const auto name = v.get<std::string>();
            if (name == "cellular") c.path_loss[s] = LinkClass::Cellular;
            else if (name == "d2d") c.path_loss[s] = LinkClass::D2D;
            else throw ConfigError("path-loss model must be 'cellular' or 'd2d', got '" + name + "'");
          },
          [s](const ScenarioConfig& c) {
            return json(c.path_loss[s] == LinkClass::Cellular ? "cellular" : "d2d");
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f{
        scalar("num_cu", &ScenarioConfig::num_cu),
        scalar("num_rb", &ScenarioConfig::num_rb),
        scalar("rb_per_cu", &ScenarioConfig::rb_per_cu),
        scalar("num_d2d", &ScenarioConfig::num_d2d),
        scalar("num_ris", &ScenarioConfig::num_ris),
        scalar("p0_c_dbm", &ScenarioConfig::p0_c_dbm),
        scalar("p0_d_dbm", &ScenarioConfig::p0_d_dbm),
        scalar("n0_dbm_per_hz", &ScenarioConfig::n0_dbm_per_hz),
        scalar("rb_bandwidth_hz", &ScenarioConfig::rb_bandwidth_hz),
        scalar("r0_d", &ScenarioConfig::r0_d),
        vector("bs_pos", &ScenarioConfig::bs_pos),
        vector("ris_pos", &ScenarioConfig::ris_pos),
        vector("cu_center", &ScenarioConfig::cu_center),
        scalar("cu_radius", &ScenarioConfig::cu_radius),
        vector("d2d_center", &ScenarioConfig::d2d_center),
        scalar("d2d_radius", &ScenarioConfig::d2d_radius),
        vector("d2d_pair_dist", &ScenarioConfig::d2d_pair_dist),
        scalar("seed", &ScenarioConfig::seed),
        scalar("t1", &ScenarioConfig::t1),
        scalar("t2", &ScenarioConfig::t2),
        scalar("t3", &ScenarioConfig::t3),
        scalar("t4", &ScenarioConfig::t4),
        scalar("n_outer", &ScenarioConfig::n_outer),
        scalar("eta_init", &ScenarioConfig::eta_init),
        scalar("eta_gain", &ScenarioConfig::eta_gain),
        scalar("feas_tol", &ScenarioConfig::feas_tol),
        scalar("gap_tol", &ScenarioConfig::gap_tol),
        scalar("screen_initial_assignment", &ScenarioConfig::screen_initial_assignment),
    };
    for (int i = 0; i < kSegmentCount; ++i) f.push_back(link_model(static_cast<Segment>(i)));
    return f;
  }();
  return table;
}

const Field& find_field(const std::string& key) {
  for (const auto& f : fields())
    if (key == f.key) return f;
  throw ConfigError("unknown config key '" + key + "'");
}

void set_field(ScenarioConfig& cfg, const std::string& key, const json& value) {
  try {
    find_field(key).set(cfg, value);
  } catch (const json::exception& e) {
    throw ConfigError("bad value for '" + key + "': " + e.what());
  }
}

}  // namespace

ScenarioConfig config_from_json(const std::string& text, const ScenarioConfig& base) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  ScenarioConfig cfg = base;
  for (const auto& [key, value] : doc.items()) {
    if (key == "path_loss" && value.is_object()) {
      for (const auto& [seg, model] : value.items()) set_field(cfg, "path_loss." + seg, model);
    } else {
      set_field(cfg, key, value);
    }
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path, const ScenarioConfig& base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str(), base);
}

std::string config_to_json(const ScenarioConfig& cfg) {
  json doc = json::object();
  json pl = json::object();
  for (const auto& f : fields()) {
    std::string key = f.key;
    if (key.rfind("path_loss.", 0) == 0) pl[key.substr(10)] = f.get(cfg);
    else doc[key] = f.get(cfg);
  }
  doc["path_loss"] = pl;
  return doc.dump(2);
}

void apply_override(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
  const Field& f = find_field(key);
  json current = f.get(cfg);
  json parsed;
  if (current.is_string()) {
    parsed = value;
  } else if (current.is_array()) {
    parsed = json::parse("[" + value + "]", nullptr, false);
  } else {
    parsed = json::parse(value, nullptr, false);
  }
  if (parsed.is_discarded()) throw ConfigError("cannot parse value '" + value + "' for '" + key + "'");
  set_field(cfg, key, parsed);
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& f : fields()) out.emplace_back(f.key);
  return out;
}

}  // namespace risd2d
