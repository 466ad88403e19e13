/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 risd2d contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include "risd2d/scenario.hpp"

#include <string>
#include <vector>

namespace risd2d {

/// Parses a JSON object whose keys mirror ScenarioConfig fields. Missing keys
/// keep the defaults of `base`; unknown keys raise ConfigError.
ScenarioConfig config_from_json(const std::string& text, const ScenarioConfig& base = {});
ScenarioConfig load_config(const std::string& path, const ScenarioConfig& base = {});

/// Pretty-printed JSON with every key.
std::string config_to_json(const ScenarioConfig& cfg);

/// Sets one field from its textual value, e.g. ("p0_d_dbm", "25") or
/// ("bs_pos", "0,0,15") or ("path_loss.ris_dr", "cellular").
void apply_override(ScenarioConfig& cfg, const std::string& key, const std::string& value);

/// Every key accepted by apply_override and config_from_json.
std::vector<std::string> config_keys();

}  // namespace risd2d
