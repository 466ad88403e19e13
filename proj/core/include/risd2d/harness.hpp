/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 risd2d contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include "risd2d/bcd.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace risd2d {

struct SweepSpec {
  /// A config key (see config_keys()) or one of the aliases J_D, P0_c, P0_d, R0_d, M.
  std::string param = "J_D";
  std::vector<double> values{1, 2, 3, 4};
  int trials = 100;
  ScenarioConfig base;
  std::vector<Scheme> schemes = all_schemes();
  std::uint64_t master_seed = 1;
  int threads = 0;  ///< 0 picks std::thread::hardware_concurrency()
  /// Keep every Solution in the result (memory grows with trials x schemes).
  bool keep_solutions = false;

  /// Throws ConfigError on an empty value list, trials < 1, no schemes or an unknown parameter.
  void validate() const;
};

/// Config key behind a sweep parameter name (aliases resolved).
std::string sweep_key(const std::string& param);

/// Scenario seed of a trial. It does not depend on the sweep point, so every
/// point of a sweep sees the same draws for the entities they share.
std::uint64_t trial_seed(std::uint64_t master_seed, int trial);

/// Base config with the swept parameter set to `value` and the trial seed applied.
ScenarioConfig point_config(const SweepSpec& spec, double value, int trial);

struct TrialRecord {
  Scheme scheme = Scheme::Proposed;
  double param_value = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  double rate = 0.0;
  StepStatus status = StepStatus::Infeasible;
  int outer_iters = 0;
  double wall_ms = 0.0;
};

struct PointStats {
  Scheme scheme = Scheme::Proposed;
  double param_value = 0.0;
  int trials_ok = 0;
  int trials_infeasible = 0;
  double mean_rate = 0.0;
  double std_rate = 0.0;  ///< sample standard deviation, 0 below two trials
};

struct SweepResult {
  std::string param;
  std::vector<PointStats> points;  ///< ordered by scheme, then value
  std::vector<TrialRecord> raw;    ///< ordered by scheme, value, trial
  std::vector<Solution> solutions; ///< parallel to raw when keep_solutions
};

/// Runs every scheme on the identical channels of each (value, trial).
/// Trials run on a worker pool; the result does not depend on the thread count.
SweepResult run_sweep(const SweepSpec& spec);

/// Mean and sample std of the ok records of each (scheme, value).
std::vector<PointStats> aggregate(const std::vector<TrialRecord>& raw);

std::string aggregate_csv(const SweepResult& res);
std::string raw_csv(const SweepResult& res);
/// Writes both CSV files; throws std::runtime_error on I/O failure.
void emit_csv(const SweepResult& res, const std::string& aggregate_path, const std::string& raw_path);

/// SVG line chart of mean rate against the swept value, one series per scheme.
std::string render_svg(const SweepResult& res);
void emit_plot(const SweepResult& res, const std::string& path);

}  // namespace risd2d
