/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 risd2d contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "risd2d/harness.hpp"

#include "risd2d/config.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <exception>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace risd2d {

namespace {

constexpr std::uint64_t kTagTrial = 200;

const std::map<std::string, std::string>& aliases() {
  static const std::map<std::string, std::string> m{
      {"J_D", "num_d2d"}, {"P0_c", "p0_c_dbm"}, {"P0_d", "p0_d_dbm"}, {"R0_d", "r0_d"}, {"M", "num_ris"}};
  return m;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

std::string sweep_key(const std::string& param) {
  const auto it = aliases().find(param);
  return it == aliases().end() ? param : it->second;
}

void SweepSpec::validate() const {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (schemes.empty()) throw ConfigError("sweep needs at least one scheme");
  const auto keys = config_keys();
  if (std::find(keys.begin(), keys.end(), sweep_key(param)) == keys.end())
    throw ConfigError("unknown sweep parameter '" + param + "'");
  for (double v : values) point_config(*this, v, 0).validate();
}

std::uint64_t trial_seed(std::uint64_t master_seed, int trial) {
  Rng rng = make_stream(master_seed, kTagTrial, static_cast<std::uint64_t>(trial));
  return rng();
}

ScenarioConfig point_config(const SweepSpec& spec, double value, int trial) {
  ScenarioConfig cfg = spec.base;
  apply_override(cfg, sweep_key(spec.param), fmt("%.17g", value));
  cfg.seed = trial_seed(spec.master_seed, trial);
  return cfg;
}

SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  const int nv = static_cast<int>(spec.values.size());
  const int ns = static_cast<int>(spec.schemes.size());
  const int jobs = nv * spec.trials;

  // slot (scheme, value, trial) -> record
  auto slot = [&](int s, int v, int t) { return (static_cast<std::size_t>(s) * nv + v) * spec.trials + t; };
  std::vector<TrialRecord> raw(static_cast<std::size_t>(ns) * jobs);
  std::vector<Solution> sols(spec.keep_solutions ? raw.size() : 0);

  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (int job = next++; job < jobs; job = next++) {
      const int v = job / spec.trials, t = job % spec.trials;
      try {
        const ScenarioConfig cfg = point_config(spec, spec.values[v], t);
        const Scenario sc = generate_scenario(cfg);
        for (int s = 0; s < ns; ++s) {
          Solution sol = optimize_baseline(sc.channels, sc.graph, cfg, spec.schemes[s]);
          TrialRecord& r = raw[slot(s, v, t)];
          r.scheme = spec.schemes[s];
          r.param_value = spec.values[v];
          r.trial = t;
          r.seed = cfg.seed;
          r.rate = sol.rate;
          r.status = sol.status;
          r.outer_iters = sol.outer_iters;
          r.wall_ms = sol.wall_ms;
          if (spec.keep_solutions) sols[slot(s, v, t)] = std::move(sol);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };

  int threads = spec.threads > 0 ? spec.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, std::max(1, jobs));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  SweepResult res;
  res.param = spec.param;
  res.raw = std::move(raw);
  res.solutions = std::move(sols);
  res.points = aggregate(res.raw);
  return res;
}

std::vector<PointStats> aggregate(const std::vector<TrialRecord>& raw) {
  std::vector<PointStats> out;
  std::vector<std::vector<double>> rates;
  for (const TrialRecord& r : raw) {
    auto it = std::find_if(out.begin(), out.end(), [&](const PointStats& p) {
      return p.scheme == r.scheme && p.param_value == r.param_value;
    });
    if (it == out.end()) {
      out.push_back({r.scheme, r.param_value, 0, 0, 0.0, 0.0});
      rates.emplace_back();
      it = out.end() - 1;
    }
    const std::size_t i = static_cast<std::size_t>(it - out.begin());
    if (r.status == StepStatus::Ok) {
      ++it->trials_ok;
      rates[i].push_back(r.rate);
    } else {
      ++it->trials_infeasible;
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& x = rates[i];
    if (x.empty()) continue;
    double sum = 0.0;
    for (double v : x) sum += v;
    const double mean = sum / static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    out[i].mean_rate = mean;
    out[i].std_rate = x.size() > 1 ? std::sqrt(ss / static_cast<double>(x.size() - 1)) : 0.0;
  }
  return out;
}

std::string aggregate_csv(const SweepResult& res) {
  std::string s = "scheme,param_name,param_value,trials_ok,trials_infeasible,mean_rate_bps_hz,std_rate_bps_hz\n";
  for (const PointStats& p : res.points) {
    s += to_string(p.scheme);
    s += ',' + res.param + ',' + fmt("%.10g", p.param_value) + ',' + std::to_string(p.trials_ok) + ',' +
         std::to_string(p.trials_infeasible) + ',' + fmt("%.9f", p.mean_rate) + ',' + fmt("%.9f", p.std_rate) + '\n';
  }
  return s;
}

std::string raw_csv(const SweepResult& res) {
  std::string s = "scheme,param_value,trial,seed,rate_bps_hz,status,outer_iters,wall_ms\n";
  for (const TrialRecord& r : res.raw) {
    s += to_string(r.scheme);
    s += ',' + fmt("%.10g", r.param_value) + ',' + std::to_string(r.trial) + ',' + std::to_string(r.seed) + ',' +
         fmt("%.9f", r.rate) + ',' + to_string(r.status) + ',' + std::to_string(r.outer_iters) + ',' +
         fmt("%.3f", r.wall_ms) + '\n';
  }
  return s;
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace

void emit_csv(const SweepResult& res, const std::string& aggregate_path, const std::string& raw_path) {
  write_file(aggregate_path, aggregate_csv(res));
  write_file(raw_path, raw_csv(res));
}

void emit_plot(const SweepResult& res, const std::string& path) { write_file(path, render_svg(res)); }

}  // namespace risd2d
