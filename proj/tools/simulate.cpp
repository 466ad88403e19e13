/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 risd2d contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "risd2d/config.hpp"
#include "risd2d/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t p = s.find(sep, start);
    out.push_back(s.substr(start, p - start));
    if (p == std::string::npos) break;
    start = p + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte-Carlo sum-rate sweeps for RIS-aided SCMA uplink with D2D underlay"};
  std::string config_path, sweep, schemes = "proposed,rps,rpo,rrb,no_ris", out_dir = "out";
  std::vector<std::string> overrides;
  int trials = 100, threads = 0;
  std::uint64_t seed = 1;
  bool plot = false, dump = false;
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--set", overrides, "config override key=value, repeatable");
  app.add_option("--sweep", sweep, "swept parameter and values, e.g. J_D=1,2,3,4");
  app.add_option("--trials", trials, "trials per sweep point")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "master seed");
  app.add_option("--schemes", schemes, "comma-separated subset of proposed,rps,rpo,rrb,no_ris");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads, 0 = all cores");
  app.add_flag("--plot", plot, "also write plot.svg");
  app.add_flag("--dump-config", dump, "print the effective config as JSON and exit");
  CLI11_PARSE(app, argc, argv);

  try {
    risd2d::ScenarioConfig cfg;
    if (!config_path.empty()) cfg = risd2d::load_config(config_path);
    for (const std::string& kv : overrides) {
      const std::size_t eq = kv.find('=');
      if (eq == std::string::npos) throw risd2d::ConfigError("--set expects key=value, got '" + kv + "'");
      risd2d::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (dump) {
      std::fputs(risd2d::config_to_json(cfg).c_str(), stdout);
      std::fputc('\n', stdout);
      return 0;
    }
    if (sweep.empty()) throw risd2d::ConfigError("--sweep is required");

    risd2d::SweepSpec spec;
    spec.base = cfg;
    const std::size_t eq = sweep.find('=');
    if (eq == std::string::npos) throw risd2d::ConfigError("--sweep expects param=v1,v2,...");
    spec.param = sweep.substr(0, eq);
    spec.values.clear();
    for (const std::string& v : split(sweep.substr(eq + 1), ',')) {
      std::size_t used = 0;
      const double x = std::stod(v, &used);
      if (used != v.size()) throw risd2d::ConfigError("bad sweep value '" + v + "'");
      spec.values.push_back(x);
    }
    spec.schemes.clear();
    for (const std::string& s : split(schemes, ',')) spec.schemes.push_back(risd2d::parse_scheme(s));
    spec.trials = trials;
    spec.master_seed = seed;
    spec.threads = threads;

    const risd2d::SweepResult res = risd2d::run_sweep(spec);
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    risd2d::emit_csv(res, (dir / "aggregate.csv").string(), (dir / "raw.csv").string());
    if (plot) risd2d::emit_plot(res, (dir / "plot.svg").string());
    std::fputs(risd2d::aggregate_csv(res).c_str(), stdout);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "simulate: %s\n", e.what());
    return 1;
  }
  return 0;
}
