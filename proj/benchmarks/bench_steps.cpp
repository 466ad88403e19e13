/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 risd2d contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "risd2d/bcd.hpp"

#include <benchmark/benchmark.h>

using namespace risd2d;

namespace {

struct Fixture {
  Scenario sc;
  PhaseShift phase;
  RBAssignment a;
  PowerAllocation pw;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    Fixture x;
    ScenarioConfig cfg;
    cfg.seed = 7;
    x.sc = generate_scenario(cfg);
    Rng rng(1);
    x.phase = PhaseShift::random(cfg.num_ris, rng);
    x.a = RBAssignment::from_rbs({0, 2}, cfg.num_rb);
    x.pw = solve_power(x.sc.channels, x.sc.graph, x.a, x.phase, cfg, rng).pw;
    return x;
  }();
  return f;
}

void BM_ConicLogBarrier(benchmark::State& st) {
  conic::ConvexProgram p;
  const int n = static_cast<int>(st.range(0));
  for (int i = 0; i < n; ++i) {
    const int x = p.add_scalar();
    conic::Objective::NegLog nl;
    nl.arg.add(x, 1.0).add_const(1.0);
    p.objective.neglogs.push_back(nl);
    p.linear.push_back({conic::Affine{}.add(x, 1.0), conic::Sense::GreaterEq, "x>=0"});
  }
  conic::Affine budget;
  budget.add_const(1.0);
  for (int i = 0; i < n; ++i) budget.add(i, -1.0);
  p.linear.push_back({budget, conic::Sense::GreaterEq, "sum<=1"});
  for (auto _ : st) benchmark::DoNotOptimize(conic::solve(p));
}
BENCHMARK(BM_ConicLogBarrier)->Arg(4)->Arg(16)->Arg(64);

void BM_PowerStep(benchmark::State& st) {
  const Fixture& f = fixture();
  for (auto _ : st) {
    Rng rng(2);
    benchmark::DoNotOptimize(solve_power(f.sc.channels, f.sc.graph, f.a, f.phase, f.sc.cfg, rng));
  }
}
BENCHMARK(BM_PowerStep)->Unit(benchmark::kMillisecond);

void BM_RbStep(benchmark::State& st) {
  const Fixture& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(solve_rb(f.sc.channels, f.sc.graph, f.pw, f.phase, f.sc.cfg));
}
BENCHMARK(BM_RbStep);

void BM_PhaseStep(benchmark::State& st) {
  const Fixture& f = fixture();
  for (auto _ : st)
    benchmark::DoNotOptimize(
        solve_phase(f.sc.channels, f.sc.graph, f.pw, f.a, f.sc.cfg, lifted_matrix(f.phase)));
}
BENCHMARK(BM_PhaseStep)->Unit(benchmark::kMillisecond);

void BM_Optimize(benchmark::State& st) {
  const Fixture& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(optimize(f.sc.channels, f.sc.graph, f.sc.cfg));
}
BENCHMARK(BM_Optimize)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
