// Copyright 2026 The wildfire Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "wildfire/adversary.hpp"
#include "wildfire/grid.hpp"
#include "wildfire/io.hpp"
#include "wildfire/regions.hpp"
#include "wildfire/solver.hpp"
#include "wildfire/spread.hpp"

using namespace wildfire;

namespace {

const std::string kData = WILDFIRE_BENCH_DATA;

// Dense random LP: max c.x, A x <= b, 0 <= x <= 10.
conic::ConicModel random_lp(int n, int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  conic::ConicModel model;
  std::vector<conic::Term> obj;
  for (int j = 0; j < n; ++j) {
    model.add_variable("x" + std::to_string(j), 0.0, 10.0);
    obj.push_back({j, u(rng)});
  }
  for (int i = 0; i < m; ++i) {
    std::vector<conic::Term> row;
    for (int j = 0; j < n; ++j) {
      if (u(rng) < 0.3) row.push_back({j, u(rng)});
    }
    model.add_linear(row, conic::Sense::kLessEqual, 1.0 + 5.0 * u(rng));
  }
  model.set_objective(conic::ObjectiveSense::kMaximize, obj);
  return model;
}

void BM_SolveLp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto model = random_lp(n, n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(solver::solve_lp(model).objective);
}
BENCHMARK(BM_SolveLp)->Arg(50)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_RothermelRate(benchmark::State& state) {
  SpreadParams p;
  p.B = 0.9093;
  p.C = 2.5010;
  p.V = 0.05;
  Point2 w{20.0, 3.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(rothermel_rate({1.0, 0.2}, w, 0.05, p));
    w.y += 1e-9;
  }
}
BENCHMARK(BM_RothermelRate);

void BM_MinTimeDesk(benchmark::State& state, const char* variant) {
  const Scenario s = io::read_scenario(kData + "/desk/scenario.json");
  const auto v = SpreadVariant::parse(variant);
  for (auto _ : state) benchmark::DoNotOptimize(min_time_to_outage(s, s.full_mask(), v).tstar);
}
BENCHMARK_CAPTURE(BM_MinTimeDesk, ball, "ball")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_MinTimeDesk, ip_rmc, "ip-rmc")->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_ScopfDesk(benchmark::State& state) {
  const Scenario s = io::read_scenario(kData + "/desk/scenario.json");
  const grid::Grid g = io::read_grid(kData + "/desk/grid.json");
  std::vector<int> lines;
  for (const auto& e : s.elements) lines.push_back(std::stoi(e.id));
  std::vector<unsigned> subsets;
  for (unsigned m = 1; m <= s.full_mask(); ++m) subsets.push_back(m);
  const auto k = grid::all_contingencies(subsets, lines, g.periods);
  for (auto _ : state) benchmark::DoNotOptimize(grid::solve_scopf(g, k).objective);
}
BENCHMARK(BM_ScopfDesk)->Unit(benchmark::kMillisecond);

void BM_TrainTree(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  regions::Raster r;
  r.ncols = r.nrows = static_cast<int>(state.range(0));
  r.cell = 0.1;
  for (int i = 0; i < r.ncols * r.nrows; ++i) r.values.push_back(u(rng));
  for (auto _ : state) benchmark::DoNotOptimize(regions::train_tree(r, 3, 25.0).num_leaves());
}
BENCHMARK(BM_TrainTree)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
