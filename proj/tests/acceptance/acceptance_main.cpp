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

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support/grids.hpp"
#include "support/misocp_oracle.hpp"
#include "support/rasters.hpp"
#include "support/scenarios.hpp"
#include "wildfire/adversary.hpp"
#include "wildfire/cli.hpp"
#include "wildfire/conic.hpp"
#include "wildfire/error.hpp"
#include "wildfire/grid.hpp"
#include "wildfire/io.hpp"
#include "wildfire/regions.hpp"
#include "wildfire/solver.hpp"
#include "wildfire/spread.hpp"

using namespace wildfire;
namespace fs = std::filesystem;

namespace {

const std::string kData = WILDFIRE_TEST_DATA;

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

SpreadParams calibrated(double b) {
  SpreadParams p;
  p.B = b;
  p.C = 2.5010;
  p.V = 0.05;
  p.nominal_wind = {{0, 0}};
  return p;
}

Point2 unit(double a) { return {std::cos(a), std::sin(a)}; }

Point2 sample_disk(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return radius * std::sqrt(u(rng)) * unit(2.0 * std::numbers::pi * u(rng));
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Outcome calibration() {
  Outcome o;
  const double r = rothermel_rate({1, 0}, {20, 0}, 0.05, calibrated(0.9093));
  o.require(r >= 1.9 && r <= 2.1, "rate " + num(r));
  o.detail = o.ok ? "rate " + num(r) + " mi/hr" : o.detail;
  return o;
}

Outcome rational_exponents() {
  Outcome o;
  const auto a = conic::rationalize(0.9093, 4);
  const auto b = conic::rationalize(0.5238, 4);
  o.require(a.num == 10 && a.den == 11, "0.9093 -> " + std::to_string(a.num) + "/" + std::to_string(a.den));
  o.require(std::abs(a.value() - 0.9093) < 5e-4, "error " + num(a.value() - 0.9093));
  o.require(b.num == 8 && b.den == 15, "0.5238 -> " + std::to_string(b.num) + "/" + std::to_string(b.den));
  o.require(std::abs(b.value() - 0.5238) < 5e-2, "error " + num(b.value() - 0.5238));
  if (o.ok) o.detail = "10/11 err " + num(a.value() - 0.9093) + ", 8/15 err " + num(b.value() - 0.5238);
  return o;
}

// Largest x with x^D <= y^N.
double bisect_power(double y, int n, int d) {
  double lo = 0.0, hi = std::max(1.0, y);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (d * std::log(mid) <= n * std::log(y) ? lo : hi) = mid;
  }
  return lo;
}

Outcome power_rewrite() {
  Outcome o;
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(0.01, 10.0);
  double worst = 0.0;
  for (conic::RationalExponent e : {conic::RationalExponent{1, 2, 1}, conic::RationalExponent{10, 11, 4},
                                    conic::RationalExponent{8, 15, 4}}) {
    for (int k = 0; k < 20; ++k) {
      const double y = u(rng);
      conic::ConicModel m;
      const int x = m.add_variable("x", 0.0, conic::kInf);
      const int yv = m.add_variable("y", y, y);
      m.add_power(x, yv, e);
      m.set_objective(conic::ObjectiveSense::kMaximize, {{x, 1.0}});
      const conic::ConicModel r = conic::rewrite_power(m);
      o.require(static_cast<int>(r.socs().size()) == e.rho, "SOC count");
      o.require(r.num_variables() - m.num_variables() == e.rho - 1, "proxy count");
      const auto sol = solver::solve(r);
      o.require(sol.status == solver::Status::kOptimal, "solve status");
      const double err = std::abs(sol.objective - bisect_power(y, e.num, e.den));
      worst = std::max(worst, err);
    }
  }
  o.require(worst <= 1e-5, "max error " + num(worst));
  if (o.ok) o.detail = "max |x* - y^(N/D)| " + num(worst);
  return o;
}

Outcome relaxation_suites() {
  Outcome o;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int bad = 0;
  for (int s = 0; s < 100000; ++s) {
    const double r_bar = 0.1 + 5 * u(rng), eps = 0.1 + 30 * u(rng);
    const Point2 d = sample_disk(rng, r_bar), w = sample_disk(rng, eps);
    for (auto rel : {InnerRelaxation::kMcCormick, InnerRelaxation::kRotatedMcCormick, InnerRelaxation::kTwoMinor}) {
      if (!ip_relax_member(d, w, dot(d, w), rel, r_bar, eps, 1e-9)) ++bad;
    }
  }
  o.require(bad == 0, std::to_string(bad) + " relaxation violations");

  auto p = calibrated(1.0);
  const Point2 x{2, -1};
  int chain = 0;
  for (int cfg = 0; cfg < 20; ++cfg) {
    p.epsilon = 1 + 30 * u(rng);
    const Point2 nominal = 20 * u(rng) * unit(7 * u(rng));
    const Point2 w = nominal + sample_disk(rng, p.epsilon);
    const double v_loc = 0.05 * (0.1 + 0.9 * u(rng));
    const Ball outer = ball_spread(w, x, v_loc, p, norm(nominal));
    for (int s = 0; s < 10000; ++s) {
      const Point2 dir = unit(2 * std::numbers::pi * u(rng));
      const double frac = s % 10 == 0 ? 1.0 : std::sqrt(u(rng));
      const Point2 y = x + frac * rothermel_rate(dir, w, v_loc, p) * dir;
      if (!rothermel_member(y, x, w, v_loc, p) || !angle_member(y, x, w, v_loc, p) || !ball_contains(outer, y)) {
        ++chain;
      }
    }
  }
  o.require(chain == 0, std::to_string(chain) + " containment violations");
  if (o.ok) o.detail = "3e5 relaxation checks, 2e5 containment checks";
  return o;
}

Outcome solver_exactness() {
  Outcome o;
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  int infeasible = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = testing::RandomMisocp::generate(rng, 4 + trial % 9, 1 + trial % 3);
    const auto expect = p.brute_force();
    solver::SolveOptions opts;
    const auto sol = solver::solve(p.model(), opts);
    if (!expect) {
      ++infeasible;
      o.require(sol.status == solver::Status::kInfeasible, "trial " + std::to_string(trial) + " should be infeasible");
      continue;
    }
    o.require(sol.status == solver::Status::kOptimal, "trial " + std::to_string(trial) + " not optimal");
    worst = std::max(worst, std::abs(sol.objective - *expect));
  }
  o.require(worst <= 1e-5, "max objective error " + num(worst));
  if (o.ok) o.detail = "max error " + num(worst) + ", " + std::to_string(infeasible) + " infeasible";
  return o;
}

Outcome min_time_oracle() {
  Outcome o;
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double v = 0.05;
  int done = 0;
  while (done < 20) {
    const double dist = 0.02 + 0.38 * u(rng);
    const double q = dist / v;
    if (std::abs(q - std::round(q)) < 1e-3) continue;
    const Point2 at = dist * unit(2 * std::numbers::pi * u(rng));
    const auto s = testing::still_air({at}, 10, v);
    const auto r = min_time_to_outage(s, 1, SpreadVariant::ball());
    const int expect = static_cast<int>(std::ceil(q));
    o.require(r.tstar && *r.tstar == expect, "distance " + num(dist) + " gave " +
                                                  (r.tstar ? std::to_string(*r.tstar) : "none"));
    ++done;
  }

  const auto four = testing::still_air({{0.12, 0.0}, {0.0, 0.14}, {-0.08, -0.03}, {0.09, -0.2}}, 6);
  std::vector<int> tstar(16, 1 << 20);
  for (SubsetMask m = 1; m < 16; ++m) {
    const auto r = min_time_to_outage(four, m, SpreadVariant::ball());
    if (r.tstar) tstar[m] = *r.tstar;
  }
  for (SubsetMask a = 1; a < 16; ++a) {
    for (SubsetMask b = 1; b < 16; ++b) {
      if ((a & b) == a) o.require(tstar[a] <= tstar[b], "subset monotonicity");
    }
  }

  auto s = testing::still_air({{0.3, 0.1}, {-0.1, 0.25}}, 8, v, 0.0, {0, 0}, 2.0);
  s.spread.B = 0.9093;
  int prev = 1 << 20;
  std::string seq;
  for (double eps : {0.0, 5.0, 10.0, 20.0}) {
    s.spread.epsilon = eps;
    const auto r = min_time_to_outage(s, s.full_mask(), SpreadVariant::ball());
    const int t = r.tstar ? *r.tstar : 1 << 20;
    o.require(t <= prev, "epsilon monotonicity at " + num(eps));
    seq += (seq.empty() ? "" : ",") + (r.tstar ? std::to_string(t) : std::string("none"));
    prev = t;
  }
  if (o.ok) o.detail = "20 oracle scenarios exact; t* over epsilon " + seq;
  return o;
}

Outcome opf_correctness() {
  Outcome o;
  const auto close = [&](double got, double want, const std::string& what) {
    o.require(std::abs(got - want) <= 1e-6 * std::max(1.0, std::abs(want)), what + " " + num(got));
  };
  const auto shed0 = [](const grid::BaseDispatch& d) {
    double s = 0.0;
    for (const auto& row : d.shed) s += row[0];
    return s;
  };
  {
    const auto g = testing::two_bus(150.0);
    const auto r = grid::solve_base_opf(g);
    close(r.base.cost, 1000.0, "two-bus cost");
    close(shed0(r.base), 0.0, "two-bus shed");
    close(grid::contingency_recourse(g, r.base, {10}, 0).extra_shed, 100.0, "two-bus outage shed");
    const auto c = grid::solve_base_opf(testing::two_bus(60.0));
    close(c.base.cost, 60.0 * 10.0 + 40.0 * 10000.0, "congested two-bus cost");
    close(shed0(c.base), 40.0, "congested two-bus shed");
  }
  {
    const auto g = testing::triangle(50.0);
    const auto r = grid::solve_base_opf(g);
    close(shed0(r.base), 25.0, "triangle shed");
    close(r.base.flow[0][0], 50.0, "triangle direct flow");
    close(r.base.flow[1][0], 25.0, "triangle two-hop flow");
    close(r.base.cost, 750.0 + 250000.0, "triangle cost");
    close(grid::contingency_cost(g, r.base, {1}, 0), 0.0, "triangle outage cost");
  }
  std::vector<grid::Grid> grids = {testing::two_bus(150.0, 2), testing::two_bus(60.0), testing::triangle(50.0, 2),
                                   testing::ring(3), io::read_grid(kData + "/desk/grid.json")};
  double residual = 0.0;
  int checked = 0;
  for (const auto& g : grids) {
    const auto r = grid::solve_base_opf(g);
    o.require(r.status == solver::Status::kOptimal, "base OPF status");
    residual = std::max(residual, grid::balance_residual(g, r.base));
    const int nl = static_cast<int>(g.lines.size());
    for (unsigned mask = 1; mask < (1u << nl); ++mask) {
      std::vector<int> out;
      for (int j = 0; j < nl; ++j) {
        if (mask >> j & 1u) out.push_back(g.lines[j].id);
      }
      for (int t = 0; t < g.periods; ++t) {
        try {
          grid::contingency_recourse(g, r.base, out, t);
          ++checked;
        } catch (const Error& e) {
          o.require(false, std::string("recourse failed: ") + e.what());
        }
      }
    }
  }
  o.require(residual <= 1e-6, "balance residual " + num(residual));
  if (o.ok) o.detail = std::to_string(checked) + " recourse LPs feasible, max residual " + num(residual);
  return o;
}

struct Desk {
  Scenario s;
  grid::Grid g;
  std::vector<int> lines;
  std::vector<std::pair<unsigned, std::optional<int>>> tstar;
};

Desk load_desk() {
  Desk d;
  d.s = io::read_scenario(kData + "/desk/scenario.json");
  d.g = io::read_grid(kData + "/desk/grid.json");
  for (const auto& e : d.s.elements) d.lines.push_back(std::stoi(e.id));
  for (SubsetMask m = 1; m <= d.s.full_mask(); ++m) {
    d.tstar.push_back({m, min_time_to_outage(d.s, m, SpreadVariant::ball()).tstar});
  }
  return d;
}

Outcome screening_effect(const Desk& d) {
  Outcome o;
  o.require(d.g.buses.size() <= 10 && d.s.num_elements() == 3 && d.s.horizon() == 8, "desk instance shape");
  std::vector<unsigned> subsets;
  for (const auto& [m, t] : d.tstar) subsets.push_back(m);
  const auto k_all = grid::all_contingencies(subsets, d.lines, d.g.periods);
  const auto k_th = grid::threshold_contingencies(d.tstar, d.lines, d.g.periods);
  o.require(k_th.size() <= k_all.size(), "threshold set larger than all");
  const auto none = grid::solve_scopf(d.g, {});
  const auto all = grid::solve_scopf(d.g, k_all);
  const auto th = grid::solve_scopf(d.g, k_th);
  for (const auto* r : {&none, &all, &th}) o.require(r->status == solver::Status::kOptimal, "SCOPF status");
  const double shed_none = grid::contingency_shed(d.g, none.base, k_th);
  const double shed_all = grid::contingency_shed(d.g, all.base, k_th);
  const double shed_th = grid::contingency_shed(d.g, th.base, k_th);
  o.require(shed_th <= shed_none + 1e-6, "threshold shed " + num(shed_th) + " > none " + num(shed_none));
  o.require(std::abs(shed_all - shed_th) <= 1e-3, "all " + num(shed_all) + " vs threshold " + num(shed_th));
  if (o.ok) {
    o.detail = "|K| " + std::to_string(k_th.size()) + "/" + std::to_string(k_all.size()) + ", threshold-set shed none " +
               num(shed_none) + ", threshold " + num(shed_th) + ", all " + num(shed_all) + " MWh";
  }
  return o;
}

Outcome sequential_dominance(const Desk& d) {
  Outcome o;
  const auto base = grid::solve_base_opf(d.g);
  o.require(base.status == solver::Status::kOptimal, "base OPF status");
  Scenario ws = d.s;
  ws.min_time = false;
  std::vector<std::vector<double>> shed(d.s.full_mask() + 1, std::vector<double>(d.g.periods, 0.0));
  for (SubsetMask m = 1; m <= d.s.full_mask(); ++m) {
    std::vector<int> out;
    for (int e = 0; e < d.s.num_elements(); ++e) {
      if (m >> e & 1u) out.push_back(d.lines[e]);
    }
    for (int t = 0; t < d.g.periods; ++t) {
      shed[m][t] = grid::contingency_recourse(d.g, base.base, out, t).extra_shed;
      ws.weights[{m, t}] = shed[m][t];
    }
  }
  const auto& full = d.tstar.back();
  o.require(full.first == d.s.full_mask() && full.second.has_value(), "full set unreachable");
  double simultaneous = 0.0;
  for (int t = full.second.value_or(d.g.periods); t < d.g.periods; ++t) simultaneous += shed[d.s.full_mask()][t];
  const auto seq = max_shed_sequence(ws, SpreadVariant::ball());
  o.require(seq.status == solver::Status::kOptimal, "sequence status");
  o.require(seq.objective >= simultaneous - 1e-6, "sequence below base");
  o.require(seq.objective > simultaneous + 1e-3, "not strict");
  // Optimal = Base when only the full set carries weight.
  Scenario only_full = ws;
  only_full.weights.clear();
  for (int t = 0; t < d.g.periods; ++t) only_full.weights[{d.s.full_mask(), t}] = shed[d.s.full_mask()][t];
  const auto eq = max_shed_sequence(only_full, SpreadVariant::ball());
  o.require(std::abs(eq.objective - simultaneous) <= 1e-6 * std::max(1.0, simultaneous), "full-only mismatch");
  if (o.ok) o.detail = "optimal " + num(seq.objective) + " MWh vs base " + num(simultaneous) + " MWh";
  return o;
}

Outcome region_pipeline() {
  Outcome o;
  const auto r = testing::half_split(8, 6, 20.0, 80.0);
  const auto tree = regions::train_tree(r, 3, 25.0);
  const RegionSet rs = regions::extract_regions(tree, r.bbox());
  o.require(rs.size() == 2, std::to_string(rs.size()) + " regions");
  if (!o.ok) return o;
  o.require(rs.regions()[0].multiplier == 0.2 && rs.regions()[1].multiplier == 0.8, "labels");
  o.require(contains_h(rs.regions()[0].shape, {1, 1}) && contains_h(rs.regions()[1].shape, {7, 5}), "sides");
  o.require(std::abs(polygon_area(rs.regions()[0].shape.vertices()) - 24.0) <= 1e-9, "left area");

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> val(0.0, 100.0);
  regions::Raster rnd;
  rnd.ncols = 14;
  rnd.nrows = 11;
  rnd.cell = 0.5;
  for (int i = 0; i < rnd.nrows * rnd.ncols; ++i) rnd.values.push_back(val(rng));
  const RegionSet rr = regions::extract_regions(regions::train_tree(rnd, 3, 1.0), rnd.bbox());
  const auto bb = rr.bbox();
  std::uniform_real_distribution<double> ux(bb[0], bb[2]), uy(bb[1], bb[3]);
  int bad = 0;
  for (int s = 0; s < 10000; ++s) {
    const Point2 x{ux(rng), uy(rng)};
    int inside = 0, interior = 0;
    for (const auto& reg : rr.regions()) {
      inside += contains_h(reg.shape, x) ? 1 : 0;
      interior += contains_h(reg.shape, x, -1e-9) ? 1 : 0;
    }
    if (inside < 1 || interior > 1) ++bad;
  }
  for (const auto& reg : rr.regions()) o.require(reg.multiplier > 0.0 && reg.multiplier <= 1.0, "multiplier range");
  o.require(bad == 0, std::to_string(bad) + " partition failures");
  if (o.ok) o.detail = "2 regions, labels 0.2/0.8; " + std::to_string(rr.size()) + "-region partition holds on 1e4 samples";
  return o;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& f : fs::directory_iterator(dir)) files[f.path().filename().string()] = io::read_text(f.path().string());
  return files;
}

Outcome determinism() {
  Outcome o;
  const std::string sc = kData + "/desk/scenario.json", gr = kData + "/desk/grid.json";
  const fs::path work = fs::temp_directory_path() / "wildfire_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);
  // A t* table for the threshold run.
  std::ostringstream sink;
  cli::run({"screen", "--scenario", sc, "--out", work.string()}, sink, sink);
  const std::string tstar = (work / "screen.csv").string();
  const std::vector<std::vector<std::string>> cmds = {
      {"regions", "--raster", kData + "/half_split.asc", "--plot-data"},
      {"regions", "--raster", kData + "/half_split.asc", "--scenario", sc},
      {"screen", "--scenario", sc, "--workers", "3", "--plot-data"},
      {"screen", "--scenario", sc, "--variant", "ip-rmc"},
      {"screen", "--scenario", kData + "/oracle1.json", "--variant", "ip-rmc2m", "--flex", "hf"},
      {"sequence", "--scenario", sc, "--grid", gr, "--all-subsets", "--workers", "2", "--plot-data"},
      {"opf", "--grid", gr, "--scenario", sc, "--contingencies", "none"},
      {"opf", "--grid", gr, "--scenario", sc, "--contingencies", "all", "--tstar", tstar},
      {"opf", "--grid", gr, "--scenario", sc, "--contingencies", "threshold:" + tstar},
      {"export", "--scenario", sc, "--variant", "ip-rmc2m"},
  };
  int files = 0;
  for (std::size_t c = 0; c < cmds.size(); ++c) {
    std::string first_out;
    std::map<std::string, std::string> first;
    for (int pass = 0; pass < 2; ++pass) {
      const fs::path out = work / ("run" + std::to_string(c) + "_" + std::to_string(pass));
      fs::create_directories(out);
      auto args = cmds[c];
      args.insert(args.end(), {"--seed", "7", "--out", out.string()});
      std::ostringstream stdout_text, stderr_text;
      const int code = cli::run(args, stdout_text, stderr_text);
      o.require(code == cli::kExitOk, cmds[c][0] + " exited " + std::to_string(code) + ": " + stderr_text.str());
      const auto snap = snapshot(out);
      if (pass == 0) {
        first = snap;
        first_out = stdout_text.str();
        files += static_cast<int>(snap.size());
      } else {
        o.require(snap == first, cmds[c][0] + " files differ between runs");
        o.require(stdout_text.str() == first_out, cmds[c][0] + " stdout differs between runs");
      }
    }
  }
  fs::remove_all(work);
  if (o.ok) o.detail = std::to_string(cmds.size()) + " commands, " + std::to_string(files) + " files identical";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  std::optional<Desk> desk;
  const auto with_desk = [&](Outcome (*f)(const Desk&)) {
    return [&desk, f] {
      if (!desk) desk = load_desk();
      return f(*desk);
    };
  };
  const std::vector<Criterion> criteria = {
      {1, "calibration", 1e-3, calibration},
      {2, "rational exponents", 1.0, rational_exponents},
      {3, "power-cone rewrite", 5.0, power_rewrite},
      {4, "relaxation validity", 30.0, relaxation_suites},
      {5, "solver exactness", 300.0, solver_exactness},
      {6, "min-time oracle", 600.0, min_time_oracle},
      {7, "OPF correctness", 600.0, opf_correctness},
      {8, "screening effect", 600.0, with_desk(screening_effect)},
      {9, "sequential dominance", 600.0, with_desk(sequential_dominance)},
      {10, "region pipeline", 10.0, region_pipeline},
      {11, "determinism", 600.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && secs > c.limit_s) {
      o.ok = false;
      o.detail = "took " + num(secs) + " s, limit " + num(c.limit_s) + " s";
    }
    failed += o.ok ? 0 : 1;
    std::printf("%s criterion %d (%s): %s [%.3f s]\n", o.ok ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
