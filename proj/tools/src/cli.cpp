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

#include "wildfire/cli.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "wildfire/adversary.hpp"
#include "wildfire/error.hpp"
#include "wildfire/grid.hpp"
#include "wildfire/io.hpp"
#include "wildfire/regions.hpp"
#include "wildfire/spread.hpp"

namespace wildfire::cli {

namespace {

constexpr double kMphPerKnot = 1.150779448;

struct Common {
  std::string variant = "ball";
  std::string flex;
  double hf_margin = 10.0;
  std::uint64_t seed = 0;
  double feas_tol = 1e-5;
  double opt_tol = 1e-5;
  double time_limit = 3600.0;
  int workers = 1;
  std::string out = ".";
  bool plot_data = false;
  bool timings = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--variant", c.variant, "Spread set: ball, ip-mc, ip-rmc, ip-2m, ip-rmc2m, rothermel-oracle")
      ->check(CLI::IsMember({"ball", "ip-mc", "ip-rmc", "ip-2m", "ip-rmc2m", "rothermel-oracle"}));
  cmd->add_option("--flex", c.flex, "Flexibility setting: lf or hf")->check(CLI::IsMember({"lf", "hf"}));
  cmd->add_option("--hf-margin", c.hf_margin, "Extra wind radius of the hf setting (mi/hr)");
  cmd->add_option("--seed", c.seed, "Solver seed");
  cmd->add_option("--feas-tol", c.feas_tol, "Feasibility tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--opt-tol", c.opt_tol, "Optimality tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--time-limit", c.time_limit, "Per-solve time limit (s)")->check(CLI::PositiveNumber);
  cmd->add_option("--workers", c.workers, "Concurrent solves")->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "Output directory");
  cmd->add_flag("--plot-data", c.plot_data, "Also write per-figure CSVs");
  cmd->add_flag("--timings", c.timings, "Report wall-clock seconds (breaks byte-identical reruns)");
}

solver::SolveOptions solve_options(const Common& c) {
  solver::SolveOptions o;
  o.feas_tol = c.feas_tol;
  o.opt_tol = c.opt_tol;
  o.seed = c.seed;
  o.time_limit = c.time_limit;
  return o;
}

std::string path_in(const Common& c, const std::string& name) {
  return (std::filesystem::path(c.out) / name).string();
}

std::string seconds(const Common& c, double s) {
  if (!c.timings) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", s);
  return buf;
}

std::string elements_of(const Scenario& s, SubsetMask m) {
  std::string out;
  for (int e = 0; e < s.num_elements(); ++e) {
    if (!(m >> e & 1u)) continue;
    if (!out.empty()) out += '+';
    out += s.elements[e].id;
  }
  return out;
}

Scenario load_scenario(const std::string& path, const Common& c) {
  Scenario s = io::read_scenario(path);
  if (c.flex == "lf") s = with_flexibility(s, Flexibility::kLow);
  if (c.flex == "hf") s = with_flexibility(s, Flexibility::kHigh, c.hf_margin);
  s.validate();
  return s;
}

// Runs fn(0..n-1) on up to `workers` threads.
void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = next++; i < n; i = next++) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
        next = n;
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<int> element_lines(const Scenario& s, const grid::Grid& g) {
  std::vector<int> lines;
  for (const auto& el : s.elements) {
    int found = -1;
    for (const auto& ln : g.lines) {
      if (std::to_string(ln.id) == el.id) found = ln.id;
    }
    if (found < 0) throw Error("element '" + el.id + "' has no line with that id in the grid");
    lines.push_back(found);
  }
  return lines;
}

void check_periods(const Scenario& s, const grid::Grid& g) {
  if (g.periods != s.horizon() + 1) {
    throw Error("grid has " + std::to_string(g.periods) + " periods but the scenario horizon " +
                std::to_string(s.horizon()) + " needs " + std::to_string(s.horizon() + 1));
  }
}

std::vector<SubsetMask> weighted_subsets(const Scenario& s) {
  std::vector<SubsetMask> out;
  for (const auto& [key, c] : s.weights) {
    if (std::find(out.begin(), out.end(), key.first) == out.end()) out.push_back(key.first);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SubsetMask> all_subsets(const Scenario& s) {
  std::vector<SubsetMask> out;
  for (SubsetMask m = 1; m <= s.full_mask(); ++m) out.push_back(m);
  return out;
}

// Boundary of the period-0 spread sets around the ignition point, sampled by
// direction.
void write_spread_plot(const Scenario& s, const std::string& path) {
  const Point2 x0 = s.ignition_point;
  const Point2 w = s.spread.nominal_wind.front();
  const double v = s.spread.V;
  SpreadParams unit = s.spread;
  unit.B = 1.0;
  const Ball ball = ball_spread(w, x0, v, unit, norm(w));
  std::ostringstream out;
  out << "set,angle_deg,x,y\n";
  const double far = 2.0 * (unit.rate_bound(1.0) + ball.radius + norm(ball.center - x0)) + 1.0;
  for (int k = 0; k < 360; ++k) {
    const double a = k * std::numbers::pi / 180.0;
    const Point2 u{std::cos(a), std::sin(a)};
    const Point2 r = x0 + rothermel_rate(u, w, v, s.spread) * u;
    out << "rothermel," << k << ',' << io::fmt(r.x) << ',' << io::fmt(r.y) << '\n';
    double lo = 0.0, hi = far;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (angle_member(x0 + mid * u, x0, w, v, unit) ? lo : hi) = mid;
    }
    const Point2 g = x0 + lo * u;
    out << "angle," << k << ',' << io::fmt(g.x) << ',' << io::fmt(g.y) << '\n';
    const Point2 b = ball.center + ball.radius * u;
    out << "ball," << k << ',' << io::fmt(b.x) << ',' << io::fmt(b.y) << '\n';
  }
  io::write_text(path, out.str());
}

int cmd_regions(const Common& c, const std::string& raster_path, std::optional<double> wind,
                const std::string& scenario_path, int depth, double reg, std::ostream& out) {
  const regions::Raster raw = io::read_raster(raster_path);
  double knots = 0.0;
  if (wind) {
    knots = *wind;
  } else if (!scenario_path.empty()) {
    // Mean nominal speed of the low-flexibility schedule.
    const Scenario s = io::read_scenario(scenario_path);
    double sum = 0.0;
    for (const auto& w : s.spread.nominal_wind) sum += norm(w);
    knots = sum / s.spread.nominal_wind.size() / kMphPerKnot;
  }
  const regions::Raster r = regions::rescale_wfpi(raw, knots);
  const regions::RegionTree tree = regions::train_tree(r, depth, reg);
  const RegionSet rs = regions::extract_regions(tree, r.bbox());
  io::write_text(path_in(c, "regions.json"), io::format_regions(rs));
  if (c.plot_data) {
    std::ostringstream p;
    p << "x,y,wfpi,rescaled,label\n";
    for (int i = 0; i < r.nrows; ++i) {
      for (int j = 0; j < r.ncols; ++j) {
        if (r.missing(r.at(i, j))) continue;
        const Point2 x = r.center(i, j);
        p << io::fmt(x.x) << ',' << io::fmt(x.y) << ',' << io::fmt(raw.at(i, j)) << ','
          << io::fmt(r.at(i, j)) << ',' << io::fmt(tree.predict(x)) << '\n';
      }
    }
    io::write_text(path_in(c, "plot_regions.csv"), p.str());
  }
  out << "regions: " << rs.size() << " (wind " << io::fmt(knots) << " kn, tree mse "
      << io::fmt(regions::tree_mse(tree, r)) << ")\n";
  return kExitOk;
}

int cmd_screen(const Common& c, const std::string& scenario_path, std::ostream& out) {
  const Scenario s = load_scenario(scenario_path, c);
  const SpreadVariant variant = SpreadVariant::parse(c.variant);
  build_micp(s.restricted(s.full_mask()), variant);  // reject bad variant/scenario pairs early
  const auto masks = all_subsets(s);
  std::vector<MinTimeResult> res(masks.size());
  const auto opts = solve_options(c);
  parallel_for(static_cast<int>(masks.size()), c.workers, [&](int i) {
    res[i] = min_time_to_outage(s, masks[i], variant, opts);
  });

  bool ok = true;
  std::ostringstream csv;
  csv << "subset,elements,size,tstar,status,gap,seconds\n";
  for (std::size_t i = 0; i < masks.size(); ++i) {
    const auto& r = res[i];
    const bool solved = r.status == solver::Status::kOptimal || r.status == solver::Status::kInfeasible;
    ok = ok && solved;
    csv << masks[i] << ',' << elements_of(s, masks[i]) << ',' << std::popcount(masks[i]) << ','
        << (r.tstar ? std::to_string(*r.tstar) : "none") << ',' << solver::to_string(r.status) << ','
        << io::fmt(r.gap) << ',' << seconds(c, r.seconds) << '\n';
  }
  io::write_text(path_in(c, "screen.csv"), csv.str());

  // Post-hoc check: a subset is never reached before any of its subsets.
  auto key = [](const MinTimeResult& r) { return r.tstar ? *r.tstar : std::numeric_limits<int>::max(); };
  auto settled = [](const MinTimeResult& r) {
    return r.status == solver::Status::kOptimal || r.status == solver::Status::kInfeasible;
  };
  int violations = 0;
  for (std::size_t a = 0; a < masks.size(); ++a) {
    for (std::size_t b = 0; b < masks.size(); ++b) {
      if (a == b || (masks[a] & masks[b]) != masks[a] || !settled(res[a]) || !settled(res[b])) continue;
      if (key(res[a]) > key(res[b])) ++violations;
    }
  }
  if (c.plot_data) {
    std::ostringstream p;
    p << "size,subset,tstar\n";
    for (std::size_t i = 0; i < masks.size(); ++i) {
      p << std::popcount(masks[i]) << ',' << masks[i] << ','
        << (res[i].tstar ? std::to_string(*res[i].tstar) : "none") << '\n';
    }
    io::write_text(path_in(c, "plot_outage_times.csv"), p.str());
    write_spread_plot(s, path_in(c, "plot_spread_sets.csv"));
    const Scenario full = s.restricted(s.full_mask());
    io::write_text(path_in(c, "trajectory_full.json"), io::trajectory_json(full, res.back().trajectory));
  }
  out << "screened " << masks.size() << " subsets with " << variant.name()
      << "; monotonicity violations: " << violations << '\n';
  return ok ? kExitOk : kExitNotOptimal;
}

int cmd_sequence(const Common& c, const std::string& scenario_path, const std::string& grid_path,
                 bool every_subset, std::ostream& out) {
  const Scenario s = load_scenario(scenario_path, c);
  const grid::Grid g = io::read_grid(grid_path);
  check_periods(s, g);
  const auto lines = element_lines(s, g);
  const SpreadVariant variant = SpreadVariant::parse(c.variant);
  const auto subsets = every_subset ? all_subsets(s) : weighted_subsets(s);
  if (subsets.empty()) throw Error("no weighted subsets");

  const auto opts = solve_options(c);
  const grid::OpfResult base = grid::solve_base_opf(g, opts);
  if (base.status != solver::Status::kOptimal) {
    out << "base OPF ended with status " << solver::to_string(base.status) << '\n';
    return kExitNotOptimal;
  }
  // Weights in MWh of extra shed.
  auto lines_of = [&](SubsetMask m) {
    std::vector<int> v;
    for (int e = 0; e < s.num_elements(); ++e) {
      if (m >> e & 1u) v.push_back(lines[e]);
    }
    return v;
  };
  std::vector<SubsetMask> needed = subsets;
  if (std::find(needed.begin(), needed.end(), s.full_mask()) == needed.end()) needed.push_back(s.full_mask());
  std::vector<std::vector<double>> shed(needed.size(), std::vector<double>(g.periods, 0.0));
  parallel_for(static_cast<int>(needed.size() * g.periods), c.workers, [&](int k) {
    const int a = k / g.periods, t = k % g.periods;
    shed[a][t] = grid::contingency_recourse(g, base.base, lines_of(needed[a]), t, opts).extra_shed;
  });

  Scenario ws = s;
  ws.min_time = false;
  ws.weights.clear();
  std::ostringstream wcsv;
  wcsv << "subset,elements,period,shed_mwh\n";
  for (std::size_t a = 0; a < subsets.size(); ++a) {
    for (int t = 0; t < g.periods; ++t) {
      ws.weights[{subsets[a], t}] = shed[a][t];
      wcsv << subsets[a] << ',' << elements_of(s, subsets[a]) << ',' << t << ',' << io::fmt(shed[a][t]) << '\n';
    }
  }
  io::write_text(path_in(c, "weights.csv"), wcsv.str());

  const SequenceResult seq = max_shed_sequence(ws, variant, opts);
  const MinTimeResult mt = min_time_to_outage(s, s.full_mask(), variant, opts);
  double base_shed = 0.0;
  if (mt.tstar) {
    const auto& full = shed[std::find(needed.begin(), needed.end(), s.full_mask()) - needed.begin()];
    for (int t = *mt.tstar; t < g.periods; ++t) base_shed += full[t];
  }
  const bool ok = seq.status == solver::Status::kOptimal &&
                  (mt.status == solver::Status::kOptimal || mt.status == solver::Status::kInfeasible);

  std::ostringstream csv;
  csv << "variant,optimal_shed_mwh,base_shed_mwh,tstar_full,status,gap,seconds\n";
  csv << variant.name() << ',' << io::fmt(seq.objective) << ',' << io::fmt(base_shed) << ','
      << (mt.tstar ? std::to_string(*mt.tstar) : "none") << ',' << solver::to_string(seq.status) << ','
      << io::fmt(seq.gap) << ',' << seconds(c, seq.seconds) << '\n';
  io::write_text(path_in(c, "sequence.csv"), csv.str());
  if (seq.status == solver::Status::kOptimal) {
    std::ostringstream counts;
    counts << "period,outaged\n";
    for (int t = 0; t < g.periods; ++t) counts << t << ',' << std::popcount(seq.trajectory.outaged_at(t)) << '\n';
    io::write_text(path_in(c, "outage_counts.csv"), counts.str());
    io::write_text(path_in(c, "trajectory.json"), io::trajectory_json(s, seq.trajectory));
    io::write_text(path_in(c, "trajectory.csv"), io::trajectory_csv(s, seq.trajectory));
    if (c.plot_data) {
      io::write_text(path_in(c, "plot_outage_counts.csv"), counts.str());
      write_spread_plot(s, path_in(c, "plot_spread_sets.csv"));
    }
  }
  out << "sequence " << variant.name() << ": optimal " << io::fmt(seq.objective) << " MWh, base "
      << io::fmt(base_shed) << " MWh (" << solver::to_string(seq.status) << ")\n";
  return ok ? kExitOk : kExitNotOptimal;
}

std::vector<std::pair<unsigned, std::optional<int>>> read_tstar(const std::string& path) {
  std::istringstream in(io::read_text(path));
  std::string line;
  if (!std::getline(in, line)) throw Error(path + ": empty t* table");
  std::vector<std::string> head;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) head.push_back(cell);
  }
  const auto col = [&](const char* name) {
    const auto it = std::find(head.begin(), head.end(), name);
    if (it == head.end()) throw Error(path + ": missing column '" + name + "'");
    return static_cast<std::size_t>(it - head.begin());
  };
  const std::size_t cm = col("subset"), ct = col("tstar");
  std::vector<std::pair<unsigned, std::optional<int>>> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() <= std::max(cm, ct)) throw Error(path + ": short row '" + line + "'");
    try {
      const unsigned mask = static_cast<unsigned>(std::stoul(cells[cm]));
      std::optional<int> t;
      if (cells[ct] != "none") t = std::stoi(cells[ct]);
      out.push_back({mask, t});
    } catch (const std::logic_error&) {
      throw Error(path + ": bad row '" + line + "'");
    }
  }
  return out;
}

int cmd_opf(const Common& c, const std::string& grid_path, const std::string& scenario_path,
            const std::string& mode, const std::string& tstar_path, std::ostream& out) {
  const grid::Grid g = io::read_grid(grid_path);
  std::vector<int> lines;
  std::vector<SubsetMask> subsets;
  std::optional<Scenario> s;
  if (!scenario_path.empty()) {
    s = io::read_scenario(scenario_path);
    check_periods(*s, g);
    lines = element_lines(*s, g);
    subsets = weighted_subsets(*s);
    if (subsets.empty()) subsets = all_subsets(*s);
  }
  std::string tpath = tstar_path;
  if (mode.rfind("threshold:", 0) == 0) tpath = mode.substr(10);
  if (mode != "none" && !s) throw Error("contingency mode '" + mode + "' needs --scenario");
  if (mode != "none" && mode != "all" && mode.rfind("threshold:", 0) != 0) {
    throw Error("contingency mode must be none, all or threshold:<tstar.csv>");
  }
  std::optional<std::vector<std::pair<unsigned, std::optional<int>>>> tstar;
  if (!tpath.empty()) {
    if (!s) throw Error("a t* table needs --scenario");
    tstar = read_tstar(tpath);
  }
  const grid::ContingencySet k_all = s ? grid::all_contingencies(subsets, lines, g.periods) : grid::ContingencySet{};
  const grid::ContingencySet k_th =
      tstar ? grid::threshold_contingencies(*tstar, lines, g.periods) : grid::ContingencySet{};
  const grid::ContingencySet& k = mode == "none" ? grid::ContingencySet{} : mode == "all" ? k_all : k_th;

  const auto opts = solve_options(c);
  const grid::OpfResult r = grid::solve_scopf(g, mode == "none" ? grid::ContingencySet{} : k, opts);
  if (r.status != solver::Status::kOptimal) {
    out << "OPF ended with status " << solver::to_string(r.status) << '\n';
    return kExitNotOptimal;
  }
  const std::string shed_th = tstar ? io::fmt(grid::contingency_shed(g, r.base, k_th, opts)) : "NA";
  const std::string shed_all = s ? io::fmt(grid::contingency_shed(g, r.base, k_all, opts)) : "NA";

  std::ostringstream csv;
  csv << "# contingencies counts (subset, period) pairs; 'all' uses the scenario's weighted subsets, "
         "or every nonempty subset when it has no weight table, at every period\n";
  csv << "mode,contingencies,seconds,base_cost_per_period,objective,shed_threshold_mwh,shed_all_mwh\n";
  csv << (mode.rfind("threshold:", 0) == 0 ? "threshold" : mode) << ',' << (mode == "none" ? 0 : k.size())
      << ',' << seconds(c, r.seconds) << ',' << io::fmt(r.base_cost_per_period) << ','
      << io::fmt(r.objective) << ',' << shed_th << ',' << shed_all << '\n';
  io::write_text(path_in(c, "opf.csv"), csv.str());

  std::ostringstream d;
  d << "period,bus,shed_mw\n";
  for (int t = 0; t < g.periods; ++t) {
    for (std::size_t i = 0; i < g.buses.size(); ++i) {
      d << t << ',' << g.buses[i].id << ',' << io::fmt(r.base.shed[i][t]) << '\n';
    }
  }
  io::write_text(path_in(c, "shed.csv"), d.str());
  std::ostringstream gen;
  gen << "period,unit,bus,type,mw\n";
  for (int t = 0; t < g.periods; ++t) {
    for (std::size_t u = 0; u < g.generators.size(); ++u) {
      gen << t << ',' << u << ',' << g.generators[u].bus << ',' << g.generators[u].type << ','
          << io::fmt(r.base.generation[u][t]) << '\n';
    }
  }
  io::write_text(path_in(c, "dispatch.csv"), gen.str());
  std::ostringstream f;
  f << "period,line,flow_mw\n";
  for (int t = 0; t < g.periods; ++t) {
    for (std::size_t j = 0; j < g.lines.size(); ++j) {
      f << t << ',' << g.lines[j].id << ',' << io::fmt(r.base.flow[j][t]) << '\n';
    }
  }
  io::write_text(path_in(c, "flows.csv"), f.str());
  std::ostringstream cc;
  cc << "subset,period,cost\n";
  if (mode != "none") {
    for (std::size_t n = 0; n < k.size(); ++n) {
      cc << k[n].mask << ',' << k[n].period << ',' << io::fmt(r.contingency_costs[n]) << '\n';
    }
  }
  io::write_text(path_in(c, "contingency_costs.csv"), cc.str());
  out << "opf " << mode << ": " << (mode == "none" ? 0 : k.size()) << " contingencies, base cost "
      << io::fmt(r.base_cost_per_period) << " $/period\n";
  return kExitOk;
}

int cmd_export(const Common& c, const std::string& scenario_path, SubsetMask subset, std::ostream& out) {
  const Scenario s = load_scenario(scenario_path, c);
  const SpreadVariant variant = SpreadVariant::parse(c.variant);
  const SubsetMask m = subset == 0 ? s.full_mask() : subset;
  if ((m & ~s.full_mask()) != 0) throw Error("subset " + std::to_string(m) + " names missing elements");
  const Scenario target = s.min_time ? s.restricted(m) : s;
  const conic::ConicModel model = build_micp(target, variant);
  conic::export_model(model, path_in(c, "model.txt"));
  if (c.plot_data) write_spread_plot(s, path_in(c, "plot_spread_sets.csv"));
  out << "exported " << variant.name() << " model: " << model.num_variables() << " variables, "
      << model.num_binaries() << " binaries, " << model.linear().size() << " linear, "
      << model.socs().size() << " SOC\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adversarial wildfire spread and grid contingency analysis", "wildfire"};
  app.require_subcommand(1);
  Common c;
  std::string raster, scenario, grid_file, mode = "none", tstar;
  std::optional<double> wind;
  int depth = 3;
  double reg = 25.0;
  bool every = false;
  SubsetMask subset = 0;

  auto* regions_cmd = app.add_subcommand("regions", "Build rate-of-spread regions from a WFPI raster");
  regions_cmd->add_option("--raster", raster, "ASCII grid raster")->required();
  regions_cmd->add_option("--wind", wind, "Wind speed in knots for the rescaling");
  regions_cmd->add_option("--scenario", scenario, "Take the wind speed from this scenario's mean nominal wind");
  regions_cmd->add_option("--depth", depth, "Tree depth")->check(CLI::NonNegativeNumber);
  regions_cmd->add_option("--reg", reg, "Split penalty")->check(CLI::NonNegativeNumber);
  add_common(regions_cmd, c);

  auto* screen_cmd = app.add_subcommand("screen", "Minimum time to outage for every element subset");
  screen_cmd->add_option("--scenario", scenario, "Scenario JSON")->required();
  add_common(screen_cmd, c);

  auto* seq_cmd = app.add_subcommand("sequence", "Outage sequence with the largest load shed");
  seq_cmd->add_option("--scenario", scenario, "Scenario JSON")->required();
  seq_cmd->add_option("--grid", grid_file, "Grid JSON")->required();
  seq_cmd->add_flag("--all-subsets", every, "Weight every nonempty subset, not only those in the weight table");
  add_common(seq_cmd, c);

  auto* opf_cmd = app.add_subcommand("opf", "Security-constrained DC OPF");
  opf_cmd->add_option("--grid", grid_file, "Grid JSON")->required();
  opf_cmd->add_option("--scenario", scenario, "Scenario JSON naming the contingency elements");
  opf_cmd->add_option("--contingencies", mode, "none, all or threshold:<tstar.csv>");
  opf_cmd->add_option("--tstar", tstar, "t* table used to report threshold-set shed");
  add_common(opf_cmd, c);

  auto* export_cmd = app.add_subcommand("export", "Write the mixed-integer model to a text file");
  export_cmd->add_option("--scenario", scenario, "Scenario JSON")->required();
  export_cmd->add_option("--subset", subset, "Element bitmask for the min-time model (default: all)");
  add_common(export_cmd, c);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  try {
    if (regions_cmd->parsed()) return cmd_regions(c, raster, wind, scenario, depth, reg, out);
    if (screen_cmd->parsed()) return cmd_screen(c, scenario, out);
    if (seq_cmd->parsed()) return cmd_sequence(c, scenario, grid_file, every, out);
    if (opf_cmd->parsed()) return cmd_opf(c, grid_file, scenario, mode, tstar, out);
    if (export_cmd->parsed()) return cmd_export(c, scenario, subset, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace wildfire::cli
