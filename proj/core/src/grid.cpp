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

#include "wildfire/grid.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "wildfire/error.hpp"

namespace wildfire::grid {

using conic::AffineExpr;
using conic::ConicModel;
using conic::kInf;
using conic::Sense;
using conic::Term;

namespace {

using Table = std::vector<std::vector<double>>;
using Index = std::vector<std::vector<int>>;

void check_series(const std::vector<double>& v, int periods, const std::string& what) {
  if (static_cast<int>(v.size()) != periods) {
    throw Error(what + " has " + std::to_string(v.size()) + " periods, expected " +
                std::to_string(periods));
  }
  for (double x : v) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw Error(what + " has a negative or non-finite entry");
  }
}

std::string bus_name(const Grid& g, int i) { return std::to_string(g.buses[i].id); }
std::string line_name(const Grid& g, int j) { return std::to_string(g.lines[j].id); }

// reference[i] is true for the lowest-id bus of each connected component.
std::vector<bool> reference_buses(const Grid& g, const std::vector<bool>& out) {
  const int n = static_cast<int>(g.buses.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (std::size_t j = 0; j < g.lines.size(); ++j) {
    if (out[j]) continue;
    const int a = find(g.bus_index(g.lines[j].from));
    const int b = find(g.bus_index(g.lines[j].to));
    if (a != b) parent[a] = b;
  }
  std::vector<int> lowest(n, -1);
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (lowest[r] < 0 || g.buses[i].id < g.buses[lowest[r]].id) lowest[r] = i;
  }
  std::vector<bool> ref(n, false);
  for (int i = 0; i < n; ++i) {
    if (lowest[i] >= 0) ref[lowest[i]] = true;
  }
  return ref;
}

struct BaseVars {
  Index gen, stored, charge, discharge, shed, flow, angle;
};

// Base quantities a recourse problem is bounded by, per bus.
struct Link {
  std::vector<AffineExpr> shed;
  std::vector<AffineExpr> injection;
  std::vector<AffineExpr> charging;
};

struct RecourseVars {
  std::vector<int> shed, injection, flow, angle;
};

class Builder {
 public:
  explicit Builder(const Grid& g) : g_(g) {
    for (std::size_t j = 0; j < g.lines.size(); ++j) {
      from_.push_back(g.bus_index(g.lines[j].from));
      to_.push_back(g.bus_index(g.lines[j].to));
    }
  }

  BaseVars add_base(double weight) {
    const int T = g_.periods;
    const int nb = static_cast<int>(g_.buses.size());
    BaseVars v;
    auto grid_of = [&](std::size_t n) { return Index(n, std::vector<int>(T, -1)); };
    v.gen = grid_of(g_.generators.size());
    v.stored = grid_of(g_.storage.size());
    v.charge = grid_of(g_.storage.size());
    v.discharge = grid_of(g_.storage.size());
    v.shed = grid_of(nb);
    v.flow = grid_of(g_.lines.size());
    v.angle = grid_of(nb);
    const std::vector<bool> ref = reference_buses(g_, std::vector<bool>(g_.lines.size(), false));
    for (int t = 0; t < T; ++t) {
      const std::string ts = std::to_string(t);
      for (std::size_t k = 0; k < g_.generators.size(); ++k) {
        const auto& gen = g_.generators[k];
        v.gen[k][t] = m_.add_variable("pg[" + std::to_string(k) + "," + ts + "]", 0.0, gen.cap[t]);
        obj_.push_back({v.gen[k][t], weight * gen.cost});
      }
      for (std::size_t s = 0; s < g_.storage.size(); ++s) {
        const auto& st = g_.storage[s];
        const std::string key = std::to_string(s) + "," + ts + "]";
        v.stored[s][t] = m_.add_variable("pb[" + key, 0.0, st.energy_cap[t]);
        v.charge[s][t] = m_.add_variable("pch[" + key, 0.0, st.power_cap[t]);
        v.discharge[s][t] = m_.add_variable("pdis[" + key, 0.0, st.power_cap[t]);
        obj_.push_back({v.discharge[s][t], weight * st.cost});
      }
      for (int i = 0; i < nb; ++i) {
        const std::string key = bus_name(g_, i) + "," + ts + "]";
        v.shed[i][t] = m_.add_variable("ps[" + key, 0.0, g_.demand(i, t));
        obj_.push_back({v.shed[i][t], weight * g_.shed_cost});
        const double lim = ref[i] ? 0.0 : kInf;
        v.angle[i][t] = m_.add_variable("theta[" + key, -lim, lim);
      }
      for (std::size_t j = 0; j < g_.lines.size(); ++j) {
        const auto& ln = g_.lines[j];
        v.flow[j][t] = m_.add_variable("f[" + line_name(g_, j) + "," + ts + "]", -ln.limit, ln.limit);
        m_.add_linear({{v.flow[j][t], 1.0},
                       {v.angle[to_[j]][t], -1.0 / ln.reactance},
                       {v.angle[from_[j]][t], 1.0 / ln.reactance}},
                      Sense::kEqual, 0.0);
      }
    }
    for (std::size_t k = 0; k < g_.generators.size(); ++k) {
      if (!std::isfinite(g_.generators[k].energy_cap)) continue;
      std::vector<Term> row;
      for (int t = 0; t < T; ++t) row.push_back({v.gen[k][t], 1.0});
      m_.add_linear(row, Sense::kLessEqual, g_.generators[k].energy_cap);
    }
    // Cyclic storage: the period before the first is the last.
    for (std::size_t s = 0; s < g_.storage.size(); ++s) {
      for (int t = 0; t < T; ++t) {
        const int prev = (t + T - 1) % T;
        std::vector<Term> row = {{v.stored[s][t], 1.0},
                                 {v.charge[s][t], -1.0},
                                 {v.discharge[s][t], 1.0}};
        if (prev != t) row.push_back({v.stored[s][prev], -1.0});
        m_.add_linear(row, Sense::kEqual, 0.0);
      }
    }
    for (int t = 0; t < T; ++t) {
      const Link link = link_from(v, t);
      for (int i = 0; i < nb; ++i) {
        AffineExpr e = link.injection[i];
        e.add(link.charging[i], -1.0);
        e.add(v.shed[i][t], 1.0);
        add_net_inflow(e, v.flow, t, i);
        m_.add_linear(e, Sense::kEqual, g_.demand(i, t));
      }
    }
    return v;
  }

  Link link_from(const BaseVars& v, int t) const {
    const int nb = static_cast<int>(g_.buses.size());
    Link l{std::vector<AffineExpr>(nb), std::vector<AffineExpr>(nb), std::vector<AffineExpr>(nb)};
    for (int i = 0; i < nb; ++i) l.shed[i].add(v.shed[i][t], 1.0);
    for (std::size_t k = 0; k < g_.generators.size(); ++k) {
      l.injection[g_.bus_index(g_.generators[k].bus)].add(v.gen[k][t], 1.0);
    }
    for (std::size_t s = 0; s < g_.storage.size(); ++s) {
      const auto& st = g_.storage[s];
      const int i = g_.bus_index(st.bus);
      l.injection[i].add(v.discharge[s][t], st.eta_discharge);
      l.charging[i].add(v.charge[s][t], 1.0 / st.eta_charge);
    }
    return l;
  }

  Link link_from(const BaseDispatch& d, int t) const {
    const int nb = static_cast<int>(g_.buses.size());
    Link l{std::vector<AffineExpr>(nb), std::vector<AffineExpr>(nb), std::vector<AffineExpr>(nb)};
    for (int i = 0; i < nb; ++i) l.shed[i].constant = d.shed[i][t];
    for (std::size_t k = 0; k < g_.generators.size(); ++k) {
      l.injection[g_.bus_index(g_.generators[k].bus)].constant += d.generation[k][t];
    }
    for (std::size_t s = 0; s < g_.storage.size(); ++s) {
      const auto& st = g_.storage[s];
      const int i = g_.bus_index(st.bus);
      l.injection[i].constant += st.eta_discharge * d.discharge[s][t];
      l.charging[i].constant += d.charge[s][t] / st.eta_charge;
    }
    return l;
  }

  RecourseVars add_recourse(const Link& link, const std::vector<int>& line_ids, int t,
                            double weight, const std::string& prefix) {
    const int nb = static_cast<int>(g_.buses.size());
    std::vector<bool> out(g_.lines.size(), false);
    for (int id : line_ids) {
      const int j = g_.line_index(id);
      if (j < 0) throw Error("contingency references unknown line " + std::to_string(id));
      out[j] = true;
    }
    const std::vector<bool> ref = reference_buses(g_, out);
    RecourseVars r;
    for (int i = 0; i < nb; ++i) {
      const std::string key = "[" + bus_name(g_, i) + "]";
      const int cs = m_.add_variable(prefix + ".ps" + key, 0.0, kInf);
      const int cg = m_.add_variable(prefix + ".pg" + key, 0.0, kInf);
      const double lim = ref[i] ? 0.0 : kInf;
      r.shed.push_back(cs);
      r.injection.push_back(cg);
      r.angle.push_back(m_.add_variable(prefix + ".theta" + key, -lim, lim));
      // Shed at least the base shed, at most demand plus base charging.
      AffineExpr lo = AffineExpr::var(cs);
      lo.add(link.shed[i], -1.0);
      m_.add_linear(lo, Sense::kGreaterEqual, 0.0);
      AffineExpr hi = AffineExpr::var(cs);
      hi.add(link.charging[i], -1.0);
      m_.add_linear(hi, Sense::kLessEqual, g_.demand(i, t));
      AffineExpr inj = AffineExpr::var(cg);
      inj.add(link.injection[i], -1.0);
      m_.add_linear(inj, Sense::kLessEqual, 0.0);
      obj_.push_back({cs, weight * g_.shed_cost});
      for (const Term& term : link.shed[i].terms) {
        obj_.push_back({term.var, -weight * g_.shed_cost * term.coef});
      }
    }
    for (std::size_t j = 0; j < g_.lines.size(); ++j) {
      const auto& ln = g_.lines[j];
      const double lim = out[j] ? 0.0 : ln.limit;
      const int f = m_.add_variable(prefix + ".f[" + line_name(g_, j) + "]", -lim, lim);
      r.flow.push_back(f);
      if (!out[j]) {
        m_.add_linear({{f, 1.0},
                       {r.angle[to_[j]], -1.0 / ln.reactance},
                       {r.angle[from_[j]], 1.0 / ln.reactance}},
                      Sense::kEqual, 0.0);
      }
    }
    for (int i = 0; i < nb; ++i) {
      AffineExpr e = AffineExpr::var(r.shed[i]);
      e.add(r.injection[i], 1.0);
      e.add(link.charging[i], -1.0);
      for (std::size_t j = 0; j < g_.lines.size(); ++j) {
        if (to_[j] == i) e.add(r.flow[j], 1.0);
        if (from_[j] == i) e.add(r.flow[j], -1.0);
      }
      m_.add_linear(e, Sense::kEqual, g_.demand(i, t));
    }
    return r;
  }

  ConicModel& finish() {
    m_.set_objective(conic::ObjectiveSense::kMinimize, obj_);
    return m_;
  }

 private:
  void add_net_inflow(AffineExpr& e, const Index& flow, int t, int i) const {
    for (std::size_t j = 0; j < g_.lines.size(); ++j) {
      if (to_[j] == i) e.add(flow[j][t], 1.0);
      if (from_[j] == i) e.add(flow[j][t], -1.0);
    }
  }

  const Grid& g_;
  std::vector<int> from_, to_;
  ConicModel m_;
  std::vector<Term> obj_;
};

Table gather(const Index& idx, const std::vector<double>& x) {
  Table out(idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (int v : idx[a]) out[a].push_back(x[v]);
  }
  return out;
}

BaseDispatch extract(const Grid& g, const BaseVars& v, const std::vector<double>& x) {
  BaseDispatch d;
  d.generation = gather(v.gen, x);
  d.stored = gather(v.stored, x);
  d.charge = gather(v.charge, x);
  d.discharge = gather(v.discharge, x);
  d.shed = gather(v.shed, x);
  d.flow = gather(v.flow, x);
  d.angle = gather(v.angle, x);
  for (int t = 0; t < g.periods; ++t) {
    for (std::size_t k = 0; k < g.generators.size(); ++k) d.cost += g.generators[k].cost * d.generation[k][t];
    for (std::size_t s = 0; s < g.storage.size(); ++s) d.cost += g.storage[s].cost * d.discharge[s][t];
    for (std::size_t i = 0; i < g.buses.size(); ++i) d.cost += g.shed_cost * d.shed[i][t];
  }
  return d;
}

Recourse extract(const Grid& g, const Link& link, const RecourseVars& r,
                 const std::vector<double>& x) {
  Recourse out;
  for (std::size_t i = 0; i < g.buses.size(); ++i) {
    out.shed.push_back(x[r.shed[i]]);
    out.injection.push_back(x[r.injection[i]]);
    out.angle.push_back(x[r.angle[i]]);
    out.extra_shed += x[r.shed[i]] - link.shed[i].eval(x);
  }
  for (int f : r.flow) out.flow.push_back(x[f]);
  out.extra_shed = std::max(0.0, out.extra_shed);
  out.cost = g.shed_cost * out.extra_shed;
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void Grid::validate() const {
  if (periods < 1) throw Error("grid needs at least one period");
  if (buses.empty()) throw Error("grid has no buses");
  std::set<int> ids;
  for (const auto& b : buses) {
    if (!ids.insert(b.id).second) throw Error("duplicate bus id " + std::to_string(b.id));
  }
  std::set<int> lids;
  for (const auto& l : lines) {
    const std::string name = "line " + std::to_string(l.id);
    if (!lids.insert(l.id).second) throw Error("duplicate " + name);
    if (!ids.count(l.from) || !ids.count(l.to)) throw Error(name + " references an undeclared bus");
    if (l.from == l.to) throw Error(name + " is a self loop");
    if (!(l.reactance > 0.0)) throw Error(name + " needs a positive reactance");
    if (!(l.limit >= 0.0)) throw Error(name + " has a negative flow limit");
  }
  for (std::size_t k = 0; k < generators.size(); ++k) {
    const auto& gen = generators[k];
    const std::string name = "generator " + std::to_string(k);
    if (!ids.count(gen.bus)) throw Error(name + " references an undeclared bus");
    check_series(gen.cap, periods, name + " capacity");
    if (!(gen.energy_cap >= 0.0)) throw Error(name + " has a negative energy cap");
    if (!std::isfinite(gen.cost)) throw Error(name + " has a non-finite cost");
  }
  for (std::size_t s = 0; s < storage.size(); ++s) {
    const auto& st = storage[s];
    const std::string name = "storage " + std::to_string(s);
    if (!ids.count(st.bus)) throw Error(name + " references an undeclared bus");
    check_series(st.energy_cap, periods, name + " energy cap");
    check_series(st.power_cap, periods, name + " power cap");
    if (!(st.eta_charge > 0.0 && st.eta_charge <= 1.0) ||
        !(st.eta_discharge > 0.0 && st.eta_discharge <= 1.0)) {
      throw Error(name + " efficiencies must lie in (0, 1]");
    }
    if (!std::isfinite(st.cost)) throw Error(name + " has a non-finite cost");
  }
  for (const auto& ld : loads) {
    if (!ids.count(ld.bus)) throw Error("load references undeclared bus " + std::to_string(ld.bus));
    check_series(ld.mw, periods, "load at bus " + std::to_string(ld.bus));
  }
  if (!(shed_cost >= 0.0) || !std::isfinite(shed_cost)) throw Error("shed cost must be nonnegative");
}

int Grid::bus_index(int id) const {
  for (std::size_t i = 0; i < buses.size(); ++i) {
    if (buses[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

int Grid::line_index(int id) const {
  for (std::size_t j = 0; j < lines.size(); ++j) {
    if (lines[j].id == id) return static_cast<int>(j);
  }
  return -1;
}

double Grid::demand(int i, int t) const {
  double d = 0.0;
  for (const auto& ld : loads) {
    if (ld.bus == buses[i].id) d += ld.mw[t];
  }
  return d;
}

double BaseDispatch::total_shed() const {
  double s = 0.0;
  for (const auto& row : shed) {
    for (double v : row) s += v;
  }
  return s;
}

double balance_residual(const Grid& g, const BaseDispatch& d) {
  double worst = 0.0;
  for (int t = 0; t < g.periods; ++t) {
    std::vector<double> net(g.buses.size(), 0.0);
    for (std::size_t i = 0; i < g.buses.size(); ++i) net[i] = d.shed[i][t] - g.demand(static_cast<int>(i), t);
    for (std::size_t k = 0; k < g.generators.size(); ++k) {
      net[g.bus_index(g.generators[k].bus)] += d.generation[k][t];
    }
    for (std::size_t s = 0; s < g.storage.size(); ++s) {
      const auto& st = g.storage[s];
      net[g.bus_index(st.bus)] += st.eta_discharge * d.discharge[s][t] - d.charge[s][t] / st.eta_charge;
    }
    for (std::size_t j = 0; j < g.lines.size(); ++j) {
      net[g.bus_index(g.lines[j].to)] += d.flow[j][t];
      net[g.bus_index(g.lines[j].from)] -= d.flow[j][t];
    }
    for (double r : net) worst = std::max(worst, std::abs(r));
  }
  return worst;
}

ConicModel build_base_opf(const Grid& g) {
  g.validate();
  Builder b(g);
  b.add_base(1.0);
  return b.finish();
}

OpfResult solve_base_opf(const Grid& g, const solver::SolveOptions& opts) {
  return solve_scopf(g, {}, opts);
}

ConicModel build_recourse(const Grid& g, const BaseDispatch& base,
                          const std::vector<int>& line_ids, int t) {
  g.validate();
  if (t < 0 || t >= g.periods) throw Error("contingency period " + std::to_string(t) + " is outside the horizon");
  Builder b(g);
  b.add_recourse(b.link_from(base, t), line_ids, t, 1.0, "k");
  return b.finish();
}

Recourse contingency_recourse(const Grid& g, const BaseDispatch& base,
                              const std::vector<int>& line_ids, int t,
                              const solver::SolveOptions& opts) {
  g.validate();
  if (t < 0 || t >= g.periods) throw Error("contingency period " + std::to_string(t) + " is outside the horizon");
  Builder b(g);
  const Link link = b.link_from(base, t);
  const RecourseVars r = b.add_recourse(link, line_ids, t, 1.0, "k");
  const ConicModel& m = b.finish();
  const solver::Solution sol = solver::solve_lp(m, opts);
  if (sol.status != solver::Status::kOptimal) {
    throw Error(std::string("recourse LP ended with status ") + solver::to_string(sol.status));
  }
  return extract(g, link, r, sol.values);
}

double contingency_cost(const Grid& g, const BaseDispatch& base, const std::vector<int>& line_ids,
                        int t, const solver::SolveOptions& opts) {
  if (line_ids.empty()) return 0.0;
  return contingency_recourse(g, base, line_ids, t, opts).cost;
}

OpfResult solve_scopf(const Grid& g, const ContingencySet& k, const solver::SolveOptions& opts,
                      const ScopfOptions& sopts) {
  g.validate();
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& c : k) {
    if (c.period < 0 || c.period >= g.periods) {
      throw Error("contingency period " + std::to_string(c.period) + " is outside the horizon");
    }
  }
  const double wk = sopts.contingency_weight.value_or(k.empty() ? 0.0 : 1.0 / k.size());
  Builder b(g);
  const BaseVars base = b.add_base(1.0 / g.periods);
  std::vector<Link> links;
  std::vector<RecourseVars> rec;
  for (std::size_t n = 0; n < k.size(); ++n) {
    links.push_back(b.link_from(base, k[n].period));
    rec.push_back(b.add_recourse(links.back(), k[n].lines, k[n].period, wk, "k" + std::to_string(n)));
  }
  const ConicModel& m = b.finish();
  const solver::Solution sol = solver::solve_lp(m, opts);
  OpfResult out;
  out.status = sol.status;
  out.seconds = seconds_since(t0);
  if (sol.status != solver::Status::kOptimal) return out;
  out.base = extract(g, base, sol.values);
  out.base_cost_per_period = out.base.cost / g.periods;
  out.objective = out.base_cost_per_period;
  for (std::size_t n = 0; n < k.size(); ++n) {
    out.recourse.push_back(extract(g, links[n], rec[n], sol.values));
    out.contingency_costs.push_back(out.recourse.back().cost);
    out.objective += wk * out.recourse.back().cost;
  }
  return out;
}

double contingency_shed(const Grid& g, const BaseDispatch& base, const ContingencySet& k,
                        const solver::SolveOptions& opts) {
  double total = 0.0;
  for (const auto& c : k) {
    if (c.lines.empty()) continue;
    total += contingency_recourse(g, base, c.lines, c.period, opts).extra_shed;
  }
  return total;
}

namespace {

std::vector<int> lines_of(unsigned mask, const std::vector<int>& element_lines) {
  std::vector<int> out;
  for (std::size_t e = 0; e < element_lines.size(); ++e) {
    if (mask >> e & 1u) out.push_back(element_lines[e]);
  }
  if (out.empty() || mask >> element_lines.size() != 0) {
    throw Error("contingency subset " + std::to_string(mask) + " does not match the element list");
  }
  return out;
}

}  // namespace

ContingencySet all_contingencies(const std::vector<unsigned>& subsets,
                                 const std::vector<int>& element_lines, int periods) {
  ContingencySet k;
  for (unsigned mask : subsets) {
    const std::vector<int> lines = lines_of(mask, element_lines);
    for (int t = 0; t < periods; ++t) k.push_back({lines, t, mask});
  }
  return k;
}

ContingencySet threshold_contingencies(
    const std::vector<std::pair<unsigned, std::optional<int>>>& tstar,
    const std::vector<int>& element_lines, int periods) {
  ContingencySet k;
  for (const auto& [mask, t0] : tstar) {
    const std::vector<int> lines = lines_of(mask, element_lines);
    if (!t0) continue;
    for (int t = std::max(0, *t0); t < periods; ++t) k.push_back({lines, t, mask});
  }
  return k;
}

Selection select_elements(const Grid& g, const PolytopeH& perimeter, double buffer,
                          const BaseDispatch& base, int count, const solver::SolveOptions& opts) {
  g.validate();
  std::vector<std::pair<double, int>> ranked;
  for (const auto& ln : g.lines) {
    const Point2 a = g.buses[g.bus_index(ln.from)].pos;
    const Point2 b = g.buses[g.bus_index(ln.to)].pos;
    if (segment_polytope_distance(a, b, perimeter) > buffer) continue;
    double impact = 0.0;
    for (int t = 0; t < g.periods; ++t) impact += contingency_cost(g, base, {ln.id}, t, opts);
    ranked.emplace_back(impact, ln.id);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return x.second < y.second;
  });
  Selection sel;
  if (static_cast<int>(ranked.size()) < count) {
    sel.warnings.push_back("only " + std::to_string(ranked.size()) + " lines lie within " +
                           std::to_string(buffer) + " of the perimeter; " +
                           std::to_string(count) + " requested");
  }
  for (int n = 0; n < count && n < static_cast<int>(ranked.size()); ++n) {
    sel.impact.push_back(ranked[n].first);
    sel.lines.push_back(ranked[n].second);
  }
  return sel;
}

}  // namespace wildfire::grid
