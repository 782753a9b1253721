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


#include "wildfire/adversary.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "wildfire/error.hpp"

namespace wildfire {

using conic::AffineExpr;
using conic::ConicModel;
using conic::kInf;
using conic::RationalExponent;
using conic::Sense;

namespace {

constexpr int kPriorityOutage = 3;
constexpr int kPriorityCombo = 2;
constexpr int kPriorityRegion = 1;

std::string label(const char* base, std::initializer_list<int> idx) {
  std::string s = base;
  s += '[';
  bool first = true;
  for (int i : idx) {
    if (!first) s += ',';
    s += std::to_string(i);
    first = false;
  }
  s += ']';
  return s;
}

struct Exponents {
  RationalExponent rate;  // wind exponent
  RationalExponent root;  // 1 / (1 + exponent)
};

Exponents inner_exponents(double b) {
  return {conic::rationalize(b, 4), conic::rationalize(1.0 / (1.0 + b), 4)};
}

double clock_seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

// Cost table actually used by the objective: the min-time indicator weights
// or the nonzero entries of the scenario table.
std::map<std::pair<SubsetMask, int>, double> objective_weights(const Scenario& s) {
  std::map<std::pair<SubsetMask, int>, double> out;
  if (s.min_time) {
    for (int t = 0; t <= s.horizon(); ++t) out[{s.full_mask(), t}] = 1.0;
    return out;
  }
  for (const auto& [key, c] : s.weights) {
    if (c != 0.0) out[key] = c;
  }
  return out;
}

}  // namespace

void Scenario::validate() const {
  spread.validate();
  const int T = horizon();
  if (T < 0) throw Error("scenario horizon is negative");
  if (elements.empty()) throw Error("scenario has no elements");
  if (num_elements() > kMaxElements) {
    throw Error("scenario has " + std::to_string(num_elements()) + " elements; at most " +
                std::to_string(kMaxElements) + " are supported");
  }
  if (regions.size() == 0) throw Error("scenario has no regions");
  for (const auto& el : elements) {
    if (el.shape.vertices().empty()) throw Error("element '" + el.id + "' has no vertices");
    for (const auto& v : el.shape.vertices()) {
      if (!regions.in_bbox(v)) {
        throw Error("element '" + el.id + "' lies outside the region bounding box");
      }
    }
  }
  if (ignition == IgnitionMode::kFixed && !regions.in_bbox(ignition_point)) {
    throw Error("ignition point lies outside the region bounding box");
  }
  for (const auto& [key, c] : weights) {
    if (key.first == 0 || (key.first & ~full_mask()) != 0) {
      throw Error("weight subset " + std::to_string(key.first) + " does not name scenario elements");
    }
    if (key.second < 0 || key.second > T) {
      throw Error("weight period " + std::to_string(key.second) + " outside 0.." + std::to_string(T));
    }
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw Error("weight for subset " + std::to_string(key.first) + " period " +
                  std::to_string(key.second) + " must be finite and nonnegative");
    }
  }
}

Scenario Scenario::restricted(SubsetMask subset) const {
  if (subset == 0 || (subset & ~full_mask()) != 0) throw Error("subset does not name scenario elements");
  Scenario out = *this;
  out.elements.clear();
  for (int e = 0; e < num_elements(); ++e) {
    if (subset >> e & 1U) out.elements.push_back(elements[e]);
  }
  out.min_time = true;
  out.weights.clear();
  return out;
}

int FireTrajectory::outage_period(int e) const {
  const auto& o = outage.at(e);
  for (std::size_t t = 0; t < o.size(); ++t) {
    if (o[t]) return static_cast<int>(t);
  }
  return -1;
}

SubsetMask FireTrajectory::outaged_at(int t) const {
  SubsetMask m = 0;
  for (std::size_t e = 0; e < outage.size(); ++e) {
    if (outage[e].at(t)) m |= SubsetMask{1} << e;
  }
  return m;
}

SpreadParams effective_params(const SpreadParams& p, const SpreadVariant& variant) {
  SpreadParams out = p;
  if (variant.kind == SpreadVariant::Kind::kBall) {
    out.B = std::max(p.B, 1.0);
  } else {
    out.B = std::min(p.B, 1.0);
  }
  return out;
}

ConicModel build_micp(const Scenario& s, const SpreadVariant& variant) {
  s.validate();
  using Kind = SpreadVariant::Kind;
  const bool ball = variant.kind == Kind::kBall;
  const bool oracle = variant.kind == Kind::kRothermel;
  if (oracle && s.spread.epsilon != 0.0) {
    throw Error("rothermel-oracle variant requires zero wind uncertainty");
  }
  const SpreadParams p = effective_params(s.spread, variant);
  const int E = s.num_elements();
  const int T = s.horizon();
  const int R = s.regions.size();
  const double eps = p.epsilon;
  const double r_bar = p.rate_bound(p.B);
  const auto& box = s.regions.bbox();
  const auto& regions = s.regions.regions();
  const bool use_mc = variant.kind == Kind::kInnerProduct && variant.relaxation == InnerRelaxation::kMcCormick;
  const bool use_rmc = variant.kind == Kind::kInnerProduct &&
                       (variant.relaxation == InnerRelaxation::kRotatedMcCormick ||
                        variant.relaxation == InnerRelaxation::kRotatedTwoMinor);
  const bool use_2m = variant.kind == Kind::kInnerProduct &&
                      (variant.relaxation == InnerRelaxation::kTwoMinor ||
                       variant.relaxation == InnerRelaxation::kRotatedTwoMinor);

  ConicModel m;
  auto xy = [&](const std::string& base, double lo_x, double hi_x, double lo_y, double hi_y) {
    return std::array<int, 2>{m.add_variable(base + ".x", lo_x, hi_x), m.add_variable(base + ".y", lo_y, hi_y)};
  };

  // Ignition and wind.
  std::array<int, 2> x0;
  if (s.ignition == IgnitionMode::kFixed) {
    x0 = xy("x0", s.ignition_point.x, s.ignition_point.x, s.ignition_point.y, s.ignition_point.y);
  } else {
    x0 = xy("x0", box[0], box[2], box[1], box[3]);
  }
  std::vector<std::array<int, 2>> w(T + 1);
  std::vector<std::array<AffineExpr, 2>> w_dev(T + 1);
  for (int t = 0; t <= T; ++t) {
    const Point2 nom = p.nominal_wind[t];
    w[t] = xy(label("w", {t}), nom.x - eps, nom.x + eps, nom.y - eps, nom.y + eps);
    w_dev[t] = {AffineExpr({{w[t][0], 1.0}}, -nom.x), AffineExpr({{w[t][1], 1.0}}, -nom.y)};
    if (eps > 0.0) m.add_soc({w_dev[t][0], w_dev[t][1]}, AffineExpr(eps));
  }
  // Shared squared-wind proxies of the minor relaxation.
  std::vector<std::array<int, 2>> omega(T + 1);
  if (use_2m) {
    for (int t = 0; t <= T; ++t) {
      for (int i = 0; i < 2; ++i) {
        omega[t][i] = m.add_variable(label("omega", {t, i}), 0.0, eps * eps);
        AffineExpr lo = AffineExpr::var(omega[t][i]);
        lo.constant = -1.0;
        AffineExpr hi = AffineExpr::var(omega[t][i]);
        hi.constant = 1.0;
        AffineExpr twice = w_dev[t][i];
        twice.terms[0].coef = 2.0;
        twice.constant *= 2.0;
        m.add_soc({twice, lo}, hi);
      }
      m.add_linear({{omega[t][0], 1.0}, {omega[t][1], 1.0}}, Sense::kLessEqual, eps * eps);
    }
  }

  const Exponents ex = inner_exponents(p.B);
  std::vector<std::vector<int>> outage(E, std::vector<int>(T + 1));
  for (int e = 0; e < E; ++e) {
    for (int t = 0; t <= T; ++t) outage[e][t] = m.add_binary(label("o", {e, t}), kPriorityOutage);
  }

  for (int e = 0; e < E; ++e) {
    std::vector<std::array<int, 2>> x(T + 2);
    for (int t = 0; t <= T; ++t) x[t] = xy(label("x", {e, t}), box[0], box[2], box[1], box[3]);
    x[T + 1] = xy(label("x", {e, T + 1}), box[0] - r_bar, box[2] + r_bar, box[1] - r_bar, box[3] + r_bar);
    for (int i = 0; i < 2; ++i) m.add_linear({{x[0][i], 1.0}, {x0[i], -1.0}}, Sense::kEqual, 0.0);

    std::vector<std::vector<int>> preg(R, std::vector<int>(T + 1));
    for (int t = 0; t <= T; ++t) {
      const int o = outage[e][t];
      std::vector<conic::Term> count;
      std::array<std::vector<conic::Term>, 2> total, step;
      for (int i = 0; i < 2; ++i) {
        total[i].push_back({x[t][i], -1.0});
        step[i] = {{x[t + 1][i], -1.0}, {x[t][i], 1.0}};
      }
      std::array<AffineExpr, 2> scaled;
      for (int r = 0; r < R; ++r) {
        const auto& reg = regions[r];
        const double mu = reg.multiplier;
        const int pr = m.add_binary(label("p", {e, r, t}), kPriorityRegion);
        preg[r][t] = pr;
        count.push_back({pr, 1.0});
        const auto& verts = reg.shape.vertices();
        double lo[2] = {0.0, 0.0}, hi[2] = {0.0, 0.0};
        for (const auto& v : verts) {
          lo[0] = std::min(lo[0], v.x);
          hi[0] = std::max(hi[0], v.x);
          lo[1] = std::min(lo[1], v.y);
          hi[1] = std::max(hi[1], v.y);
        }
        const auto xr = xy(label("xr", {e, r, t}), lo[0], hi[0], lo[1], hi[1]);
        for (const auto& h : reg.shape.rows()) {
          m.add_linear({{xr[0], h.normal.x}, {xr[1], h.normal.y}, {pr, -h.rhs}}, Sense::kLessEqual, 0.0);
        }
        const double cap = mu * r_bar;
        const auto d = xy(label("d", {e, r, t}), -cap, cap, -cap, cap);
        for (int i = 0; i < 2; ++i) {
          total[i].push_back({xr[i], 1.0});
          step[i].push_back({d[i], 1.0});
          scaled[i].add(d[i], 1.0 / mu);
          m.add_linear({{d[i], 1.0}, {pr, -cap}}, Sense::kLessEqual, 0.0);
          m.add_linear({{d[i], -1.0}, {pr, -cap}}, Sense::kLessEqual, 0.0);
          if (ball) {
            m.add_linear({{d[i], 1.0}, {o, cap}}, Sense::kLessEqual, cap);
            m.add_linear({{d[i], -1.0}, {o, cap}}, Sense::kLessEqual, cap);
          }
        }
      }
      m.add_linear(count, Sense::kEqual, 1.0);
      for (int i = 0; i < 2; ++i) {
        m.add_linear(total[i], Sense::kEqual, 0.0);
        m.add_linear(step[i], Sense::kEqual, 0.0);
      }

      const Point2 nom = p.nominal_wind[t];
      if (ball) {
        const double nu = norm(nom) + eps;
        const double shift = ball_shift(nu, p.V, p);
        std::vector<AffineExpr> lhs(2);
        for (int i = 0; i < 2; ++i) {
          lhs[i] = AffineExpr::var(w[t][i], shift);
          lhs[i].add(scaled[i], -1.0);
        }
        m.add_soc(lhs, AffineExpr(ball_radius(nu, p.V, p)));
        continue;
      }

      // Power-cone rate constraint on the region-scaled step.
      const int g1 = m.add_variable(label("g1", {e, t}), 0.0, r_bar);
      const int g2 = m.add_variable(label("g2", {e, t}), 0.0, kInf);
      const int g3 = m.add_variable(label("g3", {e, t}), 0.0, kInf);
      m.add_soc({scaled[0], scaled[1]}, AffineExpr::var(g1));
      m.add_linear({{g1, 1.0}, {o, r_bar}}, Sense::kLessEqual, r_bar);
      conic::add_power_of_affine(m, g1, AffineExpr({{g2, 1.0}, {g3, 1.0}}), ex.root, label("u1", {e, t}));
      const int q2 = m.add_variable(label("q2", {e, t}), 0.0, kInf);
      m.add_linear({{g2, 1.0}, {q2, -p.V}}, Sense::kLessEqual, 0.0);
      m.add_power(q2, g1, ex.rate);
      const int q3 = m.add_variable(label("q3", {e, t}), 0.0, kInf);
      m.add_linear({{g3, 1.0}, {q3, -p.C * p.V}}, Sense::kLessEqual, 0.0);
      AffineExpr inner = scaled[0];
      for (auto& term : inner.terms) term.coef *= nom.x;
      AffineExpr inner_y = scaled[1];
      inner.add(inner_y, nom.y);
      if (oracle) {
        conic::add_power_of_affine(m, q3, inner, ex.rate, label("u3", {e, t}));
        continue;
      }
      const int z = m.add_variable(label("z", {e, t}), -eps * r_bar, eps * r_bar);
      inner.add(z, 1.0);
      conic::add_power_of_affine(m, q3, inner, ex.rate, label("u3", {e, t}));
      const auto& wd = w_dev[t];
      if (use_mc) {
        const int z1 = m.add_variable(label("zmc", {e, t, 0}), -kInf, 2 * eps * r_bar);
        const int z2 = m.add_variable(label("zmc", {e, t, 1}), -kInf, 2 * eps * r_bar);
        m.add_linear({{z, 1.0}, {z1, -1.0}, {z2, -1.0}}, Sense::kLessEqual, 0.0);
        const int zi[2] = {z1, z2};
        for (int i = 0; i < 2; ++i) {
          AffineExpr a = AffineExpr::var(zi[i]);
          a.add(scaled[i], -eps);
          a.add(wd[i], r_bar);
          m.add_linear(a, Sense::kLessEqual, eps * r_bar);
          AffineExpr b = AffineExpr::var(zi[i]);
          b.add(wd[i], -r_bar);
          b.add(scaled[i], eps);
          m.add_linear(b, Sense::kLessEqual, eps * r_bar);
        }
      }
      if (use_rmc) {
        AffineExpr u, v;
        u.add(wd[0], r_bar).add(wd[1], r_bar).add(scaled[0], -eps).add(scaled[1], -eps);
        v.add(wd[0], r_bar).add(wd[1], -r_bar).add(scaled[0], -eps).add(scaled[1], eps);
        AffineExpr rhs({{z, -1.0}}, 2 * eps * r_bar);
        m.add_soc({u, v, AffineExpr::var(z)}, rhs);
      }
      if (use_2m) {
        std::vector<conic::Term> dsum, zsum = {{z, 1.0}};
        for (int i = 0; i < 2; ++i) {
          const int delta = m.add_variable(label("delta", {e, t, i}), 0.0, r_bar * r_bar);
          const int zeta = m.add_variable(label("zeta", {e, t, i}), -eps * r_bar, eps * r_bar);
          AffineExpr twice = scaled[i];
          for (auto& term : twice.terms) term.coef *= 2.0;
          m.add_soc({twice, AffineExpr({{delta, 1.0}}, -1.0)}, AffineExpr({{delta, 1.0}}, 1.0));
          m.add_soc({AffineExpr::var(zeta, 2.0), AffineExpr({{delta, 1.0}, {omega[t][i], -1.0}})},
                    AffineExpr({{delta, 1.0}, {omega[t][i], 1.0}}));
          dsum.push_back({delta, 1.0});
          zsum.push_back({zeta, -1.0});
        }
        m.add_linear(dsum, Sense::kLessEqual, r_bar * r_bar);
        m.add_linear(zsum, Sense::kLessEqual, 0.0);
      }
    }

    for (int t = 0; t < T; ++t) {
      const int o = outage[e][t];
      m.add_linear({{o, 1.0}, {outage[e][t + 1], -1.0}}, Sense::kLessEqual, 0.0);
      for (int r = 0; r < R; ++r) {
        m.add_linear({{preg[r][t + 1], 1.0}, {preg[r][t], -1.0}, {o, 1.0}}, Sense::kLessEqual, 1.0);
        m.add_linear({{preg[r][t], 1.0}, {preg[r][t + 1], -1.0}, {o, 1.0}}, Sense::kLessEqual, 1.0);
      }
    }

    // The final fire point lies on the element.
    const auto& verts = s.elements[e].shape.vertices();
    std::vector<conic::Term> lsum;
    std::array<std::vector<conic::Term>, 2> lpos;
    for (int i = 0; i < 2; ++i) lpos[i].push_back({x[T][i], -1.0});
    for (std::size_t j = 0; j < verts.size(); ++j) {
      const int l = m.add_variable(label("lambda", {e, static_cast<int>(j)}), 0.0, 1.0);
      lsum.push_back({l, 1.0});
      lpos[0].push_back({l, verts[j].x});
      lpos[1].push_back({l, verts[j].y});
    }
    m.add_linear(lsum, Sense::kEqual, 1.0);
    for (int i = 0; i < 2; ++i) m.add_linear(lpos[i], Sense::kEqual, 0.0);
  }

  // Outage-combination indicators for the weighted subsets.
  const auto weights = objective_weights(s);
  std::vector<conic::Term> objective;
  std::map<int, std::vector<int>> per_period;
  std::map<int, int> full_combo;
  for (const auto& [key, c] : weights) {
    const auto [mask, t] = key;
    const int ob = m.add_binary(label("obar", {static_cast<int>(mask), t}), kPriorityCombo);
    for (int e = 0; e < E; ++e) {
      if (mask >> e & 1U) {
        m.add_linear({{ob, 1.0}, {outage[e][t], -1.0}}, Sense::kLessEqual, 0.0);
      } else {
        m.add_linear({{ob, 1.0}, {outage[e][t], 1.0}}, Sense::kLessEqual, 1.0);
      }
    }
    per_period[t].push_back(ob);
    if (mask == s.full_mask()) full_combo[t] = ob;
    objective.push_back({ob, c});
  }
  for (const auto& [t, combos] : per_period) {
    if (combos.size() < 2) continue;
    std::vector<conic::Term> row;
    for (int ob : combos) row.push_back({ob, 1.0});
    m.add_linear(row, Sense::kLessEqual, 1.0);
  }
  if (s.min_time) {
    for (int t = 0; t < T; ++t) {
      m.add_linear({{full_combo.at(t), 1.0}, {full_combo.at(t + 1), -1.0}}, Sense::kLessEqual, 0.0);
    }
  }
  m.set_objective(conic::ObjectiveSense::kMaximize, objective);
  return conic::rewrite_power(m);
}

FireTrajectory decode_solution(const Scenario& s, const SpreadVariant& variant, const ConicModel& model,
                               const solver::Solution& sol, double tol) {
  using Kind = SpreadVariant::Kind;
  if (sol.status != solver::Status::kOptimal && sol.status != solver::Status::kIterLimit) {
    throw Error(std::string("cannot decode a solution with status ") + solver::to_string(sol.status));
  }
  if (!sol.has_incumbent || sol.values.size() != static_cast<std::size_t>(model.num_variables())) {
    throw Error("solution carries no values for this model");
  }
  std::unordered_map<std::string, int> index;
  for (int v = 0; v < model.num_variables(); ++v) index.emplace(model.variable(v).name, v);
  const auto value = [&](const std::string& name) {
    const auto it = index.find(name);
    if (it == index.end()) throw Error("model has no variable '" + name + "'");
    return sol.values[it->second];
  };
  const auto point = [&](const std::string& base) { return Point2{value(base + ".x"), value(base + ".y")}; };

  const SpreadParams p = effective_params(s.spread, variant);
  const int E = s.num_elements();
  const int T = s.horizon();
  const int R = s.regions.size();
  const double r_bar = p.rate_bound(p.B);
  const Exponents ex = inner_exponents(p.B);

  FireTrajectory traj;
  traj.ignition = point("x0");
  for (int t = 0; t <= T; ++t) traj.wind.push_back(point(label("w", {t})));
  traj.path.assign(E, {});
  traj.outage.assign(E, {});
  traj.region.assign(E, {});
  for (int e = 0; e < E; ++e) {
    for (int t = 0; t <= T; ++t) {
      traj.path[e].push_back(point(label("x", {e, t})));
      traj.outage[e].push_back(value(label("o", {e, t})) > 0.5 ? 1 : 0);
      int best = 0;
      double best_v = -1.0;
      for (int r = 0; r < R; ++r) {
        const double pv = value(label("p", {e, r, t}));
        if (pv > best_v) {
          best_v = pv;
          best = r;
        }
      }
      traj.region[e].push_back(best);
      traj.z.push_back(variant.kind == Kind::kInnerProduct ? value(label("z", {e, t})) : 0.0);
    }
  }

  auto report = [&](int e, int t, const std::string& what) {
    std::ostringstream os;
    os << "element " << s.elements[e].id << " period " << t << ": " << what;
    traj.issues.push_back(os.str());
  };
  for (int t = 0; t <= T; ++t) {
    if (norm(traj.wind[t] - p.nominal_wind[t]) > p.epsilon + tol) {
      traj.issues.push_back("period " + std::to_string(t) + ": wind outside the uncertainty ball");
    }
  }
  if (s.ignition == IgnitionMode::kFixed && norm(traj.ignition - s.ignition_point) > tol) {
    traj.issues.push_back("ignition point moved");
  }
  for (int e = 0; e < E; ++e) {
    if (norm(traj.path[e][0] - traj.ignition) > tol) report(e, 0, "path does not start at ignition");
    for (int t = 0; t <= T; ++t) {
      const Point2 xt = traj.path[e][t];
      const int r = traj.region[e][t];
      if (!contains_h(s.regions.regions()[r].shape, xt, tol)) report(e, t, "fire point outside its region");
      if (t < T && traj.outage[e][t] > traj.outage[e][t + 1]) report(e, t, "outage is not monotone");
      if (traj.outage[e][t] && !convex_coeffs(s.elements[e].shape, xt, tol)) {
        report(e, t, "outage without reaching the element");
      }
      if (t == T) {
        if (!convex_coeffs(s.elements[e].shape, xt, tol)) report(e, t, "final fire point misses the element");
        continue;
      }
      const Point2 next = traj.path[e][t + 1];
      const Point2 d = next - xt;
      const double mu = s.regions.regions()[r].multiplier;
      if (traj.outage[e][t] && norm(d) > tol) report(e, t, "fire point moves after outage");
      const Point2 w = traj.wind[t];
      const Point2 nom = p.nominal_wind[t];
      if (variant.kind == Kind::kBall) {
        const Ball b = ball_spread(w, xt, mu * p.V, p, norm(nom));
        if (!ball_contains(b, next, tol)) report(e, t, "step leaves the ball spread set");
        continue;
      }
      const Point2 dh = (1.0 / mu) * d;
      const double z = traj.z[e * (T + 1) + t];
      const double g = norm(dh);
      const double u = dot(nom, dh) + z;
      const double rate = std::pow(p.V * std::pow(g, ex.rate.value()) +
                                       p.C * p.V * std::pow(std::max(0.0, u), ex.rate.value()),
                                   ex.root.value());
      if (u < -tol || g > rate + tol) report(e, t, "step exceeds the rate bound");
      if (variant.kind == Kind::kInnerProduct) {
        const Point2 wd = w - nom;
        bool ok = false;
        if (g <= r_bar + tol && norm(wd) <= p.epsilon + tol) {
          ok = ip_relax_member(dh, wd, z, variant.relaxation, r_bar + tol, p.epsilon + tol, tol);
        }
        if (!ok) report(e, t, "inner-product relaxation violated");
      }
    }
  }
  return traj;
}

MinTimeResult min_time_to_outage(const Scenario& s, SubsetMask subset, const SpreadVariant& variant,
                                 const solver::SolveOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const Scenario sub = s.restricted(subset);
  const ConicModel model = build_micp(sub, variant);
  const auto sol = solver::solve(model, opts);
  MinTimeResult out;
  out.status = sol.status;
  out.gap = sol.gap;
  out.nodes = sol.nodes;
  if (sol.has_incumbent && sol.status != solver::Status::kInfeasible) {
    out.trajectory = decode_solution(sub, variant, model, sol, 10 * opts.feas_tol);
    const int T = sub.horizon();
    for (int t = 0; t <= T; ++t) {
      const int v = model.find(label("obar", {static_cast<int>(sub.full_mask()), t}));
      if (sol.values[v] > 0.5) {
        out.tstar = t;
        break;
      }
    }
  }
  out.seconds = clock_seconds(start);
  return out;
}

SequenceResult max_shed_sequence(const Scenario& s, const SpreadVariant& variant,
                                 const solver::SolveOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  if (s.min_time) throw Error("sequence objective needs a weight table");
  const ConicModel model = build_micp(s, variant);
  const auto sol = solver::solve(model, opts);
  SequenceResult out;
  out.status = sol.status;
  out.gap = sol.gap;
  out.nodes = sol.nodes;
  if (sol.has_incumbent && sol.status != solver::Status::kInfeasible) {
    out.objective = sol.objective;
    out.trajectory = decode_solution(s, variant, model, sol, 10 * opts.feas_tol);
  }
  out.seconds = clock_seconds(start);
  return out;
}

Scenario with_flexibility(const Scenario& s, Flexibility f, double hf_margin) {
  Scenario out = s;
  if (f == Flexibility::kLow) {
    out.ignition = IgnitionMode::kFixed;
    return out;
  }
  if (!(hf_margin >= 0.0)) throw Error("high-flexibility margin must be nonnegative");
  double top = 0.0;
  for (const auto& w : s.spread.nominal_wind) top = std::max(top, norm(w));
  out.spread.epsilon = top + hf_margin;
  for (auto& w : out.spread.nominal_wind) w = {0.0, 0.0};
  out.ignition = IgnitionMode::kFree;
  return out;
}

}  // namespace wildfire
