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

#include "wildfire/conic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <tuple>
#include <utility>

#include "wildfire/error.hpp"

namespace wildfire::conic {
namespace {

void canonicalize_terms(std::vector<Term>& terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.var < b.var; });
  std::size_t w = 0;
  for (std::size_t i = 0; i < terms.size();) {
    Term t = terms[i++];
    while (i < terms.size() && terms[i].var == t.var) t.coef += terms[i++].coef;
    if (t.coef != 0.0) terms[w++] = t;
  }
  terms.resize(w);
}

double eval_terms(const std::vector<Term>& terms, std::span<const double> x) {
  double s = 0.0;
  for (const auto& t : terms) s += t.coef * x[t.var];
  return s;
}

}  // namespace

AffineExpr& AffineExpr::add(const AffineExpr& e, double scale) {
  for (const auto& t : e.terms) terms.push_back({t.var, scale * t.coef});
  constant += scale * e.constant;
  return *this;
}

double AffineExpr::eval(std::span<const double> x) const { return eval_terms(terms, x) + constant; }

void AffineExpr::canonicalize() { canonicalize_terms(terms); }

double SocConstraint::violation(std::span<const double> x) const {
  double s = 0.0;
  for (const auto& e : lhs) {
    const double v = e.eval(x);
    s += v * v;
  }
  return std::sqrt(s) - rhs.eval(x);
}

int ConicModel::add_variable(std::string name, double lb, double ub) {
  if (lb > ub) throw Error("variable " + name + ": lower bound exceeds upper bound");
  variables_.push_back({std::move(name), lb, ub, false, 0});
  return num_variables() - 1;
}

int ConicModel::add_variable(Variable v) {
  if (v.lb > v.ub) throw Error("variable " + v.name + ": lower bound exceeds upper bound");
  variables_.push_back(std::move(v));
  return num_variables() - 1;
}

int ConicModel::add_binary(std::string name, int priority) {
  variables_.push_back({std::move(name), 0.0, 1.0, true, priority});
  return num_variables() - 1;
}

void ConicModel::set_bounds(int var, double lb, double ub) {
  check_var(var);
  variables_[var].lb = lb;
  variables_[var].ub = ub;
}

void ConicModel::set_priority(int var, int priority) {
  check_var(var);
  variables_[var].priority = priority;
}

void ConicModel::check_var(int v) const {
  if (v < 0 || v >= num_variables()) throw Error("reference to undeclared variable " + std::to_string(v));
}

void ConicModel::add_linear(std::vector<Term> terms, Sense sense, double rhs) {
  for (const auto& t : terms) check_var(t.var);
  canonicalize_terms(terms);
  linear_.push_back({std::move(terms), sense, rhs});
}

void ConicModel::add_linear(const AffineExpr& expr, Sense sense, double rhs) {
  add_linear(expr.terms, sense, rhs - expr.constant);
}

void ConicModel::add_soc(std::vector<AffineExpr> lhs, AffineExpr rhs) {
  for (auto& e : lhs) {
    for (const auto& t : e.terms) check_var(t.var);
    e.canonicalize();
  }
  for (const auto& t : rhs.terms) check_var(t.var);
  rhs.canonicalize();
  socs_.push_back({std::move(lhs), std::move(rhs)});
}

void ConicModel::add_power(int x, int y, RationalExponent exponent) {
  check_var(x);
  check_var(y);
  powers_.push_back({x, y, exponent});
}

void ConicModel::set_objective(ObjectiveSense sense, std::vector<Term> terms) {
  for (const auto& t : terms) check_var(t.var);
  canonicalize_terms(terms);
  objective_sense_ = sense;
  objective_ = std::move(terms);
}

int ConicModel::num_binaries() const {
  return static_cast<int>(std::count_if(variables_.begin(), variables_.end(),
                                        [](const Variable& v) { return v.binary; }));
}

int ConicModel::find(const std::string& name) const {
  for (int i = 0; i < num_variables(); ++i) {
    if (variables_[i].name == name) return i;
  }
  return -1;
}

double ConicModel::objective_value(std::span<const double> x) const {
  return eval_terms(objective_, x);
}

double ConicModel::max_violation(std::span<const double> x) const {
  double worst = 0.0;
  for (int j = 0; j < num_variables(); ++j) {
    worst = std::max({worst, variables_[j].lb - x[j], x[j] - variables_[j].ub});
  }
  for (const auto& row : linear_) {
    const double a = eval_terms(row.terms, x);
    switch (row.sense) {
      case Sense::kLessEqual: worst = std::max(worst, a - row.rhs); break;
      case Sense::kGreaterEqual: worst = std::max(worst, row.rhs - a); break;
      case Sense::kEqual: worst = std::max(worst, std::abs(a - row.rhs)); break;
    }
  }
  for (const auto& soc : socs_) worst = std::max(worst, soc.violation(x));
  for (const auto& p : powers_) {
    const double y = x[p.y];
    worst = std::max(worst, -y);
    worst = std::max(worst, x[p.x] - std::pow(std::max(y, 0.0), p.exponent.value()));
  }
  return worst;
}

void ConicModel::validate() const {
  for (const auto& v : variables_) {
    if (v.name.empty()) throw Error("variable with empty name");
    if (v.lb > v.ub) throw Error("variable " + v.name + ": lower bound exceeds upper bound");
    if (v.binary && (v.lb < 0.0 || v.ub > 1.0)) {
      throw Error("binary variable " + v.name + " has bounds outside [0,1]");
    }
  }
  auto check_terms = [&](const std::vector<Term>& terms) {
    for (const auto& t : terms) check_var(t.var);
  };
  for (const auto& row : linear_) check_terms(row.terms);
  for (const auto& soc : socs_) {
    for (const auto& e : soc.lhs) check_terms(e.terms);
    check_terms(soc.rhs.terms);
  }
  check_terms(objective_);
  for (const auto& p : powers_) {
    check_var(p.x);
    check_var(p.y);
    const auto& e = p.exponent;
    if (e.num <= 0 || e.den <= 0 || e.num > e.den) {
      throw Error("power exponent " + std::to_string(e.num) + "/" + std::to_string(e.den) +
                  " outside (0,1]");
    }
    if (e.rho < 0 || e.rho > 30 || static_cast<long long>(e.den) > (1LL << e.rho)) {
      throw Error("power exponent denominator " + std::to_string(e.den) + " exceeds 2^" +
                  std::to_string(e.rho));
    }
  }
}

RationalExponent rationalize(double r, int max_rho) {
  if (!(r > 0.0 && r <= 1.0)) throw Error("rationalize: exponent must lie in (0,1]");
  if (max_rho < 0 || max_rho > 30) throw Error("rationalize: max_rho out of range");
  const long long dmax = 1LL << max_rho;
  long long best_n = 1, best_d = 1;
  double best_err = std::abs(1.0 - r);
  for (long long d = 1; d <= dmax; ++d) {
    long long n = std::llround(r * static_cast<double>(d));
    n = std::clamp<long long>(n, 1, d);
    const double err = std::abs(static_cast<double>(n) / static_cast<double>(d) - r);
    if (err < best_err) {
      best_err = err;
      best_n = n;
      best_d = d;
    }
  }
  const long long g = std::gcd(best_n, best_d);
  best_n /= g;
  best_d /= g;
  int rho = 0;
  while ((1LL << rho) < best_d) ++rho;
  return {static_cast<int>(best_n), static_cast<int>(best_d), rho};
}

namespace {

struct TowerSearch {
  long long pow2;
  long long num, den;
  int proxies;
  std::vector<std::pair<long long, long long>> pts;
  std::vector<TowerStep> steps;

  bool hits(const std::pair<long long, long long>& m) const {
    return m.first < pow2 && m.second * den == num * (pow2 - m.first);
  }

  bool dfs() {
    const int np = static_cast<int>(pts.size());
    if (static_cast<int>(steps.size()) == proxies) {
      for (int i = 0; i < np; ++i) {
        for (int j = i + 1; j < np; ++j) {
          const long long sa = pts[i].first + pts[j].first;
          const long long sb = pts[i].second + pts[j].second;
          if ((sa & 1) || (sb & 1)) continue;
          if (hits({sa / 2, sb / 2})) {
            steps.push_back({i, j});
            return true;
          }
        }
      }
      return false;
    }
    for (int i = 0; i < np; ++i) {
      for (int j = i + 1; j < np; ++j) {
        const long long sa = pts[i].first + pts[j].first;
        const long long sb = pts[i].second + pts[j].second;
        if ((sa & 1) || (sb & 1)) continue;
        const std::pair<long long, long long> m{sa / 2, sb / 2};
        if (std::find(pts.begin(), pts.end(), m) != pts.end()) continue;
        pts.push_back(m);
        steps.push_back({i, j});
        if (dfs()) return true;
        steps.pop_back();
        pts.pop_back();
      }
    }
    // Unused extra proxies keep the step count exact when rho exceeds the
    // minimum for this exponent.
    if (np >= 3 && static_cast<int>(steps.size()) < proxies) {
      pts.push_back({0, pow2 / 2});
      steps.push_back({1, 2});
      if (dfs()) return true;
      steps.pop_back();
      pts.pop_back();
    }
    return false;
  }
};

}  // namespace

std::vector<TowerStep> power_tower(const RationalExponent& e) {
  if (e.num <= 0 || e.den <= 0 || e.num > e.den) throw Error("power_tower: exponent outside (0,1]");
  if (e.rho < 0 || e.rho > 16 || static_cast<long long>(e.den) > (1LL << e.rho)) {
    throw Error("power_tower: denominator " + std::to_string(e.den) + " exceeds 2^rho");
  }
  if (e.rho == 0) return {};
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::vector<TowerStep>> cache;
  const long long g = std::gcd(e.num, e.den);
  const auto key = std::make_tuple(static_cast<int>(e.num / g), static_cast<int>(e.den / g), e.rho);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  TowerSearch s;
  s.pow2 = 1LL << e.rho;
  s.num = std::get<0>(key);
  s.den = std::get<1>(key);
  s.proxies = e.rho - 1;
  s.pts = {{s.pow2, 0}, {0, s.pow2}, {0, 0}};
  if (!s.dfs()) {
    throw Error("power_tower: no " + std::to_string(e.rho) + "-step tower for " +
                std::to_string(e.num) + "/" + std::to_string(e.den));
  }
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, s.steps);
  return s.steps;
}

ConicModel rewrite_power(const ConicModel& model) {
  model.validate();
  ConicModel out;
  for (const auto& v : model.variables()) out.add_variable(v);
  for (const auto& row : model.linear()) out.add_linear(row.terms, row.sense, row.rhs);
  for (const auto& soc : model.socs()) out.add_soc(soc.lhs, soc.rhs);
  out.set_objective(model.objective_sense(), model.objective());

  int serial = 0;
  for (const auto& p : model.powers()) {
    const auto& e = p.exponent;
    const std::string base = out.variable(p.x).name + "__pow" + std::to_string(serial++);
    int x = p.x;
    if (out.variable(x).lb < 0.0) {
      x = out.add_variable(base + "_pos", 0.0, kInf);
      out.add_linear({{p.x, 1.0}, {x, -1.0}}, Sense::kLessEqual, 0.0);
    }
    const auto& yv = out.variable(p.y);
    if (yv.lb < 0.0) out.set_bounds(p.y, 0.0, std::max(0.0, yv.ub));
    if (e.num == e.den) {
      out.add_linear({{x, 1.0}, {p.y, -1.0}}, Sense::kLessEqual, 0.0);
      continue;
    }
    const auto steps = power_tower(e);
    std::vector<AffineExpr> operand = {AffineExpr::var(x), AffineExpr::var(p.y), AffineExpr(1.0)};
    for (std::size_t k = 0; k < steps.size(); ++k) {
      const bool last = k + 1 == steps.size();
      const int out_var = last ? x : out.add_variable(base + "_" + std::to_string(k), 0.0, kInf);
      const AffineExpr& a = operand[steps[k].a];
      const AffineExpr& b = operand[steps[k].b];
      AffineExpr diff = a;
      diff.add(b, -1.0);
      AffineExpr sum = a;
      sum.add(b, 1.0);
      out.add_soc({AffineExpr::var(out_var, 2.0), diff}, sum);
      operand.push_back(AffineExpr::var(out_var));
    }
  }
  return out;
}

int add_power_of_affine(ConicModel& model, int x, const AffineExpr& arg, RationalExponent e,
                        const std::string& proxy_name) {
  const int u = model.add_variable(proxy_name, 0.0, kInf);
  AffineExpr row = arg;
  row.add(u, -1.0);
  model.add_linear(row, Sense::kEqual, 0.0);
  model.add_power(x, u, e);
  return u;
}

}  // namespace wildfire::conic
