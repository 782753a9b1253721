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

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "wildfire/conic.hpp"
#include "wildfire/lp.hpp"
#include "wildfire/solver.hpp"

using namespace wildfire;
using conic::ConicModel;
using conic::Sense;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Max over the box of y.(A x - s); negative proves infeasibility.
double farkas_margin(const ConicModel& m, const std::vector<double>& y) {
  std::vector<double> coef(m.num_variables(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < m.linear().size(); ++i) {
    const auto& row = m.linear()[i];
    for (const auto& t : row.terms) coef[t.var] += y[i] * t.coef;
    const double lo = row.sense == Sense::kLessEqual ? -kInf : row.rhs;
    const double hi = row.sense == Sense::kGreaterEqual ? kInf : row.rhs;
    const double c = -y[i];
    if (c > 0) total += c * hi;
    if (c < 0) total += c * lo;
  }
  for (int j = 0; j < m.num_variables(); ++j) {
    if (coef[j] > 0) total += coef[j] * m.variable(j).ub;
    if (coef[j] < 0) total += coef[j] * m.variable(j).lb;
  }
  return total;
}

// Brute-force optimum of max c.x over {A x <= b} in the plane.
double vertex_enumeration(const std::vector<std::array<double, 3>>& rows, double cx, double cy) {
  double best = -kInf;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      const double det = rows[i][0] * rows[j][1] - rows[i][1] * rows[j][0];
      if (std::abs(det) < 1e-12) continue;
      const double x = (rows[i][2] * rows[j][1] - rows[i][1] * rows[j][2]) / det;
      const double y = (rows[i][0] * rows[j][2] - rows[i][2] * rows[j][0]) / det;
      bool ok = true;
      for (const auto& r : rows) ok = ok && r[0] * x + r[1] * y <= r[2] + 1e-9;
      if (ok) best = std::max(best, cx * x + cy * y);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("single bound") {
  ConicModel m;
  const int x = m.add_variable("x", 0.0, kInf);
  m.add_linear({{x, 1.0}}, Sense::kLessEqual, 3.0);
  m.set_objective(conic::ObjectiveSense::kMaximize, {{x, 1.0}});
  const auto sol = solver::solve_lp(m);
  REQUIRE(sol.status == solver::Status::kOptimal);
  CHECK(sol.objective == doctest::Approx(3.0));
  CHECK(sol.dual_objective == doctest::Approx(3.0));
}

TEST_CASE("degenerate redundant constraints match vertex enumeration") {
  // Three constraints through the optimal vertex (1,1) plus duplicates.
  std::vector<std::array<double, 3>> rows = {
      {1, 1, 2}, {1, 0, 1}, {0, 1, 1}, {2, 2, 4}, {1, 2, 3}, {-1, 0, 0}, {0, -1, 0}, {1, 1, 2}};
  ConicModel m;
  const int x = m.add_variable("x", -kInf, kInf);
  const int y = m.add_variable("y", -kInf, kInf);
  for (const auto& r : rows) m.add_linear({{x, r[0]}, {y, r[1]}}, Sense::kLessEqual, r[2]);
  m.set_objective(conic::ObjectiveSense::kMaximize, {{x, 3.0}, {y, 2.0}});
  const auto sol = solver::solve_lp(m);
  REQUIRE(sol.status == solver::Status::kOptimal);
  CHECK(sol.objective == doctest::Approx(vertex_enumeration(rows, 3, 2)));
}

TEST_CASE("infeasible system yields a Farkas certificate") {
  ConicModel m;
  const int x = m.add_variable("x", -kInf, kInf);
  m.add_linear({{x, 1.0}}, Sense::kLessEqual, 0.0);
  m.add_linear({{x, 1.0}}, Sense::kGreaterEqual, 1.0);
  const auto sol = solver::solve_lp(m);
  REQUIRE(sol.status == solver::Status::kInfeasible);
  CHECK(farkas_margin(m, sol.farkas) < 0.0);
}

TEST_CASE("unbounded problem yields a ray") {
  ConicModel m;
  const int x = m.add_variable("x", 0.0, kInf);
  const int y = m.add_variable("y", 0.0, kInf);
  m.add_linear({{x, 1.0}, {y, -1.0}}, Sense::kLessEqual, 1.0);
  m.set_objective(conic::ObjectiveSense::kMaximize, {{x, 1.0}, {y, 1.0}});
  const auto sol = solver::solve_lp(m);
  REQUIRE(sol.status == solver::Status::kUnbounded);
  REQUIRE(sol.ray.size() == 2);
  CHECK(sol.ray[0] + sol.ray[1] > 0.0);
  CHECK(sol.ray[0] - sol.ray[1] <= 1e-12);
  CHECK(sol.ray[0] >= -1e-12);
  CHECK(sol.ray[1] >= -1e-12);
}

TEST_CASE("random planar LPs match vertex enumeration") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::array<double, 3>> rows = {{1, 0, 5}, {-1, 0, 5}, {0, 1, 5}, {0, -1, 5}};
    const int k = 3 + trial % 8;
    for (int i = 0; i < k; ++i) rows.push_back({u(rng), u(rng), 0.5 + std::abs(u(rng))});
    if (trial % 5 == 0) rows.push_back(rows[4]);
    ConicModel m;
    const int x = m.add_variable("x", -kInf, kInf);
    const int y = m.add_variable("y", -kInf, kInf);
    for (const auto& r : rows) m.add_linear({{x, r[0]}, {y, r[1]}}, Sense::kLessEqual, r[2]);
    const double cx = u(rng), cy = u(rng);
    m.set_objective(conic::ObjectiveSense::kMaximize, {{x, cx}, {y, cy}});
    const auto sol = solver::solve_lp(m);
    REQUIRE(sol.status == solver::Status::kOptimal);
    CHECK(sol.objective == doctest::Approx(vertex_enumeration(rows, cx, cy)).epsilon(1e-9));
    CHECK(sol.gap <= 1e-9);
  }
}

TEST_CASE("random bounded LPs: primal feasibility and duality") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 5 + trial % 20;
    const int rows = 3 + trial % 17;
    ConicModel m;
    std::vector<double> x0(n);
    for (int j = 0; j < n; ++j) {
      const int id = m.add_variable("x" + std::to_string(j), -1.0 - std::abs(u(rng)), 1.0 + std::abs(u(rng)));
      x0[j] = 0.0;
      (void)id;
    }
    for (int i = 0; i < rows; ++i) {
      std::vector<conic::Term> t;
      for (int j = 0; j < n; ++j) {
        if (u(rng) > 0.3) t.push_back({j, u(rng)});
      }
      const int kind = i % 3;
      if (kind == 0) m.add_linear(t, Sense::kLessEqual, std::abs(u(rng)));
      if (kind == 1) m.add_linear(t, Sense::kGreaterEqual, -std::abs(u(rng)));
      if (kind == 2) m.add_linear(t, Sense::kEqual, 0.1 * u(rng));
    }
    std::vector<conic::Term> c;
    for (int j = 0; j < n; ++j) c.push_back({j, u(rng)});
    m.set_objective(trial % 2 ? conic::ObjectiveSense::kMaximize : conic::ObjectiveSense::kMinimize, c);
    const auto sol = solver::solve_lp(m);
    if (sol.status == solver::Status::kInfeasible) {
      CHECK(farkas_margin(m, sol.farkas) < 0.0);
      continue;
    }
    REQUIRE(sol.status == solver::Status::kOptimal);
    CHECK(m.max_violation(sol.values) <= 1e-8);
    CHECK(std::abs(sol.objective - sol.dual_objective) <= 1e-7);
  }
}

TEST_CASE("engine warm start after adding and removing rows") {
  lp::Simplex s(2);
  s.set_col_bounds(0, 0.0, 10.0);
  s.set_col_bounds(1, 0.0, 10.0);
  s.set_cost(0, -1.0);
  s.set_cost(1, -1.0);
  REQUIRE(s.solve() == lp::Status::kOptimal);
  CHECK(s.objective() == doctest::Approx(-20.0));
  s.add_row({{0, 1.0}, {1, 1.0}}, -kInf, 4.0);
  REQUIRE(s.solve() == lp::Status::kOptimal);
  CHECK(s.objective() == doctest::Approx(-4.0));
  s.add_row({{0, 1.0}, {1, -1.0}}, 1.0, 1.0);
  REQUIRE(s.solve() == lp::Status::kOptimal);
  CHECK(s.objective() == doctest::Approx(-4.0));
  CHECK(s.primal()[0] == doctest::Approx(2.5));
  s.truncate_rows(1);
  REQUIRE(s.solve() == lp::Status::kOptimal);
  CHECK(s.objective() == doctest::Approx(-4.0));
  s.remove_rows({0});
  REQUIRE(s.solve() == lp::Status::kOptimal);
  CHECK(s.objective() == doctest::Approx(-20.0));
  const auto b = s.basis();
  s.set_col_bounds(0, 0.0, 1.0);
  s.set_basis(b);
  REQUIRE(s.solve() == lp::Status::kOptimal);
  CHECK(s.objective() == doctest::Approx(-11.0));
}
