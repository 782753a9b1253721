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

#include "wildfire/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wildfire/conic.hpp"
#include "wildfire/error.hpp"
#include "wildfire/solver.hpp"

namespace wildfire {

std::vector<Point2> clip_polygon(const std::vector<Point2>& poly, const HalfPlane& h) {
  std::vector<Point2> out;
  const std::size_t n = poly.size();
  if (n == 0) return out;
  const double scale = std::max(1.0, std::abs(h.rhs));
  const double eps = 1e-12 * scale;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& p = poly[i];
    const Point2& q = poly[(i + 1) % n];
    const double vp = dot(h.normal, p) - h.rhs;
    const double vq = dot(h.normal, q) - h.rhs;
    const bool pin = vp <= eps;
    const bool qin = vq <= eps;
    if (pin) out.push_back(p);
    if (pin != qin) {
      const double t = vp / (vp - vq);
      out.push_back(p + t * (q - p));
    }
  }
  // Collapse consecutive duplicates produced by vertices on the boundary.
  std::vector<Point2> clean;
  for (const auto& p : out) {
    if (clean.empty() || norm(p - clean.back()) > 1e-12 * std::max(1.0, norm(p))) clean.push_back(p);
  }
  while (clean.size() > 1 && norm(clean.front() - clean.back()) <= 1e-12 * std::max(1.0, norm(clean.back()))) {
    clean.pop_back();
  }
  return clean;
}

std::vector<Point2> halfplane_polygon(const std::vector<HalfPlane>& rows, double huge) {
  std::vector<Point2> poly = {{-huge, -huge}, {huge, -huge}, {huge, huge}, {-huge, huge}};
  for (const auto& h : rows) {
    poly = clip_polygon(poly, h);
    if (poly.empty()) break;
  }
  return poly;
}

double polygon_area(const std::vector<Point2>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) a += cross(poly[i], poly[(i + 1) % poly.size()]);
  return 0.5 * a;
}

PolytopeH::PolytopeH(std::vector<HalfPlane> rows) : rows_(std::move(rows)) {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& r = rows_[i];
    if (!std::isfinite(r.normal.x) || !std::isfinite(r.normal.y) || !std::isfinite(r.rhs)) {
      throw Error("polytope row " + std::to_string(i) + " is not finite");
    }
    if (r.normal.x == 0.0 && r.normal.y == 0.0) {
      throw Error("polytope row " + std::to_string(i) + " has a zero normal");
    }
  }
  constexpr double kHuge = 1e7;
  vertices_ = halfplane_polygon(rows_, kHuge);
  if (vertices_.empty()) throw Error("polytope is empty");
  for (const auto& v : vertices_) {
    if (std::abs(v.x) >= 0.5 * kHuge || std::abs(v.y) >= 0.5 * kHuge) {
      throw Error("polytope is unbounded");
    }
  }
}

PolytopeH PolytopeH::box(double xmin, double ymin, double xmax, double ymax) {
  if (!(xmin <= xmax && ymin <= ymax)) throw Error("box has inverted extents");
  return PolytopeH({{{-1, 0}, -xmin}, {{1, 0}, xmax}, {{0, -1}, -ymin}, {{0, 1}, ymax}});
}

PolytopeV::PolytopeV(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw Error("vertex list is empty");
  for (const auto& v : vertices_) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) throw Error("vertex is not finite");
  }
}

bool contains_h(const PolytopeH& p, const Point2& x, double tol) {
  for (const auto& r : p.rows()) {
    if (dot(r.normal, x) > r.rhs + tol) return false;
  }
  return true;
}

std::optional<std::vector<double>> convex_coeffs(const PolytopeV& v, const Point2& x, double tol) {
  const auto& pts = v.vertices();
  const std::size_t j = pts.size();
  if (j == 1) {
    if (std::abs(x.x - pts[0].x) <= tol && std::abs(x.y - pts[0].y) <= tol) {
      return std::vector<double>{1.0};
    }
    return std::nullopt;
  }
  if (j == 2) {
    const Point2 e = pts[1] - pts[0];
    const double len2 = dot(e, e);
    double t = len2 > 0.0 ? dot(x - pts[0], e) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const Point2 proj = pts[0] + t * e;
    if (std::abs(proj.x - x.x) <= tol && std::abs(proj.y - x.y) <= tol) {
      return std::vector<double>{1.0 - t, t};
    }
    return std::nullopt;
  }
  conic::ConicModel m;
  std::vector<conic::Term> sum, ex, ey;
  for (std::size_t k = 0; k < j; ++k) {
    const int id = m.add_variable("l" + std::to_string(k), 0.0, 1.0);
    sum.push_back({id, 1.0});
    ex.push_back({id, pts[k].x});
    ey.push_back({id, pts[k].y});
  }
  m.add_linear(sum, conic::Sense::kEqual, 1.0);
  m.add_linear(ex, conic::Sense::kLessEqual, x.x + tol);
  m.add_linear(ex, conic::Sense::kGreaterEqual, x.x - tol);
  m.add_linear(ey, conic::Sense::kLessEqual, x.y + tol);
  m.add_linear(ey, conic::Sense::kGreaterEqual, x.y - tol);
  solver::SolveOptions opts;
  opts.feas_tol = tol;
  const auto sol = solver::solve_lp(m, opts);
  if (sol.status != solver::Status::kOptimal) return std::nullopt;
  std::vector<double> lambda(j);
  double total = 0.0;
  for (std::size_t k = 0; k < j; ++k) {
    lambda[k] = std::max(0.0, sol.values[k]);
    total += lambda[k];
  }
  for (double& l : lambda) l /= total;
  return lambda;
}

Ball ball_sum(const Ball& a, const Ball& b) {
  return Ball{a.center + b.center, a.radius + b.radius};
}

bool ball_contains(const Ball& b, const Point2& x, double tol) {
  return norm(x - b.center) <= b.radius + tol;
}

double point_segment_distance(const Point2& p, const Point2& a, const Point2& b) {
  const Point2 e = b - a;
  const double len2 = dot(e, e);
  const double t = len2 > 0.0 ? std::clamp(dot(p - a, e) / len2, 0.0, 1.0) : 0.0;
  return norm(p - (a + t * e));
}

double segment_polytope_distance(const Point2& a, const Point2& b, const PolytopeH& p) {
  constexpr double kEps = 1e-12;
  double t0 = 0.0, t1 = 1.0;
  bool empty = false;
  const Point2 e = b - a;
  for (const auto& r : p.rows()) {
    const double num = r.rhs - dot(r.normal, a);
    const double den = dot(r.normal, e);
    if (std::abs(den) <= kEps) {
      if (num < -kEps) {
        empty = true;
        break;
      }
      continue;
    }
    const double t = num / den;
    if (den > 0) {
      t1 = std::min(t1, t);
    } else {
      t0 = std::max(t0, t);
    }
    if (t0 > t1 + kEps) {
      empty = true;
      break;
    }
  }
  if (!empty) return 0.0;
  const auto& vs = p.vertices();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const Point2& u = vs[i];
    const Point2& w = vs[(i + 1) % vs.size()];
    best = std::min({best, point_segment_distance(a, u, w), point_segment_distance(b, u, w),
                     point_segment_distance(u, a, b)});
  }
  return best;
}

}  // namespace wildfire
