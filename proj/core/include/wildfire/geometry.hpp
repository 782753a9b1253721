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

#ifndef WILDFIRE_GEOMETRY_HPP_
#define WILDFIRE_GEOMETRY_HPP_

#include <cmath>
#include <optional>
#include <vector>

namespace wildfire {

// Planar point or vector, in miles (easting, northing).
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  Point2& operator+=(const Point2& o) { x += o.x; y += o.y; return *this; }
  Point2& operator-=(const Point2& o) { x -= o.x; y -= o.y; return *this; }
  Point2& operator*=(double s) { x *= s; y *= s; return *this; }
};

inline Point2 operator+(Point2 a, const Point2& b) { return a += b; }
inline Point2 operator-(Point2 a, const Point2& b) { return a -= b; }
inline Point2 operator*(double s, Point2 a) { return a *= s; }
inline Point2 operator*(Point2 a, double s) { return a *= s; }
inline bool operator==(const Point2& a, const Point2& b) {
  return a.x == b.x && a.y == b.y;
}
inline double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Point2& a) { return std::hypot(a.x, a.y); }

// One inequality a.x <= b of an H-representation.
struct HalfPlane {
  Point2 normal;
  double rhs = 0.0;
};

// Bounded, nonempty polygon {y : A y <= b}.
class PolytopeH {
 public:
  PolytopeH() = default;
  // Throws wildfire::Error if a row is zero or the set is empty or unbounded.
  explicit PolytopeH(std::vector<HalfPlane> rows);

  static PolytopeH box(double xmin, double ymin, double xmax, double ymax);

  const std::vector<HalfPlane>& rows() const { return rows_; }
  // Counter-clockwise vertex loop.
  const std::vector<Point2>& vertices() const { return vertices_; }

 private:
  std::vector<HalfPlane> rows_;
  std::vector<Point2> vertices_;
};

// Convex hull of a finite point list.
class PolytopeV {
 public:
  PolytopeV() = default;
  explicit PolytopeV(std::vector<Point2> vertices);
  const std::vector<Point2>& vertices() const { return vertices_; }

 private:
  std::vector<Point2> vertices_;
};

struct Ball {
  Point2 center;
  double radius = 0.0;
};

inline constexpr double kGeometryTol = 1e-9;

bool contains_h(const PolytopeH& p, const Point2& x, double tol = kGeometryTol);

// Convex-combination weights expressing x over the vertices of v, if any.
std::optional<std::vector<double>> convex_coeffs(const PolytopeV& v, const Point2& x,
                                                 double tol = kGeometryTol);

Ball ball_sum(const Ball& a, const Ball& b);

bool ball_contains(const Ball& b, const Point2& x, double tol = kGeometryTol);

// Clips a convex polygon (vertex loop) by a half-plane.
std::vector<Point2> clip_polygon(const std::vector<Point2>& poly, const HalfPlane& h);

// Vertex loop of the intersection of a half-plane list, empty if infeasible.
// huge bounds the search region; unbounded inputs yield vertices on it.
std::vector<Point2> halfplane_polygon(const std::vector<HalfPlane>& rows, double huge = 1e7);

double polygon_area(const std::vector<Point2>& poly);

double point_segment_distance(const Point2& p, const Point2& a, const Point2& b);

// Euclidean distance from segment [a,b] to the polytope (0 when they meet).
double segment_polytope_distance(const Point2& a, const Point2& b, const PolytopeH& p);

}  // namespace wildfire

#endif  // WILDFIRE_GEOMETRY_HPP_
