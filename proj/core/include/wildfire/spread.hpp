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


#ifndef WILDFIRE_SPREAD_HPP_
#define WILDFIRE_SPREAD_HPP_

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "wildfire/geometry.hpp"

namespace wildfire {

// Wind-driven spread-rate constants and the nominal wind schedule. Periods
// are hours; rates are miles per hour.
struct SpreadParams {
  double B = 1.0;        // wind exponent
  double C = 0.0;        // wind coefficient
  double V = 1.0;        // base rate of spread
  double epsilon = 0.0;  // wind uncertainty radius
  std::vector<Point2> nominal_wind;  // one entry per period 0..T

  int horizon() const { return static_cast<int>(nominal_wind.size()) - 1; }
  // Largest wind magnitude admitted by the uncertainty set.
  double wind_bound() const;
  // Largest one-period spread distance for the given exponent.
  double rate_bound(double exponent) const;
  // Throws wildfire::Error when a constant is out of range.
  void validate() const;
};

struct Region {
  PolytopeH shape;
  double multiplier = 1.0;  // in (0, 1]
};

// Polyhedral partition of a box with per-region rate multipliers.
class RegionSet {
 public:
  RegionSet() = default;
  // Throws wildfire::Error unless the regions tile their bounding box.
  explicit RegionSet(std::vector<Region> regions);
  static RegionSet single(const PolytopeH& box, double multiplier = 1.0);

  const std::vector<Region>& regions() const { return regions_; }
  int size() const { return static_cast<int>(regions_.size()); }
  // xmin, ymin, xmax, ymax.
  const std::array<double, 4>& bbox() const { return bbox_; }
  PolytopeH bbox_polytope() const;
  bool in_bbox(const Point2& x, double tol = kGeometryTol) const;
  // First region containing x, or -1.
  int locate(const Point2& x, double tol = kGeometryTol) const;

 private:
  std::vector<Region> regions_;
  std::array<double, 4> bbox_{0.0, 0.0, 0.0, 0.0};
};

enum class InnerRelaxation { kMcCormick, kRotatedMcCormick, kTwoMinor, kRotatedTwoMinor };

struct SpreadVariant {
  enum class Kind { kRothermel, kInnerProduct, kBall };
  Kind kind = Kind::kBall;
  InnerRelaxation relaxation = InnerRelaxation::kRotatedTwoMinor;

  static SpreadVariant rothermel() { return {Kind::kRothermel, InnerRelaxation::kRotatedTwoMinor}; }
  static SpreadVariant ball() { return {Kind::kBall, InnerRelaxation::kRotatedTwoMinor}; }
  static SpreadVariant inner_product(InnerRelaxation r) { return {Kind::kInnerProduct, r}; }

  // Command-line names: ball, ip-mc, ip-rmc, ip-2m, ip-rmc2m, rothermel-oracle.
  std::string name() const;
  static SpreadVariant parse(std::string_view name);
  bool operator==(const SpreadVariant&) const = default;
};

inline constexpr double kSpreadTol = 1e-9;

// V_loc (1 + C max(0, <d,w>/|d|)^B); V_loc when d = 0.
double rothermel_rate(const Point2& d, const Point2& w, double v_loc, const SpreadParams& p);
bool rothermel_member(const Point2& x_next, const Point2& x, const Point2& w, double v_loc,
                      const SpreadParams& p);

// Radius V_loc + (C V_loc / 2) nu^B and wind shift (C V_loc / 2) nu^(B-1) of
// the ball relaxations.
double ball_radius(double nu, double v_loc, const SpreadParams& p);
double ball_shift(double nu, double v_loc, const SpreadParams& p);

// Ball reachable from x under wind w, sized for the worst admissible wind
// magnitude nominal_speed + epsilon.
Ball ball_spread(const Point2& w, const Point2& x, double v_loc, const SpreadParams& p,
                 double nominal_speed);
bool angle_member(const Point2& x_next, const Point2& x, const Point2& w, double v_loc,
                  const SpreadParams& p);

// Whether (d, w_dev, z) satisfies the named relaxation of z <= <d, w_dev>
// over |d| <= r_bar, |w_dev| <= eps. Throws wildfire::Error when d or w_dev
// lies outside its ball.
bool ip_relax_member(const Point2& d, const Point2& w_dev, double z, InnerRelaxation rel,
                     double r_bar, double eps, double tol = kSpreadTol);
// Largest sum of the minor proxies at fixed (d, w_dev), by conic solve.
double two_minor_max(const Point2& d, const Point2& w_dev, double r_bar, double eps);

SpreadVariant recommend_variant(const SpreadParams& p, double wind_bound);

}  // namespace wildfire

#endif  // WILDFIRE_SPREAD_HPP_
