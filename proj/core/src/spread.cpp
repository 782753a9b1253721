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


#include "wildfire/spread.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "wildfire/conic.hpp"
#include "wildfire/error.hpp"
#include "wildfire/solver.hpp"

namespace wildfire {

using conic::kInf;

double SpreadParams::wind_bound() const {
  double w = 0.0;
  for (const auto& v : nominal_wind) w = std::max(w, norm(v));
  return w + epsilon;
}

double SpreadParams::rate_bound(double exponent) const {
  return V * (1.0 + C * std::pow(wind_bound(), exponent));
}

void SpreadParams::validate() const {
  if (!(B > 0.0) || !std::isfinite(B)) throw Error("spread exponent B must be positive");
  if (!(C >= 0.0) || !std::isfinite(C)) throw Error("spread coefficient C must be nonnegative");
  if (!(V > 0.0) || !std::isfinite(V)) throw Error("base rate V must be positive");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw Error("wind uncertainty epsilon must be nonnegative");
  if (nominal_wind.empty()) throw Error("wind schedule needs at least one period");
  for (const auto& w : nominal_wind) {
    if (!std::isfinite(w.x) || !std::isfinite(w.y)) throw Error("wind schedule entry is not finite");
  }
}

RegionSet::RegionSet(std::vector<Region> regions) : regions_(std::move(regions)) {
  if (regions_.empty()) throw Error("region set is empty");
  double xmin = kInf, ymin = kInf, xmax = -kInf, ymax = -kInf;
  double area = 0.0;
  for (std::size_t r = 0; r < regions_.size(); ++r) {
    const double mu = regions_[r].multiplier;
    if (!(mu > 0.0 && mu <= 1.0)) {
      throw Error("region " + std::to_string(r) + " multiplier " + std::to_string(mu) + " outside (0,1]");
    }
    const auto& verts = regions_[r].shape.vertices();
    if (verts.empty()) throw Error("region " + std::to_string(r) + " has no geometry");
    for (const auto& v : verts) {
      xmin = std::min(xmin, v.x);
      ymin = std::min(ymin, v.y);
      xmax = std::max(xmax, v.x);
      ymax = std::max(ymax, v.y);
    }
    area += polygon_area(verts);
  }
  bbox_ = {xmin, ymin, xmax, ymax};
  const double box_area = (xmax - xmin) * (ymax - ymin);
  if (!(box_area > 0.0)) throw Error("regions do not span a box with positive area");
  if (std::abs(area - box_area) > 1e-6 * box_area) {
    throw Error("region areas sum to " + std::to_string(area) + " but bounding box area is " +
                std::to_string(box_area));
  }
  // Equal areas and no interior overlap imply the union is the box.
  std::mt19937_64 rng(0x5eedULL);
  std::uniform_real_distribution<double> ux(xmin, xmax), uy(ymin, ymax);
  const double margin = 1e-9 * std::max({1.0, xmax - xmin, ymax - ymin});
  for (int s = 0; s < 4096; ++s) {
    const Point2 p{ux(rng), uy(rng)};
    int first = -1;
    for (std::size_t r = 0; r < regions_.size(); ++r) {
      if (!contains_h(regions_[r].shape, p, -margin)) continue;
      if (first >= 0) {
        throw Error("regions " + std::to_string(first) + " and " + std::to_string(r) + " overlap");
      }
      first = static_cast<int>(r);
    }
  }
}

RegionSet RegionSet::single(const PolytopeH& box, double multiplier) {
  return RegionSet({Region{box, multiplier}});
}

PolytopeH RegionSet::bbox_polytope() const {
  return PolytopeH::box(bbox_[0], bbox_[1], bbox_[2], bbox_[3]);
}

bool RegionSet::in_bbox(const Point2& x, double tol) const {
  return x.x >= bbox_[0] - tol && x.x <= bbox_[2] + tol && x.y >= bbox_[1] - tol &&
         x.y <= bbox_[3] + tol;
}

int RegionSet::locate(const Point2& x, double tol) const {
  for (std::size_t r = 0; r < regions_.size(); ++r) {
    if (contains_h(regions_[r].shape, x, tol)) return static_cast<int>(r);
  }
  return -1;
}

std::string SpreadVariant::name() const {
  switch (kind) {
    case Kind::kRothermel: return "rothermel-oracle";
    case Kind::kBall: return "ball";
    case Kind::kInnerProduct:
      switch (relaxation) {
        case InnerRelaxation::kMcCormick: return "ip-mc";
        case InnerRelaxation::kRotatedMcCormick: return "ip-rmc";
        case InnerRelaxation::kTwoMinor: return "ip-2m";
        case InnerRelaxation::kRotatedTwoMinor: return "ip-rmc2m";
      }
  }
  return "?";
}

SpreadVariant SpreadVariant::parse(std::string_view name) {
  if (name == "ball") return ball();
  if (name == "rothermel-oracle") return rothermel();
  if (name == "ip-mc") return inner_product(InnerRelaxation::kMcCormick);
  if (name == "ip-rmc") return inner_product(InnerRelaxation::kRotatedMcCormick);
  if (name == "ip-2m") return inner_product(InnerRelaxation::kTwoMinor);
  if (name == "ip-rmc2m") return inner_product(InnerRelaxation::kRotatedTwoMinor);
  throw Error("unknown spread variant '" + std::string(name) + "'");
}

double rothermel_rate(const Point2& d, const Point2& w, double v_loc, const SpreadParams& p) {
  const double len = norm(d);
  if (len == 0.0) return v_loc;
  const double proj = std::max(0.0, dot(d, w) / len);
  return v_loc * (1.0 + p.C * std::pow(proj, p.B));
}

bool rothermel_member(const Point2& x_next, const Point2& x, const Point2& w, double v_loc,
                      const SpreadParams& p) {
  const Point2 d = x_next - x;
  return norm(d) <= rothermel_rate(d, w, v_loc, p) + kSpreadTol;
}

double ball_radius(double nu, double v_loc, const SpreadParams& p) {
  return v_loc + 0.5 * p.C * v_loc * std::pow(nu, p.B);
}

double ball_shift(double nu, double v_loc, const SpreadParams& p) {
  if (p.B == 1.0) return 0.5 * p.C * v_loc;
  if (nu == 0.0) return p.B > 1.0 ? 0.0 : kInf;
  return 0.5 * p.C * v_loc * std::pow(nu, p.B - 1.0);
}

Ball ball_spread(const Point2& w, const Point2& x, double v_loc, const SpreadParams& p,
                 double nominal_speed) {
  const double nu = nominal_speed + p.epsilon;
  return Ball{ball_shift(nu, v_loc, p) * w + x, ball_radius(nu, v_loc, p)};
}

bool angle_member(const Point2& x_next, const Point2& x, const Point2& w, double v_loc,
                  const SpreadParams& p) {
  const double nu = norm(w);
  const Point2 center = nu == 0.0 ? x : ball_shift(nu, v_loc, p) * w + x;
  return norm(x_next - center) <= ball_radius(nu, v_loc, p) + kSpreadTol;
}

namespace {

bool mccormick(const Point2& d, const Point2& w, double z, double r, double e, double tol) {
  const double z1 = std::min(e * (d.x + r) - r * w.x, r * (w.x + e) - e * d.x);
  const double z2 = std::min(e * (d.y + r) - r * w.y, r * (w.y + e) - e * d.y);
  return z <= z1 + z2 + tol;
}

bool rotated_mccormick(const Point2& d, const Point2& w, double z, double r, double e, double tol) {
  const double u = r * (w.x + w.y) - e * (d.x + d.y);
  const double v = r * (w.x - w.y) - e * (d.x - d.y);
  return std::sqrt(u * u + v * v + z * z) <= 2.0 * e * r - z + tol;
}

bool two_minor(const Point2& d, const Point2& w, double z, double r, double e, double tol) {
  if (z <= std::abs(d.x * w.x) + std::abs(d.y * w.y) + tol) return true;
  // Proportional split delta = r^2 t, omega = e^2 t reaches the bound r e.
  const auto share = [](double a, double cap) { return cap > 0.0 ? a * a / (cap * cap) : 0.0; };
  const double need = std::max(share(d.x, r), share(w.x, e)) + std::max(share(d.y, r), share(w.y, e));
  if (need <= 1.0) return z <= r * e + tol;
  return z <= two_minor_max(d, w, r, e) + tol;
}

}  // namespace

double two_minor_max(const Point2& d, const Point2& w_dev, double r_bar, double eps) {
  using conic::AffineExpr;
  // Points a hair outside their balls (within tolerance) are pulled back in.
  const auto clamp = [](Point2 v, double cap) {
    const double n = norm(v);
    return n > cap && n > 0.0 ? (cap / n) * v : v;
  };
  const Point2 dd = clamp(d, r_bar), ww = clamp(w_dev, eps);
  conic::ConicModel m;
  const double dc[2] = {dd.x, dd.y};
  const double wc[2] = {ww.x, ww.y};
  int delta[2], omega[2], zeta[2];
  for (int i = 0; i < 2; ++i) {
    delta[i] = m.add_variable("delta" + std::to_string(i), std::min(dc[i] * dc[i], r_bar * r_bar), r_bar * r_bar);
    omega[i] = m.add_variable("omega" + std::to_string(i), std::min(wc[i] * wc[i], eps * eps), eps * eps);
    zeta[i] = m.add_variable("zeta" + std::to_string(i), -r_bar * eps, r_bar * eps);
  }
  m.add_linear({{delta[0], 1.0}, {delta[1], 1.0}}, conic::Sense::kLessEqual, r_bar * r_bar);
  m.add_linear({{omega[0], 1.0}, {omega[1], 1.0}}, conic::Sense::kLessEqual, eps * eps);
  for (int i = 0; i < 2; ++i) {
    AffineExpr gap = AffineExpr::var(delta[i]);
    gap.add(omega[i], -1.0);
    AffineExpr total = AffineExpr::var(delta[i]);
    total.add(omega[i], 1.0);
    m.add_soc({AffineExpr::var(zeta[i], 2.0), gap}, total);
  }
  m.set_objective(conic::ObjectiveSense::kMaximize, {{zeta[0], 1.0}, {zeta[1], 1.0}});
  solver::SolveOptions opts;
  opts.feas_tol = 1e-10;
  opts.opt_tol = 1e-10;
  opts.max_cut_rounds = 400;
  const auto sol = solver::solve(m, opts);
  if (sol.status == solver::Status::kInfeasible) {
    throw Error("second-order minor system is infeasible");
  }
  return sol.objective;
}

bool ip_relax_member(const Point2& d, const Point2& w_dev, double z, InnerRelaxation rel,
                     double r_bar, double eps, double tol) {
  if (norm(d) > r_bar + tol) {
    throw Error("spread direction norm " + std::to_string(norm(d)) + " exceeds rate bound " +
                std::to_string(r_bar));
  }
  if (norm(w_dev) > eps + tol) {
    throw Error("wind deviation norm " + std::to_string(norm(w_dev)) + " exceeds radius " +
                std::to_string(eps));
  }
  switch (rel) {
    case InnerRelaxation::kMcCormick: return mccormick(d, w_dev, z, r_bar, eps, tol);
    case InnerRelaxation::kRotatedMcCormick: return rotated_mccormick(d, w_dev, z, r_bar, eps, tol);
    case InnerRelaxation::kTwoMinor: return two_minor(d, w_dev, z, r_bar, eps, tol);
    case InnerRelaxation::kRotatedTwoMinor:
      return rotated_mccormick(d, w_dev, z, r_bar, eps, tol) && two_minor(d, w_dev, z, r_bar, eps, tol);
  }
  return false;
}

SpreadVariant recommend_variant(const SpreadParams& p, double wind_bound) {
  const auto inner = SpreadVariant::inner_product(InnerRelaxation::kRotatedTwoMinor);
  if (p.B < 0.5) return inner;
  const double flux = p.C * std::pow(wind_bound, p.B);
  if (p.B < 2.0 && flux >= 0.5 && flux <= 2.0) return inner;
  return SpreadVariant::ball();
}

}  // namespace wildfire
