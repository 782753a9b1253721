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

#ifndef WILDFIRE_TESTS_SUPPORT_MISOCP_ORACLE_HPP_
#define WILDFIRE_TESTS_SUPPORT_MISOCP_ORACLE_HPP_

#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "wildfire/conic.hpp"

namespace wildfire::testing {

// Random MISOCP with an enumeration oracle: planar blocks x_k restricted to
// a ball whose center and radius are affine in the binaries, one halfspace
// per block, knapsack rows over the binaries, and a linear objective.
struct BallBlock {
  double cx0, cy0, r0;
  std::vector<double> cx, cy, r;  // per binary
  double hx, hy, g;               // h.x <= g
  double qx, qy;                  // objective weights
};

struct RandomMisocp {
  int nbin = 0;
  std::vector<BallBlock> blocks;
  std::vector<double> profit;
  std::vector<std::vector<double>> knap;
  std::vector<double> cap;

  static RandomMisocp generate(std::mt19937_64& rng, int nbin, int nblocks) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    RandomMisocp p;
    p.nbin = nbin;
    for (int k = 0; k < nblocks; ++k) {
      BallBlock b;
      b.cx0 = 2 * u(rng);
      b.cy0 = 2 * u(rng);
      b.r0 = 1.0 + std::abs(u(rng));
      double neg = 0.0;
      for (int i = 0; i < nbin; ++i) {
        const bool touches = u(rng) > 0.2;
        b.cx.push_back(touches ? u(rng) : 0.0);
        b.cy.push_back(touches ? u(rng) : 0.0);
        b.r.push_back(touches ? 0.6 * u(rng) : 0.0);
        neg += std::min(0.0, b.r.back());
      }
      b.r0 = std::max(b.r0, 0.05 - neg);
      const double th = 3.14159265358979 * u(rng);
      b.hx = std::cos(th);
      b.hy = std::sin(th);
      b.g = b.hx * b.cx0 + b.hy * b.cy0 + 0.8 * u(rng);
      b.qx = u(rng);
      b.qy = u(rng);
      p.blocks.push_back(b);
    }
    for (int i = 0; i < nbin; ++i) p.profit.push_back(u(rng));
    const int nk = 1 + static_cast<int>(rng() % 2);
    for (int r = 0; r < nk; ++r) {
      std::vector<double> a;
      double s = 0.0;
      for (int i = 0; i < nbin; ++i) {
        a.push_back(0.1 + std::abs(u(rng)));
        s += a.back();
      }
      p.knap.push_back(a);
      p.cap.push_back(0.4 * s);
    }
    return p;
  }

  conic::ConicModel model() const {
    conic::ConicModel m;
    std::vector<int> b;
    for (int i = 0; i < nbin; ++i) b.push_back(m.add_binary("b" + std::to_string(i)));
    std::vector<conic::Term> obj;
    for (int i = 0; i < nbin; ++i) obj.push_back({b[i], profit[i]});
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      const auto& bl = blocks[k];
      const int x = m.add_variable("x" + std::to_string(k), -100, 100);
      const int y = m.add_variable("y" + std::to_string(k), -100, 100);
      conic::AffineExpr ex = conic::AffineExpr::var(x);
      ex.constant = -bl.cx0;
      conic::AffineExpr ey = conic::AffineExpr::var(y);
      ey.constant = -bl.cy0;
      conic::AffineExpr rad(bl.r0);
      for (int i = 0; i < nbin; ++i) {
        ex.add(b[i], -bl.cx[i]);
        ey.add(b[i], -bl.cy[i]);
        rad.add(b[i], bl.r[i]);
      }
      m.add_soc({ex, ey}, rad);
      m.add_linear({{x, bl.hx}, {y, bl.hy}}, conic::Sense::kLessEqual, bl.g);
      obj.push_back({x, bl.qx});
      obj.push_back({y, bl.qy});
    }
    for (std::size_t r = 0; r < knap.size(); ++r) {
      std::vector<conic::Term> t;
      for (int i = 0; i < nbin; ++i) t.push_back({b[i], knap[r][i]});
      m.add_linear(t, conic::Sense::kLessEqual, cap[r]);
    }
    m.set_objective(conic::ObjectiveSense::kMaximize, obj);
    return m;
  }

  // max q.x over the ball B_r(c) intersected with h.x <= g.
  static std::optional<double> block_max(double cx, double cy, double r, const BallBlock& b) {
    const double qn = std::hypot(b.qx, b.qy);
    const double hn = std::hypot(b.hx, b.hy);
    const double px = qn > 0 ? cx + r * b.qx / qn : cx;
    const double py = qn > 0 ? cy + r * b.qy / qn : cy;
    if (b.hx * px + b.hy * py <= b.g) return b.qx * px + b.qy * py;
    const double s = (b.hx * cx + b.hy * cy - b.g) / hn;
    if (s > r) return std::nullopt;
    const double fx = cx - s * b.hx / hn;
    const double fy = cy - s * b.hy / hn;
    const double half = std::sqrt(std::max(0.0, r * r - s * s));
    const double tx = -b.hy / hn, ty = b.hx / hn;
    const double v1 = b.qx * (fx + half * tx) + b.qy * (fy + half * ty);
    const double v2 = b.qx * (fx - half * tx) + b.qy * (fy - half * ty);
    return std::max(v1, v2);
  }

  std::optional<double> brute_force() const {
    std::optional<double> best;
    for (long mask = 0; mask < (1L << nbin); ++mask) {
      bool ok = true;
      for (std::size_t r = 0; r < knap.size() && ok; ++r) {
        double s = 0.0;
        for (int i = 0; i < nbin; ++i) {
          if (mask >> i & 1) s += knap[r][i];
        }
        ok = s <= cap[r];
      }
      if (!ok) continue;
      double val = 0.0;
      for (int i = 0; i < nbin; ++i) {
        if (mask >> i & 1) val += profit[i];
      }
      for (const auto& bl : blocks) {
        double cx = bl.cx0, cy = bl.cy0, r = bl.r0;
        for (int i = 0; i < nbin; ++i) {
          if (mask >> i & 1) {
            cx += bl.cx[i];
            cy += bl.cy[i];
            r += bl.r[i];
          }
        }
        const auto v = block_max(cx, cy, r, bl);
        if (!v) {
          ok = false;
          break;
        }
        val += *v;
      }
      if (ok && (!best || val > *best)) best = val;
    }
    return best;
  }
};

}  // namespace wildfire::testing

#endif  // WILDFIRE_TESTS_SUPPORT_MISOCP_ORACLE_HPP_
