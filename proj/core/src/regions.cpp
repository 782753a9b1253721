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

#include "wildfire/regions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "wildfire/error.hpp"

namespace wildfire::regions {

namespace {

struct Sample {
  Point2 x;
  double v = 0.0;
};

double sse(double sum, double sq, int n) { return n == 0 ? 0.0 : std::max(0.0, sq - sum * sum / n); }

struct Split {
  double gain = 0.0;
  HalfPlane rule;
};

// Best rule over the candidate orientations; offsets sit midway between
// consecutive distinct projections.
Split best_split(const std::vector<Sample>& data, const std::vector<int>& idx) {
  Split best;
  double sum = 0.0, sq = 0.0;
  for (int i : idx) {
    sum += data[i].v;
    sq += data[i].v * data[i].v;
  }
  const double parent = sse(sum, sq, static_cast<int>(idx.size()));
  const int n = static_cast<int>(idx.size());
  std::vector<std::pair<double, double>> proj(n);
  for (int k = 0; k < kOrientations; ++k) {
    const double a = k * std::numbers::pi / kOrientations;
    const Point2 normal{std::cos(a), std::sin(a)};
    for (int m = 0; m < n; ++m) proj[m] = {dot(normal, data[idx[m]].x), data[idx[m]].v};
    std::sort(proj.begin(), proj.end());
    double ls = 0.0, lq = 0.0;
    for (int m = 0; m + 1 < n; ++m) {
      ls += proj[m].second;
      lq += proj[m].second * proj[m].second;
      const double gap = proj[m + 1].first - proj[m].first;
      if (gap <= 1e-9 * std::max(1.0, std::abs(proj[m].first))) continue;
      const double gain =
          parent - sse(ls, lq, m + 1) - sse(sum - ls, sq - lq, n - m - 1);
      if (gain > best.gain * (1.0 + 1e-12) + 1e-12) {
        best.gain = gain;
        best.rule = {normal, 0.5 * (proj[m].first + proj[m + 1].first)};
      }
    }
  }
  return best;
}

}  // namespace

void Raster::validate() const {
  if (!(cell > 0.0)) throw Error("raster cell size must be positive");
  if (ncols <= 0 || nrows <= 0) throw Error("raster must have at least one row and column");
  if (values.size() != static_cast<std::size_t>(ncols) * nrows) {
    throw Error("raster has " + std::to_string(values.size()) + " values, expected " +
                std::to_string(static_cast<std::size_t>(ncols) * nrows));
  }
  for (double v : values) {
    if (missing(v)) continue;
    if (!(v >= 0.0 && v <= 100.0)) throw Error("raster value " + std::to_string(v) + " is outside [0, 100]");
  }
}

Point2 Raster::center(int row, int col) const {
  return {origin.x + (col + 0.5) * cell, origin.y + (nrows - row - 0.5) * cell};
}

PolytopeH Raster::bbox() const {
  return PolytopeH::box(origin.x, origin.y, origin.x + ncols * cell, origin.y + nrows * cell);
}

Raster rescale_wfpi(const Raster& r, double wind_knots) {
  if (!(wind_knots >= 0.0)) throw Error("wind speed must be nonnegative");
  Raster out = r;
  const double f = 1.0 / (1.0 + 0.6 * wind_knots / 35.0);
  for (double& v : out.values) {
    if (!out.missing(v)) v *= f;
  }
  return out;
}

int RegionTree::num_leaves() const { return static_cast<int>(leaves().size()); }

int RegionTree::depth() const {
  int d = 0;
  for (const auto& n : nodes_) d = std::max(d, n.depth);
  return d;
}

double RegionTree::predict(const Point2& x) const {
  if (nodes_.empty()) throw Error("empty region tree");
  int k = 0;
  while (!nodes_[k].leaf) {
    const auto& n = nodes_[k];
    k = dot(n.rule.normal, x) <= n.rule.rhs ? n.left : n.right;
  }
  return nodes_[k].label;
}

std::vector<int> RegionTree::leaves() const {
  std::vector<int> out;
  if (nodes_.empty()) return out;
  std::vector<int> stack = {0};
  while (!stack.empty()) {
    const int k = stack.back();
    stack.pop_back();
    if (nodes_[k].leaf) {
      out.push_back(k);
    } else {
      stack.push_back(nodes_[k].right);
      stack.push_back(nodes_[k].left);
    }
  }
  return out;
}

std::vector<HalfPlane> RegionTree::path(int node) const {
  std::vector<int> parent(nodes_.size(), -1);
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    if (nodes_[k].leaf) continue;
    parent[nodes_[k].left] = static_cast<int>(k);
    parent[nodes_[k].right] = static_cast<int>(k);
  }
  std::vector<HalfPlane> rows;
  for (int k = node; parent[k] >= 0; k = parent[k]) {
    const auto& p = nodes_[parent[k]];
    if (p.left == k) {
      rows.push_back(p.rule);
    } else {
      rows.push_back({-1.0 * p.rule.normal, -p.rule.rhs});
    }
  }
  std::reverse(rows.begin(), rows.end());
  return rows;
}

RegionTree train_tree(const Raster& r, int depth, double reg) {
  r.validate();
  if (depth < 0) throw Error("tree depth must be nonnegative");
  std::vector<Sample> data;
  for (int i = 0; i < r.nrows; ++i) {
    for (int j = 0; j < r.ncols; ++j) {
      if (!r.missing(r.at(i, j))) data.push_back({r.center(i, j), r.at(i, j)});
    }
  }
  if (data.empty()) throw Error("raster has no valid cells");
  const double total = static_cast<double>(data.size());

  std::vector<TreeNode> nodes;
  std::vector<std::vector<int>> members;
  auto make_leaf = [&](std::vector<int> idx, int d) {
    TreeNode n;
    n.depth = d;
    n.count = static_cast<int>(idx.size());
    double s = 0.0;
    for (int i : idx) s += data[i].v;
    n.label = idx.empty() ? 0.0 : s / idx.size();
    nodes.push_back(n);
    members.push_back(std::move(idx));
    return static_cast<int>(nodes.size()) - 1;
  };
  std::vector<int> all(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) all[i] = static_cast<int>(i);
  make_leaf(std::move(all), 0);

  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (nodes[k].depth >= depth || members[k].size() < 2) continue;
    const Split s = best_split(data, members[k]);
    if (!(s.gain / total > reg)) continue;
    std::vector<int> left, right;
    for (int i : members[k]) {
      (dot(s.rule.normal, data[i].x) <= s.rule.rhs ? left : right).push_back(i);
    }
    const int d = nodes[k].depth + 1;
    const int l = make_leaf(std::move(left), d);
    const int rr = make_leaf(std::move(right), d);
    nodes[k].leaf = false;
    nodes[k].rule = s.rule;
    nodes[k].left = l;
    nodes[k].right = rr;
    members[k].clear();
  }
  return RegionTree(std::move(nodes));
}

double tree_mse(const RegionTree& t, const Raster& r) {
  double s = 0.0;
  int n = 0;
  for (int i = 0; i < r.nrows; ++i) {
    for (int j = 0; j < r.ncols; ++j) {
      const double v = r.at(i, j);
      if (r.missing(v)) continue;
      const double e = t.predict(r.center(i, j)) - v;
      s += e * e;
      ++n;
    }
  }
  return n == 0 ? 0.0 : s / n;
}

RegionSet extract_regions(const RegionTree& t, const PolytopeH& bbox) {
  const double box_area = polygon_area(bbox.vertices());
  std::vector<Region> out;
  for (int leaf : t.leaves()) {
    std::vector<HalfPlane> rows = bbox.rows();
    for (const auto& h : t.path(leaf)) rows.push_back(h);
    const auto poly = halfplane_polygon(rows);
    if (poly.size() < 3 || polygon_area(poly) <= 1e-12 * box_area) continue;
    const double mu = std::clamp(t.nodes()[leaf].label / 100.0, 0.01, 1.0);
    out.push_back({PolytopeH(rows), mu});
  }
  return RegionSet(std::move(out));
}

}  // namespace wildfire::regions
