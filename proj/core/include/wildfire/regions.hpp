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


#ifndef WILDFIRE_REGIONS_HPP_
#define WILDFIRE_REGIONS_HPP_

#include <vector>

#include "wildfire/geometry.hpp"
#include "wildfire/spread.hpp"

namespace wildfire::regions {

// Row 0 is the top (largest y) row, as in ASCII grid files.
struct Raster {
  Point2 origin;  // lower-left corner
  double cell = 1.0;
  int ncols = 0;
  int nrows = 0;
  double nodata = -9999.0;
  std::vector<double> values;

  void validate() const;
  bool missing(double v) const { return v == nodata; }
  double at(int row, int col) const { return values[static_cast<std::size_t>(row) * ncols + col]; }
  Point2 center(int row, int col) const;
  PolytopeH bbox() const;
};

// Removes the wind contribution: v -> v / (1 + 0.6 s / 35), s in knots.
Raster rescale_wfpi(const Raster& r, double wind_knots);

struct TreeNode {
  bool leaf = true;
  HalfPlane rule;  // points with normal . x <= rhs go left
  int left = -1;
  int right = -1;
  int depth = 0;
  double label = 0.0;
  int count = 0;
};

class RegionTree {
 public:
  RegionTree() = default;
  explicit RegionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  int num_leaves() const;
  int depth() const;
  double predict(const Point2& x) const;
  // Leaf node indices in depth-first order, left before right.
  std::vector<int> leaves() const;
  // Conjunction of rules from the root to node.
  std::vector<HalfPlane> path(int node) const;

 private:
  std::vector<TreeNode> nodes_;
};

inline constexpr int kOrientations = 16;

// Greedy top-down bivariate regression tree. A split is kept only when it
// lowers the mean squared error over all cells by more than `reg`.
RegionTree train_tree(const Raster& r, int depth, double reg);

// Mean squared error of the tree over the raster's non-missing cells.
double tree_mse(const RegionTree& t, const Raster& r);

// One region per leaf clipped to bbox, multiplier = label / 100 kept in [0.01, 1].
RegionSet extract_regions(const RegionTree& t, const PolytopeH& bbox);

}  // namespace wildfire::regions

#endif  // WILDFIRE_REGIONS_HPP_
