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


#ifndef WILDFIRE_IO_HPP_
#define WILDFIRE_IO_HPP_

#include <string>
#include <vector>

#include "wildfire/adversary.hpp"
#include "wildfire/grid.hpp"
#include "wildfire/regions.hpp"
#include "wildfire/spread.hpp"

// File formats. Readers throw wildfire::IoError for unreadable files and
// wildfire::Error (message prefixed with the path) for malformed content.
namespace wildfire::io {

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

// ASCII grid: ncols, nrows, xll, yll, cellsize, nodata headers, then rows top
// to bottom.
regions::Raster parse_raster(const std::string& text);
std::string format_raster(const regions::Raster& r);
regions::Raster read_raster(const std::string& path);

// {"regions": [{"rows": [[a1, a2, b], ...], "mu": m}, ...]}
RegionSet parse_regions(const std::string& json);
std::string format_regions(const RegionSet& rs);
RegionSet read_regions(const std::string& path);

// Relative "regions_file" references resolve against base_dir.
Scenario parse_scenario(const std::string& json, const std::string& base_dir = ".");
Scenario read_scenario(const std::string& path);
std::string format_scenario(const Scenario& s);

grid::Grid parse_grid(const std::string& json);
grid::Grid read_grid(const std::string& path);

std::string trajectory_json(const Scenario& s, const FireTrajectory& t);
// element,period,x,y,region,outaged
std::string trajectory_csv(const Scenario& s, const FireTrajectory& t);

// Shortest round-trip decimal form.
std::string fmt(double v);

}  // namespace wildfire::io

#endif  // WILDFIRE_IO_HPP_
