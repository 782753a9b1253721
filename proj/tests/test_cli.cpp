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

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "support/rasters.hpp"
#include "wildfire/cli.hpp"
#include "wildfire/io.hpp"

using namespace wildfire;
namespace fs = std::filesystem;

namespace {

const std::string kData = WILDFIRE_TEST_DATA;

struct Run {
  int code;
  std::string out, err;
};

Run wf(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("wildfire_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::vector<std::string> lines_of(const std::string& path) {
  std::istringstream in(io::read_text(path));
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> row(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string c; std::getline(ss, c, ',');) out.push_back(c);
  return out;
}

// Three-bus triangle over periods 0..2 with two far-away elements.
void write_small(const fs::path& dir, bool full_only) {
  io::write_text((dir / "grid.json").string(), R"({
    "periods": 3,
    "buses": [{"id": 1, "x": 0, "y": 0}, {"id": 2, "x": 1, "y": 0}, {"id": 3, "x": 0, "y": 1}],
    "lines": [{"id": 1, "from": 1, "to": 2, "reactance": 1, "limit": 100},
              {"id": 2, "from": 1, "to": 3, "reactance": 1, "limit": 100},
              {"id": 3, "from": 3, "to": 2, "reactance": 1, "limit": 100}],
    "generators": [{"bus": 1, "type": "gas", "cap": 200, "cost": 10}],
    "loads": [{"bus": 2, "mw": 60}, {"bus": 3, "mw": 20}]
  })");
  std::string weights = full_only ? R"([{"subset": ["1", "2"], "period": 0, "weight": 1}])"
                                  : R"([{"subset": ["1"], "period": 0, "weight": 1},
                                        {"subset": ["2"], "period": 0, "weight": 1},
                                        {"subset": ["1", "2"], "period": 0, "weight": 1}])";
  io::write_text((dir / "scenario.json").string(), R"({
    "elements": [{"id": "1", "vertices": [[0.9, 0]]}, {"id": "2", "vertices": [[-0.9, 0]]}],
    "spread": {"B": 1, "C": 2.501, "V": 0.05},
    "epsilon": 0, "horizon": 2, "wind": [[0, 0]],
    "ignition": {"mode": "fixed", "point": [0, 0]},
    "bbox": [-1, -1, 1, 1],
    "weights": )" + weights + "}");
}

}  // namespace

TEST_CASE("regions from a half-split raster") {
  const fs::path out = scratch("regions");
  const Run r = wf({"regions", "--raster", kData + "/half_split.asc", "--wind", "0", "--out", out.string()});
  REQUIRE(r.code == cli::kExitOk);
  const RegionSet rs = io::read_regions((out / "regions.json").string());
  REQUIRE(rs.size() == 2);
  CHECK(rs.regions()[0].multiplier == doctest::Approx(0.2));
  CHECK(rs.regions()[1].multiplier == doctest::Approx(0.8));

  io::write_text((out / "flat.asc").string(), io::format_raster(testing::half_split(6, 4, 50.0, 50.0)));
  REQUIRE(wf({"regions", "--raster", (out / "flat.asc").string(), "--out", out.string()}).code == 0);
  CHECK(io::read_regions((out / "regions.json").string()).size() == 1);
}

TEST_CASE("input errors exit with code 2") {
  const Run missing = wf({"regions", "--raster", "/nonexistent/w.asc"});
  CHECK(missing.code == cli::kExitInputError);
  CHECK(missing.err.find("/nonexistent/w.asc") != std::string::npos);
  CHECK(wf({"screen"}).code == cli::kExitInputError);
  CHECK(wf({"screen", "--scenario", kData + "/oracle1.json", "--variant", "cone"}).code ==
        cli::kExitInputError);
  CHECK(wf({"bogus"}).code == cli::kExitInputError);
  CHECK(wf({"--help"}).code == cli::kExitOk);
}

TEST_CASE("screen one element") {
  const fs::path out = scratch("screen1");
  REQUIRE(wf({"screen", "--scenario", kData + "/oracle1.json", "--out", out.string()}).code == 0);
  const auto rows = lines_of((out / "screen.csv").string());
  REQUIRE(rows.size() == 2);
  CHECK(row(rows[1])[3] == "3");
  CHECK(row(rows[1])[6] == "NA");

  std::string text = io::read_text(kData + "/oracle1.json");
  text.replace(text.find("[[0.15, 0]]"), 11, "[[0, 0]]");
  io::write_text((out / "inside.json").string(), text);
  REQUIRE(wf({"screen", "--scenario", (out / "inside.json").string(), "--out", out.string()}).code == 0);
  CHECK(row(lines_of((out / "screen.csv").string())[1])[3] == "0");
}

TEST_CASE("screen covers every subset") {
  const fs::path out = scratch("screen3");
  const Run r = wf({"screen", "--scenario", kData + "/desk/scenario.json", "--out", out.string(), "--workers", "3",
                    "--plot-data"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("violations: 0") != std::string::npos);
  CHECK(lines_of((out / "screen.csv").string()).size() == 8);
  CHECK(fs::exists(out / "plot_outage_times.csv"));
  CHECK(lines_of((out / "plot_spread_sets.csv").string()).size() == 1 + 3 * 360);
}

TEST_CASE("sequence with weights on the full set only matches the base") {
  const fs::path out = scratch("seq_full");
  std::string text = io::read_text(kData + "/desk/scenario.json");
  text.replace(text.find("\"min_time\""), 10,
               R"([{"subset": ["1", "2", "3"], "period": 0, "weight": 1}])");
  io::write_text((out / "s.json").string(), text);
  REQUIRE(wf({"sequence", "--scenario", (out / "s.json").string(), "--grid", kData + "/desk/grid.json", "--out",
              out.string()}).code == 0);
  const auto r = row(lines_of((out / "sequence.csv").string())[1]);
  CHECK(std::stod(r[1]) == doctest::Approx(std::stod(r[2])).epsilon(1e-6));
  CHECK(std::stod(r[2]) > 0.0);
}

TEST_CASE("sequence beats the simultaneous outage") {
  const fs::path out = scratch("seq");
  REQUIRE(wf({"sequence", "--scenario", kData + "/desk/scenario.json", "--grid", kData + "/desk/grid.json",
              "--all-subsets", "--out", out.string()}).code == 0);
  const auto r = row(lines_of((out / "sequence.csv").string())[1]);
  CHECK(std::stod(r[1]) > std::stod(r[2]) + 1.0);
  CHECK(lines_of((out / "outage_counts.csv").string()).size() == 10);
  CHECK(lines_of((out / "weights.csv").string()).size() == 1 + 7 * 9);

  const Run none = wf({"sequence", "--scenario", kData + "/desk/scenario.json", "--grid",
                       kData + "/desk/grid.json", "--out", out.string()});
  CHECK(none.code == cli::kExitInputError);
  CHECK(none.err.find("no weighted subsets") != std::string::npos);
}

TEST_CASE("opf contingency counting") {
  const fs::path dir = scratch("opf");
  auto count = [&](const std::string& mode) {
    const Run r = wf({"opf", "--grid", (dir / "grid.json").string(), "--scenario",
                      (dir / "scenario.json").string(), "--contingencies", mode, "--out", dir.string()});
    REQUIRE(r.code == 0);
    const auto rows = lines_of((dir / "opf.csv").string());
    REQUIRE(rows.size() == 3);
    CHECK(rows[0][0] == '#');
    return row(rows[2]);
  };
  write_small(dir, false);
  CHECK(count("none")[1] == "0");
  CHECK(count("all")[1] == "9");
  write_small(dir, true);
  CHECK(count("all")[1] == "3");

  io::write_text((dir / "t.csv").string(), "subset,tstar\n1,none\n2,none\n3,none\n");
  const auto th = count("threshold:" + (dir / "t.csv").string());
  CHECK(th[1] == "0");
  const auto base = count("none");
  CHECK(th[3] == base[3]);
  CHECK(th[6] == base[6]);

  io::write_text((dir / "grid.json").string(), io::read_text((dir / "grid.json").string()).replace(17, 1, "4"));
  CHECK(wf({"opf", "--grid", (dir / "grid.json").string(), "--scenario", (dir / "scenario.json").string(),
            "--out", dir.string()}).code == cli::kExitInputError);
}

TEST_CASE("export writes a model file") {
  const fs::path out = scratch("export");
  const Run r = wf({"export", "--scenario", kData + "/oracle1.json", "--variant", "ip-rmc", "--out", out.string()});
  REQUIRE(r.code == 0);
  CHECK(fs::file_size(out / "model.txt") > 0);
  CHECK(wf({"export", "--scenario", kData + "/oracle1.json", "--subset", "2", "--out", out.string()}).code ==
        cli::kExitInputError);
}

TEST_CASE("reruns are byte-identical") {
  const std::vector<std::vector<std::string>> cmds = {
      {"regions", "--raster", kData + "/half_split.asc", "--plot-data"},
      {"screen", "--scenario", kData + "/desk/scenario.json", "--workers", "2", "--plot-data"},
      {"opf", "--grid", kData + "/desk/grid.json", "--scenario", kData + "/desk/scenario.json", "--contingencies",
       "all"},
      {"export", "--scenario", kData + "/desk/scenario.json", "--variant", "ip-2m"},
  };
  for (const auto& cmd : cmds) {
    std::map<std::string, std::string> first;
    std::string first_out;
    for (int pass = 0; pass < 2; ++pass) {
      const fs::path out = scratch("det" + std::to_string(pass));
      auto args = cmd;
      args.insert(args.end(), {"--out", out.string()});
      const Run r = wf(args);
      REQUIRE(r.code == 0);
      std::map<std::string, std::string> files;
      for (const auto& f : fs::directory_iterator(out)) files[f.path().filename().string()] = io::read_text(f.path().string());
      if (pass == 0) {
        first = files;
        first_out = r.out;
      } else {
        CHECK(files == first);
        CHECK(r.out == first_out);
      }
    }
  }
}
