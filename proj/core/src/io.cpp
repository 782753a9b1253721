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

#include "wildfire/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "wildfire/error.hpp"

namespace wildfire::io {

using nlohmann::json;

namespace {

Point2 point(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error("expected a point [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json point_json(const Point2& p) { return json::array({p.x, p.y}); }

std::vector<double> series(const json& j, int periods, const std::string& what) {
  if (j.is_number()) return std::vector<double>(periods, j.get<double>());
  if (!j.is_array()) throw Error(what + " must be a number or an array");
  std::vector<double> v = j.get<std::vector<double>>();
  if (static_cast<int>(v.size()) != periods) {
    throw Error(what + " has " + std::to_string(v.size()) + " entries, expected " +
                std::to_string(periods));
  }
  return v;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("invalid JSON: ") + e.what());
  }
}

// Re-raises content errors with the path in front.
template <typename F>
auto with_path(const std::string& path, F&& f) {
  const std::string text = read_text(path);
  try {
    return f(text);
  } catch (const IoError&) {
    throw;
  } catch (const json::exception& e) {
    throw Error(path + ": " + e.what());
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

json regions_json(const RegionSet& rs) {
  json arr = json::array();
  for (const auto& r : rs.regions()) {
    json rows = json::array();
    for (const auto& h : r.shape.rows()) rows.push_back(json::array({h.normal.x + 0.0, h.normal.y + 0.0, h.rhs + 0.0}));
    arr.push_back({{"rows", rows}, {"mu", r.multiplier}});
  }
  return arr;
}

RegionSet regions_from(const json& arr) {
  if (!arr.is_array()) throw Error("regions must be an array");
  std::vector<Region> out;
  for (const auto& r : arr) {
    std::vector<HalfPlane> rows;
    for (const auto& row : r.at("rows")) {
      if (row.size() != 3) throw Error("region rows are [a1, a2, b]");
      rows.push_back({{row[0].get<double>(), row[1].get<double>()}, row[2].get<double>()});
    }
    out.push_back({PolytopeH(std::move(rows)), r.at("mu").get<double>()});
  }
  return RegionSet(std::move(out));
}

}  // namespace

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v + 0.0);  // no "-0"
  return std::string(buf, res.ptr);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot write file");
  out << text;
  if (!out) throw IoError(path, "write failed");
}

regions::Raster parse_raster(const std::string& text) {
  std::istringstream in(text);
  regions::Raster r;
  bool has[6] = {false, false, false, false, false, false};
  const char* keys[6] = {"ncols", "nrows", "xll", "yll", "cellsize", "nodata"};
  for (int n = 0; n < 6; ++n) {
    std::string key;
    double v = 0.0;
    if (!(in >> key >> v)) throw Error("raster header is incomplete");
    for (auto& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (key == "xllcorner") key = "xll";
    if (key == "yllcorner") key = "yll";
    if (key == "nodata_value") key = "nodata";
    int k = 0;
    while (k < 6 && key != keys[k]) ++k;
    if (k == 6) throw Error("unknown raster header '" + key + "'");
    has[k] = true;
    switch (k) {
      case 0: r.ncols = static_cast<int>(v); break;
      case 1: r.nrows = static_cast<int>(v); break;
      case 2: r.origin.x = v; break;
      case 3: r.origin.y = v; break;
      case 4: r.cell = v; break;
      default: r.nodata = v; break;
    }
  }
  for (int k = 0; k < 6; ++k) {
    if (!has[k]) throw Error(std::string("raster header lacks '") + keys[k] + "'");
  }
  double v = 0.0;
  while (in >> v) r.values.push_back(v);
  if (!in.eof()) throw Error("raster has a non-numeric value");
  r.validate();
  return r;
}

std::string format_raster(const regions::Raster& r) {
  std::ostringstream out;
  out << "ncols " << r.ncols << "\nnrows " << r.nrows << "\nxll " << fmt(r.origin.x) << "\nyll "
      << fmt(r.origin.y) << "\ncellsize " << fmt(r.cell) << "\nnodata " << fmt(r.nodata) << '\n';
  for (int i = 0; i < r.nrows; ++i) {
    for (int j = 0; j < r.ncols; ++j) out << (j ? " " : "") << fmt(r.at(i, j));
    out << '\n';
  }
  return out.str();
}

regions::Raster read_raster(const std::string& path) {
  return with_path(path, [](const std::string& t) { return parse_raster(t); });
}

RegionSet parse_regions(const std::string& text) {
  const json j = parse_json(text);
  return regions_from(j.is_object() ? j.at("regions") : j);
}

std::string format_regions(const RegionSet& rs) {
  return json{{"regions", regions_json(rs)}}.dump(2) + "\n";
}

RegionSet read_regions(const std::string& path) {
  return with_path(path, [](const std::string& t) { return parse_regions(t); });
}

Scenario parse_scenario(const std::string& text, const std::string& base_dir) {
  const json j = parse_json(text);
  Scenario s;
  for (const auto& e : j.at("elements")) {
    std::vector<Point2> verts;
    for (const auto& v : e.at("vertices")) verts.push_back(point(v));
    const json& id = e.at("id");
    s.elements.push_back({id.is_string() ? id.get<std::string>() : id.dump(), PolytopeV(std::move(verts))});
  }
  const json& sp = j.at("spread");
  s.spread.B = sp.at("B").get<double>();
  s.spread.C = sp.at("C").get<double>();
  s.spread.V = sp.at("V").get<double>();
  s.spread.epsilon = j.value("epsilon", sp.value("epsilon", 0.0));
  if (j.contains("wind")) {
    for (const auto& w : j.at("wind")) s.spread.nominal_wind.push_back(point(w));
  }
  if (j.contains("horizon")) {
    const int T = j.at("horizon").get<int>();
    if (T < 0) throw Error("horizon must be nonnegative");
    if (s.spread.nominal_wind.empty()) {
      s.spread.nominal_wind.assign(T + 1, {0.0, 0.0});
    } else if (s.spread.nominal_wind.size() == 1) {
      s.spread.nominal_wind.assign(T + 1, s.spread.nominal_wind[0]);
    } else if (static_cast<int>(s.spread.nominal_wind.size()) != T + 1) {
      throw Error("wind schedule needs horizon + 1 entries");
    }
  }
  if (s.spread.nominal_wind.empty()) throw Error("scenario needs a horizon or a wind schedule");

  if (j.contains("ignition")) {
    const json& ig = j.at("ignition");
    const std::string mode = ig.value("mode", "fixed");
    if (mode == "fixed") {
      s.ignition = IgnitionMode::kFixed;
    } else if (mode == "free") {
      s.ignition = IgnitionMode::kFree;
    } else {
      throw Error("ignition mode must be 'fixed' or 'free'");
    }
    if (ig.contains("point")) s.ignition_point = point(ig.at("point"));
    else if (s.ignition == IgnitionMode::kFixed) throw Error("fixed ignition needs a point");
  }

  if (j.contains("regions")) {
    s.regions = regions_from(j.at("regions"));
  } else if (j.contains("regions_file")) {
    std::filesystem::path p(j.at("regions_file").get<std::string>());
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    s.regions = read_regions(p.string());
  } else if (j.contains("bbox")) {
    const auto b = j.at("bbox").get<std::vector<double>>();
    if (b.size() != 4) throw Error("bbox is [xmin, ymin, xmax, ymax]");
    s.regions = RegionSet::single(PolytopeH::box(b[0], b[1], b[2], b[3]), j.value("mu", 1.0));
  } else {
    throw Error("scenario needs regions, regions_file or bbox");
  }

  s.min_time = true;
  if (j.contains("weights") && !(j.at("weights").is_string() && j.at("weights") == "min_time")) {
    s.min_time = false;
    for (const auto& w : j.at("weights")) {
      SubsetMask mask = 0;
      for (const auto& id : w.at("subset")) {
        const std::string name = id.is_string() ? id.get<std::string>() : id.dump();
        int e = 0;
        while (e < s.num_elements() && s.elements[e].id != name) ++e;
        if (e == s.num_elements()) throw Error("weight references unknown element '" + name + "'");
        mask |= SubsetMask{1} << e;
      }
      s.weights[{mask, w.at("period").get<int>()}] += w.at("weight").get<double>();
    }
  }
  s.validate();
  return s;
}

Scenario read_scenario(const std::string& path) {
  const std::string dir = std::filesystem::path(path).parent_path().string();
  return with_path(path, [&](const std::string& t) { return parse_scenario(t, dir.empty() ? "." : dir); });
}

std::string format_scenario(const Scenario& s) {
  json j;
  json els = json::array();
  for (const auto& e : s.elements) {
    json vs = json::array();
    for (const auto& v : e.shape.vertices()) vs.push_back(point_json(v));
    els.push_back({{"id", e.id}, {"vertices", vs}});
  }
  j["elements"] = els;
  j["spread"] = {{"B", s.spread.B}, {"C", s.spread.C}, {"V", s.spread.V}};
  j["epsilon"] = s.spread.epsilon;
  json wind = json::array();
  for (const auto& w : s.spread.nominal_wind) wind.push_back(point_json(w));
  j["wind"] = wind;
  j["ignition"] = {{"mode", s.ignition == IgnitionMode::kFixed ? "fixed" : "free"},
                   {"point", point_json(s.ignition_point)}};
  j["regions"] = regions_json(s.regions);
  if (s.min_time) {
    j["weights"] = "min_time";
  } else {
    json ws = json::array();
    for (const auto& [key, c] : s.weights) {
      json ids = json::array();
      for (int e = 0; e < s.num_elements(); ++e) {
        if (key.first >> e & 1u) ids.push_back(s.elements[e].id);
      }
      ws.push_back({{"subset", ids}, {"period", key.second}, {"weight", c}});
    }
    j["weights"] = ws;
  }
  return j.dump(2) + "\n";
}

grid::Grid parse_grid(const std::string& text) {
  const json j = parse_json(text);
  grid::Grid g;
  g.periods = j.value("periods", 1);
  if (g.periods < 1) throw Error("grid needs at least one period");
  g.shed_cost = j.value("shed_cost", 10000.0);
  for (const auto& b : j.at("buses")) {
    g.buses.push_back({b.at("id").get<int>(), {b.value("x", 0.0), b.value("y", 0.0)}});
  }
  for (const auto& l : j.value("lines", json::array())) {
    g.lines.push_back({l.at("id").get<int>(), l.at("from").get<int>(), l.at("to").get<int>(),
                       l.at("reactance").get<double>(), l.at("limit").get<double>()});
  }
  for (const auto& x : j.value("generators", json::array())) {
    grid::Generator gen;
    gen.bus = x.at("bus").get<int>();
    gen.type = x.value("type", "");
    gen.cap = series(x.at("cap"), g.periods, "generator cap");
    if (x.contains("energy_cap") && !x.at("energy_cap").is_null()) gen.energy_cap = x.at("energy_cap").get<double>();
    gen.cost = x.value("cost", 0.0);
    g.generators.push_back(std::move(gen));
  }
  for (const auto& x : j.value("storage", json::array())) {
    grid::Storage st;
    st.bus = x.at("bus").get<int>();
    st.energy_cap = series(x.at("energy_cap"), g.periods, "storage energy cap");
    st.power_cap = series(x.at("power_cap"), g.periods, "storage power cap");
    st.eta_charge = x.value("eta_charge", 1.0);
    st.eta_discharge = x.value("eta_discharge", 1.0);
    st.cost = x.value("cost", 0.0);
    g.storage.push_back(std::move(st));
  }
  for (const auto& x : j.value("loads", json::array())) {
    g.loads.push_back({x.at("bus").get<int>(), series(x.at("mw"), g.periods, "load")});
  }
  g.validate();
  return g;
}

grid::Grid read_grid(const std::string& path) {
  return with_path(path, [](const std::string& t) { return parse_grid(t); });
}

std::string trajectory_json(const Scenario& s, const FireTrajectory& t) {
  json j;
  j["ignition"] = point_json(t.ignition);
  json wind = json::array();
  for (const auto& w : t.wind) wind.push_back(point_json(w));
  j["wind"] = wind;
  json els = json::array();
  for (std::size_t e = 0; e < t.path.size(); ++e) {
    json path = json::array();
    for (const auto& p : t.path[e]) path.push_back(point_json(p));
    const int op = t.outage_period(static_cast<int>(e));
    els.push_back({{"id", s.elements[e].id},
                   {"outage_period", op < 0 ? json(nullptr) : json(op)},
                   {"path", path}});
  }
  j["elements"] = els;
  j["issues"] = t.issues;
  return j.dump(2) + "\n";
}

std::string trajectory_csv(const Scenario& s, const FireTrajectory& t) {
  std::ostringstream out;
  out << "element,period,x,y,region,outaged\n";
  for (std::size_t e = 0; e < t.path.size(); ++e) {
    for (std::size_t k = 0; k < t.path[e].size(); ++k) {
      out << s.elements[e].id << ',' << k << ',' << fmt(t.path[e][k].x) << ','
          << fmt(t.path[e][k].y) << ',';
      if (e < t.region.size() && k < t.region[e].size()) out << t.region[e][k];
      out << ',';
      if (e < t.outage.size() && k < t.outage[e].size()) out << t.outage[e][k];
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace wildfire::io
