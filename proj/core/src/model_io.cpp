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

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "wildfire/conic.hpp"
#include "wildfire/error.hpp"

namespace wildfire::conic {
namespace {

constexpr const char* kMagic = "WFMODEL";
constexpr int kVersion = 1;

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* sense_token(Sense s) {
  switch (s) {
    case Sense::kLessEqual: return "<=";
    case Sense::kGreaterEqual: return ">=";
    case Sense::kEqual: return "=";
  }
  return "?";
}

void write_terms(std::ostringstream& os, const std::vector<Term>& terms,
                 const std::vector<Variable>& vars) {
  for (const auto& t : terms) os << ' ' << fmt(t.coef) << ' ' << vars[t.var].name;
}

void write_rowspec(std::ostringstream& os, const AffineExpr& e, const std::vector<Variable>& vars) {
  os << " [ " << fmt(e.constant);
  write_terms(os, e.terms, vars);
  os << " ]";
}

bool valid_name(const std::string& name) {
  if (name.empty() || name == "[" || name == "]") return false;
  for (char c : name) {
    if (static_cast<unsigned char>(c) <= ' ') return false;
  }
  return true;
}

class LineParser {
 public:
  LineParser(const std::string& line, int lineno) : in_(line), lineno_(lineno) {}

  bool next(std::string& tok) { return static_cast<bool>(in_ >> tok); }

  std::string word(const char* what) {
    std::string tok;
    if (!next(tok)) fail(std::string("expected ") + what);
    return tok;
  }

  double number(const char* what) {
    const std::string tok = word(what);
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0' || errno == ERANGE) fail("malformed number '" + tok + "'");
    return v;
  }

  long integer(const char* what) {
    const std::string tok = word(what);
    char* end = nullptr;
    const long v = std::strtol(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0') fail("malformed integer '" + tok + "'");
    return v;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error("model line " + std::to_string(lineno_) + ": " + msg);
  }

 private:
  std::istringstream in_;
  int lineno_;
};

}  // namespace

std::string export_model_string(const ConicModel& model) {
  model.validate();
  const auto& vars = model.variables();
  std::unordered_set<std::string> seen;
  for (const auto& v : vars) {
    if (!valid_name(v.name)) throw Error("variable name '" + v.name + "' cannot be serialized");
    if (!seen.insert(v.name).second) throw Error("duplicate variable name '" + v.name + "'");
  }
  std::ostringstream os;
  os << kMagic << ' ' << kVersion << '\n';
  os << "DIMS " << vars.size() << ' ' << model.linear().size() << ' ' << model.socs().size() << ' '
     << model.powers().size() << '\n';
  for (const auto& v : vars) {
    os << "VAR " << v.name << ' ' << fmt(v.lb) << ' ' << fmt(v.ub);
    if (v.binary) os << " BIN";
    if (v.priority != 0) os << " PRIO " << v.priority;
    os << '\n';
  }
  for (const auto& row : model.linear()) {
    os << "LIN " << sense_token(row.sense) << ' ' << fmt(row.rhs);
    write_terms(os, row.terms, vars);
    os << '\n';
  }
  for (const auto& soc : model.socs()) {
    os << "SOC dim " << soc.lhs.size();
    for (const auto& e : soc.lhs) write_rowspec(os, e, vars);
    write_rowspec(os, soc.rhs, vars);
    os << '\n';
  }
  for (const auto& p : model.powers()) {
    os << "POW " << vars[p.x].name << ' ' << vars[p.y].name << ' ' << p.exponent.num << ' '
       << p.exponent.den << ' ' << p.exponent.rho << '\n';
  }
  if (!model.objective().empty()) {
    os << "OBJ " << (model.objective_sense() == ObjectiveSense::kMaximize ? "max" : "min");
    write_terms(os, model.objective(), vars);
    os << '\n';
  }
  return os.str();
}

ConicModel import_model_string(const std::string& text) {
  ConicModel model;
  std::unordered_map<std::string, int> index;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool header = false;

  auto lookup = [&](LineParser& lp, const std::string& name) {
    auto it = index.find(name);
    if (it == index.end()) lp.fail("undeclared variable '" + name + "'");
    return it->second;
  };
  auto read_terms = [&](LineParser& lp) {
    std::vector<Term> terms;
    std::string tok;
    while (lp.next(tok)) {
      char* end = nullptr;
      const double c = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0') lp.fail("malformed coefficient '" + tok + "'");
      terms.push_back({lookup(lp, lp.word("variable")), c});
    }
    return terms;
  };
  auto read_rowspec = [&](LineParser& lp) {
    if (lp.word("'['") != "[") lp.fail("expected '['");
    AffineExpr e(lp.number("constant"));
    while (true) {
      const std::string tok = lp.word("']'");
      if (tok == "]") break;
      char* end = nullptr;
      const double c = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0') lp.fail("malformed coefficient '" + tok + "'");
      e.terms.push_back({lookup(lp, lp.word("variable")), c});
    }
    return e;
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    LineParser lp(line, lineno);
    const std::string kind = lp.word("record");
    if (!header) {
      if (kind != kMagic || lp.integer("version") != kVersion) lp.fail("missing model header");
      header = true;
      continue;
    }
    if (kind == "DIMS") {
      continue;
    } else if (kind == "VAR") {
      Variable v;
      v.name = lp.word("name");
      v.lb = lp.number("lower bound");
      v.ub = lp.number("upper bound");
      std::string tok;
      while (lp.next(tok)) {
        if (tok == "BIN") {
          v.binary = true;
        } else if (tok == "PRIO") {
          v.priority = static_cast<int>(lp.integer("priority"));
        } else {
          lp.fail("unknown VAR attribute '" + tok + "'");
        }
      }
      if (index.count(v.name)) lp.fail("duplicate variable '" + v.name + "'");
      index[v.name] = model.add_variable(v);
    } else if (kind == "LIN") {
      const std::string s = lp.word("sense");
      Sense sense;
      if (s == "<=") sense = Sense::kLessEqual;
      else if (s == ">=") sense = Sense::kGreaterEqual;
      else if (s == "=") sense = Sense::kEqual;
      else lp.fail("unknown sense '" + s + "'");
      const double rhs = lp.number("rhs");
      model.add_linear(read_terms(lp), sense, rhs);
    } else if (kind == "SOC") {
      if (lp.word("'dim'") != "dim") lp.fail("expected 'dim'");
      const long d = lp.integer("dimension");
      if (d < 0) lp.fail("negative dimension");
      std::vector<AffineExpr> lhs;
      for (long k = 0; k < d; ++k) lhs.push_back(read_rowspec(lp));
      AffineExpr rhs = read_rowspec(lp);
      model.add_soc(std::move(lhs), std::move(rhs));
    } else if (kind == "POW") {
      const int x = lookup(lp, lp.word("x variable"));
      const int y = lookup(lp, lp.word("y variable"));
      RationalExponent e;
      e.num = static_cast<int>(lp.integer("N"));
      e.den = static_cast<int>(lp.integer("D"));
      e.rho = static_cast<int>(lp.integer("rho"));
      model.add_power(x, y, e);
    } else if (kind == "OBJ") {
      const std::string s = lp.word("objective sense");
      if (s != "min" && s != "max") lp.fail("unknown objective sense '" + s + "'");
      model.set_objective(s == "max" ? ObjectiveSense::kMaximize : ObjectiveSense::kMinimize,
                          read_terms(lp));
    } else {
      lp.fail("unknown record '" + kind + "'");
    }
  }
  if (!header) throw Error("model text is missing the header line");
  model.validate();
  return model;
}

void export_model(const ConicModel& model, const std::string& path) {
  const std::string text = export_model_string(model);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open for writing");
  out << text;
  if (!out) throw IoError(path, "write failed");
}

ConicModel import_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return import_model_string(buf.str());
}

}  // namespace wildfire::conic
