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

#ifndef WILDFIRE_CONIC_HPP_
#define WILDFIRE_CONIC_HPP_

#include <limits>
#include <span>
#include <string>
#include <vector>

namespace wildfire::conic {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { kLessEqual, kGreaterEqual, kEqual };
enum class ObjectiveSense { kMinimize, kMaximize };

struct Term {
  int var = -1;
  double coef = 0.0;
};

// Sum of coef * var plus a constant. Terms are kept sorted by variable index
// with duplicates merged once added to a model.
struct AffineExpr {
  std::vector<Term> terms;
  double constant = 0.0;

  AffineExpr() = default;
  AffineExpr(double c) : constant(c) {}  // NOLINT(runtime/explicit)
  AffineExpr(std::vector<Term> t, double c = 0.0) : terms(std::move(t)), constant(c) {}

  static AffineExpr var(int v, double coef = 1.0) { return AffineExpr({{v, coef}}); }
  AffineExpr& add(int v, double coef) { terms.push_back({v, coef}); return *this; }
  AffineExpr& add(const AffineExpr& e, double scale = 1.0);
  double eval(std::span<const double> x) const;
  void canonicalize();
};

struct Variable {
  std::string name;
  double lb = 0.0;
  double ub = kInf;
  bool binary = false;
  int priority = 0;
};

struct LinearConstraint {
  std::vector<Term> terms;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
};

// ||lhs||_2 <= rhs, each entry affine in the variables.
struct SocConstraint {
  std::vector<AffineExpr> lhs;
  AffineExpr rhs;

  double violation(std::span<const double> x) const;
};

struct RationalExponent {
  int num = 1;
  int den = 1;
  int rho = 0;

  double value() const { return static_cast<double>(num) / den; }
};

// x <= y^{num/den}, y >= 0 implied.
struct PowerConstraint {
  int x = -1;
  int y = -1;
  RationalExponent exponent;
};

class ConicModel {
 public:
  int add_variable(std::string name, double lb, double ub);
  int add_variable(Variable v);
  int add_binary(std::string name, int priority = 0);
  void set_bounds(int var, double lb, double ub);
  void set_priority(int var, int priority);

  void add_linear(std::vector<Term> terms, Sense sense, double rhs);
  // Moves the expression constant to the right-hand side.
  void add_linear(const AffineExpr& expr, Sense sense, double rhs);
  void add_soc(std::vector<AffineExpr> lhs, AffineExpr rhs);
  void add_power(int x, int y, RationalExponent exponent);
  void set_objective(ObjectiveSense sense, std::vector<Term> terms);

  int num_variables() const { return static_cast<int>(variables_.size()); }
  const std::vector<Variable>& variables() const { return variables_; }
  const Variable& variable(int v) const { return variables_.at(v); }
  const std::vector<LinearConstraint>& linear() const { return linear_; }
  const std::vector<SocConstraint>& socs() const { return socs_; }
  const std::vector<PowerConstraint>& powers() const { return powers_; }
  ObjectiveSense objective_sense() const { return objective_sense_; }
  const std::vector<Term>& objective() const { return objective_; }
  int num_binaries() const;

  // Index of the variable with this name, or -1.
  int find(const std::string& name) const;

  double objective_value(std::span<const double> x) const;
  // Largest violation over bounds, linear, SOC and power constraints.
  double max_violation(std::span<const double> x) const;

  // Throws wildfire::Error on dangling references or invalid exponents.
  void validate() const;

 private:
  void check_var(int v) const;

  std::vector<Variable> variables_;
  std::vector<LinearConstraint> linear_;
  std::vector<SocConstraint> socs_;
  std::vector<PowerConstraint> powers_;
  ObjectiveSense objective_sense_ = ObjectiveSense::kMinimize;
  std::vector<Term> objective_;
};

// Best N/D approximation of r in (0,1] with D <= 2^max_rho; ties go to the
// smallest D.
RationalExponent rationalize(double r, int max_rho);

// Replaces every power constraint by rho rotated second-order cones and
// rho - 1 nonnegative proxy variables.
ConicModel rewrite_power(const ConicModel& model);

// Adds a proxy u = arg (u >= 0) and the power constraint x <= u^{e}.
// Returns the proxy index.
int add_power_of_affine(ConicModel& model, int x, const AffineExpr& arg,
                        RationalExponent e, const std::string& proxy_name);

// Midpoint steps realizing x <= y^{N/D}. Operands 0, 1, 2 denote x, y and the
// constant 1; operand 3 + k denotes the k-th earlier step. The last step's
// output is x itself.
struct TowerStep {
  int a = 0;
  int b = 0;
};
std::vector<TowerStep> power_tower(const RationalExponent& e);

std::string export_model_string(const ConicModel& model);
ConicModel import_model_string(const std::string& text);
void export_model(const ConicModel& model, const std::string& path);
ConicModel import_model(const std::string& path);

}  // namespace wildfire::conic

#endif  // WILDFIRE_CONIC_HPP_
