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

#include "wildfire/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <utility>

#include "wildfire/error.hpp"
#include "wildfire/lp.hpp"

namespace wildfire::solver {
namespace {

using conic::ConicModel;
using conic::Sense;
using conic::Term;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kIntTol = 1e-6;

Status from_lp(lp::Status s) {
  switch (s) {
    case lp::Status::kOptimal: return Status::kOptimal;
    case lp::Status::kInfeasible: return Status::kInfeasible;
    case lp::Status::kUnbounded: return Status::kUnbounded;
    case lp::Status::kIterLimit: return Status::kIterLimit;
  }
  return Status::kIterLimit;
}

double col_lo(const conic::Variable& v) { return v.binary ? std::max(v.lb, 0.0) : v.lb; }
double col_hi(const conic::Variable& v) { return v.binary ? std::min(v.ub, 1.0) : v.ub; }

// Loads bounds, costs (always minimized) and linear rows.
double load_model(const ConicModel& model, lp::Simplex& lp) {
  const double sign = model.objective_sense() == conic::ObjectiveSense::kMaximize ? -1.0 : 1.0;
  for (int j = 0; j < model.num_variables(); ++j) {
    const auto& v = model.variable(j);
    lp.set_col_bounds(j, col_lo(v), col_hi(v));
  }
  for (const auto& t : model.objective()) lp.set_cost(t.var, sign * t.coef);
  for (const auto& row : model.linear()) {
    double lo = -kInf, hi = kInf;
    if (row.sense != Sense::kLessEqual) lo = row.rhs;
    if (row.sense != Sense::kGreaterEqual) hi = row.rhs;
    lp.add_row(row.terms, lo, hi);
  }
  return sign;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
    case Status::kIterLimit: return "iteration_limit";
  }
  return "unknown";
}

Solution solve_lp(const ConicModel& model, const SolveOptions& opts) {
  model.validate();
  if (!model.socs().empty() || !model.powers().empty()) {
    throw Error("solve_lp: model has conic constraints");
  }
  lp::Simplex lp(model.num_variables());
  const double sign = load_model(model, lp);
  const lp::Status st = lp.solve();
  Solution sol;
  sol.status = from_lp(st);
  sol.nodes = 1;
  sol.lp_iterations = lp.iterations();
  if (st == lp::Status::kOptimal) {
    sol.values = lp.primal();
    sol.objective = model.objective_value(sol.values);
    sol.has_incumbent = true;
    sol.duals = lp.duals();
    for (double& y : sol.duals) y *= sign;
    sol.dual_objective = sign * lp.dual_objective();
    sol.bound = sol.dual_objective;
    sol.gap = std::abs(sol.objective - sol.dual_objective) / std::max(1.0, std::abs(sol.objective));
    sol.max_violation = model.max_violation(sol.values);
    if (sol.gap > opts.opt_tol || sol.max_violation > opts.feas_tol) sol.status = Status::kIterLimit;
  } else if (st == lp::Status::kInfeasible) {
    sol.farkas = lp.farkas();
  } else if (st == lp::Status::kUnbounded) {
    sol.values = lp.primal();
    sol.ray = lp.ray();
    sol.objective = -sign * kInf;
    sol.bound = sol.objective;
  }
  return sol;
}

std::optional<Cut> soc_separate(std::span<const double> point, const conic::SocConstraint& soc,
                                double tol) {
  std::vector<double> u(soc.lhs.size());
  double nu = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    u[k] = soc.lhs[k].eval(point);
    nu += u[k] * u[k];
  }
  nu = std::sqrt(nu);
  const double t = soc.rhs.eval(point);
  if (nu - t <= tol) return std::nullopt;
  conic::AffineExpr g;
  if (nu > 0.0) {
    for (std::size_t k = 0; k < u.size(); ++k) g.add(soc.lhs[k], u[k] / nu);
  }
  g.add(soc.rhs, -1.0);
  g.canonicalize();
  return Cut{std::move(g.terms), -g.constant};
}

namespace {

struct Node {
  long id = 0;
  int depth = 0;
  double bound = -kInf;  // minimization framing
  std::vector<signed char> fix;  // per binary: -1 free, 0 or 1
  std::vector<int> cuts;  // ids into the global cut store, oldest first
  lp::Basis basis;
  bool has_basis = false;
};

constexpr int kFractionalRounds = 4;

class BranchAndBound {
 public:
  BranchAndBound(const ConicModel& model, const SolveOptions& opts)
      : model_(model), opts_(opts), lp_(model.num_variables()) {
    sign_ = load_model(model, lp_);
    base_rows_ = lp_.num_rows();
    for (int j = 0; j < model.num_variables(); ++j) {
      if (model.variable(j).binary) binaries_.push_back(j);
    }
    sep_tol_ = std::max(1e-9, 0.2 * opts.feas_tol);
  }

  Solution run();

 private:
  void load_node(const Node& node);
  // Returns false if the node is pruned.
  bool process(Node& node, double& value, std::vector<double>& x, long& cuts_added);
  double global_bound(double current) const;
  void log_node(const Node& node, double current_bound, long cuts_added);
  bool limits_hit() const;

  const ConicModel& model_;
  const SolveOptions& opts_;
  lp::Simplex lp_;
  double sign_ = 1.0;
  int base_rows_ = 0;
  double sep_tol_;
  std::vector<int> binaries_;
  std::vector<Cut> cut_store_;
  std::vector<int> loaded_cuts_;
  std::map<long, Node> open_;
  std::set<std::pair<double, long>> queue_;
  double incumbent_ = kInf;
  std::vector<double> best_x_;
  long nodes_ = 0;
  long total_cuts_ = 0;
  bool incomplete_ = false;
  bool unproven_ = false;
  bool unbounded_ = false;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

bool BranchAndBound::limits_hit() const {
  if (nodes_ >= opts_.node_limit) return true;
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  return elapsed > opts_.time_limit;
}

double BranchAndBound::global_bound(double current) const {
  double b = current;
  if (!queue_.empty()) b = std::min(b, queue_.begin()->first);
  return std::min(b, incumbent_);
}

void BranchAndBound::log_node(const Node& node, double current_bound, long cuts_added) {
  if (!opts_.node_log) return;
  const double b = sign_ * global_bound(current_bound);
  const std::string inc = std::isfinite(incumbent_) ? num(sign_ * incumbent_) : "none";
  *opts_.node_log << node.id << ',' << num(b) << ',' << inc << ',' << node.depth << ','
                  << cuts_added << '\n';
}

void BranchAndBound::load_node(const Node& node) {
  for (std::size_t k = 0; k < binaries_.size(); ++k) {
    const int j = binaries_[k];
    const auto& v = model_.variable(j);
    if (node.fix[k] < 0) {
      lp_.set_col_bounds(j, col_lo(v), col_hi(v));
    } else {
      lp_.set_col_bounds(j, node.fix[k], node.fix[k]);
    }
  }
  std::size_t common = 0;
  while (common < loaded_cuts_.size() && common < node.cuts.size() &&
         loaded_cuts_[common] == node.cuts[common]) {
    ++common;
  }
  if (common < loaded_cuts_.size()) {
    lp_.truncate_rows(base_rows_ + static_cast<int>(common));
    loaded_cuts_.resize(common);
  }
  for (std::size_t k = common; k < node.cuts.size(); ++k) {
    const Cut& c = cut_store_[node.cuts[k]];
    lp_.add_row(c.terms, -kInf, c.rhs);
    loaded_cuts_.push_back(node.cuts[k]);
  }
  if (node.has_basis) lp_.set_basis(node.basis);
}

bool BranchAndBound::process(Node& node, double& value, std::vector<double>& x, long& cuts_added) {
  load_node(node);
  const double prune_tol = 0.1 * opts_.opt_tol;
  double last = -kInf;
  for (int round = 0;; ++round) {
    if (round > 0 && limits_hit()) {
      incomplete_ = true;
      return false;
    }
    const lp::Status st = lp_.solve();
    if (st == lp::Status::kInfeasible) return false;
    if (st == lp::Status::kIterLimit) {
      unproven_ = true;
      return false;
    }
    x = lp_.primal();
    std::vector<double> probe = x;
    if (st == lp::Status::kUnbounded) {
      const auto& r = lp_.ray();
      double rmax = 0.0;
      for (double v : r) rmax = std::max(rmax, std::abs(v));
      const double scale = 1e6 / std::max(rmax, 1e-12);
      for (std::size_t j = 0; j < probe.size(); ++j) probe[j] += scale * r[j];
    } else {
      value = lp_.objective();
      if (std::isfinite(incumbent_) &&
          value >= incumbent_ - prune_tol * std::max(1.0, std::abs(incumbent_))) {
        return false;
      }
      // Fractional nodes get a few rounds, then branch once the bound stalls.
      bool fractional = false;
      for (int j : binaries_) {
        if (std::abs(x[j] - std::round(x[j])) > kIntTol) {
          fractional = true;
          break;
        }
      }
      const double gain = value - last;
      last = value;
      if (fractional && (round >= kFractionalRounds ||
                         (round > 0 && gain <= 1e-4 * std::max(1.0, std::abs(value))))) {
        return true;
      }
    }
    std::vector<int> fresh;
    for (const auto& soc : model_.socs()) {
      auto cut = soc_separate(probe, soc, st == lp::Status::kUnbounded ? 0.0 : sep_tol_);
      if (!cut) continue;
      fresh.push_back(static_cast<int>(cut_store_.size()));
      cut_store_.push_back(std::move(*cut));
    }
    if (fresh.empty()) {
      if (st == lp::Status::kUnbounded) {
        unbounded_ = true;
        return false;
      }
      return true;
    }
    if (round >= opts_.max_cut_rounds) {
      // Accept the current outer approximation for branching, but never as
      // an incumbent that still violates a cone.
      cut_store_.resize(cut_store_.size() - fresh.size());
      for (int j : binaries_) {
        if (std::abs(x[j] - std::round(x[j])) > kIntTol) return true;
      }
      unproven_ = true;
      return false;
    }
    // FIFO eviction, preferring cuts that are not binding.
    const int cap = std::max({1, opts_.max_cuts_per_node, 4 * static_cast<int>(model_.socs().size())});
    const int over = static_cast<int>(node.cuts.size() + fresh.size()) - cap;
    if (over > 0) {
      std::vector<int> drop;
      for (int pass = 0; pass < 2 && static_cast<int>(drop.size()) < over; ++pass) {
        for (std::size_t k = 0; k < node.cuts.size() && static_cast<int>(drop.size()) < over; ++k) {
          const int row = base_rows_ + static_cast<int>(k);
          if (std::find(drop.begin(), drop.end(), static_cast<int>(k)) != drop.end()) continue;
          if (pass == 1 || lp_.row_is_basic(row)) drop.push_back(static_cast<int>(k));
        }
      }
      std::sort(drop.begin(), drop.end());
      std::vector<int> rows;
      std::vector<int> kept;
      std::size_t d = 0;
      for (std::size_t k = 0; k < node.cuts.size(); ++k) {
        if (d < drop.size() && drop[d] == static_cast<int>(k)) {
          rows.push_back(base_rows_ + static_cast<int>(k));
          ++d;
        } else {
          kept.push_back(node.cuts[k]);
        }
      }
      lp_.remove_rows(rows);
      node.cuts = std::move(kept);
      loaded_cuts_ = node.cuts;
    }
    for (int id : fresh) {
      const Cut& c = cut_store_[id];
      lp_.add_row(c.terms, -kInf, c.rhs);
      node.cuts.push_back(id);
      loaded_cuts_.push_back(id);
    }
    cuts_added += static_cast<long>(fresh.size());
    total_cuts_ += static_cast<long>(fresh.size());
  }
}

Solution BranchAndBound::run() {
  Node root;
  root.fix.assign(binaries_.size(), -1);
  open_.emplace(0, root);
  queue_.insert({-kInf, 0});
  long next_id = 1;

  while (!queue_.empty()) {
    if (limits_hit()) {
      incomplete_ = true;
      break;
    }
    const auto [qbound, id] = *queue_.begin();
    queue_.erase(queue_.begin());
    Node node = std::move(open_.at(id));
    open_.erase(id);
    if (std::isfinite(incumbent_) &&
        qbound >= incumbent_ - 0.1 * opts_.opt_tol * std::max(1.0, std::abs(incumbent_))) {
      continue;
    }
    ++nodes_;
    double value = qbound;
    std::vector<double> x;
    long cuts_added = 0;
    const bool alive = process(node, value, x, cuts_added);
    if (unbounded_) break;
    if (incomplete_) {
      // Out of time mid-node; keep its bound for the final gap.
      queue_.insert({qbound, node.id});
      open_.emplace(node.id, std::move(node));
      break;
    }
    if (!alive) {
      log_node(node, kInf, cuts_added);
      continue;
    }

    int branch = -1;
    int best_prio = std::numeric_limits<int>::min();
    double best_frac = 0.0;
    for (std::size_t k = 0; k < binaries_.size(); ++k) {
      const int j = binaries_[k];
      const double f = std::abs(x[j] - std::round(x[j]));
      if (f <= kIntTol) continue;
      const int prio = model_.variable(j).priority;
      if (branch < 0 || prio > best_prio || (prio == best_prio && f > best_frac + 1e-12)) {
        branch = static_cast<int>(k);
        best_prio = prio;
        best_frac = f;
      }
    }
    if (branch < 0) {
      std::vector<double> cand = x;
      for (int j : binaries_) cand[j] = std::round(cand[j]);
      if (value < incumbent_) {
        incumbent_ = value;
        best_x_ = std::move(cand);
      }
      log_node(node, value, cuts_added);
      continue;
    }
    const lp::Basis basis = lp_.basis();
    for (int side = 0; side < 2; ++side) {
      Node child;
      child.id = next_id++;
      child.depth = node.depth + 1;
      child.bound = value;
      child.fix = node.fix;
      child.fix[branch] = static_cast<signed char>(side);
      child.cuts = node.cuts;
      child.basis = basis;
      child.has_basis = true;
      queue_.insert({value, child.id});
      open_.emplace(child.id, std::move(child));
    }
    log_node(node, value, cuts_added);
  }

  Solution sol;
  sol.nodes = nodes_;
  sol.lp_iterations = lp_.iterations();
  sol.cuts = total_cuts_;
  if (unbounded_) {
    sol.status = Status::kUnbounded;
    sol.objective = -sign_ * kInf;
    sol.bound = sol.objective;
    return sol;
  }
  double bound = queue_.empty() ? incumbent_ : std::min(queue_.begin()->first, incumbent_);
  if (best_x_.empty()) {
    sol.status = incomplete_ || unproven_ ? Status::kIterLimit : Status::kInfeasible;
    if (sol.status == Status::kIterLimit) sol.gap = kInf;
    sol.bound = sign_ * bound;
    return sol;
  }
  sol.has_incumbent = true;
  sol.values = best_x_;
  sol.objective = model_.objective_value(sol.values);
  sol.bound = sign_ * bound;
  sol.gap = std::abs(incumbent_ - bound) / std::max(1.0, std::abs(incumbent_));
  sol.max_violation = model_.max_violation(sol.values);
  sol.status = unproven_ || (incomplete_ && !queue_.empty()) || sol.gap > opts_.opt_tol ||
                       sol.max_violation > opts_.feas_tol
                   ? Status::kIterLimit
                   : Status::kOptimal;
  return sol;
}

}  // namespace

Solution solve(const ConicModel& model, const SolveOptions& opts) {
  model.validate();
  if (!model.powers().empty()) throw Error("solve: power constraints must be rewritten first");
  if (!(opts.feas_tol > 0.0) || !(opts.opt_tol > 0.0)) throw Error("solve: tolerances must be positive");
  if (model.socs().empty() && model.num_binaries() == 0) return solve_lp(model, opts);
  if (opts.node_log) *opts.node_log << "node,bound,incumbent,depth,cuts\n";
  BranchAndBound bb(model, opts);
  return bb.run();
}

}  // namespace wildfire::solver
