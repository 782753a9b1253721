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

#include "wildfire/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include "wildfire/error.hpp"

namespace wildfire::lp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPrimalTol = 1e-9;
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr int kRefactorPeriod = 64;
constexpr int kStallLimit = 50;

double feas_tol(double bound) { return kPrimalTol * std::max(1.0, std::abs(bound)); }

}  // namespace

// Sparse LU of the basis at the last refactorization followed by
// product-form column updates.
struct Simplex::Impl {
  struct Eta {
    int pos;
    double pivot;
    std::vector<std::pair<int, double>> col;  // off-pivot entries
  };
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  int dim = 0;
  std::vector<Eta> etas;

  void ftran(Eigen::VectorXd& v) const {
    if (dim > 0) {
      Eigen::VectorXd t = lu.solve(v);
      v.swap(t);
    }
    for (const auto& e : etas) {
      const double xp = v(e.pos) / e.pivot;
      for (const auto& [i, a] : e.col) v(i) -= a * xp;
      v(e.pos) = xp;
    }
  }

  void btran(Eigen::VectorXd& v) {
    for (auto it = etas.rbegin(); it != etas.rend(); ++it) {
      double s = v(it->pos);
      for (const auto& [i, a] : it->col) s -= a * v(i);
      v(it->pos) = s / it->pivot;
    }
    if (dim > 0) {
      Eigen::VectorXd t = lu.transpose().solve(v);
      v.swap(t);
    }
  }

  // Column pos of the basis replaced; alpha is the entering column in the
  // old basis.
  void update(int pos, const Eigen::VectorXd& alpha) {
    Eta e{pos, alpha(pos), {}};
    for (Eigen::Index i = 0; i < alpha.size(); ++i) {
      if (i != pos && alpha(i) != 0.0) e.col.emplace_back(static_cast<int>(i), alpha(i));
    }
    etas.push_back(std::move(e));
  }
};

Simplex::Simplex(int num_cols)
    : n_(num_cols),
      cols_(num_cols),
      lo_(num_cols, 0.0),
      hi_(num_cols, kInf),
      cost_(num_cols, 0.0),
      vstat_(num_cols, VarStatus::kAtLower),
      value_(num_cols, 0.0),
      impl_(std::make_unique<Impl>()) {}

Simplex::~Simplex() = default;

void Simplex::set_col_bounds(int j, double lo, double hi) {
  lo_[j] = lo;
  hi_[j] = hi;
  if (vstat_[j] == VarStatus::kBasic) return;
  if (vstat_[j] == VarStatus::kAtUpper && std::isfinite(hi)) {
    value_[j] = hi;
  } else if (std::isfinite(lo)) {
    vstat_[j] = VarStatus::kAtLower;
    value_[j] = lo;
  } else if (std::isfinite(hi)) {
    vstat_[j] = VarStatus::kAtUpper;
    value_[j] = hi;
  } else {
    vstat_[j] = VarStatus::kFree;
    value_[j] = 0.0;
  }
}

int Simplex::add_row(const std::vector<conic::Term>& terms, double lo, double hi) {
  const int i = m_++;
  std::vector<conic::Term> row;
  row.reserve(terms.size());
  for (const auto& t : terms) {
    if (t.coef == 0.0) continue;
    row.push_back(t);
    cols_[t.var].emplace_back(i, t.coef);
  }
  rows_.push_back(std::move(row));
  lo_.push_back(lo);
  hi_.push_back(hi);
  vstat_.push_back(VarStatus::kBasic);
  double act = 0.0;
  for (const auto& t : rows_.back()) act += t.coef * value_[t.var];
  value_.push_back(act);
  head_.push_back(n_ + i);
  ++pending_rows_;
  return i;
}

void Simplex::remove_rows(std::vector<int> rows) {
  if (rows.empty()) return;
  std::sort(rows.begin(), rows.end());
  std::vector<int> remap(m_, 0);
  for (int r : rows) remap[r] = -1;
  int next = 0;
  for (int i = 0; i < m_; ++i) {
    if (remap[i] == 0) remap[i] = next++;
  }
  for (auto& col : cols_) {
    std::size_t w = 0;
    for (const auto& [i, v] : col) {
      if (remap[i] >= 0) col[w++] = {remap[i], v};
    }
    col.resize(w);
  }
  std::size_t w = 0;
  for (int i = 0; i < m_; ++i) {
    if (remap[i] < 0) continue;
    rows_[w] = std::move(rows_[i]);
    lo_[n_ + w] = lo_[n_ + i];
    hi_[n_ + w] = hi_[n_ + i];
    vstat_[n_ + w] = vstat_[n_ + i];
    value_[n_ + w] = value_[n_ + i];
    ++w;
  }
  m_ = next;
  rows_.resize(m_);
  lo_.resize(n_ + m_);
  hi_.resize(n_ + m_);
  vstat_.resize(n_ + m_);
  value_.resize(n_ + m_);
  head_.clear();
  factor_valid_ = false;
  pending_rows_ = 0;
}

void Simplex::truncate_rows(int m) {
  std::vector<int> rows;
  for (int i = m; i < m_; ++i) rows.push_back(i);
  remove_rows(std::move(rows));
}

bool Simplex::row_is_basic(int i) const { return vstat_[n_ + i] == VarStatus::kBasic; }

Basis Simplex::basis() const {
  Basis b;
  b.cols.assign(vstat_.begin(), vstat_.begin() + n_);
  b.rows.assign(vstat_.begin() + n_, vstat_.end());
  return b;
}

void Simplex::set_basis(const Basis& basis) {
  auto apply = [&](int j, VarStatus s) {
    vstat_[j] = s;
    if (s == VarStatus::kBasic) return;
    if (s == VarStatus::kAtUpper && std::isfinite(hi_[j])) {
      value_[j] = hi_[j];
    } else if (s == VarStatus::kAtLower && std::isfinite(lo_[j])) {
      value_[j] = lo_[j];
    } else if (std::isfinite(lo_[j])) {
      vstat_[j] = VarStatus::kAtLower;
      value_[j] = lo_[j];
    } else if (std::isfinite(hi_[j])) {
      vstat_[j] = VarStatus::kAtUpper;
      value_[j] = hi_[j];
    } else {
      vstat_[j] = VarStatus::kFree;
      value_[j] = 0.0;
    }
  };
  for (int j = 0; j < n_ && j < static_cast<int>(basis.cols.size()); ++j) apply(j, basis.cols[j]);
  for (int i = 0; i < m_; ++i) {
    apply(n_ + i, i < static_cast<int>(basis.rows.size()) ? basis.rows[i] : VarStatus::kBasic);
  }
  factor_valid_ = false;
  pending_rows_ = 0;
}

double Simplex::objective() const {
  double z = 0.0;
  for (int j = 0; j < n_; ++j) z += cost_[j] * value_[j];
  return z;
}

std::vector<double> Simplex::primal() const {
  return std::vector<double>(value_.begin(), value_.begin() + n_);
}

std::vector<double> Simplex::row_activity() const {
  std::vector<double> act(m_, 0.0);
  for (int i = 0; i < m_; ++i) {
    for (const auto& t : rows_[i]) act[i] += t.coef * value_[t.var];
  }
  return act;
}

namespace {

// Places a nonbasic variable at the bound nearest its current value.
void park(VarStatus& s, double& v, double lo, double hi) {
  if (std::isfinite(lo) && std::isfinite(hi)) {
    if (std::abs(v - hi) < std::abs(v - lo)) {
      s = VarStatus::kAtUpper;
      v = hi;
    } else {
      s = VarStatus::kAtLower;
      v = lo;
    }
  } else if (std::isfinite(lo)) {
    s = VarStatus::kAtLower;
    v = lo;
  } else if (std::isfinite(hi)) {
    s = VarStatus::kAtUpper;
    v = hi;
  } else {
    s = VarStatus::kFree;
    v = 0.0;
  }
}

}  // namespace

Status Simplex::solve(long iteration_limit) {
  const int n = n_;
  Impl& basis = *impl_;
  if (iteration_limit < 0) iteration_limit = 20000 + 50L * (n_ + m_);

  auto refactor = [&]() {
    for (int attempt = 0; attempt < 5; ++attempt) {
      std::vector<int> basic_cols;
      std::vector<int> row_kind(m_, -1);  // index into R2, or -1 if slack basic
      std::vector<int> r2;
      for (int j = 0; j < n; ++j) {
        if (vstat_[j] == VarStatus::kBasic) basic_cols.push_back(j);
      }
      for (int i = 0; i < m_; ++i) {
        if (vstat_[n + i] != VarStatus::kBasic) {
          row_kind[i] = static_cast<int>(r2.size());
          r2.push_back(i);
        }
      }
      const int k = static_cast<int>(basic_cols.size());
      const int kr = static_cast<int>(r2.size());
      bool ok = false;
      if (k == kr) {
        head_.assign(basic_cols.begin(), basic_cols.end());
        for (int i = 0; i < m_; ++i) {
          if (row_kind[i] < 0) head_.push_back(n + i);
        }
        basis.etas.clear();
        basis.dim = m_;
        ok = true;
        if (m_ > 0) {
          std::vector<Eigen::Triplet<double>> trip;
          for (int p = 0; p < m_; ++p) {
            const int j = head_[p];
            if (j < n) {
              for (const auto& [i, v] : cols_[j]) trip.emplace_back(i, p, v);
            } else {
              trip.emplace_back(j - n, p, -1.0);
            }
          }
          Eigen::SparseMatrix<double> bmat(m_, m_);
          bmat.setFromTriplets(trip.begin(), trip.end());
          basis.lu.analyzePattern(bmat);
          basis.lu.factorize(bmat);
          ok = basis.lu.info() == Eigen::Success;
          if (ok) {
            // Reject near-singular factors by a solve against a known answer.
            Eigen::VectorXd probe = bmat * Eigen::VectorXd::Ones(m_);
            basis.ftran(probe);
            ok = probe.allFinite() && (probe.array() - 1.0).abs().maxCoeff() <= 1e-7;
          }
        }
      }
      if (ok) {
        factor_valid_ = true;
        pending_rows_ = 0;
        return;
      }
      if (attempt == 3) {
        // Give up on the structural basis entirely.
        for (int j : basic_cols) park(vstat_[j], value_[j], lo_[j], hi_[j]);
        for (int i = 0; i < m_; ++i) vstat_[n + i] = VarStatus::kBasic;
        continue;
      }
      Eigen::MatrixXd kern = Eigen::MatrixXd::Zero(kr, k);
      for (int a = 0; a < k; ++a) {
        for (const auto& [i, v] : cols_[basic_cols[a]]) {
          if (row_kind[i] >= 0) kern(row_kind[i], a) = v;
        }
      }
      std::vector<char> keep_col(k, 0), covered_row(kr, 0);
      if (k > 0 && kr > 0) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(kern);
        lu.setThreshold(1e-9);
        const int rank = static_cast<int>(lu.rank());
        const auto& q = lu.permutationQ().indices();
        const auto& p = lu.permutationP().indices();
        for (int c = 0; c < rank; ++c) keep_col[q[c]] = 1;
        for (int r = 0; r < kr; ++r) {
          if (p[r] < rank) covered_row[r] = 1;
        }
      }
      for (int a = 0; a < k; ++a) {
        if (!keep_col[a]) park(vstat_[basic_cols[a]], value_[basic_cols[a]], lo_[basic_cols[a]], hi_[basic_cols[a]]);
      }
      for (int r = 0; r < kr; ++r) {
        if (!covered_row[r]) vstat_[n + r2[r]] = VarStatus::kBasic;
      }
    }
    throw Error("simplex: unable to factor basis");
  };

  auto recompute_basics = [&]() {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
    for (int j = 0; j < n; ++j) {
      if (vstat_[j] == VarStatus::kBasic || value_[j] == 0.0) continue;
      for (const auto& [i, v] : cols_[j]) rhs(i) -= v * value_[j];
    }
    for (int i = 0; i < m_; ++i) {
      if (vstat_[n + i] != VarStatus::kBasic) rhs(i) += value_[n + i];
    }
    basis.ftran(rhs);
    for (int p = 0; p < m_; ++p) value_[head_[p]] = rhs(p);
  };

  auto column = [&](int j, Eigen::VectorXd& alpha) {
    alpha.setZero(m_);
    if (j < n) {
      for (const auto& [i, v] : cols_[j]) alpha(i) += v;
    } else {
      alpha(j - n) = -1.0;
    }
    basis.ftran(alpha);
  };

  // Basis bookkeeping is consistent before the first factorization only if
  // the count of basic variables equals m.
  {
    int nb = 0;
    for (auto s : vstat_) nb += (s == VarStatus::kBasic);
    if (nb != m_) factor_valid_ = false;
  }
  if (pending_rows_ > 0) factor_valid_ = false;
  if (!factor_valid_) refactor();
  recompute_basics();

  duals_.assign(m_, 0.0);
  reduced_costs_.assign(n_, 0.0);
  farkas_.clear();
  ray_.clear();
  dual_objective_ = -kInf;

  Eigen::VectorXd cb(m_), y(m_), alpha(m_);
  std::vector<double> phase_cost(m_);
  long iter = 0;
  int since_refactor = 0;
  int stall = 0;
  bool bland = false;
  double last_obj = kInf;
  int last_phase = -1;
  int verify_rounds = 0;

  // Dual simplex from a dual feasible basis, the usual state after bounds
  // tighten or rows are added. Falls through to the primal loop on success
  // or when the basis is not dual feasible.
  {
    auto reduced = [&](int j) {
      if (j >= n) return y(j - n);
      double d = cost_[j];
      for (const auto& [i, v] : cols_[j]) d -= v * y(i);
      return d;
    };
    auto load_costs = [&]() {
      for (int p = 0; p < m_; ++p) cb(p) = head_[p] < n ? cost_[head_[p]] : 0.0;
      y = cb;
      basis.btran(y);
    };
    auto primal_infeasible = [&]() {
      for (int p = 0; p < m_; ++p) {
        const int j = head_[p];
        if (value_[j] < lo_[j] - feas_tol(lo_[j]) || value_[j] > hi_[j] + feas_tol(hi_[j])) return true;
      }
      return false;
    };
    bool run = m_ > 0 && primal_infeasible();
    if (run) {
      load_costs();
      bool flipped = false;
      for (int j = 0; j < n + m_ && run; ++j) {
        const VarStatus st = vstat_[j];
        if (st == VarStatus::kBasic || lo_[j] == hi_[j]) continue;
        const double d = reduced(j);
        const bool boxed = std::isfinite(lo_[j]) && std::isfinite(hi_[j]);
        if (st == VarStatus::kAtLower && d < -kDualTol) {
          if (!boxed) { run = false; break; }
          vstat_[j] = VarStatus::kAtUpper;
          value_[j] = hi_[j];
          flipped = true;
        } else if (st == VarStatus::kAtUpper && d > kDualTol) {
          if (!boxed) { run = false; break; }
          vstat_[j] = VarStatus::kAtLower;
          value_[j] = lo_[j];
          flipped = true;
        } else if (st == VarStatus::kFree && std::abs(d) > kDualTol) {
          run = false;
        }
      }
      if (flipped) recompute_basics();
    }
    const long dual_limit = iteration_limit / 2;
    bool checked = false;
    // A long run of degenerate pivots hands over to the primal phases, which
    // measure progress by the sum of infeasibilities.
    const int flat_limit = std::max(200, m_);
    int flat = 0;
    double best_obj = -kInf;
    while (run) {
      if (iter >= dual_limit) break;
      if (since_refactor >= kRefactorPeriod) {
        refactor();
        recompute_basics();
        since_refactor = 0;
      }
      int leave = -1;
      double worst = 0.0;
      for (int p = 0; p < m_; ++p) {
        const int j = head_[p];
        const double v = value_[j];
        double viol = 0.0;
        if (v < lo_[j] - feas_tol(lo_[j])) viol = lo_[j] - v;
        else if (v > hi_[j] + feas_tol(hi_[j])) viol = v - hi_[j];
        if (viol <= 0.0) continue;
        if (viol > worst) {
          worst = viol;
          leave = p;
        }
      }
      if (leave < 0) break;
      load_costs();
      const int jl = head_[leave];
      const bool raise = value_[jl] < lo_[jl];
      const double target = raise ? lo_[jl] : hi_[jl];
      Eigen::VectorXd rho = Eigen::VectorXd::Zero(m_);
      rho(leave) = 1.0;
      basis.btran(rho);
      // Two-pass ratio test on the reduced costs.
      std::vector<std::pair<int, double>> cand;
      double theta_max = kInf;
      for (int j = 0; j < n + m_; ++j) {
        const VarStatus st = vstat_[j];
        if (st == VarStatus::kBasic || lo_[j] == hi_[j]) continue;
        double a = 0.0;
        if (j < n) {
          for (const auto& [i, v] : cols_[j]) a += v * rho(i);
        } else {
          a = -rho(j - n);
        }
        // x_leave changes by -a per unit increase of x_j.
        const bool up_ok = st == VarStatus::kAtLower || st == VarStatus::kFree;
        const bool down_ok = st == VarStatus::kAtUpper || st == VarStatus::kFree;
        const bool ok = raise ? ((a < -kPivotTol && up_ok) || (a > kPivotTol && down_ok))
                              : ((a > kPivotTol && up_ok) || (a < -kPivotTol && down_ok));
        if (!ok) continue;
        const double d = reduced(j);
        const double slack = std::max(0.0, st == VarStatus::kAtUpper ? -d
                                            : st == VarStatus::kAtLower ? d : std::abs(d));
        theta_max = std::min(theta_max, (slack + kDualTol) / std::abs(a));
        cand.emplace_back(j, a);
      }
      if (cand.empty()) {
        if (!checked && since_refactor > 0) {
          checked = true;
          refactor();
          recompute_basics();
          since_refactor = 0;
          continue;
        }
        status_ = Status::kInfeasible;
        farkas_.resize(m_);
        for (int i = 0; i < m_; ++i) farkas_[i] = raise ? -rho(i) : rho(i);
        total_iterations_ += iter;
        return status_;
      }
      checked = false;
      int enter = -1;
      double best_a = 0.0;
      for (const auto& [j, a] : cand) {
        const double d = reduced(j);
        const VarStatus st = vstat_[j];
        const double slack = std::max(0.0, st == VarStatus::kAtUpper ? -d
                                            : st == VarStatus::kAtLower ? d : std::abs(d));
        if (slack / std::abs(a) > theta_max * (1.0 + 1e-12)) continue;
        if (std::abs(a) > best_a) {
          best_a = std::abs(a);
          enter = j;
        }
      }
      column(enter, alpha);
      if (std::abs(alpha(leave)) <= kPivotTol) {
        refactor();
        recompute_basics();
        since_refactor = 0;
        break;
      }
      const double step = (value_[jl] - target) / alpha(leave);
      for (int p = 0; p < m_; ++p) value_[head_[p]] -= step * alpha(p);
      value_[enter] += step;
      vstat_[enter] = VarStatus::kBasic;
      vstat_[jl] = raise ? VarStatus::kAtLower : VarStatus::kAtUpper;
      value_[jl] = target;
      head_[leave] = enter;
      basis.update(leave, alpha);
      ++since_refactor;
      ++iter;
      const double obj = objective();
      if (obj > best_obj + 1e-9 * (1.0 + std::abs(best_obj))) {
        best_obj = obj;
        flat = 0;
      } else if (++flat > flat_limit) {
        break;
      }
    }
  }

  while (true) {
    if (iter >= iteration_limit) {
      status_ = Status::kIterLimit;
      total_iterations_ += iter;
      return status_;
    }
    if (since_refactor >= kRefactorPeriod) {
      refactor();
      recompute_basics();
      since_refactor = 0;
    }

    // Phase selection from current basic infeasibilities.
    bool infeasible = false;
    double sum_inf = 0.0;
    for (int p = 0; p < m_; ++p) {
      const int j = head_[p];
      const double v = value_[j];
      if (v < lo_[j] - feas_tol(lo_[j])) {
        phase_cost[p] = -1.0;
        sum_inf += lo_[j] - v;
        infeasible = true;
      } else if (v > hi_[j] + feas_tol(hi_[j])) {
        phase_cost[p] = 1.0;
        sum_inf += v - hi_[j];
        infeasible = true;
      } else {
        phase_cost[p] = 0.0;
      }
    }
    const int phase = infeasible ? 1 : 2;
    for (int p = 0; p < m_; ++p) {
      const int j = head_[p];
      cb(p) = phase == 1 ? phase_cost[p] : (j < n ? cost_[j] : 0.0);
    }
    const double obj = phase == 1 ? sum_inf : objective();
    if (phase != last_phase || obj < last_obj - 1e-12 * (1.0 + std::abs(last_obj))) {
      stall = 0;
      bland = false;
      last_obj = obj;
      last_phase = phase;
    } else if (++stall > kStallLimit) {
      bland = true;
    }

    y = cb;
    basis.btran(y);

    // Pricing.
    int enter = -1;
    double enter_d = 0.0;
    double best = 0.0;
    auto consider = [&](int j, double d) {
      const VarStatus s = vstat_[j];
      if (s == VarStatus::kBasic || lo_[j] == hi_[j]) return;
      bool ok = (s == VarStatus::kAtLower && d < -kDualTol) ||
                (s == VarStatus::kAtUpper && d > kDualTol) ||
                (s == VarStatus::kFree && std::abs(d) > kDualTol);
      if (!ok) return;
      if (bland) {
        if (enter < 0) {
          enter = j;
          enter_d = d;
        }
      } else if (std::abs(d) > best) {
        best = std::abs(d);
        enter = j;
        enter_d = d;
      }
    };
    for (int j = 0; j < n && !(bland && enter >= 0); ++j) {
      if (vstat_[j] == VarStatus::kBasic) continue;
      double d = phase == 1 ? 0.0 : cost_[j];
      for (const auto& [i, v] : cols_[j]) d -= v * y(i);
      consider(j, d);
    }
    for (int i = 0; i < m_ && !(bland && enter >= 0); ++i) consider(n + i, y(i));

    if (enter < 0) {
      // Confirm on a fresh factorization before reporting.
      if (verify_rounds < 2 && since_refactor > 0) {
        ++verify_rounds;
        refactor();
        recompute_basics();
        since_refactor = 0;
        continue;
      }
      if (phase == 1) {
        status_ = Status::kInfeasible;
        farkas_.assign(y.data(), y.data() + m_);
      } else {
        status_ = Status::kOptimal;
        duals_.assign(y.data(), y.data() + m_);
        double dobj = 0.0;
        auto add_dual = [&](int j, double d) {
          if (std::abs(d) <= 1e-12) return;
          const double bound = d > 0 ? lo_[j] : hi_[j];
          if (!std::isfinite(bound)) {
            dobj = -kInf;
            return;
          }
          dobj += d * bound;
        };
        for (int j = 0; j < n; ++j) {
          double d = cost_[j];
          for (const auto& [i, v] : cols_[j]) d -= v * y(i);
          if (vstat_[j] == VarStatus::kBasic) d = 0.0;
          reduced_costs_[j] = d;
          add_dual(j, d);
        }
        for (int i = 0; i < m_; ++i) {
          if (vstat_[n + i] != VarStatus::kBasic) add_dual(n + i, y(i));
        }
        dual_objective_ = dobj;
      }
      total_iterations_ += iter;
      return status_;
    }

    const double dir = enter_d < 0 ? 1.0 : -1.0;
    column(enter, alpha);

    // Ratio test: basic p moves at rate -dir * alpha_p.
    double theta_relaxed = kInf;
    for (int p = 0; p < m_; ++p) {
      const double rate = -dir * alpha(p);
      if (std::abs(rate) <= kPivotTol) continue;
      const int j = head_[p];
      const double v = value_[j];
      double r = kInf;
      if (phase == 1 && phase_cost[p] < 0) {
        if (rate > 0) r = (lo_[j] - v) / rate;
      } else if (phase == 1 && phase_cost[p] > 0) {
        if (rate < 0) r = (hi_[j] - v) / rate;
      } else if (rate > 0) {
        if (std::isfinite(hi_[j])) r = (hi_[j] + (bland ? 0.0 : feas_tol(hi_[j])) - v) / rate;
      } else if (std::isfinite(lo_[j])) {
        r = (lo_[j] - (bland ? 0.0 : feas_tol(lo_[j])) - v) / rate;
      }
      theta_relaxed = std::min(theta_relaxed, r);
    }
    int leave = -1;
    double leave_theta = kInf;
    double leave_bound = 0.0;
    bool leave_upper = false;
    if (std::isfinite(theta_relaxed)) {
      double best_alpha = 0.0;
      for (int p = 0; p < m_; ++p) {
        const double rate = -dir * alpha(p);
        if (std::abs(rate) <= kPivotTol) continue;
        const int j = head_[p];
        const double v = value_[j];
        double r = kInf;
        double bound = 0.0;
        bool upper = false;
        if (phase == 1 && phase_cost[p] < 0) {
          if (rate > 0) { r = (lo_[j] - v) / rate; bound = lo_[j]; }
        } else if (phase == 1 && phase_cost[p] > 0) {
          if (rate < 0) { r = (hi_[j] - v) / rate; bound = hi_[j]; upper = true; }
        } else if (rate > 0) {
          if (std::isfinite(hi_[j])) { r = (hi_[j] - v) / rate; bound = hi_[j]; upper = true; }
        } else if (std::isfinite(lo_[j])) {
          r = (lo_[j] - v) / rate;
          bound = lo_[j];
        }
        if (r > theta_relaxed) continue;
        bool take;
        if (bland) {
          take = leave < 0 || r < leave_theta - 1e-15 ||
                 (r <= leave_theta + 1e-15 && j < head_[leave]);
        } else {
          take = std::abs(alpha(p)) > best_alpha;
        }
        if (take) {
          best_alpha = std::abs(alpha(p));
          leave = p;
          leave_theta = std::max(0.0, r);
          leave_bound = bound;
          leave_upper = upper;
        }
      }
    }
    const double range = hi_[enter] - lo_[enter];
    const bool flip = std::isfinite(range) && range <= leave_theta;
    if (leave < 0 && !flip) {
      if (phase == 2) {
        status_ = Status::kUnbounded;
        ray_.assign(n_, 0.0);
        if (enter < n) ray_[enter] = dir;
        for (int p = 0; p < m_; ++p) {
          if (head_[p] < n) ray_[head_[p]] = -dir * alpha(p);
        }
        total_iterations_ += iter;
        return status_;
      }
      // Phase 1 with no breakpoint cannot improve; treat as numerical trouble.
      refactor();
      recompute_basics();
      since_refactor = 0;
      bland = true;
      ++iter;
      continue;
    }

    ++iter;
    if (flip) {
      const double theta = range;
      for (int p = 0; p < m_; ++p) value_[head_[p]] -= theta * dir * alpha(p);
      if (vstat_[enter] == VarStatus::kAtLower) {
        vstat_[enter] = VarStatus::kAtUpper;
        value_[enter] = hi_[enter];
      } else {
        vstat_[enter] = VarStatus::kAtLower;
        value_[enter] = lo_[enter];
      }
      continue;
    }

    const double theta = leave_theta;
    for (int p = 0; p < m_; ++p) value_[head_[p]] -= theta * dir * alpha(p);
    const int leaving = head_[leave];
    value_[enter] += theta * dir;
    vstat_[enter] = VarStatus::kBasic;
    vstat_[leaving] = leave_upper ? VarStatus::kAtUpper : VarStatus::kAtLower;
    value_[leaving] = leave_bound;
    head_[leave] = enter;

    basis.update(leave, alpha);
    ++since_refactor;
  }
}

}  // namespace wildfire::lp
