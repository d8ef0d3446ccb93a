// Copyright 2026 The Netdesign Authors
//
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

#include "lp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace netdesign {
namespace {

constexpr double kDrop = 1e-13;  // tableau entries below this become zero
constexpr double kRelativePivot = 1e-10;  // pivot against the largest entry

struct IterationBudgetExceeded {};

double row_lower(const LpRow& row) {
  return row.sense == Sense::kLe ? -std::numeric_limits<double>::infinity()
                                 : row.rhs;
}
double row_upper(const LpRow& row) {
  return row.sense == Sense::kGe ? std::numeric_limits<double>::infinity()
                                 : row.rhs;
}

// Range of coef * v for v in [lo, hi].
void scaled_interval(double coef, double lo, double hi, double& out_lo,
                     double& out_hi) {
  if (coef == 0.0) {
    out_lo = out_hi = 0.0;
    return;
  }
  double a = coef * lo;
  double b = coef * hi;
  if (coef < 0.0) std::swap(a, b);
  out_lo = a;
  out_hi = b;
}

}  // namespace

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kCutoff: return "cutoff";
  }
  return "unknown";
}

int LpProblem::add_var(double obj, double lo, double hi) {
  cost.push_back(obj);
  lower.push_back(lo);
  upper.push_back(hi);
  return num_vars() - 1;
}

int LpProblem::add_row(LpRow row) {
  rows.push_back(std::move(row));
  return num_rows() - 1;
}

void LpProblem::validate() const {
  const int n = num_vars();
  if (static_cast<int>(lower.size()) != n || static_cast<int>(upper.size()) != n) {
    throw std::invalid_argument("bound vectors do not match variable count");
  }
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(cost[j])) throw std::invalid_argument("non-finite cost");
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j] ||
        lower[j] == std::numeric_limits<double>::infinity() ||
        upper[j] == -std::numeric_limits<double>::infinity()) {
      throw std::invalid_argument("bad bounds on variable " + std::to_string(j));
    }
  }
  for (int i = 0; i < num_rows(); ++i) {
    if (!std::isfinite(rows[i].rhs)) {
      throw std::invalid_argument("non-finite rhs in row " + std::to_string(i));
    }
    for (const Term& t : rows[i].terms) {
      if (t.var < 0 || t.var >= n || !std::isfinite(t.coef)) {
        throw std::invalid_argument("bad term in row " + std::to_string(i));
      }
    }
  }
}

bool verify_infeasibility_certificate(const LpProblem& problem,
                                      std::span<const double> y, double tol) {
  if (static_cast<int>(y.size()) != problem.num_rows()) return false;
  std::vector<double> coef(problem.num_vars(), 0.0);
  double scale = 0.0;
  for (int i = 0; i < problem.num_rows(); ++i) {
    if (y[i] == 0.0) continue;
    for (const Term& t : problem.rows[i].terms) {
      coef[t.var] += y[i] * t.coef;
      scale = std::max(scale, std::abs(y[i] * t.coef));
    }
  }
  double x_lo = 0.0, x_hi = 0.0;
  for (int j = 0; j < problem.num_vars(); ++j) {
    if (std::abs(coef[j]) <= 1e-11 * std::max(1.0, scale)) continue;
    double a, b;
    scaled_interval(coef[j], problem.lower[j], problem.upper[j], a, b);
    x_lo += a;
    x_hi += b;
  }
  double s_lo = 0.0, s_hi = 0.0;
  for (int i = 0; i < problem.num_rows(); ++i) {
    if (y[i] == 0.0) continue;
    double a, b;
    scaled_interval(y[i], row_lower(problem.rows[i]), row_upper(problem.rows[i]), a, b);
    s_lo += a;
    s_hi += b;
  }
  return x_lo > s_hi + tol || s_lo > x_hi + tol;
}

// ---------------------------------------------------------------------------

SimplexSolver::SimplexSolver(const LpProblem& problem, LpOptions options)
    : opt_(options), n_(problem.num_vars()), rows_(problem.rows) {
  problem.validate();
  const int m = problem.num_rows();
  lo_ = problem.lower;
  hi_ = problem.upper;
  cost_ = problem.cost;
  x_.assign(n_, 0.0);
  pos_.assign(n_, 0);
  nonbasic_.resize(n_);
  for (int j = 0; j < n_; ++j) {
    nonbasic_[j] = j;
    pos_[j] = -j - 1;
    // Start at the bound favoured by the objective when it is finite.
    if (cost_[j] < 0.0 && std::isfinite(hi_[j])) {
      x_[j] = hi_[j];
    } else if (std::isfinite(lo_[j])) {
      x_[j] = lo_[j];
    } else if (std::isfinite(hi_[j])) {
      x_[j] = hi_[j];
    }
  }
  d_ = cost_;
  for (int i = 0; i < m; ++i) {
    const LpRow& row = rows_[i];
    std::vector<double> t(n_, 0.0);
    double activity = 0.0;
    for (const Term& term : row.terms) {
      t[term.var] += term.coef;
      activity += term.coef * x_[term.var];
    }
    tab_.push_back(std::move(t));
    basic_.push_back(n_ + i);
    lo_.push_back(row_lower(row));
    hi_.push_back(row_upper(row));
    cost_.push_back(0.0);
    x_.push_back(activity);
    pos_.push_back(i);
  }
  recompute_weights();
}

int SimplexSolver::add_row(const LpRow& row) {
  if (!std::isfinite(row.rhs)) throw std::invalid_argument("non-finite rhs");
  std::vector<double> t(n_, 0.0);
  double activity = 0.0;
  for (const Term& term : row.terms) {
    if (term.var < 0 || term.var >= n_ || !std::isfinite(term.coef)) {
      throw std::invalid_argument("bad term in added row");
    }
    activity += term.coef * x_[term.var];
    const int p = pos_[term.var];
    if (p < 0) {
      t[-p - 1] += term.coef;
    } else {
      const std::vector<double>& src = tab_[p];
      for (int c = 0; c < n_; ++c) {
        if (src[c] != 0.0) t[c] += term.coef * src[c];
      }
    }
  }
  for (double& v : t) {
    if (std::abs(v) < kDrop) v = 0.0;
  }
  const int i = num_rows();
  rows_.push_back(row);
  weight_.push_back(row_weight(t));
  tab_.push_back(std::move(t));
  basic_.push_back(n_ + i);
  lo_.push_back(row_lower(row));
  hi_.push_back(row_upper(row));
  cost_.push_back(0.0);
  x_.push_back(activity);
  pos_.push_back(i);
  return i;
}

int SimplexSolver::remove_rows(std::span<const int> rows) {
  const int m = num_rows();
  std::vector<char> drop(m, 0);
  int count = 0;
  for (int i : rows) {
    if (i < 0 || i >= m) throw std::invalid_argument("row index out of range");
    if (!drop[i] && row_is_basic(i)) {
      drop[i] = 1;
      ++count;
    }
  }
  if (count == 0) return 0;
  // New index of each surviving logical.
  std::vector<int> new_index(m, -1);
  int next = 0;
  for (int i = 0; i < m; ++i) {
    if (!drop[i]) new_index[i] = next++;
  }
  auto remap = [&](int v) { return v < n_ ? v : n_ + new_index[v - n_]; };

  std::vector<LpRow> rows_kept;
  std::vector<double> lo, hi, cost, x;
  lo.assign(lo_.begin(), lo_.begin() + n_);
  hi.assign(hi_.begin(), hi_.begin() + n_);
  cost.assign(cost_.begin(), cost_.begin() + n_);
  x.assign(x_.begin(), x_.begin() + n_);
  for (int i = 0; i < m; ++i) {
    if (drop[i]) continue;
    rows_kept.push_back(std::move(rows_[i]));
    lo.push_back(lo_[n_ + i]);
    hi.push_back(hi_[n_ + i]);
    cost.push_back(cost_[n_ + i]);
    x.push_back(x_[n_ + i]);
  }
  std::vector<std::vector<double>> tab;
  std::vector<int> basic;
  for (int r = 0; r < m; ++r) {
    const int v = basic_[r];
    if (v >= n_ && drop[v - n_]) continue;
    tab.push_back(std::move(tab_[r]));
    basic.push_back(remap(v));
  }
  for (int& v : nonbasic_) v = remap(v);
  rows_ = std::move(rows_kept);
  lo_ = std::move(lo);
  hi_ = std::move(hi);
  cost_ = std::move(cost);
  x_ = std::move(x);
  tab_ = std::move(tab);
  basic_ = std::move(basic);
  pos_.assign(n_ + rows_.size(), 0);
  for (int r = 0; r < static_cast<int>(basic_.size()); ++r) pos_[basic_[r]] = r;
  for (int c = 0; c < n_; ++c) pos_[nonbasic_[c]] = -c - 1;
  recompute_weights();
  return count;
}

double SimplexSolver::row_weight(const std::vector<double>& row) {
  double w = 1.0;
  for (double v : row) w += v * v;
  return w;
}

void SimplexSolver::recompute_weights() {
  weight_.resize(tab_.size());
  for (std::size_t r = 0; r < tab_.size(); ++r) weight_[r] = row_weight(tab_[r]);
}

void SimplexSolver::shift_nonbasic(int c, double delta) {
  if (delta == 0.0) return;
  x_[nonbasic_[c]] += delta;
  for (int r = 0; r < static_cast<int>(tab_.size()); ++r) {
    const double a = tab_[r][c];
    if (a != 0.0) x_[basic_[r]] += a * delta;
  }
}

void SimplexSolver::set_bounds(int var, double lo, double hi) {
  if (var < 0 || var >= n_) throw std::invalid_argument("variable out of range");
  if (std::isnan(lo) || std::isnan(hi) || lo > hi) {
    throw std::invalid_argument("bad bounds");
  }
  lo_[var] = lo;
  hi_[var] = hi;
  const int p = pos_[var];
  if (p >= 0) return;
  const int c = -p - 1;
  double target;
  if (lo == hi) {
    target = lo;
  } else if (d_[c] < 0.0 && std::isfinite(hi)) {
    target = hi;
  } else if (std::isfinite(lo)) {
    target = lo;
  } else if (std::isfinite(hi)) {
    target = hi;
  } else {
    target = 0.0;
  }
  shift_nonbasic(c, target - x_[var]);
}

double SimplexSolver::objective() const {
  double z = 0.0;
  for (int j = 0; j < n_; ++j) z += cost_[j] * x_[j];
  return z;
}

std::vector<double> SimplexSolver::primal() const {
  return std::vector<double>(x_.begin(), x_.begin() + n_);
}

double SimplexSolver::row_dual(int i) const {
  const int p = pos_[n_ + i];
  return p >= 0 ? 0.0 : d_[-p - 1];
}

double SimplexSolver::reduced_cost(int var) const {
  const int p = pos_[var];
  return p >= 0 ? 0.0 : d_[-p - 1];
}

LpResult SimplexSolver::result(LpStatus status) const {
  LpResult r;
  r.status = status;
  r.x = primal();
  r.objective = objective();
  r.iterations = iterations_;
  const int m = num_rows();
  r.row_dual.resize(m);
  r.row_activity.resize(m);
  for (int i = 0; i < m; ++i) {
    r.row_dual[i] = row_dual(i);
    r.row_activity[i] = row_activity(i);
  }
  r.reduced_cost.resize(n_);
  for (int j = 0; j < n_; ++j) r.reduced_cost[j] = reduced_cost(j);
  if (status == LpStatus::kInfeasible) r.certificate = certificate_;
  return r;
}

// x_c enters at column c, the basic variable of row r leaves.
void SimplexSolver::pivot(int r, int c) {
  std::vector<double>& prow = tab_[r];
  const double p = prow[c];
  const double inv = 1.0 / p;
  nz_.clear();
  double wr = 1.0 + inv * inv;
  for (int j = 0; j < n_; ++j) {
    if (j == c) continue;
    if (prow[j] != 0.0) {
      prow[j] = -prow[j] * inv;
      if (std::abs(prow[j]) < kDrop) {
        prow[j] = 0.0;
      } else {
        nz_.push_back(j);
        wr += prow[j] * prow[j];
      }
    }
  }
  prow[c] = inv;
  weight_[r] = wr;
  const int m = static_cast<int>(tab_.size());
  for (int i = 0; i < m; ++i) {
    if (i == r) continue;
    std::vector<double>& row = tab_[i];
    const double f = row[c];
    if (f == 0.0) continue;
    double dw = 0.0;
    for (int j : nz_) {
      const double old = row[j];
      double v = old + f * prow[j];
      if (std::abs(v) < kDrop) v = 0.0;
      dw += v * v - old * old;
      row[j] = v;
    }
    row[c] = f * inv;
    dw += row[c] * row[c] - f * f;
    weight_[i] = std::max(1.0, weight_[i] + dw);
  }
  if (journaling_) journal_.push_back({r, c});
  const double f = d_[c];
  if (f != 0.0) {
    for (int j : nz_) d_[j] += f * prow[j];
    d_[c] = f * inv;
  }
  const int entering = nonbasic_[c];
  const int leaving = basic_[r];
  basic_[r] = entering;
  nonbasic_[c] = leaving;
  pos_[entering] = r;
  pos_[leaving] = -c - 1;
  ++iterations_;
  ++since_refresh_;
}

void SimplexSolver::recompute_basic_values() {
  for (int r = 0; r < static_cast<int>(tab_.size()); ++r) {
    double v = 0.0;
    const std::vector<double>& row = tab_[r];
    for (int c = 0; c < n_; ++c) {
      if (row[c] != 0.0) v += row[c] * x_[nonbasic_[c]];
    }
    x_[basic_[r]] = v;
  }
}

void SimplexSolver::recompute_reduced_costs() {
  for (int c = 0; c < n_; ++c) d_[c] = cost_[nonbasic_[c]];
  for (int r = 0; r < static_cast<int>(tab_.size()); ++r) {
    const double cb = cost_[basic_[r]];
    if (cb == 0.0) continue;
    const std::vector<double>& row = tab_[r];
    for (int c = 0; c < n_; ++c) d_[c] += cb * row[c];
  }
}

// Rebuilds the tableau for the current basis from the original rows. Only
// the block of rows whose logicals are nonbasic, restricted to the basic
// structurals, needs factorizing.
void SimplexSolver::rebuild() {
  const int m = num_rows();
  std::vector<int> col_of_basic_struct(n_, -1);
  std::vector<int> basic_struct;
  for (int r = 0; r < m; ++r) {
    if (basic_[r] < n_) {
      col_of_basic_struct[basic_[r]] = static_cast<int>(basic_struct.size());
      basic_struct.push_back(basic_[r]);
    }
  }
  std::vector<int> tight_rows;
  std::vector<int> tight_index(m, -1);
  for (int c = 0; c < n_; ++c) {
    const int v = nonbasic_[c];
    if (v >= n_) {
      tight_index[v - n_] = static_cast<int>(tight_rows.size());
      tight_rows.push_back(v - n_);
    }
  }
  const int s = static_cast<int>(basic_struct.size());
  if (static_cast<int>(tight_rows.size()) != s) {
    throw NumericError("basis bookkeeping is inconsistent");
  }
  Eigen::MatrixXd solved(s, n_);
  if (s > 0) {
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(s, s);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(s, n_);
    for (int k = 0; k < s; ++k) {
      const int i = tight_rows[k];
      for (const Term& t : rows_[i].terms) {
        const int p = pos_[t.var];
        if (p >= 0) {
          block(k, col_of_basic_struct[t.var]) += t.coef;
        } else {
          rhs(k, -p - 1) -= t.coef;
        }
      }
      rhs(k, -pos_[n_ + i] - 1) += 1.0;
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(block);
    if (!(lu.rcond() > 1e-14)) throw NumericError("singular basis");
    solved = lu.solve(rhs);
    if (!solved.allFinite()) throw NumericError("singular basis");
  }
  snap_nonbasic();
  for (int r = 0; r < m; ++r) {
    std::vector<double>& row = tab_[r];
    const int v = basic_[r];
    if (v < n_) {
      const int k = col_of_basic_struct[v];
      for (int c = 0; c < n_; ++c) row[c] = solved(k, c);
    } else {
      std::fill(row.begin(), row.end(), 0.0);
      for (const Term& t : rows_[v - n_].terms) {
        const int p = pos_[t.var];
        if (p >= 0) {
          const int k = col_of_basic_struct[t.var];
          for (int c = 0; c < n_; ++c) row[c] += t.coef * solved(k, c);
        } else {
          row[-p - 1] += t.coef;
        }
      }
    }
    for (double& e : row) {
      if (std::abs(e) < kDrop) e = 0.0;
    }
  }
  recompute_reduced_costs();
  recompute_basic_values();
  recompute_weights();
  since_refresh_ = 0;
  journal_broken_ = true;
}

double SimplexSolver::residual() const {
  double worst = 0.0;
  for (int i = 0; i < num_rows(); ++i) {
    double a = 0.0;
    for (const Term& t : rows_[i].terms) a += t.coef * x_[t.var];
    const double r = std::abs(a - x_[n_ + i]) / (1.0 + std::abs(a));
    if (!(r <= worst)) worst = std::isnan(r) ? kInf : r;
  }
  return worst;
}

bool SimplexSolver::healthy() const {
  for (double v : x_) {
    if (std::isnan(v) || std::isinf(v)) return false;
  }
  for (double v : d_) {
    if (!std::isfinite(v)) return false;
  }
  return residual() <= 1e-8;
}

void SimplexSolver::snap_nonbasic() {
  for (int c = 0; c < n_; ++c) {
    const int v = nonbasic_[c];
    const double lo = lo_[v];
    const double hi = hi_[v];
    double& x = x_[v];
    if (x == lo || x == hi) continue;
    if (!std::isfinite(lo) && !std::isfinite(hi)) {
      if (!std::isfinite(x)) x = 0.0;
      continue;
    }
    if (!std::isfinite(hi) || (std::isfinite(lo) && std::isfinite(x) &&
                               std::abs(x - lo) <= std::abs(x - hi))) {
      x = std::isfinite(lo) ? lo : hi;
    } else if (std::isfinite(x) || !std::isfinite(lo)) {
      x = hi;
    } else {
      x = lo;
    }
  }
}

void SimplexSolver::reset_to_slack_basis() {
  const int m = num_rows();
  for (int j = 0; j < n_; ++j) {
    nonbasic_[j] = j;
    pos_[j] = -j - 1;
  }
  for (int i = 0; i < m; ++i) {
    basic_[i] = n_ + i;
    pos_[n_ + i] = i;
    std::vector<double>& row = tab_[i];
    std::fill(row.begin(), row.end(), 0.0);
    for (const Term& t : rows_[i].terms) row[t.var] += t.coef;
  }
  snap_nonbasic();
  recompute_reduced_costs();
  recompute_basic_values();
  recompute_weights();
  since_refresh_ = 0;
  journal_broken_ = true;
}

void SimplexSolver::recover() {
  try {
    rebuild();
    if (healthy()) return;
  } catch (const NumericError&) {
  }
  reset_to_slack_basis();
}

bool SimplexSolver::primal_feasible() const {
  for (int v : basic_) {
    if (!(x_[v] >= lo_[v] - opt_.feas_tol && x_[v] <= hi_[v] + opt_.feas_tol)) {
      return false;
    }
  }
  return true;
}

bool SimplexSolver::dual_feasible() const {
  for (int c = 0; c < n_; ++c) {
    const int v = nonbasic_[c];
    if (lo_[v] == hi_[v]) continue;
    const bool can_up = x_[v] < hi_[v];
    const bool can_down = x_[v] > lo_[v];
    if (can_up && d_[c] < -opt_.opt_tol) return false;
    if (can_down && d_[c] > opt_.opt_tol) return false;
  }
  return true;
}

void SimplexSolver::check_iteration_budget() {
  if (--budget_ < 0) throw IterationBudgetExceeded{};
  if (since_refresh_ >= opt_.refresh_interval) rebuild();
}

void SimplexSolver::make_certificate(const std::vector<double>& weights) {
  const int m = num_rows();
  certificate_.assign(m, 0.0);
  for (int r = 0; r < m; ++r) {
    if (weights[r] == 0.0) continue;
    const int v = basic_[r];
    if (v >= n_) certificate_[v - n_] -= weights[r];
    const std::vector<double>& row = tab_[r];
    for (int c = 0; c < n_; ++c) {
      const int u = nonbasic_[c];
      if (u >= n_ && row[c] != 0.0) certificate_[u - n_] += weights[r] * row[c];
    }
  }
  double scale = 0.0;
  for (double y : certificate_) scale = std::max(scale, std::abs(y));
  for (double& y : certificate_) {
    if (std::abs(y) <= 1e-11 * scale) y = 0.0;
  }
}

LpStatus SimplexSolver::run_primal() {
  const int m = num_rows();
  std::vector<double> w(m);
  std::vector<double> price(n_);
  bool bland = false;
  int degenerate = 0;
  for (;;) {
    check_iteration_budget();
    bool phase1 = false;
    for (int r = 0; r < m; ++r) {
      const int v = basic_[r];
      w[r] = x_[v] < lo_[v] - opt_.feas_tol   ? -1.0
             : x_[v] > hi_[v] + opt_.feas_tol ? 1.0
                                              : 0.0;
      phase1 |= w[r] != 0.0;
    }
    if (phase1) {
      std::fill(price.begin(), price.end(), 0.0);
      for (int r = 0; r < m; ++r) {
        if (w[r] == 0.0) continue;
        const std::vector<double>& row = tab_[r];
        for (int c = 0; c < n_; ++c) price[c] += w[r] * row[c];
      }
    } else {
      price = d_;
    }

    // Pricing.
    int enter = -1;
    int dir = 0;
    double best = 0.0;
    for (int c = 0; c < n_; ++c) {
      const int v = nonbasic_[c];
      if (lo_[v] == hi_[v]) continue;
      int cdir = 0;
      if (price[c] < -opt_.opt_tol && x_[v] < hi_[v]) cdir = 1;
      if (price[c] > opt_.opt_tol && x_[v] > lo_[v]) cdir = -1;
      if (cdir == 0) continue;
      if (bland) {
        if (enter < 0 || v < nonbasic_[enter]) {
          enter = c;
          dir = cdir;
        }
      } else if (std::abs(price[c]) > best) {
        best = std::abs(price[c]);
        enter = c;
        dir = cdir;
      }
    }
    if (enter < 0) {
      if (phase1) {
        make_certificate(w);
        return LpStatus::kInfeasible;
      }
      return LpStatus::kOptimal;
    }

    // Ratio test (two passes: relaxed bound, then largest pivot).
    const int ev = nonbasic_[enter];
    const double flip = hi_[ev] - lo_[ev];
    double col_max = 0.0;
    for (int r = 0; r < m; ++r) col_max = std::max(col_max, std::abs(tab_[r][enter]));
    const double col_tol = std::max(opt_.pivot_tol, kRelativePivot * col_max);
    auto limit_of = [&](int r, double tol, double& ratio) -> bool {
      const double a = tab_[r][enter];
      if (std::abs(a) <= col_tol) return false;
      const double rate = a * dir;
      const int v = basic_[r];
      if (w[r] < 0.0) {
        if (rate <= 0.0) return false;
        ratio = (lo_[v] - x_[v] + tol) / rate;
      } else if (w[r] > 0.0) {
        if (rate >= 0.0) return false;
        ratio = (x_[v] - hi_[v] + tol) / -rate;
      } else if (rate < 0.0) {
        if (!std::isfinite(lo_[v])) return false;
        ratio = (x_[v] - lo_[v] + tol) / -rate;
      } else {
        if (!std::isfinite(hi_[v])) return false;
        ratio = (hi_[v] - x_[v] + tol) / rate;
      }
      return true;
    };
    int leave = -1;
    double step = kInf;
    if (bland) {
      for (int r = 0; r < m; ++r) {
        double ratio;
        if (!limit_of(r, 0.0, ratio)) continue;
        ratio = std::max(ratio, 0.0);
        if (leave < 0 || ratio < step - 1e-12 ||
            (ratio <= step + 1e-12 && basic_[r] < basic_[leave])) {
          if (leave < 0 || ratio < step) step = ratio;
          leave = r;
        }
      }
    } else {
      double bound = kInf;
      for (int r = 0; r < m; ++r) {
        double ratio;
        if (limit_of(r, opt_.feas_tol * 0.01, ratio)) bound = std::min(bound, ratio);
      }
      double best_pivot = 0.0;
      for (int r = 0; r < m; ++r) {
        double ratio;
        if (!limit_of(r, 0.0, ratio) || ratio > bound) continue;
        const double a = std::abs(tab_[r][enter]);
        if (a > best_pivot) {
          best_pivot = a;
          leave = r;
          step = std::max(ratio, 0.0);
        }
      }
    }
    if (flip <= step) {
      if (!std::isfinite(flip)) {
        if (phase1) throw NumericError("unbounded phase-one ray");
        return LpStatus::kUnbounded;
      }
      shift_nonbasic(enter, dir * flip);
      x_[ev] = dir > 0 ? hi_[ev] : lo_[ev];
      degenerate = 0;
      bland = false;
      continue;
    }
    if (leave < 0) {
      if (phase1) throw NumericError("unbounded phase-one ray");
      return LpStatus::kUnbounded;
    }
    shift_nonbasic(enter, dir * step);
    // The leaving variable sits exactly at the bound it reached.
    const int lv = basic_[leave];
    const double rate = tab_[leave][enter] * dir;
    if (w[leave] < 0.0) {
      x_[lv] = lo_[lv];
    } else if (w[leave] > 0.0) {
      x_[lv] = hi_[lv];
    } else {
      x_[lv] = rate < 0.0 ? lo_[lv] : hi_[lv];
    }
    pivot(leave, enter);
    if (step <= 1e-12) {
      if (++degenerate > opt_.degenerate_limit) bland = true;
    } else {
      degenerate = 0;
      bland = false;
    }
  }
}

LpStatus SimplexSolver::run_dual() {
  const int m = num_rows();
  bool bland = false;
  int degenerate = 0;
  const double cutoff_margin = 1e-9 * (1.0 + std::abs(cutoff_));
  for (;;) {
    check_iteration_budget();
    if (std::isfinite(cutoff_) && objective() > cutoff_ + cutoff_margin) {
      return LpStatus::kCutoff;
    }
    int leave = -1;
    double worst = 0.0;
    for (int r = 0; r < m; ++r) {
      const int v = basic_[r];
      const double inf = std::max(lo_[v] - x_[v], x_[v] - hi_[v]);
      if (inf <= opt_.feas_tol) continue;
      if (bland) {
        if (leave < 0 || v < basic_[leave]) leave = r;
      } else if (inf * inf > worst * weight_[r]) {
        // Dual steepest edge on the full tableau row.
        worst = inf * inf / weight_[r];
        leave = r;
      }
    }
    if (leave < 0) return LpStatus::kOptimal;
    const int lv = basic_[leave];
    const bool raise = x_[lv] < lo_[lv];
    const double target = raise ? lo_[lv] : hi_[lv];
    const std::vector<double>& row = tab_[leave];
    double row_max = 0.0;
    for (int c = 0; c < n_; ++c) row_max = std::max(row_max, std::abs(row[c]));
    const double row_tol = std::max(opt_.pivot_tol, kRelativePivot * row_max);
    bool tiny = false;

    auto ratio_of = [&](int c, double tol, double& ratio) -> bool {
      const double a = row[c];
      if (std::abs(a) <= opt_.pivot_tol) return false;
      const int v = nonbasic_[c];
      if (lo_[v] == hi_[v]) return false;
      const int cdir = (a > 0.0) == raise ? 1 : -1;
      if (cdir > 0 && !(x_[v] < hi_[v])) return false;
      if (cdir < 0 && !(x_[v] > lo_[v])) return false;
      if (std::abs(a) <= row_tol) {
        tiny = true;
        return false;
      }
      ratio = (std::max(0.0, d_[c] * cdir) + tol) / std::abs(a);
      return true;
    };
    int enter = -1;
    if (bland) {
      double best = kInf;
      for (int c = 0; c < n_; ++c) {
        double ratio;
        if (!ratio_of(c, 0.0, ratio)) continue;
        if (enter < 0 || ratio < best - 1e-12 ||
            (ratio <= best + 1e-12 && nonbasic_[c] < nonbasic_[enter])) {
          if (enter < 0 || ratio < best) best = ratio;
          enter = c;
        }
      }
    } else {
      double bound = kInf;
      for (int c = 0; c < n_; ++c) {
        double ratio;
        if (ratio_of(c, opt_.opt_tol * 0.01, ratio)) bound = std::min(bound, ratio);
      }
      double best_pivot = 0.0;
      for (int c = 0; c < n_; ++c) {
        double ratio;
        if (!ratio_of(c, 0.0, ratio) || ratio > bound) continue;
        const double a = std::abs(row[c]);
        if (a > best_pivot) {
          best_pivot = a;
          enter = c;
        }
      }
    }
    if (enter < 0) {
      if (tiny) throw NumericError("only tiny pivots in the dual ratio test");
      std::vector<double> weights(m, 0.0);
      weights[leave] = 1.0;
      make_certificate(weights);
      return LpStatus::kInfeasible;
    }
    const double before = objective();
    shift_nonbasic(enter, (target - x_[lv]) / row[enter]);
    x_[lv] = target;
    pivot(leave, enter);
    if (std::abs(objective() - before) <= 1e-12 * (1.0 + std::abs(before))) {
      if (++degenerate > opt_.degenerate_limit) bland = true;
    } else {
      degenerate = 0;
      bland = false;
    }
  }
}

LpStatus SimplexSolver::run_once() {
  if (primal_feasible()) return run_primal();
  // Boxed nonbasics can sit at whichever bound keeps their reduced cost
  // dual feasible.
  for (int c = 0; c < n_; ++c) {
    const int v = nonbasic_[c];
    if (!std::isfinite(lo_[v]) || !std::isfinite(hi_[v]) || lo_[v] == hi_[v]) {
      continue;
    }
    if (d_[c] < -opt_.opt_tol && x_[v] == lo_[v]) {
      shift_nonbasic(c, hi_[v] - lo_[v]);
      x_[v] = hi_[v];
    } else if (d_[c] > opt_.opt_tol && x_[v] == hi_[v]) {
      shift_nonbasic(c, lo_[v] - hi_[v]);
      x_[v] = lo_[v];
    }
  }
  if (dual_feasible()) {
    const LpStatus status = run_dual();
    if (status != LpStatus::kOptimal || dual_feasible()) return status;
  }
  return run_primal();
}

LpStatus SimplexSolver::solve() {
  const long limit = opt_.max_iterations > 0
                         ? opt_.max_iterations
                         : 50L * (n_ + num_rows()) + 10000;
  for (int attempt = 0; attempt < 4; ++attempt) {
    budget_ = limit;
    try {
      const LpStatus status = run_once();
      if (healthy()) {
        if (status != LpStatus::kOptimal) return status;
        if (primal_feasible()) return status;
      }
    } catch (const IterationBudgetExceeded&) {
    } catch (const NumericError&) {
    }
    if (attempt < 2) {
      recover();
    } else {
      reset_to_slack_basis();
    }
  }
  throw NumericError("simplex failed to converge after refactorization");
}

LpResult lp_solve(const LpProblem& problem, const LpOptions& options) {
  SimplexSolver solver(problem, options);
  const LpStatus status = solver.solve();
  return solver.result(status);
}

}  // namespace netdesign
