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

// Bounded-variable simplex on a dense Jordan-exchange tableau.
//
// Every row i gets a logical variable s_i = a_i . x whose bounds encode the
// sense and right-hand side. The tableau expresses each basic variable as a
// linear form in the nonbasic ones, so there is no right-hand-side column and
// rows can be appended or dropped cheaply, which branch-and-cut relies on.

#ifndef NETDESIGN_LP_HPP_
#define NETDESIGN_LP_HPP_

#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace netdesign {

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Sense { kLe, kGe, kEq };

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct LpRow {
  std::vector<Term> terms;
  Sense sense = Sense::kLe;
  double rhs = 0.0;
};

// Minimization problem.
struct LpProblem {
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<LpRow> rows;

  int add_var(double obj, double lo, double hi);
  int add_row(LpRow row);
  int num_vars() const { return static_cast<int>(cost.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }
  // Throws std::invalid_argument on malformed data.
  void validate() const;
};

enum class LpStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  // Dual simplex proved the optimum exceeds the configured cutoff.
  kCutoff,
};

const char* to_string(LpStatus status);

struct LpOptions {
  double feas_tol = 1e-7;
  double opt_tol = 1e-7;
  double pivot_tol = 1e-7;
  // Pivots between full tableau rebuilds.
  int refresh_interval = 1000;
  // Consecutive degenerate pivots before switching to Bland's rule.
  int degenerate_limit = 50;
  // 0 picks a limit from the problem size.
  long max_iterations = 0;
};

struct LpResult {
  LpStatus status = LpStatus::kOptimal;
  std::vector<double> x;
  double objective = 0.0;
  std::vector<double> row_dual;      // d objective / d rhs
  std::vector<double> reduced_cost;  // c - A^T y, zero for basic variables
  std::vector<double> row_activity;
  // When infeasible: multipliers y with y^T A x = y^T s impossible for x and
  // s within their bounds (see verify_infeasibility_certificate).
  std::vector<double> certificate;
  long iterations = 0;
};

LpResult lp_solve(const LpProblem& problem, const LpOptions& options = {});

// True when the interval of (y^T A) x over the variable box and the interval
// of y^T s over the row bounds are disjoint by more than `tol`.
bool verify_infeasibility_certificate(const LpProblem& problem,
                                      std::span<const double> y,
                                      double tol = 1e-7);

class SimplexSolver {
 public:
  explicit SimplexSolver(const LpProblem& problem, LpOptions options = {});

  // Re-optimizes from the current basis. Throws NumericError when the
  // tableau cannot be brought to a consistent state.
  LpStatus solve();

  int num_vars() const { return n_; }
  int num_rows() const { return static_cast<int>(rows_.size()); }

  // Appends a row; its logical starts basic. Returns the row index.
  int add_row(const LpRow& row);
  // Removes rows whose logical variable is basic; others are kept. Remaining
  // rows keep their relative order. Returns the number removed.
  int remove_rows(std::span<const int> rows);
  bool row_is_basic(int row) const { return pos_[n_ + row] >= 0; }

  void set_bounds(int var, double lo, double hi);
  double lower(int var) const { return lo_[var]; }
  double upper(int var) const { return hi_[var]; }
  // Dual simplex stops with kCutoff once the objective exceeds this.
  void set_cutoff(double cutoff) { cutoff_ = cutoff; }

  double objective() const;
  double value(int var) const { return x_[var]; }
  std::vector<double> primal() const;
  const LpRow& row(int i) const { return rows_[i]; }
  double row_activity(int i) const { return x_[n_ + i]; }
  double row_dual(int i) const;
  double reduced_cost(int var) const;
  const std::vector<double>& certificate() const { return certificate_; }
  long iterations() const { return iterations_; }
  LpResult result(LpStatus status) const;

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  int basic_row(int v) const { return pos_[v]; }
  int nonbasic_col(int v) const { return -pos_[v] - 1; }
  int logical_count() const { return static_cast<int>(rows_.size()); }

  void pivot(int r, int c);
  void rebuild();
  // Refactorizes, or restarts from the slack basis when that fails.
  void recover();
  void reset_to_slack_basis();
  void snap_nonbasic();
  bool healthy() const;
  void recompute_basic_values();
  void recompute_reduced_costs();
  void recompute_weights();
  static double row_weight(const std::vector<double>& row);
  double residual() const;
  bool primal_feasible() const;
  bool dual_feasible() const;
  LpStatus run_primal();
  LpStatus run_dual();
  LpStatus run_once();
  void make_certificate(const std::vector<double>& weights);
  void shift_nonbasic(int c, double delta);
  void check_iteration_budget();

  LpOptions opt_;
  int n_;
  std::vector<LpRow> rows_;
  // Per variable (structurals 0..n-1, logicals n+i).
  std::vector<double> lo_, hi_, cost_, x_;
  std::vector<int> pos_;  // >= 0: basic row; < 0: -(column + 1)
  std::vector<int> basic_;     // row -> variable
  std::vector<int> nonbasic_;  // column -> variable
  std::vector<std::vector<double>> tab_;  // rows x n
  std::vector<double> d_;                 // reduced cost per column
  std::vector<double> weight_;            // 1 + squared norm per tableau row
  std::vector<std::pair<int, int>> journal_;  // pivots made while probing
  bool journaling_ = false;
  bool journal_broken_ = false;
  std::vector<double> certificate_;
  std::vector<int> nz_;  // scratch
  double cutoff_ = kInf;
  long iterations_ = 0;
  long budget_ = 0;
  int since_refresh_ = 0;
};

}  // namespace netdesign

#endif  // NETDESIGN_LP_HPP_
