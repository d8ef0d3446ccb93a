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

#include "bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

namespace netdesign {
namespace {

struct BoundChange {
  int var;
  double lo;
  double hi;
};

struct Node {
  long id = 0;
  int depth = 0;
  double bound = -std::numeric_limits<double>::infinity();
  std::vector<BoundChange> changes;
  // Branching that created the node, for pseudocosts.
  int var = -1;
  int up = 0;
  double distance = 0.0;
};

double row_violation(const LpRow& row, std::span<const double> x) {
  double a = 0.0;
  for (const Term& t : row.terms) a += t.coef * x[t.var];
  switch (row.sense) {
    case Sense::kLe: return a - row.rhs;
    case Sense::kGe: return row.rhs - a;
    case Sense::kEq: return std::abs(a - row.rhs);
  }
  return 0.0;
}

class Search {
 public:
  Search(const MipProblem& problem, MipCallback* callback, const MipLimits& limits,
         std::span<const LpRow> extra_rows, std::ostream* log)
      : problem_(problem),
        callback_(callback),
        limits_(limits),
        log_(log),
        lp_(problem.lp),
        start_(std::chrono::steady_clock::now()) {
    for (const LpRow& row : extra_rows) add_lp_row(row);
    for (int d = 0; d < 2; ++d) {
      pc_sum_[d].assign(problem.lp.num_vars(), 0.0);
      pc_count_[d].assign(problem.lp.num_vars(), 0);
    }
  }

  MipResult run() {
    Node root;
    root.id = next_id_++;
    insert(std::move(root));
    bool stopped_by_time = false;
    bool stopped_by_nodes = false;
    while (!open_.empty()) {
      if (elapsed() > limits_.time_limit) {
        stopped_by_time = true;
        break;
      }
      if (limits_.node_limit > 0 && result_.nodes >= limits_.node_limit) {
        stopped_by_nodes = true;
        break;
      }
      if (result_.has_incumbent &&
          relative_gap(result_.objective, global_bound()) <= limits_.rel_gap) {
        // Remaining nodes cannot improve enough.
        for (const auto& [id, node] : open_) pruned_bound_ = std::min(pruned_bound_, node.bound);
        open_.clear();
        by_bound_.clear();
        break;
      }
      Node node = pop();
      process(node);
    }
    result_.bound = global_bound();
    if (result_.has_incumbent) result_.bound = std::min(result_.bound, result_.objective);
    result_.gap = result_.has_incumbent ? relative_gap(result_.objective, result_.bound)
                                        : std::numeric_limits<double>::infinity();
    if (stopped_by_time) {
      result_.status = MipStatus::kTimeLimit;
    } else if (stopped_by_nodes) {
      result_.status = result_.has_incumbent ? MipStatus::kFeasible : MipStatus::kTimeLimit;
    } else {
      result_.status = result_.has_incumbent ? MipStatus::kOptimal : MipStatus::kInfeasible;
    }
    result_.lp_iterations = lp_.iterations();
    result_.wall_time = elapsed();
    return result_;
  }

 private:
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  double cutoff() const {
    if (!result_.has_incumbent) return std::numeric_limits<double>::infinity();
    return result_.objective -
           std::max(limits_.abs_gap, limits_.rel_gap * std::abs(result_.objective));
  }

  double global_bound() const {
    double b = pruned_bound_;
    if (!by_bound_.empty()) b = std::min(b, std::get<0>(*by_bound_.begin()));
    return b;
  }

  void insert(Node node) {
    by_bound_.insert({node.bound, -node.depth, node.id});
    open_.emplace(node.id, std::move(node));
  }

  // Plunges into a child of the last branched node while its bound is in
  // the better half of the gap; otherwise best bound.
  Node pop() {
    long id = -1;
    for (long child : plunge_) {
      auto it = open_.find(child);
      if (it == open_.end()) continue;
      if (!result_.has_incumbent ||
          it->second.bound <= global_bound() + 0.5 * (result_.objective - global_bound())) {
        id = child;
        break;
      }
    }
    plunge_[0] = plunge_[1] = -1;
    if (id < 0) {
      if (!result_.has_incumbent) {
        id = open_.rbegin()->first;  // newest first: depth-first dive
      } else {
        id = std::get<2>(*by_bound_.begin());
      }
    }
    auto it = open_.find(id);
    Node node = std::move(it->second);
    open_.erase(it);
    by_bound_.erase({node.bound, -node.depth, node.id});
    return node;
  }

  void apply_bounds(const Node& node) {
    for (int v : modified_) lp_.set_bounds(v, problem_.lp.lower[v], problem_.lp.upper[v]);
    modified_.clear();
    for (const BoundChange& c : node.changes) {
      lp_.set_bounds(c.var, c.lo, c.hi);
      modified_.push_back(c.var);
    }
  }

  void add_lp_row(const LpRow& row) {
    lp_.add_row(row);
    rows_.push_back(row);
  }

  // A fresh factorization from the stored rows when the warm basis breaks down.
  LpStatus solve_lp(const Node& node) {
    lp_.set_cutoff(cutoff());
    try {
      return lp_.solve();
    } catch (const NumericError&) {
    }
    lp_ = SimplexSolver(problem_.lp);
    for (const LpRow& row : rows_) lp_.add_row(row);
    modified_.clear();
    apply_bounds(node);
    lp_.set_cutoff(cutoff());
    return lp_.solve();
  }

  void prune_by_bound(double bound) { pruned_bound_ = std::min(pruned_bound_, bound); }

  void log_node(const Node& node, double bound, long rows) {
    if (!log_) return;
    *log_ << "node " << node.id << " depth " << node.depth << " bound "
          << format_double(bound) << " incumbent "
          << (result_.has_incumbent ? format_double(result_.objective) : std::string("inf"))
          << " cuts " << rows << '\n';
  }

  void process(const Node& node) {
    ++result_.nodes;
    apply_bounds(node);
    long rows_here = 0;
    int fractional_rounds = 0;
    const int max_fractional_rounds =
        node.depth == 0 ? limits_.root_cut_rounds : limits_.node_cut_rounds;
    bool first_solve = true;
    for (;;) {
      const LpStatus status = solve_lp(node);
      if (status == LpStatus::kInfeasible) {
        log_node(node, std::numeric_limits<double>::infinity(), rows_here);
        return;
      }
      if (status == LpStatus::kCutoff) {
        prune_by_bound(std::max(node.bound, cutoff()));
        log_node(node, lp_.objective(), rows_here);
        return;
      }
      if (status == LpStatus::kUnbounded) {
        throw NumericError("relaxation is unbounded");
      }
      if (first_solve) {
        first_solve = false;
        record_pseudocost(node, lp_.objective());
      }
      const double bound = std::max(node.bound, lp_.objective());
      if (bound >= cutoff()) {
        prune_by_bound(bound);
        log_node(node, bound, rows_here);
        return;
      }
      const std::vector<double> x = lp_.primal();
      const int branch_var = select_branching(x);
      if (branch_var < 0) {
        std::vector<LpRow> rows;
        if (callback_) rows = callback_->on_candidate(x);
        if (rows.empty()) {
          result_.has_incumbent = true;
          result_.objective = lp_.objective();
          result_.x = x;
          for (int v : problem_.integer_vars) result_.x[v] = std::round(result_.x[v]);
          log_node(node, bound, rows_here);
          return;
        }
        add_rows(rows, x, /*require_violation=*/true);
        rows_here += static_cast<long>(rows.size());
        continue;
      }
      if (callback_ && fractional_rounds < max_fractional_rounds) {
        ++fractional_rounds;
        std::vector<LpRow> rows = callback_->on_fractional(x);
        if (add_rows(rows, x, /*require_violation=*/false) > 0) {
          rows_here += static_cast<long>(rows.size());
          continue;
        }
      }
      log_node(node, bound, rows_here);
      branch(node, bound, branch_var, x[branch_var]);
      return;
    }
  }

  int add_rows(const std::vector<LpRow>& rows, std::span<const double> x,
               bool require_violation) {
    int violated = 0;
    for (const LpRow& row : rows) {
      if (row_violation(row, x) > 1e-9) ++violated;
    }
    if (require_violation && violated == 0) {
      throw std::logic_error("lazy callback returned rows that do not cut off the candidate");
    }
    if (violated == 0) return 0;
    for (const LpRow& row : rows) add_lp_row(row);
    result_.lazy_rows += static_cast<long>(rows.size());
    return violated;
  }

  int select_branching(std::span<const double> x) const {
    int best = -1;
    double best_score = 0.0;
    double avg[2] = {1.0, 1.0};
    if (limits_.branching == Branching::kPseudocost) {
      for (int d = 0; d < 2; ++d) {
        if (pc_total_count_[d] > 0) avg[d] = pc_total_sum_[d] / pc_total_count_[d];
      }
    }
    for (int v : problem_.integer_vars) {
      const double f = x[v] - std::floor(x[v]);
      const double dist = std::min(f, 1.0 - f);
      if (dist <= limits_.int_tol) continue;
      double score = dist;
      if (limits_.branching == Branching::kPseudocost) {
        const double down = pc_count_[0][v] > 0 ? pc_sum_[0][v] / pc_count_[0][v] : avg[0];
        const double up = pc_count_[1][v] > 0 ? pc_sum_[1][v] / pc_count_[1][v] : avg[1];
        score = std::max(1e-6, f * down) * std::max(1e-6, (1.0 - f) * up);
      }
      if (best < 0 || score > best_score * (1.0 + 1e-12)) {
        best = v;
        best_score = score;
      }
    }
    return best;
  }

  void record_pseudocost(const Node& node, double objective) {
    if (node.var < 0 || limits_.branching != Branching::kPseudocost) return;
    const double gain = std::max(0.0, objective - node.bound) / node.distance;
    pc_sum_[node.up][node.var] += gain;
    ++pc_count_[node.up][node.var];
    pc_total_sum_[node.up] += gain;
    ++pc_total_count_[node.up];
  }

  void branch(const Node& node, double bound, int var, double value) {
    const double f = value - std::floor(value);
    Node up;
    up.id = next_id_++;
    up.depth = node.depth + 1;
    up.bound = bound;
    up.changes = node.changes;
    up.changes.push_back({var, std::ceil(value), lp_.upper(var)});
    up.var = var;
    up.up = 1;
    up.distance = 1.0 - f;
    Node down;
    down.id = next_id_++;
    down.depth = node.depth + 1;
    down.bound = bound;
    down.changes = node.changes;
    down.changes.push_back({var, lp_.lower(var), std::floor(value)});
    down.var = var;
    down.up = 0;
    down.distance = f;
    if (f >= 0.5) {
      plunge_[0] = up.id;
      plunge_[1] = down.id;
    } else {
      plunge_[0] = down.id;
      plunge_[1] = up.id;
    }
    insert(std::move(up));
    insert(std::move(down));
  }

  const MipProblem& problem_;
  MipCallback* callback_;
  MipLimits limits_;
  std::ostream* log_;
  SimplexSolver lp_;
  std::vector<LpRow> rows_;
  std::chrono::steady_clock::time_point start_;
  MipResult result_;
  std::map<long, Node> open_;
  std::set<std::tuple<double, int, long>> by_bound_;
  std::vector<int> modified_;
  double pruned_bound_ = std::numeric_limits<double>::infinity();
  std::vector<double> pc_sum_[2];
  std::vector<long> pc_count_[2];
  double pc_total_sum_[2] = {0.0, 0.0};
  long pc_total_count_[2] = {0, 0};
  long next_id_ = 0;
  long plunge_[2] = {-1, -1};
};

}  // namespace

const char* to_string(MipStatus status) {
  switch (status) {
    case MipStatus::kOptimal: return "optimal";
    case MipStatus::kFeasible: return "feasible";
    case MipStatus::kInfeasible: return "infeasible";
    case MipStatus::kTimeLimit: return "time_limit";
  }
  return "unknown";
}

double relative_gap(double incumbent, double bound) {
  if (!std::isfinite(incumbent)) return std::numeric_limits<double>::infinity();
  return std::max(0.0, incumbent - bound) / std::max(1e-10, std::abs(incumbent));
}

MipResult mip_solve(const MipProblem& problem, MipCallback* callback,
                    const MipLimits& limits, std::span<const LpRow> extra_rows,
                    std::ostream* node_log) {
  Search search(problem, callback, limits, extra_rows, node_log);
  return search.run();
}

}  // namespace netdesign
