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

#include "solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace netdesign {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

class BendersCallback : public MipCallback {
 public:
  BendersCallback(BendersSeparator& separator, CutKind kind, CutKind fractional_kind,
                  bool cover, bool fractional_cuts)
      : separator_(separator),
        kind_(kind),
        fractional_kind_(fractional_kind),
        cover_(cover),
        fractional_cuts_(fractional_cuts) {}

  std::vector<LpRow> on_candidate(std::span<const double> x) override {
    return separator_.separate(x, kind_, true, true, false);
  }
  std::vector<LpRow> on_fractional(std::span<const double> x) override {
    if (!cover_ && !fractional_cuts_) return {};
    return separator_.separate(x, fractional_kind_, fractional_cuts_, fractional_cuts_, cover_);
  }

 private:
  BendersSeparator& separator_;
  CutKind kind_;
  CutKind fractional_kind_;
  bool cover_;
  bool fractional_cuts_;
};

// Sets objective, solution and gap from an integral master point.
void finish_with_state(const Instance& inst, const NetworkState& state, SolveReport& report) {
  auto sol = complete_solution(inst, state);
  if (!sol) throw std::logic_error("incumbent network cannot serve every client");
  report.has_solution = true;
  report.solution = std::move(*sol);
  report.objective = report.solution.objective;
}

void finish_bounds(SolveReport& report) {
  if (report.has_solution) {
    report.bound = std::min(report.bound, report.objective);
    report.gap = relative_gap(report.objective, report.bound);
  } else {
    report.gap = kInfinity;
  }
}

void run_monolithic(const Instance& inst, const SolveOptions& options, double time_limit,
                    SolveReport& report) {
  const MonolithicModel model(inst);
  if (options.export_model) report.model_lp = export_lp(model.mip());
  if (auto r = lp_solve(model.mip().lp); r.status == LpStatus::kOptimal) {
    report.root_lp_bound = r.objective;
  }
  MipLimits limits;
  limits.time_limit = time_limit;
  limits.rel_gap = options.rel_gap;
  limits.node_limit = options.node_limit;
  limits.branching = options.branching;
  const MipResult r = mip_solve(model.mip(), nullptr, limits, {}, options.node_log);
  report.status = r.status;
  report.bound = r.bound;
  report.nodes = r.nodes;
  report.lp_iterations = r.lp_iterations;
  if (r.has_incumbent) {
    const FullSolution extracted = model.extract(r.x);
    finish_with_state(inst, extracted.state, report);
  }
}

}  // namespace

const char* to_string(SolveMode m) {
  switch (m) {
    case SolveMode::kMonolithic: return "monolithic";
    case SolveMode::kBendersBc: return "benders-bc";
    case SolveMode::kBendersIterative: return "benders-iterative";
  }
  return "unknown";
}

MasterConfig default_config(const Instance& inst) {
  MasterConfig cfg;
  cfg.disaggregation = Disaggregation::kNodeTime;
  cfg.reformulation = true;
  cfg.callback_cuts = CutKind::kAnOne;
  cfg.warm_start = true;
  if (inst.has_empty_initial_network()) {
    cfg.warmstart_cuts = CutKind::kNonA;
    cfg.cover_cuts = true;
  } else {
    cfg.warmstart_cuts = CutKind::kAnTwo;
    cfg.cover_cuts = false;
  }
  return cfg;
}

MasterConfig resolve_config(const Instance& inst, const SolveOptions& options) {
  MasterConfig cfg = default_config(inst);
  cfg.disaggregation = options.disaggregation;
  if (options.reformulation) cfg.reformulation = *options.reformulation;
  if (options.cover_cuts) cfg.cover_cuts = *options.cover_cuts;
  if (options.warmstart_cuts) cfg.warmstart_cuts = *options.warmstart_cuts;
  if (options.callback_cuts) cfg.callback_cuts = *options.callback_cuts;
  cfg.warm_start = options.warm_start;
  return cfg;
}

double default_time_limit(const Instance& inst) {
  return 50.0 * inst.num_nodes() * inst.num_periods();
}

SolveReport solve(const Instance& inst, const SolveOptions& options) {
  const auto start = Clock::now();
  const double time_limit =
      options.time_limit > 0.0 ? options.time_limit : default_time_limit(inst);
  SolveReport report;
  report.mode = options.mode;
  report.config = resolve_config(inst, options);

  if (options.mode == SolveMode::kMonolithic) {
    run_monolithic(inst, options, time_limit, report);
    finish_bounds(report);
    report.wall_time = seconds_since(start);
    return report;
  }

  const MasterConfig& cfg = report.config;
  MasterModel model(inst, cfg);
  CutPool pool;
  SeparationStats stats;
  if (auto b = master_lp_bound(model)) report.root_lp_bound = *b;
  if (cfg.warm_start) {
    WarmStartOptions ws;
    ws.kind = cfg.warmstart_cuts;
    ws.cover = cfg.cover_cuts;
    ws.time_limit = time_limit;
    report.warm_start = warm_start(model, pool, stats, ws);
  }
  BendersSeparator separator(model, pool, stats);
  auto remaining = [&] { return std::max(0.0, time_limit - seconds_since(start)); };

  if (report.warm_start.termination == "infeasible") {
    report.status = MipStatus::kInfeasible;
  } else if (options.mode == SolveMode::kBendersBc) {
    BendersCallback callback(separator, cfg.callback_cuts, cfg.warmstart_cuts, cfg.cover_cuts,
                             options.fractional_cuts);
    MipLimits limits;
    limits.time_limit = remaining();
    limits.rel_gap = options.rel_gap;
    limits.node_limit = options.node_limit;
    limits.branching = options.branching;
    const std::vector<LpRow> initial = model.attached();
    const MipResult r =
        mip_solve(model.base(), &callback, limits, initial, options.node_log);
    report.status = r.status;
    report.bound = r.bound;
    report.nodes = r.nodes;
    report.lp_iterations = r.lp_iterations;
    report.outer_iterations = 1;
    if (r.has_incumbent) finish_with_state(inst, model.state(r.x), report);
  } else {
    // Iterative: master to optimality, one sweep of cuts, repeat.
    double upper = kInfinity;
    for (;;) {
      ++report.outer_iterations;
      MipLimits limits;
      limits.time_limit = remaining();
      limits.rel_gap = options.rel_gap;
      limits.node_limit = options.node_limit;
      limits.branching = options.branching;
      const std::vector<LpRow> rows = model.attached();
      const MipResult r = mip_solve(model.base(), nullptr, limits, rows, options.node_log);
      report.nodes += r.nodes;
      report.lp_iterations += r.lp_iterations;
      if (!r.has_incumbent) {
        report.status = r.status == MipStatus::kInfeasible ? MipStatus::kInfeasible
                                                            : MipStatus::kTimeLimit;
        if (r.status != MipStatus::kInfeasible) report.bound = std::max(report.bound, r.bound);
        break;
      }
      report.bound = std::max(report.bound, r.bound);
      const NetworkState state = model.state(r.x);
      const std::vector<LpRow> cuts = separator.separate(r.x, cfg.callback_cuts, true, true, false);
      if (cuts.empty()) {
        finish_with_state(inst, state, report);
        upper = report.objective;
        report.status = r.status;
        break;
      }
      if (auto sol = complete_solution(inst, state); sol && sol->objective < upper) {
        upper = sol->objective;
        report.has_solution = true;
        report.solution = std::move(*sol);
        report.objective = upper;
      }
      if (r.status != MipStatus::kOptimal) {
        report.status = report.has_solution && r.status == MipStatus::kFeasible
                            ? MipStatus::kFeasible
                            : MipStatus::kTimeLimit;
        break;
      }
      if (report.has_solution && relative_gap(upper, report.bound) <= options.rel_gap) {
        report.status = MipStatus::kOptimal;
        break;
      }
      if (remaining() <= 0.0) {
        report.status = MipStatus::kTimeLimit;
        break;
      }
    }
  }

  report.optimality_cuts = stats.optimality_rows;
  report.feasibility_cuts = stats.feasibility_rows + stats.cover_rows;
  report.cover_cuts = stats.cover_rows;
  report.subproblems = stats.subproblems;
  report.subproblem_time = stats.subproblem_time;
  report.recovery_fallbacks = stats.recovery_fallbacks;
  report.cut_dump = pool.dump();
  if (options.export_model) report.model_lp = model.export_lp();
  finish_bounds(report);
  report.wall_time = seconds_since(start);
  return report;
}

}  // namespace netdesign
