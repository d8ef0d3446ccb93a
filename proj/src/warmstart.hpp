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

// Cut separation for master solutions and the root LP cut loop.
//
// Fractional sub-problems are solved as LPs. Analytic cuts for them come
// from a path decomposition of the optimal flow: the duals of the
// restricting factors (saturated, partially open arcs and facilities) are
// fixed by the zero reduced cost of every path, and the remaining node
// duals are propagated as in the integral lambda-heavy construction.

#ifndef NETDESIGN_WARMSTART_HPP_
#define NETDESIGN_WARMSTART_HPP_

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cuts.hpp"
#include "instance.hpp"
#include "lp.hpp"
#include "master.hpp"
#include "subproblem.hpp"

namespace netdesign {

struct FractionalSubproblem {
  double objective = 0.0;
  std::vector<double> arc_flow;  // per directed arc
  OptimalityCut lp_cut;          // from the LP duals
};

// nullopt when the routing LP is infeasible.
std::optional<FractionalSubproblem> fractional_subproblem(const Instance& inst,
                                                          const NetworkState& state,
                                                          int k, int t);

struct FlowPath {
  std::vector<int> arcs;
  double length = 0.0;
  int dest = 0;
  double flow = 0.0;
};

struct PathDecomposition {
  int k = 0;
  int t = 0;
  // A path with no arcs ends at k: demand absorbed by a partial facility there.
  std::vector<FlowPath> paths;
  std::vector<int> restricting_nodes;
  std::vector<int> restricting_arcs;
  int discarded_cycles = 0;
};

PathDecomposition decompose_flow(const Instance& inst, const NetworkState& state,
                                 int k, int t, std::span<const double> arc_flow);

enum class RecoveryMethod { kLinearSystem, kLp };

// Analytic cut for a fractional sub-problem, or nullopt when recovery fails
// and the LP duals must be used instead.
std::optional<OptimalityCut> recover_duals(const PathDecomposition& decomp,
                                           const Instance& inst,
                                           const NetworkState& state, int k, int t,
                                           double objective,
                                           RecoveryMethod* method = nullptr,
                                           bool allow_linear_system = true);

// Raises node duals of closed facilities as far as the partially open
// network allows, keeping the value at the generating state.
OptimalityCut raise_gammas(const Instance& inst, const NetworkState& state,
                           const OptimalityCut& cut);

struct SeparationStats {
  long subproblems = 0;
  double subproblem_time = 0.0;
  long optimality_rows = 0;
  long feasibility_rows = 0;
  long cover_rows = 0;
  long recovered_linear = 0;
  long recovered_lp = 0;
  long recovery_fallbacks = 0;
};

class BendersSeparator {
 public:
  BendersSeparator(MasterModel& model, CutPool& pool, SeparationStats& stats)
      : model_(model), pool_(pool), stats_(stats) {}

  // Rows violated by `x` by more than `tol`, attached to the model and not
  // seen before. Order: feasibility rows by (t, k), optimality rows by
  // group, cover rows by (t, kind).
  std::vector<LpRow> separate(std::span<const double> x, CutKind kind,
                              bool feasibility, bool optimality, bool cover,
                              double tol = 1e-6);

 private:
  MasterModel& model_;
  CutPool& pool_;
  SeparationStats& stats_;
};

struct WarmStartOptions {
  CutKind kind = CutKind::kNonA;
  bool cover = true;
  int max_iterations = 200;
  double stall_tol = 1e-5;
  int stall_limit = 3;
  double violation_tol = 1e-6;
  double time_limit = std::numeric_limits<double>::infinity();
};

struct WarmStartIteration {
  int iteration = 0;
  double bound = 0.0;
  long cuts_opt = 0;
  long cuts_feas = 0;
  long cuts_cover = 0;
};

struct WarmStartTrace {
  std::vector<WarmStartIteration> iterations;
  // converged, stalled, iteration_limit, time_limit or infeasible
  std::string termination;
  double initial_bound = -kInfinity;
  double final_bound = -kInfinity;

  std::string csv() const;
};

// Cut-free LP bound of the master as built.
std::optional<double> master_lp_bound(const MasterModel& model);

WarmStartTrace warm_start(MasterModel& model, CutPool& pool, SeparationStats& stats,
                          const WarmStartOptions& options);

}  // namespace netdesign

#endif  // NETDESIGN_WARMSTART_HPP_
