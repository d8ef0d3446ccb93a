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

// Top-level solve in one of three modes: the monolithic model, Benders
// branch-and-cut (cuts at every integral node), or iterative Benders
// (master solved to optimality, then cut, repeat).

#ifndef NETDESIGN_SOLVER_HPP_
#define NETDESIGN_SOLVER_HPP_

#include <optional>
#include <ostream>
#include <string>

#include "bnb.hpp"
#include "instance.hpp"
#include "master.hpp"
#include "warmstart.hpp"

namespace netdesign {

enum class SolveMode { kMonolithic, kBendersBc, kBendersIterative };

const char* to_string(SolveMode m);

// Unset fields take the per-case defaults of default_config.
struct SolveOptions {
  SolveMode mode = SolveMode::kBendersBc;
  Disaggregation disaggregation = Disaggregation::kNodeTime;
  std::optional<bool> reformulation;
  std::optional<bool> cover_cuts;
  std::optional<CutKind> warmstart_cuts;
  std::optional<CutKind> callback_cuts;
  bool warm_start = true;
  // Seconds; non-positive selects 50 N T.
  double time_limit = 0.0;
  double rel_gap = 1e-6;
  long node_limit = 0;
  Branching branching = Branching::kPseudocost;
  // Benders cuts at fractional tree nodes as well as at integral ones.
  bool fractional_cuts = false;
  std::ostream* node_log = nullptr;
  bool export_model = false;
};

// Existing network: two analytic warm-start cuts, no cover cuts. New
// network: LP-dual warm-start cuts with cover cuts. Both: one analytic cut
// in the tree, node-time disaggregation and the first-period reformulation.
MasterConfig default_config(const Instance& inst);
MasterConfig resolve_config(const Instance& inst, const SolveOptions& options);
double default_time_limit(const Instance& inst);

struct SolveReport {
  SolveMode mode = SolveMode::kBendersBc;
  MasterConfig config;
  MipStatus status = MipStatus::kInfeasible;
  bool has_solution = false;
  FullSolution solution;
  double objective = kInfinity;
  double bound = -kInfinity;
  double gap = kInfinity;
  double wall_time = 0.0;
  long nodes = 0;
  long lp_iterations = 0;
  long optimality_cuts = 0;   // M
  long feasibility_cuts = 0;  // P, cover cuts included
  long cover_cuts = 0;
  long subproblems = 0;
  double subproblem_time = 0.0;
  long recovery_fallbacks = 0;
  int outer_iterations = 0;
  double root_lp_bound = -kInfinity;
  WarmStartTrace warm_start;
  std::string cut_dump;
  std::string model_lp;
};

SolveReport solve(const Instance& inst, const SolveOptions& options);

}  // namespace netdesign

#endif  // NETDESIGN_SOLVER_HPP_
