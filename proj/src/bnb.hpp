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

// LP-based branch and bound over binary variables with lazy rows.
//
// Branching takes the most fractional variable (lowest index on ties) and
// explores the round-down child first. Nodes are dived depth first until
// an incumbent exists, then picked by best bound. Every node shares one
// simplex tableau; bounds are re-applied and the dual simplex re-optimizes.

#ifndef NETDESIGN_BNB_HPP_
#define NETDESIGN_BNB_HPP_

#include <limits>
#include <ostream>
#include <span>
#include <vector>

#include "lp.hpp"
#include "master.hpp"

namespace netdesign {

enum class MipStatus {
  kOptimal,
  // Stopped by a node or iteration limit with an incumbent.
  kFeasible,
  kInfeasible,
  kTimeLimit,
};

const char* to_string(MipStatus status);

enum class Branching { kMostFractional, kPseudocost };

struct MipLimits {
  double time_limit = std::numeric_limits<double>::infinity();  // seconds
  double rel_gap = 1e-6;
  double abs_gap = 1e-9;
  long node_limit = 0;  // 0: none
  double int_tol = 1e-6;
  Branching branching = Branching::kMostFractional;
  // Rounds of on_fractional separation at the root and at other nodes.
  int root_cut_rounds = 20;
  int node_cut_rounds = 1;
};

struct MipResult {
  MipStatus status = MipStatus::kInfeasible;
  bool has_incumbent = false;
  std::vector<double> x;
  double objective = std::numeric_limits<double>::infinity();
  double bound = -std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  long nodes = 0;
  long lazy_rows = 0;
  long lp_iterations = 0;
  double wall_time = 0.0;
};

double relative_gap(double incumbent, double bound);

class MipCallback {
 public:
  virtual ~MipCallback() = default;
  // Integral LP solution: rows violated by x, or none to accept x.
  virtual std::vector<LpRow> on_candidate(std::span<const double> x) = 0;
  // Fractional LP solution: optional cutting planes.
  virtual std::vector<LpRow> on_fractional(std::span<const double> x) {
    (void)x;
    return {};
  }
};

// `extra_rows` are appended to the problem before the root is solved.
MipResult mip_solve(const MipProblem& problem, MipCallback* callback,
                    const MipLimits& limits, std::span<const LpRow> extra_rows = {},
                    std::ostream* node_log = nullptr);

}  // namespace netdesign

#endif  // NETDESIGN_BNB_HPP_
