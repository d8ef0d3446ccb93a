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

// Routing sub-problem of client k in period t: send one unit of k's demand
// to an open facility over open arcs at minimum cost. Its dual gives the
// optimality cut
//
//   theta_kt >= gamma_k - sum_i gamma_i W_it - sum_a lambda_a X_at.

#ifndef NETDESIGN_SUBPROBLEM_HPP_
#define NETDESIGN_SUBPROBLEM_HPP_

#include <optional>
#include <string>
#include <vector>

#include "instance.hpp"
#include "lp.hpp"

namespace netdesign {

struct DistanceField {
  int source = 0;
  int period = 0;
  std::vector<double> dist;         // D: from the source over open arcs
  std::vector<double> to_facility;  // Dbar: to the nearest open facility
};

struct OptimalityCut {
  int k = 0;
  int t = 0;
  std::vector<double> gamma;   // per node
  std::vector<double> lambda;  // per directed arc

  double constant() const { return gamma[k]; }
  // Right-hand side of the cut evaluated at `state`.
  double value(const NetworkState& state) const;
  bool is_zero() const;
  bool operator==(const OptimalityCut&) const = default;
};

// An element counts as open in an integral state when its value is above 1/2.
bool is_open(double v);

// Dijkstra over open arcs of period t; equal distances pop lowest node first.
DistanceField shortest_distances(const Instance& inst,
                                 const NetworkState& state, int k, int t);

// Unit routing cost of client k, zero when a facility is open at k;
// nullopt when no open facility is reachable. Requires an integral period.
std::optional<double> solve_subproblem(const Instance& inst,
                                       const NetworkState& state, int k,
                                       int t);

// Savings placed on closed arcs. Requires a feasible sub-problem with the
// facility at k closed; throws std::invalid_argument otherwise.
OptimalityCut cut_lambda_heavy(const Instance& inst, const NetworkState& state,
                               int k, int t, const DistanceField& dist);

// Savings placed on facilities, assuming every arc were open.
OptimalityCut cut_gamma_heavy(const Instance& inst, const NetworkState& state,
                              int k, int t, const DistanceField& dist);

// The routing LP with right-hand sides from a possibly fractional state.
// Variable j carries arc `arcs[j]`; arcs entering k are omitted. Row 0 is
// the source row, row r (r >= 1) the balance of node `nodes[r]`.
struct SubproblemLp {
  LpProblem problem;
  std::vector<int> arcs;
  std::vector<int> nodes;
};
SubproblemLp build_subproblem_lp(const Instance& inst,
                                 const NetworkState& state, int k, int t);

// Dual of the routing LP mapped to a cut. nullopt when the LP is infeasible.
std::optional<OptimalityCut> cut_from_lp(const Instance& inst,
                                         const NetworkState& state, int k,
                                         int t);
// Same, for an LP already solved to optimality.
OptimalityCut cut_from_lp_result(const Instance& inst, const SubproblemLp& lp,
                                 const LpResult& result, int k, int t);

// Empty when the cut is dual feasible and evaluates to `theta_star` at
// `state`; otherwise one message per problem found.
std::vector<std::string> check_cut(const Instance& inst,
                                   const OptimalityCut& cut,
                                   const NetworkState& state,
                                   double theta_star, double tol = 1e-7);

}  // namespace netdesign

#endif  // NETDESIGN_SUBPROBLEM_HPP_
