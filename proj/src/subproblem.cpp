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

#include "subproblem.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <sstream>
#include <utility>

namespace netdesign {
namespace {

using ArcFilter = std::function<bool(int)>;

// Multi-source Dijkstra. With `reverse`, distances are measured towards the
// sources along arcs taken backwards.
std::vector<double> dijkstra(const Instance& inst, int t,
                             const std::vector<int>& sources,
                             const ArcFilter& usable, bool reverse) {
  std::vector<double> dist(inst.num_nodes(), kInfinity);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  for (int s : sources) {
    dist[s] = 0.0;
    queue.emplace(0.0, s);
  }
  std::vector<char> done(inst.num_nodes(), 0);
  while (!queue.empty()) {
    const auto [d, i] = queue.top();
    queue.pop();
    if (done[i]) continue;
    done[i] = 1;
    for (int a : reverse ? inst.in_arcs(i) : inst.out_arcs(i)) {
      if (!usable(a)) continue;
      const int j = reverse ? inst.arc(a).from : inst.arc(a).to;
      const double nd = d + inst.routing_cost(a, t);
      if (nd < dist[j]) {
        dist[j] = nd;
        queue.emplace(nd, j);
      }
    }
  }
  return dist;
}

void require_cut_preconditions(const NetworkState& state, int k, int t,
                               const DistanceField& dist) {
  if (dist.source != k || dist.period != t) {
    throw std::invalid_argument("distance field belongs to another sub-problem");
  }
  if (is_open(state.facility(k, t))) {
    throw std::invalid_argument("facility at the source is open; no cut");
  }
  if (!std::isfinite(dist.to_facility[k])) {
    throw std::invalid_argument("sub-problem is infeasible");
  }
}

// Closed arcs absorb whatever D1 still lacks.
void fill_lambda(const Instance& inst, const NetworkState& state, int t,
                 OptimalityCut& cut) {
  cut.lambda.assign(inst.num_arcs(), 0.0);
  for (int a = 0; a < inst.num_arcs(); ++a) {
    if (is_open(state.arc(a, t))) continue;
    const Arc& arc = inst.arc(a);
    cut.lambda[a] = std::max(
        0.0, cut.gamma[arc.from] - cut.gamma[arc.to] - inst.routing_cost(a, t));
  }
}

}  // namespace

bool is_open(double v) { return v > 0.5; }

double OptimalityCut::value(const NetworkState& state) const {
  double v = gamma[k];
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    if (gamma[i] != 0.0) v -= gamma[i] * state.facility(static_cast<int>(i), t);
  }
  for (std::size_t a = 0; a < lambda.size(); ++a) {
    if (lambda[a] != 0.0) v -= lambda[a] * state.arc(static_cast<int>(a), t);
  }
  return v;
}

bool OptimalityCut::is_zero() const {
  return std::all_of(gamma.begin(), gamma.end(), [](double g) { return g == 0.0; }) &&
         std::all_of(lambda.begin(), lambda.end(), [](double l) { return l == 0.0; });
}

DistanceField shortest_distances(const Instance& inst,
                                 const NetworkState& state, int k, int t) {
  DistanceField f;
  f.source = k;
  f.period = t;
  auto open_arc = [&](int a) { return is_open(state.arc(a, t)); };
  f.dist = dijkstra(inst, t, {k}, open_arc, false);
  std::vector<int> facilities;
  for (int i = 0; i < inst.num_nodes(); ++i) {
    if (is_open(state.facility(i, t))) facilities.push_back(i);
  }
  f.to_facility = dijkstra(inst, t, facilities, open_arc, true);
  return f;
}

std::optional<double> solve_subproblem(const Instance& inst,
                                       const NetworkState& state, int k,
                                       int t) {
  if (is_open(state.facility(k, t))) return 0.0;
  const DistanceField f = shortest_distances(inst, state, k, t);
  double best = kInfinity;
  for (int j = 0; j < inst.num_nodes(); ++j) {
    if (is_open(state.facility(j, t))) best = std::min(best, f.dist[j]);
  }
  if (!std::isfinite(best)) return std::nullopt;
  return best;
}

OptimalityCut cut_lambda_heavy(const Instance& inst, const NetworkState& state,
                               int k, int t, const DistanceField& dist) {
  require_cut_preconditions(state, k, t, dist);
  OptimalityCut cut;
  cut.k = k;
  cut.t = t;
  double gk = kInfinity;
  for (int j = 0; j < inst.num_nodes(); ++j) {
    if (is_open(state.facility(j, t))) gk = std::min(gk, dist.dist[j]);
  }
  cut.gamma.assign(inst.num_nodes(), 0.0);
  for (int i = 0; i < inst.num_nodes(); ++i) {
    cut.gamma[i] = std::isfinite(dist.dist[i]) ? std::max(0.0, gk - dist.dist[i]) : 0.0;
  }
  cut.gamma[k] = gk;
  fill_lambda(inst, state, t, cut);
  return cut;
}

OptimalityCut cut_gamma_heavy(const Instance& inst, const NetworkState& state,
                              int k, int t, const DistanceField& dist) {
  require_cut_preconditions(state, k, t, dist);
  OptimalityCut cut;
  cut.k = k;
  cut.t = t;
  const std::vector<double> all_open =
      dijkstra(inst, t, {k}, [](int) { return true; }, false);
  const double gk = dist.to_facility[k];
  cut.gamma.assign(inst.num_nodes(), 0.0);
  for (int i = 0; i < inst.num_nodes(); ++i) {
    const double saving = std::isfinite(all_open[i]) ? gk - all_open[i] : 0.0;
    cut.gamma[i] = std::max(0.0, std::min(saving, dist.to_facility[i]));
  }
  cut.gamma[k] = gk;
  fill_lambda(inst, state, t, cut);
  return cut;
}

SubproblemLp build_subproblem_lp(const Instance& inst,
                                 const NetworkState& state, int k, int t) {
  SubproblemLp sp;
  const int n = inst.num_nodes();
  std::vector<int> var_of_arc(inst.num_arcs(), -1);
  for (int a = 0; a < inst.num_arcs(); ++a) {
    if (inst.arc(a).to == k) continue;
    const double cap = std::clamp(state.arc(a, t), 0.0, 1.0);
    var_of_arc[a] = sp.problem.add_var(inst.routing_cost(a, t), 0.0, cap);
    sp.arcs.push_back(a);
  }
  // Source row: -sum_out Z <= W_k - 1.
  LpRow source;
  source.sense = Sense::kLe;
  source.rhs = std::clamp(state.facility(k, t), 0.0, 1.0) - 1.0;
  for (int a : inst.out_arcs(k)) source.terms.push_back({var_of_arc[a], -1.0});
  sp.problem.add_row(std::move(source));
  sp.nodes.push_back(k);
  // Balance rows: inflow - outflow <= W_i.
  for (int i = 0; i < n; ++i) {
    if (i == k) continue;
    LpRow row;
    row.sense = Sense::kLe;
    row.rhs = std::clamp(state.facility(i, t), 0.0, 1.0);
    for (int a : inst.in_arcs(i)) {
      if (var_of_arc[a] >= 0) row.terms.push_back({var_of_arc[a], 1.0});
    }
    for (int a : inst.out_arcs(i)) {
      if (var_of_arc[a] >= 0) row.terms.push_back({var_of_arc[a], -1.0});
    }
    sp.problem.add_row(std::move(row));
    sp.nodes.push_back(i);
  }
  return sp;
}

OptimalityCut cut_from_lp_result(const Instance& inst, const SubproblemLp& lp,
                                 const LpResult& result, int k, int t) {
  OptimalityCut cut;
  cut.k = k;
  cut.t = t;
  cut.gamma.assign(inst.num_nodes(), 0.0);
  cut.lambda.assign(inst.num_arcs(), 0.0);
  // Rows are <= in a minimization, so their duals are nonpositive.
  for (std::size_t r = 0; r < lp.nodes.size(); ++r) {
    const double g = -result.row_dual[r];
    cut.gamma[lp.nodes[r]] = g > 1e-12 ? g : 0.0;
  }
  for (std::size_t j = 0; j < lp.arcs.size(); ++j) {
    const double l = -result.reduced_cost[j];
    cut.lambda[lp.arcs[j]] = l > 1e-12 ? l : 0.0;
  }
  return cut;
}

std::optional<OptimalityCut> cut_from_lp(const Instance& inst,
                                         const NetworkState& state, int k,
                                         int t) {
  const SubproblemLp lp = build_subproblem_lp(inst, state, k, t);
  const LpResult result = lp_solve(lp.problem);
  if (result.status != LpStatus::kOptimal) return std::nullopt;
  return cut_from_lp_result(inst, lp, result, k, t);
}

std::vector<std::string> check_cut(const Instance& inst,
                                   const OptimalityCut& cut,
                                   const NetworkState& state,
                                   double theta_star, double tol) {
  std::vector<std::string> problems;
  auto add = [&](const std::string& s) { problems.push_back(s); };
  if (static_cast<int>(cut.gamma.size()) != inst.num_nodes() ||
      static_cast<int>(cut.lambda.size()) != inst.num_arcs()) {
    add("dimension mismatch");
    return problems;
  }
  for (int i = 0; i < inst.num_nodes(); ++i) {
    if (!(cut.gamma[i] >= 0.0)) add("negative gamma at node " + std::to_string(i));
  }
  for (int a = 0; a < inst.num_arcs(); ++a) {
    if (!(cut.lambda[a] >= 0.0)) add("negative lambda at arc " + std::to_string(a));
    const Arc& arc = inst.arc(a);
    if (arc.to == cut.k) continue;
    const double reduced = inst.routing_cost(a, cut.t) + cut.lambda[a] +
                           cut.gamma[arc.to] - cut.gamma[arc.from];
    if (reduced < -tol) {
      std::ostringstream s;
      s << "dual infeasible on arc " << a << " (" << arc.from << "->" << arc.to
        << ") by " << -reduced;
      add(s.str());
    }
  }
  const double v = cut.value(state);
  if (std::abs(v - theta_star) > tol * (1.0 + std::abs(theta_star))) {
    std::ostringstream s;
    s << "value mismatch: cut gives " << v << ", sub-problem " << theta_star;
    add(s.str());
  }
  return problems;
}

}  // namespace netdesign
