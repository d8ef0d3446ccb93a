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

#include "warmstart.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <queue>
#include <sstream>

namespace netdesign {
namespace {

constexpr double kFlowEps = 1e-10;
constexpr double kOpenEps = 1e-12;
constexpr double kCapTol = 1e-9;

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

bool period_integral(const Instance& inst, const NetworkState& state, int t) {
  auto near_int = [](double v) { return std::min(std::abs(v), std::abs(1.0 - v)) <= 1e-6; };
  for (int i = 0; i < inst.num_nodes(); ++i) {
    if (!near_int(state.facility(i, t))) return false;
  }
  for (int a = 0; a < inst.num_arcs(); ++a) {
    if (!near_int(state.arc(a, t))) return false;
  }
  return true;
}

using Queue = std::priority_queue<std::pair<double, int>, std::vector<std::pair<double, int>>,
                                  std::greater<>>;

// Forward Dijkstra from `source` over arcs accepted by `usable`, entering
// only nodes accepted by `enter`.
std::vector<double> forward_distances(const Instance& inst, int source,
                                      const std::function<bool(int)>& usable,
                                      const std::function<double(int)>& length,
                                      const std::function<bool(int)>& enter) {
  std::vector<double> dist(inst.num_nodes(), kInfinity);
  std::vector<char> done(inst.num_nodes(), 0);
  dist[source] = 0.0;
  Queue queue;
  queue.push({0.0, source});
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (done[u]) continue;
    done[u] = 1;
    for (int a : inst.out_arcs(u)) {
      if (!usable(a)) continue;
      const int v = inst.arc(a).to;
      if (!enter(v)) continue;
      const double nd = d + length(a);
      if (nd < dist[v]) {
        dist[v] = nd;
        queue.push({nd, v});
      }
    }
  }
  return dist;
}

// Fills lambda on arcs without capacity and cleans tiny duals.
void close_cut(const Instance& inst, const NetworkState& state, OptimalityCut& cut) {
  for (double& g : cut.gamma) {
    if (g < 1e-12) g = 0.0;
  }
  for (int a = 0; a < inst.num_arcs(); ++a) {
    const Arc& arc = inst.arc(a);
    if (state.arc(a, cut.t) > kOpenEps) continue;
    if (arc.to == cut.k) {
      cut.lambda[a] = 0.0;
      continue;
    }
    const double l =
        cut.gamma[arc.from] - cut.gamma[arc.to] - inst.routing_cost(a, cut.t);
    cut.lambda[a] = l > 1e-12 ? l : 0.0;
  }
}

// Node duals of closed facilities from the seeds k and restricting nodes,
// propagated over arcs with positive capacity.
void propagate(const Instance& inst, const NetworkState& state, OptimalityCut& cut,
               const std::vector<int>& seeds) {
  const int t = cut.t;
  auto usable = [&](int a) {
    return state.arc(a, t) > kOpenEps && inst.arc(a).to != cut.k;
  };
  auto length = [&](int a) { return inst.routing_cost(a, t) + cut.lambda[a]; };
  auto enter = [&](int v) { return state.facility(v, t) <= kOpenEps; };
  for (int s : seeds) {
    if (!(cut.gamma[s] > 0.0)) continue;
    const std::vector<double> dist = forward_distances(inst, s, usable, length, enter);
    for (int v = 0; v < inst.num_nodes(); ++v) {
      if (v == s || v == cut.k || !enter(v) || dist[v] == kInfinity) continue;
      cut.gamma[v] = std::max(cut.gamma[v], cut.gamma[s] - dist[v]);
    }
  }
}

}  // namespace

std::optional<FractionalSubproblem> fractional_subproblem(const Instance& inst,
                                                          const NetworkState& state,
                                                          int k, int t) {
  const SubproblemLp sp = build_subproblem_lp(inst, state, k, t);
  const LpResult result = lp_solve(sp.problem);
  if (result.status != LpStatus::kOptimal) return std::nullopt;
  FractionalSubproblem out;
  out.objective = result.objective;
  out.arc_flow.assign(inst.num_arcs(), 0.0);
  for (std::size_t j = 0; j < sp.arcs.size(); ++j) {
    out.arc_flow[sp.arcs[j]] = std::max(0.0, result.x[j]);
  }
  out.lp_cut = cut_from_lp_result(inst, sp, result, k, t);
  return out;
}

PathDecomposition decompose_flow(const Instance& inst, const NetworkState& state,
                                 int k, int t, std::span<const double> arc_flow) {
  const int n = inst.num_nodes();
  PathDecomposition dec;
  dec.k = k;
  dec.t = t;
  std::vector<double> rest(arc_flow.begin(), arc_flow.end());
  for (double& f : rest) {
    if (f < kFlowEps) f = 0.0;
  }
  std::vector<double> absorbed(n, 0.0);
  absorbed[k] = 1.0;
  for (int a = 0; a < inst.num_arcs(); ++a) {
    absorbed[inst.arc(a).to] += rest[a];
    absorbed[inst.arc(a).from] -= rest[a];
  }
  for (double& v : absorbed) v = std::max(0.0, v);
  const std::vector<double> total_absorbed = absorbed;

  double supply = 1.0;
  if (absorbed[k] > kFlowEps) {
    const double f = std::min(absorbed[k], supply);
    dec.paths.push_back(FlowPath{{}, 0.0, k, f});
    supply -= f;
    absorbed[k] = 0.0;
  }
  const int max_rounds = 4 * (inst.num_arcs() + n) + 16;
  for (int round = 0; round < max_rounds && supply > kFlowEps; ++round) {
    std::vector<int> walk;
    std::vector<int> position(n, -1);
    position[k] = 0;
    int u = k;
    bool cycle = false;
    bool stuck = false;
    for (;;) {
      if (u != k && absorbed[u] > kFlowEps) break;
      int next = -1;
      for (int a : inst.out_arcs(u)) {
        if (rest[a] > kFlowEps) {
          next = a;
          break;
        }
      }
      if (next < 0) {
        stuck = true;
        break;
      }
      const int v = inst.arc(next).to;
      if (position[v] >= 0) {
        // Cancel the cycle closed by `next`.
        std::vector<int> loop(walk.begin() + position[v], walk.end());
        loop.push_back(next);
        double m = kInfinity;
        for (int a : loop) m = std::min(m, rest[a]);
        for (int a : loop) rest[a] -= m;
        ++dec.discarded_cycles;
        cycle = true;
        break;
      }
      walk.push_back(next);
      position[v] = static_cast<int>(walk.size());
      u = v;
    }
    if (cycle) continue;
    if (stuck) break;
    double m = std::min(supply, absorbed[u]);
    for (int a : walk) m = std::min(m, rest[a]);
    FlowPath path;
    path.arcs = walk;
    path.dest = u;
    path.flow = m;
    for (int a : walk) {
      path.length += inst.routing_cost(a, t);
      rest[a] -= m;
    }
    absorbed[u] -= m;
    supply -= m;
    dec.paths.push_back(std::move(path));
  }

  std::vector<char> node_seen(n, 0);
  std::vector<char> arc_seen(inst.num_arcs(), 0);
  for (const FlowPath& p : dec.paths) {
    for (int a : p.arcs) {
      const double cap = state.arc(a, t);
      if (!arc_seen[a] && cap < 1.0 - kCapTol && arc_flow[a] >= cap - kCapTol) {
        arc_seen[a] = 1;
      }
    }
    if (p.dest != k) {
      const double cap = state.facility(p.dest, t);
      if (cap < 1.0 - kCapTol && total_absorbed[p.dest] >= cap - kCapTol) {
        node_seen[p.dest] = 1;
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    if (node_seen[i]) dec.restricting_nodes.push_back(i);
  }
  for (int a = 0; a < inst.num_arcs(); ++a) {
    if (arc_seen[a]) dec.restricting_arcs.push_back(a);
  }
  return dec;
}

std::optional<OptimalityCut> recover_duals(const PathDecomposition& decomp,
                                           const Instance& inst,
                                           const NetworkState& state, int k, int t,
                                           double objective, RecoveryMethod* method,
                                           bool allow_linear_system) {
  OptimalityCut base;
  base.k = k;
  base.t = t;
  base.gamma.assign(inst.num_nodes(), 0.0);
  base.lambda.assign(inst.num_arcs(), 0.0);

  std::vector<const FlowPath*> paths;
  for (const FlowPath& p : decomp.paths) {
    if (p.dest != k) paths.push_back(&p);
  }
  if (paths.empty()) {
    if (method) *method = RecoveryMethod::kLinearSystem;
    if (std::abs(objective) > 1e-7) return std::nullopt;
    return base;
  }

  // Unknowns: gamma_k, restricting nodes, restricting arcs.
  const int nn = static_cast<int>(decomp.restricting_nodes.size());
  const int na = static_cast<int>(decomp.restricting_arcs.size());
  const int unknowns = 1 + nn + na;
  std::vector<int> node_var(inst.num_nodes(), -1);
  std::vector<int> arc_var(inst.num_arcs(), -1);
  for (int i = 0; i < nn; ++i) node_var[decomp.restricting_nodes[i]] = 1 + i;
  for (int i = 0; i < na; ++i) arc_var[decomp.restricting_arcs[i]] = 1 + nn + i;

  // gamma_k - gamma_dest - sum lambda = L_p for every path.
  auto path_terms = [&](const FlowPath& p) {
    std::vector<Term> terms{{0, 1.0}};
    if (node_var[p.dest] >= 0) terms.push_back({node_var[p.dest], -1.0});
    for (int a : p.arcs) {
      if (arc_var[a] >= 0) terms.push_back({arc_var[a], -1.0});
    }
    return terms;
  };

  auto finish = [&](const std::vector<double>& values) -> std::optional<OptimalityCut> {
    OptimalityCut cut = base;
    cut.gamma[k] = std::max(0.0, values[0]);
    std::vector<int> seeds{k};
    for (int i = 0; i < nn; ++i) {
      cut.gamma[decomp.restricting_nodes[i]] = std::max(0.0, values[1 + i]);
      seeds.push_back(decomp.restricting_nodes[i]);
    }
    for (int i = 0; i < na; ++i) {
      cut.lambda[decomp.restricting_arcs[i]] = std::max(0.0, values[1 + nn + i]);
    }
    propagate(inst, state, cut, seeds);
    close_cut(inst, state, cut);
    if (!check_cut(inst, cut, state, objective, 1e-6).empty()) return std::nullopt;
    return cut;
  };

  if (allow_linear_system && unknowns == static_cast<int>(paths.size())) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(unknowns, unknowns);
    Eigen::VectorXd rhs(unknowns);
    for (int r = 0; r < unknowns; ++r) {
      for (const Term& term : path_terms(*paths[r])) m(r, term.var) += term.coef;
      rhs(r) = paths[r]->length;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    if (lu.isInvertible()) {
      const Eigen::VectorXd sol = lu.solve(rhs);
      std::vector<double> values(sol.data(), sol.data() + unknowns);
      if (std::all_of(values.begin(), values.end(), [](double v) { return v >= -1e-9; })) {
        if (auto cut = finish(values)) {
          if (method) *method = RecoveryMethod::kLinearSystem;
          return cut;
        }
      }
    }
  }

  LpProblem lp;
  lp.add_var(1.0, 0.0, kInfinity);
  for (int i = 0; i < nn + na; ++i) lp.add_var(0.0, 0.0, kInfinity);
  for (const FlowPath* p : paths) {
    LpRow row;
    row.terms = path_terms(*p);
    row.sense = Sense::kEq;
    row.rhs = p->length;
    lp.add_row(std::move(row));
  }
  {
    LpRow row;
    row.sense = Sense::kEq;
    row.rhs = objective;
    row.terms.push_back({0, 1.0 - state.facility(k, t)});
    for (int i = 0; i < nn; ++i) {
      row.terms.push_back({1 + i, -state.facility(decomp.restricting_nodes[i], t)});
    }
    for (int i = 0; i < na; ++i) {
      row.terms.push_back({1 + nn + i, -state.arc(decomp.restricting_arcs[i], t)});
    }
    lp.add_row(std::move(row));
  }
  // Reduced costs of arcs between nodes whose dual is decided here; nodes
  // with a partially open facility outside the restricting set keep zero.
  auto decided = [&](int i) {
    return i == k || node_var[i] >= 0 || state.facility(i, t) > kOpenEps;
  };
  auto gamma_var = [&](int i) { return i == k ? 0 : node_var[i]; };
  for (int a = 0; a < inst.num_arcs(); ++a) {
    const Arc& arc = inst.arc(a);
    if (arc.to == k || state.arc(a, t) <= kOpenEps) continue;
    if (!decided(arc.from) || !decided(arc.to)) continue;
    LpRow row;
    row.sense = Sense::kGe;
    row.rhs = -inst.routing_cost(a, t);
    if (gamma_var(arc.from) >= 0) row.terms.push_back({gamma_var(arc.from), -1.0});
    if (gamma_var(arc.to) >= 0) row.terms.push_back({gamma_var(arc.to), 1.0});
    if (arc_var[a] >= 0) row.terms.push_back({arc_var[a], 1.0});
    if (row.terms.empty()) continue;
    lp.add_row(std::move(row));
  }
  const LpResult result = lp_solve(lp);
  if (result.status != LpStatus::kOptimal) return std::nullopt;
  auto cut = finish(result.x);
  if (cut && method) *method = RecoveryMethod::kLp;
  return cut;
}

OptimalityCut raise_gammas(const Instance& inst, const NetworkState& state,
                           const OptimalityCut& cut) {
  const int n = inst.num_nodes();
  const int k = cut.k;
  const int t = cut.t;
  OptimalityCut out = cut;
  auto fixed = [&](int i) { return i == k || state.facility(i, t) > kOpenEps; };

  // Upper limits: gamma_j plus the cheapest partially open route to a
  // partially open facility j.
  std::vector<double> upper(n, kInfinity);
  Queue queue;
  for (int j = 0; j < n; ++j) {
    if (j != k && state.facility(j, t) > kOpenEps) {
      upper[j] = cut.gamma[j];
      queue.push({upper[j], j});
    }
  }
  std::vector<char> done(n, 0);
  while (!queue.empty()) {
    const auto [d, v] = queue.top();
    queue.pop();
    if (done[v]) continue;
    done[v] = 1;
    if (v == k) continue;
    for (int a : inst.in_arcs(v)) {
      if (state.arc(a, t) <= kOpenEps) continue;
      const int u = inst.arc(a).from;
      const double nd = d + inst.routing_cost(a, t) + cut.lambda[a];
      if (nd < upper[u]) {
        upper[u] = nd;
        queue.push({nd, u});
      }
    }
  }
  const std::vector<double> all = forward_distances(
      inst, k, [&](int a) { return inst.arc(a).to != k; },
      [&](int a) { return inst.routing_cost(a, t); }, [](int) { return true; });
  for (int i = 0; i < n; ++i) {
    if (fixed(i)) continue;
    const double cap = std::min(cut.gamma[k] - all[i], upper[i]);
    if (cap > out.gamma[i]) out.gamma[i] = cap;
  }
  close_cut(inst, state, out);
  return out;
}

std::vector<LpRow> BendersSeparator::separate(std::span<const double> x, CutKind kind,
                                              bool feasibility, bool optimality,
                                              bool cover, double tol) {
  const auto start = std::chrono::steady_clock::now();
  const Instance& inst = model_.instance();
  const NetworkState state = model_.state(x);
  const int groups = model_.num_theta_groups();
  std::vector<LpRow> feas_rows;
  std::vector<LpRow> opt_rows;
  std::vector<LpRow> cover_rows;
  std::vector<std::vector<OptimalityCut>> primary(groups);
  std::vector<std::vector<std::optional<OptimalityCut>>> secondary(groups);

  for (int t = 1; t <= inst.num_periods(); ++t) {
    const bool integral = period_integral(inst, state, t);
    for (int k = 0; k < inst.num_nodes(); ++k) {
      if (auto fc = feasibility_cut_min_cut(inst, state, k, t, 1e-7)) {
        if (feasibility && 1.0 - fc->value(state) > tol) {
          LpRow row = model_.feasibility_row(*fc);
          if (model_.attach(row)) {
            pool_.add(*fc);
            feas_rows.push_back(std::move(row));
          }
        }
        continue;
      }
      if (!optimality || !(inst.demand(k, t) > 0.0)) continue;
      if (integral ? is_open(state.facility(k, t)) : state.facility(k, t) >= 1.0 - 1e-9) continue;
      std::optional<OptimalityCut> first;
      std::optional<OptimalityCut> second;
      if (integral) {
        if (kind == CutKind::kNonA) {
          first = cut_from_lp(inst, state, k, t);
        } else {
          const DistanceField df = shortest_distances(inst, state, k, t);
          if (!solve_subproblem(inst, state, k, t)) continue;
          first = cut_lambda_heavy(inst, state, k, t, df);
          if (kind == CutKind::kAnTwo) second = cut_gamma_heavy(inst, state, k, t, df);
        }
      } else {
        const auto fs = fractional_subproblem(inst, state, k, t);
        if (!fs) continue;
        if (kind == CutKind::kNonA) {
          first = fs->lp_cut;
        } else {
          const PathDecomposition dec = decompose_flow(inst, state, k, t, fs->arc_flow);
          RecoveryMethod method = RecoveryMethod::kLp;
          first = recover_duals(dec, inst, state, k, t, fs->objective, &method);
          if (first) {
            ++(method == RecoveryMethod::kLinearSystem ? stats_.recovered_linear
                                                       : stats_.recovered_lp);
            if (kind == CutKind::kAnTwo) second = raise_gammas(inst, state, *first);
          } else {
            ++stats_.recovery_fallbacks;
            first = fs->lp_cut;
          }
        }
      }
      if (!first) continue;
      if (second && *second == *first) second.reset();
      const int g = model_.theta_group(k, t);
      primary[g].push_back(std::move(*first));
      secondary[g].push_back(std::move(second));
    }
  }

  if (optimality) {
    for (int g = 0; g < groups; ++g) {
      if (primary[g].empty()) continue;
      auto try_row = [&](const std::vector<OptimalityCut>& cuts) {
        auto row = model_.optimality_row(g, cuts);
        if (!row || row_violation(*row, x) <= tol) return;
        if (!model_.attach(*row)) return;
        for (const OptimalityCut& c : cuts) pool_.add(c);
        opt_rows.push_back(std::move(*row));
      };
      try_row(primary[g]);
      bool any = false;
      std::vector<OptimalityCut> alt = primary[g];
      for (std::size_t i = 0; i < alt.size(); ++i) {
        if (secondary[g][i]) {
          alt[i] = *secondary[g][i];
          any = true;
        }
      }
      if (any) try_row(alt);
    }
    stats_.subproblems += groups;
  }

  if (cover) {
    for (int t = 1; t <= inst.num_periods(); ++t) {
      for (const CoverCut& cc : budget_cover_cuts(inst, state, t, 1e-6)) {
        if (cc.lhs(state) - cc.bound <= tol) continue;
        LpRow row = model_.cover_row(cc);
        if (!model_.attach(row)) continue;
        pool_.add(cc);
        cover_rows.push_back(std::move(row));
      }
    }
  }

  stats_.feasibility_rows += static_cast<long>(feas_rows.size());
  stats_.optimality_rows += static_cast<long>(opt_rows.size());
  stats_.cover_rows += static_cast<long>(cover_rows.size());
  stats_.subproblem_time +=
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::vector<LpRow> rows = std::move(feas_rows);
  for (LpRow& r : opt_rows) rows.push_back(std::move(r));
  for (LpRow& r : cover_rows) rows.push_back(std::move(r));
  return rows;
}

std::string WarmStartTrace::csv() const {
  std::ostringstream out;
  out << "iteration,bound,cuts_opt,cuts_feas,cuts_cover\n";
  for (const WarmStartIteration& it : iterations) {
    out << it.iteration << ',' << format_double(it.bound) << ',' << it.cuts_opt << ','
        << it.cuts_feas << ',' << it.cuts_cover << '\n';
  }
  return out.str();
}

std::optional<double> master_lp_bound(const MasterModel& model) {
  const LpResult r = lp_solve(model.base().lp);
  if (r.status != LpStatus::kOptimal) return std::nullopt;
  return r.objective;
}

WarmStartTrace warm_start(MasterModel& model, CutPool& pool, SeparationStats& stats,
                          const WarmStartOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  WarmStartTrace trace;
  SimplexSolver lp(model.base().lp);
  for (const LpRow& row : model.attached()) lp.add_row(row);
  BendersSeparator separator(model, pool, stats);
  double previous = -kInfinity;
  int stalled = 0;
  for (int it = 1;; ++it) {
    if (lp.solve() != LpStatus::kOptimal) {
      trace.termination = "infeasible";
      trace.final_bound = kInfinity;
      if (it == 1) trace.initial_bound = kInfinity;
      break;
    }
    const double bound = lp.objective();
    if (it == 1) trace.initial_bound = bound;
    trace.final_bound = bound;
    const std::vector<double> x = lp.primal();
    const SeparationStats before = stats;
    const std::vector<LpRow> rows =
        separator.separate(x, options.kind, true, true, options.cover, options.violation_tol);
    WarmStartIteration record;
    record.iteration = it;
    record.bound = bound;
    record.cuts_opt = stats.optimality_rows - before.optimality_rows;
    record.cuts_feas = stats.feasibility_rows - before.feasibility_rows;
    record.cuts_cover = stats.cover_rows - before.cover_rows;
    trace.iterations.push_back(record);
    if (rows.empty()) {
      trace.termination = "converged";
      break;
    }
    if (it > 1) {
      const double gain = (bound - previous) / std::max(1e-10, std::abs(previous));
      stalled = gain < options.stall_tol ? stalled + 1 : 0;
    }
    if (stalled >= options.stall_limit) {
      trace.termination = "stalled";
      break;
    }
    if (it >= options.max_iterations) {
      trace.termination = "iteration_limit";
      break;
    }
    if (elapsed() > options.time_limit) {
      trace.termination = "time_limit";
      break;
    }
    for (const LpRow& row : rows) lp.add_row(row);
    previous = bound;
  }
  return trace;
}

}  // namespace netdesign
