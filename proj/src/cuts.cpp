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

#include "cuts.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace netdesign {

double FeasibilityCut::value(const NetworkState& state) const {
  double v = 0.0;
  for (int i : nodes) v += state.facility(i, t);
  for (int a : arcs) v += state.arc(a, t);
  return v;
}

double CoverCut::lhs(const NetworkState& state) const {
  double v = 0.0;
  for (int e : items) {
    v += kind == CoverKind::kFacility
             ? state.facility(e, t) - state.facility(e, 0)
             : state.link_open(e, t) - state.link_open(e, 0);
  }
  return v;
}

std::optional<FeasibilityCut> feasibility_cut_min_cut(const Instance& inst,
                                                      const NetworkState& state,
                                                      int k, int t,
                                                      double tol) {
  const int n = inst.num_nodes();
  const int sink = n;
  const int size = n + 1;
  std::vector<double> cap(static_cast<std::size_t>(size) * size, 0.0);
  auto c = [&](int u, int v) -> double& { return cap[static_cast<std::size_t>(u) * size + v]; };
  for (int a = 0; a < inst.num_arcs(); ++a) {
    const Arc& arc = inst.arc(a);
    if (arc.to == k) continue;
    c(arc.from, arc.to) += std::clamp(state.arc(a, t), 0.0, 1.0);
  }
  for (int i = 0; i < n; ++i) c(i, sink) = std::clamp(state.facility(i, t), 0.0, 1.0);

  // Shortest augmenting paths until one unit is routed or none remain.
  constexpr double kEps = 1e-12;
  double flow = 0.0;
  std::vector<int> parent(size);
  for (;;) {
    std::fill(parent.begin(), parent.end(), -1);
    parent[k] = k;
    std::deque<int> queue{k};
    while (!queue.empty() && parent[sink] < 0) {
      const int u = queue.front();
      queue.pop_front();
      for (int v = 0; v < size; ++v) {
        if (parent[v] < 0 && c(u, v) > kEps) {
          parent[v] = u;
          queue.push_back(v);
        }
      }
    }
    if (parent[sink] < 0) break;
    double push = 1.0 - flow;
    for (int v = sink; v != k; v = parent[v]) push = std::min(push, c(parent[v], v));
    for (int v = sink; v != k; v = parent[v]) {
      c(parent[v], v) -= push;
      c(v, parent[v]) += push;
    }
    flow += push;
    if (flow >= 1.0 - kEps) break;
  }
  if (flow >= 1.0 - tol) return std::nullopt;

  // Source side of the residual graph.
  std::vector<char> in_set(size, 0);
  in_set[k] = 1;
  std::deque<int> queue{k};
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v = 0; v < n; ++v) {
      if (!in_set[v] && c(u, v) > kEps) {
        in_set[v] = 1;
        queue.push_back(v);
      }
    }
  }
  FeasibilityCut cut;
  cut.k = k;
  cut.t = t;
  for (int i = 0; i < n; ++i) {
    if (in_set[i]) cut.nodes.push_back(i);
  }
  for (int a = 0; a < inst.num_arcs(); ++a) {
    const Arc& arc = inst.arc(a);
    if (in_set[arc.from] && !in_set[arc.to]) cut.arcs.push_back(a);
  }
  return cut;
}

std::vector<CoverCut> budget_cover_cuts(const Instance& inst,
                                        const NetworkState& state, int t,
                                        double tol_int) {
  std::vector<CoverCut> cuts;
  for (CoverKind kind : {CoverKind::kFacility, CoverKind::kLink}) {
    const bool fac = kind == CoverKind::kFacility;
    const int count = fac ? inst.num_nodes() : inst.num_links();
    std::vector<int> items;
    std::vector<double> costs;
    double opened = 0.0;
    double budget = 0.0;
    for (int tp = 1; tp <= t; ++tp) {
      budget += fac ? inst.facility_budget(tp) : inst.link_budget(tp);
    }
    for (int e = 0; e < count; ++e) {
      if (fac ? inst.initial_facility(e) : inst.initial_link(e)) continue;
      items.push_back(e);
      double cheapest = kInfinity;
      for (int tp = 1; tp <= t; ++tp) {
        cheapest = std::min(cheapest, fac ? inst.facility_open_cost(e, tp)
                                          : inst.link_construct_cost(e, tp));
      }
      costs.push_back(cheapest);
      opened += fac ? state.facility(e, t) : state.link_open(e, t);
    }
    const double frac = opened - std::floor(opened);
    if (frac <= tol_int || frac >= 1.0 - tol_int) continue;
    const int need = static_cast<int>(std::ceil(opened));
    if (need > static_cast<int>(costs.size())) continue;
    std::sort(costs.begin(), costs.end());
    double total = 0.0;
    for (int i = 0; i < need; ++i) total += costs[i];
    if (total <= budget) continue;
    // Lifted: every item at least as costly as the cheapest ones joins.
    cuts.push_back(CoverCut{kind, t, items, need - 1});
  }
  return cuts;
}

bool CutPool::add(const OptimalityCut& cut) {
  std::vector<double> key{static_cast<double>(cut.k), static_cast<double>(cut.t)};
  key.insert(key.end(), cut.gamma.begin(), cut.gamma.end());
  key.insert(key.end(), cut.lambda.begin(), cut.lambda.end());
  if (!optimality_keys_.insert(std::move(key)).second) return false;
  optimality_.push_back(cut);
  return true;
}

bool CutPool::add(const FeasibilityCut& cut) {
  std::vector<int> key{cut.t, static_cast<int>(cut.nodes.size())};
  key.insert(key.end(), cut.nodes.begin(), cut.nodes.end());
  key.insert(key.end(), cut.arcs.begin(), cut.arcs.end());
  if (!feasibility_keys_.insert(std::move(key)).second) return false;
  feasibility_.push_back(cut);
  return true;
}

bool CutPool::add(const CoverCut& cut) {
  std::vector<int> key{static_cast<int>(cut.kind), cut.t, cut.bound};
  key.insert(key.end(), cut.items.begin(), cut.items.end());
  if (!cover_keys_.insert(std::move(key)).second) return false;
  cover_.push_back(cut);
  return true;
}

std::string CutPool::dump() const {
  std::ostringstream out;
  for (const OptimalityCut& c : optimality_) {
    out << "OPT " << c.k << ' ' << c.t << " const " << format_double(c.constant())
        << " gamma";
    for (std::size_t i = 0; i < c.gamma.size(); ++i) {
      if (c.gamma[i] != 0.0 && static_cast<int>(i) != c.k) {
        out << ' ' << i << ':' << format_double(c.gamma[i]);
      }
    }
    out << " lambda";
    for (std::size_t a = 0; a < c.lambda.size(); ++a) {
      if (c.lambda[a] != 0.0) out << ' ' << a << ':' << format_double(c.lambda[a]);
    }
    out << '\n';
  }
  for (const FeasibilityCut& c : feasibility_) {
    out << "FEAS " << c.k << ' ' << c.t << " nodes";
    for (int i : c.nodes) out << ' ' << i;
    out << " arcs";
    for (int a : c.arcs) out << ' ' << a;
    out << '\n';
  }
  for (const CoverCut& c : cover_) {
    out << "COVER " << (c.kind == CoverKind::kFacility ? "facility" : "link")
        << ' ' << c.t << " bound " << c.bound << " items";
    for (int e : c.items) out << ' ' << e;
    out << '\n';
  }
  return out.str();
}

}  // namespace netdesign
