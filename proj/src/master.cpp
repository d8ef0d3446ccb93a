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

#include "master.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <queue>
#include <sstream>

namespace netdesign {
namespace {

std::string name(const char* base, std::initializer_list<int> idx) {
  std::string s = base;
  for (int i : idx) s += "_" + std::to_string(i);
  return s;
}

int add_named(MipProblem& mip, const std::string& n, double cost, double lo,
              double hi, bool integer) {
  const int v = mip.lp.add_var(cost, lo, hi);
  mip.names.push_back(n);
  if (integer && lo != hi) mip.integer_vars.push_back(v);
  return v;
}

void append_term_text(std::ostringstream& out, double coef, const std::string& var,
                      bool first) {
  if (coef < 0) {
    out << (first ? "-" : " - ");
  } else if (!first) {
    out << " + ";
  }
  const double a = std::abs(coef);
  if (a != 1.0) out << format_double(a) << ' ';
  out << var;
}

void write_row(std::ostringstream& out, const std::string& label, const LpRow& row,
               const std::vector<std::string>& names) {
  out << ' ' << label << ':';
  bool first = true;
  for (const Term& t : row.terms) {
    out << ' ';
    append_term_text(out, t.coef, names[t.var], first);
    first = false;
  }
  if (first) out << " 0";
  out << (row.sense == Sense::kLe ? " <= " : row.sense == Sense::kGe ? " >= " : " = ")
      << format_double(row.rhs) << '\n';
}

}  // namespace

const char* to_string(Disaggregation d) {
  switch (d) {
    case Disaggregation::kNodeTime: return "nodetime";
    case Disaggregation::kNodeOnly: return "nodeonly";
    case Disaggregation::kTimeOnly: return "timeonly";
    case Disaggregation::kSingle: return "single";
  }
  return "?";
}

const char* to_string(CutKind c) {
  switch (c) {
    case CutKind::kNonA: return "nona";
    case CutKind::kAnOne: return "anone";
    case CutKind::kAnTwo: return "antwo";
  }
  return "?";
}

std::string export_lp(const MipProblem& mip, std::span<const LpRow> extra_rows) {
  std::ostringstream out;
  out << "Minimize\n obj:";
  bool first = true;
  for (int j = 0; j < mip.lp.num_vars(); ++j) {
    if (mip.lp.cost[j] == 0.0) continue;
    out << ' ';
    append_term_text(out, mip.lp.cost[j], mip.names[j], first);
    first = false;
  }
  if (first) out << " 0";
  out << "\nSubject To\n";
  for (int i = 0; i < mip.lp.num_rows(); ++i) {
    write_row(out, "r" + std::to_string(i), mip.lp.rows[i], mip.names);
  }
  for (std::size_t i = 0; i < extra_rows.size(); ++i) {
    write_row(out, "cut" + std::to_string(i), extra_rows[i], mip.names);
  }
  out << "Bounds\n";
  for (int j = 0; j < mip.lp.num_vars(); ++j) {
    const double lo = mip.lp.lower[j];
    const double hi = mip.lp.upper[j];
    out << ' ';
    if (lo == hi) {
      out << mip.names[j] << " = " << format_double(lo);
    } else {
      out << (std::isfinite(lo) ? format_double(lo) : "-inf") << " <= " << mip.names[j]
          << " <= " << (std::isfinite(hi) ? format_double(hi) : "+inf");
    }
    out << '\n';
  }
  out << "Binaries\n";
  for (int j : mip.integer_vars) out << ' ' << mip.names[j] << '\n';
  out << "End\n";
  return out.str();
}

// ---------------------------------------------------------------------------

NetworkBlock::NetworkBlock(const Instance& inst, MipProblem& mip, bool directional)
    : periods_(inst.num_periods()), directional_(directional), inst_(&inst) {
  const int n = inst.num_nodes();
  const int periods = periods_;
  w_.assign(static_cast<std::size_t>(n) * (periods + 1), -1);
  xl_.assign(static_cast<std::size_t>(inst.num_links()) * (periods + 1), -1);
  for (int i = 0; i < n; ++i) {
    const bool fixed = inst.initial_facility(i);
    for (int t = 1; t <= periods; ++t) {
      w_[index(i, t)] = add_named(mip, name("W", {i, t}), inst.facility_op_cost(i, t),
                                  fixed ? 1.0 : 0.0, 1.0, true);
    }
  }
  for (int l = 0; l < inst.num_links(); ++l) {
    const bool fixed = inst.initial_link(l);
    for (int t = directional ? 2 : 1; t <= periods; ++t) {
      xl_[index(l, t)] =
          add_named(mip, name("X", {inst.link(l).a, inst.link(l).b, t}),
                    inst.link_op_cost(l, t), fixed ? 1.0 : 0.0, 1.0, true);
    }
  }
  if (directional) {
    xd_.assign(inst.num_arcs(), -1);
    for (int a = 0; a < inst.num_arcs(); ++a) {
      const Arc& arc = inst.arc(a);
      xd_[a] = add_named(mip, name("Xd", {arc.from, arc.to, 1}),
                         inst.link_op_cost(arc.link, 1), 0.0, 1.0, true);
    }
  }
  add_rows(inst, mip);
}

int NetworkBlock::arc_var(int a, int t) const {
  if (directional_ && t == 1) return xd_[a];
  return xl_[index(inst_->arc(a).link, t)];
}

std::vector<int> NetworkBlock::link_vars(int l, int t) const {
  if (directional_ && t == 1) return {xd_[2 * l], xd_[2 * l + 1]};
  return {xl_[index(l, t)]};
}

void NetworkBlock::add_rows(const Instance& inst, MipProblem& mip) {
  const int periods = periods_;
  auto push = [&](std::vector<Term> terms, Sense sense, double rhs) {
    mip.lp.add_row(LpRow{std::move(terms), sense, rhs});
  };
  // Monotone opening.
  for (int i = 0; i < inst.num_nodes(); ++i) {
    if (inst.initial_facility(i)) continue;
    for (int t = 2; t <= periods; ++t) {
      push({{facility_var(i, t), 1.0}, {facility_var(i, t - 1), -1.0}}, Sense::kGe, 0.0);
    }
  }
  for (int l = 0; l < inst.num_links(); ++l) {
    const bool pre = inst.initial_link(l);
    if (directional_) {
      const int f = xd_[2 * l], b = xd_[2 * l + 1];
      // One direction at most; a pre-existing link keeps one direction.
      push({{f, 1.0}, {b, 1.0}}, Sense::kLe, 1.0);
      if (pre) push({{f, 1.0}, {b, 1.0}}, Sense::kGe, 1.0);
      if (periods >= 2 && !pre) {
        push({{xl_[index(l, 2)], 1.0}, {f, -1.0}, {b, -1.0}}, Sense::kGe, 0.0);
      }
      for (int t = 3; t <= periods && !pre; ++t) {
        push({{xl_[index(l, t)], 1.0}, {xl_[index(l, t - 1)], -1.0}}, Sense::kGe, 0.0);
      }
    } else if (!pre) {
      for (int t = 2; t <= periods; ++t) {
        push({{xl_[index(l, t)], 1.0}, {xl_[index(l, t - 1)], -1.0}}, Sense::kGe, 0.0);
      }
    }
  }
  // Cumulative budgets, telescoped: sum_{t'<=t} g_t' (W_t' - W_t'-1).
  for (int t = 1; t <= periods; ++t) {
    std::vector<Term> fac, link;
    double fac_budget = 0.0, link_budget = 0.0;
    for (int tp = 1; tp <= t; ++tp) {
      fac_budget += inst.facility_budget(tp);
      link_budget += inst.link_budget(tp);
    }
    for (int i = 0; i < inst.num_nodes(); ++i) {
      if (inst.initial_facility(i)) continue;
      for (int tp = 1; tp <= t; ++tp) {
        double c = inst.facility_open_cost(i, tp);
        if (tp < t) c -= inst.facility_open_cost(i, tp + 1);
        if (c != 0.0) fac.push_back({facility_var(i, tp), c});
      }
    }
    for (int l = 0; l < inst.num_links(); ++l) {
      if (inst.initial_link(l)) continue;
      for (int tp = 1; tp <= t; ++tp) {
        double c = inst.link_construct_cost(l, tp);
        if (tp < t) c -= inst.link_construct_cost(l, tp + 1);
        if (c == 0.0) continue;
        for (int v : link_vars(l, tp)) link.push_back({v, c});
      }
    }
    push(std::move(fac), Sense::kLe, fac_budget);
    push(std::move(link), Sense::kLe, link_budget);
  }
  // With nothing built yet every node needs a facility or an outgoing arc
  // in period 1, and some facility must open.
  if (directional_ && inst.has_empty_initial_network()) {
    std::vector<Term> any;
    for (int i = 0; i < inst.num_nodes(); ++i) {
      std::vector<Term> row{{facility_var(i, 1), 1.0}};
      for (int a : inst.out_arcs(i)) row.push_back({xd_[a], 1.0});
      push(std::move(row), Sense::kGe, 1.0);
      any.push_back({facility_var(i, 1), 1.0});
    }
    push(std::move(any), Sense::kGe, 1.0);
  }
}

NetworkState NetworkBlock::state(std::span<const double> x) const {
  const Instance& inst = *inst_;
  NetworkState s = NetworkState::initial(inst);
  s.period1_directional = directional_;
  for (int t = 1; t <= periods_; ++t) {
    for (int i = 0; i < inst.num_nodes(); ++i) s.facility(i, t) = x[facility_var(i, t)];
    for (int a = 0; a < inst.num_arcs(); ++a) s.arc(a, t) = x[arc_var(a, t)];
  }
  return s;
}

// ---------------------------------------------------------------------------

MasterModel::MasterModel(const Instance& inst, const MasterConfig& cfg)
    : inst_(&inst), cfg_(cfg), mip_(), block_(inst, mip_, cfg.reformulation) {
  const int n = inst.num_nodes();
  const int periods = inst.num_periods();
  switch (cfg.disaggregation) {
    case Disaggregation::kNodeTime:
      for (int k = 0; k < n; ++k) {
        for (int t = 1; t <= periods; ++t) {
          theta_vars_.push_back(
              add_named(mip_, name("theta", {k, t}), inst.demand(k, t), 0.0, kInfinity, false));
          members_.push_back({{k, t}});
        }
      }
      break;
    case Disaggregation::kNodeOnly:
      for (int k = 0; k < n; ++k) {
        theta_vars_.push_back(add_named(mip_, name("theta", {k}), 1.0, 0.0, kInfinity, false));
        members_.emplace_back();
        for (int t = 1; t <= periods; ++t) members_.back().push_back({k, t});
      }
      break;
    case Disaggregation::kTimeOnly:
      for (int t = 1; t <= periods; ++t) {
        theta_vars_.push_back(
            add_named(mip_, name("theta_t", {t}), 1.0, 0.0, kInfinity, false));
        members_.emplace_back();
        for (int k = 0; k < n; ++k) members_.back().push_back({k, t});
      }
      break;
    case Disaggregation::kSingle:
      theta_vars_.push_back(add_named(mip_, "theta", 1.0, 0.0, kInfinity, false));
      members_.emplace_back();
      for (int k = 0; k < n; ++k) {
        for (int t = 1; t <= periods; ++t) members_.back().push_back({k, t});
      }
      break;
  }
}

int MasterModel::theta_group(int k, int t) const {
  const int periods = inst_->num_periods();
  switch (cfg_.disaggregation) {
    case Disaggregation::kNodeTime: return k * periods + (t - 1);
    case Disaggregation::kNodeOnly: return k;
    case Disaggregation::kTimeOnly: return t - 1;
    case Disaggregation::kSingle: return 0;
  }
  return 0;
}

double MasterModel::member_weight(int k, int t) const {
  return cfg_.disaggregation == Disaggregation::kNodeTime ? 1.0 : inst_->demand(k, t);
}

LpRow MasterModel::finish(std::vector<std::pair<int, double>> terms, Sense sense,
                          double rhs) const {
  std::map<int, double> merged;
  for (const auto& [v, c] : terms) merged[v] += c;
  LpRow row;
  row.sense = sense;
  for (const auto& [v, c] : merged) {
    if (c == 0.0) continue;
    const double lo = mip_.lp.lower[v];
    if (lo == mip_.lp.upper[v]) {
      rhs -= c * lo;  // fold fixed variables
    } else {
      row.terms.push_back({v, c});
    }
  }
  row.rhs = rhs;
  return row;
}

std::optional<LpRow> MasterModel::optimality_row(
    int group, std::span<const OptimalityCut> cuts) const {
  std::vector<std::pair<int, double>> terms{{theta_vars_[group], 1.0}};
  double rhs = 0.0;
  for (const OptimalityCut& cut : cuts) {
    const double w = member_weight(cut.k, cut.t);
    if (w == 0.0) continue;
    rhs += w * cut.constant();
    for (int i = 0; i < inst_->num_nodes(); ++i) {
      if (cut.gamma[i] != 0.0) terms.push_back({block_.facility_var(i, cut.t), w * cut.gamma[i]});
    }
    for (int a = 0; a < inst_->num_arcs(); ++a) {
      if (cut.lambda[a] != 0.0) terms.push_back({block_.arc_var(a, cut.t), w * cut.lambda[a]});
    }
  }
  LpRow row = finish(std::move(terms), Sense::kGe, rhs);
  if (!(row.rhs > 1e-12)) return std::nullopt;
  return row;
}

LpRow MasterModel::feasibility_row(const FeasibilityCut& cut) const {
  std::vector<std::pair<int, double>> terms;
  for (int i : cut.nodes) terms.push_back({block_.facility_var(i, cut.t), 1.0});
  for (int a : cut.arcs) terms.push_back({block_.arc_var(a, cut.t), 1.0});
  return finish(std::move(terms), Sense::kGe, 1.0);
}

LpRow MasterModel::cover_row(const CoverCut& cut) const {
  std::vector<std::pair<int, double>> terms;
  for (int e : cut.items) {
    if (cut.kind == CoverKind::kFacility) {
      terms.push_back({block_.facility_var(e, cut.t), 1.0});
    } else {
      for (int v : block_.link_vars(e, cut.t)) terms.push_back({v, 1.0});
    }
  }
  return finish(std::move(terms), Sense::kLe, cut.bound);
}

bool MasterModel::attach(const LpRow& row) {
  std::vector<double> key{static_cast<double>(row.sense), row.rhs};
  for (const Term& t : row.terms) {
    key.push_back(t.var);
    key.push_back(t.coef);
  }
  if (!attached_keys_.insert(std::move(key)).second) return false;
  attached_.push_back(row);
  return true;
}

std::string MasterModel::export_lp() const {
  return netdesign::export_lp(mip_, attached_);
}

// ---------------------------------------------------------------------------

MonolithicModel::MonolithicModel(const Instance& inst)
    : inst_(&inst), mip_(), block_(inst, mip_, false) {
  const int n = inst.num_nodes();
  const int periods = inst.num_periods();
  const int arcs = inst.num_arcs();
  z_.assign(static_cast<std::size_t>(arcs) * n * (periods + 1), -1);
  auto zi = [&](int a, int k, int t) {
    return (static_cast<std::size_t>(a) * n + k) * (periods + 1) + t;
  };
  for (int t = 1; t <= periods; ++t) {
    for (int k = 0; k < n; ++k) {
      for (int a = 0; a < arcs; ++a) {
        if (inst.arc(a).to == k) continue;
        z_[zi(a, k, t)] = add_named(
            mip_, name("Z", {inst.arc(a).from, inst.arc(a).to, k, t}),
            inst.routing_cost(a, t) * inst.demand(k, t), 0.0, 1.0, false);
      }
    }
  }
  for (int t = 1; t <= periods; ++t) {
    for (int k = 0; k < n; ++k) {
      std::vector<Term> cover{{block_.facility_var(k, t), 1.0}};
      for (int a : inst.out_arcs(k)) cover.push_back({z_[zi(a, k, t)], 1.0});
      mip_.lp.add_row(LpRow{std::move(cover), Sense::kGe, 1.0});
      for (int i = 0; i < n; ++i) {
        if (i == k) continue;
        std::vector<Term> bal{{block_.facility_var(i, t), -1.0}};
        for (int a : inst.in_arcs(i)) bal.push_back({z_[zi(a, k, t)], 1.0});
        for (int a : inst.out_arcs(i)) {
          if (z_[zi(a, k, t)] >= 0) bal.push_back({z_[zi(a, k, t)], -1.0});
        }
        mip_.lp.add_row(LpRow{std::move(bal), Sense::kLe, 0.0});
      }
      for (int a = 0; a < arcs; ++a) {
        const int z = z_[zi(a, k, t)];
        if (z < 0) continue;
        mip_.lp.add_row(LpRow{{{z, 1.0}, {block_.arc_var(a, t), -1.0}}, Sense::kLe, 0.0});
      }
    }
  }
}

FullSolution MonolithicModel::extract(std::span<const double> x) const {
  const Instance& inst = *inst_;
  FullSolution sol = FullSolution::zero(inst);
  sol.state = block_.state(x);
  for (int t = 1; t <= inst.num_periods(); ++t) {
    for (int k = 0; k < inst.num_nodes(); ++k) {
      double cost = 0.0;
      for (int a = 0; a < inst.num_arcs(); ++a) {
        const int z = z_[(static_cast<std::size_t>(a) * inst.num_nodes() + k) *
                             (inst.num_periods() + 1) + t];
        const double v = z >= 0 ? x[z] : 0.0;
        sol.z(inst, a, k, t) = v;
        cost += inst.routing_cost(a, t) * v;
      }
      sol.theta(k, t) = cost;
    }
  }
  sol.objective = evaluate_objective(inst, sol);
  return sol;
}

std::optional<FullSolution> complete_solution(const Instance& inst,
                                              const NetworkState& state) {
  FullSolution sol = FullSolution::zero(inst);
  const int n = inst.num_nodes();
  for (int t = 1; t <= inst.num_periods(); ++t) {
    for (int i = 0; i < n; ++i) sol.state.facility(i, t) = is_open(state.facility(i, t)) ? 1.0 : 0.0;
    for (int l = 0; l < inst.num_links(); ++l) {
      const double open = is_open(state.link_open(l, t)) ? 1.0 : 0.0;
      sol.state.arc(2 * l, t) = open;
      sol.state.arc(2 * l + 1, t) = open;
    }
  }
  for (int t = 1; t <= inst.num_periods(); ++t) {
    for (int k = 0; k < n; ++k) {
      if (is_open(sol.state.facility(k, t))) continue;
      // Dijkstra with parent arcs; equal distances pop lowest node first.
      std::vector<double> dist(n, kInfinity);
      std::vector<int> parent(n, -1);
      using Entry = std::pair<double, int>;
      std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
      dist[k] = 0.0;
      queue.emplace(0.0, k);
      std::vector<char> done(n, 0);
      int target = -1;
      while (!queue.empty()) {
        const auto [d, i] = queue.top();
        queue.pop();
        if (done[i]) continue;
        done[i] = 1;
        if (i != k && is_open(sol.state.facility(i, t))) {
          target = i;
          break;
        }
        for (int a : inst.out_arcs(i)) {
          if (!is_open(sol.state.arc(a, t))) continue;
          const int j = inst.arc(a).to;
          if (j == k) continue;
          const double nd = d + inst.routing_cost(a, t);
          if (nd < dist[j]) {
            dist[j] = nd;
            parent[j] = a;
            queue.emplace(nd, j);
          }
        }
      }
      if (target < 0) return std::nullopt;
      double cost = 0.0;
      for (int v = target; v != k; v = inst.arc(parent[v]).from) {
        sol.z(inst, parent[v], k, t) = 1.0;
        cost += inst.routing_cost(parent[v], t);
      }
      sol.theta(k, t) = cost;
    }
  }
  sol.objective = evaluate_objective(inst, sol);
  return sol;
}

}  // namespace netdesign
