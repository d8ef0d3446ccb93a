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

// Benders master problem and the monolithic model.
//
// Construction indicators are eliminated: U_it = W_it - W_i,t-1 and the
// link analogue, so opening dynamics become monotonicity rows and budgets
// are written over W and X directly. Variables fixed by the initial network
// are kept with equal bounds.

#ifndef NETDESIGN_MASTER_HPP_
#define NETDESIGN_MASTER_HPP_

#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cuts.hpp"
#include "instance.hpp"
#include "lp.hpp"
#include "subproblem.hpp"

namespace netdesign {

enum class Disaggregation { kNodeTime, kNodeOnly, kTimeOnly, kSingle };
enum class CutKind { kNonA, kAnOne, kAnTwo };

const char* to_string(Disaggregation d);
const char* to_string(CutKind c);

struct MasterConfig {
  Disaggregation disaggregation = Disaggregation::kNodeTime;
  bool reformulation = true;
  bool cover_cuts = true;
  CutKind warmstart_cuts = CutKind::kNonA;
  CutKind callback_cuts = CutKind::kAnOne;
  bool warm_start = true;
};

struct MipProblem {
  LpProblem lp;
  std::vector<int> integer_vars;
  std::vector<std::string> names;
};

// Listing in an LP-like text format.
std::string export_lp(const MipProblem& mip, std::span<const LpRow> extra_rows = {});

// Facility and link variables shared by the master and the monolithic model.
class NetworkBlock {
 public:
  // `directional` makes period-1 arcs independent per direction.
  NetworkBlock(const Instance& inst, MipProblem& mip, bool directional);

  int facility_var(int i, int t) const { return w_[index(i, t)]; }
  // Variable carrying X of arc a in period t.
  int arc_var(int a, int t) const;
  // Variables whose sum is the openness of link l in period t.
  std::vector<int> link_vars(int l, int t) const;
  bool directional() const { return directional_; }
  NetworkState state(std::span<const double> x) const;

 private:
  std::size_t index(int e, int t) const {
    return static_cast<std::size_t>(e) * (periods_ + 1) + t;
  }
  void add_rows(const Instance& inst, MipProblem& mip);

  int periods_;
  bool directional_;
  const Instance* inst_;
  std::vector<int> w_;   // node x period
  std::vector<int> xl_;  // link x period
  std::vector<int> xd_;  // arc, period 1 when directional
};

class MasterModel {
 public:
  MasterModel(const Instance& inst, const MasterConfig& cfg);

  const Instance& instance() const { return *inst_; }
  const MasterConfig& config() const { return cfg_; }
  const MipProblem& base() const { return mip_; }
  const NetworkBlock& network() const { return block_; }

  int num_theta_groups() const { return static_cast<int>(theta_vars_.size()); }
  int theta_group(int k, int t) const;
  int theta_var(int group) const { return theta_vars_[group]; }
  const std::vector<std::pair<int, int>>& group_members(int group) const {
    return members_[group];
  }
  // Factor of member (k,t) inside its group's theta: 1 for per-(k,t)
  // variables (demand sits in the objective), d_kt for aggregated ones.
  double member_weight(int k, int t) const;

  NetworkState state(std::span<const double> x) const { return block_.state(x); }

  // theta_g + sum w (gamma W + lambda X) >= sum w gamma_k over the given
  // member cuts; nullopt when the right-hand side is not positive.
  std::optional<LpRow> optimality_row(int group,
                                      std::span<const OptimalityCut> cuts) const;
  LpRow feasibility_row(const FeasibilityCut& cut) const;
  LpRow cover_row(const CoverCut& cut) const;

  // Records a cut row; false when an identical row was attached before.
  bool attach(const LpRow& row);
  const std::vector<LpRow>& attached() const { return attached_; }
  std::string export_lp() const;

 private:
  LpRow finish(std::vector<std::pair<int, double>> terms, Sense sense,
               double rhs) const;

  const Instance* inst_;
  MasterConfig cfg_;
  MipProblem mip_;
  NetworkBlock block_;
  std::vector<int> theta_vars_;
  std::vector<std::vector<std::pair<int, int>>> members_;
  std::vector<LpRow> attached_;
  std::set<std::vector<double>> attached_keys_;
};

// Complete model with flow variables, used as the reference solver.
class MonolithicModel {
 public:
  explicit MonolithicModel(const Instance& inst);
  const MipProblem& mip() const { return mip_; }
  FullSolution extract(std::span<const double> x) const;

 private:
  const Instance* inst_;
  MipProblem mip_;
  NetworkBlock block_;
  std::vector<int> z_;  // (arc, k, t) -> variable or -1
};

// Shortest-path routing for an integral state with both directions of every
// link tied together; returns nullopt when some client cannot be served.
std::optional<FullSolution> complete_solution(const Instance& inst,
                                              const NetworkState& state);

}  // namespace netdesign

#endif  // NETDESIGN_MASTER_HPP_
