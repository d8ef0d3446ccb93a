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

// Feasibility cuts from minimum cuts, budget cover inequalities and the pool
// that keeps every generated cut once.

#ifndef NETDESIGN_CUTS_HPP_
#define NETDESIGN_CUTS_HPP_

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "instance.hpp"
#include "subproblem.hpp"

namespace netdesign {

// sum_{i in S} W_it + sum_{a in delta(S)} X_at >= 1.
struct FeasibilityCut {
  int k = 0;
  int t = 0;
  std::vector<int> nodes;  // S, sorted, contains k
  std::vector<int> arcs;   // arcs leaving S, sorted

  double value(const NetworkState& state) const;
  bool operator==(const FeasibilityCut&) const = default;
};

enum class CoverKind { kFacility, kLink };

// Items opened by the end of period t (beyond the initial network) number at
// most `bound`: sum_{i in items} (W_it - W_i0) <= bound, or the link analogue.
struct CoverCut {
  CoverKind kind = CoverKind::kFacility;
  int t = 0;
  std::vector<int> items;  // sorted
  int bound = 0;

  double lhs(const NetworkState& state) const;
  bool operator==(const CoverCut&) const = default;
};

// Separates a set S around k whose facilities and leaving arcs carry less
// than one unit of capacity, via a maximum flow from k to a super sink.
std::optional<FeasibilityCut> feasibility_cut_min_cut(const Instance& inst,
                                                      const NetworkState& state,
                                                      int k, int t,
                                                      double tol = 1e-7);

// Cover inequalities for period t violated by a fractional state.
std::vector<CoverCut> budget_cover_cuts(const Instance& inst,
                                        const NetworkState& state, int t,
                                        double tol_int = 1e-6);

class CutPool {
 public:
  // Each returns false for an exact duplicate of a stored cut.
  bool add(const OptimalityCut& cut);
  bool add(const FeasibilityCut& cut);
  bool add(const CoverCut& cut);

  const std::vector<OptimalityCut>& optimality() const { return optimality_; }
  const std::vector<FeasibilityCut>& feasibility() const { return feasibility_; }
  const std::vector<CoverCut>& cover() const { return cover_; }
  int num_optimality() const { return static_cast<int>(optimality_.size()); }
  int num_feasibility() const {
    return static_cast<int>(feasibility_.size() + cover_.size());
  }

  // One line per cut: kind, (k,t), sparse coefficients.
  std::string dump() const;

 private:
  std::vector<OptimalityCut> optimality_;
  std::vector<FeasibilityCut> feasibility_;
  std::vector<CoverCut> cover_;
  std::set<std::vector<double>> optimality_keys_;
  std::set<std::vector<int>> feasibility_keys_;
  std::set<std::vector<int>> cover_keys_;
};

}  // namespace netdesign

#endif  // NETDESIGN_CUTS_HPP_
