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


#include <random>

#include "cuts.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "master.hpp"
#include "oracles.hpp"
#include "subproblem.hpp"
#include "warmstart.hpp"

namespace netdesign {
namespace {

struct Enumerated {
  std::vector<NetworkState> states;    // budget feasible
  std::vector<NetworkState> feasible;  // and every client served
};

Enumerated enumerate(const Instance& inst) {
  Enumerated e;
  e.states = oracle::enumerate_states(inst);
  for (const NetworkState& s : e.states) {
    if (oracle::plan_cost(inst, s)) e.feasible.push_back(s);
  }
  return e;
}

// Small instances whose network binaries number at most 12.
std::vector<Instance> small_instances() {
  std::vector<Instance> out;
  for (std::uint64_t seed = 1; out.size() < 24; ++seed) {
    const int periods = 1 + static_cast<int>(seed % 2);
    const Instance inst = fixture::small(seed, 4 + static_cast<int>(seed % 2), periods,
                                         seed % 3 != 0, 0.6);
    if (oracle::closed_items(inst) * periods <= 12) out.push_back(inst);
  }
  return out;
}

void check_optimality_cut(const Instance& inst, const OptimalityCut& c, const Enumerated& e,
                          long& checks) {
  REQUIRE(oracle::dual_infeasibility(inst, c, 1e-7).empty());
  for (const NetworkState& s : e.states) {
    const auto th = oracle::theta(inst, s, c.k, c.t);
    if (!th) continue;
    CHECK(oracle::cut_rhs(c, s) <= *th + 1e-7 * (1 + *th));
    ++checks;
  }
}

TEST_CASE("analytic and LP cuts are valid for every enumerated plan") {
  long checks = 0;
  for (const Instance& inst : small_instances()) {
    const Enumerated e = enumerate(inst);
    for (const NetworkState& s : e.states) {
      for (int t = 1; t <= inst.num_periods(); ++t) {
        for (int k = 0; k < inst.num_nodes(); ++k) {
          if (s.facility(k, t) > 0.5 || !solve_subproblem(inst, s, k, t)) continue;
          const DistanceField df = shortest_distances(inst, s, k, t);
          check_optimality_cut(inst, cut_lambda_heavy(inst, s, k, t, df), e, checks);
          check_optimality_cut(inst, cut_gamma_heavy(inst, s, k, t, df), e, checks);
          check_optimality_cut(inst, *cut_from_lp(inst, s, k, t), e, checks);
        }
      }
    }
  }
  CHECK(checks > 10000);
}

TEST_CASE("cuts pooled by the warm start are valid for every enumerated plan") {
  long opt = 0, feas = 0, cover = 0, checks = 0;
  for (const Instance& inst : small_instances()) {
    const Enumerated e = enumerate(inst);
    for (CutKind kind : {CutKind::kNonA, CutKind::kAnOne, CutKind::kAnTwo}) {
      for (bool reform : {false, true}) {
        MasterConfig cfg;
        cfg.reformulation = reform;
        MasterModel model(inst, cfg);
        CutPool pool;
        SeparationStats stats;
        WarmStartOptions opts;
        opts.kind = kind;
        warm_start(model, pool, stats, opts);
        for (const OptimalityCut& c : pool.optimality()) {
          check_optimality_cut(inst, c, e, checks);
          ++opt;
        }
        for (const FeasibilityCut& c : pool.feasibility()) {
          for (const NetworkState& s : e.feasible) CHECK(c.value(s) >= 1.0 - 1e-9);
          ++feas;
        }
        for (const CoverCut& c : pool.cover()) {
          for (const NetworkState& s : e.states) CHECK(c.lhs(s) <= c.bound + 1e-9);
          ++cover;
        }
      }
    }
  }
  CHECK(opt > 100);
  CHECK(feas > 0);
  CHECK(cover > 0);
}

TEST_CASE("min-cut feasibility cuts separate unserved clients and keep served ones") {
  std::mt19937_64 rng(17);
  long separated = 0;
  for (const Instance& inst : small_instances()) {
    const Enumerated e = enumerate(inst);
    for (int trial = 0; trial < 40; ++trial) {
      NetworkState s = NetworkState::initial(inst);
      const int t = 1 + static_cast<int>(rng() % inst.num_periods());
      if (trial % 2) {
        fixture::randomize_period(inst, s, t, rng, 0.2, 0.3);
      } else {
        fixture::randomize_period_fractional(inst, s, t, rng);
      }
      for (int k = 0; k < inst.num_nodes(); ++k) {
        const auto cut = feasibility_cut_min_cut(inst, s, k, t);
        const auto routed = oracle::routing_lp(inst, s, k, t);
        CHECK(cut.has_value() == !routed.has_value());
        if (!cut) continue;
        ++separated;
        CHECK(cut->value(s) < 1.0);
        CHECK(std::binary_search(cut->nodes.begin(), cut->nodes.end(), k));
        for (const NetworkState& f : e.feasible) CHECK(cut->value(f) >= 1.0 - 1e-9);
      }
    }
  }
  CHECK(separated > 100);
}

TEST_CASE("cover cuts hold for every budget feasible plan") {
  std::mt19937_64 rng(23);
  long generated = 0;
  for (const Instance& inst : small_instances()) {
    const Enumerated e = enumerate(inst);
    for (int trial = 0; trial < 40; ++trial) {
      NetworkState s = NetworkState::initial(inst);
      for (int t = 1; t <= inst.num_periods(); ++t) {
        fixture::randomize_period_fractional(inst, s, t, rng);
      }
      for (int t = 1; t <= inst.num_periods(); ++t) {
        for (const CoverCut& c : budget_cover_cuts(inst, s, t)) {
          ++generated;
          for (const NetworkState& f : e.states) CHECK(c.lhs(f) <= c.bound + 1e-9);
        }
      }
    }
  }
  CHECK(generated > 20);
}

TEST_CASE("pool rejects exact duplicates") {
  const Instance inst = fixture::fig1();
  const NetworkState s = fixture::fig1_state(false, false);
  const DistanceField df = shortest_distances(inst, s, 0, 1);
  CutPool pool;
  CHECK(pool.add(cut_lambda_heavy(inst, s, 0, 1, df)));
  CHECK_FALSE(pool.add(cut_lambda_heavy(inst, s, 0, 1, df)));
  CHECK(pool.add(cut_gamma_heavy(inst, s, 0, 1, df)));
  CHECK(pool.num_optimality() == 2);
  FeasibilityCut f{0, 1, {0, 1}, {2, 5}};
  CHECK(pool.add(f));
  CHECK_FALSE(pool.add(f));
  CHECK(pool.num_feasibility() == 1);
  CHECK_FALSE(pool.dump().empty());
}

}  // namespace
}  // namespace netdesign
