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


#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "solver.hpp"

namespace netdesign {
namespace {

std::vector<Instance> tiny(int count) {
  std::vector<Instance> out;
  for (std::uint64_t seed = 1; static_cast<int>(out.size()) < count; ++seed) {
    const int periods = 1 + static_cast<int>(seed % 3);
    const Instance inst = fixture::small(seed, 4 + static_cast<int>(seed % 3), periods,
                                         seed % 2 == 0, 0.5);
    if (oracle::closed_items(inst) * periods <= 14) out.push_back(inst);
  }
  return out;
}

void expect_optimum(const Instance& inst, const SolveOptions& opt, const std::optional<double>& truth) {
  const SolveReport r = solve(inst, opt);
  INFO("mode " << to_string(opt.mode) << " disagg " << to_string(opt.disaggregation));
  if (!truth) {
    CHECK(r.status == MipStatus::kInfeasible);
    CHECK_FALSE(r.has_solution);
    return;
  }
  REQUIRE(r.status == MipStatus::kOptimal);
  REQUIRE(r.has_solution);
  CHECK(oracle::relative_close(r.objective, *truth, 1e-6));
  CHECK(check_feasibility(inst, r.solution).empty());
  CHECK(oracle::relative_close(evaluate_objective(inst, r.solution), *truth, 1e-6));
  CHECK(r.bound <= r.objective + 1e-6 * (1 + std::abs(r.objective)));
}

TEST_CASE("every mode and disaggregation level reaches the enumerated optimum") {
  int infeasible = 0;
  for (const Instance& inst : tiny(16)) {
    const auto truth = oracle::brute_force_optimum(inst);
    infeasible += !truth;
    for (SolveMode mode : {SolveMode::kMonolithic, SolveMode::kBendersBc, SolveMode::kBendersIterative}) {
      for (Disaggregation d : {Disaggregation::kNodeTime, Disaggregation::kNodeOnly,
                               Disaggregation::kTimeOnly, Disaggregation::kSingle}) {
        if (mode == SolveMode::kMonolithic && d != Disaggregation::kNodeTime) continue;
        SolveOptions opt;
        opt.mode = mode;
        opt.disaggregation = d;
        expect_optimum(inst, opt, truth);
      }
    }
  }
  MESSAGE("infeasible instances: " << infeasible);
}

TEST_CASE("cut kinds and toggles do not change the optimum") {
  for (const Instance& inst : tiny(10)) {
    const auto truth = oracle::brute_force_optimum(inst);
    for (CutKind ws : {CutKind::kNonA, CutKind::kAnOne, CutKind::kAnTwo}) {
      for (CutKind cb : {CutKind::kNonA, CutKind::kAnOne, CutKind::kAnTwo}) {
        SolveOptions opt;
        opt.warmstart_cuts = ws;
        opt.callback_cuts = cb;
        opt.reformulation = ws != CutKind::kAnTwo;
        opt.cover_cuts = cb != CutKind::kNonA;
        opt.fractional_cuts = ws == CutKind::kAnOne;
        opt.branching = cb == CutKind::kAnTwo ? Branching::kMostFractional : Branching::kPseudocost;
        expect_optimum(inst, opt, truth);
      }
    }
    SolveOptions cold;
    cold.warm_start = false;
    expect_optimum(inst, cold, truth);
  }
}

TEST_CASE("new networks are solved through lazy feasibility cuts alone") {
  int checked = 0;
  for (std::uint64_t seed = 1; checked < 8; ++seed) {
    const Instance inst = fixture::small(seed, 5, 1 + static_cast<int>(seed % 2), false, 0.5);
    if (oracle::closed_items(inst) * inst.num_periods() > 14) continue;
    REQUIRE(inst.has_empty_initial_network());
    const auto truth = oracle::brute_force_optimum(inst);
    if (!truth) continue;
    ++checked;
    SolveOptions bare;
    bare.reformulation = false;
    bare.cover_cuts = false;
    bare.warm_start = false;
    expect_optimum(inst, bare, truth);
    SolveOptions full;
    full.reformulation = true;
    expect_optimum(inst, full, truth);
  }
}

TEST_CASE("an unaffordable network is reported infeasible by every mode") {
  InstanceData d = InstanceData::sized(3, 1, {{0, 1}, {1, 2}});
  for (int i = 0; i < 3; ++i) {
    d.demand(i, 1) = 1;
    d.facility_open_cost(i, 1) = 10;
  }
  d.facility_budget[1] = 5;
  const Instance inst(std::move(d));
  for (SolveMode mode : {SolveMode::kMonolithic, SolveMode::kBendersBc, SolveMode::kBendersIterative}) {
    SolveOptions opt;
    opt.mode = mode;
    const SolveReport r = solve(inst, opt);
    CHECK(r.status == MipStatus::kInfeasible);
  }
}

TEST_CASE("defaults depend on the initial network") {
  const Instance existing = fixture::small(1, 6, 2, true);
  const Instance fresh = fixture::small(1, 6, 2, false);
  const MasterConfig a = default_config(existing);
  const MasterConfig b = default_config(fresh);
  CHECK(a.warmstart_cuts == CutKind::kAnTwo);
  CHECK_FALSE(a.cover_cuts);
  CHECK(b.warmstart_cuts == CutKind::kNonA);
  CHECK(b.cover_cuts);
  CHECK(a.callback_cuts == CutKind::kAnOne);
  CHECK(a.disaggregation == Disaggregation::kNodeTime);
  CHECK(default_time_limit(existing) == 50.0 * 6 * 2);

  SolveOptions opt;
  opt.cover_cuts = true;
  opt.disaggregation = Disaggregation::kSingle;
  const MasterConfig c = resolve_config(existing, opt);
  CHECK(c.cover_cuts);
  CHECK(c.disaggregation == Disaggregation::kSingle);
  CHECK(c.warmstart_cuts == CutKind::kAnTwo);
}

TEST_CASE("report carries counters, trace and exports") {
  const Instance inst = fixture::small(4, 6, 2, true);
  std::ostringstream log;
  SolveOptions opt;
  opt.export_model = true;
  opt.node_log = &log;
  const SolveReport r = solve(inst, opt);
  REQUIRE(r.status == MipStatus::kOptimal);
  CHECK(r.subproblems > 0);
  CHECK(r.optimality_cuts > 0);
  CHECK_FALSE(r.warm_start.iterations.empty());
  CHECK_FALSE(r.model_lp.empty());
  CHECK_FALSE(r.cut_dump.empty());
  CHECK_FALSE(log.str().empty());
  CHECK(r.gap <= 1e-6);
}

}  // namespace
}  // namespace netdesign
