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

#include "doctest.h"
#include "fixtures.hpp"
#include "master.hpp"
#include "oracles.hpp"
#include "warmstart.hpp"

namespace netdesign {
namespace {

TEST_CASE("fractional routing: flow decomposition and dual recovery") {
  std::mt19937_64 rng(808);
  int recovered = 0, fallbacks = 0, linear = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const Instance inst = fixture::small(1 + trial, 4 + trial % 5, 1, trial % 2 == 0, 0.6);
    NetworkState s = NetworkState::initial(inst);
    fixture::randomize_period_fractional(inst, s, 1, rng);
    const int k = static_cast<int>(rng() % inst.num_nodes());
    if (s.facility(k, 1) >= 1.0) continue;
    const auto truth = oracle::routing_lp(inst, s, k, 1);
    const auto fs = fractional_subproblem(inst, s, k, 1);
    REQUIRE(truth.has_value() == fs.has_value());
    if (!fs) continue;
    INFO("trial " << trial);
    CHECK(fs->objective == doctest::Approx(*truth).epsilon(1e-7));
    CHECK(oracle::dual_infeasibility(inst, fs->lp_cut, 1e-7).empty());

    const PathDecomposition dec = decompose_flow(inst, s, k, 1, fs->arc_flow);
    double total = 0, cost = 0;
    for (const FlowPath& p : dec.paths) {
      total += p.flow;
      cost += p.flow * p.length;
      double len = 0;
      int at = k;
      for (int a : p.arcs) {
        CHECK(inst.arc(a).from == at);
        at = inst.arc(a).to;
        len += inst.routing_cost(a, 1);
      }
      CHECK(at == p.dest);
      CHECK(len == doctest::Approx(p.length));
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(cost == doctest::Approx(fs->objective).epsilon(1e-7));

    RecoveryMethod method = RecoveryMethod::kLp;
    const auto cut = recover_duals(dec, inst, s, k, 1, fs->objective, &method);
    if (!cut) {
      ++fallbacks;
      continue;
    }
    ++recovered;
    linear += method == RecoveryMethod::kLinearSystem;
    CHECK(oracle::dual_infeasibility(inst, *cut, 1e-6).empty());
    CHECK(oracle::cut_rhs(*cut, s) == doctest::Approx(*truth).epsilon(1e-6));

    const OptimalityCut raised = raise_gammas(inst, s, *cut);
    CHECK(oracle::dual_infeasibility(inst, raised, 1e-6).empty());
    CHECK(oracle::cut_rhs(raised, s) == doctest::Approx(*truth).epsilon(1e-6));
    for (std::size_t i = 0; i < raised.gamma.size(); ++i) {
      if (static_cast<int>(i) != k) CHECK(raised.gamma[i] >= cut->gamma[i] - 1e-9);
    }
  }
  CHECK(recovered > 200);
  CHECK(linear > 0);
  CHECK(fallbacks * 20 < recovered);
}

TEST_CASE("integral states recover the analytic value") {
  std::mt19937_64 rng(4);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Instance inst = fixture::small(50 + trial, 5, 1, true, 0.6);
    NetworkState s = NetworkState::initial(inst);
    fixture::randomize_period(inst, s, 1, rng, 0.3, 0.6);
    const int k = static_cast<int>(rng() % inst.num_nodes());
    if (s.facility(k, 1) > 0.5) continue;
    const auto th = oracle::theta(inst, s, k, 1);
    const auto fs = fractional_subproblem(inst, s, k, 1);
    REQUIRE(th.has_value() == fs.has_value());
    if (!fs) continue;
    ++checked;
    CHECK(fs->objective == doctest::Approx(*th).epsilon(1e-9));
    const PathDecomposition dec = decompose_flow(inst, s, k, 1, fs->arc_flow);
    if (auto cut = recover_duals(dec, inst, s, k, 1, fs->objective)) {
      CHECK(oracle::dual_infeasibility(inst, *cut, 1e-6).empty());
      CHECK(oracle::cut_rhs(*cut, s) == doctest::Approx(*th).epsilon(1e-6));
    }
  }
  CHECK(checked > 50);
}

struct Run {
  WarmStartTrace trace;
  double cut_free = 0;
  SeparationStats stats;
  long pool = 0;
};

Run run(const Instance& inst, Disaggregation d, CutKind kind, bool cover) {
  MasterConfig cfg;
  cfg.disaggregation = d;
  cfg.cover_cuts = cover;
  MasterModel model(inst, cfg);
  Run r;
  r.cut_free = *master_lp_bound(model);
  CutPool pool;
  WarmStartOptions opts;
  opts.kind = kind;
  opts.cover = cover;
  r.trace = warm_start(model, pool, r.stats, opts);
  r.pool = pool.num_optimality() + pool.num_feasibility();
  return r;
}

TEST_CASE("warm start bounds never decrease and never exceed the optimum") {
  int instances = 0;
  for (std::uint64_t seed = 1; instances < 12; ++seed) {
    const int periods = 1 + static_cast<int>(seed % 2);
    const Instance inst = fixture::small(seed, 4 + static_cast<int>(seed % 2), periods,
                                         seed % 2 == 0, 0.6);
    if (oracle::closed_items(inst) * periods > 12) continue;
    const auto opt = oracle::brute_force_optimum(inst);
    if (!opt) continue;
    ++instances;
    for (CutKind kind : {CutKind::kNonA, CutKind::kAnOne, CutKind::kAnTwo}) {
      const Run r = run(inst, Disaggregation::kNodeTime, kind, true);
      REQUIRE_FALSE(r.trace.iterations.empty());
      for (std::size_t i = 1; i < r.trace.iterations.size(); ++i) {
        CHECK(r.trace.iterations[i].bound >= r.trace.iterations[i - 1].bound - 1e-7);
      }
      CHECK(r.trace.final_bound >= r.cut_free - 1e-7);
      CHECK(r.trace.final_bound <= *opt + 1e-6 * (1 + std::abs(*opt)));
      CHECK(r.trace.initial_bound == doctest::Approx(r.cut_free));
      CHECK(r.trace.termination == "converged");
    }
  }
}

TEST_CASE("finer disaggregation gives a bound at least as strong") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance inst = fixture::small(seed, 6, 2, seed % 2 == 0, 0.5);
    const double nt = run(inst, Disaggregation::kNodeTime, CutKind::kAnOne, true).trace.final_bound;
    const double n = run(inst, Disaggregation::kNodeOnly, CutKind::kAnOne, true).trace.final_bound;
    const double t = run(inst, Disaggregation::kTimeOnly, CutKind::kAnOne, true).trace.final_bound;
    const double s = run(inst, Disaggregation::kSingle, CutKind::kAnOne, true).trace.final_bound;
    INFO("seed " << seed);
    CHECK(nt >= n - 1e-7 * (1 + std::abs(n)));
    CHECK(nt >= t - 1e-7 * (1 + std::abs(t)));
    CHECK(n >= s - 1e-7 * (1 + std::abs(s)));
    CHECK(t >= s - 1e-7 * (1 + std::abs(s)));
  }
}

TEST_CASE("subproblem counter advances by the number of theta groups per sweep") {
  const Instance inst = fixture::small(3, 5, 3, true);
  for (auto [d, per] : {std::pair{Disaggregation::kNodeTime, 15}, std::pair{Disaggregation::kTimeOnly, 3},
                        std::pair{Disaggregation::kNodeOnly, 5}, std::pair{Disaggregation::kSingle, 1}}) {
    const Run r = run(inst, d, CutKind::kAnOne, false);
    CHECK(r.stats.subproblems == per * static_cast<long>(r.trace.iterations.size()));
  }
}

TEST_CASE("trace csv has one line per iteration") {
  const Run r = run(fixture::small(2, 5, 2, false), Disaggregation::kNodeTime, CutKind::kNonA, true);
  const std::string csv = r.trace.csv();
  CHECK(csv.rfind("iteration,bound,cuts_opt,cuts_feas,cuts_cover\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') ==
        static_cast<long>(r.trace.iterations.size()) + 1);
}

}  // namespace
}  // namespace netdesign
