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

#include "bnb.hpp"
#include "doctest.h"
#include "master.hpp"
#include "oracles.hpp"

namespace netdesign {
namespace {

// Brute force over integer boxes; continuous variables are not allowed.
std::optional<double> brute_force(const LpProblem& p, const std::vector<LpRow>& lazy = {}) {
  const int n = p.num_vars();
  std::vector<int> x(n);
  for (int j = 0; j < n; ++j) x[j] = static_cast<int>(p.lower[j]);
  std::optional<double> best;
  auto satisfied = [&](const LpRow& r) {
    double lhs = 0;
    for (const Term& t : r.terms) lhs += t.coef * x[t.var];
    switch (r.sense) {
      case Sense::kLe: return lhs <= r.rhs + 1e-9;
      case Sense::kGe: return lhs >= r.rhs - 1e-9;
      case Sense::kEq: return std::abs(lhs - r.rhs) <= 1e-9;
    }
    return false;
  };
  for (;;) {
    bool ok = true;
    for (const LpRow& r : p.rows) ok = ok && satisfied(r);
    for (const LpRow& r : lazy) ok = ok && satisfied(r);
    if (ok) {
      double v = 0;
      for (int j = 0; j < n; ++j) v += p.cost[j] * x[j];
      if (!best || v < *best) best = v;
    }
    int j = 0;
    while (j < n && ++x[j] > static_cast<int>(p.upper[j])) {
      x[j] = static_cast<int>(p.lower[j]);
      ++j;
    }
    if (j == n) break;
  }
  return best;
}

MipProblem random_ip(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nvars(2, 6), nrows(1, 4), coef(-6, 9), ub(1, 3);
  MipProblem m;
  const int n = nvars(rng);
  for (int j = 0; j < n; ++j) {
    m.lp.add_var(coef(rng), 0.0, ub(rng));
    m.integer_vars.push_back(j);
  }
  const int rows = nrows(rng);
  for (int i = 0; i < rows; ++i) {
    LpRow r;
    for (int j = 0; j < n; ++j) {
      if (const int c = coef(rng); c != 0) r.terms.push_back({j, static_cast<double>(c)});
    }
    if (r.terms.empty()) r.terms.push_back({0, 1.0});
    const int s = static_cast<int>(rng() % 3);
    r.sense = s == 0 ? Sense::kLe : s == 1 ? Sense::kGe : Sense::kEq;
    r.rhs = std::uniform_int_distribution<int>(-4, 12)(rng);
    if (r.sense == Sense::kEq && rng() % 2) r.rhs = 0;
    m.lp.add_row(std::move(r));
  }
  return m;
}

TEST_CASE("random integer programs match brute force under both branching rules") {
  std::mt19937_64 rng(31);
  int feasible = 0, infeasible = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const MipProblem m = random_ip(rng);
    const auto truth = brute_force(m.lp);
    for (Branching b : {Branching::kMostFractional, Branching::kPseudocost}) {
      MipLimits lim;
      lim.branching = b;
      const MipResult r = mip_solve(m, nullptr, lim);
      INFO("trial " << trial);
      if (!truth) {
        CHECK(r.status == MipStatus::kInfeasible);
        continue;
      }
      REQUIRE(r.status == MipStatus::kOptimal);
      CHECK(r.objective == doctest::Approx(*truth).epsilon(1e-9));
      CHECK(r.bound <= r.objective + 1e-9);
      for (int j : m.integer_vars) CHECK(std::abs(r.x[j] - std::round(r.x[j])) <= 1e-6);
    }
    (truth ? feasible : infeasible)++;
  }
  CHECK(feasible > 100);
  CHECK(infeasible > 10);
}

// Hides a set of rows from the model and returns them only when violated.
class LazyRows : public MipCallback {
 public:
  explicit LazyRows(std::vector<LpRow> rows) : rows_(std::move(rows)) {}
  std::vector<LpRow> on_candidate(std::span<const double> x) override {
    ++calls;
    std::vector<LpRow> out;
    for (const LpRow& r : rows_) {
      double lhs = 0;
      for (const Term& t : r.terms) lhs += t.coef * x[t.var];
      const bool bad = r.sense == Sense::kLe   ? lhs > r.rhs + 1e-7
                       : r.sense == Sense::kGe ? lhs < r.rhs - 1e-7
                                               : std::abs(lhs - r.rhs) > 1e-7;
      if (bad) out.push_back(r);
    }
    return out;
  }
  int calls = 0;

 private:
  std::vector<LpRow> rows_;
};

TEST_CASE("lazy rows give the same optimum as explicit rows") {
  std::mt19937_64 rng(41);
  int lazy_used = 0;
  for (int trial = 0; trial < 200; ++trial) {
    MipProblem m = random_ip(rng);
    const int keep = static_cast<int>(rng() % m.lp.rows.size());
    std::vector<LpRow> hidden(m.lp.rows.begin() + keep, m.lp.rows.end());
    const auto truth = brute_force(m.lp);
    m.lp.rows.resize(keep);
    LazyRows cb(hidden);
    MipLimits lim;
    lim.branching = trial % 2 ? Branching::kPseudocost : Branching::kMostFractional;
    const MipResult r = mip_solve(m, &cb, lim);
    INFO("trial " << trial);
    if (!truth) {
      CHECK(r.status == MipStatus::kInfeasible);
      continue;
    }
    REQUIRE(r.status == MipStatus::kOptimal);
    CHECK(r.objective == doctest::Approx(*truth).epsilon(1e-9));
    CHECK(cb.on_candidate(r.x).empty());
    lazy_used += r.lazy_rows > 0;
  }
  CHECK(lazy_used > 5);
}

TEST_CASE("extra rows are honored") {
  MipProblem m;
  m.lp.add_var(-1, 0, 5);
  m.lp.add_var(-1, 0, 5);
  m.integer_vars = {0, 1};
  const LpRow extra{{{0, 2.0}, {1, 2.0}}, Sense::kLe, 7.0};
  const MipResult r = mip_solve(m, nullptr, MipLimits{}, std::span<const LpRow>(&extra, 1));
  REQUIRE(r.status == MipStatus::kOptimal);
  CHECK(r.objective == -3.0);
}

TEST_CASE("node limit reports a feasible or limited status") {
  std::mt19937_64 rng(3);
  MipProblem m;
  const int n = 14;
  LpRow cap{{}, Sense::kLe, 0};
  for (int j = 0; j < n; ++j) {
    const double w = 10 + static_cast<double>(rng() % 40);
    m.lp.add_var(-(w + static_cast<double>(rng() % 7)), 0, 1);
    m.integer_vars.push_back(j);
    cap.terms.push_back({j, w});
    cap.rhs += w / 2;
  }
  cap.rhs = std::floor(cap.rhs) + 0.5;
  m.lp.add_row(cap);
  MipLimits lim;
  lim.node_limit = 3;
  const MipResult r = mip_solve(m, nullptr, lim);
  CHECK(r.nodes <= 3);
  CHECK((r.status == MipStatus::kFeasible || r.status == MipStatus::kTimeLimit ||
         r.status == MipStatus::kOptimal));
  if (r.status == MipStatus::kFeasible) CHECK(r.has_incumbent);
  lim.node_limit = 0;
  const MipResult full = mip_solve(m, nullptr, lim);
  CHECK(full.status == MipStatus::kOptimal);
  CHECK(full.objective == doctest::Approx(*brute_force(m.lp)));
}

TEST_CASE("relative gap") {
  CHECK(relative_gap(100, 99) == doctest::Approx(0.01));
  CHECK(relative_gap(5, 5) == 0.0);
}

}  // namespace
}  // namespace netdesign
