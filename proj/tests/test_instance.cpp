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


#include <algorithm>
#include <filesystem>
#include <random>
#include <string>

#include "doctest.h"
#include "fixtures.hpp"
#include "instance.hpp"
#include "master.hpp"
#include "oracles.hpp"

namespace netdesign {
namespace {

bool has(const std::vector<Violation>& v, const std::string& name) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.constraint == name; });
}

TEST_CASE("generator is deterministic per seed") {
  for (bool existing : {true, false}) {
    const Instance a = fixture::small(11, 7, 3, existing);
    const Instance b = fixture::small(11, 7, 3, existing);
    const Instance c = fixture::small(12, 7, 3, existing);
    CHECK(a == b);
    CHECK_FALSE(a == c);
    CHECK(a.has_empty_initial_network() == !existing);
  }
}

TEST_CASE("text format round trips") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Instance inst = fixture::small(seed, 4 + seed % 6, 1 + seed % 4, seed % 2 == 0);
    const std::string text = format_instance(inst);
    const Instance back = parse_instance(text);
    CHECK(back == inst);
    CHECK(format_instance(back) == text);
  }
}

TEST_CASE("file round trip") {
  const Instance inst = fixture::small(3, 6, 2, true);
  const auto path = std::filesystem::temp_directory_path() / "netdesign_roundtrip.txt";
  save_instance(inst, path);
  CHECK(load_instance(path) == inst);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_instance(path), IoError);
}

TEST_CASE("links are normalized and sorted with their data") {
  InstanceData d = InstanceData::sized(3, 1, {{2, 1}, {0, 2}});
  d.routing_cost(0, 1) = 5;  // 2 -> 1
  d.routing_cost(1, 1) = 6;  // 1 -> 2
  d.routing_cost(2, 1) = 7;  // 0 -> 2
  d.routing_cost(3, 1) = 8;  // 2 -> 0
  d.link_op_cost(0, 1) = 1;
  d.link_op_cost(1, 1) = 2;
  const Instance inst(std::move(d));
  CHECK(inst.link(0) == Link{0, 2});
  CHECK(inst.link(1) == Link{1, 2});
  CHECK(inst.link_op_cost(0, 1) == 2);
  CHECK(inst.link_op_cost(1, 1) == 1);
  CHECK(inst.routing_cost(*inst.find_arc(0, 2), 1) == 7);
  CHECK(inst.routing_cost(*inst.find_arc(2, 0), 1) == 8);
  CHECK(inst.routing_cost(*inst.find_arc(1, 2), 1) == 6);
  CHECK(inst.routing_cost(*inst.find_arc(2, 1), 1) == 5);
  CHECK_FALSE(inst.find_arc(0, 1).has_value());
}

TEST_CASE("invalid data is rejected") {
  auto base = [] { return InstanceData::sized(3, 1, {{0, 1}, {1, 2}}); };
  CHECK_NOTHROW(Instance(base()));
  {
    InstanceData d = base();
    d.demand(0, 1) = -1;
    CHECK_THROWS_AS(Instance(std::move(d)), ValidationError);
  }
  {
    InstanceData d = base();
    d.routing_cost(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(Instance(std::move(d)), ValidationError);
  }
  {
    InstanceData d = base();
    d.links.push_back({1, 0});
    CHECK_THROWS_AS(Instance(std::move(d)), ValidationError);
  }
  {
    InstanceData d = base();
    d.links[0] = {2, 2};
    CHECK_THROWS_AS(Instance(std::move(d)), ValidationError);
  }
  {
    InstanceData d = base();
    d.facility_budget.pop_back();
    CHECK_THROWS_AS(Instance(std::move(d)), ValidationError);
  }
}

TEST_CASE("malformed text is rejected with a parse error") {
  const std::string good = format_instance(fixture::small(4, 4, 1, true));
  CHECK_NOTHROW(parse_instance(good));
  CHECK_THROWS_AS(parse_instance(""), ParseError);
  CHECK_THROWS_AS(parse_instance("garbage 1 2 3\n"), ParseError);
  std::string truncated = good.substr(0, good.size() / 2);
  truncated = truncated.substr(0, truncated.rfind('\n') + 1) + "DEMAND x\n";
  CHECK_THROWS(parse_instance(truncated));
}

TEST_CASE("completed solutions of enumerated plans are feasible and priced like the oracle") {
  int plans = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Instance inst = fixture::small(seed, 4, 1 + seed % 2, seed % 2 == 0);
    if (oracle::closed_items(inst) > 8) continue;
    for (const NetworkState& s : oracle::enumerate_states(inst)) {
      const auto cost = oracle::plan_cost(inst, s);
      const auto sol = complete_solution(inst, s);
      REQUIRE(cost.has_value() == sol.has_value());
      if (!sol) continue;
      ++plans;
      const auto v = check_feasibility(inst, *sol);
      CHECK(v.empty());
      CHECK(evaluate_objective(inst, *sol) == doctest::Approx(*cost).epsilon(1e-9));
      CHECK(sol->objective == doctest::Approx(*cost).epsilon(1e-9));
    }
  }
  CHECK(plans > 50);
}

TEST_CASE("feasibility check names each broken constraint") {
  const Instance inst = fixture::fig1();
  const auto base = complete_solution(inst, fixture::fig1_state(false, false));
  REQUIRE(base);
  REQUIRE(check_feasibility(inst, *base).empty());
  const int bc = fixture::kArcBC;

  auto expect = [&](FullSolution sol, const std::string& name) {
    INFO(name);
    CHECK(has(check_feasibility(inst, sol), name));
  };
  {
    FullSolution s = *base;
    s.state.facility(fixture::kD, 0) = 0;
    expect(s, "initial_facility");
  }
  {
    FullSolution s = *base;
    s.state.facility(fixture::kD, 1) = 0;
    expect(s, "facility_construction");
  }
  {
    FullSolution s = *base;
    s.state.facility(fixture::kC, 1) = 0.5;
    expect(s, "integrality");
  }
  {
    FullSolution s = *base;
    s.z(inst, bc, fixture::kA, 1) = 0.5;
    expect(s, "arc_capacity");
    expect(s, "flow_conservation");
  }
  {
    FullSolution s = *base;
    s.state.arc(bc, 1) = 1;
    expect(s, "link_symmetry");
  }
  {
    FullSolution s = *base;
    s.state.arc(bc, 1) = s.state.arc(bc + 1, 1) = 1;
    expect(s, "link_budget");
  }
  {
    FullSolution s = *base;
    s.state.facility(fixture::kC, 1) = 1;
    expect(s, "facility_budget");
  }
  {
    FullSolution s = *base;
    s.theta(fixture::kA, 1) += 1;
    expect(s, "theta");
  }
  {
    FullSolution s = *base;
    for (int a = 0; a < inst.num_arcs(); ++a) s.z(inst, a, fixture::kA, 1) = 0;
    expect(s, "demand_coverage");
  }
  {
    FullSolution s = *base;
    s.z(inst, 1, fixture::kA, 1) = 0.5;  // B -> A
    expect(s, "no_return");
  }
  {
    FullSolution s = *base;
    s.z(inst, 7, fixture::kA, 1) = -0.5;
    expect(s, "nonnegativity");
  }
}

TEST_CASE("objective counts facility, link and routing costs") {
  const Instance inst = fixture::fig1();
  const auto sol = complete_solution(inst, fixture::fig1_state(false, false));
  REQUIRE(sol);
  CHECK(sol->theta(fixture::kA, 1) == 10.0);
  CHECK(evaluate_objective(inst, *sol) == 10.0);  // zero operating costs
}

}  // namespace
}  // namespace netdesign
