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


// Shared test inputs.

#ifndef NETDESIGN_TESTS_FIXTURES_HPP_
#define NETDESIGN_TESTS_FIXTURES_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include "instance.hpp"

namespace netdesign::fixture {

// Five nodes A..E, one period, client A. A-B, B-D and C-E are open, B-C is
// closed; facilities at D and E. Link order after sorting: AB, BC, BD, CE.
inline constexpr int kA = 0, kB = 1, kC = 2, kD = 3, kE = 4;
inline constexpr int kArcBC = 2;  // B->C

inline Instance fig1() {
  InstanceData d = InstanceData::sized(5, 1, {{kA, kB}, {kB, kC}, {kB, kD}, {kC, kE}});
  const double rho[] = {1, 1, 9, 1};
  for (int l = 0; l < 4; ++l) {
    d.routing_cost(2 * l, 1) = d.routing_cost(2 * l + 1, 1) = rho[l];
    d.link_construct_cost(l, 1) = 1;
  }
  for (int i = 0; i < 5; ++i) {
    d.demand(i, 1) = i == kA ? 1 : 0;
    d.facility_open_cost(i, 1) = 1;
  }
  d.initial_facility[kD] = d.initial_facility[kE] = 1;
  d.initial_link[0] = d.initial_link[2] = d.initial_link[3] = 1;
  return Instance(std::move(d));
}

// Period 1 equal to period 0, then edited.
inline NetworkState fig1_state(bool c_open, bool bc_open, bool a_open = false) {
  const Instance inst = fig1();
  NetworkState s = NetworkState::initial(inst);
  for (int i = 0; i < 5; ++i) s.facility(i, 1) = s.facility(i, 0);
  for (int a = 0; a < 8; ++a) s.arc(a, 1) = s.arc(a, 0);
  if (c_open) s.facility(kC, 1) = 1;
  if (a_open) s.facility(kA, 1) = 1;
  if (bc_open) s.arc(kArcBC, 1) = s.arc(kArcBC + 1, 1) = 1;
  return s;
}

inline Instance small(std::uint64_t seed, int n, int periods, bool existing,
                      double density = 0.5) {
  GeneratorParams p;
  p.num_nodes = n;
  p.num_periods = periods;
  p.link_density = density;
  p.existing_network = existing;
  return generate_instance(p, seed);
}

// Random integral openness in period t, links symmetric.
inline void randomize_period(const Instance& inst, NetworkState& s, int t, std::mt19937_64& rng,
                             double p_facility, double p_link) {
  std::bernoulli_distribution fac(p_facility), link(p_link);
  for (int i = 0; i < inst.num_nodes(); ++i) s.facility(i, t) = fac(rng) ? 1.0 : 0.0;
  for (int l = 0; l < inst.num_links(); ++l) {
    s.arc(2 * l, t) = s.arc(2 * l + 1, t) = link(rng) ? 1.0 : 0.0;
  }
}

// Random fractional openness in period t, links symmetric.
inline void randomize_period_fractional(const Instance& inst, NetworkState& s, int t,
                                        std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto draw = [&] {
    const double r = u(rng);
    return r < 0.3 ? 0.0 : r > 0.8 ? 1.0 : u(rng);
  };
  for (int i = 0; i < inst.num_nodes(); ++i) s.facility(i, t) = draw();
  for (int l = 0; l < inst.num_links(); ++l) s.arc(2 * l, t) = s.arc(2 * l + 1, t) = draw();
}

}  // namespace netdesign::fixture

#endif  // NETDESIGN_TESTS_FIXTURES_HPP_
