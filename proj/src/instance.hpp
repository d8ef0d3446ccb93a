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

// Problem data for the budget-constrained dynamic uncapacitated facility
// location and network design problem.
//
// Every node is a client and a potential facility site. Undirected links
// {a,b} (a < b) may be constructed; each link materializes two directed arcs.
// Periods are numbered 1..T; period 0 is the pre-existing network and is data,
// never a decision.
//
// Arc numbering: link l owns arcs 2l (a->b) and 2l+1 (b->a).

#ifndef NETDESIGN_INSTANCE_HPP_
#define NETDESIGN_INSTANCE_HPP_

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace netdesign {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense table indexed by (entity, period) with periods 0..T.
class PeriodTable {
 public:
  PeriodTable() = default;
  PeriodTable(int entities, int periods)
      : entities_(entities),
        periods_(periods),
        data_(static_cast<std::size_t>(entities) * (periods + 1), 0.0) {}

  double operator()(int entity, int period) const {
    return data_[index(entity, period)];
  }
  double& operator()(int entity, int period) {
    return data_[index(entity, period)];
  }

  int entities() const { return entities_; }
  int periods() const { return periods_; }
  std::span<const double> values() const { return data_; }

  bool operator==(const PeriodTable&) const = default;

 private:
  std::size_t index(int entity, int period) const {
    return static_cast<std::size_t>(entity) * (periods_ + 1) + period;
  }

  int entities_ = 0;
  int periods_ = 0;
  std::vector<double> data_;
};

struct Link {
  int a = 0;
  int b = 0;
  bool operator==(const Link&) const = default;
};

struct Arc {
  int from = 0;
  int to = 0;
  int link = 0;
};

// Mutable raw data; Instance validates and normalizes it.
struct InstanceData {
  int num_nodes = 0;
  int num_periods = 0;
  std::vector<Link> links;
  PeriodTable demand;               // node x period
  PeriodTable facility_open_cost;   // node x period
  PeriodTable facility_op_cost;     // node x period
  PeriodTable link_construct_cost;  // link x period
  PeriodTable link_op_cost;         // link x period
  PeriodTable routing_cost;         // arc x period (arc 2l / 2l+1)
  std::vector<double> facility_budget;  // index 0..T, entry 0 unused
  std::vector<double> link_budget;      // index 0..T, entry 0 unused
  std::vector<char> initial_facility;   // node
  std::vector<char> initial_link;       // link

  // Allocates every table for the given dimensions, zero-filled.
  static InstanceData sized(int num_nodes, int num_periods,
                            std::vector<Link> links);

  bool operator==(const InstanceData&) const = default;
};

class Instance {
 public:
  // Throws ValidationError naming the violated invariant. Links are sorted
  // into canonical order and per-link data is permuted along with them.
  explicit Instance(InstanceData data);

  int num_nodes() const { return data_.num_nodes; }
  int num_periods() const { return data_.num_periods; }
  int num_links() const { return static_cast<int>(data_.links.size()); }
  int num_arcs() const { return 2 * num_links(); }

  const Link& link(int l) const { return data_.links[l]; }
  const Arc& arc(int a) const { return arcs_[a]; }
  std::span<const int> out_arcs(int node) const { return out_arcs_[node]; }
  std::span<const int> in_arcs(int node) const { return in_arcs_[node]; }
  std::optional<int> find_arc(int from, int to) const;
  static int reverse_arc(int a) { return a ^ 1; }

  double demand(int k, int t) const { return data_.demand(k, t); }
  double facility_open_cost(int i, int t) const {
    return data_.facility_open_cost(i, t);
  }
  double facility_op_cost(int i, int t) const {
    return data_.facility_op_cost(i, t);
  }
  double link_construct_cost(int l, int t) const {
    return data_.link_construct_cost(l, t);
  }
  double link_op_cost(int l, int t) const { return data_.link_op_cost(l, t); }
  double routing_cost(int a, int t) const { return data_.routing_cost(a, t); }
  double facility_budget(int t) const { return data_.facility_budget[t]; }
  double link_budget(int t) const { return data_.link_budget[t]; }
  bool initial_facility(int i) const { return data_.initial_facility[i] != 0; }
  bool initial_link(int l) const { return data_.initial_link[l] != 0; }

  // True when period 0 has no open facility and no open link.
  bool has_empty_initial_network() const;

  const InstanceData& data() const { return data_; }
  bool operator==(const Instance& other) const { return data_ == other.data_; }

 private:
  InstanceData data_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> out_arcs_;
  std::vector<std::vector<int>> in_arcs_;
};

// Openness of facilities and directed arcs per period 0..T. Values are in
// [0,1]; they are binary for integer states.
//
// When `period1_directional` is set, period-1 arc values are independent per
// direction (the first-period feasibility reformulation); otherwise both
// directions of a link carry the same value.
struct NetworkState {
  PeriodTable facility;  // W, node x period
  PeriodTable arc;       // X, arc x period
  bool period1_directional = false;

  // Period-0 values copied from the instance; later periods all closed.
  static NetworkState initial(const Instance& inst);

  // Link openness: sum of both directions in a directional period 1,
  // otherwise the value of the forward arc.
  double link_open(int l, int t) const;
  // Construction indicators U and V.
  double facility_construction(int i, int t) const {
    return facility(i, t) - facility(i, t - 1);
  }
  double link_construction(int l, int t) const {
    return link_open(l, t) - link_open(l, t - 1);
  }

  bool is_integral(double tol = 1e-6) const;
};

// A complete solution of the monolithic model.
struct FullSolution {
  NetworkState state;
  // Z[a][k][t]: fraction of client k's demand on arc a in period t.
  std::vector<double> flow;
  PeriodTable theta;  // unit-demand routing cost, node x period
  double objective = 0.0;

  static FullSolution zero(const Instance& inst);
  std::size_t flow_index(const Instance& inst, int a, int k, int t) const {
    return (static_cast<std::size_t>(a) * inst.num_nodes() + k) *
               (inst.num_periods() + 1) +
           t;
  }
  double z(const Instance& inst, int a, int k, int t) const {
    return flow[flow_index(inst, a, k, t)];
  }
  double& z(const Instance& inst, int a, int k, int t) {
    return flow[flow_index(inst, a, k, t)];
  }
};

// Text file I/O. See README for the format.
Instance parse_instance(std::string_view text);
std::string format_instance(const Instance& inst);
Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& inst, const std::filesystem::path& path);

struct GeneratorParams {
  int num_nodes = 6;
  double link_density = 0.5;
  int num_periods = 2;
  double demand_min = 10.0, demand_max = 100.0;
  double facility_open_min = 200.0, facility_open_max = 600.0;
  double facility_op_min = 20.0, facility_op_max = 60.0;
  // Per unit of link length.
  double link_construct_min = 2.0, link_construct_max = 6.0;
  double link_op_min = 0.1, link_op_max = 0.3;
  double routing_min = 0.05, routing_max = 0.15;
  // Share of the total facility (link) construction cost made available over
  // the horizon, spread evenly across periods.
  double facility_budget_fraction = 0.3;
  double link_budget_fraction = 0.3;
  bool existing_network = true;
  int max_connect_retries = 1000;
};

// Deterministic for a given seed. Throws std::invalid_argument when the
// parameters cannot produce a connected potential graph.
Instance generate_instance(const GeneratorParams& params, std::uint64_t seed);

// Objective of the monolithic model: facility operating cost, demand-weighted
// routing cost and link operating cost, summed over periods 1..T.
double evaluate_objective(const Instance& inst, const FullSolution& sol);

struct Violation {
  std::string constraint;    // e.g. "arc_capacity"
  std::vector<int> indices;  // constraint-specific, documented per check
  double amount = 0.0;
  std::string to_string() const;
};

struct FeasibilityCheckOptions {
  double tolerance = 1e-6;
  bool require_integral = true;
};

// Empty iff the solution satisfies every constraint of the monolithic model.
// States with `period1_directional` set are checked against the
// reformulated first-period rules instead of the symmetry constraint.
std::vector<Violation> check_feasibility(
    const Instance& inst, const FullSolution& sol,
    const FeasibilityCheckOptions& options = {});

}  // namespace netdesign

#endif  // NETDESIGN_INSTANCE_HPP_
