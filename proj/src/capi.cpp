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

#include "netdesign/netdesign.h"

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <new>
#include <sstream>
#include <stdexcept>
#include <string>

#include "instance.hpp"
#include "lp.hpp"
#include "solver.hpp"

struct nd_instance {
  netdesign::Instance inst;
};

struct nd_result {
  netdesign::SolveReport report;
  std::string termination;
  std::string trace_csv;
  std::string solution_text;
};

namespace {

thread_local std::string last_error;

nd_error fail(nd_error code, const std::string& what) {
  last_error = what;
  return code;
}

template <class F>
nd_error guarded(F&& f) {
  try {
    f();
    return ND_OK;
  } catch (const netdesign::IoError& e) {
    return fail(ND_ERR_IO, e.what());
  } catch (const netdesign::ParseError& e) {
    return fail(ND_ERR_PARSE, e.what());
  } catch (const netdesign::ValidationError& e) {
    return fail(ND_ERR_VALIDATION, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(ND_ERR_INVALID_ARGUMENT, e.what());
  } catch (const netdesign::NumericError& e) {
    return fail(ND_ERR_NUMERIC, e.what());
  } catch (const std::bad_alloc&) {
    return fail(ND_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ND_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(ND_ERR_INTERNAL, "unknown error");
  }
}

nd_error null_argument(const char* name) {
  return fail(ND_ERR_INVALID_ARGUMENT, std::string(name) + " is null");
}

std::optional<bool> toggle(int v) {
  if (v < 0) return std::nullopt;
  return v != 0;
}

netdesign::CutKind to_cut(nd_cut_kind k) {
  switch (k) {
    case ND_CUT_NONA: return netdesign::CutKind::kNonA;
    case ND_CUT_ANONE: return netdesign::CutKind::kAnOne;
    case ND_CUT_ANTWO: return netdesign::CutKind::kAnTwo;
    default: break;
  }
  throw std::invalid_argument("unknown cut kind");
}

nd_cut_kind from_cut(netdesign::CutKind k) {
  switch (k) {
    case netdesign::CutKind::kNonA: return ND_CUT_NONA;
    case netdesign::CutKind::kAnOne: return ND_CUT_ANONE;
    case netdesign::CutKind::kAnTwo: return ND_CUT_ANTWO;
  }
  return ND_CUT_DEFAULT;
}

netdesign::Disaggregation to_disagg(nd_disaggregation d) {
  switch (d) {
    case ND_DISAGG_NODE_TIME: return netdesign::Disaggregation::kNodeTime;
    case ND_DISAGG_NODE_ONLY: return netdesign::Disaggregation::kNodeOnly;
    case ND_DISAGG_TIME_ONLY: return netdesign::Disaggregation::kTimeOnly;
    case ND_DISAGG_SINGLE: return netdesign::Disaggregation::kSingle;
  }
  throw std::invalid_argument("unknown disaggregation");
}

nd_disaggregation from_disagg(netdesign::Disaggregation d) {
  switch (d) {
    case netdesign::Disaggregation::kNodeTime: return ND_DISAGG_NODE_TIME;
    case netdesign::Disaggregation::kNodeOnly: return ND_DISAGG_NODE_ONLY;
    case netdesign::Disaggregation::kTimeOnly: return ND_DISAGG_TIME_ONLY;
    case netdesign::Disaggregation::kSingle: return ND_DISAGG_SINGLE;
  }
  return ND_DISAGG_NODE_TIME;
}

netdesign::SolveMode to_mode(nd_mode m) {
  switch (m) {
    case ND_MODE_MONOLITHIC: return netdesign::SolveMode::kMonolithic;
    case ND_MODE_BENDERS_BC: return netdesign::SolveMode::kBendersBc;
    case ND_MODE_BENDERS_ITERATIVE: return netdesign::SolveMode::kBendersIterative;
  }
  throw std::invalid_argument("unknown mode");
}

std::string solution_text(const netdesign::Instance& inst, const netdesign::SolveReport& r) {
  if (!r.has_solution) return {};
  const netdesign::NetworkState& s = r.solution.state;
  std::ostringstream out;
  for (int t = 1; t <= inst.num_periods(); ++t) {
    for (int i = 0; i < inst.num_nodes(); ++i) {
      if (s.facility_construction(i, t) > 0.5) out << "period " << t << " facility " << i << "\n";
    }
    for (int l = 0; l < inst.num_links(); ++l) {
      if (s.link_construction(l, t) > 0.5) {
        out << "period " << t << " link " << inst.link(l).a << " " << inst.link(l).b << "\n";
      }
    }
  }
  return out.str();
}

}  // namespace

extern "C" {

const char* nd_version(void) { return "1.0.0"; }

const char* nd_last_error(void) { return last_error.c_str(); }

const char* nd_error_name(nd_error code) {
  switch (code) {
    case ND_OK: return "ok";
    case ND_ERR_IO: return "io";
    case ND_ERR_PARSE: return "parse";
    case ND_ERR_VALIDATION: return "validation";
    case ND_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case ND_ERR_NUMERIC: return "numeric";
    case ND_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

void nd_generator_params_default(nd_generator_params* p) {
  if (p == nullptr) return;
  const netdesign::GeneratorParams g;
  p->num_nodes = g.num_nodes;
  p->num_periods = g.num_periods;
  p->link_density = g.link_density;
  p->existing_network = g.existing_network ? 1 : 0;
  p->demand_min = g.demand_min;
  p->demand_max = g.demand_max;
  p->facility_open_min = g.facility_open_min;
  p->facility_open_max = g.facility_open_max;
  p->facility_op_min = g.facility_op_min;
  p->facility_op_max = g.facility_op_max;
  p->link_construct_min = g.link_construct_min;
  p->link_construct_max = g.link_construct_max;
  p->link_op_min = g.link_op_min;
  p->link_op_max = g.link_op_max;
  p->routing_min = g.routing_min;
  p->routing_max = g.routing_max;
  p->facility_budget_fraction = g.facility_budget_fraction;
  p->link_budget_fraction = g.link_budget_fraction;
}

nd_error nd_instance_generate(const nd_generator_params* p, uint64_t seed, nd_instance** out) {
  if (p == nullptr) return null_argument("params");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    netdesign::GeneratorParams g;
    g.num_nodes = p->num_nodes;
    g.num_periods = p->num_periods;
    g.link_density = p->link_density;
    g.existing_network = p->existing_network != 0;
    g.demand_min = p->demand_min;
    g.demand_max = p->demand_max;
    g.facility_open_min = p->facility_open_min;
    g.facility_open_max = p->facility_open_max;
    g.facility_op_min = p->facility_op_min;
    g.facility_op_max = p->facility_op_max;
    g.link_construct_min = p->link_construct_min;
    g.link_construct_max = p->link_construct_max;
    g.link_op_min = p->link_op_min;
    g.link_op_max = p->link_op_max;
    g.routing_min = p->routing_min;
    g.routing_max = p->routing_max;
    g.facility_budget_fraction = p->facility_budget_fraction;
    g.link_budget_fraction = p->link_budget_fraction;
    *out = new nd_instance{netdesign::generate_instance(g, seed)};
  });
}

nd_error nd_instance_load(const char* path, nd_instance** out) {
  if (path == nullptr) return null_argument("path");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new nd_instance{netdesign::load_instance(path)}; });
}

nd_error nd_instance_parse(const char* text, nd_instance** out) {
  if (text == nullptr) return null_argument("text");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new nd_instance{netdesign::parse_instance(text)}; });
}

nd_error nd_instance_save(const nd_instance* inst, const char* path) {
  if (inst == nullptr) return null_argument("instance");
  if (path == nullptr) return null_argument("path");
  return guarded([&] { netdesign::save_instance(inst->inst, path); });
}

nd_error nd_instance_format(const nd_instance* inst, char** out) {
  if (inst == nullptr) return null_argument("instance");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    const std::string text = netdesign::format_instance(inst->inst);
    char* buf = static_cast<char*>(std::malloc(text.size() + 1));
    if (buf == nullptr) throw std::bad_alloc();
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
  });
}

void nd_string_free(char* s) { std::free(s); }

void nd_instance_free(nd_instance* inst) { delete inst; }

int nd_instance_num_nodes(const nd_instance* inst) {
  return inst ? inst->inst.num_nodes() : 0;
}
int nd_instance_num_periods(const nd_instance* inst) {
  return inst ? inst->inst.num_periods() : 0;
}
int nd_instance_num_links(const nd_instance* inst) {
  return inst ? inst->inst.num_links() : 0;
}
int nd_instance_has_empty_initial_network(const nd_instance* inst) {
  return inst && inst->inst.has_empty_initial_network() ? 1 : 0;
}

void nd_solve_options_default(nd_solve_options* o) {
  if (o == nullptr) return;
  const netdesign::SolveOptions d;
  o->mode = ND_MODE_BENDERS_BC;
  o->disaggregation = ND_DISAGG_NODE_TIME;
  o->reformulation = -1;
  o->cover_cuts = -1;
  o->warmstart_cuts = ND_CUT_DEFAULT;
  o->callback_cuts = ND_CUT_DEFAULT;
  o->warm_start = 1;
  o->time_limit = 0.0;
  o->rel_gap = d.rel_gap;
  o->node_limit = 0;
  o->branching = ND_BRANCH_PSEUDOCOST;
  o->fractional_cuts = 0;
  o->node_log = 0;
  o->export_model = 0;
}

nd_error nd_solve(const nd_instance* inst, const nd_solve_options* o, nd_result** out) {
  if (inst == nullptr) return null_argument("instance");
  if (o == nullptr) return null_argument("options");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    netdesign::SolveOptions opt;
    opt.mode = to_mode(o->mode);
    opt.disaggregation = to_disagg(o->disaggregation);
    opt.reformulation = toggle(o->reformulation);
    opt.cover_cuts = toggle(o->cover_cuts);
    if (o->warmstart_cuts != ND_CUT_DEFAULT) opt.warmstart_cuts = to_cut(o->warmstart_cuts);
    if (o->callback_cuts != ND_CUT_DEFAULT) opt.callback_cuts = to_cut(o->callback_cuts);
    opt.warm_start = o->warm_start != 0;
    opt.time_limit = o->time_limit;
    if (!(o->rel_gap >= 0.0)) throw std::invalid_argument("rel_gap must be nonnegative");
    opt.rel_gap = o->rel_gap;
    if (o->node_limit < 0) throw std::invalid_argument("node_limit must be nonnegative");
    opt.node_limit = o->node_limit;
    switch (o->branching) {
      case ND_BRANCH_PSEUDOCOST: opt.branching = netdesign::Branching::kPseudocost; break;
      case ND_BRANCH_MOST_FRACTIONAL:
        opt.branching = netdesign::Branching::kMostFractional;
        break;
      default: throw std::invalid_argument("unknown branching rule");
    }
    opt.fractional_cuts = o->fractional_cuts != 0;
    opt.node_log = o->node_log ? &std::cerr : nullptr;
    opt.export_model = o->export_model != 0;

    auto* r = new nd_result{};
    try {
      r->report = netdesign::solve(inst->inst, opt);
      r->termination = r->report.warm_start.termination;
      r->trace_csv = r->report.warm_start.csv();
      r->solution_text = solution_text(inst->inst, r->report);
    } catch (...) {
      delete r;
      throw;
    }
    *out = r;
  });
}

void nd_result_free(nd_result* r) { delete r; }

const char* nd_status_name(nd_status s) {
  switch (s) {
    case ND_STATUS_OPTIMAL: return "optimal";
    case ND_STATUS_FEASIBLE: return "feasible";
    case ND_STATUS_INFEASIBLE: return "infeasible";
    case ND_STATUS_TIME_LIMIT: return "time_limit";
  }
  return "unknown";
}

const char* nd_mode_name(nd_mode m) {
  switch (m) {
    case ND_MODE_MONOLITHIC:
    case ND_MODE_BENDERS_BC:
    case ND_MODE_BENDERS_ITERATIVE: return netdesign::to_string(to_mode(m));
  }
  return "unknown";
}

const char* nd_disaggregation_name(nd_disaggregation d) {
  switch (d) {
    case ND_DISAGG_NODE_TIME:
    case ND_DISAGG_NODE_ONLY:
    case ND_DISAGG_TIME_ONLY:
    case ND_DISAGG_SINGLE: return netdesign::to_string(to_disagg(d));
  }
  return "unknown";
}

const char* nd_cut_kind_name(nd_cut_kind k) {
  switch (k) {
    case ND_CUT_NONA:
    case ND_CUT_ANONE:
    case ND_CUT_ANTWO: return netdesign::to_string(to_cut(k));
    case ND_CUT_DEFAULT: return "default";
  }
  return "unknown";
}

nd_status nd_result_status(const nd_result* r) {
  if (r == nullptr) return ND_STATUS_INFEASIBLE;
  switch (r->report.status) {
    case netdesign::MipStatus::kOptimal: return ND_STATUS_OPTIMAL;
    case netdesign::MipStatus::kFeasible: return ND_STATUS_FEASIBLE;
    case netdesign::MipStatus::kInfeasible: return ND_STATUS_INFEASIBLE;
    case netdesign::MipStatus::kTimeLimit: return ND_STATUS_TIME_LIMIT;
  }
  return ND_STATUS_INFEASIBLE;
}

int nd_result_has_solution(const nd_result* r) { return r && r->report.has_solution ? 1 : 0; }
double nd_result_objective(const nd_result* r) { return r ? r->report.objective : 0.0; }
double nd_result_bound(const nd_result* r) { return r ? r->report.bound : 0.0; }
double nd_result_gap(const nd_result* r) { return r ? r->report.gap : 0.0; }
double nd_result_wall_time(const nd_result* r) { return r ? r->report.wall_time : 0.0; }
long nd_result_nodes(const nd_result* r) { return r ? r->report.nodes : 0; }
long nd_result_lp_iterations(const nd_result* r) { return r ? r->report.lp_iterations : 0; }
long nd_result_optimality_cuts(const nd_result* r) {
  return r ? r->report.optimality_cuts : 0;
}
long nd_result_feasibility_cuts(const nd_result* r) {
  return r ? r->report.feasibility_cuts : 0;
}
long nd_result_cover_cuts(const nd_result* r) { return r ? r->report.cover_cuts : 0; }
long nd_result_subproblems(const nd_result* r) { return r ? r->report.subproblems : 0; }
double nd_result_subproblem_time(const nd_result* r) {
  return r ? r->report.subproblem_time : 0.0;
}
long nd_result_recovery_fallbacks(const nd_result* r) {
  return r ? r->report.recovery_fallbacks : 0;
}
int nd_result_outer_iterations(const nd_result* r) {
  return r ? r->report.outer_iterations : 0;
}
double nd_result_root_lp_bound(const nd_result* r) { return r ? r->report.root_lp_bound : 0.0; }

nd_disaggregation nd_result_disaggregation(const nd_result* r) {
  return r ? from_disagg(r->report.config.disaggregation) : ND_DISAGG_NODE_TIME;
}
int nd_result_reformulation(const nd_result* r) {
  return r && r->report.config.reformulation ? 1 : 0;
}
int nd_result_cover_enabled(const nd_result* r) {
  return r && r->report.config.cover_cuts ? 1 : 0;
}
nd_cut_kind nd_result_warmstart_cuts(const nd_result* r) {
  return r ? from_cut(r->report.config.warmstart_cuts) : ND_CUT_DEFAULT;
}
nd_cut_kind nd_result_callback_cuts(const nd_result* r) {
  return r ? from_cut(r->report.config.callback_cuts) : ND_CUT_DEFAULT;
}

int nd_result_warm_start_iterations(const nd_result* r) {
  return r ? static_cast<int>(r->report.warm_start.iterations.size()) : 0;
}
double nd_result_warm_start_bound(const nd_result* r) {
  return r ? r->report.warm_start.final_bound : 0.0;
}
const char* nd_result_warm_start_termination(const nd_result* r) {
  return r ? r->termination.c_str() : "";
}
const char* nd_result_warm_start_csv(const nd_result* r) {
  return r ? r->trace_csv.c_str() : "";
}
const char* nd_result_cut_dump(const nd_result* r) { return r ? r->report.cut_dump.c_str() : ""; }
const char* nd_result_model_lp(const nd_result* r) { return r ? r->report.model_lp.c_str() : ""; }

int nd_result_facility_open(const nd_result* r, int node, int t) {
  if (r == nullptr || !r->report.has_solution) return 0;
  const netdesign::NetworkState& s = r->report.solution.state;
  if (node < 0 || node >= s.facility.entities() || t < 0 || t > s.facility.periods()) return 0;
  return s.facility(node, t) > 0.5 ? 1 : 0;
}

int nd_result_link_open(const nd_result* r, int link, int t) {
  if (r == nullptr || !r->report.has_solution) return 0;
  const netdesign::NetworkState& s = r->report.solution.state;
  if (link < 0 || 2 * link >= s.arc.entities() || t < 0 || t > s.arc.periods()) return 0;
  return s.link_open(link, t) > 0.5 ? 1 : 0;
}

const char* nd_result_solution_text(const nd_result* r) {
  return r ? r->solution_text.c_str() : "";
}

int nd_result_check(const nd_result* r, const nd_instance* inst) {
  if (r == nullptr || inst == nullptr || !r->report.has_solution) return -1;
  try {
    return static_cast<int>(netdesign::check_feasibility(inst->inst, r->report.solution).size());
  } catch (const std::exception& e) {
    fail(ND_ERR_INTERNAL, e.what());
    return -1;
  }
}

}  // extern "C"
