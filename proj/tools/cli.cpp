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

#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "netdesign/netdesign.h"

namespace ndcli {
namespace {

const std::map<std::string, nd_mode> kModes = {
    {"monolithic", ND_MODE_MONOLITHIC},
    {"benders-bc", ND_MODE_BENDERS_BC},
    {"benders-iterative", ND_MODE_BENDERS_ITERATIVE}};
const std::map<std::string, nd_disaggregation> kDisaggs = {
    {"nodetime", ND_DISAGG_NODE_TIME},
    {"nodeonly", ND_DISAGG_NODE_ONLY},
    {"timeonly", ND_DISAGG_TIME_ONLY},
    {"single", ND_DISAGG_SINGLE}};
const std::map<std::string, nd_cut_kind> kWsCuts = {
    {"nona", ND_CUT_NONA}, {"anone", ND_CUT_ANONE}, {"antwo", ND_CUT_ANTWO}};
const std::map<std::string, nd_cut_kind> kCbCuts = {
    {"cnona", ND_CUT_NONA}, {"canone", ND_CUT_ANONE}, {"cantwo", ND_CUT_ANTWO}};
const std::map<std::string, int> kToggles = {{"on", 1}, {"off", 0}};
const std::map<std::string, nd_branching> kBranching = {
    {"pseudocost", ND_BRANCH_PSEUDOCOST}, {"most-fractional", ND_BRANCH_MOST_FRACTIONAL}};

template <class T>
std::vector<std::string> keys(const std::map<std::string, T>& m) {
  std::vector<std::string> out;
  for (const auto& [k, v] : m) out.push_back(k);
  return out;
}

std::string fixed(double v, int digits) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string general(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("NETDESIGN_SEED"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != nullptr && *end == '\0') return v;
  }
  return 1;
}

int exit_for_error(nd_error e) { return e == ND_ERR_INVALID_ARGUMENT ? kExitUsage : kExitError; }

struct Deleter {
  void operator()(nd_instance* p) const { nd_instance_free(p); }
  void operator()(nd_result* p) const { nd_result_free(p); }
};
using InstancePtr = std::unique_ptr<nd_instance, Deleter>;
using ResultPtr = std::unique_ptr<nd_result, Deleter>;

bool write_file(const std::string& path, const std::string& text, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) {
    err << "error: cannot write " << path << "\n";
    return false;
  }
  return true;
}

int exit_for_status(nd_status s) {
  switch (s) {
    case ND_STATUS_OPTIMAL:
    case ND_STATUS_FEASIBLE: return kExitOk;
    case ND_STATUS_INFEASIBLE: return kExitInfeasible;
    case ND_STATUS_TIME_LIMIT: return kExitLimit;
  }
  return kExitError;
}

struct GeneratorFlags {
  int nodes = 6;
  int periods = 2;
  double density = -1.0;
  bool new_network = false;

  void add(CLI::App* cmd) {
    cmd->add_option("--nodes,-n", nodes, "Number of nodes")->check(CLI::Range(2, 100000));
    cmd->add_option("--periods,-t", periods, "Number of periods")->check(CLI::Range(1, 100000));
    cmd->add_option("--density", density, "Share of node pairs with a potential link")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_flag("--new-network", new_network, "Start from an empty network");
  }
  nd_generator_params params() const {
    nd_generator_params p;
    nd_generator_params_default(&p);
    p.num_nodes = nodes;
    p.num_periods = periods;
    if (density > 0.0) p.link_density = density;
    p.existing_network = new_network ? 0 : 1;
    return p;
  }
};

struct ConfigFlags {
  std::string mode = "benders-bc";
  std::string disagg = "nodetime";
  std::string reform;
  std::string cover;
  std::string ws_cuts;
  std::string cb_cuts;
  std::string branching = "pseudocost";
  double time_limit = 0.0;
  double gap = 1e-6;
  long node_limit = 0;
  bool no_warm_start = false;
  bool fractional_cuts = false;

  nd_solve_options options() const {
    nd_solve_options o;
    nd_solve_options_default(&o);
    o.mode = kModes.at(mode);
    o.disaggregation = kDisaggs.at(disagg);
    o.reformulation = reform.empty() ? -1 : kToggles.at(reform);
    o.cover_cuts = cover.empty() ? -1 : kToggles.at(cover);
    o.warmstart_cuts = ws_cuts.empty() ? ND_CUT_DEFAULT : kWsCuts.at(ws_cuts);
    o.callback_cuts = cb_cuts.empty() ? ND_CUT_DEFAULT : kCbCuts.at(cb_cuts);
    o.branching = kBranching.at(branching);
    o.time_limit = time_limit;
    o.rel_gap = gap;
    o.node_limit = node_limit;
    o.warm_start = no_warm_start ? 0 : 1;
    o.fractional_cuts = fractional_cuts ? 1 : 0;
    return o;
  }
};

void add_shared_solve_flags(CLI::App* cmd, ConfigFlags& c) {
  cmd->add_option("--branching", c.branching, "Branching rule")
      ->check(CLI::IsMember(keys(kBranching)));
  cmd->add_option("--time-limit", c.time_limit, "Seconds per solve (default 50 N T)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--gap", c.gap, "Relative optimality gap")->check(CLI::NonNegativeNumber);
  cmd->add_option("--node-limit", c.node_limit, "Tree node limit (0: none)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--no-warm-start", c.no_warm_start, "Skip the root cut loop");
  cmd->add_flag("--fractional-cuts", c.fractional_cuts,
                "Separate Benders cuts at fractional tree nodes too");
}

std::string config_label(const nd_result* r) {
  std::ostringstream s;
  s << "disagg=" << nd_disaggregation_name(nd_result_disaggregation(r))
    << " reform=" << (nd_result_reformulation(r) ? "on" : "off")
    << " cover=" << (nd_result_cover_enabled(r) ? "on" : "off")
    << " ws-cuts=" << nd_cut_kind_name(nd_result_warmstart_cuts(r))
    << " cb-cuts=c" << nd_cut_kind_name(nd_result_callback_cuts(r));
  return s.str();
}

// ---- solve ----

struct SolveFlags {
  std::string path;
  ConfigFlags config;
  std::string out;
  std::string trace;
  std::string cuts;
  std::string export_lp;
  bool node_log = false;
  bool show_solution = false;
  bool omit_timing = false;
};

int cmd_solve(const SolveFlags& f, std::ostream& out, std::ostream& err) {
  nd_instance* raw = nullptr;
  if (nd_error e = nd_instance_load(f.path.c_str(), &raw); e != ND_OK) {
    err << "error: " << nd_last_error() << "\n";
    return kExitError;
  }
  InstancePtr inst(raw);
  nd_solve_options o = f.config.options();
  o.node_log = f.node_log ? 1 : 0;
  o.export_model = f.export_lp.empty() ? 0 : 1;
  nd_result* rraw = nullptr;
  if (nd_error e = nd_solve(inst.get(), &o, &rraw); e != ND_OK) {
    err << "error: " << nd_error_name(e) << ": " << nd_last_error() << "\n";
    return exit_for_error(e);
  }
  ResultPtr r(rraw);
  const nd_result* res = r.get();

  std::ostringstream s;
  s << "instance: " << f.path << "\n";
  s << "mode: " << nd_mode_name(o.mode) << "\n";
  s << "config: " << config_label(res) << "\n";
  s << "status: " << nd_status_name(nd_result_status(res)) << "\n";
  s << "objective: " << (nd_result_has_solution(res) ? general(nd_result_objective(res)) : "none")
    << "\n";
  s << "bound: " << general(nd_result_bound(res)) << "\n";
  s << "gap: " << general(nd_result_gap(res)) << "\n";
  if (!f.omit_timing) s << "time: " << fixed(nd_result_wall_time(res), 2) << "\n";
  s << "nodes: " << nd_result_nodes(res) << "\n";
  s << "optimality_cuts: " << nd_result_optimality_cuts(res) << "\n";
  s << "feasibility_cuts: " << nd_result_feasibility_cuts(res) << "\n";
  s << "cover_cuts: " << nd_result_cover_cuts(res) << "\n";
  s << "subproblems: " << nd_result_subproblems(res) << "\n";
  if (!f.omit_timing) {
    s << "subproblem_time: " << fixed(nd_result_subproblem_time(res), 2) << "\n";
  }
  s << "root_lp_bound: " << general(nd_result_root_lp_bound(res)) << "\n";
  if (o.mode != ND_MODE_MONOLITHIC && o.warm_start) {
    s << "warm_start: iterations=" << nd_result_warm_start_iterations(res)
      << " bound=" << general(nd_result_warm_start_bound(res))
      << " termination=" << nd_result_warm_start_termination(res) << "\n";
  }
  if (o.mode == ND_MODE_BENDERS_ITERATIVE) {
    s << "outer_iterations: " << nd_result_outer_iterations(res) << "\n";
  }
  if (f.show_solution && nd_result_has_solution(res)) s << nd_result_solution_text(res);

  if (f.out.empty()) {
    out << s.str();
  } else if (!write_file(f.out, s.str(), err)) {
    return kExitError;
  }
  if (!f.trace.empty() && !write_file(f.trace, nd_result_warm_start_csv(res), err)) {
    return kExitError;
  }
  if (!f.cuts.empty() && !write_file(f.cuts, nd_result_cut_dump(res), err)) return kExitError;
  if (!f.export_lp.empty() && !write_file(f.export_lp, nd_result_model_lp(res), err)) {
    return kExitError;
  }
  return exit_for_status(nd_result_status(res));
}

// ---- generate ----

struct GenerateFlags {
  GeneratorFlags gen;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_generate(const GenerateFlags& f, std::ostream& out, std::ostream& err) {
  const nd_generator_params p = f.gen.params();
  nd_instance* raw = nullptr;
  if (nd_error e = nd_instance_generate(&p, f.seed.value_or(default_seed()), &raw); e != ND_OK) {
    err << "error: " << nd_last_error() << "\n";
    return exit_for_error(e);
  }
  InstancePtr inst(raw);
  if (!f.out.empty()) {
    if (nd_instance_save(inst.get(), f.out.c_str()) != ND_OK) {
      err << "error: " << nd_last_error() << "\n";
      return kExitError;
    }
    return kExitOk;
  }
  char* text = nullptr;
  if (nd_instance_format(inst.get(), &text) != ND_OK) {
    err << "error: " << nd_last_error() << "\n";
    return kExitError;
  }
  out << text;
  nd_string_free(text);
  return kExitOk;
}

// ---- bench ----

struct BenchFlags {
  std::string dir;
  GeneratorFlags gen;
  int seeds = 3;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> modes{"benders-bc"};
  std::vector<std::string> disaggs{"nodetime"};
  std::vector<std::string> reforms{""};
  std::vector<std::string> covers{""};
  std::vector<std::string> ws_cuts{""};
  std::vector<std::string> cb_cuts{""};
  ConfigFlags shared;
  int jobs = 1;
  std::string out;
  bool omit_timing = false;
};

struct BenchInstance {
  std::string name;
  std::string path;  // empty when generated
  std::uint64_t seed = 0;
};

RunRow run_one(const BenchInstance& bi, const BenchFlags& f, const ConfigFlags& cfg) {
  RunRow row;
  row.instance = bi.name;
  row.mode = cfg.mode;
  row.disagg = cfg.disagg;
  row.reform = cfg.reform.empty() ? "default" : cfg.reform;
  row.cover = cfg.cover.empty() ? "default" : cfg.cover;
  row.ws_cuts = cfg.ws_cuts.empty() ? "default" : cfg.ws_cuts;
  row.cb_cuts = cfg.cb_cuts.empty() ? "default" : cfg.cb_cuts;
  nd_instance* raw = nullptr;
  nd_error e = ND_OK;
  if (bi.path.empty()) {
    const nd_generator_params p = f.gen.params();
    e = nd_instance_generate(&p, bi.seed, &raw);
  } else {
    e = nd_instance_load(bi.path.c_str(), &raw);
  }
  if (e != ND_OK) {
    row.status = "error";
    row.error = std::string(nd_error_name(e)) + ": " + nd_last_error();
    return row;
  }
  InstancePtr inst(raw);
  const nd_solve_options o = cfg.options();
  nd_result* rraw = nullptr;
  if (e = nd_solve(inst.get(), &o, &rraw); e != ND_OK) {
    row.status = "error";
    row.error = std::string(nd_error_name(e)) + ": " + nd_last_error();
    return row;
  }
  ResultPtr r(rraw);
  row.status = nd_status_name(nd_result_status(r.get()));
  row.objective = nd_result_objective(r.get());
  row.bound = nd_result_bound(r.get());
  row.gap = nd_result_gap(r.get());
  row.time = nd_result_wall_time(r.get());
  row.nodes = nd_result_nodes(r.get());
  row.optimality_cuts = nd_result_optimality_cuts(r.get());
  row.feasibility_cuts = nd_result_feasibility_cuts(r.get());
  row.subproblems = nd_result_subproblems(r.get());
  row.subproblem_time = nd_result_subproblem_time(r.get());
  return row;
}

int cmd_bench(const BenchFlags& f, std::ostream& out, std::ostream& err) {
  std::vector<BenchInstance> instances;
  if (!f.dir.empty()) {
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(f.dir, ec)) {
      if (entry.is_regular_file()) {
        instances.push_back({entry.path().filename().string(), entry.path().string(), 0});
      }
    }
    if (ec) {
      err << "error: cannot read " << f.dir << ": " << ec.message() << "\n";
      return kExitError;
    }
    std::sort(instances.begin(), instances.end(),
              [](const BenchInstance& a, const BenchInstance& b) { return a.name < b.name; });
    if (instances.empty()) {
      err << "error: no instances in " << f.dir << "\n";
      return kExitError;
    }
  } else {
    const std::uint64_t base = f.seed.value_or(default_seed());
    for (int i = 0; i < f.seeds; ++i) {
      const std::uint64_t s = base + static_cast<std::uint64_t>(i);
      std::ostringstream name;
      name << "n" << f.gen.nodes << "-t" << f.gen.periods << (f.gen.new_network ? "-new" : "-ext")
           << "-s" << s;
      instances.push_back({name.str(), "", s});
    }
  }

  std::vector<ConfigFlags> configs;
  for (const auto& mode : f.modes)
    for (const auto& disagg : f.disaggs)
      for (const auto& reform : f.reforms)
        for (const auto& cover : f.covers)
          for (const auto& ws : f.ws_cuts)
            for (const auto& cb : f.cb_cuts) {
              ConfigFlags c = f.shared;
              c.mode = mode;
              c.disagg = disagg;
              c.reform = reform;
              c.cover = cover;
              c.ws_cuts = ws;
              c.cb_cuts = cb;
              configs.push_back(c);
            }

  // Instances run in parallel; the configs of one instance run in sequence.
  std::vector<std::vector<RunRow>> results(instances.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < instances.size(); i = next++) {
      for (const ConfigFlags& c : configs) results[i].push_back(run_one(instances[i], f, c));
    }
  };
  const int jobs = std::max(1, std::min<int>(f.jobs, static_cast<int>(instances.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<RunRow> rows;
  bool failed = false;
  for (auto& per : results) {
    for (auto& r : per) {
      failed = failed || !r.error.empty();
      rows.push_back(std::move(r));
    }
  }
  const std::string csv = bench_csv(rows, f.omit_timing);
  if (f.out.empty()) {
    out << csv;
  } else if (!write_file(f.out, csv, err)) {
    return kExitError;
  }
  for (const RunRow& r : rows) {
    if (!r.error.empty()) err << "error: " << r.instance << ": " << r.error << "\n";
  }
  return failed ? kExitError : kExitOk;
}

}  // namespace

std::string RunRow::config_key() const {
  return mode + "," + disagg + "," + reform + "," + cover + "," + ws_cuts + "," + cb_cuts;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  q += '"';
  return q;
}

double geometric_mean(const std::vector<double>& times) {
  if (times.empty()) return 0.0;
  double log_sum = 0.0;
  for (double t : times) log_sum += std::log(std::max(t, 0.01));
  return std::exp(log_sum / static_cast<double>(times.size()));
}

std::vector<SummaryRow> summarize(const std::vector<RunRow>& rows) {
  std::vector<SummaryRow> out;
  std::map<std::string, std::size_t> index;
  std::map<std::string, std::vector<double>> times;
  for (const RunRow& r : rows) {
    const std::string key = r.config_key();
    if (!index.count(key)) {
      index[key] = out.size();
      SummaryRow s;
      s.config = r;
      out.push_back(s);
    }
    if (r.error.empty()) times[key].push_back(r.time);
  }
  for (SummaryRow& s : out) {
    const std::vector<double>& t = times[s.config.config_key()];
    s.runs = static_cast<int>(t.size());
    double sum = 0.0;
    for (double v : t) sum += v;
    s.mean_time = t.empty() ? 0.0 : sum / static_cast<double>(t.size());
    s.geomean_time = geometric_mean(t);
  }
  std::map<std::string, double> best;
  for (const RunRow& r : rows) {
    if (!r.error.empty()) continue;
    auto [it, fresh] = best.emplace(r.instance, r.time);
    if (!fresh) it->second = std::min(it->second, r.time);
  }
  for (const RunRow& r : rows) {
    if (r.error.empty() && r.time == best[r.instance]) ++out[index[r.config_key()]].wins;
  }
  return out;
}

std::string bench_csv(const std::vector<RunRow>& rows, bool omit_timing) {
  std::ostringstream s;
  s << "row,instance,mode,disagg,reform,cover,ws_cuts,cb_cuts,status,objective,bound,gap,time,"
       "nodes,M,P,subproblems,sp_time,runs,mean_time,geomean_time,wins,error\n";
  auto time = [&](double v) { return omit_timing ? std::string() : fixed(v, 2); };
  auto config = [&](const RunRow& r) {
    s << csv_field(r.mode) << "," << csv_field(r.disagg) << "," << csv_field(r.reform) << ","
      << csv_field(r.cover) << "," << csv_field(r.ws_cuts) << "," << csv_field(r.cb_cuts) << ",";
  };
  for (const RunRow& r : rows) {
    s << "run," << csv_field(r.instance) << ",";
    config(r);
    s << r.status << ",";
    if (r.error.empty()) {
      s << general(r.objective) << "," << general(r.bound) << "," << general(r.gap) << ","
        << time(r.time) << "," << r.nodes << "," << r.optimality_cuts << ","
        << r.feasibility_cuts << "," << r.subproblems << "," << time(r.subproblem_time);
    } else {
      s << ",,,,,,,,";
    }
    s << ",,,,," << csv_field(r.error) << "\n";
  }
  for (const SummaryRow& m : summarize(rows)) {
    s << "summary,,";
    config(m.config);
    s << ",,,,,,,,,," << m.runs << "," << time(m.mean_time) << "," << time(m.geomean_time)
      << "," << (omit_timing ? std::string() : std::to_string(m.wins)) << ",\n";
  }
  return s.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Budget-constrained facility location and network design solver", "netdesign"};
  app.require_subcommand(1);

  GenerateFlags gen_flags;
  CLI::App* gen = app.add_subcommand("generate", "Write a random instance");
  gen_flags.gen.add(gen);
  gen->add_option("--seed", gen_flags.seed, "Random seed (default $NETDESIGN_SEED or 1)");
  gen->add_option("--out,-o", gen_flags.out, "Output file (default stdout)");

  SolveFlags solve_flags;
  CLI::App* solve = app.add_subcommand("solve", "Solve one instance");
  solve->add_option("instance", solve_flags.path, "Instance file")->required();
  ConfigFlags& sc = solve_flags.config;
  solve->add_option("--mode", sc.mode, "Solution method")->check(CLI::IsMember(keys(kModes)));
  solve->add_option("--disagg", sc.disagg, "Sub-problem disaggregation")
      ->check(CLI::IsMember(keys(kDisaggs)));
  solve->add_option("--reform", sc.reform, "First-period reformulation")
      ->check(CLI::IsMember(keys(kToggles)));
  solve->add_option("--cover", sc.cover, "Budget cover cuts")->check(CLI::IsMember(keys(kToggles)));
  solve->add_option("--ws-cuts", sc.ws_cuts, "Warm-start cut kind")
      ->check(CLI::IsMember(keys(kWsCuts)));
  solve->add_option("--cb-cuts", sc.cb_cuts, "Tree cut kind")->check(CLI::IsMember(keys(kCbCuts)));
  add_shared_solve_flags(solve, sc);
  solve->add_option("--out,-o", solve_flags.out, "Report file (default stdout)");
  solve->add_option("--trace", solve_flags.trace, "Warm-start trace CSV");
  solve->add_option("--cuts", solve_flags.cuts, "Cut pool dump");
  solve->add_option("--export-lp", solve_flags.export_lp, "Model in LP format");
  solve->add_flag("--node-log", solve_flags.node_log, "Tree log on stderr");
  solve->add_flag("--solution", solve_flags.show_solution, "Print construction decisions");
  solve->add_flag("--omit-timing", solve_flags.omit_timing, "Leave out wall-clock fields");

  BenchFlags bench_flags;
  CLI::App* bench = app.add_subcommand("bench", "Run a configuration matrix");
  bench->add_option("--dir", bench_flags.dir, "Directory of instance files");
  bench_flags.gen.add(bench);
  bench->add_option("--seeds", bench_flags.seeds, "Generated instances")
      ->check(CLI::Range(1, 1000000));
  bench->add_option("--seed", bench_flags.seed, "First seed (default $NETDESIGN_SEED or 1)");
  bench->add_option("--mode", bench_flags.modes, "Modes")
      ->delimiter(',')
      ->check(CLI::IsMember(keys(kModes)));
  bench->add_option("--disagg", bench_flags.disaggs, "Disaggregation levels")
      ->delimiter(',')
      ->check(CLI::IsMember(keys(kDisaggs)));
  bench->add_option("--reform", bench_flags.reforms, "Reformulation settings")
      ->delimiter(',')
      ->check(CLI::IsMember(keys(kToggles)));
  bench->add_option("--cover", bench_flags.covers, "Cover cut settings")
      ->delimiter(',')
      ->check(CLI::IsMember(keys(kToggles)));
  bench->add_option("--ws-cuts", bench_flags.ws_cuts, "Warm-start cut kinds")
      ->delimiter(',')
      ->check(CLI::IsMember(keys(kWsCuts)));
  bench->add_option("--cb-cuts", bench_flags.cb_cuts, "Tree cut kinds")
      ->delimiter(',')
      ->check(CLI::IsMember(keys(kCbCuts)));
  add_shared_solve_flags(bench, bench_flags.shared);
  bench->add_option("--jobs,-j", bench_flags.jobs, "Instances solved in parallel")
      ->check(CLI::Range(1, 1024));
  bench->add_option("--out,-o", bench_flags.out, "CSV file (default stdout)");
  bench->add_flag("--omit-timing", bench_flags.omit_timing,
                  "Leave out timing columns for reproducible output");

  std::vector<const char*> argv{"netdesign"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    err << "run with --help for usage\n";
    return kExitUsage;
  }

  if (gen->parsed()) return cmd_generate(gen_flags, out, err);
  if (solve->parsed()) return cmd_solve(solve_flags, out, err);
  if (!bench_flags.dir.empty() && bench->count("--nodes") + bench->count("--seeds") > 0) {
    err << "error: --dir excludes generator options\n";
    return kExitUsage;
  }
  return cmd_bench(bench_flags, out, err);
}

}  // namespace ndcli
