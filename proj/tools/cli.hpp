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

// Command-line front end: generate, solve and bench.

#ifndef NETDESIGN_TOOLS_CLI_HPP_
#define NETDESIGN_TOOLS_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace ndcli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitLimit = 3;
inline constexpr int kExitUsage = 64;

struct RunRow {
  std::string instance;
  std::string mode;
  std::string disagg;
  std::string reform;
  std::string cover;
  std::string ws_cuts;
  std::string cb_cuts;
  std::string status;
  double objective = 0.0;
  double bound = 0.0;
  double gap = 0.0;
  double time = 0.0;
  long nodes = 0;
  long optimality_cuts = 0;
  long feasibility_cuts = 0;
  long subproblems = 0;
  double subproblem_time = 0.0;
  std::string error;  // empty on success

  std::string config_key() const;
};

struct SummaryRow {
  RunRow config;  // config columns only
  int runs = 0;
  double mean_time = 0.0;
  double geomean_time = 0.0;
  int wins = 0;
};

// RFC 4180 field quoting.
std::string csv_field(const std::string& s);
// Times below 0.01 s count as 0.01.
double geometric_mean(const std::vector<double>& times);
// One row per config in first-seen order. A win is a strictly minimal time
// among the configs run on an instance; ties award every tied config.
std::vector<SummaryRow> summarize(const std::vector<RunRow>& rows);
std::string bench_csv(const std::vector<RunRow>& rows, bool omit_timing);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ndcli

#endif  // NETDESIGN_TOOLS_CLI_HPP_
