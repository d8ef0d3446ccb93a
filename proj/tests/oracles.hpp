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

// Independent reference computations used by the tests. Nothing here calls
// into the solver code it checks.

#ifndef NETDESIGN_TESTS_ORACLES_HPP_
#define NETDESIGN_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "instance.hpp"
#include "lp.hpp"
#include "subproblem.hpp"

namespace netdesign::oracle {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Linear programming

// Minimum over all vertices of a two-variable polytope, or nullopt if none.
// Every pair of bound/row hyperplanes is intersected and filtered.
inline std::optional<double> enumerate_vertices_2d(const LpProblem& p) {
  struct Plane {
    double a, b, c;  // a x + b y = c
  };
  std::vector<Plane> planes;
  for (int j = 0; j < 2; ++j) {
    for (double v : {p.lower[j], p.upper[j]}) {
      if (std::isfinite(v)) planes.push_back(j == 0 ? Plane{1, 0, v} : Plane{0, 1, v});
    }
  }
  for (const LpRow& row : p.rows) {
    double a = 0, b = 0;
    for (const Term& t : row.terms) (t.var == 0 ? a : b) += t.coef;
    planes.push_back({a, b, row.rhs});
  }
  auto feasible = [&](double x, double y) {
    const double tol = 1e-9;
    if (x < p.lower[0] - tol || x > p.upper[0] + tol) return false;
    if (y < p.lower[1] - tol || y > p.upper[1] + tol) return false;
    for (const LpRow& row : p.rows) {
      double s = 0;
      for (const Term& t : row.terms) s += t.coef * (t.var == 0 ? x : y);
      if (row.sense != Sense::kGe && s > row.rhs + tol) return false;
      if (row.sense != Sense::kLe && s < row.rhs - tol) return false;
    }
    return true;
  };
  std::optional<double> best;
  for (std::size_t i = 0; i < planes.size(); ++i) {
    for (std::size_t j = i + 1; j < planes.size(); ++j) {
      const Plane& u = planes[i];
      const Plane& v = planes[j];
      const double det = u.a * v.b - u.b * v.a;
      if (std::abs(det) < 1e-12) continue;
      const double x = (u.c * v.b - u.b * v.c) / det;
      const double y = (u.a * v.c - u.c * v.a) / det;
      if (!feasible(x, y)) continue;
      const double z = p.cost[0] * x + p.cost[1] * y;
      if (!best || z < *best) best = z;
    }
  }
  return best;
}

// Random LP with small integer data. When `boxed`, all bounds are finite.
inline LpProblem random_lp(std::mt19937_64& rng, int max_vars, int max_rows,
                           bool boxed = false) {
  std::uniform_int_distribution<int> nvars(1, max_vars);
  std::uniform_int_distribution<int> nrows(0, max_rows);
  std::uniform_int_distribution<int> coef(-5, 5);
  std::uniform_int_distribution<int> pick(0, 9);
  LpProblem p;
  const int n = nvars(rng);
  const int m = nrows(rng);
  for (int j = 0; j < n; ++j) {
    double lo = coef(rng) - 1;
    double hi = lo + 1 + pick(rng);
    if (!boxed) {
      const int kind = pick(rng);
      if (kind == 0) lo = -kInf;
      if (kind == 1) hi = kInf;
      if (kind == 2) lo = -kInf, hi = kInf;
    }
    p.add_var(coef(rng), lo, hi);
  }
  for (int i = 0; i < m; ++i) {
    LpRow row;
    for (int j = 0; j < n; ++j) {
      if (pick(rng) < 4) {
        if (const int c = coef(rng); c != 0) row.terms.push_back({j, double(c)});
      }
    }
    const int s = pick(rng);
    row.sense = s < 4 ? Sense::kLe : s < 8 ? Sense::kGe : Sense::kEq;
    row.rhs = coef(rng) * 2;
    p.add_row(std::move(row));
  }
  return p;
}

struct LpCheck {
  bool ok = true;
  std::string message;
};

// Verifies an optimal result through primal feasibility, dual sign
// conditions, complementary slackness and the duality gap; an infeasible
// result through its certificate.
inline LpCheck check_lp_result(const LpProblem& p, const LpResult& r, double tol) {
  LpCheck out;
  auto fail = [&](const std::string& what) {
    if (out.ok) out.message = what;
    out.ok = false;
  };
  if (r.status == LpStatus::kInfeasible) {
    if (!verify_infeasibility_certificate(p, r.certificate, tol)) {
      fail("certificate does not verify");
    }
    return out;
  }
  if (r.status != LpStatus::kOptimal) return out;
  const int n = p.num_vars();
  const double ftol = 1e-6;
  double primal = 0.0;
  for (int j = 0; j < n; ++j) {
    primal += p.cost[j] * r.x[j];
    if (r.x[j] < p.lower[j] - ftol || r.x[j] > p.upper[j] + ftol) fail("bound violated");
  }
  std::vector<double> reduced = p.cost;
  double dual = 0.0;
  for (int i = 0; i < p.num_rows(); ++i) {
    const LpRow& row = p.rows[i];
    double act = 0.0;
    for (const Term& t : row.terms) {
      act += t.coef * r.x[t.var];
      reduced[t.var] -= r.row_dual[i] * t.coef;
    }
    if (row.sense != Sense::kGe && act > row.rhs + ftol) fail("row above rhs");
    if (row.sense != Sense::kLe && act < row.rhs - ftol) fail("row below rhs");
    const double y = r.row_dual[i];
    if (y > ftol && row.sense == Sense::kLe) fail("wrong dual sign");
    if (y < -ftol && row.sense == Sense::kGe) fail("wrong dual sign");
    if (std::abs(y) > ftol && std::abs(act - row.rhs) > ftol) fail("slackness on row");
    dual += y * row.rhs;
  }
  for (int j = 0; j < n; ++j) {
    const double d = reduced[j];
    if (std::abs(d - r.reduced_cost[j]) > ftol * (1 + std::abs(d))) fail("reduced cost mismatch");
    if (d > ftol) {
      if (!std::isfinite(p.lower[j]) || std::abs(r.x[j] - p.lower[j]) > ftol) fail("slackness on lower bound");
      dual += d * p.lower[j];
    } else if (d < -ftol) {
      if (!std::isfinite(p.upper[j]) || std::abs(r.x[j] - p.upper[j]) > ftol) fail("slackness on upper bound");
      dual += d * p.upper[j];
    }
  }
  if (std::abs(primal - r.objective) > tol * (1 + std::abs(primal))) fail("objective mismatch");
  if (std::abs(primal - dual) > tol * (1 + std::abs(primal))) {
    std::ostringstream s;
    s << "duality gap " << primal - dual;
    fail(s.str());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Networks

inline bool open_at(double v) { return v > 0.5; }

// Floyd-Warshall over the arcs open in period t, or over every arc.
inline std::vector<std::vector<double>> all_pairs(const Instance& inst, const NetworkState& s,
                                                  int t, bool every_arc = false) {
  const int n = inst.num_nodes();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, kInf));
  for (int i = 0; i < n; ++i) d[i][i] = 0.0;
  for (int a = 0; a < inst.num_arcs(); ++a) {
    if (!every_arc && !open_at(s.arc(a, t))) continue;
    const Arc& arc = inst.arc(a);
    d[arc.from][arc.to] = std::min(d[arc.from][arc.to], inst.routing_cost(a, t));
  }
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (d[i][m] + d[m][j] < d[i][j]) d[i][j] = d[i][m] + d[m][j];
  return d;
}

// Unit routing cost of client k in an integral period.
inline std::optional<double> theta(const Instance& inst, const NetworkState& s, int k, int t) {
  if (open_at(s.facility(k, t))) return 0.0;
  const auto d = all_pairs(inst, s, t);
  double best = kInf;
  for (int j = 0; j < inst.num_nodes(); ++j) {
    if (open_at(s.facility(j, t))) best = std::min(best, d[k][j]);
  }
  if (!std::isfinite(best)) return std::nullopt;
  return best;
}

// Routing LP for a fractional period, written out from the model.
inline std::optional<double> routing_lp(const Instance& inst, const NetworkState& s, int k,
                                        int t) {
  LpProblem p;
  const int arcs = inst.num_arcs();
  for (int a = 0; a < arcs; ++a) {
    const bool into_k = inst.arc(a).to == k;
    p.add_var(inst.routing_cost(a, t), 0.0, into_k ? 0.0 : std::max(0.0, s.arc(a, t)));
  }
  LpRow src{{}, Sense::kGe, 1.0 - s.facility(k, t)};
  for (int a = 0; a < arcs; ++a) {
    if (inst.arc(a).from == k) src.terms.push_back({a, 1.0});
  }
  if (src.terms.empty()) src.terms.push_back({0, 0.0});
  p.add_row(src);
  for (int i = 0; i < inst.num_nodes(); ++i) {
    if (i == k) continue;
    // inflow - outflow <= W_i
    LpRow bal{{}, Sense::kLe, s.facility(i, t)};
    for (int a = 0; a < arcs; ++a) {
      if (inst.arc(a).to == i) bal.terms.push_back({a, 1.0});
      if (inst.arc(a).from == i) bal.terms.push_back({a, -1.0});
    }
    if (bal.terms.empty()) continue;
    p.add_row(bal);
  }
  const LpResult r = lp_solve(p);
  if (r.status != LpStatus::kOptimal) return std::nullopt;
  return r.objective;
}

// gamma_k - sum gamma_i W_it - sum lambda_a X_at.
inline double cut_rhs(const OptimalityCut& c, const NetworkState& s) {
  double v = c.gamma[c.k];
  for (std::size_t i = 0; i < c.gamma.size(); ++i) v -= c.gamma[i] * s.facility(i, c.t);
  for (std::size_t a = 0; a < c.lambda.size(); ++a) v -= c.lambda[a] * s.arc(a, c.t);
  return v;
}

// Nonnegativity and rho + lambda + gamma_j - gamma_i >= 0 on arcs not entering k.
inline std::string dual_infeasibility(const Instance& inst, const OptimalityCut& c,
                                      double tol) {
  for (std::size_t i = 0; i < c.gamma.size(); ++i) {
    if (c.gamma[i] < -tol) return "negative gamma at " + std::to_string(i);
  }
  for (int a = 0; a < inst.num_arcs(); ++a) {
    if (c.lambda[a] < -tol) return "negative lambda at " + std::to_string(a);
    const Arc& arc = inst.arc(a);
    if (arc.to == c.k) continue;
    const double rc = inst.routing_cost(a, c.t) + c.lambda[a] + c.gamma[arc.to] - c.gamma[arc.from];
    if (rc < -tol) return "negative reduced cost on arc " + std::to_string(a);
  }
  return {};
}

// Every integral plan obeying monotone openings and cumulative budgets.
// Each initially closed facility or link gets a construction period in
// 1..T, or none.
inline std::vector<NetworkState> enumerate_states(const Instance& inst) {
  const int n = inst.num_nodes();
  const int T = inst.num_periods();
  std::vector<int> fac, lnk;
  for (int i = 0; i < n; ++i) if (!inst.initial_facility(i)) fac.push_back(i);
  for (int l = 0; l < inst.num_links(); ++l) if (!inst.initial_link(l)) lnk.push_back(l);
  const std::size_t items = fac.size() + lnk.size();
  std::vector<int> when(items, 0);  // 0: never
  std::vector<NetworkState> out;
  for (;;) {
    bool ok = true;
    double fs = 0.0, fb = 0.0, ls = 0.0, lb = 0.0;
    for (int t = 1; t <= T && ok; ++t) {
      for (std::size_t e = 0; e < fac.size(); ++e)
        if (when[e] == t) fs += inst.facility_open_cost(fac[e], t);
      for (std::size_t e = 0; e < lnk.size(); ++e)
        if (when[fac.size() + e] == t) ls += inst.link_construct_cost(lnk[e], t);
      fb += inst.facility_budget(t);
      lb += inst.link_budget(t);
      ok = fs <= fb + 1e-9 * (1 + fb) && ls <= lb + 1e-9 * (1 + lb);
    }
    if (ok) {
      NetworkState s = NetworkState::initial(inst);
      for (int t = 1; t <= T; ++t) {
        for (int i = 0; i < n; ++i) s.facility(i, t) = inst.initial_facility(i) ? 1.0 : 0.0;
        for (int l = 0; l < inst.num_links(); ++l) {
          s.arc(2 * l, t) = s.arc(2 * l + 1, t) = inst.initial_link(l) ? 1.0 : 0.0;
        }
        for (std::size_t e = 0; e < fac.size(); ++e)
          if (when[e] != 0 && when[e] <= t) s.facility(fac[e], t) = 1.0;
        for (std::size_t e = 0; e < lnk.size(); ++e) {
          if (when[fac.size() + e] != 0 && when[fac.size() + e] <= t) {
            s.arc(2 * lnk[e], t) = s.arc(2 * lnk[e] + 1, t) = 1.0;
          }
        }
      }
      out.push_back(std::move(s));
    }
    std::size_t e = 0;
    while (e < items && ++when[e] > T) when[e++] = 0;
    if (e == items) break;
  }
  return out;
}

// Total cost of an integral plan, nullopt when a client cannot be served.
inline std::optional<double> plan_cost(const Instance& inst, const NetworkState& s) {
  double total = 0.0;
  for (int t = 1; t <= inst.num_periods(); ++t) {
    const auto d = all_pairs(inst, s, t);
    for (int i = 0; i < inst.num_nodes(); ++i) {
      if (open_at(s.facility(i, t))) total += inst.facility_op_cost(i, t);
    }
    for (int l = 0; l < inst.num_links(); ++l) {
      if (open_at(s.arc(2 * l, t))) total += inst.link_op_cost(l, t);
    }
    for (int k = 0; k < inst.num_nodes(); ++k) {
      double best = open_at(s.facility(k, t)) ? 0.0 : kInf;
      for (int j = 0; j < inst.num_nodes(); ++j) {
        if (open_at(s.facility(j, t))) best = std::min(best, d[k][j]);
      }
      if (!std::isfinite(best)) return std::nullopt;
      total += inst.demand(k, t) * best;
    }
  }
  return total;
}

inline std::optional<double> brute_force_optimum(const Instance& inst) {
  std::optional<double> best;
  for (const NetworkState& s : enumerate_states(inst)) {
    if (auto c = plan_cost(inst, s); c && (!best || *c < *best)) best = c;
  }
  return best;
}

inline int closed_items(const Instance& inst) {
  int c = 0;
  for (int i = 0; i < inst.num_nodes(); ++i) c += inst.initial_facility(i) ? 0 : 1;
  for (int l = 0; l < inst.num_links(); ++l) c += inst.initial_link(l) ? 0 : 1;
  return c;
}

inline bool relative_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace netdesign::oracle

#endif  // NETDESIGN_TESTS_ORACLES_HPP_
