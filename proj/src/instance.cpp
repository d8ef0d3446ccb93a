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

#include "instance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

namespace netdesign {
namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw ValidationError(what);
}

bool valid_value(double v) { return std::isfinite(v) && v >= 0.0; }

void check_table(const PeriodTable& table, int entities, int periods,
                 const char* name) {
  require(table.entities() == entities && table.periods() == periods,
          std::string(name) + ": dimension mismatch");
  for (int e = 0; e < entities; ++e) {
    for (int t = 1; t <= periods; ++t) {
      require(valid_value(table(e, t)),
              std::string(name) + " must be finite and nonnegative (entity " +
                  std::to_string(e) + ", period " + std::to_string(t) + ")");
    }
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

InstanceData InstanceData::sized(int num_nodes, int num_periods,
                                 std::vector<Link> links) {
  InstanceData d;
  d.num_nodes = num_nodes;
  d.num_periods = num_periods;
  const int num_links = static_cast<int>(links.size());
  d.links = std::move(links);
  d.demand = PeriodTable(num_nodes, num_periods);
  d.facility_open_cost = PeriodTable(num_nodes, num_periods);
  d.facility_op_cost = PeriodTable(num_nodes, num_periods);
  d.link_construct_cost = PeriodTable(num_links, num_periods);
  d.link_op_cost = PeriodTable(num_links, num_periods);
  d.routing_cost = PeriodTable(2 * num_links, num_periods);
  d.facility_budget.assign(num_periods + 1, 0.0);
  d.link_budget.assign(num_periods + 1, 0.0);
  d.initial_facility.assign(num_nodes, 0);
  d.initial_link.assign(num_links, 0);
  return d;
}

Instance::Instance(InstanceData data) : data_(std::move(data)) {
  const int n = data_.num_nodes;
  const int periods = data_.num_periods;
  require(n >= 1, "instance needs at least one node");
  require(periods >= 1, "instance needs at least one period");
  const int num_links = static_cast<int>(data_.links.size());
  require(static_cast<int>(data_.initial_link.size()) == num_links,
          "initial link state: dimension mismatch");
  require(static_cast<int>(data_.initial_facility.size()) == n,
          "initial facility state: dimension mismatch");
  require(static_cast<int>(data_.facility_budget.size()) == periods + 1 &&
              static_cast<int>(data_.link_budget.size()) == periods + 1,
          "budgets: dimension mismatch");
  require(data_.routing_cost.entities() == 2 * num_links &&
              data_.routing_cost.periods() == periods,
          "routing cost: dimension mismatch");

  // Orient every link as a < b, swapping the directed routing rows.
  for (int l = 0; l < num_links; ++l) {
    Link& link = data_.links[l];
    require(link.a >= 0 && link.a < n && link.b >= 0 && link.b < n,
            "link endpoint out of range");
    require(link.a != link.b,
            "self-loop link at node " + std::to_string(link.a));
    if (link.a > link.b) {
      std::swap(link.a, link.b);
      for (int t = 0; t <= periods; ++t) {
        std::swap(data_.routing_cost(2 * l, t),
                  data_.routing_cost(2 * l + 1, t));
      }
    }
  }

  // Canonical order.
  std::vector<int> order(num_links);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    const Link& p = data_.links[x];
    const Link& q = data_.links[y];
    return std::tie(p.a, p.b) < std::tie(q.a, q.b);
  });
  for (int l = 1; l < num_links; ++l) {
    require(!(data_.links[order[l]] == data_.links[order[l - 1]]),
            "duplicate link {" + std::to_string(data_.links[order[l]].a) +
                "," + std::to_string(data_.links[order[l]].b) + "}");
  }
  if (!std::is_sorted(order.begin(), order.end())) {
    InstanceData sorted = data_;
    for (int l = 0; l < num_links; ++l) {
      const int src = order[l];
      sorted.links[l] = data_.links[src];
      sorted.initial_link[l] = data_.initial_link[src];
      for (int t = 0; t <= periods; ++t) {
        sorted.link_construct_cost(l, t) = data_.link_construct_cost(src, t);
        sorted.link_op_cost(l, t) = data_.link_op_cost(src, t);
        sorted.routing_cost(2 * l, t) = data_.routing_cost(2 * src, t);
        sorted.routing_cost(2 * l + 1, t) = data_.routing_cost(2 * src + 1, t);
      }
    }
    data_ = std::move(sorted);
  }

  check_table(data_.demand, n, periods, "demand");
  check_table(data_.facility_open_cost, n, periods, "facility opening cost");
  check_table(data_.facility_op_cost, n, periods, "facility operating cost");
  check_table(data_.link_construct_cost, num_links, periods,
              "link construction cost");
  check_table(data_.link_op_cost, num_links, periods, "link operating cost");
  check_table(data_.routing_cost, 2 * num_links, periods, "routing cost");
  for (int t = 1; t <= periods; ++t) {
    require(valid_value(data_.facility_budget[t]) &&
                valid_value(data_.link_budget[t]),
            "budget must be finite and nonnegative (period " +
                std::to_string(t) + ")");
  }
  for (char v : data_.initial_facility) {
    require(v == 0 || v == 1, "initial facility flag must be 0 or 1");
  }
  for (char v : data_.initial_link) {
    require(v == 0 || v == 1, "initial link flag must be 0 or 1");
  }

  arcs_.resize(2 * num_links);
  out_arcs_.assign(n, {});
  in_arcs_.assign(n, {});
  for (int l = 0; l < num_links; ++l) {
    const Link& link = data_.links[l];
    arcs_[2 * l] = Arc{link.a, link.b, l};
    arcs_[2 * l + 1] = Arc{link.b, link.a, l};
  }
  for (int a = 0; a < 2 * num_links; ++a) {
    out_arcs_[arcs_[a].from].push_back(a);
    in_arcs_[arcs_[a].to].push_back(a);
  }
}

std::optional<int> Instance::find_arc(int from, int to) const {
  for (int a : out_arcs_[from]) {
    if (arcs_[a].to == to) return a;
  }
  return std::nullopt;
}

bool Instance::has_empty_initial_network() const {
  return std::none_of(data_.initial_facility.begin(),
                      data_.initial_facility.end(),
                      [](char v) { return v != 0; }) &&
         std::none_of(data_.initial_link.begin(), data_.initial_link.end(),
                      [](char v) { return v != 0; });
}

NetworkState NetworkState::initial(const Instance& inst) {
  NetworkState s;
  s.facility = PeriodTable(inst.num_nodes(), inst.num_periods());
  s.arc = PeriodTable(inst.num_arcs(), inst.num_periods());
  for (int i = 0; i < inst.num_nodes(); ++i) {
    s.facility(i, 0) = inst.initial_facility(i) ? 1.0 : 0.0;
  }
  for (int a = 0; a < inst.num_arcs(); ++a) {
    s.arc(a, 0) = inst.initial_link(inst.arc(a).link) ? 1.0 : 0.0;
  }
  return s;
}

double NetworkState::link_open(int l, int t) const {
  if (period1_directional && t == 1) return arc(2 * l, 1) + arc(2 * l + 1, 1);
  return arc(2 * l, t);
}

bool NetworkState::is_integral(double tol) const {
  auto integral = [tol](double v) {
    return std::abs(v - std::round(v)) <= tol;
  };
  return std::all_of(facility.values().begin(), facility.values().end(),
                     integral) &&
         std::all_of(arc.values().begin(), arc.values().end(), integral);
}

FullSolution FullSolution::zero(const Instance& inst) {
  FullSolution sol;
  sol.state = NetworkState::initial(inst);
  sol.flow.assign(static_cast<std::size_t>(inst.num_arcs()) *
                      inst.num_nodes() * (inst.num_periods() + 1),
                  0.0);
  sol.theta = PeriodTable(inst.num_nodes(), inst.num_periods());
  return sol;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

enum class Section { kHeader, kLinks, kDemand, kCosts, kBudgets, kInitial };

class LineReader {
 public:
  LineReader(std::string_view line, int line_no)
      : line_(line), line_no_(line_no) {}

  bool done() {
    skip_space();
    return pos_ >= line_.size();
  }

  std::string_view word() {
    skip_space();
    if (pos_ >= line_.size()) throw ParseError(line_no_, "unexpected end of line");
    const std::size_t start = pos_;
    while (pos_ < line_.size() && !is_space(line_[pos_])) ++pos_;
    return line_.substr(start, pos_ - start);
  }

  int integer(const char* field) {
    const std::string_view w = word();
    int v = 0;
    auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc() || ptr != w.data() + w.size()) {
      throw ParseError(line_no_, std::string("expected integer for ") + field +
                                     ", got '" + std::string(w) + "'");
    }
    return v;
  }

  double real(const char* field) {
    const std::string_view w = word();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc() || ptr != w.data() + w.size()) {
      throw ParseError(line_no_, std::string("expected number for ") + field +
                                     ", got '" + std::string(w) + "'");
    }
    return v;
  }

  void expect_end() {
    if (!done()) throw ParseError(line_no_, "trailing tokens");
  }

 private:
  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }
  void skip_space() {
    while (pos_ < line_.size() && is_space(line_[pos_])) ++pos_;
  }

  std::string_view line_;
  int line_no_;
  std::size_t pos_ = 0;
};

}  // namespace

Instance parse_instance(std::string_view text) {
  Section section = Section::kHeader;
  std::optional<int> num_nodes;
  std::optional<int> num_periods;
  InstanceData data;
  bool sized = false;
  std::vector<Link> links;
  std::map<std::pair<int, int>, int> link_index;
  std::set<std::tuple<std::string, int, int, int>> seen;

  auto ensure_sized = [&](int line_no) {
    if (sized) return;
    if (!num_nodes || !num_periods) {
      throw ParseError(line_no, "n_nodes and n_periods must precede sections");
    }
    data = InstanceData::sized(*num_nodes, *num_periods, links);
    sized = true;
  };
  auto check_node = [&](int v, int line_no) {
    if (v < 0 || v >= *num_nodes) {
      throw ParseError(line_no, "node " + std::to_string(v) + " out of range");
    }
  };
  auto check_period = [&](int t, int line_no) {
    if (t < 1 || t > *num_periods) {
      throw ParseError(line_no, "period " + std::to_string(t) + " out of range");
    }
  };
  auto check_link = [&](int l, int line_no) {
    if (l < 0 || l >= static_cast<int>(links.size())) {
      throw ParseError(line_no, "link " + std::to_string(l) + " out of range");
    }
  };
  auto once = [&](std::string tag, int x, int y, int z, int line_no) {
    if (!seen.emplace(tag, x, y, z).second) {
      throw ParseError(line_no, "duplicate " + tag + " entry");
    }
  };

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    LineReader in(line, line_no);
    if (in.done()) continue;
    const std::string_view head = in.word();

    if (head == "LINKS" || head == "DEMAND" || head == "COSTS" ||
        head == "BUDGETS" || head == "INITIAL") {
      in.expect_end();
      if (head == "LINKS") {
        if (section != Section::kHeader) {
          throw ParseError(line_no, "LINKS must directly follow the header");
        }
        if (!num_nodes || !num_periods) {
          throw ParseError(line_no, "n_nodes and n_periods must precede LINKS");
        }
        section = Section::kLinks;
        continue;
      }
      ensure_sized(line_no);
      section = head == "DEMAND"    ? Section::kDemand
                : head == "COSTS"   ? Section::kCosts
                : head == "BUDGETS" ? Section::kBudgets
                                    : Section::kInitial;
      continue;
    }

    switch (section) {
      case Section::kHeader: {
        const int v = in.integer("header value");
        in.expect_end();
        if (head == "n_nodes") {
          if (v < 1) throw ParseError(line_no, "n_nodes must be positive");
          num_nodes = v;
        } else if (head == "n_periods") {
          if (v < 1) throw ParseError(line_no, "n_periods must be positive");
          num_periods = v;
        } else {
          throw ParseError(line_no, "unknown header key '" + std::string(head) + "'");
        }
        break;
      }
      case Section::kLinks: {
        LineReader row(line, line_no);
        const int a = row.integer("link endpoint");
        const int b = row.integer("link endpoint");
        row.expect_end();
        check_node(a, line_no);
        check_node(b, line_no);
        if (a == b) {
          throw ParseError(line_no, "self-loop link at node " + std::to_string(a));
        }
        const auto key = std::minmax(a, b);
        if (!link_index.emplace(key, static_cast<int>(links.size())).second) {
          throw ParseError(line_no, "duplicate link");
        }
        links.push_back(Link{a, b});
        break;
      }
      case Section::kDemand: {
        LineReader row(line, line_no);
        const int k = row.integer("demand node");
        const int t = row.integer("demand period");
        const double v = row.real("demand");
        row.expect_end();
        check_node(k, line_no);
        check_period(t, line_no);
        once("DEMAND", k, t, 0, line_no);
        data.demand(k, t) = v;
        break;
      }
      case Section::kCosts: {
        const std::string tag(head);
        if (tag == "RHO") {
          const int i = in.integer("arc tail");
          const int j = in.integer("arc head");
          const int t = in.integer("period");
          const double v = in.real("routing cost");
          in.expect_end();
          check_node(i, line_no);
          check_node(j, line_no);
          check_period(t, line_no);
          const auto it = link_index.find(std::minmax(i, j));
          if (it == link_index.end()) {
            throw ParseError(line_no, "RHO on arc without a link");
          }
          once(tag, i, j, t, line_no);
          const int l = it->second;
          const int a = links[l].a == i ? 2 * l : 2 * l + 1;
          data.routing_cost(a, t) = v;
        } else if (tag == "G" || tag == "F" || tag == "C" || tag == "H") {
          const int e = in.integer("index");
          const int t = in.integer("period");
          const double v = in.real("cost");
          in.expect_end();
          check_period(t, line_no);
          once(tag, e, t, 0, line_no);
          if (tag == "G" || tag == "F") {
            check_node(e, line_no);
            (tag == "G" ? data.facility_open_cost : data.facility_op_cost)(e, t) = v;
          } else {
            check_link(e, line_no);
            (tag == "C" ? data.link_construct_cost : data.link_op_cost)(e, t) = v;
          }
        } else {
          throw ParseError(line_no, "unknown cost tag '" + tag + "'");
        }
        break;
      }
      case Section::kBudgets: {
        LineReader row(line, line_no);
        const int t = row.integer("budget period");
        const double bbar = row.real("facility budget");
        const double bhat = row.real("link budget");
        row.expect_end();
        check_period(t, line_no);
        once("BUDGETS", t, 0, 0, line_no);
        data.facility_budget[t] = bbar;
        data.link_budget[t] = bhat;
        break;
      }
      case Section::kInitial: {
        if (head == "W") {
          const int i = in.integer("facility");
          in.expect_end();
          check_node(i, line_no);
          once("W", i, 0, 0, line_no);
          data.initial_facility[i] = 1;
        } else if (head == "X") {
          const int i = in.integer("link endpoint");
          const int j = in.integer("link endpoint");
          in.expect_end();
          const auto it = link_index.find(std::minmax(i, j));
          if (it == link_index.end()) {
            throw ParseError(line_no, "initial X on a missing link");
          }
          once("X", it->second, 0, 0, line_no);
          data.initial_link[it->second] = 1;
        } else {
          throw ParseError(line_no, "unknown INITIAL tag '" + std::string(head) + "'");
        }
        break;
      }
    }
  }
  ensure_sized(line_no);
  return Instance(std::move(data));
}

std::string format_instance(const Instance& inst) {
  std::ostringstream out;
  const int n = inst.num_nodes();
  const int periods = inst.num_periods();
  out << "n_nodes " << n << "\n";
  out << "n_periods " << periods << "\n";
  out << "LINKS\n";
  for (int l = 0; l < inst.num_links(); ++l) {
    out << inst.link(l).a << ' ' << inst.link(l).b << "\n";
  }
  out << "DEMAND\n";
  for (int k = 0; k < n; ++k) {
    for (int t = 1; t <= periods; ++t) {
      out << k << ' ' << t << ' ' << format_double(inst.demand(k, t)) << "\n";
    }
  }
  out << "COSTS\n";
  auto per_entity = [&](const char* tag, int count, auto value) {
    for (int e = 0; e < count; ++e) {
      for (int t = 1; t <= periods; ++t) {
        out << tag << ' ' << e << ' ' << t << ' ' << format_double(value(e, t))
            << "\n";
      }
    }
  };
  per_entity("C", inst.num_links(),
             [&](int l, int t) { return inst.link_construct_cost(l, t); });
  per_entity("F", n, [&](int i, int t) { return inst.facility_op_cost(i, t); });
  per_entity("G", n, [&](int i, int t) { return inst.facility_open_cost(i, t); });
  per_entity("H", inst.num_links(),
             [&](int l, int t) { return inst.link_op_cost(l, t); });
  std::vector<int> arcs(inst.num_arcs());
  std::iota(arcs.begin(), arcs.end(), 0);
  std::sort(arcs.begin(), arcs.end(), [&](int x, int y) {
    return std::tie(inst.arc(x).from, inst.arc(x).to) <
           std::tie(inst.arc(y).from, inst.arc(y).to);
  });
  for (int a : arcs) {
    for (int t = 1; t <= periods; ++t) {
      out << "RHO " << inst.arc(a).from << ' ' << inst.arc(a).to << ' ' << t
          << ' ' << format_double(inst.routing_cost(a, t)) << "\n";
    }
  }
  out << "BUDGETS\n";
  for (int t = 1; t <= periods; ++t) {
    out << t << ' ' << format_double(inst.facility_budget(t)) << ' '
        << format_double(inst.link_budget(t)) << "\n";
  }
  out << "INITIAL\n";
  for (int i = 0; i < n; ++i) {
    if (inst.initial_facility(i)) out << "W " << i << "\n";
  }
  for (int l = 0; l < inst.num_links(); ++l) {
    if (inst.initial_link(l)) {
      out << "X " << inst.link(l).a << ' ' << inst.link(l).b << "\n";
    }
  }
  return out.str();
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << format_instance(inst);
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Generator

namespace {

// Platform-independent uniform draws; the std distributions are not
// specified bit-for-bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int below(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
      std::swap(v[i], v[below(i + 1)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

double round2(double v) { return std::round(v * 100.0) / 100.0; }

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(int x, int y) {
    x = find(x);
    y = find(y);
    if (x == y) return false;
    parent_[y] = x;
    return true;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace

Instance generate_instance(const GeneratorParams& p, std::uint64_t seed) {
  if (p.num_nodes < 2) throw std::invalid_argument("generator needs N >= 2");
  if (p.num_periods < 1) throw std::invalid_argument("generator needs T >= 1");
  if (!(p.link_density > 0.0 && p.link_density <= 1.0)) {
    throw std::invalid_argument("link density must be in (0, 1]");
  }
  const int n = p.num_nodes;
  const int periods = p.num_periods;
  const int pairs = n * (n - 1) / 2;
  const int num_links =
      std::clamp(static_cast<int>(std::lround(p.link_density * pairs)), 1, pairs);
  if (num_links < n - 1) {
    throw std::invalid_argument("link density too low for a connected graph");
  }

  Rng rng(seed);
  std::vector<std::pair<double, double>> coords(n);
  for (auto& c : coords) c = {rng.uniform(0.0, 100.0), rng.uniform(0.0, 100.0)};

  std::vector<Link> all;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) all.push_back(Link{a, b});
  }
  std::vector<Link> links;
  bool connected = false;
  for (int attempt = 0; attempt < p.max_connect_retries && !connected; ++attempt) {
    rng.shuffle(all);
    links.assign(all.begin(), all.begin() + num_links);
    DisjointSets sets(n);
    int components = n;
    for (const Link& l : links) components -= sets.unite(l.a, l.b) ? 1 : 0;
    connected = components == 1;
  }
  if (!connected) {
    throw std::invalid_argument("could not draw a connected potential graph");
  }
  std::sort(links.begin(), links.end(), [](const Link& x, const Link& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });

  InstanceData d = InstanceData::sized(n, periods, links);
  auto length = [&](const Link& l) {
    const double dx = coords[l.a].first - coords[l.b].first;
    const double dy = coords[l.a].second - coords[l.b].second;
    return std::max(1.0, std::sqrt(dx * dx + dy * dy));
  };
  // Costs drift mildly over time around a per-entity base.
  auto drift = [&]() { return rng.uniform(0.9, 1.1); };

  double total_facility_cost = 0.0;
  for (int i = 0; i < n; ++i) {
    const double open = rng.uniform(p.facility_open_min, p.facility_open_max);
    const double op = rng.uniform(p.facility_op_min, p.facility_op_max);
    const double dem = rng.uniform(p.demand_min, p.demand_max);
    for (int t = 1; t <= periods; ++t) {
      d.facility_open_cost(i, t) = round2(open * drift());
      d.facility_op_cost(i, t) = round2(op * drift());
      d.demand(i, t) = round2(dem * drift());
    }
    total_facility_cost += open;
  }
  double total_link_cost = 0.0;
  for (int l = 0; l < num_links; ++l) {
    const double len = length(links[l]);
    const double build = len * rng.uniform(p.link_construct_min, p.link_construct_max);
    const double op = len * rng.uniform(p.link_op_min, p.link_op_max);
    const double route = len * rng.uniform(p.routing_min, p.routing_max);
    for (int t = 1; t <= periods; ++t) {
      d.link_construct_cost(l, t) = round2(build * drift());
      d.link_op_cost(l, t) = round2(op * drift());
      const double r = std::max(0.01, round2(route * drift()));
      d.routing_cost(2 * l, t) = r;
      d.routing_cost(2 * l + 1, t) = r;
    }
    total_link_cost += build;
  }

  for (int t = 1; t <= periods; ++t) {
    d.facility_budget[t] = round2(p.facility_budget_fraction * total_facility_cost / periods);
    d.link_budget[t] = round2(p.link_budget_fraction * total_link_cost / periods);
  }

  if (p.existing_network) {
    // Random spanning tree of the potential graph plus a few facilities.
    std::vector<int> order(num_links);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    DisjointSets sets(n);
    for (int l : order) {
      if (sets.unite(links[l].a, links[l].b)) d.initial_link[l] = 1;
    }
    const int facilities = 1 + n / 6;
    std::vector<int> nodes(n);
    std::iota(nodes.begin(), nodes.end(), 0);
    rng.shuffle(nodes);
    for (int f = 0; f < facilities; ++f) d.initial_facility[nodes[f]] = 1;
  } else {
    // Guarantee a feasible first period: one facility and a spanning tree.
    double cheapest = kInfinity;
    for (int i = 0; i < n; ++i) cheapest = std::min(cheapest, d.facility_open_cost(i, 1));
    std::vector<int> order(num_links);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
      return d.link_construct_cost(x, 1) < d.link_construct_cost(y, 1);
    });
    DisjointSets sets(n);
    double tree_cost = 0.0;
    for (int l : order) {
      if (sets.unite(links[l].a, links[l].b)) tree_cost += d.link_construct_cost(l, 1);
    }
    d.facility_budget[1] = std::max(d.facility_budget[1], std::ceil(cheapest));
    d.link_budget[1] = std::max(d.link_budget[1], std::ceil(tree_cost));
  }
  return Instance(std::move(d));
}

// ---------------------------------------------------------------------------
// Objective and feasibility

double evaluate_objective(const Instance& inst, const FullSolution& sol) {
  const int n = inst.num_nodes();
  const int periods = inst.num_periods();
  if (sol.state.facility.entities() != n || sol.state.facility.periods() != periods ||
      sol.state.arc.entities() != inst.num_arcs() ||
      sol.flow.size() != static_cast<std::size_t>(inst.num_arcs()) * n * (periods + 1)) {
    throw std::invalid_argument("solution dimensions do not match instance");
  }
  double total = 0.0;
  for (int t = 1; t <= periods; ++t) {
    for (int i = 0; i < n; ++i) {
      total += inst.facility_op_cost(i, t) * sol.state.facility(i, t);
    }
    for (int k = 0; k < n; ++k) {
      const double d = inst.demand(k, t);
      if (d == 0.0) continue;
      for (int a = 0; a < inst.num_arcs(); ++a) {
        total += inst.routing_cost(a, t) * d * sol.z(inst, a, k, t);
      }
    }
    for (int l = 0; l < inst.num_links(); ++l) {
      total += inst.link_op_cost(l, t) * sol.state.link_open(l, t);
    }
  }
  return total;
}

std::string Violation::to_string() const {
  std::string s = constraint + " at (";
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(indices[i]);
  }
  s += ") by " + format_double(amount);
  return s;
}

std::vector<Violation> check_feasibility(const Instance& inst,
                                         const FullSolution& sol,
                                         const FeasibilityCheckOptions& options) {
  std::vector<Violation> out;
  const double tol = options.tolerance;
  const int n = inst.num_nodes();
  const int periods = inst.num_periods();
  const NetworkState& s = sol.state;
  auto report = [&](const char* c, std::vector<int> idx, double amount) {
    out.push_back(Violation{c, std::move(idx), amount});
  };
  if (s.facility.entities() != n || s.facility.periods() != periods ||
      s.arc.entities() != inst.num_arcs() || s.arc.periods() != periods ||
      sol.flow.size() !=
          static_cast<std::size_t>(inst.num_arcs()) * n * (periods + 1)) {
    report("dimensions", {}, 0.0);
    return out;
  }

  // Period 0 must match the instance.
  for (int i = 0; i < n; ++i) {
    const double want = inst.initial_facility(i) ? 1.0 : 0.0;
    if (std::abs(s.facility(i, 0) - want) > tol) report("initial_facility", {i, 0}, std::abs(s.facility(i, 0) - want));
  }
  for (int a = 0; a < inst.num_arcs(); ++a) {
    const double want = inst.initial_link(inst.arc(a).link) ? 1.0 : 0.0;
    if (std::abs(s.arc(a, 0) - want) > tol) report("initial_link", {inst.arc(a).link, 0}, std::abs(s.arc(a, 0) - want));
  }

  auto check_unit = [&](double v, const char* what, std::vector<int> idx) {
    if (v < -tol || v > 1.0 + tol) report("bounds", idx, v);
    if (options.require_integral && std::abs(v - std::round(v)) > tol) {
      idx.insert(idx.begin(), what[0] == 'W' ? 0 : 1);
      report("integrality", std::move(idx), std::abs(v - std::round(v)));
    }
  };
  for (int t = 1; t <= periods; ++t) {
    for (int i = 0; i < n; ++i) check_unit(s.facility(i, t), "W", {i, t});
    for (int a = 0; a < inst.num_arcs(); ++a) check_unit(s.arc(a, t), "X", {a, t});
  }

  for (int t = 1; t <= periods; ++t) {
    for (int k = 0; k < n; ++k) {
      // Demand coverage.
      double out_flow = 0.0;
      for (int a : inst.out_arcs(k)) out_flow += sol.z(inst, a, k, t);
      const double cover = s.facility(k, t) + out_flow;
      if (cover < 1.0 - tol) report("demand_coverage", {k, t}, 1.0 - cover);
      // Nothing returns to the origin.
      for (int a : inst.in_arcs(k)) {
        const double z = sol.z(inst, a, k, t);
        if (std::abs(z) > tol) report("no_return", {a, k, t}, std::abs(z));
      }
      // Conservation.
      for (int i = 0; i < n; ++i) {
        if (i == k) continue;
        double in = 0.0, outf = 0.0;
        for (int a : inst.in_arcs(i)) in += sol.z(inst, a, k, t);
        for (int a : inst.out_arcs(i)) outf += sol.z(inst, a, k, t);
        const double excess = in - outf - s.facility(i, t);
        if (excess > tol) report("flow_conservation", {i, k, t}, excess);
      }
      // Open arcs only, and nonnegativity.
      double cost = 0.0;
      for (int a = 0; a < inst.num_arcs(); ++a) {
        const double z = sol.z(inst, a, k, t);
        if (z < -tol) report("nonnegativity", {a, k, t}, -z);
        if (z > s.arc(a, t) + tol) report("arc_capacity", {a, k, t}, z - s.arc(a, t));
        cost += inst.routing_cost(a, t) * z;
      }
      if (std::abs(cost - sol.theta(k, t)) > tol * (1.0 + std::abs(cost))) {
        report("theta", {k, t}, std::abs(cost - sol.theta(k, t)));
      }
    }
  }

  // Opening dynamics: construction indicators in [0,1].
  for (int t = 1; t <= periods; ++t) {
    for (int i = 0; i < n; ++i) {
      const double u = s.facility_construction(i, t);
      if (u < -tol || u > 1.0 + tol) report("facility_construction", {i, t}, u < 0 ? -u : u - 1.0);
    }
    for (int l = 0; l < inst.num_links(); ++l) {
      const double v = s.link_construction(l, t);
      if (v < -tol || v > 1.0 + tol) report("link_construction", {l, t}, v < 0 ? -v : v - 1.0);
    }
  }

  // Cumulative budgets, one construction charge per link.
  double fac_spent = 0.0, fac_budget = 0.0, link_spent = 0.0, link_budget = 0.0;
  for (int t = 1; t <= periods; ++t) {
    for (int i = 0; i < n; ++i) fac_spent += inst.facility_open_cost(i, t) * s.facility_construction(i, t);
    for (int l = 0; l < inst.num_links(); ++l) link_spent += inst.link_construct_cost(l, t) * s.link_construction(l, t);
    fac_budget += inst.facility_budget(t);
    link_budget += inst.link_budget(t);
    if (fac_spent > fac_budget + tol * (1.0 + fac_budget)) report("facility_budget", {t}, fac_spent - fac_budget);
    if (link_spent > link_budget + tol * (1.0 + link_budget)) report("link_budget", {t}, link_spent - link_budget);
  }

  // Symmetry; in a directional first period only one direction may open.
  for (int l = 0; l < inst.num_links(); ++l) {
    for (int t = 1; t <= periods; ++t) {
      const double fwd = s.arc(2 * l, t);
      const double bwd = s.arc(2 * l + 1, t);
      if (s.period1_directional && t == 1) {
        if (fwd + bwd > 1.0 + tol) report("single_direction", {l}, fwd + bwd - 1.0);
      } else if (std::abs(fwd - bwd) > tol) {
        report("link_symmetry", {l, t}, std::abs(fwd - bwd));
      }
    }
  }
  return out;
}

}  // namespace netdesign
