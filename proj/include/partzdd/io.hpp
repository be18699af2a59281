#pragma once

// Text formats:
//   graph       line 1 "n m", then m lines "u v" (1-based)
//   attributes  CSV, header "vertex,population[,rep_share][,x,y]"
//   plans       one plan per line, n comma-separated canonical labels
//   edge order  one 1-based edge index per line

#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "partzdd/error.hpp"
#include "partzdd/graph.hpp"

namespace partzdd {

struct VertexAttributes {
  std::vector<std::uint64_t> population;
  std::optional<std::vector<double>> rep_share;
  std::optional<std::vector<double>> x;
  std::optional<std::vector<double>> y;

  std::size_t size() const noexcept { return population.size(); }
  bool has_coordinates() const noexcept { return x.has_value() && y.has_value(); }

  // Restriction to the given parent vertices, in that order.
  VertexAttributes subset(std::span<const Vertex> vertices) const {
    VertexAttributes out;
    auto pick = [&](const std::vector<double>& src) {
      std::vector<double> r;
      r.reserve(vertices.size());
      for (Vertex v : vertices) r.push_back(src.at(v));
      return r;
    };
    for (Vertex v : vertices) out.population.push_back(population.at(v));
    if (rep_share) out.rep_share = pick(*rep_share);
    if (x) out.x = pick(*x);
    if (y) out.y = pick(*y);
    return out;
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view tok, const std::string& context) {
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || tok.empty()) {
    throw DataError(context + ": cannot parse '" + std::string(tok) + "'");
  }
  return value;
}

inline double parse_real(std::string_view tok, const std::string& context) {
  // from_chars for double is incomplete on some toolchains.
  std::string s(tok);
  std::size_t used = 0;
  double value = 0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) throw DataError(context + ": cannot parse '" + s + "'");
  return value;
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return in;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  return out;
}

}  // namespace detail

inline Graph read_graph(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&]() -> std::optional<std::string_view> {
    while (std::getline(in, line)) {
      ++lineno;
      auto t = detail::trim(line);
      if (!t.empty()) return t;
    }
    return std::nullopt;
  };
  auto header = next_line();
  if (!header) throw DataError("graph file is empty");
  std::istringstream hs{std::string(*header)};
  std::size_t n = 0, m = 0;
  if (!(hs >> n >> m)) throw DataError("line " + std::to_string(lineno) + ": expected 'n m'");
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  edges.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    auto l = next_line();
    if (!l) throw DataError("graph file ends after " + std::to_string(i) + " of " + std::to_string(m) + " edges");
    std::istringstream ls{std::string(*l)};
    std::size_t u = 0, v = 0;
    std::string extra;
    if (!(ls >> u >> v) || (ls >> extra)) throw DataError("line " + std::to_string(lineno) + ": expected 'u v'");
    edges.emplace_back(u, v);
  }
  if (next_line()) throw DataError("line " + std::to_string(lineno) + ": more edges than declared");
  try {
    return build_graph(n, std::span<const std::pair<std::size_t, std::size_t>>(edges));
  } catch (const DataError& e) {
    // Edge k sits on line k + 1 when the file has no blank lines.
    throw DataError(std::string(e.what()) + " (graph edge list)");
  }
}

inline Graph load_graph(const std::string& path) {
  auto in = detail::open_in(path);
  return read_graph(in);
}

inline void write_graph(std::ostream& out, const Graph& g) {
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) out << e.u + 1 << ' ' << e.v + 1 << '\n';
}

// `expected_vertices`, when given, fixes n and makes any missing vertex an
// error. Zero populations are rejected unless `allow_zero_population`.
inline VertexAttributes read_attributes(std::istream& in, std::optional<std::size_t> expected_vertices = {},
                                        bool allow_zero_population = false) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("attribute file is empty");
  auto cols = detail::split(detail::trim(line), ',');
  int c_vertex = -1, c_pop = -1, c_rep = -1, c_x = -1, c_y = -1;
  for (int i = 0; i < static_cast<int>(cols.size()); ++i) {
    if (cols[i] == "vertex") c_vertex = i;
    else if (cols[i] == "population") c_pop = i;
    else if (cols[i] == "rep_share") c_rep = i;
    else if (cols[i] == "x") c_x = i;
    else if (cols[i] == "y") c_y = i;
    else throw DataError("attribute header: unknown column '" + std::string(cols[i]) + "'");
  }
  if (c_vertex < 0 || c_pop < 0) throw DataError("attribute header must contain 'vertex' and 'population'");
  if ((c_x < 0) != (c_y < 0)) throw DataError("attribute header: 'x' and 'y' must appear together");

  struct Row {
    std::uint64_t pop;
    double rep, x, y;
  };
  std::vector<std::optional<Row>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = detail::trim(line);
    if (t.empty()) continue;
    auto f = detail::split(t, ',');
    const std::string ctx = "attribute line " + std::to_string(lineno);
    if (f.size() != cols.size()) throw DataError(ctx + ": expected " + std::to_string(cols.size()) + " fields");
    auto v = detail::parse_number<std::size_t>(f[c_vertex], ctx);
    if (v == 0) throw DataError(ctx + ": vertex indices are 1-based");
    if (expected_vertices && v > *expected_vertices) {
      throw DataError(ctx + ": vertex " + std::to_string(v) + " exceeds vertex count " +
                      std::to_string(*expected_vertices));
    }
    if (rows.size() < v) rows.resize(v);
    if (rows[v - 1]) throw DataError(ctx + ": vertex " + std::to_string(v) + " listed twice");
    Row r{detail::parse_number<std::uint64_t>(f[c_pop], ctx), 0, 0, 0};
    if (r.pop == 0 && !allow_zero_population) {
      throw DataError(ctx + ": vertex " + std::to_string(v) + " has zero population");
    }
    if (c_rep >= 0) {
      r.rep = detail::parse_real(f[c_rep], ctx);
      if (!(r.rep >= 0.0 && r.rep <= 1.0)) throw DataError(ctx + ": rep_share outside [0,1]");
    }
    if (c_x >= 0) {
      r.x = detail::parse_real(f[c_x], ctx);
      r.y = detail::parse_real(f[c_y], ctx);
    }
    rows[v - 1] = r;
  }
  if (expected_vertices && rows.size() < *expected_vertices) rows.resize(*expected_vertices);
  VertexAttributes a;
  if (c_rep >= 0) a.rep_share.emplace();
  if (c_x >= 0) {
    a.x.emplace();
    a.y.emplace();
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i]) throw DataError("attribute file: missing vertex " + std::to_string(i + 1));
    a.population.push_back(rows[i]->pop);
    if (a.rep_share) a.rep_share->push_back(rows[i]->rep);
    if (a.x) {
      a.x->push_back(rows[i]->x);
      a.y->push_back(rows[i]->y);
    }
  }
  return a;
}

inline VertexAttributes load_attributes(const std::string& path, std::optional<std::size_t> expected_vertices = {},
                                        bool allow_zero_population = false) {
  auto in = detail::open_in(path);
  return read_attributes(in, expected_vertices, allow_zero_population);
}

inline void write_attributes(std::ostream& out, const VertexAttributes& a) {
  out << "vertex,population";
  if (a.rep_share) out << ",rep_share";
  if (a.has_coordinates()) out << ",x,y";
  out << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < a.size(); ++i) {
    out << i + 1 << ',' << a.population[i];
    if (a.rep_share) out << ',' << (*a.rep_share)[i];
    if (a.has_coordinates()) out << ',' << (*a.x)[i] << ',' << (*a.y)[i];
    out << '\n';
  }
}

inline void write_plan(std::ostream& out, const Partition& pt) {
  const auto& l = pt.labels();
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (i) out << ',';
    out << l[i];
  }
  out << '\n';
}

inline void write_plans(std::ostream& out, std::span<const Partition> plans) {
  for (const auto& pt : plans) write_plan(out, pt);
}

// Reads canonical plans. If `vertex_count` is given every line must match it.
inline std::vector<Partition> read_plans(std::istream& in, std::optional<std::size_t> vertex_count = {}) {
  std::vector<Partition> plans;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = detail::trim(line);
    if (t.empty()) continue;
    const std::string ctx = "plan line " + std::to_string(lineno);
    auto fields = detail::split(t, ',');
    if (vertex_count && fields.size() != *vertex_count) {
      throw DataError(ctx + ": " + std::to_string(fields.size()) + " labels, expected " +
                      std::to_string(*vertex_count));
    }
    if (!plans.empty() && fields.size() != plans.front().vertex_count()) {
      throw DataError(ctx + ": vertex count differs from previous plans");
    }
    std::vector<std::uint32_t> labels;
    labels.reserve(fields.size());
    for (auto f : fields) labels.push_back(detail::parse_number<std::uint32_t>(f, ctx));
    try {
      plans.push_back(Partition::from_canonical(std::move(labels)));
    } catch (const DataError& e) {
      throw DataError(ctx + ": " + e.what());
    }
  }
  return plans;
}

inline std::vector<Partition> load_plans(const std::string& path, std::optional<std::size_t> vertex_count = {}) {
  auto in = detail::open_in(path);
  return read_plans(in, vertex_count);
}

inline void save_plans(const std::string& path, std::span<const Partition> plans) {
  auto out = detail::open_out(path);
  write_plans(out, plans);
}

// Edge order file: permutation of 1..m, one per line. Returned 0-based.
inline std::vector<EdgeIndex> read_order(std::istream& in, std::size_t edge_count) {
  std::vector<EdgeIndex> perm;
  std::vector<char> seen(edge_count, 0);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = detail::trim(line);
    if (t.empty()) continue;
    const std::string ctx = "order line " + std::to_string(lineno);
    auto e = detail::parse_number<std::size_t>(t, ctx);
    if (e == 0 || e > edge_count) throw DataError(ctx + ": edge index out of range");
    if (seen[e - 1]) throw DataError(ctx + ": edge " + std::to_string(e) + " repeated");
    seen[e - 1] = 1;
    perm.push_back(static_cast<EdgeIndex>(e - 1));
  }
  if (perm.size() != edge_count) throw DataError("order file lists " + std::to_string(perm.size()) + " of " +
                                                 std::to_string(edge_count) + " edges");
  return perm;
}

inline void write_order(std::ostream& out, std::span<const EdgeIndex> perm) {
  for (EdgeIndex e : perm) out << e + 1 << '\n';
}

}  // namespace partzdd
