/* Copyright 2026 The lca Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Line-oriented text formats. '#' starts a comment, blank lines are skipped.
//
//   graph n=<n>                      then one "u v" per edge
//   hypergraph m=<m> n=<n> k=<k>     then one "e v1 ... vk" per edge
//   p cnf <vars> <clauses>           DIMACS; literals are 1-based, 0-terminated
//   choices balls=<n> bins=<m> d=<d> then one "ball bin1 ... bind" per ball
//
// Loaders validate every structural invariant and throw ParseError with the
// offending line number.

#include <charconv>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lca/error.hpp"
#include "lca/graph.hpp"

namespace lca::io {

namespace detail {

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
};

inline std::vector<Line> tokenize(std::istream& in) {
  std::vector<Line> lines;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ss(raw);
    Line line{number, {}};
    std::string tok;
    while (ss >> tok) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

inline std::int64_t to_int(const std::string& tok, std::size_t line) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) throw ParseError(line, "expected an integer, got '" + tok + "'");
  return value;
}

inline std::uint64_t to_index(const std::string& tok, std::size_t line) {
  const auto v = to_int(tok, line);
  if (v < 0) throw ParseError(line, "negative value '" + tok + "'");
  return static_cast<std::uint64_t>(v);
}

// Parses "<keyword> a=1 b=2 ..." and returns the named values.
inline std::map<std::string, std::uint64_t> header(const Line& line, std::string_view keyword,
                                                   std::initializer_list<std::string_view> keys) {
  if (line.tokens.front() != keyword) throw ParseError(line.number, "expected header '" + std::string(keyword) + "'");
  std::map<std::string, std::uint64_t> out;
  for (std::size_t i = 1; i < line.tokens.size(); ++i) {
    const auto& tok = line.tokens[i];
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ParseError(line.number, "malformed header field '" + tok + "'");
    out[tok.substr(0, eq)] = to_index(tok.substr(eq + 1), line.number);
  }
  for (auto key : keys) {
    if (!out.count(std::string(key))) throw ParseError(line.number, "header missing '" + std::string(key) + "='");
  }
  return out;
}

template <typename Build>
auto wrap(std::size_t line, Build build) {
  try {
    return build();
  } catch (const InvalidArgument& e) {
    throw ParseError(line, e.what());
  }
}

}  // namespace detail

inline LocalGraph read_graph(std::istream& in) {
  const auto lines = detail::tokenize(in);
  if (lines.empty()) throw ParseError(0, "empty input, expected 'graph n=<n>'");
  const auto n = detail::header(lines[0], "graph", {"n"}).at("n");
  std::vector<std::pair<VertexId, VertexId>> edges;
  std::map<std::pair<VertexId, VertexId>, std::size_t> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& l = lines[i];
    if (l.tokens.size() != 2) throw ParseError(l.number, "expected 'u v'");
    const auto u = detail::to_index(l.tokens[0], l.number);
    const auto v = detail::to_index(l.tokens[1], l.number);
    if (u >= n || v >= n) throw ParseError(l.number, "vertex out of range");
    if (u == v) throw ParseError(l.number, "self-loop");
    const auto key = std::make_pair(static_cast<VertexId>(std::min(u, v)), static_cast<VertexId>(std::max(u, v)));
    if (auto [it, fresh] = seen.emplace(key, l.number); !fresh) {
      throw ParseError(l.number, "duplicate edge (first on line " + std::to_string(it->second) + ")");
    }
    edges.push_back(key);
  }
  return detail::wrap(lines[0].number, [&] { return LocalGraph::from_edges(n, edges); });
}

inline void write_graph(std::ostream& out, const LocalGraph& g) {
  out << "graph n=" << g.size() << '\n';
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

inline Hypergraph read_hypergraph(std::istream& in) {
  const auto lines = detail::tokenize(in);
  if (lines.empty()) throw ParseError(0, "empty input, expected 'hypergraph m=<m> n=<n> k=<k>'");
  const auto h = detail::header(lines[0], "hypergraph", {"m", "n", "k"});
  const auto m = h.at("m"), n = h.at("n"), k = h.at("k");
  std::vector<std::optional<std::vector<VertexId>>> edges(n);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& l = lines[i];
    if (l.tokens.size() != k + 1) throw ParseError(l.number, "expected 'e v1 ... v" + std::to_string(k) + "'");
    const auto e = detail::to_index(l.tokens[0], l.number);
    if (e >= n) throw ParseError(l.number, "edge id out of range");
    if (edges[e]) throw ParseError(l.number, "edge " + std::to_string(e) + " defined twice");
    std::vector<VertexId> members;
    for (std::size_t j = 1; j <= k; ++j) {
      const auto v = detail::to_index(l.tokens[j], l.number);
      if (v >= m) throw ParseError(l.number, "vertex out of range");
      members.push_back(static_cast<VertexId>(v));
    }
    edges[e] = std::move(members);
  }
  std::vector<std::vector<VertexId>> sets;
  for (std::size_t e = 0; e < n; ++e) {
    if (!edges[e]) throw ParseError(lines.back().number, "edge " + std::to_string(e) + " missing");
    sets.push_back(std::move(*edges[e]));
  }
  return detail::wrap(lines[0].number, [&] { return Hypergraph(m, std::move(sets)); });
}

inline void write_hypergraph(std::ostream& out, const Hypergraph& h) {
  out << "hypergraph m=" << h.vertex_count() << " n=" << h.set_count() << " k=" << h.uniformity() << '\n';
  for (std::uint32_t e = 0; e < h.set_count(); ++e) {
    out << e;
    for (auto v : h.members(e)) out << ' ' << v;
    out << '\n';
  }
}

inline CnfFormula read_dimacs(std::istream& in) {
  const auto lines = detail::tokenize(in);
  std::optional<std::uint64_t> vars, clause_count;
  std::vector<std::vector<Literal>> clauses;
  std::vector<Literal> current;
  std::size_t last = 0;
  for (const auto& l : lines) {
    last = l.number;
    if (l.tokens[0] == "c") continue;
    if (l.tokens[0] == "p") {
      if (vars) throw ParseError(l.number, "second problem line");
      if (l.tokens.size() != 4 || l.tokens[1] != "cnf") throw ParseError(l.number, "expected 'p cnf <vars> <clauses>'");
      vars = detail::to_index(l.tokens[2], l.number);
      clause_count = detail::to_index(l.tokens[3], l.number);
      continue;
    }
    if (!vars) throw ParseError(l.number, "clause before 'p cnf' line");
    for (const auto& tok : l.tokens) {
      const auto lit = detail::to_int(tok, l.number);
      if (lit == 0) {
        if (current.empty()) throw ParseError(l.number, "empty clause");
        clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      const auto var = static_cast<std::uint64_t>(lit < 0 ? -lit : lit);
      if (var > *vars) throw ParseError(l.number, "variable " + std::to_string(var) + " exceeds declared count");
      current.push_back(Literal{static_cast<VertexId>(var - 1), lit < 0});
    }
  }
  if (!vars) throw ParseError(last, "missing 'p cnf' line");
  if (!current.empty()) throw ParseError(last, "last clause not terminated by 0");
  if (clauses.size() != *clause_count) {
    throw ParseError(last, "declared " + std::to_string(*clause_count) + " clauses, found " +
                               std::to_string(clauses.size()));
  }
  return detail::wrap(last, [&] { return CnfFormula(*vars, std::move(clauses)); });
}

inline void write_dimacs(std::ostream& out, const CnfFormula& f) {
  out << "p cnf " << f.vertex_count() << ' ' << f.set_count() << '\n';
  for (const auto& clause : f.sets()) {
    for (const auto& lit : clause) out << (lit.negated ? "-" : "") << (lit.var + 1) << ' ';
    out << "0\n";
  }
}

inline BipartiteChoices read_choices(std::istream& in) {
  const auto lines = detail::tokenize(in);
  if (lines.empty()) throw ParseError(0, "empty input, expected 'choices balls=<n> bins=<m> d=<d>'");
  const auto h = detail::header(lines[0], "choices", {"balls", "bins", "d"});
  const auto n = h.at("balls"), m = h.at("bins"), d = h.at("d");
  std::vector<std::optional<std::vector<std::uint32_t>>> rows(n);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& l = lines[i];
    if (l.tokens.size() != d + 1) throw ParseError(l.number, "expected 'ball bin1 ... bin" + std::to_string(d) + "'");
    const auto ball = detail::to_index(l.tokens[0], l.number);
    if (ball >= n) throw ParseError(l.number, "ball id out of range");
    if (rows[ball]) throw ParseError(l.number, "ball " + std::to_string(ball) + " defined twice");
    std::vector<std::uint32_t> row;
    for (std::size_t j = 1; j <= d; ++j) {
      const auto bin = detail::to_index(l.tokens[j], l.number);
      if (bin >= m) throw ParseError(l.number, "bin out of range");
      row.push_back(static_cast<std::uint32_t>(bin));
    }
    rows[ball] = std::move(row);
  }
  std::vector<std::uint32_t> flat;
  for (std::size_t b = 0; b < n; ++b) {
    if (!rows[b]) throw ParseError(lines.back().number, "ball " + std::to_string(b) + " missing");
    flat.insert(flat.end(), rows[b]->begin(), rows[b]->end());
  }
  return detail::wrap(lines[0].number, [&] { return BipartiteChoices(n, m, d, std::move(flat)); });
}

inline void write_choices(std::ostream& out, const BipartiteChoices& bc) {
  out << "choices balls=" << bc.n_balls() << " bins=" << bc.m_bins() << " d=" << bc.d() << '\n';
  for (std::uint32_t b = 0; b < bc.n_balls(); ++b) {
    out << b;
    for (auto bin : bc.choices_of(b)) out << ' ' << bin;
    out << '\n';
  }
}

// One capacity per line, in bin order.
inline std::vector<std::uint64_t> read_capacities(std::istream& in) {
  std::vector<std::uint64_t> caps;
  for (const auto& l : detail::tokenize(in)) {
    if (l.tokens.size() != 1) throw ParseError(l.number, "expected one capacity per line");
    caps.push_back(detail::to_index(l.tokens[0], l.number));
  }
  return caps;
}

}  // namespace lca::io
