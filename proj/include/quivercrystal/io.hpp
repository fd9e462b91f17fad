#pragma once

// JSON reports and text parsers for graphs, dimension vectors and words. Vertices are 1-based
// in every external format.

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "schubert.hpp"
#include "verify.hpp"
#include "xcheck.hpp"

namespace qc::io {

using json = nlohmann::ordered_json;

/// Parse failure with a 1-based position in the input.
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : InputError(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_, column_;
};

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < offset && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

/// Nonnegative integers separated by commas and/or whitespace.
inline std::vector<int> parse_integers(const std::string& text, const char* what) {
  std::vector<int> out;
  std::size_t k = 0;
  bool need_value = false;
  while (k < text.size()) {
    const char c = text[k];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++k;
    } else if (c == ',') {
      if (out.empty() || need_value) {
        auto [l, col] = line_column(text, k);
        throw ParseError(std::string("unexpected ',' in ") + what, l, col);
      }
      need_value = true;
      ++k;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = k;
      long long v = 0;
      while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
        v = v * 10 + (text[k] - '0');
        if (v > 1'000'000) {
          auto [l, col] = line_column(text, start);
          throw ParseError(std::string("number too large in ") + what, l, col);
        }
        ++k;
      }
      out.push_back(static_cast<int>(v));
      need_value = false;
    } else {
      auto [l, col] = line_column(text, k);
      throw ParseError(std::string("unexpected character '") + c + "' in " + what, l, col);
    }
  }
  if (need_value) {
    auto [l, col] = line_column(text, text.size());
    throw ParseError(std::string("trailing ',' in ") + what, l, col);
  }
  return out;
}

}  // namespace detail

inline DimVector parse_dims(const std::string& text) { return DimVector(detail::parse_integers(text, "dimension vector")); }

/// 1-based vertex list such as "2 1 3" or "2,1,3"; converted to 0-based.
inline OperatorWord parse_word(const std::string& text, int rank) {
  OperatorWord w;
  for (int v : detail::parse_integers(text, "word")) {
    if (v < 1 || v > rank)
      throw InputError("vertex " + std::to_string(v) + " out of range 1.." + std::to_string(rank));
    w.push_back(v - 1);
  }
  return w;
}

/// Graph plus orientation as read from the command line.
struct GraphSpec {
  GraphPtr graph;
  Orientation orientation;
  bool type_a = false;
  std::uint64_t mask = 0;  // bitmask when type_a
};

/// "A<r>" names the path graph with every arrow k+1 -> k unless a mask is given.
inline GraphSpec graph_from_name(const std::string& name, std::uint64_t mask = 0) {
  if (name.size() < 2 || (name[0] != 'A' && name[0] != 'a'))
    throw InputError("unknown graph name '" + name + "' (expected A<rank> or a JSON file)");
  for (std::size_t k = 1; k < name.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(name[k]))) throw InputError("unknown graph name '" + name + "'");
  const int r = std::stoi(name.substr(1));
  if (r < 1 || r > 63) throw InputError("type A rank must be in 1..63");
  if (r > 1 && (mask >> (r - 1))) throw InputError("orientation mask has bits beyond the edges of " + name);
  GraphSpec s;
  s.graph = std::make_shared<QuiverGraph>(QuiverGraph::type_a(r));
  s.orientation = Orientation::from_bitmask(*s.graph, mask);
  s.type_a = true;
  s.mask = mask;
  return s;
}

/// {"vertices": n, "edges": [[u, v], ...], "orientation": [[from, to], ...]}, 1-based.
inline GraphSpec graph_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    auto [l, col] = detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("invalid graph JSON", l, col);
  }
  try {
    const int n = j.at("vertices").get<int>();
    std::vector<std::pair<Vertex, Vertex>> edges, directed;
    for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<int>() - 1, e.at(1).get<int>() - 1);
    GraphSpec s;
    s.graph = std::make_shared<QuiverGraph>(QuiverGraph::from_edges(n, edges));
    if (j.contains("orientation")) {
      for (const auto& e : j.at("orientation")) directed.emplace_back(e.at(0).get<int>() - 1, e.at(1).get<int>() - 1);
    } else {
      directed = edges;
    }
    s.orientation = Orientation::from_directed(*s.graph, directed);
    s.type_a = s.graph->is_type_a() && *s.graph == QuiverGraph::type_a(n);
    if (s.type_a) s.mask = s.orientation.bitmask();
    return s;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed graph description: ") + e.what());
  }
}

inline GraphSpec parse_graph(const std::string& spec, std::uint64_t mask = 0) {
  if (spec.find(".json") != std::string::npos) {
    std::ifstream in(spec);
    if (!in) throw InputError("cannot open graph file " + spec);
    std::stringstream buf;
    buf << in.rdbuf();
    return graph_from_json_text(buf.str());
  }
  return graph_from_name(spec, mask);
}

inline json orientation_json(const QuiverGraph& g, const Orientation& o) {
  json arr = json::array();
  for (ArrowId t : o.arrows()) arr.push_back({g.arrow(t).out + 1, g.arrow(t).in + 1});
  return arr;
}

inline json orbit_key_json(const OrbitKey& k) {
  QuiverGraph g = QuiverGraph::type_a(k.rank);
  json ranks = json::array(), segments = json::array();
  for (Vertex a = 0; a < k.rank; ++a)
    for (Vertex b = a; b < k.rank; ++b) ranks.push_back({a + 1, b + 1, k.ranks.at(a, b)});
  const Multisegment ms = k.multisegment();
  for (const auto& [iv, m] : ms.parts()) segments.push_back({iv.a + 1, iv.b + 1, m});
  return json{{"orientation", orientation_json(g, Orientation::from_bitmask(g, k.orientation))},
              {"dims", k.dims().values()},
              {"ranks", ranks},
              {"multisegment", segments}};
}

/// dims, p and every arrow's matrix in row-major order.
inline json representation_json(const Representation& e) {
  const auto& g = e.graph();
  json arrows = json::array();
  for (ArrowId t = 0; t < g.arrow_count(); ++t) {
    if (e.kind() == PointKind::kE && !e.orientation().contains(t)) continue;
    const Matrix& m = e.map(t);
    std::vector<std::uint32_t> entries;
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) entries.push_back(m(r, c));
    arrows.push_back({{"from", g.arrow(t).out + 1}, {"to", g.arrow(t).in + 1}, {"rows", m.rows()}, {"cols", m.cols()},
                      {"entries", entries}});
  }
  return json{{"dims", e.dims().values()}, {"p", e.field().modulus()}, {"arrows", arrows}};
}

inline json move_json(const Move& m) {
  const char* kind = m.kind == MoveKind::kCrt1 ? "crt1" : m.kind == MoveKind::kCrt2 ? "crt2" : "crt1*";
  return json{{"move", kind}, {"i", m.i + 1}};
}

inline json verdict_json(const PairVerdict& v) {
  json j{{"outcome", outcome_name(v.outcome)}, {"states_visited", v.states_visited}, {"max_depth", v.max_depth}};
  if (v.outcome == Outcome::kEliminated) {
    json w = json::array();
    for (const Move& m : v.witness) w.push_back(move_json(m));
    j["witness"] = w;
    j["eliminating_vertex"] = v.eliminating_vertex + 1;
    j["by_star"] = v.eliminated_by_star;
  }
  if (!v.reason.empty()) j["reason"] = v.reason;
  return j;
}

inline json config_json(const GeoConfig& geo) {
  return json{{"seeds", {{"sampling", geo.seed}}}, {"prime", geo.primes.front()}, {"primes", geo.primes}};
}

inline json conjecture_json(const ConjectureReport& r) {
  json survivors = json::array(), inconclusive = json::array();
  for (const auto& s : r.survivors)
    survivors.push_back({{"w", s.w}, {"b2_key", orbit_key_json(s.b2)}, {"reachable", s.reachable},
                         {"b2_is_flag_pair", s.flag_pair}});
  for (const auto& s : r.inconclusive)
    inconclusive.push_back({{"w", s.w}, {"b2_key", orbit_key_json(s.b2)}, {"reason", s.reason}});
  return json{{"command", "check"},
              {"n", r.n},
              {"candidates", r.candidates},
              {"strategy", r.strategy},
              {"budget", r.budget},
              {"pairs_total", r.pairs_total},
              {"eliminated", r.eliminated},
              {"survivors", survivors},
              {"inconclusive", inconclusive},
              {"seeds", {{"sampling", r.seed}}},
              {"prime", r.primes.empty() ? 0u : r.primes.front()},
              {"primes", r.primes},
              {"runtime_ms", r.runtime_ms}};
}

inline json a5_json(const a5::Report& r, const GeoConfig& geo) {
  json checks{{"word_b_matches_B0", r.word_b_matches},
              {"word_b_prime_matches_B0_prime", r.word_b_prime_matches},
              {"string_model_replay_matches", r.string_replay_matches},
              {"slice_samples", r.slice_samples},
              {"slice_points_in_orbit", r.slice_in_orbit},
              {"slice_products_vanish", r.slice_products_vanish},
              {"slice_rank_conditions", r.slice_rank_conditions},
              {"B0_prime_in_slice", r.b0_prime_in_slice},
              {"B0_prime_in_orbit", r.b0_prime_in_orbit},
              {"tangent_rank", r.tangent_rank},
              {"polar_samples", r.polar_samples},
              {"polar_vanishing", r.polar_vanishing},
              {"control_samples", r.control_samples},
              {"control_nonvanishing", r.control_nonvanishing}};
  json survivors = json::array();
  if (r.verdict.outcome == Outcome::kSurvives)
    survivors.push_back({{"b_key", orbit_key_json(r.key_b)}, {"b2_key", orbit_key_json(r.key_b_prime)},
                         {"reachable", r.verdict.states_visited}});
  return json{{"command", "verify-a5"},
              {"ok", r.ok()},
              {"word_b", a5::kWordB},
              {"word_b_prime", a5::kWordBPrime},
              {"b_key", orbit_key_json(r.key_b)},
              {"b_prime_key", orbit_key_json(r.key_b_prime)},
              {"checks", checks},
              {"verdict", verdict_json(r.verdict)},
              {"survivors", survivors},
              {"seeds", {{"slice", r.seed}, {"sampling", geo.seed}}},
              {"prime", r.prime}};
}

inline json a8_json(const a8::Report& r) {
  json survivors = json::array();
  if (r.verdict.outcome == Outcome::kSurvives)
    survivors.push_back({{"w", r.w}, {"b2_key", orbit_key_json(r.key_w_prime)}, {"reachable", r.verdict.states_visited}});
  return json{{"command", "verify-a8"},
              {"ok", r.ok()},
              {"w", r.w},
              {"w_prime", r.w_prime},
              {"table_w", r.table_w},
              {"table_w_prime", r.table_w_prime},
              {"table_w_matches", r.table_w_matches},
              {"table_w_prime_matches", r.table_w_prime_matches},
              {"w_key", orbit_key_json(r.key_w)},
              {"w_prime_key", orbit_key_json(r.key_w_prime)},
              {"verdict", verdict_json(r.verdict)},
              {"survivors", survivors},
              {"seeds", {{"sampling", r.seed}}},
              {"prime", r.prime}};
}

inline json xcheck_json(const IsoReport& r, const GeoConfig& geo) {
  json weights = json::array();
  for (const auto& w : r.per_weight) weights.push_back({{"dims", w.dims}, {"reached", w.reached}, {"orbits", w.orbits}});
  QuiverGraph g = QuiverGraph::type_a(r.rank);
  return json{{"command", "xcheck"},
              {"ok", r.ok()},
              {"rank", r.rank},
              {"orientation", orientation_json(g, Orientation::from_bitmask(g, r.orientation))},
              {"depth", r.depth},
              {"elements", r.elements},
              {"per_weight", weights},
              {"mismatches", r.mismatches},
              {"seeds", {{"sampling", geo.seed}}},
              {"prime", geo.primes.front()}};
}

/// Report text without the runtime field, for byte comparisons.
inline std::string stable_dump(json j) {
  j.erase("runtime_ms");
  return j.dump(2);
}

}  // namespace qc::io
