// qcrystal: command-line front end. Exit status 0 = verified / everything eliminated,
// 2 = survivors or inconclusive pairs, 1 = errors or a failed verification sub-check.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "quivercrystal/quivercrystal.hpp"

using namespace qc;
using io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitOpen = 2;

std::optional<unsigned long long> env_number(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  unsigned long long x = std::strtoull(v, &end, 0);
  if (*end) throw InputError(std::string("environment variable ") + name + " is not a number: " + v);
  return x;
}

struct Common {
  std::uint64_t seed = GeoConfig{}.seed;
  std::uint32_t prime = 0;  // 0 = default list
  std::string out;

  // Flag > environment > built-in default.
  GeoConfig geo() const {
    GeoConfig g;
    g.seed = seed;
    std::uint32_t p = prime;
    if (!p) {
      if (auto e = env_number("QCRYSTAL_PRIME")) {
        if (*e > 0xFFFFFFFFull) throw InputError("QCRYSTAL_PRIME does not fit in 32 bits");
        p = static_cast<std::uint32_t>(*e);
      }
    }
    if (p) {
      std::vector<std::uint32_t> primes{p};
      for (std::uint32_t q : GeoConfig{}.primes)
        if (q > p) primes.push_back(q);
      g.primes = primes;
    }
    return g;
  }

  void add_to(CLI::App* app, bool with_out = true) {
    app->add_option("--seed", seed, "sampling seed")->capture_default_str();
    app->add_option("--prime", prime, "field prime (default 2^31-1, env QCRYSTAL_PRIME)");
    if (with_out) app->add_option("--out", out, "write the JSON report here ('-' for stdout)");
  }

  void emit(const json& j) const {
    if (out.empty()) return;
    if (out == "-") {
      std::cout << j.dump(2) << '\n';
      return;
    }
    std::ofstream f(out);
    if (!f) throw InputError("cannot write " + out);
    f << j.dump(2) << '\n';
  }
};

std::size_t budget_or_env(std::size_t flag) {
  if (flag) return flag;
  if (auto e = env_number("QCRYSTAL_BUDGET")) return static_cast<std::size_t>(*e);
  return CheckerConfig{}.budget;
}

std::string segments_text(const Multisegment& ms) {
  std::string s;
  for (const auto& [iv, m] : ms.parts()) {
    if (!s.empty()) s += ' ';
    s += '[' + std::to_string(iv.a + 1) + (iv.a == iv.b ? "" : "," + std::to_string(iv.b + 1)) + ']';
    if (m > 1) s += '^' + std::to_string(m);
  }
  return s.empty() ? "0" : s;
}

std::string list_text(const std::vector<int>& v) {
  std::string s;
  for (int x : v) s += (s.empty() ? "" : " ") + std::to_string(x);
  return s;
}

std::string verdict_text(const PairVerdict& v) {
  std::string s = outcome_name(v.outcome);
  s += " after " + std::to_string(v.states_visited) + " states";
  if (v.outcome == Outcome::kEliminated) s += " (eps_" + std::to_string(v.eliminating_vertex + 1) + ")";
  if (!v.reason.empty()) s += " (" + v.reason + ")";
  return s;
}

int run_orbits(const std::string& graph, const std::string& dims_text, std::uint64_t mask, const Common& c) {
  io::GraphSpec gs = io::parse_graph(graph, mask);
  if (!gs.type_a) throw InputError("orbit enumeration needs a type A graph");
  DimVector dims = io::parse_dims(dims_text);
  TypeA ta(gs.graph->vertex_count());
  auto keys = ta.enumerate_orbits(dims, gs.mask);
  json list = json::array();
  std::cout << keys.size() << " orbits with dims " << list_text(dims.values()) << '\n';
  for (const auto& k : keys) {
    const long long d = ta.orbit_dimension(k);
    std::cout << "  dim " << d << "  " << segments_text(k.multisegment()) << '\n';
    json j = io::orbit_key_json(k);
    j["orbit_dimension"] = d;
    list.push_back(j);
  }
  c.emit(json{{"command", "orbits"}, {"dims", dims.values()}, {"count", keys.size()}, {"orbits", list}});
  return kExitOk;
}

int run_crystal(const std::string& word_text, const std::string& model, const std::string& graph, std::uint64_t mask,
                const Common& c) {
  int rank = 1;
  for (int v : io::detail::parse_integers(word_text, "word")) rank = std::max(rank, v);
  io::GraphSpec gs = graph.empty() ? io::graph_from_name("A" + std::to_string(rank), mask) : io::parse_graph(graph, mask);
  const int r = gs.graph->vertex_count();
  OperatorWord w = io::parse_word(word_text, r);
  json j{{"command", "crystal"}, {"model", model}, {"word", word_text}};
  std::string shape;
  auto per_vertex = [&](auto&& fn) {
    std::vector<json> v;
    for (Vertex i = 0; i < r; ++i) v.push_back(fn(i));
    return v;
  };
  auto ext = [](const ExtInt& x) -> json {
    if (x.is_finite()) return x.value();
    return "-inf";
  };
  if (model == "string") {
    StringModel sm(gs.graph);
    StringElement b = sm.element_of_word(w);
    j["weight"] = sm.wt(b);
    j["eps"] = per_vertex([&](Vertex i) { return ext(sm.eps(b, i)); });
    j["phi"] = per_vertex([&](Vertex i) { return ext(sm.phi(b, i)); });
    j["eps_star"] = per_vertex([&](Vertex i) { return json(sm.star_eps(b, i)); });
    j["string"] = b.coefficients();
    std::vector<int> reduced;
    for (Vertex v : sm.word_of(b)) reduced.push_back(v + 1);
    j["canonical_word"] = reduced;
    shape = "string   " + j["string"].dump();
  } else if (model == "geom") {
    if (!gs.type_a) throw InputError("the geometric model needs a type A graph");
    GeometricModel gm(r, gs.mask, c.geo());
    OrbitKey k = gm.element_of_word(w);
    j["weight"] = gm.wt(k);
    j["eps"] = per_vertex([&](Vertex i) { return ext(gm.eps(k, i)); });
    j["phi"] = per_vertex([&](Vertex i) { return ext(gm.phi(k, i)); });
    j["eps_star"] = per_vertex([&](Vertex i) { return json(gm.eps_star(k, i)); });
    j["key"] = io::orbit_key_json(k);
    j["representative"] = io::representation_json(gm.type_a().representative(k));
    shape = "orbit    " + segments_text(k.multisegment());
    j["seeds"] = {{"sampling", gm.config().seed}};
    j["prime"] = gm.config().primes.front();
  } else {
    throw InputError("unknown model '" + model + "' (expected geom or string)");
  }
  std::cout << "weight   " << j["weight"].dump() << '\n'
            << "eps      " << j["eps"].dump() << '\n'
            << "phi      " << j["phi"].dump() << '\n'
            << "eps*     " << j["eps_star"].dump() << '\n'
            << shape << '\n';
  c.emit(j);
  return kExitOk;
}

int run_check(int n, unsigned jobs, std::size_t budget, bool all_orbits, bool exhaustive, bool star, bool dfs,
              double time_limit, const Common& c) {
  ConjectureOptions opt;
  opt.jobs = jobs ? jobs : std::max(1u, std::thread::hardware_concurrency());
  opt.candidates = all_orbits ? Candidates::kAllOrbits : Candidates::kFlagPairs;
  opt.checker.budget = budget_or_env(budget);
  opt.checker.strategy = exhaustive ? Strategy::kExhaustive : Strategy::kReduceFirst;
  opt.checker.star_moves = star;
  opt.checker.order = dfs ? SearchOrder::kDepthFirst : SearchOrder::kBreadthFirst;
  opt.checker.time_limit_s = time_limit;
  opt.geo = c.geo();
  ConjectureReport rep = check_conjecture(n, opt);
  std::cout << "n = " << n << ", " << rep.candidates << ", " << rep.strategy << ": " << rep.pairs_total << " pairs, "
            << rep.eliminated << " eliminated, " << rep.survivors.size() << " survivors, " << rep.inconclusive.size()
            << " inconclusive (" << rep.runtime_ms << " ms)\n";
  for (const auto& s : rep.survivors)
    std::cout << "  survivor w = " << list_text(s.w) << "  b2 = " << segments_text(s.b2.multisegment()) << '\n';
  for (const auto& s : rep.inconclusive)
    std::cout << "  inconclusive w = " << list_text(s.w) << "  b2 = " << segments_text(s.b2.multisegment()) << ": "
              << s.reason << '\n';
  c.emit(io::conjecture_json(rep));
  return rep.survivors.empty() && rep.inconclusive.empty() ? kExitOk : kExitOpen;
}

CheckerConfig checker_config(std::size_t budget, bool star) {
  CheckerConfig cfg;
  cfg.budget = budget_or_env(budget);
  cfg.star_moves = star;
  return cfg;
}

int run_verify_a5(std::uint64_t slice_seed, int samples, std::size_t budget, const Common& c) {
  GeoConfig geo = c.geo();
  a5::Report rep = a5::verify(slice_seed, samples, geo, checker_config(budget, false));
  std::cout << "word b -> B0: " << (rep.word_b_matches ? "yes" : "NO") << '\n'
            << "word b' -> B0': " << (rep.word_b_prime_matches ? "yes" : "NO") << '\n'
            << "string model replay: " << (rep.string_replay_matches ? "yes" : "NO") << '\n'
            << "slice points in O_b: " << rep.slice_in_orbit << '/' << rep.slice_samples << '\n'
            << "slice rank conditions: " << rep.slice_rank_conditions << '/' << rep.slice_samples << '\n'
            << "B0' in slice and O_b': " << (rep.b0_prime_in_slice && rep.b0_prime_in_orbit ? "yes" : "NO") << '\n'
            << "polar f = 0: " << rep.polar_vanishing << '/' << rep.polar_samples
            << " (random covectors with f != 0: " << rep.control_nonvanishing << '/' << rep.control_samples << ")\n"
            << "check_pair(b, b'): " << verdict_text(rep.verdict) << '\n';
  c.emit(io::a5_json(rep, geo));
  if (!rep.checks_ok()) return kExitError;
  return rep.verdict.outcome == Outcome::kEliminated ? kExitOk : kExitOpen;
}

int run_verify_a8(std::size_t budget, const Common& c) {
  a8::Report rep = a8::verify(c.geo(), checker_config(budget, false));
  auto table = [](const std::vector<std::vector<int>>& t) {
    std::string s;
    for (const auto& row : t) s += "    " + list_text(row) + '\n';
    return s;
  };
  std::cout << "w  = " << list_text(rep.w) << '\n'
            << "w' = " << list_text(rep.w_prime) << '\n'
            << "table for w (" << (rep.table_w_matches ? "matches" : "DIFFERS") << "):\n"
            << table(rep.table_w) << "table for w' (" << (rep.table_w_prime_matches ? "matches" : "DIFFERS") << "):\n"
            << table(rep.table_w_prime) << "check_pair(w, w'): " << verdict_text(rep.verdict) << '\n';
  c.emit(io::a8_json(rep));
  if (!rep.table_w_matches || !rep.table_w_prime_matches) return kExitError;
  return rep.verdict.outcome == Outcome::kEliminated ? kExitOk : kExitOpen;
}

int run_xcheck(int rank, int depth, std::optional<std::uint64_t> mask, const Common& c) {
  if (rank < 1 || rank > 8) throw InputError("xcheck rank must be in 1..8");
  GeoConfig geo = c.geo();
  json runs = json::array();
  bool ok = true;
  const std::uint64_t masks = rank > 1 ? std::uint64_t{1} << (rank - 1) : 1;
  for (std::uint64_t m = 0; m < masks; ++m) {
    if (mask && *mask != m) continue;
    GeometricModel gm(rank, m, geo);
    IsoReport rep = model_isomorphism_check(gm, depth);
    std::cout << "A" << rank << " orientation " << m << ": " << rep.elements << " elements, "
              << (rep.ok() ? "models agree" : std::to_string(rep.mismatches.size()) + " mismatches") << '\n';
    for (const auto& s : rep.mismatches) std::cout << "  " << s << '\n';
    ok = ok && rep.ok();
    runs.push_back(io::xcheck_json(rep, geo));
  }
  if (runs.empty()) throw InputError("orientation mask out of range");
  c.emit(json{{"command", "xcheck"}, {"ok", ok}, {"runs", runs}});
  return ok ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quiver crystals and singular-support reductions"};
  app.require_subcommand(1);

  Common orbits_c, crystal_c, check_c, a5_c, a8_c, x_c;

  auto* orbits = app.add_subcommand("orbits", "enumerate orbits for a dimension vector");
  std::string graph = "A2", dims;
  std::uint64_t mask = 0;
  orbits->add_option("--graph", graph, "A<rank> or a graph JSON file")->capture_default_str();
  orbits->add_option("--dims", dims, "dimension vector, e.g. 2,4,4,4,2")->required();
  orbits->add_option("--orientation", mask, "bit e set = arrow e+1 -> e+2 (type A)");
  orbits_c.add_to(orbits);

  auto* crystal = app.add_subcommand("crystal", "crystal data of f_{i_1} ... f_{i_l} u");
  std::string word, model = "geom", cgraph;
  crystal->add_option("--word", word, "1-based vertices, rightmost acts first")->required();
  crystal->add_option("--model", model, "geom or string")->capture_default_str();
  crystal->add_option("--graph", cgraph, "A<rank> (default: smallest that fits the word)");
  crystal->add_option("--orientation", mask, "bit e set = arrow e+1 -> e+2");
  crystal_c.add_to(crystal);

  auto* check = app.add_subcommand("check", "reduce every pair (b_w, b2) for S_n");
  int n = 0;
  unsigned jobs = 1;
  std::size_t budget = 0;
  bool all_orbits = false, exhaustive = false, star = false, dfs = false;
  double time_limit = 0;
  check->add_option("--n", n, "flag dimension")->required()->check(CLI::Range(1, 10));
  check->add_option("--jobs", jobs, "worker threads (0 = all cores)")->capture_default_str();
  check->add_option("--budget", budget, "states per pair (default 1000000, env QCRYSTAL_BUDGET)");
  check->add_option("--time-limit", time_limit, "seconds per pair (0 = none)");
  check->add_flag("--all-orbits", all_orbits, "b2 ranges over every orbit, not only flag pairs");
  check->add_flag("--exhaustive", exhaustive, "follow every applicable move");
  check->add_flag("--star", star, "also use the starred criterion");
  check->add_flag("--dfs", dfs, "depth-first search order");
  check_c.add_to(check);

  auto* va5 = app.add_subcommand("verify-a5", "rank five pair: slice, polar and reduction checks");
  std::uint64_t slice_seed = 0x5A5A2024ull;
  int samples = 100;
  va5->add_option("--slice-seed", slice_seed, "seed for slice and polar sampling")->capture_default_str();
  va5->add_option("--samples", samples, "samples per check")->check(CLI::Range(1, 100000))->capture_default_str();
  va5->add_option("--budget", budget, "states (env QCRYSTAL_BUDGET)");
  a5_c.add_to(va5);

  auto* va8 = app.add_subcommand("verify-a8", "rank eight flag pair: Gr tables and reduction");
  va8->add_option("--budget", budget, "states (env QCRYSTAL_BUDGET)");
  a8_c.add_to(va8);

  auto* xcheck = app.add_subcommand("xcheck", "compare string and geometric models");
  int rank = 3, depth = 6;
  std::optional<std::uint64_t> xmask;
  xcheck->add_option("--rank", rank)->capture_default_str();
  xcheck->add_option("--depth", depth)->capture_default_str();
  xcheck->add_option("--orientation", xmask, "one orientation mask (default: all)");
  x_c.add_to(xcheck);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*orbits) return run_orbits(graph, dims, mask, orbits_c);
    if (*crystal) return run_crystal(word, model, cgraph, mask, crystal_c);
    if (*check) return run_check(n, jobs, budget, all_orbits, exhaustive, star, dfs, time_limit, check_c);
    if (*va5) return run_verify_a5(slice_seed, samples, budget, a5_c);
    if (*va8) return run_verify_a8(budget, a8_c);
    if (*xcheck) return run_xcheck(rank, depth, xmask, x_c);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
