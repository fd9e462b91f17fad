#pragma once

// Side-by-side replay of f-words in the string model and the geometric model.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "geometric.hpp"
#include "string_model.hpp"

namespace qc {

struct WeightCount {
  std::vector<int> dims;
  std::size_t reached = 0;
  std::size_t orbits = 0;  // multisegments with these dims
};

struct IsoReport {
  int rank = 0;
  std::uint64_t orientation = 0;
  int depth = 0;
  std::size_t elements = 0;
  std::vector<WeightCount> per_weight;
  std::vector<std::string> mismatches;
  bool ok() const noexcept { return mismatches.empty(); }
};

/// Replays every f-word of length <= depth from u in both models and compares wt, eps_i, phi_i,
/// eps_i^* and the e_i images, then compares the number of elements per weight with the orbit count.
inline IsoReport model_isomorphism_check(const GeometricModel& gm, int depth) {
  if (depth < 0) throw InputError("depth must be nonnegative");
  IsoReport rep;
  rep.rank = gm.graph().vertex_count();
  rep.orientation = gm.orientation_mask();
  rep.depth = depth;
  StringModel sm(gm.type_a().graph());
  const int r = rep.rank;
  std::map<OrbitKey, StringElement> to_str;
  std::map<StringElement, OrbitKey> to_geo;
  auto word = [&](const OrbitKey& k) {
    std::string s;
    for (Vertex v : sm.word_of(to_str.at(k))) s += (s.empty() ? "" : " ") + std::to_string(v + 1);
    return s;
  };
  auto fail = [&](const OrbitKey& k, const std::string& what) {
    if (rep.mismatches.size() < 50) rep.mismatches.push_back("[" + word(k) + "] " + what);
  };
  std::vector<std::pair<OrbitKey, StringElement>> layer{{gm.highest(), sm.highest()}};
  to_str.emplace(gm.highest(), sm.highest());
  to_geo.emplace(sm.highest(), gm.highest());
  std::vector<OrbitKey> order{gm.highest()};
  for (int d = 0; d < depth; ++d) {
    std::vector<std::pair<OrbitKey, StringElement>> next;
    for (const auto& [k, s] : layer)
      for (Vertex i = 0; i < r; ++i) {
        OrbitKey k2 = *gm.f(k, i);
        StringElement s2 = *sm.f(s, i);
        auto a = to_str.find(k2);
        auto b = to_geo.find(s2);
        if ((a == to_str.end()) != (b == to_geo.end()) || (a != to_str.end() && !(a->second == s2)) ||
            (b != to_geo.end() && !(b->second == k2))) {
          fail(k, "f_" + std::to_string(i + 1) + " images are not matched consistently");
          continue;
        }
        if (a != to_str.end()) continue;
        to_str.emplace(k2, s2);
        to_geo.emplace(s2, k2);
        order.push_back(k2);
        next.emplace_back(k2, s2);
      }
    layer = std::move(next);
  }
  rep.elements = order.size();
  std::map<std::vector<int>, std::size_t> reached;
  for (const OrbitKey& k : order) {
    const StringElement& s = to_str.at(k);
    ++reached[k.dims().values()];
    if (gm.wt(k) != sm.wt(s)) fail(k, "wt differs");
    for (Vertex i = 0; i < r; ++i) {
      const std::string at = " at " + std::to_string(i + 1);
      if (gm.eps(k, i) != sm.eps(s, i)) fail(k, "eps differs" + at);
      if (gm.phi(k, i) != sm.phi(s, i)) fail(k, "phi differs" + at);
      if (gm.eps_star(k, i) != sm.star_eps(s, i)) fail(k, "eps* differs" + at);
      auto ek = gm.e(k, i);
      auto es = sm.e(s, i);
      if (ek.has_value() != es.has_value()) {
        fail(k, "e is null in one model only" + at);
      } else if (ek && (!to_str.count(*ek) || !(to_str.at(*ek) == *es))) {
        fail(k, "e images differ" + at);
      }
    }
  }
  for (const auto& [d, n] : reached) {
    WeightCount wc{d, n, gm.type_a().enumerate_orbits(DimVector(d), gm.orientation_mask()).size()};
    if (wc.reached != wc.orbits) {
      if (rep.mismatches.size() < 50)
        rep.mismatches.push_back("dims " + detail::weight_str(d) + ": reached " + std::to_string(wc.reached) + ", orbits " +
                                 std::to_string(wc.orbits));
    }
    rep.per_weight.push_back(std::move(wc));
  }
  return rep;
}

}  // namespace qc
