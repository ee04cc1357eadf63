#pragma once

// Planar diagram (PD) codes for knots and the Wirtinger presentations they
// induce.  A PD code is a list of crossings X(a,b,c,d) read counterclockwise
// starting from the incoming under-strand; edges are numbered 1..2n along the
// knot.  Only single-component diagrams are accepted: at every crossing the
// under-strand must continue c = a+1 (mod 2n) and the over-strand must
// continue between b and d, which is exactly the consecutive-numbering
// property a one-component traversal produces.

#include <array>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "fibercheck/errors.hpp"
#include "fibercheck/presentation.hpp"

namespace fibercheck {

using PdCode = std::vector<std::array<int, 4>>;

inline PdCode parse_pd_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid PD JSON: ") + e.what());
  }
  if (!j.is_array()) throw ParseError("PD JSON must be an array of 4-element arrays");
  PdCode pd;
  for (const auto& x : j) {
    if (!x.is_array() || x.size() != 4)
      throw ParseError("each PD crossing must be an array of exactly 4 integers");
    std::array<int, 4> cr{};
    for (int i = 0; i < 4; ++i) {
      if (!x[static_cast<std::size_t>(i)].is_number_integer())
        throw ParseError("PD entries must be integers");
      cr[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)].get<int>();
    }
    pd.push_back(cr);
  }
  return pd;
}

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
};

}  // namespace detail

// Wirtinger presentation from a PD code.  Generators are the arcs (over-strand
// segments between consecutive under-passages), one relator per crossing with
// the last crossing's relator dropped (it is a consequence of the others), so
// the result has deficiency one.  A crossing with sign e, under-arcs u -> v
// and over-arc o contributes the relator  o^e u o^-e v^-1.
inline Presentation wirtinger_from_pd(const PdCode& pd, const std::string& name = "") {
  Presentation out;
  out.name = name;

  int n = static_cast<int>(pd.size());
  if (n == 0) {
    // 0-crossing diagram of the unknot: one arc, no relators
    out.generator_count = 1;
    out.generator_names = {"x1"};
    return out;
  }

  int edges = 2 * n;
  std::vector<int> seen(static_cast<std::size_t>(edges) + 1, 0);
  for (const auto& cr : pd)
    for (int e : cr) {
      if (e < 1 || e > edges)
        throw ParseError("PD edge label " + std::to_string(e) + " outside 1.." + std::to_string(edges));
      ++seen[static_cast<std::size_t>(e)];
    }
  for (int e = 1; e <= edges; ++e)
    if (seen[static_cast<std::size_t>(e)] != 2)
      throw ParseError("PD edge label " + std::to_string(e) + " must appear exactly twice");

  auto succ = [edges](int e) { return e % edges + 1; };

  // each crossing: check single-component numbering and classify the sign
  std::vector<int> sign(static_cast<std::size_t>(n));
  detail::UnionFind uf(edges + 1);
  for (int i = 0; i < n; ++i) {
    auto [a, b, c, d] = pd[static_cast<std::size_t>(i)];
    if (succ(a) != c)
      throw ParseError("crossing " + std::to_string(i + 1) +
                       ": under-strand does not continue consecutively; multi-component "
                       "diagrams are not supported");
    if (succ(d) == b) {
      sign[static_cast<std::size_t>(i)] = +1;  // over-strand runs d -> b
    } else if (succ(b) == d) {
      sign[static_cast<std::size_t>(i)] = -1;  // over-strand runs b -> d
    } else {
      throw ParseError("crossing " + std::to_string(i + 1) +
                       ": over-strand labels are not consecutive; multi-component "
                       "diagrams are not supported");
    }
    uf.unite(b, d);  // b and d lie on the same arc
  }

  // arcs = edge classes; generator order follows the smallest edge in each class
  std::vector<int> class_of(static_cast<std::size_t>(edges) + 1, -1);
  int arc_count = 0;
  for (int e = 1; e <= edges; ++e) {
    int root = uf.find(e);
    if (class_of[static_cast<std::size_t>(root)] < 0) class_of[static_cast<std::size_t>(root)] = arc_count++;
    class_of[static_cast<std::size_t>(e)] = class_of[static_cast<std::size_t>(root)];
  }

  out.generator_count = arc_count;
  for (int k = 1; k <= arc_count; ++k) out.generator_names.push_back("x" + std::to_string(k));

  for (int i = 0; i < n; ++i) {
    if (i == n - 1) break;  // deterministic drop of the final relator
    auto [a, b, c, d] = pd[static_cast<std::size_t>(i)];
    int u = class_of[static_cast<std::size_t>(a)] + 1;
    int v = class_of[static_cast<std::size_t>(c)] + 1;
    int o = class_of[static_cast<std::size_t>(b)] + 1;
    int e = sign[static_cast<std::size_t>(i)];
    out.relators.push_back(Word(std::vector<int>{e * o, u, -e * o, -v}));
  }
  return out;
}

// Meridians all map to 1 under the abelianization of a knot group, so this is
// the canonical class for a Wirtinger presentation.
inline CohomologyClass meridian_class(const Presentation& wirtinger) {
  CohomologyClass phi;
  phi.images.assign(static_cast<std::size_t>(wirtinger.generator_count), 1);
  return phi;
}

}  // namespace fibercheck
