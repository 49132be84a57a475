// Copyright 2026 The dpleak Authors
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

// Automorphism search and VT+ certificates.
//
// A graph on n vertices is VT+ when it has n automorphisms sigma_0..sigma_{n-1}
// such that, for every vertex v, {sigma_k(v)} is the whole vertex set. Put
// differently: for every ordered pair (v, w) exactly one sigma_k maps v to w,
// so the family is an exact cover of V x V by automorphism graphs. The search
// below tries, in order:
//
//   1. Hamming graphs built by build_hamming: coordinate-wise translations.
//   2. A single automorphism whose cycle is all of V: take its powers.
//   3. Full enumeration of Aut(G) followed by exact-cover backtracking.
//
// Step 3 is exhaustive, so its failure proves the graph is not VT+. Any
// budget overrun yields `unknown` instead.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dpleak/errors.hpp"
#include "dpleak/graph.hpp"

namespace dpleak {

using Permutation = std::vector<Vertex>;

struct AutomorphismFamily {
  std::vector<Permutation> perms;
};

inline bool is_automorphism(const Graph& g, const Permutation& sigma) {
  const std::size_t n = g.vertex_count();
  if (sigma.size() != n) return false;
  std::vector<char> seen(n, 0);
  for (Vertex v : sigma) {
    if (v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  for (auto [a, b] : g.edges())
    if (!g.adjacent(sigma[a], sigma[b])) return false;
  return true;
}

// True iff every member is an automorphism of g and, for each vertex v, the
// images sigma_k(v) run over all vertices. Throws ArgumentError when a
// permutation has the wrong length.
inline bool verify_family(const Graph& g, const AutomorphismFamily& fam) {
  const std::size_t n = g.vertex_count();
  for (const auto& sigma : fam.perms)
    if (sigma.size() != n)
      throw ArgumentError("permutation length " + std::to_string(sigma.size()) +
                          " does not match vertex count " + std::to_string(n));
  if (fam.perms.size() != n) return false;
  for (const auto& sigma : fam.perms)
    if (!is_automorphism(g, sigma)) return false;
  std::vector<char> hit(n);
  for (Vertex v = 0; v < n; ++v) {
    std::fill(hit.begin(), hit.end(), 0);
    for (const auto& sigma : fam.perms) {
      if (hit[sigma[v]]) return false;
      hit[sigma[v]] = 1;
    }
  }
  return true;
}

// Node and size limits for the backtracking searches.
struct SearchBudget {
  std::size_t max_nodes = 2'000'000;
  std::size_t max_group_order = 500'000;
};

namespace detail {

// Coarsest equitable partition refining the degree partition (1-dimensional
// Weisfeiler-Leman). Automorphisms preserve the resulting colors.
inline std::vector<std::size_t> equitable_colors(const Graph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> color(n);
  for (Vertex v = 0; v < n; ++v) color[v] = g.degree(v);
  std::size_t classes = 0;
  while (true) {
    std::map<std::pair<std::size_t, std::vector<std::size_t>>, std::size_t> ids;
    std::vector<std::size_t> next(n);
    for (Vertex v = 0; v < n; ++v) {
      std::vector<std::size_t> sig;
      sig.reserve(g.degree(v));
      for (Vertex w : g.neighbors(v)) sig.push_back(color[w]);
      std::sort(sig.begin(), sig.end());
      ids.emplace(std::make_pair(color[v], std::move(sig)), 0);
    }
    std::size_t id = 0;
    for (auto& [key, value] : ids) value = id++;
    for (Vertex v = 0; v < n; ++v) {
      std::vector<std::size_t> sig;
      for (Vertex w : g.neighbors(v)) sig.push_back(color[w]);
      std::sort(sig.begin(), sig.end());
      next[v] = ids.at(std::make_pair(color[v], std::move(sig)));
    }
    color = std::move(next);
    if (ids.size() == classes) break;
    classes = ids.size();
  }
  return color;
}

// Vertices in BFS order (each component in turn), so every vertex after the
// first in its component has an already-placed neighbor.
inline std::vector<Vertex> search_order(const Graph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<Vertex> order;
  std::vector<char> seen(n, 0);
  for (Vertex s = 0; s < n; ++s) {
    if (seen[s]) continue;
    seen[s] = 1;
    const std::size_t start = order.size();
    order.push_back(s);
    for (std::size_t head = start; head < order.size(); ++head)
      for (Vertex w : g.neighbors(order[head]))
        if (!seen[w]) {
          seen[w] = 1;
          order.push_back(w);
        }
  }
  return order;
}

enum class Visit { kContinue, kStop };

// Depth-first enumeration of automorphisms. Candidates for sigma(v) must share
// v's equitable color and preserve distances to all placed vertices.
// `accept_partial(image, v, w)` can prune further. `on_complete` is called for
// every automorphism found and may stop the search. Returns false when the
// node budget ran out.
template <typename Prune, typename OnComplete>
bool enumerate_automorphisms(const Graph& g, std::size_t max_nodes,
                             Prune&& accept_partial, OnComplete&& on_complete) {
  const std::size_t n = g.vertex_count();
  const auto& dm = g.distances();
  const auto color = equitable_colors(g);
  const auto order = search_order(g);
  constexpr Vertex kFree = static_cast<Vertex>(-1);
  Permutation image(n, kFree);
  std::vector<char> used(n, 0);
  std::size_t nodes = 0;
  bool stopped = false;
  bool exhausted_budget = false;

  auto recurse = [&](auto&& self, std::size_t depth) -> void {
    if (stopped) return;
    if (depth == n) {
      if (on_complete(const_cast<const Permutation&>(image)) == Visit::kStop) stopped = true;
      return;
    }
    const Vertex v = order[depth];
    for (Vertex w = 0; w < n && !stopped; ++w) {
      if (used[w] || color[w] != color[v]) continue;
      bool ok = true;
      for (std::size_t k = 0; k < depth && ok; ++k) {
        const Vertex u = order[k];
        ok = dm(image[u], w) == dm(u, v);
      }
      if (!ok || !accept_partial(image, v, w)) continue;
      if (++nodes > max_nodes) {
        exhausted_budget = true;
        stopped = true;
        return;
      }
      image[v] = w;
      used[w] = 1;
      self(self, depth + 1);
      image[v] = kFree;
      used[w] = 0;
    }
  };
  if (n > 0) recurse(recurse, 0);
  return !exhausted_budget;
}

}  // namespace detail

// All automorphisms of g, or nullopt when the budget is exhausted first.
inline std::optional<std::vector<Permutation>> automorphism_group(
    const Graph& g, const SearchBudget& budget = {}) {
  std::vector<Permutation> group;
  bool too_large = false;
  const bool finished = detail::enumerate_automorphisms(
      g, budget.max_nodes, [](const Permutation&, Vertex, Vertex) { return true; },
      [&](const Permutation& sigma) {
        if (group.size() >= budget.max_group_order) {
          too_large = true;
          return detail::Visit::kStop;
        }
        group.push_back(sigma);
        return detail::Visit::kContinue;
      });
  if (!finished || too_large) return std::nullopt;
  return group;
}

// An automorphism that permutes all vertices in one cycle, if one exists
// within the budget. Returns {found, completed}.
inline std::pair<std::optional<Permutation>, bool> find_single_orbit_automorphism(
    const Graph& g, std::size_t max_nodes) {
  const std::size_t n = g.vertex_count();
  constexpr Vertex kFree = static_cast<Vertex>(-1);
  std::optional<Permutation> found;
  // Assigning sigma(v) = w must not close a cycle shorter than n.
  auto no_short_cycle = [n](const Permutation& image, Vertex v, Vertex w) {
    std::size_t length = 1;
    Vertex x = w;
    while (x != v && image[x] != kFree) {
      x = image[x];
      ++length;
    }
    return x != v || length == n;
  };
  const bool finished = detail::enumerate_automorphisms(
      g, max_nodes, no_short_cycle, [&](const Permutation& sigma) {
        found = sigma;
        return detail::Visit::kStop;
      });
  return {found, finished || found.has_value()};
}

// Translations x -> x + k (digit-wise mod v) of a build_hamming graph.
inline AutomorphismFamily hamming_translation_family(const HammingShape& shape) {
  std::size_t n = 1;
  for (std::size_t k = 0; k < shape.individuals; ++k) n *= shape.values;
  AutomorphismFamily fam;
  fam.perms.reserve(n);
  for (Vertex shift = 0; shift < n; ++shift) {
    Permutation sigma(n);
    for (Vertex x = 0; x < n; ++x) {
      Vertex result = 0, place = 1, a = x, b = shift;
      for (std::size_t pos = 0; pos < shape.individuals; ++pos) {
        result += ((a % shape.values + b % shape.values) % shape.values) * place;
        a /= shape.values;
        b /= shape.values;
        place *= shape.values;
      }
      sigma[x] = result;
    }
    fam.perms.push_back(std::move(sigma));
  }
  return fam;
}

inline AutomorphismFamily powers_family(const Permutation& sigma) {
  const std::size_t n = sigma.size();
  AutomorphismFamily fam;
  Permutation current(n);
  for (Vertex v = 0; v < n; ++v) current[v] = v;
  for (std::size_t k = 0; k < n; ++k) {
    fam.perms.push_back(current);
    Permutation next(n);
    for (Vertex v = 0; v < n; ++v) next[v] = sigma[current[v]];
    current = std::move(next);
  }
  return fam;
}

// Exact-cover search for a VT+ family inside a fully enumerated group.
// Returns {family, completed}; completed=false means the node budget ran out.
inline std::pair<std::optional<AutomorphismFamily>, bool> exact_cover_family(
    const Graph& g, const std::vector<Permutation>& group, std::size_t max_nodes) {
  const std::size_t n = g.vertex_count();
  if (n == 0) return {AutomorphismFamily{}, true};
  // by_target[w] = group elements with sigma(0) = w.
  std::vector<std::vector<std::size_t>> by_target(n);
  for (std::size_t k = 0; k < group.size(); ++k) by_target[group[k][0]].push_back(k);
  // pair_used[v * n + w]: some chosen sigma maps v to w.
  std::vector<char> pair_used(n * n, 0);
  std::vector<char> target_done(n, 0);
  std::vector<std::size_t> chosen;
  std::size_t nodes = 0;
  bool out_of_budget = false;

  auto compatible = [&](std::size_t k) {
    const auto& sigma = group[k];
    for (Vertex v = 0; v < n; ++v)
      if (pair_used[v * n + sigma[v]]) return false;
    return true;
  };
  auto mark = [&](std::size_t k, char value) {
    const auto& sigma = group[k];
    for (Vertex v = 0; v < n; ++v) pair_used[v * n + sigma[v]] = value;
  };

  auto recurse = [&](auto&& self) -> bool {
    if (chosen.size() == n) return true;
    // Most constrained open target first.
    std::size_t best_target = n, best_count = static_cast<std::size_t>(-1);
    for (Vertex w = 0; w < n; ++w) {
      if (target_done[w]) continue;
      std::size_t count = 0;
      for (std::size_t k : by_target[w]) count += compatible(k) ? 1 : 0;
      if (count < best_count) {
        best_count = count;
        best_target = w;
      }
      if (count == 0) return false;
    }
    target_done[best_target] = 1;
    for (std::size_t k : by_target[best_target]) {
      if (!compatible(k)) continue;
      if (++nodes > max_nodes) {
        out_of_budget = true;
        break;
      }
      mark(k, 1);
      chosen.push_back(k);
      if (self(self)) return true;
      chosen.pop_back();
      mark(k, 0);
    }
    target_done[best_target] = 0;
    return false;
  };

  // Left-multiplying a valid family by an automorphism keeps it valid, so the
  // identity can be assumed to cover (0, 0).
  const auto identity = std::find_if(group.begin(), group.end(), [](const Permutation& s) {
    for (Vertex v = 0; v < s.size(); ++v)
      if (s[v] != v) return false;
    return true;
  });
  if (identity == group.end()) return {std::nullopt, true};
  const auto id_index = static_cast<std::size_t>(identity - group.begin());
  mark(id_index, 1);
  chosen.push_back(id_index);
  target_done[0] = 1;
  if (recurse(recurse)) {
    AutomorphismFamily fam;
    for (std::size_t k : chosen) fam.perms.push_back(group[k]);
    // Order by image of vertex 0 so sigma_k(0) = k.
    std::sort(fam.perms.begin(), fam.perms.end(),
              [](const Permutation& a, const Permutation& b) { return a[0] < b[0]; });
    return {fam, true};
  }
  return {std::nullopt, !out_of_budget};
}

enum class VtPlusVerdict { kYes, kNo, kUnknown };

inline const char* to_string(VtPlusVerdict v) {
  switch (v) {
    case VtPlusVerdict::kYes: return "yes";
    case VtPlusVerdict::kNo: return "no";
    case VtPlusVerdict::kUnknown: return "unknown";
  }
  return "unknown";
}

struct VtPlusResult {
  VtPlusVerdict verdict = VtPlusVerdict::kUnknown;
  std::optional<AutomorphismFamily> family;
  // "hamming-translations", "single-orbit-powers", "exact-cover", or for
  // non-yes verdicts a short reason.
  std::string method;
  // Order of Aut(G) when it was fully enumerated.
  std::optional<std::size_t> group_order;
};

inline VtPlusResult vt_plus_certificate(const Graph& g, const SearchBudget& budget = {}) {
  VtPlusResult result;
  const std::size_t n = g.vertex_count();
  auto accept = [&](AutomorphismFamily fam, std::string method) {
    if (!verify_family(g, fam)) return false;
    result.verdict = VtPlusVerdict::kYes;
    result.family = std::move(fam);
    result.method = std::move(method);
    return true;
  };

  if (const auto& shape = g.hamming_shape(); shape.has_value()) {
    if (accept(hamming_translation_family(*shape), "hamming-translations")) return result;
  }
  if (n == 1) {
    accept(AutomorphismFamily{{Permutation{0}}}, "single-orbit-powers");
    return result;
  }

  if (auto [sigma, done] = find_single_orbit_automorphism(g, budget.max_nodes); sigma) {
    if (accept(powers_family(*sigma), "single-orbit-powers")) return result;
  }

  // Every vertex must be movable onto every other; a color split rules that out.
  const auto colors = detail::equitable_colors(g);
  if (std::any_of(colors.begin(), colors.end(), [&](std::size_t c) { return c != colors[0]; })) {
    result.verdict = VtPlusVerdict::kNo;
    result.method = "not vertex-transitive (equitable partition has several cells)";
    return result;
  }

  const auto group = automorphism_group(g, budget);
  if (!group) {
    result.method = "automorphism enumeration exceeded budget";
    return result;
  }
  result.group_order = group->size();
  auto [fam, completed] = exact_cover_family(g, *group, budget.max_nodes);
  if (fam && accept(std::move(*fam), "exact-cover")) return result;
  if (!completed) {
    result.method = "exact-cover search exceeded budget";
    return result;
  }
  result.verdict = VtPlusVerdict::kNo;
  result.method = "no exact cover within the full automorphism group";
  return result;
}

}  // namespace dpleak
