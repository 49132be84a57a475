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

// Finite simple undirected graphs, the standard families used as adjacency
// structures, all-pairs distances and distance-regularity.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <limits>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "dpleak/errors.hpp"

namespace dpleak {

using Vertex = std::size_t;
using Edge = std::pair<Vertex, Vertex>;

// Shape of a database graph V^Ind: `individuals` coordinates over `values`
// symbols.
struct HammingShape {
  std::size_t individuals = 0;
  std::size_t values = 0;
  friend bool operator==(const HammingShape&, const HammingShape&) = default;
};

class DistanceMatrix {
 public:
  static constexpr int kUnreachable = std::numeric_limits<int>::max();

  DistanceMatrix() = default;
  DistanceMatrix(std::size_t n, std::vector<int> dist)
      : n_(n), dist_(std::move(dist)) {
    for (int d : dist_) {
      if (d == kUnreachable) {
        connected_ = false;
      } else {
        diameter_ = std::max(diameter_, d);
      }
    }
  }

  std::size_t size() const { return n_; }
  int operator()(Vertex i, Vertex j) const { return dist_[i * n_ + j]; }
  // Largest finite distance.
  int diameter() const { return diameter_; }
  bool connected() const { return connected_; }

 private:
  std::size_t n_ = 0;
  std::vector<int> dist_;
  int diameter_ = 0;
  bool connected_ = true;
};

class Graph {
 public:
  Graph() : Graph(0, {}) {}

  // Throws ArgumentError on self-loops, duplicate edges, or out-of-range
  // endpoints. Edges are stored normalized (smaller endpoint first) and sorted.
  Graph(std::size_t vertex_count, std::vector<Edge> edges,
        std::vector<std::string> labels = {},
        std::optional<HammingShape> hamming = std::nullopt)
      : n_(vertex_count),
        adjacency_(vertex_count),
        labels_(std::move(labels)),
        hamming_(hamming) {
    if (!labels_.empty() && labels_.size() != n_)
      throw ArgumentError("label count " + std::to_string(labels_.size()) +
                          " does not match vertex count " + std::to_string(n_));
    for (auto [a, b] : edges) {
      if (a >= n_ || b >= n_)
        throw ArgumentError("edge endpoint out of range: (" + std::to_string(a) +
                            "," + std::to_string(b) + ")");
      if (a == b) throw ArgumentError("self-loop at vertex " + std::to_string(a));
      edges_.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
      throw ArgumentError("duplicate edge");
    for (auto [a, b] : edges_) {
      adjacency_[a].push_back(b);
      adjacency_[b].push_back(a);
    }
    for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
    distances_ = std::make_shared<const DistanceMatrix>(compute_distances());
  }

  std::size_t vertex_count() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Vertex>& neighbors(Vertex v) const { return adjacency_[v]; }
  std::size_t degree(Vertex v) const { return adjacency_[v].size(); }
  bool adjacent(Vertex a, Vertex b) const {
    const auto& nb = adjacency_[a];
    return std::binary_search(nb.begin(), nb.end(), b);
  }
  const std::vector<std::string>& labels() const { return labels_; }
  std::string label(Vertex v) const {
    return labels_.empty() ? std::to_string(v) : labels_[v];
  }
  // Set only for graphs produced by build_hamming.
  const std::optional<HammingShape>& hamming_shape() const { return hamming_; }

  const DistanceMatrix& distances() const { return *distances_; }
  int distance(Vertex a, Vertex b) const { return (*distances_)(a, b); }
  bool connected() const { return distances_->connected(); }

  Graph with_labels(std::vector<std::string> labels) const {
    return Graph(n_, edges_, std::move(labels), hamming_);
  }

 private:
  DistanceMatrix compute_distances() const {
    std::vector<int> dist(n_ * n_, DistanceMatrix::kUnreachable);
    std::vector<Vertex> queue;
    queue.reserve(n_);
    for (Vertex s = 0; s < n_; ++s) {
      int* row = dist.data() + s * n_;
      queue.clear();
      queue.push_back(s);
      row[s] = 0;
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const Vertex v = queue[head];
        for (Vertex w : adjacency_[v]) {
          if (row[w] == DistanceMatrix::kUnreachable) {
            row[w] = row[v] + 1;
            queue.push_back(w);
          }
        }
      }
    }
    return DistanceMatrix(n_, std::move(dist));
  }

  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adjacency_;
  std::vector<std::string> labels_;
  std::optional<HammingShape> hamming_;
  std::shared_ptr<const DistanceMatrix> distances_;
};

inline const DistanceMatrix& distances(const Graph& g) { return g.distances(); }

// ---------------------------------------------------------------------------
// Constructors.

inline constexpr std::size_t kDefaultMaxVertices = 4096;

// Reads DPLEAK_MAX_VERTICES, falling back to kDefaultMaxVertices.
inline std::size_t configured_max_vertices() {
  if (const char* env = std::getenv("DPLEAK_MAX_VERTICES"); env != nullptr) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultMaxVertices;
}

// The database graph V^Ind: vertices are u-tuples over v symbols, adjacent iff
// they differ in exactly one coordinate. Vertex k encodes the base-v digits of
// k with the first individual most significant; labels are those digits.
inline Graph build_hamming(std::size_t individuals, std::size_t values,
                           std::size_t max_vertices = configured_max_vertices()) {
  if (individuals < 1) throw ArgumentError("hamming: need at least one individual");
  if (values < 2) throw ArgumentError("hamming: need at least two values");
  std::size_t n = 1;
  for (std::size_t k = 0; k < individuals; ++k) {
    if (n > max_vertices / values)
      throw ResourceError("hamming(" + std::to_string(individuals) + "," +
                          std::to_string(values) + ") exceeds the vertex cap of " +
                          std::to_string(max_vertices));
    n *= values;
  }
  std::vector<std::string> labels(n);
  std::vector<Edge> edges;
  for (Vertex x = 0; x < n; ++x) {
    std::string digits(individuals, '0');
    Vertex rest = x;
    for (std::size_t pos = individuals; pos-- > 0;) {
      const std::size_t digit = rest % values;
      digits[pos] = static_cast<char>(digit < 10 ? '0' + digit : 'a' + digit - 10);
      rest /= values;
    }
    labels[x] = std::move(digits);
    // Neighbors with a larger index: raise one digit.
    std::size_t place = 1;
    for (std::size_t pos = 0; pos < individuals; ++pos) {
      const std::size_t digit = (x / place) % values;
      for (std::size_t nd = digit + 1; nd < values; ++nd)
        edges.emplace_back(x, x + (nd - digit) * place);
      place *= values;
    }
  }
  return Graph(n, std::move(edges), std::move(labels),
               HammingShape{individuals, values});
}

inline Graph build_clique(std::size_t n) {
  if (n < 2) throw ArgumentError("clique needs at least 2 vertices");
  std::vector<Edge> edges;
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b) edges.emplace_back(a, b);
  return Graph(n, std::move(edges));
}

inline Graph build_cycle(std::size_t n) {
  if (n < 3) throw ArgumentError("cycle needs at least 3 vertices");
  std::vector<Edge> edges;
  for (Vertex a = 0; a < n; ++a) edges.emplace_back(a, (a + 1) % n);
  return Graph(n, std::move(edges));
}

inline Graph build_path(std::size_t n) {
  if (n < 1) throw ArgumentError("path needs at least 1 vertex");
  std::vector<Edge> edges;
  for (Vertex a = 0; a + 1 < n; ++a) edges.emplace_back(a, a + 1);
  return Graph(n, std::move(edges));
}

// K_{1,leaves}; vertex 0 is the center.
inline Graph build_star(std::size_t leaves) {
  if (leaves < 1) throw ArgumentError("star needs at least 1 leaf");
  std::vector<Edge> edges;
  for (Vertex a = 1; a <= leaves; ++a) edges.emplace_back(0, a);
  return Graph(leaves + 1, std::move(edges));
}

// Outer 5-cycle 0..4, inner pentagram 5..9, spokes i -- i+5.
inline Graph build_petersen() {
  std::vector<Edge> edges;
  for (Vertex i = 0; i < 5; ++i) {
    edges.emplace_back(i, (i + 1) % 5);
    edges.emplace_back(5 + i, 5 + (i + 2) % 5);
    edges.emplace_back(i, i + 5);
  }
  return Graph(10, std::move(edges));
}

// ---------------------------------------------------------------------------
// Distance profiles and distance-regularity.

struct DistanceProfile {
  Vertex base_vertex = 0;
  // counts[d] = number of vertices at distance d from base_vertex.
  std::vector<std::size_t> counts;
  friend bool operator==(const DistanceProfile& a, const DistanceProfile& b) {
    return a.counts == b.counts;
  }
};

inline DistanceProfile distance_profile(const Graph& g, Vertex base) {
  if (base >= g.vertex_count()) throw ArgumentError("base vertex out of range");
  const auto& dm = g.distances();
  if (!dm.connected())
    throw PreconditionError("distance profile requires a connected graph");
  DistanceProfile profile{base, std::vector<std::size_t>(dm.diameter() + 1, 0)};
  for (Vertex v = 0; v < g.vertex_count(); ++v) ++profile.counts[dm(base, v)];
  // Trim to the eccentricity of base.
  while (profile.counts.size() > 1 && profile.counts.back() == 0)
    profile.counts.pop_back();
  return profile;
}

// The common profile when every base vertex yields the same counts; nullopt
// otherwise. Throws PreconditionError for disconnected graphs.
inline std::optional<DistanceProfile> uniform_distance_profile(const Graph& g) {
  if (g.vertex_count() == 0) throw ArgumentError("empty graph");
  const DistanceProfile first = distance_profile(g, 0);
  for (Vertex v = 1; v < g.vertex_count(); ++v)
    if (!(distance_profile(g, v) == first)) return std::nullopt;
  return first;
}

// b = (b_0..b_{D-1}), c = (c_1..c_D).
struct IntersectionArray {
  std::vector<std::size_t> b;
  std::vector<std::size_t> c;
  friend bool operator==(const IntersectionArray&, const IntersectionArray&) = default;
};

// Exhaustive pair check: for every (v, w) at distance i, the number of
// neighbors of w at distance i-1 from v must be a global c_i, and at distance
// i+1 a global b_i. Returns the array when it exists.
inline std::optional<IntersectionArray> is_distance_regular(const Graph& g) {
  const std::size_t n = g.vertex_count();
  if (n == 0) return std::nullopt;
  const auto& dm = g.distances();
  if (!dm.connected())
    throw PreconditionError("distance-regularity requires a connected graph");
  const auto diameter = static_cast<std::size_t>(dm.diameter());
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> b(diameter + 1, kUnset), c(diameter + 1, kUnset);
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex w = 0; w < n; ++w) {
      const auto i = static_cast<std::size_t>(dm(v, w));
      std::size_t down = 0, up = 0;
      for (Vertex x : g.neighbors(w)) {
        const auto dx = static_cast<std::size_t>(dm(v, x));
        if (dx + 1 == i) ++down;
        if (dx == i + 1) ++up;
      }
      if (c[i] == kUnset) c[i] = down;
      if (b[i] == kUnset) b[i] = up;
      if (c[i] != down || b[i] != up) return std::nullopt;
    }
  }
  IntersectionArray ia;
  ia.b.assign(b.begin(), b.begin() + diameter);
  ia.c.assign(c.begin() + 1, c.end());
  return ia;
}

}  // namespace dpleak
