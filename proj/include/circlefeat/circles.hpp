#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "circlefeat/graph.hpp"

namespace circlefeat {

/// Knobs for the circle features. The defaults are the reference
/// configuration used throughout the tests and the CLI.
struct CircleConfig {
  /// Damping constant in the swing-plus denominator. Must be > 0.
  double alpha = 1.0;
  /// Whether u == v terms enter the swing-plus double sum.
  bool include_self_pairs = true;
  /// Circle length bound K: only simple cycles of at most this many edges
  /// count as circles. Must be >= 4.
  int max_circle_len = 6;
  /// Enumeration cap; exceeding it raises cap_exceeded_error instead of
  /// letting a dense pair run away.
  std::int64_t max_bridges = 100000;

  void validate() const;
};

/// One half of a circle: a simple src--dst path of length >= 2. The length-1
/// path (the direct edge) is never a bridge; adjacency already carries it.
struct Bridge {
  /// Full node sequence, endpoints included.
  std::vector<NodeId> path;

  /// Edge count.
  int length() const { return static_cast<int>(path.size()) - 1; }

  /// The vertices strictly between the endpoints.
  std::span<const NodeId> internal() const {
    return {path.data() + 1, path.size() - 2};
  }
};

/// a_ij + sum over u, v in the common-neighbor set of 1/(alpha + |N(u) ∩ N(v)|).
/// Diagonal terms are included iff cfg.include_self_pairs.
double swing_plus(const Graph& g, NodePair p, const CircleConfig& cfg = {});

/// Same value as swing_plus, recomputed from scratch per term with
/// independent set machinery. Kept free of any code shared with swing_plus
/// so the two sides can check each other.
double swing_plus_oracle(const Graph& g, NodePair p, const CircleConfig& cfg = {});

/// All simple src--dst paths with 2 <= length <= max_circle_len - 2, found by
/// depth-limited DFS over sorted neighbor lists; output is lexicographic by
/// node sequence. Throws cap_exceeded_error past cfg.max_bridges.
std::vector<Bridge> enumerate_bridges(const Graph& g, NodePair p,
                                      const CircleConfig& cfg = {});

/// Number of bridges that participate in at least one circle: bridges b for
/// which some other bridge b' has disjoint internal vertices and
/// length(b) + length(b') <= max_circle_len.
int bridge_count(const Graph& g, NodePair p, const CircleConfig& cfg = {});

/// Same count, derived the other way around: enumerate every simple cycle of
/// length <= max_circle_len through both endpoints, split each into its two
/// src--dst arcs, and count the distinct arcs of length >= 2 coming from
/// cycles whose arcs both qualify. Exhaustive; intended for small graphs.
int bridge_count_oracle(const Graph& g, NodePair p, const CircleConfig& cfg = {});

/// Number of circles through the pair: unordered bridge pairs with disjoint
/// internal vertices and combined length <= max_circle_len.
std::int64_t circle_count(const Graph& g, NodePair p, const CircleConfig& cfg = {});

/// a_ij + tanh(c)/2 + sigmoid(c) - 1/2 with c = bridge_count. The structural
/// part lives in [0, 1) and grows with c; c = 0 reduces to adjacency.
double bridge_feature(const Graph& g, NodePair p, const CircleConfig& cfg = {});

}  // namespace circlefeat
