#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "circlefeat/graph.hpp"

namespace circlefeat {

/// Count cap for shortest-path counting. A count equal to the cap means
/// "at least this many"; saturation never wraps.
inline constexpr std::int64_t kDefaultPathCountCap = 1'000'000'000;

/// Shortest-path summary for one node pair.
struct PathInfo {
  /// Hop count; empty when the pair is disconnected.
  std::optional<int> distance;
  /// Number of distinct shortest paths, saturating at the cap; 0 iff unreachable.
  std::int64_t num_shortest = 0;

  bool reachable() const { return distance.has_value(); }
};

/// Sorted intersection of the two endpoints' neighbor lists.
std::vector<NodeId> common_neighbors(const Graph& g, NodePair p);

/// Sum over common neighbors u of 1/ln(deg(u)). A common neighbor of two
/// distinct nodes always has degree >= 2, so every term is finite.
double adamic_adar(const Graph& g, NodePair p);

/// |N(src) ∩ N(dst)| / |N(src) ∪ N(dst)| over the raw neighbor sets
/// (endpoints are not excluded); 0 when the union is empty.
double jaccard(const Graph& g, NodePair p);

/// Breadth-first distance and saturating count of distinct shortest paths.
PathInfo shortest_paths(const Graph& g, NodePair p,
                        std::int64_t count_cap = kDefaultPathCountCap);

}  // namespace circlefeat
