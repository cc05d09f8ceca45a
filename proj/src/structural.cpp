#include "circlefeat/structural.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "circlefeat/numeric.hpp"

namespace circlefeat {

std::vector<NodeId> common_neighbors(const Graph& g, NodePair p) {
  validate_pair(g, p);
  auto a = g.neighbors(p.src);
  auto b = g.neighbors(p.dst);
  std::vector<NodeId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

double adamic_adar(const Graph& g, NodePair p) {
  std::vector<double> terms;
  for (NodeId u : common_neighbors(g, p)) {
    terms.push_back(1.0 / std::log(static_cast<double>(g.degree(u))));
  }
  return ordered_sum(terms);
}

double jaccard(const Graph& g, NodePair p) {
  validate_pair(g, p);
  auto a = g.neighbors(p.src);
  auto b = g.neighbors(p.dst);
  std::size_t i = 0;
  std::size_t j = 0;
  std::int64_t intersection = 0;
  std::int64_t unions = 0;
  while (i < a.size() && j < b.size()) {
    ++unions;
    if (a[i] == b[j]) {
      ++intersection;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  unions += static_cast<std::int64_t>((a.size() - i) + (b.size() - j));
  if (unions == 0) return 0.0;
  return static_cast<double>(intersection) / static_cast<double>(unions);
}

PathInfo shortest_paths(const Graph& g, NodePair p, std::int64_t count_cap) {
  validate_pair(g, p);
  if (count_cap < 1) throw config_error("count_cap must be >= 1");

  constexpr int kUnvisited = -1;
  std::vector<int> dist(static_cast<std::size_t>(g.num_nodes()), kUnvisited);
  std::vector<std::int64_t> count(static_cast<std::size_t>(g.num_nodes()), 0);
  std::queue<NodeId> frontier;

  dist[static_cast<std::size_t>(p.src)] = 0;
  count[static_cast<std::size_t>(p.src)] = 1;
  frontier.push(p.src);

  while (!frontier.empty()) {
    NodeId u = frontier.front();
    frontier.pop();
    int du = dist[static_cast<std::size_t>(u)];
    // Levels beyond the target cannot shorten paths to it.
    if (dist[static_cast<std::size_t>(p.dst)] != kUnvisited &&
        du >= dist[static_cast<std::size_t>(p.dst)]) {
      break;
    }
    for (NodeId v : g.neighbors(u)) {
      auto vi = static_cast<std::size_t>(v);
      if (dist[vi] == kUnvisited) {
        dist[vi] = du + 1;
        count[vi] = count[static_cast<std::size_t>(u)];
        frontier.push(v);
      } else if (dist[vi] == du + 1) {
        count[vi] = std::min(count_cap,
                             count[vi] + count[static_cast<std::size_t>(u)]);
      }
    }
  }

  PathInfo info;
  auto di = static_cast<std::size_t>(p.dst);
  if (dist[di] != kUnvisited) {
    info.distance = dist[di];
    info.num_shortest = std::min(count_cap, count[di]);
  }
  return info;
}

}  // namespace circlefeat
