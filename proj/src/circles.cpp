#include "circlefeat/circles.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#include "circlefeat/numeric.hpp"

namespace circlefeat {

void CircleConfig::validate() const {
  if (!(alpha > 0.0)) throw config_error("alpha must be > 0");
  if (max_circle_len < 4) throw config_error("max_circle_len must be >= 4");
  if (max_bridges < 1) throw config_error("max_bridges must be >= 1");
}

namespace {

std::int64_t intersection_size(std::span<const NodeId> a,
                               std::span<const NodeId> b) {
  std::size_t i = 0;
  std::size_t j = 0;
  std::int64_t count = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++count;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return count;
}

}  // namespace

double swing_plus(const Graph& g, NodePair p, const CircleConfig& cfg) {
  cfg.validate();
  validate_pair(g, p);

  auto a = g.neighbors(p.src);
  auto b = g.neighbors(p.dst);
  std::vector<NodeId> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(common));

  // Off-diagonal terms come in equal (u,v)/(v,u) pairs; pushing the value
  // twice keeps the term multiset identical to the literal double sum.
  std::vector<double> terms;
  terms.reserve(common.size() * common.size());
  for (std::size_t i = 0; i < common.size(); ++i) {
    auto nu = g.neighbors(common[i]);
    if (cfg.include_self_pairs) {
      terms.push_back(1.0 / (cfg.alpha + static_cast<double>(nu.size())));
    }
    for (std::size_t j = i + 1; j < common.size(); ++j) {
      double term =
          1.0 / (cfg.alpha +
                 static_cast<double>(intersection_size(nu, g.neighbors(common[j]))));
      terms.push_back(term);
      terms.push_back(term);
    }
  }
  return g.adjacency(p.src, p.dst) + ordered_sum(terms);
}

double swing_plus_oracle(const Graph& g, NodePair p, const CircleConfig& cfg) {
  cfg.validate();
  validate_pair(g, p);

  // Everything below rebuilds its sets from scratch: no shared intersection
  // helper, no memoization, plain left-to-right accumulation.
  std::set<NodeId> gamma_src(g.neighbors(p.src).begin(), g.neighbors(p.src).end());
  std::set<NodeId> gamma_dst(g.neighbors(p.dst).begin(), g.neighbors(p.dst).end());
  std::set<NodeId> common;
  for (NodeId u : gamma_src) {
    if (gamma_dst.count(u) != 0) common.insert(u);
  }

  double sum = 0.0;
  for (NodeId u : common) {
    for (NodeId v : common) {
      if (u == v && !cfg.include_self_pairs) continue;
      std::set<NodeId> gamma_u(g.neighbors(u).begin(), g.neighbors(u).end());
      std::set<NodeId> gamma_v(g.neighbors(v).begin(), g.neighbors(v).end());
      std::int64_t shared = 0;
      for (NodeId w : gamma_u) {
        if (gamma_v.count(w) != 0) ++shared;
      }
      sum += 1.0 / (cfg.alpha + static_cast<double>(shared));
    }
  }
  return g.adjacency(p.src, p.dst) + sum;
}

namespace {

struct BridgeSearch {
  const Graph& g;
  NodePair pair;
  const CircleConfig& cfg;
  int max_path_len;
  std::vector<bool> on_path;
  std::vector<NodeId> path;
  std::vector<Bridge> found;

  BridgeSearch(const Graph& g_, NodePair p_, const CircleConfig& cfg_)
      : g(g_),
        pair(p_),
        cfg(cfg_),
        max_path_len(cfg_.max_circle_len - 2),
        on_path(static_cast<std::size_t>(g_.num_nodes()), false) {
    path.reserve(static_cast<std::size_t>(max_path_len) + 1);
  }

  void record() {
    if (static_cast<std::int64_t>(found.size()) >= cfg.max_bridges) {
      throw cap_exceeded_error(
          "bridge enumeration for pair (" + std::to_string(pair.src) + ", " +
          std::to_string(pair.dst) + ") exceeded max_bridges=" +
          std::to_string(cfg.max_bridges));
    }
    Bridge b;
    b.path = path;
    b.path.push_back(pair.dst);
    found.push_back(std::move(b));
  }

  // Neighbors are iterated ascending and a path is recorded exactly when dst
  // shows up in its sorted slot, so emission order is lexicographic by node
  // sequence.
  void extend(NodeId u, int edges_used) {
    for (NodeId v : g.neighbors(u)) {
      if (v == pair.dst) {
        if (edges_used + 1 >= 2) record();
        continue;  // simple paths never pass through dst
      }
      if (edges_used + 1 >= max_path_len) continue;  // no budget left to reach dst
      auto vi = static_cast<std::size_t>(v);
      if (on_path[vi]) continue;
      on_path[vi] = true;
      path.push_back(v);
      extend(v, edges_used + 1);
      path.pop_back();
      on_path[vi] = false;
    }
  }
};

}  // namespace

std::vector<Bridge> enumerate_bridges(const Graph& g, NodePair p,
                                      const CircleConfig& cfg) {
  cfg.validate();
  validate_pair(g, p);

  BridgeSearch search(g, p, cfg);
  search.on_path[static_cast<std::size_t>(p.src)] = true;
  search.path.push_back(p.src);
  search.extend(p.src, 0);
  return search.found;
}

namespace {

// Sorted internal-vertex sets, plus a 64-bit occupancy mask when every id
// fits; the mask settles most disjointness checks in one AND.
struct InternalSet {
  std::vector<NodeId> sorted;
  std::uint64_t mask = 0;
  bool mask_exact = false;

  explicit InternalSet(const Bridge& b) {
    sorted.assign(b.internal().begin(), b.internal().end());
    std::sort(sorted.begin(), sorted.end());
    mask_exact = true;
    for (NodeId v : sorted) {
      if (v >= 64) {
        mask_exact = false;
        break;
      }
      mask |= std::uint64_t{1} << v;
    }
  }

  bool disjoint(const InternalSet& other) const {
    if (mask_exact && other.mask_exact) return (mask & other.mask) == 0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < sorted.size() && j < other.sorted.size()) {
      if (sorted[i] == other.sorted[j]) return false;
      if (sorted[i] < other.sorted[j]) {
        ++i;
      } else {
        ++j;
      }
    }
    return true;
  }
};

struct BridgePool {
  std::vector<Bridge> bridges;
  std::vector<InternalSet> internals;
  std::vector<std::size_t> by_length;  // indices ordered by ascending length

  BridgePool(const Graph& g, NodePair p, const CircleConfig& cfg)
      : bridges(enumerate_bridges(g, p, cfg)) {
    internals.reserve(bridges.size());
    for (const Bridge& b : bridges) internals.emplace_back(b);
    by_length.resize(bridges.size());
    for (std::size_t i = 0; i < bridges.size(); ++i) by_length[i] = i;
    std::stable_sort(by_length.begin(), by_length.end(),
                     [&](std::size_t a, std::size_t b) {
                       return bridges[a].length() < bridges[b].length();
                     });
  }
};

}  // namespace

int bridge_count(const Graph& g, NodePair p, const CircleConfig& cfg) {
  BridgePool pool(g, p, cfg);
  int count = 0;
  for (std::size_t i = 0; i < pool.bridges.size(); ++i) {
    int budget = cfg.max_circle_len - pool.bridges[i].length();
    for (std::size_t j : pool.by_length) {
      if (pool.bridges[j].length() > budget) break;
      if (j == i) continue;
      if (pool.internals[i].disjoint(pool.internals[j])) {
        ++count;
        break;
      }
    }
  }
  return count;
}

std::int64_t circle_count(const Graph& g, NodePair p, const CircleConfig& cfg) {
  BridgePool pool(g, p, cfg);
  std::int64_t circles = 0;
  for (std::size_t i = 0; i < pool.bridges.size(); ++i) {
    for (std::size_t j = i + 1; j < pool.bridges.size(); ++j) {
      if (pool.bridges[i].length() + pool.bridges[j].length() >
          cfg.max_circle_len) {
        continue;
      }
      if (pool.internals[i].disjoint(pool.internals[j])) ++circles;
    }
  }
  return circles;
}

namespace {

std::vector<int> bfs_distances(const Graph& g, NodeId from) {
  std::vector<int> dist(static_cast<std::size_t>(g.num_nodes()), -1);
  std::queue<NodeId> frontier;
  dist[static_cast<std::size_t>(from)] = 0;
  frontier.push(from);
  while (!frontier.empty()) {
    NodeId u = frontier.front();
    frontier.pop();
    for (NodeId v : g.neighbors(u)) {
      if (dist[static_cast<std::size_t>(v)] < 0) {
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        frontier.push(v);
      }
    }
  }
  return dist;
}

// Exhaustive search for simple cycles through src of bounded length,
// direction-canonicalized (second vertex < last vertex). Cycles are handed
// to the sink as node sequences starting at src.
struct CycleSearch {
  const Graph& g;
  NodeId src;
  NodeId dst;
  int max_len;
  std::vector<int> dist_to_src;
  std::vector<int> dist_to_dst;
  std::vector<bool> on_path;
  std::vector<NodeId> path;
  std::set<std::vector<NodeId>>* arcs;

  bool feasible(NodeId u, int edges_used) const {
    bool have_dst = on_path[static_cast<std::size_t>(dst)];
    int du_src = dist_to_src[static_cast<std::size_t>(u)];
    if (du_src < 0) return false;
    if (have_dst) return edges_used + du_src <= max_len;
    int du_dst = dist_to_dst[static_cast<std::size_t>(u)];
    int ddst_src = dist_to_src[static_cast<std::size_t>(dst)];
    if (du_dst < 0 || ddst_src < 0) return false;
    return edges_used + du_dst + ddst_src <= max_len;
  }

  void close_cycle() {
    // path holds the whole cycle; split it at dst into the two src--dst arcs.
    std::size_t at = 0;
    while (path[at] != dst) ++at;
    auto total = static_cast<int>(path.size());
    int forward_len = static_cast<int>(at);
    int backward_len = total - forward_len;
    if (forward_len < 2 || backward_len < 2) return;  // arc is the direct edge

    std::vector<NodeId> forward(path.begin(), path.begin() + at + 1);
    std::vector<NodeId> backward;
    backward.reserve(static_cast<std::size_t>(backward_len) + 1);
    backward.push_back(src);
    for (std::size_t i = path.size() - 1; i > at; --i) backward.push_back(path[i]);
    backward.push_back(dst);
    arcs->insert(std::move(forward));
    arcs->insert(std::move(backward));
  }

  void extend(NodeId u, int edges_used) {
    for (NodeId v : g.neighbors(u)) {
      if (v == src) {
        if (edges_used + 1 >= 3 && path[1] < path.back() &&
            on_path[static_cast<std::size_t>(dst)]) {
          close_cycle();
        }
        continue;
      }
      if (edges_used + 1 >= max_len) continue;
      auto vi = static_cast<std::size_t>(v);
      if (on_path[vi]) continue;
      on_path[vi] = true;
      path.push_back(v);
      if (feasible(v, edges_used + 1)) extend(v, edges_used + 1);
      on_path[vi] = false;
      path.pop_back();
    }
  }
};

}  // namespace

int bridge_count_oracle(const Graph& g, NodePair p, const CircleConfig& cfg) {
  cfg.validate();
  validate_pair(g, p);

  std::set<std::vector<NodeId>> arcs;
  CycleSearch search{g,
                     p.src,
                     p.dst,
                     cfg.max_circle_len,
                     bfs_distances(g, p.src),
                     bfs_distances(g, p.dst),
                     std::vector<bool>(static_cast<std::size_t>(g.num_nodes()), false),
                     {},
                     &arcs};
  search.on_path[static_cast<std::size_t>(p.src)] = true;
  search.path.push_back(p.src);
  search.extend(p.src, 0);
  return static_cast<int>(arcs.size());
}

double bridge_feature(const Graph& g, NodePair p, const CircleConfig& cfg) {
  auto c = static_cast<double>(bridge_count(g, p, cfg));
  return g.adjacency(p.src, p.dst) + 0.5 * std::tanh(c) + sigmoid(c) - 0.5;
}

}  // namespace circlefeat
