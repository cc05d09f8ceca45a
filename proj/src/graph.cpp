#include "circlefeat/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "circlefeat/rng.hpp"

namespace circlefeat {

std::span<const NodeId> Graph::neighbors(NodeId v) const {
  if (v < 0 || v >= num_nodes_) {
    throw std::out_of_range("node " + std::to_string(v) + " outside [0, " +
                            std::to_string(num_nodes_) + ")");
  }
  auto begin = static_cast<std::size_t>(offsets_[v]);
  auto count = static_cast<std::size_t>(offsets_[v + 1] - offsets_[v]);
  return {adjacency_.data() + begin, count};
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  auto nbrs = neighbors(u);
  if (v < 0 || v >= num_nodes_) {
    throw std::out_of_range("node " + std::to_string(v) + " outside [0, " +
                            std::to_string(num_nodes_) + ")");
  }
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(num_edges()));
  for (NodeId u = 0; u < num_nodes_; ++u) {
    for (NodeId v : neighbors(u)) {
      if (v > u) out.emplace_back(u, v);
    }
  }
  return out;
}

Graph build_graph(std::span<const Edge> edges, NodeId num_nodes,
                  std::optional<Eigen::MatrixXd> node_features) {
  if (num_nodes < 0) throw config_error("num_nodes must be non-negative");
  if (node_features && node_features->rows() != num_nodes) {
    throw config_error("node_features rows (" +
                       std::to_string(node_features->rows()) +
                       ") != num_nodes (" + std::to_string(num_nodes) + ")");
  }

  std::vector<Edge> canon;
  canon.reserve(edges.size());
  for (const auto& [u, v] : edges) {
    if (u < 0 || u >= num_nodes || v < 0 || v >= num_nodes) {
      throw std::out_of_range("edge (" + std::to_string(u) + ", " +
                              std::to_string(v) + ") references a node outside [0, " +
                              std::to_string(num_nodes) + ")");
    }
    if (u == v) continue;  // simple graph: self-loops dropped
    canon.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(canon.begin(), canon.end());
  canon.erase(std::unique(canon.begin(), canon.end()), canon.end());

  Graph g;
  g.num_nodes_ = num_nodes;
  g.node_features_ = std::move(node_features);

  std::vector<std::int64_t> deg(static_cast<std::size_t>(num_nodes) + 1, 0);
  for (const auto& [u, v] : canon) {
    ++deg[static_cast<std::size_t>(u) + 1];
    ++deg[static_cast<std::size_t>(v) + 1];
  }
  g.offsets_.assign(deg.begin(), deg.end());
  for (std::size_t i = 1; i < g.offsets_.size(); ++i) {
    g.offsets_[i] += g.offsets_[i - 1];
  }

  g.adjacency_.resize(static_cast<std::size_t>(g.offsets_.back()));
  std::vector<std::int64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [u, v] : canon) {
    g.adjacency_[static_cast<std::size_t>(cursor[u]++)] = v;
    g.adjacency_[static_cast<std::size_t>(cursor[v]++)] = u;
  }
  // canon is sorted by (src, dst), so each neighbor list comes out ascending
  // except for the back-edges, which interleave; one pass fixes both.
  for (NodeId u = 0; u < num_nodes; ++u) {
    auto begin = g.adjacency_.begin() + g.offsets_[u];
    auto end = g.adjacency_.begin() + g.offsets_[u + 1];
    std::sort(begin, end);
  }
  return g;
}

void validate_pair(const Graph& g, NodePair p) {
  if (p.src < 0 || p.src >= g.num_nodes() || p.dst < 0 || p.dst >= g.num_nodes()) {
    throw std::out_of_range("pair (" + std::to_string(p.src) + ", " +
                            std::to_string(p.dst) + ") outside [0, " +
                            std::to_string(g.num_nodes()) + ")");
  }
  if (p.src == p.dst) {
    throw config_error("pair endpoints must differ, got (" +
                       std::to_string(p.src) + ", " + std::to_string(p.dst) + ")");
  }
}

std::vector<Edge> parse_edge_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }

  std::vector<Edge> edges;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream fields(line);
    long long a = 0;
    long long b = 0;
    std::string extra;
    if (!(fields >> a >> b) || (fields >> extra) || a < 0 || b < 0) {
      throw parse_error(path.string(), line_no,
                        "expected two non-negative integers, got \"" + line + "\"");
    }
    if (a > std::numeric_limits<NodeId>::max() ||
        b > std::numeric_limits<NodeId>::max()) {
      throw parse_error(path.string(), line_no, "node id too large");
    }
    edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
  }
  return edges;
}

Graph load_edge_list(const std::filesystem::path& path,
                     std::optional<NodeId> num_nodes) {
  std::vector<Edge> edges = parse_edge_lines(path);
  if (edges.empty()) {
    throw parse_error(path.string(), 0, "no edges found (empty graph)");
  }
  NodeId max_id = -1;
  for (const auto& [a, b] : edges) max_id = std::max({max_id, a, b});
  NodeId n = num_nodes.value_or(max_id + 1);
  return build_graph(edges, n);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    for (NodeId v : g.neighbors(u)) {
      if (v > u) out << u << ' ' << v << '\n';
    }
  }
}

void write_edge_list(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_edge_list(g, out);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Graph relabel(const Graph& g, std::span<const NodeId> perm) {
  NodeId n = g.num_nodes();
  if (static_cast<NodeId>(perm.size()) != n) {
    throw config_error("permutation size != num_nodes");
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (NodeId v : perm) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) {
      throw config_error("not a permutation of [0, N)");
    }
    seen[static_cast<std::size_t>(v)] = true;
  }

  std::vector<Edge> mapped;
  mapped.reserve(static_cast<std::size_t>(g.num_edges()));
  for (const auto& [u, v] : g.edges()) {
    mapped.emplace_back(perm[static_cast<std::size_t>(u)],
                        perm[static_cast<std::size_t>(v)]);
  }

  std::optional<Eigen::MatrixXd> features;
  if (g.node_features()) {
    Eigen::MatrixXd permuted(g.node_features()->rows(), g.node_features()->cols());
    for (NodeId v = 0; v < n; ++v) {
      permuted.row(perm[static_cast<std::size_t>(v)]) = g.node_features()->row(v);
    }
    features = std::move(permuted);
  }
  return build_graph(mapped, n, std::move(features));
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

GraphKind parse_graph_kind(const std::string& name) {
  if (name == "path") return GraphKind::path;
  if (name == "cycle") return GraphKind::cycle;
  if (name == "complete") return GraphKind::complete;
  if (name == "theta") return GraphKind::theta;
  if (name == "er") return GraphKind::er;
  if (name == "sbm2") return GraphKind::sbm2;
  throw config_error("unknown graph kind \"" + name + "\"");
}

std::string to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::path: return "path";
    case GraphKind::cycle: return "cycle";
    case GraphKind::complete: return "complete";
    case GraphKind::theta: return "theta";
    case GraphKind::er: return "er";
    case GraphKind::sbm2: return "sbm2";
  }
  return "?";
}

namespace {

std::string real_token(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

std::string describe(const SyntheticSpec& spec) {
  std::string s = to_string(spec.kind);
  switch (spec.kind) {
    case GraphKind::path:
    case GraphKind::cycle:
    case GraphKind::complete:
      s += " n=" + std::to_string(spec.n);
      break;
    case GraphKind::theta:
      s += " k=" + std::to_string(spec.k) + " len=" + std::to_string(spec.len);
      break;
    case GraphKind::er:
      s += " n=" + std::to_string(spec.n) + " p=" + real_token(spec.p) +
           " seed=" + std::to_string(spec.seed);
      break;
    case GraphKind::sbm2:
      s += " n=" + std::to_string(spec.n) + " p_in=" + real_token(spec.p_in) +
           " p_out=" + real_token(spec.p_out) + " seed=" + std::to_string(spec.seed);
      break;
  }
  return s;
}

Graph make_path(int n) {
  if (n < 1) throw config_error("path requires n >= 1");
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return build_graph(edges, n);
}

Graph make_cycle(int n) {
  if (n < 3) throw config_error("cycle requires n >= 3");
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return build_graph(edges, n);
}

Graph make_complete(int n) {
  if (n < 1) throw config_error("complete requires n >= 1");
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return build_graph(edges, n);
}

Graph make_theta(int k, int len) {
  if (k < 2) throw config_error("theta requires k >= 2");
  if (len < 1) throw config_error("theta requires len >= 1");
  std::vector<Edge> edges;
  NodeId next = 2;
  for (int path = 0; path < k; ++path) {
    NodeId prev = 0;
    for (int step = 0; step + 1 < len; ++step) {
      edges.emplace_back(prev, next);
      prev = next++;
    }
    edges.emplace_back(prev, 1);
  }
  NodeId n = len > 1 ? next : 2;
  return build_graph(edges, n);
}

Graph make_er(int n, double p, std::uint64_t seed) {
  if (n < 1) throw config_error("er requires n >= 1");
  if (p < 0.0 || p > 1.0) throw config_error("er requires p in [0, 1]");
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (uniform01(rng) < p) edges.emplace_back(i, j);
    }
  }
  return build_graph(edges, n);
}

Graph make_sbm2(int n, double p_in, double p_out, std::uint64_t seed) {
  if (n < 2) throw config_error("sbm2 requires n >= 2");
  if (p_in < 0.0 || p_in > 1.0 || p_out < 0.0 || p_out > 1.0) {
    throw config_error("sbm2 requires probabilities in [0, 1]");
  }
  const int split = n / 2;
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      bool same_block = (i < split) == (j < split);
      if (uniform01(rng) < (same_block ? p_in : p_out)) edges.emplace_back(i, j);
    }
  }
  return build_graph(edges, n);
}

Graph generate_synthetic(const SyntheticSpec& spec) {
  switch (spec.kind) {
    case GraphKind::path: return make_path(spec.n);
    case GraphKind::cycle: return make_cycle(spec.n);
    case GraphKind::complete: return make_complete(spec.n);
    case GraphKind::theta: return make_theta(spec.k, spec.len);
    case GraphKind::er: return make_er(spec.n, spec.p, spec.seed);
    case GraphKind::sbm2:
      return make_sbm2(spec.n, spec.p_in, spec.p_out, spec.seed);
  }
  throw config_error("unknown graph kind");
}

}  // namespace circlefeat
