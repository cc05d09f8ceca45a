#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "circlefeat/errors.hpp"

namespace circlefeat {

using NodeId = std::int32_t;
using Edge = std::pair<NodeId, NodeId>;

/// An ordered query pair. Valid only when src != dst and both ids are in range
/// for the graph they are used with; validate_pair checks both.
struct NodePair {
  NodeId src = 0;
  NodeId dst = 0;
};

/// Immutable undirected simple graph in compressed sparse adjacency form,
/// with optional per-node feature vectors. Neighbor lists are sorted
/// ascending with no duplicates and no self-loops; construction symmetrizes
/// and deduplicates whatever it is given. Safe for concurrent reads.
class Graph {
 public:
  Graph() = default;

  NodeId num_nodes() const { return num_nodes_; }

  /// Number of undirected edges.
  std::int64_t num_edges() const {
    return static_cast<std::int64_t>(adjacency_.size()) / 2;
  }

  /// Sorted neighbor ids of v, as a view of the stored adjacency.
  std::span<const NodeId> neighbors(NodeId v) const;

  NodeId degree(NodeId v) const {
    return static_cast<NodeId>(neighbors(v).size());
  }

  /// True when {u, v} is an edge. Binary search over the neighbor list.
  bool has_edge(NodeId u, NodeId v) const;

  /// Adjacency matrix entry a_uv as a real (1.0 or 0.0).
  double adjacency(NodeId u, NodeId v) const { return has_edge(u, v) ? 1.0 : 0.0; }

  /// All undirected edges with src < dst, ascending lexicographically.
  std::vector<Edge> edges() const;

  const std::optional<Eigen::MatrixXd>& node_features() const {
    return node_features_;
  }

 private:
  friend Graph build_graph(std::span<const Edge>, NodeId,
                           std::optional<Eigen::MatrixXd>);

  NodeId num_nodes_ = 0;
  std::vector<std::int64_t> offsets_ = {0};
  std::vector<NodeId> adjacency_;
  std::optional<Eigen::MatrixXd> node_features_;
};

/// Builds a graph from an arbitrary edge list: self-loops dropped, duplicates
/// and orientation collapsed. Throws std::out_of_range when an id is not in
/// [0, num_nodes), config_error when node_features rows != num_nodes.
Graph build_graph(std::span<const Edge> edges, NodeId num_nodes,
                  std::optional<Eigen::MatrixXd> node_features = std::nullopt);

/// Throws std::out_of_range for ids outside the graph and config_error when
/// src == dst.
void validate_pair(const Graph& g, NodePair p);

/// The id-pair text format shared by edge lists and pairs files: one pair per
/// line as two whitespace separated non-negative integers; '#' lines and
/// blank lines are ignored. Throws parse_error with the offending line
/// number; an empty result is the caller's concern.
std::vector<Edge> parse_edge_lines(const std::filesystem::path& path);

/// Builds a graph from parse_edge_lines output. num_nodes defaults to
/// 1 + max id; pass an override to keep trailing isolated nodes. Throws
/// parse_error when no edges are found.
Graph load_edge_list(const std::filesystem::path& path,
                     std::optional<NodeId> num_nodes = std::nullopt);

/// Writes the same format, one "src dst" line per undirected edge, src < dst,
/// ascending.
void write_edge_list(const Graph& g, std::ostream& out);
void write_edge_list(const Graph& g, const std::filesystem::path& path);

/// New graph with node v renamed to perm[v]; features rows move along.
/// perm must be a permutation of [0, N).
Graph relabel(const Graph& g, std::span<const NodeId> perm);

// ---------------------------------------------------------------------------
// Deterministic synthetic graphs (test fixtures and toy-experiment inputs).
// ---------------------------------------------------------------------------

enum class GraphKind { path, cycle, complete, theta, er, sbm2 };

GraphKind parse_graph_kind(const std::string& name);
std::string to_string(GraphKind kind);

/// Parameters for generate_synthetic; which fields matter depends on kind:
///   path/cycle/complete: n
///   theta:               k internally disjoint paths of len edges each
///   er:                  n, p, seed
///   sbm2:                n, p_in, p_out, seed (two equal blocks)
struct SyntheticSpec {
  GraphKind kind = GraphKind::er;
  int n = 0;
  int k = 0;
  int len = 0;
  double p = 0.0;
  double p_in = 0.0;
  double p_out = 0.0;
  std::uint64_t seed = 0;
};

/// One-line echo of the spec, fixed formatting, for reproducibility records.
std::string describe(const SyntheticSpec& spec);

/// Deterministic given the spec (same inputs, bit-identical graph).
/// Throws config_error on invalid parameters.
Graph generate_synthetic(const SyntheticSpec& spec);

Graph make_path(int n);
Graph make_cycle(int n);
Graph make_complete(int n);
/// Two terminals 0 and 1 joined by k internally disjoint paths of len edges.
Graph make_theta(int k, int len);
Graph make_er(int n, double p, std::uint64_t seed);
/// Two equal blocks; within-block edge probability p_in, across p_out.
Graph make_sbm2(int n, double p_in, double p_out, std::uint64_t seed);

}  // namespace circlefeat
