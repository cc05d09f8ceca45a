#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "circlefeat/graph.hpp"
#include "circlefeat/rng.hpp"

namespace testutil {

using circlefeat::Graph;
using circlefeat::NodeId;

/// Structural invariants every constructed Graph must satisfy.
inline bool graph_is_valid(const Graph& g) {
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    auto nbrs = g.neighbors(u);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      NodeId v = nbrs[i];
      if (v < 0 || v >= g.num_nodes()) return false;
      if (v == u) return false;
      if (i > 0 && nbrs[i - 1] >= v) return false;  // sorted, no duplicates
      if (!g.has_edge(v, u)) return false;          // symmetry
    }
  }
  return true;
}

inline std::vector<NodeId> random_permutation(NodeId n, std::mt19937_64& rng) {
  std::vector<NodeId> perm(static_cast<std::size_t>(n));
  for (NodeId i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  circlefeat::shuffle(perm, rng);
  return perm;
}

inline std::filesystem::path make_temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("circlefeat_" + tag);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace testutil
