#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "circlefeat/circles.hpp"
#include "circlefeat/graph.hpp"

namespace circlefeat {

/// Induced subgraph around a candidate pair, with the candidate edge removed
/// so it can never leak into its own score.
struct EnclosingSubgraph {
  Graph graph;
  /// Subgraph index -> original node id, ascending.
  std::vector<NodeId> node_map;
  int src_index = 0;
  int dst_index = 0;
};

/// Union of the two endpoints' <= hops neighborhoods, endpoints always
/// included, queried edge dropped. Node ordering is by original id.
EnclosingSubgraph extract_enclosing_subgraph(const Graph& g, NodePair p,
                                             int hops = 1);

/// k distinct non-neighbors of source (source excluded), deterministic in the
/// seed. Throws config_error when fewer than k candidates exist.
std::vector<NodeId> sample_negatives(const Graph& g, NodeId source, int k,
                                     std::uint64_t seed);

/// 1 + |{s in neg_scores : s >= pos_score}|; ties count against the positive.
int rank_of_positive(double pos_score, std::span<const double> neg_scores);

/// Mean reciprocal rank of 1-based ranks.
double mrr(std::span<const int> ranks);

enum class ModelKind { features_logistic, attention };

ModelKind parse_model_kind(const std::string& name);
std::string to_string(ModelKind kind);

/// Everything a toy link-prediction run depends on; two runs with equal
/// configs produce byte-identical reports.
struct ExperimentConfig {
  SyntheticSpec graph;
  double holdout_fraction = 0.1;
  int k_negatives = 100;
  ModelKind model = ModelKind::features_logistic;
  /// Gradient-descent epochs; 0 trains nothing (constant 0.5 scores for the
  /// logistic model).
  int epochs = 200;
  double learning_rate = 0.05;
  /// Cap on training positives (and matched negatives); 0 keeps them all.
  int max_train_pairs = 512;
  int hops = 1;
  int d_max = 10;
  int attention_dim = 8;
  bool full_graph_features = false;
  CircleConfig circle;
  std::uint64_t seed = 0;
  /// Worker cap for per-pair scoring; 0 defers to CIRCLE_FEAT_THREADS/hardware.
  int threads = 0;

  void validate() const;
};

/// One line per key, fixed formatting; embedded in reports.
std::string describe(const ExperimentConfig& config);

struct EvalReport {
  /// (source id, rank of its true target), in holdout order.
  std::vector<std::pair<NodeId, int>> per_source_ranks;
  double mrr = 0.0;
  std::string config_echo;
  std::uint64_t seed = 0;
};

/// Holds out a random edge subset, trains the selected model on the rest,
/// and ranks each held-out target against k sampled negatives.
EvalReport run_toy_experiment(const ExperimentConfig& config);

/// Key/value block followed by a line-per-source section.
void write_report(const EvalReport& report, std::ostream& out);

}  // namespace circlefeat
