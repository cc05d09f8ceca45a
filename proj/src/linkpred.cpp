#include "circlefeat/linkpred.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <queue>
#include <set>

#include "circlefeat/attention.hpp"
#include "circlefeat/numeric.hpp"
#include "circlefeat/parallel.hpp"
#include "circlefeat/rng.hpp"

namespace circlefeat {

EnclosingSubgraph extract_enclosing_subgraph(const Graph& g, NodePair p,
                                             int hops) {
  validate_pair(g, p);
  if (hops < 1) throw config_error("hops must be >= 1");

  const auto n = static_cast<std::size_t>(g.num_nodes());
  std::vector<bool> in_set(n, false);
  auto sweep = [&](NodeId start) {
    std::vector<int> depth(n, -1);
    std::queue<NodeId> frontier;
    depth[static_cast<std::size_t>(start)] = 0;
    in_set[static_cast<std::size_t>(start)] = true;
    frontier.push(start);
    while (!frontier.empty()) {
      NodeId u = frontier.front();
      frontier.pop();
      if (depth[static_cast<std::size_t>(u)] == hops) continue;
      for (NodeId v : g.neighbors(u)) {
        auto vi = static_cast<std::size_t>(v);
        if (depth[vi] < 0) {
          depth[vi] = depth[static_cast<std::size_t>(u)] + 1;
          in_set[vi] = true;
          frontier.push(v);
        }
      }
    }
  };
  sweep(p.src);
  sweep(p.dst);

  EnclosingSubgraph sub;
  std::vector<int> index_of(n, -1);
  for (std::size_t v = 0; v < n; ++v) {
    if (in_set[v]) {
      index_of[v] = static_cast<int>(sub.node_map.size());
      sub.node_map.push_back(static_cast<NodeId>(v));
    }
  }

  const Edge queried{std::min(p.src, p.dst), std::max(p.src, p.dst)};
  std::vector<Edge> edges;
  for (NodeId u : sub.node_map) {
    for (NodeId v : g.neighbors(u)) {
      if (v <= u || index_of[static_cast<std::size_t>(v)] < 0) continue;
      if (Edge{u, v} == queried) continue;  // leakage guard
      edges.emplace_back(index_of[static_cast<std::size_t>(u)],
                         index_of[static_cast<std::size_t>(v)]);
    }
  }
  sub.graph = build_graph(edges, static_cast<NodeId>(sub.node_map.size()));
  sub.src_index = index_of[static_cast<std::size_t>(p.src)];
  sub.dst_index = index_of[static_cast<std::size_t>(p.dst)];
  return sub;
}

std::vector<NodeId> sample_negatives(const Graph& g, NodeId source, int k,
                                     std::uint64_t seed) {
  if (k < 1) throw config_error("k must be >= 1");
  auto nbrs = g.neighbors(source);  // validates source

  std::vector<NodeId> candidates;
  candidates.reserve(static_cast<std::size_t>(g.num_nodes()));
  std::size_t cursor = 0;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    while (cursor < nbrs.size() && nbrs[cursor] < v) ++cursor;
    if (v == source || (cursor < nbrs.size() && nbrs[cursor] == v)) continue;
    candidates.push_back(v);
  }
  if (candidates.size() < static_cast<std::size_t>(k)) {
    throw config_error("source " + std::to_string(source) + " has only " +
                       std::to_string(candidates.size()) +
                       " non-neighbors, need " + std::to_string(k));
  }

  std::mt19937_64 rng(seed);
  for (int i = 0; i < k; ++i) {
    auto j = static_cast<std::size_t>(i) +
             static_cast<std::size_t>(uniform_below(
                 rng, static_cast<std::uint64_t>(candidates.size() - i)));
    std::swap(candidates[static_cast<std::size_t>(i)], candidates[j]);
  }
  candidates.resize(static_cast<std::size_t>(k));
  return candidates;
}

int rank_of_positive(double pos_score, std::span<const double> neg_scores) {
  if (neg_scores.empty()) throw config_error("no negative scores");
  if (!std::isfinite(pos_score)) throw numeric_error("positive score not finite");
  int rank = 1;
  for (double s : neg_scores) {
    if (!std::isfinite(s)) throw numeric_error("negative score not finite");
    if (s >= pos_score) ++rank;
  }
  return rank;
}

double mrr(std::span<const int> ranks) {
  if (ranks.empty()) throw config_error("no ranks");
  double sum = 0.0;
  for (int r : ranks) {
    if (r < 1) throw config_error("ranks must be >= 1");
    sum += 1.0 / static_cast<double>(r);
  }
  return sum / static_cast<double>(ranks.size());
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "features-logistic") return ModelKind::features_logistic;
  if (name == "attention") return ModelKind::attention;
  throw config_error("unknown model \"" + name + "\"");
}

std::string to_string(ModelKind kind) {
  return kind == ModelKind::features_logistic ? "features-logistic" : "attention";
}

void ExperimentConfig::validate() const {
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
    throw config_error("holdout_fraction must lie in (0, 1)");
  }
  if (k_negatives < 1) throw config_error("k_negatives must be >= 1");
  if (epochs < 0) throw config_error("epochs must be >= 0");
  if (!(learning_rate > 0.0)) throw config_error("learning_rate must be > 0");
  if (max_train_pairs < 0) throw config_error("max_train_pairs must be >= 0");
  if (hops < 1) throw config_error("hops must be >= 1");
  if (d_max < 1) throw config_error("d_max must be >= 1");
  if (attention_dim < 1) throw config_error("attention_dim must be >= 1");
  if (threads < 0) throw config_error("threads must be >= 0");
  circle.validate();
}

namespace {

std::string real_token(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

constexpr std::uint64_t kHoldoutTag = 0x686f6c64;
constexpr std::uint64_t kTrainNegTag = 0x746e6567;
constexpr std::uint64_t kInitTag = 0x696e6974;

std::uint64_t source_seed(std::uint64_t seed, NodeId source) {
  return derive_seed(seed, (std::uint64_t{1} << 32) |
                               static_cast<std::uint64_t>(source));
}

/// Uniform non-edges of g, distinct, deterministic in the seed.
std::vector<NodePair> sample_nonedges(const Graph& g, std::size_t count,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto n = static_cast<std::uint64_t>(g.num_nodes());
  std::set<Edge> chosen;
  std::vector<NodePair> out;
  std::size_t attempts = 200 * count + 10000;
  while (out.size() < count && attempts-- > 0) {
    auto u = static_cast<NodeId>(uniform_below(rng, n));
    auto v = static_cast<NodeId>(uniform_below(rng, n));
    if (u == v) continue;
    Edge e{std::min(u, v), std::max(u, v)};
    if (g.has_edge(e.first, e.second)) continue;
    if (!chosen.insert(e).second) continue;
    out.push_back({e.first, e.second});
  }
  if (out.size() < count) {
    throw config_error("could not sample " + std::to_string(count) +
                       " non-edges; graph too dense");
  }
  return out;
}

struct LogisticModel {
  Vector6d weights = Vector6d::Zero();
  double intercept = 0.0;
  Vector6d mean = Vector6d::Zero();
  Vector6d scale = Vector6d::Ones();

  double score(const PairFeatures& f) const {
    Vector6d z = (f.as_vector() - mean).cwiseQuotient(scale);
    return sigmoid(weights.dot(z) + intercept);
  }
};

LogisticModel train_logistic(const std::vector<PairFeatures>& features,
                             const std::vector<double>& labels, int epochs,
                             double learning_rate) {
  LogisticModel model;
  const auto t = static_cast<Eigen::Index>(features.size());
  Eigen::MatrixXd f(t, 6);
  Eigen::VectorXd y(t);
  for (Eigen::Index i = 0; i < t; ++i) {
    f.row(i) = features[static_cast<std::size_t>(i)].as_vector().transpose();
    y[i] = labels[static_cast<std::size_t>(i)];
  }

  model.mean = f.colwise().mean().transpose();
  for (int c = 0; c < 6; ++c) {
    double var = (f.col(c).array() - model.mean[c]).square().mean();
    model.scale[c] = var > 1e-24 ? std::sqrt(var) : 1.0;
  }
  Eigen::MatrixXd z =
      (f.rowwise() - model.mean.transpose()).array().rowwise() /
      model.scale.transpose().array();

  Eigen::VectorXd w = Eigen::VectorXd::Zero(6);
  double b = 0.0;
  const double inv_t = 1.0 / static_cast<double>(t);
  for (int epoch = 0; epoch < epochs; ++epoch) {
    Eigen::VectorXd logit = z * w;
    logit.array() += b;
    Eigen::VectorXd residual =
        logit.unaryExpr([](double v) { return sigmoid(v); }) - y;
    w -= learning_rate * inv_t * (z.transpose() * residual);
    b -= learning_rate * inv_t * residual.sum();
  }
  model.weights = w;
  model.intercept = b;
  return model;
}

}  // namespace

std::string describe(const ExperimentConfig& config) {
  std::string s;
  s += "model " + to_string(config.model) + "\n";
  s += "graph " + describe(config.graph) + "\n";
  s += "holdout_fraction " + real_token(config.holdout_fraction) + "\n";
  s += "k_negatives " + std::to_string(config.k_negatives) + "\n";
  s += "epochs " + std::to_string(config.epochs) + "\n";
  s += "learning_rate " + real_token(config.learning_rate) + "\n";
  s += "max_train_pairs " + std::to_string(config.max_train_pairs) + "\n";
  s += "hops " + std::to_string(config.hops) + "\n";
  s += "d_max " + std::to_string(config.d_max) + "\n";
  s += "attention_dim " + std::to_string(config.attention_dim) + "\n";
  s += "full_graph_features " + std::string(config.full_graph_features ? "1" : "0") + "\n";
  s += "alpha " + real_token(config.circle.alpha) + "\n";
  s += "include_self_pairs " + std::string(config.circle.include_self_pairs ? "1" : "0") + "\n";
  s += "max_circle_len " + std::to_string(config.circle.max_circle_len) + "\n";
  s += "max_bridges " + std::to_string(config.circle.max_bridges) + "\n";
  s += "seed " + std::to_string(config.seed) + "\n";
  return s;
}

EvalReport run_toy_experiment(const ExperimentConfig& config) {
  config.validate();
  const Graph g = generate_synthetic(config.graph);
  std::vector<Edge> edges = g.edges();
  const std::size_t m = edges.size();
  const auto holdout_count = static_cast<std::size_t>(
      std::floor(config.holdout_fraction * static_cast<double>(m)));
  if (holdout_count < 1) {
    throw config_error("degenerate split: no holdout positives");
  }

  std::mt19937_64 holdout_rng(derive_seed(config.seed, kHoldoutTag));
  shuffle(edges, holdout_rng);
  const std::vector<Edge> holdout(edges.begin(),
                                  edges.begin() + static_cast<std::ptrdiff_t>(holdout_count));
  const std::vector<Edge> train_edges(
      edges.begin() + static_cast<std::ptrdiff_t>(holdout_count), edges.end());
  if (train_edges.empty()) throw config_error("degenerate split: no training edges");
  const Graph train_graph = build_graph(train_edges, g.num_nodes());

  const ScoreOptions opts{config.hops, config.d_max, config.full_graph_features};

  // Balanced training pairs: surviving edges against sampled non-edges.
  std::size_t pos_count = train_edges.size();
  if (config.max_train_pairs > 0) {
    pos_count = std::min(pos_count, static_cast<std::size_t>(config.max_train_pairs));
  }
  std::vector<NodePair> train_pairs;
  std::vector<double> train_labels;
  for (std::size_t i = 0; i < pos_count; ++i) {
    train_pairs.push_back({train_edges[i].first, train_edges[i].second});
    train_labels.push_back(1.0);
  }
  for (NodePair p :
       sample_nonedges(g, pos_count, derive_seed(config.seed, kTrainNegTag))) {
    train_pairs.push_back(p);
    train_labels.push_back(0.0);
  }

  std::function<double(NodePair)> score;
  LogisticModel logistic;
  AttentionParams params;

  if (config.model == ModelKind::features_logistic) {
    std::vector<PairFeatures> features(train_pairs.size());
    parallel_for(
        static_cast<std::int64_t>(train_pairs.size()),
        [&](std::int64_t i) {
          features[static_cast<std::size_t>(i)] = guarded_pair_features(
              train_graph, train_pairs[static_cast<std::size_t>(i)],
              config.circle, opts);
        },
        config.threads);
    logistic = train_logistic(features, train_labels, config.epochs,
                              config.learning_rate);
    score = [&](NodePair p) {
      return logistic.score(
          guarded_pair_features(train_graph, p, config.circle, opts));
    };
  } else {
    const Eigen::Index d_x =
        train_graph.node_features() ? train_graph.node_features()->cols() : 16;
    params = AttentionParams::random(d_x, config.attention_dim,
                                     derive_seed(config.seed, kInitTag));
    std::vector<AttentionExample> examples(train_pairs.size());
    parallel_for(
        static_cast<std::int64_t>(train_pairs.size()),
        [&](std::int64_t i) {
          auto idx = static_cast<std::size_t>(i);
          examples[idx] = make_attention_example(
              train_graph, train_pairs[idx], train_labels[idx], config.circle, opts);
        },
        config.threads);
    gradient_descent(params, examples, config.epochs, config.learning_rate);
    score = [&](NodePair p) {
      return score_link(train_graph, p, params, config.circle, opts);
    };
  }

  std::vector<std::pair<NodeId, int>> ranks(holdout.size());
  parallel_for(
      static_cast<std::int64_t>(holdout.size()),
      [&](std::int64_t i) {
        const auto [source, target] = holdout[static_cast<std::size_t>(i)];
        std::vector<NodeId> negatives =
            sample_negatives(g, source, config.k_negatives,
                             source_seed(config.seed, source));
        std::vector<double> neg_scores;
        neg_scores.reserve(negatives.size());
        for (NodeId w : negatives) neg_scores.push_back(score({source, w}));
        const double pos_score = score({source, target});
        ranks[static_cast<std::size_t>(i)] = {source,
                                              rank_of_positive(pos_score, neg_scores)};
      },
      config.threads);

  EvalReport report;
  report.per_source_ranks = std::move(ranks);
  std::vector<int> bare;
  bare.reserve(report.per_source_ranks.size());
  for (const auto& [src, rank] : report.per_source_ranks) bare.push_back(rank);
  report.mrr = mrr(bare);
  report.config_echo = describe(config);
  report.seed = config.seed;
  return report;
}

void write_report(const EvalReport& report, std::ostream& out) {
  out << report.config_echo;
  out << "num_sources " << report.per_source_ranks.size() << '\n';
  out << "mrr " << real_token(report.mrr) << '\n';
  out << "# source rank\n";
  for (const auto& [source, rank] : report.per_source_ranks) {
    out << source << ' ' << rank << '\n';
  }
}

}  // namespace circlefeat
