#include "circlefeat/attention.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "circlefeat/linkpred.hpp"
#include "circlefeat/numeric.hpp"
#include "circlefeat/parallel.hpp"
#include "circlefeat/rng.hpp"

namespace circlefeat {

PairFeatures pair_bias(const Graph& g, NodePair p, const CircleConfig& cfg,
                       int d_max) {
  if (d_max < 1) throw config_error("d_max must be >= 1");
  validate_pair(g, p);

  PairFeatures f;
  PathInfo info = shortest_paths(g, p);
  f.dist_bias = info.reachable()
                    ? static_cast<double>(std::min(*info.distance, d_max))
                    : static_cast<double>(d_max + 1);
  f.num_bias = static_cast<double>(info.num_shortest);
  f.aa = adamic_adar(g, p);
  f.jac = jaccard(g, p);
  f.swing = swing_plus(g, p, cfg);
  f.bridge = bridge_feature(g, p, cfg);
  return f;
}

Eigen::MatrixXd BiasPlanes::combine(const Vector6d& coeffs) const {
  Eigen::MatrixXd b = coeffs[0] * planes[0];
  for (int k = 1; k < 6; ++k) b += coeffs[k] * planes[k];
  return b;
}

BiasPlanes build_bias_planes(const Graph& g, std::span<const NodeId> nodes,
                             const CircleConfig& cfg, int d_max, int threads) {
  std::vector<bool> seen(static_cast<std::size_t>(g.num_nodes()), false);
  for (NodeId v : nodes) {
    if (v < 0 || v >= g.num_nodes()) {
      throw std::out_of_range("node " + std::to_string(v) + " outside [0, " +
                              std::to_string(g.num_nodes()) + ")");
    }
    if (seen[static_cast<std::size_t>(v)]) {
      throw config_error("duplicate node " + std::to_string(v) +
                         " in bias-matrix node list");
    }
    seen[static_cast<std::size_t>(v)] = true;
  }

  auto n = static_cast<Eigen::Index>(nodes.size());
  BiasPlanes planes;
  for (auto& plane : planes.planes) plane = Eigen::MatrixXd::Zero(n, n);

  std::vector<std::pair<Eigen::Index, Eigen::Index>> upper;
  upper.reserve(static_cast<std::size_t>(n) * (n > 0 ? n - 1 : 0) / 2);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a + 1; b < n; ++b) upper.emplace_back(a, b);
  }

  parallel_for(
      static_cast<std::int64_t>(upper.size()),
      [&](std::int64_t t) {
        auto [a, b] = upper[static_cast<std::size_t>(t)];
        PairFeatures f = pair_bias(
            g, {nodes[static_cast<std::size_t>(a)], nodes[static_cast<std::size_t>(b)]},
            cfg, d_max);
        Vector6d v = f.as_vector();
        for (int k = 0; k < 6; ++k) {
          planes.planes[k](a, b) = v[k];
          planes.planes[k](b, a) = v[k];
        }
      },
      threads);
  return planes;
}

Eigen::MatrixXd build_bias_matrix(const Graph& g, std::span<const NodeId> nodes,
                                  const CircleConfig& cfg, int d_max,
                                  const Vector6d& coeffs) {
  return build_bias_planes(g, nodes, cfg, d_max).combine(coeffs);
}

void AttentionParams::validate() const {
  if (w_query.rows() < 1 || w_query.cols() < 1) {
    throw config_error("projection matrices must be non-empty");
  }
  if (w_key.rows() != w_query.rows() || w_key.cols() != w_query.cols() ||
      w_value.rows() != w_query.rows() || w_value.cols() != w_query.cols()) {
    throw std::invalid_argument("shape mismatch: projection matrices disagree");
  }
  if (readout.size() != 2 * dim()) {
    throw std::invalid_argument("shape mismatch: readout must have 2*dim entries");
  }
}

AttentionParams AttentionParams::zeros(Eigen::Index d_x, Eigen::Index d,
                                       BiasMode mode) {
  if (d_x < 1 || d < 1) throw config_error("dimensions must be >= 1");
  AttentionParams p;
  p.w_query = Eigen::MatrixXd::Zero(d_x, d);
  p.w_key = Eigen::MatrixXd::Zero(d_x, d);
  p.w_value = Eigen::MatrixXd::Zero(d_x, d);
  p.readout = Eigen::VectorXd::Zero(2 * d);
  p.mode = mode;
  return p;
}

AttentionParams AttentionParams::random(Eigen::Index d_x, Eigen::Index d,
                                        std::uint64_t seed, BiasMode mode) {
  AttentionParams p = zeros(d_x, d, mode);
  std::mt19937_64 rng(seed);
  const double w_scale = 1.0 / std::sqrt(static_cast<double>(d_x));
  auto fill = [&](Eigen::MatrixXd& m, double scale) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        m(i, j) = (2.0 * uniform01(rng) - 1.0) * scale;
      }
    }
  };
  fill(p.w_query, w_scale);
  fill(p.w_key, w_scale);
  fill(p.w_value, w_scale);
  const double r_scale = 1.0 / std::sqrt(static_cast<double>(2 * d));
  for (Eigen::Index i = 0; i < p.readout.size(); ++i) {
    p.readout[i] = (2.0 * uniform01(rng) - 1.0) * r_scale;
  }
  return p;
}

namespace {

struct ForwardPack {
  Eigen::MatrixXd q, k, v;
  AttentionResult result;
};

// The softmax normalizer and the value aggregation both sum over the node
// axis, the one a relabeling permutes. Summing those two in value order makes
// the whole layer permutation-equivariant bit for bit.
ForwardPack forward_core(const Eigen::MatrixXd& x, const AttentionParams& params,
                         const Eigen::MatrixXd& bias) {
  params.validate();
  const Eigen::Index n = x.rows();
  if (x.cols() != params.input_dim()) {
    throw std::invalid_argument("shape mismatch: x has " +
                                std::to_string(x.cols()) + " columns, params expect " +
                                std::to_string(params.input_dim()));
  }
  if (bias.rows() != n || bias.cols() != n) {
    throw std::invalid_argument("shape mismatch: bias must be n by n");
  }

  ForwardPack pack;
  pack.q = x * params.w_query;
  pack.k = x * params.w_key;
  pack.v = x * params.w_value;
  const Eigen::Index d = params.dim();
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));

  Eigen::MatrixXd logits = (pack.q * pack.k.transpose()) * scale + bias;

  Eigen::MatrixXd& weights = pack.result.weights;
  weights.resize(n, n);
  std::vector<double> terms(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double row_max = logits.row(i).maxCoeff();
    for (Eigen::Index j = 0; j < n; ++j) {
      const double e = std::exp(logits(i, j) - row_max);
      weights(i, j) = e;
      terms[static_cast<std::size_t>(j)] = e;
    }
    weights.row(i) /= ordered_sum(terms);
  }

  Eigen::MatrixXd& output = pack.result.output;
  output = Eigen::MatrixXd::Zero(n, d);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      if (weights(i, a) != weights(i, b)) return weights(i, a) < weights(i, b);
      for (Eigen::Index t = 0; t < d; ++t) {
        if (pack.v(a, t) != pack.v(b, t)) return pack.v(a, t) < pack.v(b, t);
      }
      return false;
    });
    for (Eigen::Index j : order) {
      output.row(i) += weights(i, j) * pack.v.row(j);
    }
  }
  return pack;
}

double readout_logit(const AttentionParams& params, const Eigen::MatrixXd& output,
                     const LabeledPair& target) {
  const Eigen::Index d = params.dim();
  const Eigen::Index n = output.rows();
  if (target.a < 0 || target.a >= n || target.b < 0 || target.b >= n) {
    throw std::out_of_range("target row index outside the input");
  }
  return params.readout.head(d).dot(output.row(target.a)) +
         params.readout.tail(d).dot(output.row(target.b)) + params.intercept;
}

}  // namespace

AttentionResult attention_forward(const Eigen::MatrixXd& x,
                                  const AttentionParams& params,
                                  const Eigen::MatrixXd& bias) {
  return forward_core(x, params, bias).result;
}

AttentionResult attention_forward(const Eigen::MatrixXd& x,
                                  const AttentionParams& params) {
  return forward_core(x, params, Eigen::MatrixXd::Zero(x.rows(), x.rows())).result;
}

Eigen::MatrixXd degree_bucket_features(const Graph& g) {
  constexpr int kBuckets = 16;
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(g.num_nodes(), kBuckets);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    int bucket = std::min<int>(g.degree(v), kBuckets - 1);
    x(v, bucket) = 1.0;
  }
  return x;
}

namespace {

Graph without_edge(const Graph& g, NodePair p) {
  auto edges = g.edges();
  Edge target{std::min(p.src, p.dst), std::max(p.src, p.dst)};
  std::erase(edges, target);
  std::optional<Eigen::MatrixXd> features;
  if (g.node_features()) features = *g.node_features();
  return build_graph(edges, g.num_nodes(), std::move(features));
}

Eigen::MatrixXd subgraph_inputs(const Graph& g, const EnclosingSubgraph& sub) {
  if (g.node_features()) {
    const Eigen::MatrixXd& all = *g.node_features();
    Eigen::MatrixXd x(static_cast<Eigen::Index>(sub.node_map.size()), all.cols());
    for (std::size_t i = 0; i < sub.node_map.size(); ++i) {
      x.row(static_cast<Eigen::Index>(i)) = all.row(sub.node_map[i]);
    }
    return x;
  }
  return degree_bucket_features(sub.graph);
}

BiasPlanes subgraph_planes(const Graph& g, NodePair p,
                           const EnclosingSubgraph& sub, const CircleConfig& cfg,
                           const ScoreOptions& opts) {
  if (opts.full_graph_features) {
    // Features on the whole graph, query edge removed; the subgraph still
    // frames which pairs enter the bias matrix.
    Graph guarded = without_edge(g, p);
    return build_bias_planes(guarded, sub.node_map, cfg, opts.d_max);
  }
  std::vector<NodeId> identity(sub.node_map.size());
  std::iota(identity.begin(), identity.end(), NodeId{0});
  return build_bias_planes(sub.graph, identity, cfg, opts.d_max);
}

}  // namespace

PairFeatures guarded_pair_features(const Graph& g, NodePair p,
                                   const CircleConfig& cfg,
                                   const ScoreOptions& opts) {
  cfg.validate();
  if (opts.hops < 1) throw config_error("hops must be >= 1");
  EnclosingSubgraph sub = extract_enclosing_subgraph(g, p, opts.hops);
  if (opts.full_graph_features) {
    return pair_bias(without_edge(g, p), p, cfg, opts.d_max);
  }
  return pair_bias(sub.graph, {static_cast<NodeId>(sub.src_index),
                               static_cast<NodeId>(sub.dst_index)},
                   cfg, opts.d_max);
}

AttentionExample make_attention_example(const Graph& g, NodePair p, double label,
                                        const CircleConfig& cfg,
                                        const ScoreOptions& opts) {
  cfg.validate();
  if (opts.hops < 1) throw config_error("hops must be >= 1");
  if (opts.d_max < 1) throw config_error("d_max must be >= 1");

  EnclosingSubgraph sub = extract_enclosing_subgraph(g, p, opts.hops);
  AttentionExample ex;
  ex.x = subgraph_inputs(g, sub);
  ex.planes = subgraph_planes(g, p, sub, cfg, opts);
  ex.target = {sub.src_index, sub.dst_index, label};
  return ex;
}

double score_link(const Graph& g, NodePair p, const AttentionParams& params,
                  const CircleConfig& cfg, const ScoreOptions& opts) {
  AttentionExample ex = make_attention_example(g, p, 0.0, cfg, opts);
  ForwardPack pack =
      forward_core(ex.x, params, ex.planes.combine(params.bias_coeffs));
  double z = readout_logit(params, pack.result.output, ex.target);
  return sigmoid(z);
}

double pair_scoring_loss(const AttentionParams& params, const Eigen::MatrixXd& x,
                         const BiasPlanes& planes,
                         std::span<const LabeledPair> targets) {
  if (targets.empty()) throw config_error("no targets to score");
  ForwardPack pack = forward_core(x, params, planes.combine(params.bias_coeffs));
  // Value-ordered accumulation: the mean depends only on the multiset of
  // per-target losses, which keeps finite-difference probes of symmetric
  // configurations exactly symmetric.
  std::vector<double> terms;
  terms.reserve(targets.size());
  for (const LabeledPair& t : targets) {
    terms.push_back(
        bce_from_logit(readout_logit(params, pack.result.output, t), t.label));
  }
  double loss = ordered_sum(terms) / static_cast<double>(targets.size());
  if (!std::isfinite(loss)) throw numeric_error("loss is not finite");
  return loss;
}

AttentionGradients analytic_gradients(const AttentionParams& params,
                                      const Eigen::MatrixXd& x,
                                      const BiasPlanes& planes,
                                      std::span<const LabeledPair> targets) {
  if (targets.empty()) throw config_error("no targets to score");
  ForwardPack pack = forward_core(x, params, planes.combine(params.bias_coeffs));
  const Eigen::MatrixXd& weights = pack.result.weights;
  const Eigen::MatrixXd& output = pack.result.output;
  const Eigen::Index n = x.rows();
  const Eigen::Index d = params.dim();
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  const double inv_t = 1.0 / static_cast<double>(targets.size());

  AttentionGradients grads;
  grads.readout = Eigen::VectorXd::Zero(2 * d);
  Eigen::MatrixXd d_output = Eigen::MatrixXd::Zero(n, d);

  for (const LabeledPair& t : targets) {
    const double z = readout_logit(params, output, t);
    const double dz = (sigmoid(z) - t.label) * inv_t;
    grads.readout.head(d) += dz * output.row(t.a).transpose();
    grads.readout.tail(d) += dz * output.row(t.b).transpose();
    grads.intercept += dz;
    d_output.row(t.a) += dz * params.readout.head(d).transpose();
    d_output.row(t.b) += dz * params.readout.tail(d).transpose();
  }

  // output = weights * v
  Eigen::MatrixXd d_weights = d_output * pack.v.transpose();
  Eigen::MatrixXd d_v = weights.transpose() * d_output;

  // softmax rows: dL_i = w_i o (dW_i - <dW_i, w_i>)
  Eigen::MatrixXd d_logits(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double row_dot = d_weights.row(i).dot(weights.row(i));
    d_logits.row(i) =
        (weights.row(i).array() * (d_weights.row(i).array() - row_dot)).matrix();
  }

  if (params.mode == BiasMode::weighted) {
    for (int k = 0; k < 6; ++k) {
      grads.bias_coeffs[k] =
          (d_logits.array() * planes.planes[static_cast<std::size_t>(k)].array())
              .sum();
    }
  }

  Eigen::MatrixXd d_q = d_logits * pack.k * scale;
  Eigen::MatrixXd d_k = d_logits.transpose() * pack.q * scale;
  grads.w_query = x.transpose() * d_q;
  grads.w_key = x.transpose() * d_k;
  grads.w_value = x.transpose() * d_v;
  return grads;
}

AttentionGradients numeric_gradients(const AttentionParams& params,
                                     const Eigen::MatrixXd& x,
                                     const BiasPlanes& planes,
                                     std::span<const LabeledPair> targets,
                                     double epsilon) {
  AttentionParams work = params;
  AttentionGradients grads;
  grads.w_query = Eigen::MatrixXd::Zero(params.w_query.rows(), params.w_query.cols());
  grads.w_key = grads.w_query;
  grads.w_value = grads.w_query;
  grads.readout = Eigen::VectorXd::Zero(params.readout.size());

  auto central = [&](double& slot) {
    const double original = slot;
    slot = original + epsilon;
    const double up = pair_scoring_loss(work, x, planes, targets);
    slot = original - epsilon;
    const double down = pair_scoring_loss(work, x, planes, targets);
    slot = original;
    return (up - down) / (2.0 * epsilon);
  };

  auto sweep = [&](Eigen::MatrixXd& m, Eigen::MatrixXd& out) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = central(m(i, j));
    }
  };
  sweep(work.w_query, grads.w_query);
  sweep(work.w_key, grads.w_key);
  sweep(work.w_value, grads.w_value);
  if (params.mode == BiasMode::weighted) {
    for (int k = 0; k < 6; ++k) grads.bias_coeffs[k] = central(work.bias_coeffs[k]);
  }
  for (Eigen::Index i = 0; i < work.readout.size(); ++i) {
    grads.readout[i] = central(work.readout[i]);
  }
  grads.intercept = central(work.intercept);
  return grads;
}

namespace {

void fold_error(double analytic, double numeric, double& worst) {
  const double denom = std::max(1e-8, std::abs(analytic) + std::abs(numeric));
  worst = std::max(worst, std::abs(analytic - numeric) / denom);
}

}  // namespace

double max_relative_error(const AttentionGradients& analytic,
                          const AttentionGradients& numeric, BiasMode mode) {
  double worst = 0.0;
  auto fold_matrix = [&](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) fold_error(a(i, j), b(i, j), worst);
    }
  };
  fold_matrix(analytic.w_query, numeric.w_query);
  fold_matrix(analytic.w_key, numeric.w_key);
  fold_matrix(analytic.w_value, numeric.w_value);
  if (mode == BiasMode::weighted) {
    for (int k = 0; k < 6; ++k) {
      fold_error(analytic.bias_coeffs[k], numeric.bias_coeffs[k], worst);
    }
  }
  for (Eigen::Index i = 0; i < analytic.readout.size(); ++i) {
    fold_error(analytic.readout[i], numeric.readout[i], worst);
  }
  fold_error(analytic.intercept, numeric.intercept, worst);
  return worst;
}

double gradient_check(const AttentionParams& params, const Eigen::MatrixXd& x,
                      const BiasPlanes& planes,
                      std::span<const LabeledPair> targets, double epsilon) {
  if (epsilon < 1e-7 || epsilon > 1e-3) {
    throw config_error("epsilon must lie in [1e-7, 1e-3]");
  }
  AttentionGradients ga = analytic_gradients(params, x, planes, targets);
  AttentionGradients gn = numeric_gradients(params, x, planes, targets, epsilon);
  return max_relative_error(ga, gn, params.mode);
}

double gradient_descent(AttentionParams& params,
                        std::span<const AttentionExample> examples, int epochs,
                        double learning_rate) {
  if (examples.empty()) throw config_error("no training examples");
  if (epochs < 0) throw config_error("epochs must be >= 0");
  if (!(learning_rate > 0.0)) throw config_error("learning_rate must be > 0");

  const double inv_e = 1.0 / static_cast<double>(examples.size());
  for (int epoch = 0; epoch < epochs; ++epoch) {
    AttentionGradients acc;
    acc.w_query = Eigen::MatrixXd::Zero(params.w_query.rows(), params.w_query.cols());
    acc.w_key = acc.w_query;
    acc.w_value = acc.w_query;
    acc.readout = Eigen::VectorXd::Zero(params.readout.size());
    for (const AttentionExample& ex : examples) {
      AttentionGradients g =
          analytic_gradients(params, ex.x, ex.planes, {&ex.target, 1});
      acc.w_query += inv_e * g.w_query;
      acc.w_key += inv_e * g.w_key;
      acc.w_value += inv_e * g.w_value;
      acc.readout += inv_e * g.readout;
      acc.intercept += inv_e * g.intercept;
      if (params.mode == BiasMode::weighted) {
        acc.bias_coeffs += inv_e * g.bias_coeffs;
      }
    }
    params.w_query -= learning_rate * acc.w_query;
    params.w_key -= learning_rate * acc.w_key;
    params.w_value -= learning_rate * acc.w_value;
    params.readout -= learning_rate * acc.readout;
    params.intercept -= learning_rate * acc.intercept;
    if (params.mode == BiasMode::weighted) {
      params.bias_coeffs -= learning_rate * acc.bias_coeffs;
    }
  }

  double loss = 0.0;
  for (const AttentionExample& ex : examples) {
    loss += pair_scoring_loss(params, ex.x, ex.planes, {&ex.target, 1});
  }
  return loss * inv_e;
}

}  // namespace circlefeat
