#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "circlefeat/circles.hpp"
#include "circlefeat/graph.hpp"
#include "circlefeat/structural.hpp"

namespace circlefeat {

using Vector6d = Eigen::Matrix<double, 6, 1>;

/// Distances are clipped to this many hops by default; unreachable pairs map
/// to clip + 1 so they keep a distinct, finite bias.
inline constexpr int kDefaultDistanceClip = 10;

/// The six per-pair scalars added to the attention logit.
struct PairFeatures {
  double dist_bias = 0.0;  ///< min(distance, d_max); d_max + 1 when unreachable
  double num_bias = 0.0;   ///< shortest-path count (saturating), as a real
  double aa = 0.0;         ///< Adamic-Adar index
  double jac = 0.0;        ///< Jaccard coefficient
  double swing = 0.0;      ///< swing-plus circle feature
  double bridge = 0.0;     ///< bridge circle feature

  Vector6d as_vector() const {
    Vector6d v;
    v << dist_bias, num_bias, aa, jac, swing, bridge;
    return v;
  }
};

/// All six features for one pair. Propagates cap_exceeded_error from the
/// bridge enumeration.
PairFeatures pair_bias(const Graph& g, NodePair p, const CircleConfig& cfg = {},
                       int d_max = kDefaultDistanceClip);

/// The six bias terms as n-by-n planes (PairFeatures field order). Each plane
/// is symmetric with zero diagonal.
struct BiasPlanes {
  std::array<Eigen::MatrixXd, 6> planes;

  Eigen::Index size() const { return planes[0].rows(); }

  /// Coefficient-weighted sum of the planes.
  Eigen::MatrixXd combine(const Vector6d& coeffs) const;
};

BiasPlanes build_bias_planes(const Graph& g, std::span<const NodeId> nodes,
                             const CircleConfig& cfg = {},
                             int d_max = kDefaultDistanceClip, int threads = 1);

/// combine() over the planes: B[a][b] = dot(coeffs, features(nodes[a], nodes[b])).
Eigen::MatrixXd build_bias_matrix(const Graph& g, std::span<const NodeId> nodes,
                                  const CircleConfig& cfg = {},
                                  int d_max = kDefaultDistanceClip,
                                  const Vector6d& coeffs = Vector6d::Ones());

/// raw: bias terms enter the logits as-is (coefficients pinned at 1).
/// weighted: one trainable coefficient per term, initialized at 1.
enum class BiasMode { raw, weighted };

/// Single-head single-layer attention parameters plus the link-scoring head.
struct AttentionParams {
  Eigen::MatrixXd w_query;  ///< d_x by d
  Eigen::MatrixXd w_key;    ///< d_x by d
  Eigen::MatrixXd w_value;  ///< d_x by d
  Vector6d bias_coeffs = Vector6d::Ones();
  Eigen::VectorXd readout;  ///< 2d, applied to the two centered output rows
  double intercept = 0.0;
  BiasMode mode = BiasMode::raw;

  Eigen::Index input_dim() const { return w_query.rows(); }
  Eigen::Index dim() const { return w_query.cols(); }

  void validate() const;

  static AttentionParams zeros(Eigen::Index d_x, Eigen::Index d,
                               BiasMode mode = BiasMode::raw);
  /// Small uniform init, deterministic in the seed.
  static AttentionParams random(Eigen::Index d_x, Eigen::Index d,
                                std::uint64_t seed, BiasMode mode = BiasMode::raw);
};

struct AttentionResult {
  Eigen::MatrixXd output;   ///< n by d
  Eigen::MatrixXd weights;  ///< n by n, rows sum to 1
};

/// Biased self-attention: logits = QK^T/sqrt(d) + bias, row softmax, then
/// value aggregation. The softmax normalizer and the aggregation sum their
/// terms in value order, so the result is equivariant under node permutation
/// bit for bit, not merely up to rounding. Throws std::invalid_argument on
/// shape mismatch.
AttentionResult attention_forward(const Eigen::MatrixXd& x,
                                  const AttentionParams& params,
                                  const Eigen::MatrixXd& bias);

/// The unbiased layer: identical to passing an all-zero bias matrix.
AttentionResult attention_forward(const Eigen::MatrixXd& x,
                                  const AttentionParams& params);

/// One-hot degree buckets (0..15, clipped): deterministic node features for
/// graphs that carry none.
Eigen::MatrixXd degree_bucket_features(const Graph& g);

struct ScoreOptions {
  int hops = 1;
  int d_max = kDefaultDistanceClip;
  /// When set, pair features are computed on the full graph (query edge
  /// removed) instead of on the enclosing subgraph.
  bool full_graph_features = false;
};

/// The six features for one query with the leakage guard applied: computed
/// on the enclosing subgraph by default, or on the full graph minus the
/// query edge when opts.full_graph_features is set.
PairFeatures guarded_pair_features(const Graph& g, NodePair p,
                                   const CircleConfig& cfg = {},
                                   const ScoreOptions& opts = {});

/// Probability that the pair is linked: extract the enclosing subgraph, run
/// the biased layer, concatenate the two centered output rows, logistic
/// readout.
double score_link(const Graph& g, NodePair p, const AttentionParams& params,
                  const CircleConfig& cfg = {}, const ScoreOptions& opts = {});

// ---------------------------------------------------------------------------
// Training and gradient verification
// ---------------------------------------------------------------------------

/// A scoring query inside one forward pass: row indices into x plus a 0/1 label.
struct LabeledPair {
  int a = 0;
  int b = 0;
  double label = 0.0;
};

/// Gradients in the same shapes as the parameters they belong to.
struct AttentionGradients {
  Eigen::MatrixXd w_query;
  Eigen::MatrixXd w_key;
  Eigen::MatrixXd w_value;
  Vector6d bias_coeffs = Vector6d::Zero();
  Eigen::VectorXd readout;
  double intercept = 0.0;
};

/// Mean binary cross-entropy of the targets' scores under the given inputs.
/// Throws numeric_error when the loss is not finite.
double pair_scoring_loss(const AttentionParams& params, const Eigen::MatrixXd& x,
                         const BiasPlanes& planes,
                         std::span<const LabeledPair> targets);

/// Closed-form gradients of pair_scoring_loss for every trainable parameter
/// (bias coefficients only in weighted mode; their slot stays zero in raw).
AttentionGradients analytic_gradients(const AttentionParams& params,
                                      const Eigen::MatrixXd& x,
                                      const BiasPlanes& planes,
                                      std::span<const LabeledPair> targets);

/// Central finite differences of pair_scoring_loss, one scalar at a time.
AttentionGradients numeric_gradients(const AttentionParams& params,
                                     const Eigen::MatrixXd& x,
                                     const BiasPlanes& planes,
                                     std::span<const LabeledPair> targets,
                                     double epsilon);

/// max over parameters of |ga - gn| / max(1e-8, |ga| + |gn|).
double max_relative_error(const AttentionGradients& analytic,
                          const AttentionGradients& numeric, BiasMode mode);

/// Convenience composition of the three functions above. epsilon must lie in
/// [1e-7, 1e-3].
double gradient_check(const AttentionParams& params, const Eigen::MatrixXd& x,
                      const BiasPlanes& planes,
                      std::span<const LabeledPair> targets, double epsilon);

/// One cached training example: a subgraph's inputs plus its centered query.
struct AttentionExample {
  Eigen::MatrixXd x;
  BiasPlanes planes;
  LabeledPair target;
};

/// The forward inputs score_link would assemble for this query, cached so
/// training epochs do not recompute features.
AttentionExample make_attention_example(const Graph& g, NodePair p, double label,
                                        const CircleConfig& cfg = {},
                                        const ScoreOptions& opts = {});

/// Plain full-batch gradient descent on the mean example loss, fixed step.
/// Updates params in place; returns the final loss.
double gradient_descent(AttentionParams& params,
                        std::span<const AttentionExample> examples, int epochs,
                        double learning_rate);

}  // namespace circlefeat
