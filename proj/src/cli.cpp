#include "circlefeat/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>

#include <CLI11.hpp>

#include "circlefeat/linkpred.hpp"
#include "circlefeat/parallel.hpp"

namespace circlefeat {

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string fixed_int(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(std::llround(v)));
  return buf;
}

/// "-" means standard output; anything else is opened for writing.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) : path_(path) {
    if (path == "-") {
      stream_ = &std::cout;
      return;
    }
    file_.open(path, std::ios::binary);
    if (!file_) throw std::runtime_error("cannot write " + path);
    stream_ = &file_;
  }

  std::ostream& stream() { return *stream_; }

  void finish() {
    stream_->flush();
    if (stream_->fail()) throw std::runtime_error("write failed: " + path_);
  }

 private:
  std::string path_;
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

void print_matrix(const Eigen::MatrixXd& m, std::ostream& out) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ' ';
      out << fixed6(m(i, j));
    }
    out << '\n';
  }
}

struct GenOptions {
  std::string kind = "er";
  int n = 0;
  int k = 0;
  int len = 0;
  double p = 0.0;
  double p_in = 0.0;
  double p_out = 0.0;
  std::uint64_t seed = 0;
  std::string out = "-";
};

struct FeatureOptions {
  std::string graph;
  std::string pairs;
  std::string out = "-";
  int num_nodes = 0;  // 0 infers 1 + max id
  CircleConfig circle;
  int d_max = kDefaultDistanceClip;
  int threads = 0;
};

struct AttendOptions {
  std::string graph;
  NodeId src = 0;
  NodeId dst = 0;
  std::string out = "-";
  int num_nodes = 0;
  CircleConfig circle;
  int d_max = kDefaultDistanceClip;
  int hops = 1;
  int dim = 8;
  std::uint64_t seed = 0;
  std::string mode = "raw";
  bool full_graph_features = false;
};

struct EvalOptions {
  GenOptions graph;
  std::string model = "features-logistic";
  double holdout = 0.1;
  int k_negatives = 100;
  int epochs = 200;
  double learning_rate = 0.05;
  int max_train_pairs = 512;
  int hops = 1;
  int d_max = kDefaultDistanceClip;
  int dim = 8;
  bool full_graph_features = false;
  CircleConfig circle;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out = "-";
};

SyntheticSpec to_spec(const GenOptions& o) {
  SyntheticSpec spec;
  spec.kind = parse_graph_kind(o.kind);
  spec.n = o.n;
  spec.k = o.k;
  spec.len = o.len;
  spec.p = o.p;
  spec.p_in = o.p_in;
  spec.p_out = o.p_out;
  spec.seed = o.seed;
  return spec;
}

void add_graph_spec_flags(CLI::App& cmd, GenOptions& o) {
  cmd.add_option("--kind", o.kind, "graph kind: path|cycle|complete|theta|er|sbm2")
      ->required();
  cmd.add_option("--n", o.n, "node count (path/cycle/complete/er/sbm2)")
      ->capture_default_str();
  cmd.add_option("--k", o.k, "theta: number of disjoint paths")->capture_default_str();
  cmd.add_option("--len", o.len, "theta: edges per path")->capture_default_str();
  cmd.add_option("--p", o.p, "er: edge probability")->capture_default_str();
  cmd.add_option("--p-in", o.p_in, "sbm2: within-block edge probability")
      ->capture_default_str();
  cmd.add_option("--p-out", o.p_out, "sbm2: across-block edge probability")
      ->capture_default_str();
  cmd.add_option("--seed", o.seed, "generator seed")->capture_default_str();
}

void add_circle_flags(CLI::App& cmd, CircleConfig& cfg) {
  cmd.add_option("--alpha", cfg.alpha, "swing-plus damping constant")
      ->capture_default_str();
  cmd.add_flag("--self-pairs,!--no-self-pairs", cfg.include_self_pairs,
               "include u == v terms in the swing-plus double sum")
      ->capture_default_str();
  cmd.add_option("--max-circle-len", cfg.max_circle_len, "circle length bound K")
      ->capture_default_str();
  cmd.add_option("--max-bridges", cfg.max_bridges,
                 "cap on enumerated bridges per pair")
      ->capture_default_str();
}

int run_gen(const GenOptions& o) {
  Graph g = generate_synthetic(to_spec(o));
  OutputTarget out(o.out);
  write_edge_list(g, out.stream());
  out.finish();
  return 0;
}

int run_features(const FeatureOptions& o) {
  std::optional<NodeId> override_n;
  if (o.num_nodes > 0) override_n = o.num_nodes;
  Graph g = load_edge_list(o.graph, override_n);

  std::vector<NodePair> pairs;
  for (const auto& [a, b] : parse_edge_lines(o.pairs)) pairs.push_back({a, b});

  std::vector<PairFeatures> rows(pairs.size());
  parallel_for(
      static_cast<std::int64_t>(pairs.size()),
      [&](std::int64_t i) {
        rows[static_cast<std::size_t>(i)] =
            pair_bias(g, pairs[static_cast<std::size_t>(i)], o.circle, o.d_max);
      },
      o.threads);

  OutputTarget out(o.out);
  write_features(pairs, rows, out.stream());
  out.finish();
  return 0;
}

int run_attend(const AttendOptions& o) {
  std::optional<NodeId> override_n;
  if (o.num_nodes > 0) override_n = o.num_nodes;
  Graph g = load_edge_list(o.graph, override_n);

  NodePair p{o.src, o.dst};
  ScoreOptions opts{o.hops, o.d_max, o.full_graph_features};
  BiasMode mode;
  if (o.mode == "raw") {
    mode = BiasMode::raw;
  } else if (o.mode == "weighted") {
    mode = BiasMode::weighted;
  } else {
    throw config_error("mode must be raw or weighted");
  }

  EnclosingSubgraph sub = extract_enclosing_subgraph(g, p, o.hops);
  AttentionExample ex = make_attention_example(g, p, 0.0, o.circle, opts);
  AttentionParams params =
      AttentionParams::random(ex.x.cols(), o.dim, o.seed, mode);
  AttentionResult res =
      attention_forward(ex.x, params, ex.planes.combine(params.bias_coeffs));
  double score = score_link(g, p, params, o.circle, opts);

  OutputTarget target(o.out);
  std::ostream& out = target.stream();
  out << "graph " << o.graph << " nodes=" << g.num_nodes()
      << " edges=" << g.num_edges() << '\n';
  out << "pair " << p.src << ' ' << p.dst << '\n';
  out << "subgraph nodes=" << sub.graph.num_nodes()
      << " edges=" << sub.graph.num_edges() << '\n';
  out << "nodes";
  for (NodeId v : sub.node_map) out << ' ' << v;
  out << '\n';
  out << "bias\n";
  print_matrix(ex.planes.combine(params.bias_coeffs), out);
  out << "weights\n";
  print_matrix(res.weights, out);
  out << "row_sums\n";
  for (Eigen::Index i = 0; i < res.weights.rows(); ++i) {
    if (i > 0) out << ' ';
    out << fixed6(res.weights.row(i).sum());
  }
  out << '\n';
  out << "centered " << sub.src_index << ' ' << sub.dst_index << '\n';
  out << "score " << fixed6(score) << '\n';
  target.finish();
  return 0;
}

int run_eval(const EvalOptions& o) {
  ExperimentConfig config;
  config.graph = to_spec(o.graph);
  config.holdout_fraction = o.holdout;
  config.k_negatives = o.k_negatives;
  config.model = parse_model_kind(o.model);
  config.epochs = o.epochs;
  config.learning_rate = o.learning_rate;
  config.max_train_pairs = o.max_train_pairs;
  config.hops = o.hops;
  config.d_max = o.d_max;
  config.attention_dim = o.dim;
  config.full_graph_features = o.full_graph_features;
  config.circle = o.circle;
  config.seed = o.seed;
  config.threads = o.threads;

  EvalReport report = run_toy_experiment(config);
  OutputTarget out(o.out);
  write_report(report, out.stream());
  out.finish();
  return 0;
}

}  // namespace

void write_features(std::span<const NodePair> pairs,
                    std::span<const PairFeatures> rows, std::ostream& out) {
  if (pairs.size() != rows.size()) {
    throw config_error("pairs and feature rows differ in length");
  }
  out << "src,dst,dist,nsp,aa,jac,swing_plus,bridge\n";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const PairFeatures& f = rows[i];
    out << pairs[i].src << ',' << pairs[i].dst << ',' << fixed_int(f.dist_bias)
        << ',' << fixed_int(f.num_bias) << ',' << fixed6(f.aa) << ','
        << fixed6(f.jac) << ',' << fixed6(f.swing) << ',' << fixed6(f.bridge)
        << '\n';
  }
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"structural circle features and biased attention for link prediction"};
  app.require_subcommand(1);

  GenOptions gen_opts;
  auto* gen = app.add_subcommand("gen", "generate a synthetic graph edge list");
  add_graph_spec_flags(*gen, gen_opts);
  gen->add_option("--out", gen_opts.out, "output path, - for stdout")
      ->capture_default_str();

  FeatureOptions feat_opts;
  auto* features =
      app.add_subcommand("features", "compute the six pair features as CSV");
  features->add_option("--graph", feat_opts.graph, "edge-list file")->required();
  features->add_option("--pairs", feat_opts.pairs, "pairs file (same format)")
      ->required();
  features->add_option("--out", feat_opts.out, "output path, - for stdout")
      ->capture_default_str();
  features
      ->add_option("--num-nodes", feat_opts.num_nodes,
                   "node-count override (0 infers 1 + max id)")
      ->capture_default_str();
  add_circle_flags(*features, feat_opts.circle);
  features->add_option("--d-max", feat_opts.d_max, "distance clip")
      ->capture_default_str();
  features
      ->add_option("--threads", feat_opts.threads,
                   "worker cap (0 = hardware/CIRCLE_FEAT_THREADS)")
      ->capture_default_str();

  AttendOptions attend_opts;
  auto* attend = app.add_subcommand(
      "attend", "run the biased attention layer around one pair");
  attend->add_option("--graph", attend_opts.graph, "edge-list file")->required();
  attend->add_option("--src", attend_opts.src, "pair source id")->required();
  attend->add_option("--dst", attend_opts.dst, "pair destination id")->required();
  attend->add_option("--out", attend_opts.out, "output path, - for stdout")
      ->capture_default_str();
  attend
      ->add_option("--num-nodes", attend_opts.num_nodes,
                   "node-count override (0 infers 1 + max id)")
      ->capture_default_str();
  add_circle_flags(*attend, attend_opts.circle);
  attend->add_option("--d-max", attend_opts.d_max, "distance clip")
      ->capture_default_str();
  attend->add_option("--hops", attend_opts.hops, "enclosing-subgraph radius")
      ->capture_default_str();
  attend->add_option("--dim", attend_opts.dim, "attention dimension")
      ->capture_default_str();
  attend->add_option("--seed", attend_opts.seed, "parameter-init seed")
      ->capture_default_str();
  attend->add_option("--mode", attend_opts.mode, "bias mode: raw|weighted")
      ->capture_default_str();
  attend
      ->add_flag("--full-graph-features", attend_opts.full_graph_features,
                 "compute pair features on the full graph minus the query edge")
      ->capture_default_str();

  EvalOptions eval_opts;
  auto* eval = app.add_subcommand(
      "eval", "toy link-prediction experiment with MRR report");
  add_graph_spec_flags(*eval, eval_opts.graph);
  eval->add_option("--model", eval_opts.model,
                   "scorer: features-logistic|attention")
      ->capture_default_str();
  eval->add_option("--holdout", eval_opts.holdout, "held-out edge fraction")
      ->capture_default_str();
  eval->add_option("--k-negatives", eval_opts.k_negatives,
                   "negatives per source")
      ->capture_default_str();
  eval->add_option("--epochs", eval_opts.epochs, "training epochs")
      ->capture_default_str();
  eval->add_option("--lr", eval_opts.learning_rate, "gradient-descent step")
      ->capture_default_str();
  eval->add_option("--max-train-pairs", eval_opts.max_train_pairs,
                   "cap on training positives (0 = all)")
      ->capture_default_str();
  eval->add_option("--hops", eval_opts.hops, "enclosing-subgraph radius")
      ->capture_default_str();
  eval->add_option("--d-max", eval_opts.d_max, "distance clip")
      ->capture_default_str();
  eval->add_option("--dim", eval_opts.dim, "attention dimension")
      ->capture_default_str();
  eval->add_flag("--full-graph-features", eval_opts.full_graph_features,
                 "compute pair features on the full graph minus the query edge")
      ->capture_default_str();
  add_circle_flags(*eval, eval_opts.circle);
  eval->add_option("--eval-seed", eval_opts.seed, "experiment seed")
      ->capture_default_str();
  eval->add_option("--threads", eval_opts.threads,
                   "worker cap (0 = hardware/CIRCLE_FEAT_THREADS)")
      ->capture_default_str();
  eval->add_option("--out", eval_opts.out, "output path, - for stdout")
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    auto parsed = app.get_subcommands();
    std::cout << (parsed.empty() ? app.help() : parsed.front()->help());
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (gen->parsed()) return run_gen(gen_opts);
    if (features->parsed()) return run_features(feat_opts);
    if (attend->parsed()) return run_attend(attend_opts);
    if (eval->parsed()) return run_eval(eval_opts);
    std::cerr << "error: no subcommand selected\n";
    return 2;
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace circlefeat
