#include <doctest.h>

#include <iostream>
#include <sstream>

#include "circlefeat/cli.hpp"
#include "test_util.hpp"

using namespace circlefeat;

namespace {

/// Runs the CLI in-process with stdout captured.
struct CliRun {
  int exit_code;
  std::string stdout_text;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream captured;
  std::streambuf* old = std::cout.rdbuf(captured.rdbuf());
  int code = run_cli(args);
  std::cout.rdbuf(old);
  return {code, captured.str()};
}

}  // namespace

TEST_CASE("gen writes the theta edge list") {
  auto dir = testutil::make_temp_dir("cli_gen");
  auto out = (dir / "g.txt").string();
  CliRun r = run({"gen", "--kind", "theta", "--k", "3", "--len", "2", "--out", out});
  CHECK(r.exit_code == 0);
  CHECK(testutil::read_text(out) == "0 2\n0 3\n0 4\n1 2\n1 3\n1 4\n");
}

TEST_CASE("features emits the documented CSV") {
  auto dir = testutil::make_temp_dir("cli_features");
  auto graph = (dir / "c4.txt").string();
  auto pairs = (dir / "p.txt").string();
  auto out = (dir / "f.csv").string();
  CHECK(run({"gen", "--kind", "cycle", "--n", "4", "--out", graph}).exit_code == 0);
  testutil::write_text(pairs, "0 2\n");

  CliRun r = run({"features", "--graph", graph, "--pairs", pairs, "--alpha", "1.0",
                  "--max-circle-len", "6", "--out", out});
  CHECK(r.exit_code == 0);
  CHECK(testutil::read_text(out) ==
        "src,dst,dist,nsp,aa,jac,swing_plus,bridge\n"
        "0,2,2,2,2.885390,1.000000,1.333333,0.862811\n");
}

TEST_CASE("features handles empty pair lists and sentinel distances") {
  auto dir = testutil::make_temp_dir("cli_features_edge");
  auto graph = (dir / "split.txt").string();
  auto pairs = (dir / "p.txt").string();
  auto out = (dir / "f.csv").string();
  testutil::write_text(graph, "0 1\n2 3\n");

  testutil::write_text(pairs, "# none\n");
  CHECK(run({"features", "--graph", graph, "--pairs", pairs, "--out", out}).exit_code == 0);
  CHECK(testutil::read_text(out) == "src,dst,dist,nsp,aa,jac,swing_plus,bridge\n");

  testutil::write_text(pairs, "0 2\n");
  CHECK(run({"features", "--graph", graph, "--pairs", pairs, "--out", out}).exit_code == 0);
  CHECK(testutil::read_text(out) ==
        "src,dst,dist,nsp,aa,jac,swing_plus,bridge\n"
        "0,2,11,0,0.000000,0.000000,0.000000,0.000000\n");
}

TEST_CASE("cli exit codes") {
  auto dir = testutil::make_temp_dir("cli_errors");
  auto pairs = (dir / "p.txt").string();
  testutil::write_text(pairs, "0 1\n");

  // Runtime errors: missing file, malformed input.
  CHECK(run({"features", "--graph", (dir / "missing.txt").string(), "--pairs",
             pairs}).exit_code == 1);
  auto broken = (dir / "broken.txt").string();
  testutil::write_text(broken, "0 x\n");
  CHECK(run({"features", "--graph", broken, "--pairs", pairs}).exit_code == 1);

  // Usage/config errors.
  CHECK(run({"frobnicate"}).exit_code == 2);
  CHECK(run({"features", "--pairs", pairs}).exit_code == 2);  // missing --graph
  auto graph = (dir / "g.txt").string();
  testutil::write_text(graph, "0 1\n1 2\n");
  CHECK(run({"features", "--graph", graph, "--pairs", pairs, "--alpha", "-1"})
            .exit_code == 2);
  CHECK(run({"gen", "--kind", "nope", "--out", "-"}).exit_code == 2);

  // Cap exceeded is a runtime error.
  CHECK(run({"gen", "--kind", "theta", "--k", "3", "--len", "2", "--out",
             (dir / "t.txt").string()}).exit_code == 0);
  testutil::write_text(pairs, "0 1\n");
  CHECK(run({"features", "--graph", (dir / "t.txt").string(), "--pairs", pairs,
             "--max-bridges", "2"}).exit_code == 1);
}

TEST_CASE("help lists every flag with its default") {
  CliRun top = run({"--help"});
  CHECK(top.exit_code == 0);
  for (const char* sub : {"gen", "features", "attend", "eval"}) {
    CHECK(top.stdout_text.find(sub) != std::string::npos);
  }

  CliRun feats = run({"features", "--help"});
  CHECK(feats.exit_code == 0);
  for (const char* flag : {"--graph", "--pairs", "--out", "--alpha",
                           "--max-circle-len", "--max-bridges", "--d-max",
                           "--num-nodes", "--threads"}) {
    CHECK(feats.stdout_text.find(flag) != std::string::npos);
  }
  CHECK(feats.stdout_text.find("100000") != std::string::npos);  // max-bridges default

  CliRun ev = run({"eval", "--help"});
  CHECK(ev.exit_code == 0);
  for (const char* flag : {"--kind", "--model", "--holdout", "--k-negatives",
                           "--epochs", "--lr", "--hops", "--eval-seed"}) {
    CHECK(ev.stdout_text.find(flag) != std::string::npos);
  }
  CHECK(ev.stdout_text.find("features-logistic") != std::string::npos);
}

TEST_CASE("identical invocations produce byte-identical outputs") {
  auto dir = testutil::make_temp_dir("cli_determinism");
  auto graph = (dir / "g.txt").string();
  CHECK(run({"gen", "--kind", "er", "--n", "30", "--p", "0.2", "--seed", "5",
             "--out", graph}).exit_code == 0);
  auto graph2 = (dir / "g2.txt").string();
  CHECK(run({"gen", "--kind", "er", "--n", "30", "--p", "0.2", "--seed", "5",
             "--out", graph2}).exit_code == 0);
  CHECK(testutil::read_text(graph) == testutil::read_text(graph2));

  auto pairs = (dir / "p.txt").string();
  testutil::write_text(pairs, "0 1\n0 5\n3 7\n");
  auto f1 = (dir / "f1.csv").string();
  auto f2 = (dir / "f2.csv").string();
  CHECK(run({"features", "--graph", graph, "--pairs", pairs, "--out", f1}).exit_code == 0);
  CHECK(run({"features", "--graph", graph, "--pairs", pairs, "--out", f2}).exit_code == 0);
  CHECK(testutil::read_text(f1) == testutil::read_text(f2));

  auto a1 = (dir / "a1.txt").string();
  auto a2 = (dir / "a2.txt").string();
  std::vector<std::string> attend{"attend", "--graph", graph, "--src", "0",
                                  "--dst", "5", "--seed", "3", "--out", a1};
  CHECK(run(attend).exit_code == 0);
  attend.back() = a2;
  CHECK(run(attend).exit_code == 0);
  CHECK(testutil::read_text(a1) == testutil::read_text(a2));

  auto e1 = (dir / "e1.txt").string();
  auto e2 = (dir / "e2.txt").string();
  std::vector<std::string> eval{"eval", "--kind", "er", "--n", "40", "--p", "0.15",
                                "--seed", "3", "--eval-seed", "9", "--k-negatives",
                                "5", "--epochs", "30", "--out", e1};
  CHECK(run(eval).exit_code == 0);
  eval.back() = e2;
  CHECK(run(eval).exit_code == 0);
  CHECK(testutil::read_text(e1) == testutil::read_text(e2));
}

TEST_CASE("attend emits a stable self-describing block") {
  auto dir = testutil::make_temp_dir("cli_attend");
  auto graph = (dir / "c4.txt").string();
  CHECK(run({"gen", "--kind", "cycle", "--n", "4", "--out", graph}).exit_code == 0);
  auto out = (dir / "a.txt").string();
  CliRun r = run({"attend", "--graph", graph, "--src", "0", "--dst", "2",
                  "--seed", "7", "--out", out});
  CHECK(r.exit_code == 0);
  std::string text = testutil::read_text(out);
  CHECK(text.find("pair 0 2\n") != std::string::npos);
  CHECK(text.find("row_sums\n1.000000 1.000000 1.000000 1.000000\n") !=
        std::string::npos);
  CHECK(text.find("score ") != std::string::npos);
}
