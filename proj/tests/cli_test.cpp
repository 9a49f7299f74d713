// Copyright 2026 The termgraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "termgraph_cli.hpp"

namespace termgraph {
namespace {

namespace fs = std::filesystem;

const std::string kData = TERMGRAPH_DATA_DIR;
const std::string kText = kData + "/spherical_robot.txt";
const std::string kEmb = kData + "/toy_technet.emb";

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("termgraph_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  int Run(std::vector<std::string> args) {
    err_.str("");
    return cli::RunCli(args, err_);
  }

  static std::string Slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  void Write(const std::string& path, const std::string& body) {
    std::ofstream(path, std::ios::binary) << body;
  }

  fs::path dir_;
  std::ostringstream err_;
};

TEST_F(CliTest, RunOnFixture) {
  const std::string out = Path("graph.json");
  ASSERT_EQ(Run({"run", "-i", kText, "--kb", kEmb, "-o", out}), 0) << err_.str();
  const GraphDocument doc = ParseGraphJson(Slurp(out));
  const std::size_t n = doc.nodes.size();
  EXPECT_GE(n, 10u);
  EXPECT_EQ(doc.edges.size(), std::min(2 * n, n * (n - 1) / 2));
  EXPECT_EQ(doc.metadata.kb_name, "toy_technet");
  EXPECT_NE(err_.str().find("termgraph: N=25 edges=50 converged=true"),
            std::string::npos)
      << err_.str();
  // Nothing but the output file is left behind.
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& f : fs::directory_iterator(dir_)) ++files;
  EXPECT_EQ(files, 1u);
}

TEST_F(CliTest, MatchesGoldenFile) {
  const std::string out = Path("graph.json");
  ASSERT_EQ(Run({"run", "-q", "-i", kText, "--kb", kEmb, "-o", out}), 0);
  const GraphDocument got = ParseGraphJson(Slurp(out));
  GraphDocument want =
      ParseGraphJson(Slurp(kData + "/golden/spherical_robot.toy_technet.json"));
  want.metadata.source_label = got.metadata.source_label;
  ASSERT_EQ(got.nodes.size(), want.nodes.size());
  ASSERT_EQ(got.edges, want.edges);
  EXPECT_EQ(got.metadata, want.metadata);
  for (std::size_t i = 0; i < got.nodes.size(); ++i) {
    EXPECT_EQ(got.nodes[i].label, want.nodes[i].label);
    EXPECT_EQ(got.nodes[i].degree, want.nodes[i].degree);
    EXPECT_EQ(got.nodes[i].frequency, want.nodes[i].frequency);
    EXPECT_NEAR(got.nodes[i].x, want.nodes[i].x, 1e-6);
    EXPECT_NEAR(got.nodes[i].y, want.nodes[i].y, 1e-6);
  }
}

TEST_F(CliTest, TaxonomySnapshotIsDetected) {
  const std::string out = Path("graph.json");
  ASSERT_EQ(Run({"run", "-q", "-i", kText, "--kb", kData + "/toy_wordnet.tax",
                 "-o", out}),
            0)
      << err_.str();
  const GraphDocument doc = ParseGraphJson(Slurp(out));
  EXPECT_EQ(doc.nodes.size(), 33u);
  EXPECT_EQ(doc.edges.size(), 66u);
}

TEST_F(CliTest, NoMatchesExitsFour) {
  const std::string text = Path("plain.txt");
  Write(text, "Nothing here is in the vocabulary at all.\n");
  const std::string out = Path("graph.json");
  EXPECT_EQ(Run({"run", "-i", text, "--kb", kEmb, "-o", out}), 4);
  EXPECT_NE(err_.str().find("NoTermsFound"), std::string::npos);
  EXPECT_FALSE(fs::exists(out));
}

TEST_F(CliTest, SingleTermExitsFour) {
  const std::string text = Path("one.txt");
  Write(text, "Dust, dust and more dust.\n");
  EXPECT_EQ(Run({"run", "-i", text, "--kb", kEmb, "-o", Path("g.json")}), 4);
  EXPECT_NE(err_.str().find("TooFewTerms"), std::string::npos);
}

TEST_F(CliTest, MissingKbExitsThreeWithoutOutput) {
  const std::string out = Path("graph.json");
  EXPECT_EQ(Run({"run", "-i", kText, "--kb", Path("nope.emb"), "-o", out}), 3);
  EXPECT_FALSE(fs::exists(out));
  const std::string bad = Path("bad.emb");
  Write(bad, "1 3\nrobot\t1 2\n");
  EXPECT_EQ(Run({"run", "-i", kText, "--kb", bad, "-o", out}), 3);
  EXPECT_FALSE(fs::exists(out));
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(Run({}), 2);
  EXPECT_EQ(Run({"run", "--bogus"}), 2);
  EXPECT_EQ(Run({"run", "-i", kText, "--kb", kEmb, "--format", "png"}), 2);
  EXPECT_EQ(Run({"run", "-i", kText, "--kb", kEmb, "--epsilon", "-1"}), 2);
  EXPECT_EQ(Run({"run", "-i", Path("missing.txt"), "--kb", kEmb}), 2);
  // Budget below a spanning tree.
  EXPECT_EQ(Run({"run", "-i", kText, "--kb", kEmb, "--edge-multiplier", "0.5",
                 "-o", Path("g.json")}),
            2);
  EXPECT_NE(err_.str().find("BudgetTooSmall"), std::string::npos);
}

TEST_F(CliTest, UnwritableOutputExitsOne) {
  EXPECT_EQ(Run({"run", "-q", "-i", kText, "--kb", kEmb, "-o",
                 Path("no/such/dir/graph.json")}),
            1);
}

TEST_F(CliTest, StagedCompositionEqualsRun) {
  for (const std::string format : {"json", "svg", "graphml", "dot"}) {
    const std::string direct = Path("direct." + format);
    ASSERT_EQ(Run({"run", "-q", "-i", kText, "--kb", kEmb, "--seed", "3",
                   "--format", format, "-o", direct}),
              0);
    ASSERT_EQ(Run({"extract", "-q", "-i", kText, "--kb", kEmb, "-o",
                   Path("terms.json")}),
              0);
    ASSERT_EQ(Run({"matrix", "-q", "-i", Path("terms.json"), "--kb", kEmb, "-o",
                   Path("matrix.json"), "--csv", Path("matrix.csv")}),
              0);
    ASSERT_EQ(Run({"filter", "-q", "-i", Path("matrix.json"), "-o",
                   Path("graph.json")}),
              0);
    ASSERT_EQ(Run({"layout", "-q", "-i", Path("graph.json"), "--seed", "3",
                   "-o", Path("layout.json")}),
              0);
    ASSERT_EQ(Run({"render", "-q", "-i", Path("layout.json"), "--format",
                   format, "-o", Path("staged." + format)}),
              0);
    EXPECT_EQ(Slurp(Path("staged." + format)), Slurp(direct)) << format;
  }
  const std::string csv = Slurp(Path("matrix.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 26);
}

TEST_F(CliTest, FilterOnTwoNodeMatrix) {
  MatrixStage m;
  m.provenance = {"kb", "text"};
  m.frequencies = {1, 2};
  m.matrix = {{"robot", "shell"}, {1, 0.4, 0.4, 1}};
  Write(Path("m.json"), MatrixStageToJson(m));
  ASSERT_EQ(Run({"filter", "-q", "-i", Path("m.json"), "-o", Path("g.json")}), 0);
  const GraphStage g = GraphStageFromJson(Slurp(Path("g.json")));
  ASSERT_EQ(g.graph.edges.size(), 1u);
  EXPECT_EQ(g.graph.edges[0], (Edge{0, 1, 0.4, true}));
}

TEST_F(CliTest, LayoutIsDeterministicPerSeed) {
  ASSERT_EQ(Run({"extract", "-q", "-i", kText, "--kb", kEmb, "-o",
                 Path("t.json")}),
            0);
  ASSERT_EQ(Run({"matrix", "-q", "-i", Path("t.json"), "--kb", kEmb, "-o",
                 Path("m.json")}),
            0);
  ASSERT_EQ(Run({"filter", "-q", "-i", Path("m.json"), "-o", Path("g.json")}), 0);
  for (const char* name : {"a.json", "b.json"}) {
    ASSERT_EQ(Run({"layout", "-q", "-i", Path("g.json"), "--seed", "7", "-o",
                   Path(name)}),
              0);
  }
  EXPECT_EQ(Slurp(Path("a.json")), Slurp(Path("b.json")));
  ASSERT_EQ(Run({"layout", "-q", "-i", Path("g.json"), "--seed", "8", "-o",
                 Path("c.json")}),
            0);
  EXPECT_NE(Slurp(Path("a.json")), Slurp(Path("c.json")));
}

TEST_F(CliTest, StageRecordsRejectWrongKind) {
  ASSERT_EQ(Run({"extract", "-q", "-i", kText, "--kb", kEmb, "-o",
                 Path("t.json")}),
            0);
  EXPECT_EQ(Run({"filter", "-q", "-i", Path("t.json"), "-o", Path("g.json")}), 2);
  EXPECT_FALSE(fs::exists(Path("g.json")));
}

TEST_F(CliTest, ConfigFileSuppliesDefaultsAndFlagsWin) {
  const std::string cfg = Path("termgraph.conf");
  Write(cfg, "kb = " + kEmb + "\nformat = svg\nseed = 7\nquiet = true\n");
  const std::string from_file = Path("a.svg");
  ASSERT_EQ(Run({"run", "--config", cfg, "-i", kText, "-o", from_file}), 0)
      << err_.str();
  EXPECT_TRUE(err_.str().empty());
  EXPECT_EQ(Slurp(from_file).rfind("<?xml", 0), 0u);

  const std::string overridden = Path("b.json");
  ASSERT_EQ(Run({"run", "--config", cfg, "-i", kText, "--format", "json", "-o",
                 overridden}),
            0);
  const GraphDocument doc = ParseGraphJson(Slurp(overridden));
  EXPECT_EQ(doc.metadata.seed, 7u);

  ASSERT_EQ(Run({"run", "--config", cfg, "-i", kText, "--format", "json",
                 "--seed", "9", "-o", overridden}),
            0);
  EXPECT_EQ(ParseGraphJson(Slurp(overridden)).metadata.seed, 9u);
}

TEST_F(CliTest, KbNameOverride) {
  const std::string out = Path("g.json");
  ASSERT_EQ(Run({"run", "-q", "-i", kText, "--kb", kEmb, "--kb-name",
                 "TechNet (toy)", "-o", out}),
            0);
  EXPECT_EQ(ParseGraphJson(Slurp(out)).metadata.kb_name, "TechNet (toy)");
}

}  // namespace
}  // namespace termgraph
