#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "detdepth/cli.hpp"
#include "detdepth/error.hpp"

using namespace detdepth;
using namespace detdepth::cli;

namespace {

ExperimentConfig Config(std::string sub, std::map<std::string, std::string> params,
                        std::optional<std::uint64_t> seed = std::nullopt, std::int64_t trials = 0) {
  ExperimentConfig c;
  c.subcommand = std::move(sub);
  c.params = std::move(params);
  c.seed = seed;
  c.trials = trials;
  return c;
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::optional<ErrorCode> CodeOf(const ExperimentConfig& c) {
  try {
    cli::Run(c);
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

int MainWith(std::vector<std::string> args) {
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return Main(static_cast<int>(argv.size()), argv.data());
}

std::string Data(const std::string& name) { return std::string(DETDEPTH_DATA_DIR) + "/" + name; }

}  // namespace

TEST(Run, SameSeedSameOutput) {
  auto c = Config("chain-separation", {{"k", "4"}, {"width", "1,4"}}, 5, 2000);
  auto a = Emit(cli::Run(c), "csv");
  EXPECT_EQ(a, Emit(cli::Run(c), "csv"));
  c.threads = 3;
  EXPECT_EQ(a, Emit(cli::Run(c), "csv"));
}

TEST(Run, GridHasOneRowPerCell) {
  auto r = cli::Run(Config("chain-separation", {{"k", "4,6"}, {"width", "1,4,16"}}, 1, 200));
  EXPECT_EQ(r.rows.size(), (3u + 5u) * 3u);
  EXPECT_TRUE(r.AllPass());
}

TEST(Run, SingleCellIsOneRow) {
  auto r = cli::Run(Config("chain-separation", {{"k", "4"}, {"dprime", "2"}, {"width", "1"}}, 1, 200));
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].relation, "<=");
  EXPECT_TRUE(r.rows[0].std_error.has_value());
}

TEST(Run, Errors) {
  EXPECT_EQ(CodeOf(Config("no-such", {})), ErrorCode::kUnknownSubcommand);
  EXPECT_EQ(CodeOf(Config("conservation", {{"q", "1"}})), ErrorCode::kInvalidParams);
  EXPECT_EQ(CodeOf(Config("chain-separation", {{"k", "4"}})), ErrorCode::kInvalidParams);  // no seed
  EXPECT_EQ(CodeOf(Config("conservation", {{"k", "x"}})), ErrorCode::kInvalidParams);
  auto bad_format = Config("conservation", {{"k", "1"}});
  bad_format.format = "xml";
  EXPECT_EQ(CodeOf(bad_format), ErrorCode::kInvalidParams);
}

TEST(Run, ConservationRanges) {
  auto r = cli::Run(Config("conservation", {{"k", "1-3"}}));
  EXPECT_EQ(r.rows.size(), 1u + 2u + 3u + 3u);
  EXPECT_TRUE(r.AllPass());
}

TEST(Run, BundledInputs) {
  EXPECT_TRUE(cli::Run(Config("matching-depth", {{"instance", Data("unique_stable.json")}})).AllPass());
  EXPECT_TRUE(cli::Run(Config("qbf-depth", {{"file", Data("exists_forall.qbf")}})).AllPass());
  EXPECT_TRUE(cli::Run(Config("game-depth", {{"tree", Data("tied_game.json")}, {"p", "0.1"}}, 3, 20000)).AllPass());
  EXPECT_TRUE(cli::Run(Config("distsim", {{"scenario", Data("cross_boundary.scenario.json")}})).AllPass());
  EXPECT_TRUE(cli::Run(Config("dtree-depth", {{"function", "parity"}, {"n", "3"}})).AllPass());
}

TEST(Emit, CsvHeaderAndQuoting) {
  Report r;
  EXPECT_EQ(Lines(Emit(r, "csv")),
            (std::vector<std::string>{"experiment,params,empirical_mean,stderr,bound,relation,pass"}));
  r.rows.push_back({"x", "a=1, b=\"2\"", 0.5, std::nullopt, 1.0, "<=", true});
  auto lines = Lines(Emit(r, "csv"));
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[1], "x,\"a=1, b=\"\"2\"\"\",0.5,,1,<=,true");
}

TEST(Emit, JsonlOneObjectPerRow) {
  auto r = cli::Run(Config("conservation", {{"k", "2"}}));
  auto lines = Lines(Emit(r, "jsonl"));
  EXPECT_EQ(lines.size(), r.rows.size());
  for (const auto& l : lines) {
    EXPECT_EQ(l.front(), '{');
    EXPECT_NE(l.find("\"experiment\""), std::string::npos);
  }
}

TEST(Main, ExitCodesAndOutFile) {
  auto path = (std::filesystem::temp_directory_path() / "detdepth_cli_test.csv").string();
  std::filesystem::remove(path);
  EXPECT_EQ(MainWith({"detdepth", "conservation", "--k", "3", "--out", path}), 0);
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_EQ(Lines(text.str()).size(), 1u + 3u + 1u);
  std::filesystem::remove(path);
  EXPECT_EQ(MainWith({"detdepth", "bogus"}), 2);
  EXPECT_EQ(MainWith({"detdepth", "chain-separation", "--k", "4"}), 2);
}
