#include <hyperlift/cli.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace hyperlift;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("hyperlift_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) const {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  int run(cli::RunConfig cfg, const std::string& out) {
    cfg.out = (dir_ / out).string();
    std::ostringstream log;
    return cli::run(cfg, log, err_);
  }

  fs::path dir_;
  std::ostringstream err_;
};

const char* kPlusMinusT = R"({"n": 2, "degrees": [1, 2], "interval": [-2, 2], "rep": {"poly_t": [[0], [0, 0, -1]]}})";

std::vector<std::vector<double>> read_csv(const std::string& text, std::string* header) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  *header = line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_F(CliTest, LiftC1FollowsCrossingBranches) {
  cli::RunConfig cfg;
  cfg.command = "lift";
  cfg.input = write("pm.json", kPlusMinusT);
  cfg.mode = "c1";
  ASSERT_EQ(run(cfg, "out"), 0) << err_.str();
  std::string header;
  const auto rows = read_csv(slurp(dir_ / "out" / "branches.csv"), &header);
  EXPECT_EQ(header, "t,branch_1,branch_2");
  ASSERT_EQ(rows.size(), 4096u);
  for (const auto& r : rows) {
    EXPECT_NEAR(r[1], r[0], 1e-9);
    EXPECT_NEAR(r[2], -r[0], 1e-9);
  }
  const auto meta = io::read_json_file((dir_ / "out" / "lift.json").string());
  EXPECT_EQ(meta["mode"], "C1");
  EXPECT_EQ(meta["derivative_data"]["collisions"].size(), 1u);
}

TEST_F(CliTest, BoundsReportsWorkedConstant) {
  cli::RunConfig cfg;
  cfg.command = "bounds";
  cfg.input = write("pm.json", kPlusMinusT);
  cfg.i0 = Interval{-1.0, 1.0};
  cfg.i1 = Interval{-2.0, 2.0};
  ASSERT_EQ(run(cfg, "out"), 0) << err_.str();
  const auto j = io::read_json_file((dir_ / "out" / "bounds.json").string());
  EXPECT_NEAR(j["A0"].get<double>(), 12.0 * std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(j["A1"].get<double>(), 2.0 * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(j["A2"].get<double>(), 2.0, 1e-12);
  for (const char* key : {"I0", "I1", "delta", "seminorms", "bound_expr", "alt_bound", "empirical_lip", "ratio"})
    EXPECT_TRUE(j.contains(key)) << key;
}

TEST_F(CliTest, ExitCodes) {
  cli::RunConfig cfg;
  cfg.command = "lift";
  cfg.input = write("bad.json", "{\"n\": 2,");
  EXPECT_EQ(run(cfg, "a"), 2);
  EXPECT_NE(err_.str().find("malformed JSON"), std::string::npos) << err_.str();

  cfg.input = (dir_ / "missing.json").string();
  EXPECT_EQ(run(cfg, "b"), 2);

  cfg.input = write("schema.json", R"({"n": 2, "interval": [-1, 1], "rep": {"poly_t": [[0]]}})");
  EXPECT_EQ(run(cfg, "c"), 2);

  cfg.input = write("nh.json", R"({"n": 2, "interval": [-1, 1], "rep": {"poly_t": [[0], [1]]}})");
  err_.str("");
  EXPECT_EQ(run(cfg, "d"), 3);
  EXPECT_NE(err_.str().find("at t = "), std::string::npos) << err_.str();

  cfg.input = write("pm.json", kPlusMinusT);
  cfg.grid = 1;
  EXPECT_EQ(run(cfg, "e"), 2);
  cfg.grid = 64;
  cfg.command = "nonsense";
  EXPECT_EQ(run(cfg, "f"), 2);
  cfg.command = "bounds";
  EXPECT_EQ(run(cfg, "g"), 2);  // no --i0
}

TEST_F(CliTest, OutputsAreByteIdentical) {
  cli::RunConfig cfg;
  cfg.command = "lift";
  cfg.input = write("three.json",
                    R"({"n": 3, "interval": [-1, 1], "rep": {"grid": [-1, -0.5, 0, 0.5, 1],
                        "values": [[0, -1, 0], [0, -1, 0.25], [0, -1, 0], [0, -1, -0.25], [0, -1, 0]]}})");
  cfg.grid = 513;
  ASSERT_EQ(run(cfg, "r1"), 0) << err_.str();
  ASSERT_EQ(run(cfg, "r2"), 0) << err_.str();
  EXPECT_EQ(slurp(dir_ / "r1" / "branches.csv"), slurp(dir_ / "r2" / "branches.csv"));
  EXPECT_EQ(slurp(dir_ / "r1" / "lift.json"), slurp(dir_ / "r2" / "lift.json"));

  cfg.command = "bounds";
  cfg.input = write("pm.json", kPlusMinusT);
  cfg.i0 = Interval{-1.0, 1.0};
  ASSERT_EQ(run(cfg, "b1"), 0) << err_.str();
  ASSERT_EQ(run(cfg, "b2"), 0) << err_.str();
  EXPECT_EQ(slurp(dir_ / "b1" / "bounds.json"), slurp(dir_ / "b2" / "bounds.json"));
}

TEST_F(CliTest, MatrixUpperTriangle) {
  cli::RunConfig cfg;
  cfg.command = "matrix";
  cfg.input = write("m.json", R"({"m": 2, "interval": [-1, 1], "entries": [[[0], [0, 1]], [[0]]]})");
  cfg.grid = 201;
  ASSERT_EQ(run(cfg, "out"), 0) << err_.str();
  const auto j = io::read_json_file((dir_ / "out" / "eigen.json").string());
  EXPECT_NEAR(j["empirical_lip"].get<double>(), 1.0, 1e-9);
  EXPECT_TRUE(j["weyl_ok"].get<bool>());

  cfg.input = write("asym.json", R"({"m": 2, "interval": [-1, 1], "entries": [[[0], [0, 1]], [[0, 2], [0]]]})");
  EXPECT_EQ(run(cfg, "asym"), 2);
}

TEST_F(CliTest, SosAndGrid2d) {
  cli::RunConfig cfg;
  cfg.command = "sos";
  cfg.input = write("s.json", R"({"squares": [[0, 1]], "interval": [-1, 1]})");
  cfg.grid = 201;
  ASSERT_EQ(run(cfg, "s"), 0) << err_.str();
  const auto j = io::read_json_file((dir_ / "s" / "sqrt.json").string());
  EXPECT_EQ(j["flips"].size(), 1u);
  EXPECT_EQ(slurp(dir_ / "s" / "sqrt.csv").substr(0, 6), "t,g,f\n");

  cfg.command = "grid2d";
  cfg.input = write("g.json", R"({"n": 2, "x": [0, 1], "y": [0, 1],
                                   "values": [[[0, 0], [1, 0]], [[1, 0], [2, 1]]]})");
  ASSERT_EQ(run(cfg, "g"), 0) << err_.str();
  const auto g = io::read_json_file((dir_ / "g" / "grid2d.json").string());
  EXPECT_TRUE(g["ok"].get<bool>());
}

TEST_F(CliTest, CheckSuites) {
  cli::RunConfig cfg;
  cfg.command = "check";
  cfg.input = write("c.json", R"({"glaeser": [{"squares": [[-1, 0, 1]], "interval": [-2, 2]}],
                                   "lagrange": [{"coeffs": [1, -2, 0.5], "B": 2}],
                                   "taylor": [{"f": [0, 0, 1], "interval": [-1, 1], "m": 2}]})");
  ASSERT_EQ(run(cfg, "all"), 0) << err_.str();
  const auto j = io::read_json_file((dir_ / "all" / "check.json").string());
  EXPECT_EQ(j["glaeser"]["failing"], 0);
  EXPECT_EQ(j["lagrange"]["failing"], 0);
  EXPECT_EQ(j["taylor"]["failing"], 0);
  EXPECT_LE(j["taylor"]["results"][0]["constant_estimate"].get<double>(), 2.0);

  cfg.suite = "lagrange";
  ASSERT_EQ(run(cfg, "one"), 0) << err_.str();
  const auto k = io::read_json_file((dir_ / "one" / "check.json").string());
  EXPECT_FALSE(k.contains("glaeser"));
  EXPECT_TRUE(k.contains("lagrange"));

  cfg.input = write("empty.json", "{}");
  cfg.suite = "all";
  EXPECT_EQ(run(cfg, "none"), 2);
}

TEST(CliInterval, Parsing) {
  EXPECT_EQ(cli::parse_interval("-1,2"), (Interval{-1.0, 2.0}));
  EXPECT_THROW(cli::parse_interval("1"), Error);
  EXPECT_THROW(cli::parse_interval("2,1"), Error);
  EXPECT_THROW(cli::parse_interval("a,1"), Error);
  EXPECT_THROW(cli::parse_interval("1,2x"), Error);
}
