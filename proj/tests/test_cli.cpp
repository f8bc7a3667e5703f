#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "ftsurf/config.hpp"
#include "ftsurf/dem.hpp"
#include "json.hpp"

namespace ftsurf {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("ftsurf_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string strip_comments(const std::string& text) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] != '#') out << line << '\n';
  }
  return out.str();
}

TEST(Cli, UnknownFlagIsUsageErrorAndWritesNothing) {
  const auto dir = scratch("usage");
  const auto out = (dir / "m.csv").string();
  const auto r = cli({"memory", "--d", "3", "--p", "0.01", "--bogus", "--out", out});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(fs::is_empty(dir));
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"layout", "--kind", "hexagonal"}).code, 2);
  EXPECT_EQ(cli({"memory", "--d", "3"}).code, 2);  // --p missing
}

TEST(Cli, DomainErrorIsJsonOnStderr) {
  const auto r = cli({"memory", "--d", "4", "--p", "0.01", "--shots", "1000"});
  EXPECT_EQ(r.code, 1);
  const auto j = json::parse(r.err);
  EXPECT_EQ(j.at("subcommand"), "memory");
  EXPECT_FALSE(j.at("error").get<std::string>().empty());
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, MemoryOutputIgnoresThreadCount) {
  const std::vector<std::string> base{"memory", "--kind", "unrotated", "--d", "3", "--style", "czz",
                                      "--p", "0.004", "--shots", "20000", "--seed", "11"};
  auto one = base, three = base;
  one.insert(one.end(), {"--threads", "1"});
  three.insert(three.end(), {"--threads", "3"});
  const auto a = cli(one), b = cli(three);
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("# config_hash "), std::string::npos);
}

TEST(Cli, VerifyFtFindsWitnessForNonFtOrdering) {
  const auto r = cli({"verify-ft", "--kind", "rotated", "--d", "3", "--style", "czz", "--ordering", "ne", "--t", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out).at("result");
  EXPECT_EQ(j.at("largest"), 0);
  EXPECT_TRUE(j.at("witness").at("replay").at("ok").get<bool>());
}

TEST(Cli, VerifyFtPassesDefaultCzOrdering) {
  const auto r = cli({"verify-ft", "--kind", "unrotated", "--d", "3", "--t", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out).at("result");
  EXPECT_EQ(j.at("largest"), 1);
  EXPECT_FALSE(j.contains("witness"));
}

TEST(Cli, ConfigRoundTripsThroughJson) {
  const auto r = cli({"layout", "--kind", "rotated", "--d", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  const auto c = RunConfig::from_json(j.at("config").dump());
  EXPECT_EQ(c.hash(), j.at("config_hash").get<std::string>());
  EXPECT_EQ(c.to_json(), j.at("config").dump());
  EXPECT_EQ(j.at("result").at("num_qubits"), 49);
  EXPECT_THROW(RunConfig::from_json("{\"d\": 3}"), std::invalid_argument);
  EXPECT_THROW(RunConfig::from_json("not json"), std::invalid_argument);
}

TEST(Cli, DemTextParsesBack) {
  const auto r = cli({"dem", "--kind", "rotated", "--d", "3", "--p", "0.002"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto dem = parse_dem_text(r.out);
  EXPECT_GT(dem.channels.size(), 0u);
  EXPECT_EQ(dem.num_observables, 1u);
  const auto raw = cli({"dem", "--kind", "rotated", "--d", "3", "--p", "0.002", "--no-decompose"});
  ASSERT_EQ(raw.code, 0);
  EXPECT_EQ(parse_dem_text(raw.out).channels.size(), dem.channels.size());
}

TEST(Cli, SampleThenDecodeCountsFailures) {
  const auto dir = scratch("sample");
  const auto det = (dir / "det.b8").string(), obs = (dir / "obs.b8").string();
  const std::vector<std::string> code{"--d", "3", "--p", "0.004", "--shots", "3000"};
  auto s = std::vector<std::string>{"sample", "--out-det", det, "--out-obs", obs};
  s.insert(s.end(), code.begin(), code.end());
  ASSERT_EQ(cli(s).code, 0);
  EXPECT_TRUE(fs::exists(det + ".json"));
  auto d = std::vector<std::string>{"decode", "--in-det", det, "--in-obs", obs};
  d.insert(d.end(), code.begin(), code.end());
  const auto r = cli(d);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out).at("result");
  EXPECT_EQ(j.at("shots"), 3000);
  EXPECT_GT(j.at("failures").get<int>(), 0);
  EXPECT_LT(j.at("pL").get<double>(), 0.1);
}

TEST(Cli, PlotDataGroupsSeries) {
  const auto dir = scratch("plot");
  const auto csv = (dir / "in.csv").string();
  {
    std::ofstream f(csv);
    f << "# comment\nd,style,p,pL,stderr\n3,cz,0.01,0.1,0.01\n5,cz,0.01,0.08,0.01\n3,cz,0.02,0.2,0.02\n";
  }
  const auto r = cli({"plot-data", "--in", csv});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto body = strip_comments(r.out);
  EXPECT_EQ(body, "0.01 0.1 0.01\n0.02 0.2 0.02\n\n\n0.01 0.08 0.01\n");
  EXPECT_EQ(cli({"plot-data", "--in", (dir / "missing.csv").string()}).code, 1);

  const auto collapsed = cli({"plot-data", "--in", csv, "--figure", "collapse", "--p-th", "0.01", "--nu", "1"});
  ASSERT_EQ(collapsed.code, 0) << collapsed.err;
  EXPECT_EQ(strip_comments(collapsed.out), "0 0.1 0.01\n0.03 0.2 0.02\n\n\n0 0.08 0.01\n");
  EXPECT_EQ(cli({"plot-data", "--in", csv, "--figure", "collapse"}).code, 1);
  EXPECT_EQ(cli({"plot-data", "--in", csv, "--figure", "fig9"}).code, 2);
}

TEST(Cli, PlotDataResourcesUsesQubitCounts) {
  const auto dir = scratch("plot_res");
  const auto csv = (dir / "res.csv").string();
  {
    std::ofstream f(csv);
    f << "kind,d,style,p,pL,stderr\nrotated,3,cz,0.001,1e-3,1e-5\nrotated,5,cz,0.001,1e-4,1e-6\n"
         "unrotated,3,czz,0.001,2e-3,1e-5\n";
  }
  const auto r = cli({"plot-data", "--in", csv, "--figure", "resources"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(strip_comments(r.out), "17 1e-3 1e-5\n49 1e-4 1e-6\n\n\n25 2e-3 1e-5\n");
}

}  // namespace
}  // namespace ftsurf
