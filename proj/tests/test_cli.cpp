#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "shapsec/config.hpp"
#include "shapsec/csv.hpp"
#include "shapsec/experiments.hpp"
#include "shapsec/games.hpp"
#include "shapsec/shapley.hpp"

namespace fs = std::filesystem;
using namespace shapsec;

namespace {

struct Result {
  int rc = -1;
  std::string out;
  std::string err;
};

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("shapsec_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Result cli(const std::string& args, const std::string& env = "") {
  const char* exe = std::getenv("SHAPSEC_CLI");
  if (!exe) exe = SHAPSEC_DEFAULT_CLI;
  const auto out = scratch() / "stdout.txt";
  const auto err = scratch() / "stderr.txt";
  const std::string cmd = env + " '" + exe + "' " + args + " >'" + out.string() + "' 2>'" +
                          err.string() + "'";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::string data(const std::string& name) {
  const char* dir = std::getenv("SHAPSEC_DATA_DIR");
  return (fs::path(dir ? dir : SHAPSEC_DEFAULT_DATA_DIR) / name).string();
}

// Data rows as cells, skipping comments and the header.
std::vector<std::vector<std::string>> rows(const std::string& csv) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(csv);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream l(line);
    std::string c;
    while (std::getline(l, c, ',')) cells.push_back(c);
    out.push_back(cells);
  }
  return out;
}

std::string trailer(const std::string& csv, const std::string& key) {
  const auto at = csv.find("# " + key + ": ");
  if (at == std::string::npos) return {};
  const auto start = at + key.size() + 4;
  return csv.substr(start, csv.find('\n', start) - start);
}

}  // namespace

TEST(Csv, NumbersUseTwelveSignificantDigits) {
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(2.0), "2");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(1e300 * 1e300), "inf");
  std::ostringstream s;
  CsvWriter w(s);
  w.meta("k", "v");
  w.header({"a", "b"});
  w.row({std::string("x,y"), 0.5});
  EXPECT_EQ(s.str(), "# schema-version: 1\n# k: v\na,b\n\"x,y\",0.5\n");
  EXPECT_THROW(w.row({0.5}), std::logic_error);
}

TEST(Config, ParsesAndReportsLineAndField) {
  std::istringstream in("# comment\n game = lb  \n\nn = 8 # trailing\nhypergraph = a#b\n");
  const auto cfg = Config::parse(in, "m.cfg");
  EXPECT_EQ(cfg.get_string("game", ""), "lb");
  EXPECT_EQ(cfg.get_int("n", 0, 1, 100), 8);
  EXPECT_EQ(cfg.get_string("hypergraph", ""), "a#b");

  std::istringstream bad("game = lb\nn = eight\n");
  const auto cfg2 = Config::parse(bad, "m.cfg");
  try {
    cfg2.get_int("n", 0, 1, 100);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.field(), "n");
    EXPECT_NE(std::string(e.what()).find("m.cfg:2"), std::string::npos);
  }
  std::istringstream dup("n = 1\nn = 2\n");
  EXPECT_THROW(Config::parse(dup, "d"), ConfigError);
  std::istringstream noeq("just words\n");
  EXPECT_THROW(Config::parse(noeq, "d"), ConfigError);
}

TEST(Config, FlagsOverrideFileValues) {
  std::istringstream in("game = lb\nn = 8\n");
  auto cfg = Config::parse(in, "m.cfg");
  cfg.set("n", "10");
  cfg.set_assignment("full-scale=true");
  const auto exp = parse_experiment(cfg, Command::shapley);
  EXPECT_EQ(exp.n, 10);
  EXPECT_TRUE(exp.full_scale);
}

TEST(Config, RejectsContradictoryGameSpecs) {
  Config cfg;
  cfg.set("game", "lb");
  cfg.set("n", "8");
  cfg.set("hypergraph", "x.hg");
  EXPECT_THROW(parse_experiment(cfg, Command::shapley), ConfigError);
  Config unknown;
  unknown.set("game", "lb");
  unknown.set("n", "8");
  unknown.set("adversary", "dp");
  EXPECT_THROW(parse_experiment(unknown, Command::shapley), ConfigError);
  Config block;
  block.set("game", "pair");
  block.set("n", "3");
  block.set("adversary", "block");
  EXPECT_THROW(parse_experiment(block, Command::simulate), ConfigError);
}

TEST(Cli, ShapleyTriangleLowerBoundAndEmptyGraph) {
  auto r = cli("shapley --game synergy --hypergraph " + data("triangle.hg"));
  ASSERT_EQ(r.rc, 0) << r.err;
  for (const auto& row : rows(r.out)) EXPECT_EQ(row[1], "1");

  r = cli("shapley --game lb --n 100");
  ASSERT_EQ(r.rc, 0) << r.err;
  const auto lb = rows(r.out);
  ASSERT_EQ(lb.size(), 100u);
  EXPECT_EQ(lb[0][1], "1");
  EXPECT_EQ(lb[50][1], "1");
  auto game = make_lb_game(100);
  EXPECT_EQ(trailer(r.out, "gamma"), format_number(shapley_exact(*game).gamma));

  const auto empty = scratch() / "empty.hg";
  std::ofstream(empty) << "n 4\n";
  r = cli("shapley --game synergy --hypergraph " + empty.string());
  ASSERT_EQ(r.rc, 0) << r.err;
  for (const auto& row : rows(r.out)) {
    EXPECT_EQ(row[1], "0");
    EXPECT_EQ(row[3], "0");
  }
}

TEST(Cli, SameSeedGivesIdenticalBytes) {
  const std::string args =
      "simulate --game lb --n 6 --adversary block --greedy --budget 3 --samples 200 --runs 4 "
      "--seed 9";
  const auto a = cli(args + " --jobs 1");
  const auto b = cli(args + " --jobs 1");
  const auto c = cli(args + " --jobs 3");
  ASSERT_EQ(a.rc, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
  EXPECT_NE(a.out, cli(args + " --seed 10").out);
}

TEST(Cli, ConfigErrorsExitTwoWithDiagnostics) {
  const auto cfg = scratch() / "bad.cfg";
  std::ofstream(cfg) << "game = lb\nn = 8\neps = 1.5\n";
  auto r = cli("simulate --config " + cfg.string());
  EXPECT_EQ(r.rc, 2);
  EXPECT_NE(r.err.find("bad.cfg:3"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("eps"), std::string::npos);

  EXPECT_EQ(cli("simulate --game lb --n 7").rc, 2);
  EXPECT_EQ(cli("simulate --game lb --n 8 --no-such-flag").rc, 2);
  EXPECT_EQ(cli("shapley --game synergy --hypergraph /nonexistent.hg").rc, 2);
  EXPECT_EQ(cli("simulate --game lb --n 100 --samples 800000 --runs 1000").rc, 2);
  const auto broken = scratch() / "broken.hg";
  std::ofstream(broken) << "n 3\n1 0 x\n";
  r = cli("shapley --game synergy --hypergraph " + broken.string());
  EXPECT_EQ(r.rc, 2);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
}

TEST(Cli, ComputeCapExitsThree) {
  const auto r = cli(
      "simulate --game pair --n 3 --adversary rate --budget-kind rate --rate 1 "
      "--stopping unknown-budget --hard-cap 500");
  EXPECT_EQ(r.rc, 3) << r.err;
}

TEST(Cli, MinSamplesZeroBudgetNeedsOneSample) {
  const auto r = cli("min-samples --game lb --n 10 --budget 0 --eps 0.05");
  ASSERT_EQ(r.rc, 0) << r.err;
  EXPECT_EQ(rows(r.out).at(0).at(5), "1");
}

TEST(Cli, MinSamplesExhaustedRangeReportsScannedValues) {
  const auto r = cli("min-samples --game lb --n 10 --budget 2 --eps 0.05 --max-samples 20");
  EXPECT_EQ(r.rc, 3);
  const auto scanned = rows(r.out);
  ASSERT_EQ(scanned.size(), 20u);
  EXPECT_EQ(scanned.back()[0], "20");
  EXPECT_EQ(trailer(r.out, "status"), "search range exhausted");
}

TEST(Cli, DpTableZeroBudgetColumnIsExact) {
  const auto r = cli("dp-table --game lb --n 8 --budget 3 --samples 30");
  ASSERT_EQ(r.rc, 0) << r.err;
  const auto table = rows(r.out);
  ASSERT_EQ(table.size(), 30u * 4u);
  for (const auto& row : table) {
    if (row[1] != "0") continue;
    EXPECT_NEAR(std::stod(row[2]), std::stod(row[0]) + 1.0, 1e-9);
  }
}

TEST(Cli, AdaptivePassiveTrailerWithinTarget) {
  const auto r = cli("simulate --game pair --n 3 --stopping adaptive --eps 0.25 --runs 3");
  ASSERT_EQ(r.rc, 0) << r.err;
  EXPECT_LE(std::stod(trailer(r.out, "epsilon_hat_max")), 0.25);
}

TEST(Cli, PassiveCdfConcentratesNearZero) {
  const auto r = cli("cdf --game pair --n 3 --samples 20000 --runs 20 --eps 0.1 --delta 0.1");
  ASSERT_EQ(r.rc, 0) << r.err;
  for (const auto& row : rows(r.out)) EXPECT_LT(std::stod(row[0]), 0.05);
  EXPECT_EQ(trailer(r.out, "point_right_of_curve"), "yes");
}

TEST(Cli, DefaultOutputDirectoryFromEnvironment) {
  const auto dir = scratch() / "out";
  fs::remove_all(dir);
  const auto r = cli("shapley --game pair --n 3", "SHAPSEC_OUTPUT_DIR='" + dir.string() + "'");
  ASSERT_EQ(r.rc, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(slurp(dir / "shapley.csv").rfind("# schema-version: 1\n", 0), 0u);
}

TEST(Cli, ShippedManifestsParse) {
  const fs::path dir = fs::path(SHAPSEC_DEFAULT_DATA_DIR).parent_path() / "configs";
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    Command command = Command::shapley;
    if (name.rfind("simulate-", 0) == 0) command = Command::simulate;
    else if (name.rfind("cdf-", 0) == 0) command = Command::cdf;
    else if (name.rfind("min-samples-", 0) == 0) command = Command::min_samples;
    else if (name.rfind("dp-table-", 0) == 0) command = Command::dp_table;
    EXPECT_NO_THROW(parse_experiment(Config::load(entry.path()), command)) << name;
    ++seen;
  }
  EXPECT_GE(seen, 4);
}

TEST(MinSamples, SweepsAreMonotone) {
  for (int budget : {1, 2, 3}) {
    std::uint64_t prev = ~0ull;
    for (double eps : {0.05, 0.1, 0.2}) {
      auto game = make_lb_game(10);
      const auto r = find_min_samples(*game, 0, budget, eps, 2000, 50, 1 << 28);
      ASSERT_TRUE(r.crossed);
      EXPECT_TRUE(r.verified);
      EXPECT_LE(r.samples, prev);
      prev = r.samples;
    }
  }
  for (double eps : {0.05, 0.1, 0.2}) {
    std::uint64_t prev = 0;
    for (int budget : {1, 2, 3}) {
      const auto r = find_min_samples(*make_lb_game(10), 0, budget, eps, 2000, 50, 1 << 28);
      EXPECT_GE(r.samples, prev);
      prev = r.samples;
    }
  }
}

TEST(MinSamples, SynergyRequirementIsFlatInPlayerCount) {
  const auto base = load_hypergraph(data("dblp_standin.hg"));
  std::vector<double> rs;
  for (int n : {14, 16, 20}) {
    auto game = make_synergy_game(base.with_padding(n - base.vertex_count()));
    const auto r = find_min_samples(*game, 0, 2, 0.1, 1000, 10, 1 << 28);
    ASSERT_TRUE(r.crossed);
    rs.push_back(static_cast<double>(r.samples));
  }
  const double lo = *std::min_element(rs.begin(), rs.end());
  const double hi = *std::max_element(rs.begin(), rs.end());
  EXPECT_LE(hi, 1.15 * lo + 1.0) << rs[0] << " " << rs[1] << " " << rs[2];
}

TEST(MinSamples, TrendMatchesOneThirdOfBudgetRatioOverEps) {
  // Approximate relation R ~ (1/3) C Gamma / eps with Gamma = n, checked with
  // a 25% tolerance on the constant.
  for (int n : {10, 20}) {
    const auto r = find_min_samples(*make_lb_game(n), 0, 2, 0.05, 10000, 10, 1 << 28);
    ASSERT_TRUE(r.crossed);
    const double predicted = 2.0 * n / 0.05 / 3.0;
    EXPECT_NEAR(r.samples / predicted, 1.0, 0.25) << n << " " << r.samples;
  }
}
