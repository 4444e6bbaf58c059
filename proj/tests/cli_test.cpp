#include <gtest/gtest.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli/cli.hpp"
#include "cli/config_file.hpp"
#include "cli/metrics.hpp"
#include "cli/output.hpp"
#include "cli/presets.hpp"
#include "obsblr/errors.hpp"

using namespace obsblr::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> cells;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

bool parses_as_number(const std::string& s) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  return r.ec == std::errc{} && r.ptr == s.data() + s.size();
}

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("obsblr_cli_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

const std::vector<std::string> kSmall{"eval", "--w", "2", "--ell", "3", "--rho", "0", "--A", "0.5"};

}  // namespace

TEST(FormatNumber, TwelveSignificantDigitsAtMost) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(1.0 / 12.0), "0.0833333333333");
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(100.0), "100");
  EXPECT_EQ(format_number(2.5e-20), "2.5e-20");
}

TEST(RankOrderAgreement, CountsConcordantPairs) {
  const std::vector<double> a{1, 2, 3};
  EXPECT_DOUBLE_EQ(rank_order_agreement(a, std::vector<double>{10, 20, 30}), 1.0);
  EXPECT_DOUBLE_EQ(rank_order_agreement(a, std::vector<double>{30, 20, 10}), 0.0);
  EXPECT_DOUBLE_EQ(rank_order_agreement(a, std::vector<double>{10, 30, 20}), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(rank_order_agreement(std::vector<double>{1}, std::vector<double>{5}), 1.0);
}

TEST(ConfigFile, ParsesFlatKeyValues) {
  std::istringstream in("# comment\n\nw = 10\nA=0.01 # trailing\nw=12\n");
  const auto e = parse_config(in, "mem");
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e[0].first, "w");
  EXPECT_EQ(e[0].second, "12");
  EXPECT_EQ(e[1].second, "0.01");
}

TEST(ConfigFile, RejectsMalformedLine) {
  std::istringstream in("w 10\n");
  EXPECT_THROW(parse_config(in, "mem"), obsblr::PreconditionError);
}

TEST(Grids, LinearAndLogEndpoints) {
  const auto lin = linear_grid(20, 100, 9);
  ASSERT_EQ(lin.size(), 9u);
  EXPECT_EQ(lin.front(), 20.0);
  EXPECT_EQ(lin[1], 30.0);
  EXPECT_EQ(lin.back(), 100.0);
  const auto lg = log_grid(0.001, 0.1, 3);
  EXPECT_EQ(lg.front(), 0.001);
  EXPECT_NEAR(lg[1], 0.01, 1e-15);
  EXPECT_EQ(lg.back(), 0.1);
  EXPECT_THROW(log_grid(0.0, 1.0, 3), obsblr::PreconditionError);
  EXPECT_THROW(linear_grid(0.0, 1.0, 0), obsblr::PreconditionError);
}

TEST(Eval, SmallInstanceRecord) {
  const auto r = run_cli(kSmall);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = data_lines(r.out);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], "w,ell,rho,A,u,blr,regime");
  EXPECT_EQ(lines[1], "2,3,0,0.5,0,0.0833333333333,ok");
  EXPECT_NE(r.out.find("# seed=1"), std::string::npos);
}

TEST(Eval, JsonCarriesConfig) {
  auto args = kSmall;
  args.insert(args.begin(), {"--format", "json"});
  const auto r = run_cli(args);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["blr"].get<double>(), 1.0 / 12.0, 1e-12);
  EXPECT_EQ(j["config"]["command"], "eval");
  EXPECT_EQ(j["config"]["w"], "2");
}

TEST(Eval, WarnsOutsideDerivationRegime) {
  const auto r = run_cli({"eval", "--w", "12", "--ell", "10", "--rho", "0.25", "--A", "0.01"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_NE(r.out.find("w>=ell"), std::string::npos);
}

TEST(Eval, TimingFlagsDetermineSlots) {
  const auto r = run_cli({"eval", "--w", "2", "--t-c", "5", "--t-off", "1", "--t-b", "2",
                          "--t-s", "1", "--rho", "0", "--A", "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(data_lines(r.out)[1], "2,3,0,0.5,0,0.0833333333333,ok");
  EXPECT_EQ(run_cli({"eval", "--w", "2", "--t-c", "1", "--t-off", "1", "--t-b", "1.5", "--t-s",
                     "1", "--rho", "0", "--A", "0.5"})
                .code,
            2);
}

TEST(ExitCodes, UsageAndValidationErrorsGiveTwo) {
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({"eval", "--w", "0", "--ell", "3", "--rho", "0", "--A", "0.5"}).code, 2);
  EXPECT_EQ(run_cli({"eval", "--w", "2", "--ell", "3", "--rho", "0"}).code, 2);
  EXPECT_EQ(run_cli({"eval", "--w", "two", "--ell", "3", "--rho", "0", "--A", "0.5"}).code, 2);
  EXPECT_EQ(run_cli({"eval", "--w", "2", "--ell", "3", "--rho", "0", "--A", "1"}).code, 2);
  EXPECT_EQ(run_cli({"--format", "xml", "eval"}).code, 2);
  EXPECT_EQ(run_cli({"figure", "1"}).code, 2);
  EXPECT_EQ(run_cli({"qos", "--N", "16", "--L0", "16", "--S0", "0.5", "--ell", "100", "--rho",
                     "0", "--A", "0.1"})
                .code,
            2);
}

TEST(ExitCodes, HelpIsSuccess) {
  const auto r = run_cli({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("sweep"), std::string::npos);
  EXPECT_EQ(run_cli({"sweep", "--help"}).code, 0);
}

TEST(Config, FileValuesAndFlagOverride) {
  TempDir dir;
  const auto cfg = dir.path() / "run.cfg";
  std::ofstream(cfg) << "# small instance\nw=2\nell=3\nrho=0\nA=0.3\n";
  const auto from_file = run_cli({"eval", "--config", cfg.string()});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  EXPECT_EQ(split(data_lines(from_file.out)[1])[3], "0.3");
  const auto overridden = run_cli({"eval", "--config", cfg.string(), "--A", "0.5"});
  ASSERT_EQ(overridden.code, 0) << overridden.err;
  EXPECT_EQ(data_lines(overridden.out)[1], "2,3,0,0.5,0,0.0833333333333,ok");
  EXPECT_NE(overridden.out.find("# A=0.5"), std::string::npos);
}

TEST(Config, UnknownKeyOrMissingFileFails) {
  TempDir dir;
  const auto cfg = dir.path() / "bad.cfg";
  std::ofstream(cfg) << "wavelengths=2\n";
  EXPECT_EQ(run_cli({"eval", "--config", cfg.string()}).code, 2);
  EXPECT_EQ(run_cli({"eval", "--config", (dir.path() / "absent.cfg").string()}).code, 2);
}

TEST(Sweep, HeaderAndRowsInGridOrder) {
  const auto r = run_cli({"sweep", "--param", "arrival_prob", "--values", "0.01,0.001,0.1",
                          "--w", "10", "--ell", "100", "--rho", "0.1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = data_lines(r.out);
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0], "param,value,w,ell,rho,A,blr");
  EXPECT_EQ(split(lines[1])[1], "0.01");
  EXPECT_EQ(split(lines[2])[1], "0.001");
  EXPECT_EQ(split(lines[3])[1], "0.1");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split(lines[i]);
    for (std::size_t c = 1; c < cells.size(); ++c) EXPECT_TRUE(parses_as_number(cells[c]));
  }
}

TEST(Sweep, ReservedPartitionColumns) {
  const auto r = run_cli({"sweep", "--param", "reserved_L0", "--start", "1", "--stop", "15",
                          "--count", "15", "--N", "16", "--S0", "0.5", "--ell", "100", "--rho",
                          "0.5", "--A", "0.1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = data_lines(r.out);
  ASSERT_EQ(lines.size(), 16u);
  EXPECT_EQ(lines[0], "param,value,N,L0,S0,ell,rho,A,blr_0,blr_1");
  const auto mid = split(lines[8]);
  EXPECT_EQ(mid[3], "8");
  EXPECT_EQ(mid[8], mid[9]);
}

TEST(Sweep, RejectsBadGrids) {
  const std::vector<std::string> base{"sweep", "--w", "10", "--ell", "100", "--rho", "0.1",
                                      "--A", "0.01"};
  auto with = [&](std::vector<std::string> extra) {
    auto a = base;
    a.insert(a.end(), extra.begin(), extra.end());
    return run_cli(a).code;
  };
  EXPECT_EQ(with({"--param", "wavelengths"}), 2);
  EXPECT_EQ(with({"--param", "wavelengths", "--values", "2.5"}), 2);
  EXPECT_EQ(with({"--param", "wavelengths", "--start", "1", "--stop", "5", "--count", "0"}), 2);
  EXPECT_EQ(with({"--param", "arrival_prob", "--start", "0", "--stop", "0.1", "--count", "3",
                  "--scale", "log"}),
            2);
  EXPECT_EQ(with({"--param", "nonsense", "--values", "1"}), 2);
  EXPECT_EQ(with({"--param", "wavelengths", "--values", "1,2", "--start", "1"}), 2);
}

TEST(Sweep, FixedBlockingIsIdentity) {
  const auto r = run_cli({"sweep", "--param", "fixed_blocking", "--values", "0,0.25,1", "--w",
                          "10", "--ell", "100", "--A", "0.01"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = data_lines(r.out);
  EXPECT_EQ(split(lines[2]).back(), "0.25");
  EXPECT_EQ(split(lines[3]).back(), "1");
}

TEST(Qos, EqualPartitionRecord) {
  const auto r = run_cli({"qos", "--N", "16", "--L0", "8", "--S0", "0.5", "--ell", "100",
                          "--rho", "0.5", "--A", "0.1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = data_lines(r.out);
  EXPECT_EQ(lines[0], "N,L0,L1,S0,S1,ell,rho,A,blr_0,blr_1");
  const auto cells = split(lines[1]);
  EXPECT_EQ(cells[2], "8");
  EXPECT_EQ(cells[8], cells[9]);
}

TEST(Simulate, ByteIdenticalForFixedSeed) {
  const std::vector<std::string> args{"--seed", "7",  "simulate", "--w", "8",  "--ell",
                                      "40",     "--rho", "0.5",    "--A", "0.05", "--horizon",
                                      "5000",   "--replications", "3"};
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  auto other = args;
  other[1] = "8";
  EXPECT_NE(run_cli(other).out, a.out);
}

TEST(Simulate, QosRecordHasPerClassColumns) {
  const auto r = run_cli({"simulate", "--qos", "--w", "16", "--L0", "8", "--S0", "0.5", "--ell",
                          "100", "--rho", "0.5", "--A", "0.05", "--horizon", "4000",
                          "--replications", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto header = data_lines(r.out)[0];
  EXPECT_NE(header.find("blr_hat_0"), std::string::npos);
  EXPECT_NE(header.find("ci95_1"), std::string::npos);
  EXPECT_EQ(run_cli({"simulate", "--qos", "--w", "16", "--ell", "100", "--rho", "0.5", "--A",
                     "0.05"})
                .code,
            2);
}

TEST(Compare, SinglePointAgreesTrivially) {
  const auto r = run_cli({"compare", "--param", "arrival_prob", "--values", "0.01", "--w", "5",
                          "--ell", "20", "--rho", "0.5", "--horizon", "2000", "--replications",
                          "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(data_lines(r.out)[0], "param,value,blr_analytic,blr_sim,ci95");
  EXPECT_NE(r.out.find("# rank_order_agreement=1\n"), std::string::npos);
  EXPECT_EQ(run_cli({"compare", "--param", "reserved_L0", "--values", "1", "--w", "5", "--ell",
                     "20", "--rho", "0.5", "--A", "0.1"})
                .code,
            2);
}

TEST(Figure, WritesParsableDeterministicCsv) {
  TempDir dir;
  for (int id : figure_ids()) {
    const auto r = run_cli({"figure", std::to_string(id), "--out", dir.path().string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto path = dir.path() / ("figure_" + std::to_string(id) + ".csv");
    std::ifstream in(path);
    std::stringstream first;
    first << in.rdbuf();
    const auto lines = data_lines(first.str());
    ASSERT_GE(lines.size(), 2u);
    EXPECT_EQ(lines[0].substr(0, 2), "x,");
    const auto width = split(lines[0]).size();
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto cells = split(lines[i]);
      ASSERT_EQ(cells.size(), width);
      for (const auto& c : cells) EXPECT_TRUE(parses_as_number(c)) << c;
    }
    std::ostringstream again;
    write_figure_csv(again, compute_figure(id));
    EXPECT_EQ(again.str(), first.str());
  }
}

TEST(Figure, EqualPartitionCurvesCross) {
  const auto t = compute_figure(15);
  ASSERT_EQ(t.curves.size(), 6u);
  const std::size_t l0_8 = 7;
  ASSERT_EQ(t.x[l0_8], 8.0);
  for (std::size_t c = 0; c < t.curves.size(); c += 2) {
    EXPECT_NEAR(t.curves[c].y[l0_8], t.curves[c + 1].y[l0_8], 1e-12);
  }
}

TEST(Figure, SingleClassCurvesFollowTrends) {
  for (int id = 2; id <= 9; ++id) {
    const auto preset = figure_preset(id);
    const bool decreasing =
        preset.x_axis == Axis::conversion_capability || preset.x_axis == Axis::wavelengths;
    for (const auto& c : compute_figure(preset).curves) {
      for (std::size_t i = 1; i < c.y.size(); ++i) {
        const double d = c.y[i] - c.y[i - 1];
        EXPECT_LE(decreasing ? d : -d, 1e-12) << "figure " << id << " " << c.label << " i=" << i;
      }
    }
  }
}
