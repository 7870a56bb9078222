#include "densrisk/cli.hpp"
#include "densrisk/comparison.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using namespace densrisk;

namespace {

struct CliResult
{
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args)
{
  args.insert(args.begin(), "densrisk");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// One unit in the last printed digit of `text`.
double last_digit_unit(const std::string& text)
{
  const auto dot = text.find('.');
  if (dot == std::string::npos)
    return 1.0;
  return std::pow(10.0, -static_cast<double>(text.size() - dot - 1));
}

std::vector<std::vector<std::string>> csv_cells(const std::string& text)
{
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ','))
      cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

} // namespace

TEST(Table, RowForFive)
{
  const auto r = run_cli({"table", "--n", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_table_csv(r.out);
  ASSERT_EQ(rows.size(), 1u);
  const auto& row = rows[0];
  EXPECT_EQ(row.n, 5);
  EXPECT_NEAR(row.benchmark_mise, 0.07969, 1e-5);
  EXPECT_NEAR(row.umvu_ratio, 1.2110, 1e-4);
  EXPECT_NEAR(row.b_n, 1.2458, 1e-4);
  EXPECT_NEAR(row.normal_ratio1, 0.459, 1e-3);
  EXPECT_NEAR(row.normal_ratio2, 0.773, 1e-3);
  EXPECT_NEAR(row.c_n, 5.1737, 1e-4);
  EXPECT_NEAR(row.epan_ratio1, 0.455, 1e-3);
  EXPECT_NEAR(row.epan_ratio2, 0.786, 1e-3);
}

TEST(Table, InfinityRenderingRoundTrips)
{
  const auto csv = run_cli({"table", "--n", "3,1000"});
  ASSERT_EQ(csv.code, 0);
  const auto cells = csv_cells(csv.out);
  EXPECT_EQ(cells[1][2], "inf");
  const auto from_csv = parse_table_csv(csv.out);
  EXPECT_TRUE(std::isinf(from_csv[0].umvu_ratio));
  EXPECT_NEAR(from_csv[1].benchmark_mise, 0.00025, 1e-5);
  EXPECT_NEAR(from_csv[1].b_n, 1.0842, 1e-4);
  EXPECT_NEAR(from_csv[1].c_n, 4.7617, 1e-4);

  const auto json = run_cli({"table", "--n", "3,1000", "--format", "json"});
  ASSERT_EQ(json.code, 0);
  EXPECT_NE(json.out.find("\"umvu\":{\"infinite\":true,\"value\":null}"), std::string::npos)
    << json.out;
  const auto from_json = parse_table_json(json.out);
  const auto direct = compute_comparison_table({3, 1000});
  ASSERT_EQ(from_json.size(), 2u);
  EXPECT_TRUE(std::isinf(from_json[0].umvu_ratio));
  EXPECT_EQ(from_json[1].epan_ratio2, direct[1].epan_ratio2);
  EXPECT_EQ(from_json[1].umvu_ratio, direct[1].umvu_ratio);
  EXPECT_EQ(render_table_json(from_json), json.out);
}

TEST(Table, RejectsSmallN)
{
  const auto r = run_cli({"table", "--n", "2"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("n"), std::string::npos);
  EXPECT_EQ(run_cli({"table", "--n", "x"}).code, cli::kExitUsage);
}

TEST(Table, MatchesGoldenFileWithinLastDigit)
{
  const std::string golden = read_file(std::string(DENSRISK_TEST_DATA_DIR) + "/table_golden.csv");
  ASSERT_FALSE(golden.empty());
  const auto r = run_cli({"table"});
  ASSERT_EQ(r.code, 0);
  const auto want = csv_cells(golden);
  const auto got = csv_cells(r.out);
  ASSERT_EQ(want.size(), got.size());
  EXPECT_EQ(want[0], got[0]);
  for (std::size_t i = 1; i < want.size(); ++i) {
    ASSERT_EQ(want[i].size(), got[i].size());
    for (std::size_t j = 0; j < want[i].size(); ++j) {
      if (want[i][j] == "inf") {
        EXPECT_EQ(got[i][j], "inf");
        continue;
      }
      EXPECT_NEAR(std::stod(got[i][j]), std::stod(want[i][j]), last_digit_unit(want[i][j]) * 1.0001)
        << "row " << i << " col " << j;
    }
  }
}

TEST(Table, ByteIdenticalAcrossRunsAndThreads)
{
  const auto a = run_cli({"table", "--n", "3,7,50"});
  const auto b = run_cli({"table", "--n", "3,7,50"});
  const auto c = run_cli({"table", "--n", "3,7,50", "--threads", "3"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
  const auto rows = parse_table_csv(c.out);
  EXPECT_EQ(rows[0].n, 3);
  EXPECT_EQ(rows[1].n, 7);
  EXPECT_EQ(rows[2].n, 50);
}

TEST(Table, WritesToFile)
{
  const std::string path = ::testing::TempDir() + "densrisk_table.csv";
  const auto r = run_cli({"table", "--n", "4", "--out", path});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(read_file(path), run_cli({"table", "--n", "4"}).out);
  std::remove(path.c_str());
}

TEST(Figure, CurvesSatisfyDecomposition)
{
  for (const char* which : {"1", "2"}) {
    const auto r = run_cli({"figure", "--which", which, "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto curves = figure_curves(std::stoi(which), 14, default_figure_grid());
    ASSERT_EQ(curves.size(), 2u);
    for (const auto& c : curves) {
      EXPECT_EQ(c.points.size(), 301u);
      for (const auto& p : c.points) {
        EXPECT_NEAR(p.rmse * p.rmse, p.bias * p.bias + p.sd * p.sd, 1e-12);
        EXPECT_GE(p.rmse, std::abs(p.bias));
      }
    }
  }
  const auto csv = run_cli({"figure"});
  const auto cells = csv_cells(csv.out);
  EXPECT_EQ(cells[0], (std::vector<std::string>{"estimator", "x", "bias", "sd", "rmse"}));
  EXPECT_EQ(cells[1][0], "plugin");
  EXPECT_EQ(cells[1][1], "-3.00");
  EXPECT_EQ(cells.back()[0], "kernel-epan");
  EXPECT_EQ(cells.back()[1], "3.00");
}

TEST(Figure, OneCrossovers)
{
  const auto roots = mse_crossovers(14);
  ASSERT_EQ(roots.size(), 2u);
  EXPECT_NEAR(roots[0], 0.17, 0.02);
  EXPECT_NEAR(roots[1], 1.53, 0.02);
}

TEST(Figure, TwoKernelRatio)
{
  const double r = optimal_mise(KernelType::epanechnikov, 14) / optimal_mise(KernelType::normal, 14);
  EXPECT_NEAR(r, 0.948 / 0.973, 0.003);
}

TEST(Mise, PluginAndKernelAndUmvu)
{
  auto value = [](const CliResult& r) { return parse_mise_report_json(r.out).value; };
  const auto plugin = run_cli({"mise", "--estimator", "plugin", "--n", "10"});
  ASSERT_EQ(plugin.code, 0) << plugin.err;
  EXPECT_NEAR(value(plugin), 0.03044, 1e-5);

  const auto kernel = run_cli({"mise", "--estimator", "kernel", "--kernel", "normal", "--n", "10",
                               "--rule", "thumb"});
  ASSERT_EQ(kernel.code, 0) << kernel.err;
  EXPECT_NEAR(value(kernel) / 0.03044, 1.010, 0.003);

  const auto umvu = run_cli({"mise", "--estimator", "umvu", "--n", "3"});
  EXPECT_EQ(umvu.code, 0);
  EXPECT_TRUE(parse_mise_report_json(umvu.out).infinite());

  const auto fixed = run_cli({"mise", "--estimator", "kernel", "--kernel", "epan", "--n", "7",
                              "--h", "0.9", "--sigma", "2"});
  ASSERT_EQ(fixed.code, 0);
  EXPECT_NEAR(value(fixed), mise_closed_epan_kernel(7, 0.45) / 2.0, 1e-15);
}

TEST(Mise, MonteCarloIsDeterministic)
{
  const std::vector<std::string> args = {"mise",   "--estimator", "kernel", "--kernel", "epan",
                                         "--n",    "6",           "--rule", "thumb",    "--method",
                                         "mc",     "--replicates", "500",   "--seed",   "9"};
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto report = parse_mise_report_json(a.out);
  EXPECT_EQ(report.method, MiseMethod::monte_carlo);
  ASSERT_TRUE(report.std_error.has_value());
  EXPECT_GT(*report.std_error, 0.0);
}

TEST(Mise, UsageErrors)
{
  EXPECT_EQ(run_cli({"mise", "--estimator", "kernel", "--n", "10"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"mise", "--estimator", "kernel", "--n", "10", "--h", "0.3", "--rule", "thumb"})
              .code,
            cli::kExitUsage);
  EXPECT_EQ(run_cli({"mise", "--estimator", "plugin", "--n", "10", "--method", "mc"}).code,
            cli::kExitUsage);
  EXPECT_EQ(run_cli({"mise", "--estimator", "kernel", "--n", "10", "--rule", "thumb", "--seed", "3"})
              .code,
            cli::kExitUsage);
  EXPECT_EQ(run_cli({"mise", "--estimator", "kernel", "--n", "10", "--h", "0.3", "--method", "mc"})
              .code,
            cli::kExitUsage);
  EXPECT_EQ(run_cli({"mise", "--estimator", "magic", "--n", "10"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"mise", "--n", "10"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"nonsense"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"--help"}).code, cli::kExitOk);
}

TEST(Lognormal, DefaultsSingleAndEmpty)
{
  const auto all = run_cli({"lognormal"});
  ASSERT_EQ(all.code, 0);
  EXPECT_EQ(all.out, "b,n0\n0.2,312\n0.4,87\n0.6,45\n0.8,31\n1,25\n1.2,22\n");
  EXPECT_EQ(run_cli({"lognormal", "--b", "0.4"}).out, "b,n0\n0.4,87\n");
  const auto empty = run_cli({"lognormal", "--b", ""});
  EXPECT_EQ(empty.code, 0);
  EXPECT_EQ(empty.out, "b,n0\n");
  EXPECT_EQ(run_cli({"lognormal", "--b", "-1"}).code, cli::kExitUsage);
}

TEST(Lognormal, SearchFailureIsANumericalError)
{
  const auto r = run_cli({"lognormal", "--b", "0.001"});
  EXPECT_EQ(r.code, cli::kExitNumerical);
  EXPECT_FALSE(r.err.empty());
}

TEST(OtherCommands, ConstantsCurveSkew)
{
  const auto constants = run_cli({"bandwidth-constants", "--n", "3,10"});
  ASSERT_EQ(constants.code, 0);
  EXPECT_EQ(constants.out, "n,b_n,c_n\n3,1.2871,5.2821\n10,1.2021,5.0628\n");

  const auto curve = run_cli({"mse-curve", "--estimator", "kernel", "--kernel", "epan", "--n", "14",
                              "--x-min", "0", "--x-max", "1", "--step", "0.5"});
  ASSERT_EQ(curve.code, 0) << curve.err;
  EXPECT_EQ(csv_cells(curve.out).size(), 4u);

  const auto skew = run_cli({"skew-mise", "--format", "json"});
  ASSERT_EQ(skew.code, 0) << skew.err;
  EXPECT_NE(skew.out.find("\"ratio\":1.38"), std::string::npos);
}

TEST(Rendering, FormatsAndRoundTrips)
{
  EXPECT_EQ(format_fixed(0.123456, 3), "0.123");
  EXPECT_EQ(format_fixed(numerics::kInf, 3), "inf");
  EXPECT_EQ(format_ratio(0.99974), "0.9997");
  EXPECT_EQ(format_ratio(1.0101), "1.010");
  EXPECT_EQ(format_ratio(0.9992), "0.999");
  EXPECT_EQ(format_exact(0.1), "0.1");
  MiseReport r{0.25, MiseMethod::monte_carlo, 0.01};
  const auto back = parse_mise_report_json(render_mise_report_json(r));
  EXPECT_EQ(back.value, r.value);
  EXPECT_EQ(back.method, r.method);
  EXPECT_EQ(*back.std_error, *r.std_error);
  MiseReport inf{numerics::kInf, MiseMethod::closed_form, std::nullopt};
  EXPECT_EQ(render_mise_report_json(inf), "{\"infinite\":true,\"method\":\"closed_form\",\"value\":null}");
  EXPECT_TRUE(parse_mise_report_json(render_mise_report_json(inf)).infinite());
  EXPECT_FALSE(parse_mise_report_json(render_mise_report_json(inf)).std_error.has_value());
}
