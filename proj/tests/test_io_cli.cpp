#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "telegraph/errors.hpp"
#include "telegraph/io.hpp"

namespace {

using namespace telegraph;
using json = nlohmann::json;

struct Run {
  int code = -1;
  std::string out;
};

Run run_cli(const std::string& args) {
  const std::string cmd = std::string(TELEGRAPH_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

TEST(FormatDouble, RoundTripsAndUsesDot) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.125, -2.5e17, 4.9406564584124654e-324}) {
    const auto s = io::format_double(v);
    EXPECT_EQ(std::strtod(s.c_str(), nullptr), v) << s;
    EXPECT_EQ(s.find(','), std::string::npos);
  }
  EXPECT_EQ(io::format_double(0.5), "0.5");
  EXPECT_EQ(io::format_double(3.0), "3");
}

TEST(EvalGrid, ParseAndValues) {
  const auto g = io::EvalGrid::parse("0:10:201");
  EXPECT_EQ(g.points, 201u);
  const auto v = g.values();
  ASSERT_EQ(v.size(), 201u);
  EXPECT_EQ(v.front(), 0.0);
  EXPECT_EQ(v.back(), 10.0);
  EXPECT_DOUBLE_EQ(v[1], 0.05);
  EXPECT_THROW(io::EvalGrid::parse("1:0:5"), DomainError);
  EXPECT_THROW(io::EvalGrid::parse("0:1:1"), DomainError);
  EXPECT_THROW(io::EvalGrid::parse("0:1"), DomainError);
  EXPECT_THROW(io::EvalGrid::parse("a:1:3"), DomainError);
}

TEST(CsvWriter, Layout) {
  std::ostringstream s;
  io::CsvWriter w(s);
  w.header({"y", "value"});
  w.row({0.25, 1e-3});
  w.row_cells({"7", "x"});
  EXPECT_EQ(s.str(), "y,value\n0.25,0.001\n7,x\n");
}

TEST(Cli, EvalPdfA0StartsNearHalfAlphaLambda) {
  const auto r = run_cli("eval pdf-a0 --lambda 2 --mu 0.5 --alpha 0.5 --grid 0:10:200");
  ASSERT_EQ(r.code, 0);
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 201u);
  EXPECT_EQ(rows[0][0], "y");
  EXPECT_EQ(rows[0][1], "value");
  EXPECT_NEAR(std::stod(rows[1][1]), 0.5, 1e-12);
  EXPECT_NEAR(std::stod(rows[2][1]), 0.5, 0.02);
}

TEST(Cli, EvalPdfCxStartsNearBoundaryValue) {
  const auto r = run_cli("eval pdf-cx --lambda 2 --mu 0.5 --x 1 --grid 1:12:200");
  ASSERT_EQ(r.code, 0);
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 201u);
  EXPECT_NEAR(std::stod(rows[1][1]), std::exp(-0.5), 1e-12);
}

TEST(Cli, EvalPsi0NonNegative) {
  const auto r = run_cli("eval psi0 --lambda 2 --mu 1.5 --grid 0.01:8:100");
  ASSERT_EQ(r.code, 0);
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 101u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GE(std::stod(rows[i][1]), 0.0);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("eval psi0 --lambda 1 --mu 2 --grid 0.1:1:5").code, 2);
  EXPECT_EQ(run_cli("eval psi0 --grid 1:0:5").code, 2);
  EXPECT_EQ(run_cli("eval nonsense --grid 0:1:5").code, 2);
  EXPECT_EQ(run_cli("--no-such-flag").code, 2);
  EXPECT_EQ(run_cli("verify --mutate printed-fc0").code, 3);
  EXPECT_EQ(run_cli("eval cond-cdf --t 5 --tau 4 --grid 0:5:3").code, 2);
  EXPECT_EQ(run_cli("").code, 2);
}

TEST(Cli, MomentsTable) {
  const auto r = run_cli("moments --lambda 2 --mu 0.5 --alpha 0.5 --x 1 --n-max 3");
  ASSERT_EQ(r.code, 0);
  const auto rows = parse_csv(r.out);
  ASSERT_GE(rows.size(), 4u);
  EXPECT_EQ(rows[0][0], "n");
  EXPECT_NEAR(std::stod(rows[1][3]), 3.0, 1e-12);
  EXPECT_NEAR(std::stod(rows[1][4]), 13.0 / 3.0, 1e-12);
  const auto r0 = run_cli("moments --lambda 2 --mu 0.5 --alpha 0.5 --x 0 --n-max 1");
  EXPECT_NEAR(std::stod(parse_csv(r0.out)[1][2]), 8.0 / 3.0, 1e-12);
}

TEST(Cli, SimulateIsDeterministic) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto a = dir / "telegraph_sim_a.csv";
  const auto b = dir / "telegraph_sim_b.csv";
  const std::string base = "simulate --lambda 2 --mu 0.5 --alpha 0.5 --x 1 --n 5000 --seed 17 --out ";
  ASSERT_EQ(run_cli(base + a.string()).code, 0);
  ASSERT_EQ(run_cli(base + b.string()).code, 0);
  const auto sa = slurp(a);
  EXPECT_FALSE(sa.empty());
  EXPECT_EQ(sa, slurp(b));
  const auto rows = parse_csv(sa);
  EXPECT_EQ(rows.size(), 5001u);
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST(Cli, SimulateAlphaOneColumnsAgree) {
  const auto r = run_cli("simulate --lambda 2 --mu 0.5 --alpha 1 --x 1 --n 500 --seed 3");
  ASSERT_EQ(r.code, 0);
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 501u);
  std::size_t cx = 0, ax = 0, m = 0;
  for (std::size_t i = 0; i < rows[0].size(); ++i) {
    if (rows[0][i] == "c_x") cx = i;
    if (rows[0][i] == "a_x") ax = i;
    if (rows[0][i] == "m") m = i;
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i][cx], rows[i][ax]);
    EXPECT_EQ(rows[i][m], "1");
  }
}

TEST(Cli, JsonEnvelope) {
  const auto r = run_cli("simulate --lambda 2 --mu 0.5 --alpha 0.5 --n 20000 --summary-only --json");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["tool"], "telegraph");
  EXPECT_EQ(j["command"], "simulate");
  EXPECT_EQ(j["status"], "ok");
  EXPECT_EQ(j["exit_code"], 0);
  EXPECT_NEAR(j["result"]["m"]["mean"].get<double>(), 2.0, 0.1);
  const auto bad = run_cli("eval psi0 --lambda 1 --mu 2 --grid 0.1:1:5 --json");
  EXPECT_EQ(bad.code, 2);
  const auto jb = json::parse(bad.out);
  EXPECT_EQ(jb["exit_code"], 2);
  EXPECT_EQ(jb["error"]["kind"], "domain");
}

TEST(Cli, PresetsEmitWideCsv) {
  for (const char* name : {"fig2-left", "fig2-right", "fig3-left", "fig3-right", "fig6"}) {
    const auto r = run_cli(std::string("eval --preset ") + name);
    ASSERT_EQ(r.code, 0) << name;
    const auto rows = parse_csv(r.out);
    ASSERT_GT(rows.size(), 50u) << name;
    EXPECT_GE(rows[0].size(), 5u) << name;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      ASSERT_EQ(rows[i].size(), rows[0].size());
      for (std::size_t k = 1; k < rows[i].size(); ++k) EXPECT_GE(std::stod(rows[i][k]), 0.0);
    }
  }
}

TEST(Cli, VerifyFastPasses) {
  const auto r = run_cli("verify --level fast --json");
  EXPECT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["status"], "ok");
}

}  // namespace
