#include <gtest/gtest.h>

#include <bergman/verify.hpp>

#include <cstdlib>
#include <fstream>
#include <sys/wait.h>

using namespace bergman;
using namespace bergman::harness;

namespace {

struct Run {
  int code;
  std::string out, err;
};

std::string slurp(const std::string& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Run cli(const std::string& args) {
  std::string o = ::testing::TempDir() + "cli_out.txt", e = ::testing::TempDir() + "cli_err.txt";
  int st = std::system((std::string(BERGMAN_CLI) + " " + args + " > " + o + " 2> " + e).c_str());
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, slurp(o), slurp(e)};
}

}  // namespace

TEST(ParseComplex, Forms) {
  EXPECT_EQ(parse_complex("0.5"), cplx(0.5));
  EXPECT_EQ(parse_complex("0.5i"), cplx(0, 0.5));
  EXPECT_EQ(parse_complex("-i"), cplx(0, -1));
  EXPECT_EQ(parse_complex("0.3+0.2i"), cplx(0.3, 0.2));
  EXPECT_EQ(parse_complex("1e-3-2e-2i"), cplx(1e-3, -2e-2));
  EXPECT_THROW(parse_complex("abc"), ConfigError);
  EXPECT_THROW(parse_complex(""), ConfigError);
}

TEST(Format, SeventeenDigits) {
  EXPECT_EQ(fmt(0.1), "0.10000000000000001");
  EXPECT_EQ(fmt(inf), "inf");
  EXPECT_EQ(std::stod(fmt(pi)), pi);
}

TEST(Config, JsonOverridesAndHash) {
  Config a = default_config("bb-sweep"), b = a;
  EXPECT_EQ(a.hash(), b.hash());
  apply_json(b, json{{"schema_version", 1}, {"p", {2.5}}, {"w2", {"0.5i", 0.3}}});
  ASSERT_EQ(b.w2.size(), 2u);
  EXPECT_EQ(b.w2[0], cplx(0, 0.5));
  EXPECT_NE(a.hash(), b.hash());
  b.out = "elsewhere.csv";
  Config c = a;
  apply_json(c, json{{"schema_version", 1}, {"p", {2.5}}, {"w2", {"0.5i", 0.3}}});
  EXPECT_EQ(b.hash(), c.hash());
}

TEST(Config, Rejections) {
  Config c = default_config("verify");
  EXPECT_THROW(apply_json(c, json{{"p", {2}}}), ConfigError);
  EXPECT_THROW(apply_json(c, json{{"schema_version", 1}, {"bogus", 1}}), ConfigError);
  c.quad = "1x256";
  EXPECT_THROW(c.validate(), ConfigError);
  Config d = default_config("verify");
  d.seed.reset();
  EXPECT_THROW(d.require_seed(), ConfigError);
}

TEST(Csv, RoundTrip) {
  Table t;
  t.header = {"a", "b"};
  t.add({"1", "x,y"});
  Table u = parse_csv(t.csv());
  EXPECT_EQ(u.header, t.header);
  EXPECT_EQ(u.rows, t.rows);
  EXPECT_THROW(t.add({"1"}), std::logic_error);
}

TEST(Report, Shape) {
  auto j = report_json({{"s", "c", true, 1.5, 2}, {"s", "d", false, inf, 0}});
  ASSERT_EQ(j.size(), 2u);
  for (auto& e : j)
    for (auto k : {"suite", "case", "status", "value", "tolerance"}) EXPECT_TRUE(e.contains(k));
  EXPECT_EQ(j[1]["status"], "fail");
}

TEST(Registry, CoversEveryModule) {
  auto r = registry();
  EXPECT_EQ(r.size(), 31u);
  std::map<std::string, int> got;
  for (auto& i : r) ++got[i.suite];
  EXPECT_EQ(got, expected_invariant_counts());
}

TEST(Commands, TentArea) {
  Config c = default_config("tent-area");
  auto o = cmd_tent_area(c);
  EXPECT_EQ(o.code, 0);
  Table t = parse_csv(o.text);
  EXPECT_EQ(t.rows.size(), 5u);
}

TEST(Commands, IbpZeroOrderAsserted) {
  Config c = default_config("ibp-check");
  c.quad = "48x96";
  auto o = cmd_ibp_check(c);
  EXPECT_EQ(o.code, 0);
  c.ibp_points = {{0.05, 0.5}};
  EXPECT_THROW(cmd_ibp_check(c), ConfigError);
}

TEST(Commands, BbSweepDeterministic) {
  Config c = small_config();
  auto a = cmd_bb_sweep(c), b = cmd_bb_sweep(c);
  EXPECT_EQ(a.text, b.text);
  Table t = parse_csv(a.text);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0][t.col("verdict")], "bounded");
  EXPECT_EQ(t.rows[0][t.col("config_hash")], c.hash());
}

TEST(Commands, BbSweepDivergingOutsideRange) {
  Config c = small_config();
  c.weight = "pair_power:2-p";
  c.p = {4.5};
  c.ladder = {1e-1, 1e-2, 1e-3};
  Table t = parse_csv(cmd_bb_sweep(c).text);
  EXPECT_EQ(t.rows[0][t.col("verdict")], "diverging");
}

TEST(Cli, InvalidRuleExitsTwo) {
  auto r = cli("verify --quad 1x256");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("invalid rule"), std::string::npos);
}

TEST(Cli, SeedRequiredExitsTwo) {
  auto r = cli(std::string("bell-check --config ") + TEST_DATA + "/no_seed.json");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("seed required"), std::string::npos);
  r = cli(std::string("verify --config ") + TEST_DATA + "/no_seed.json");
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, BadFlagsExitTwo) {
  EXPECT_EQ(cli("bb-sweep --p abc").code, 2);
  EXPECT_EQ(cli("bb-sweep --weight banana:1").code, 2);
  EXPECT_EQ(cli("frobnicate").code, 2);
}

TEST(Cli, TentAreaCsv) {
  auto r = cli("tent-area");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("R,center_re", 0), 0u);
}
