#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "common.hpp"
#include "ottr/serialize.hpp"

using namespace ottr;
using ottr::testing::mono;
using ottr::testing::rank_one;

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fixture(const std::string& name) { return std::string(OTTR_FIXTURES) + "/" + name; }

/// Line `n` (1-based) of `text` replaced by `repl`.
std::string replace_line(const std::string& text, int n, const std::string& repl) {
  std::istringstream in(text);
  std::string line, out;
  for (int k = 1; std::getline(in, line); ++k) out += (k == n ? repl : line) + "\n";
  return out;
}

ParseError parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no parse error for:\n" << text;
  return ParseError(-1, -1, "");
}

class Cli : public ::testing::Test {
 protected:
  fs::path dir;

  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("ottr_cli_" + std::to_string(::getpid()) + "_" +
           ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  int run(const std::string& args, std::string* output = nullptr) {
    fs::path log = dir / "log.txt";
    std::string cmd = std::string(OTTR_CLI) + " " + args + " > " + log.string() + " 2>&1";
    int status = std::system(cmd.c_str());
    if (output) *output = slurp(log);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST(Serialize, FixtureRoundTripIsByteIdentical) {
  for (const char* name : {"witten_F0.txt", "open_F0o.txt", "open_F1o.txt", "zero_seed.txt"}) {
    std::string text = slurp(fixture(name));
    EXPECT_EQ(emit(parse(text)), text) << name;
  }
}

TEST(Serialize, EveryKindRoundTrips) {
  const auto& d = rank_one();
  OpenContext ctx = d.context();
  JetPoly Go = d.v() * d.phi() + d.phi() * d.phi() * d.phi() * make_rational(-2, 3);
  PhaseLayout lay = d.th.layout();
  BigSeries bad = d.F0 + BigSeries::monomial(lay, mono({{lay.t_index(1, 2), 2}}), make_rational(5, 7));

  std::vector<std::string> texts{emit(d.th, d.F0o), emit(d.th, Go),
                                 emit(d.th, OperatorList(build_operators(ctx, Go))),
                                 emit(d.th, validate_closed_genus0(bad, d.th)),
                                 emit(d.th, JetPoly::variable(d.tr, JetVar::v(1, 3)).times_eps(2))};
  for (const auto& text : texts) {
    SeriesFile f = parse(text);
    EXPECT_EQ(emit(f), text);
    EXPECT_EQ(f.theory, d.th);
  }
  EXPECT_EQ(std::get<BigSeries>(parse(texts[0]).value), d.F0o);
  EXPECT_EQ(std::get<JetPoly>(parse(texts[1]).value), Go);
  EXPECT_STREQ(parse(texts[2]).kind(), "operator");
  EXPECT_STREQ(parse(texts[3]).kind(), "report");
  EXPECT_FALSE(std::get<ResidualReport>(parse(texts[3]).value).all_zero());
}

TEST(Serialize, RankTwoHeader) {
  TheoryData th(2, RationalMatrix(2, {0, 1, 1, 0}), {1, 0}, Truncation{4, 1, 4, 3, 2});
  PhaseLayout lay = th.layout();
  BigSeries f = BigSeries::monomial(lay, mono({{lay.t_index(1, 0), 1}, {lay.t_index(2, 1), 2}}), make_rational(-1, 2));
  std::string text = emit(th, f);
  EXPECT_NE(text.find("eta 0 1 1 0\n"), std::string::npos);
  EXPECT_EQ(emit(parse(text)), text);
}

TEST(Serialize, StrictRejections) {
  std::string ok = slurp(fixture("witten_F0.txt"));
  ASSERT_EQ(ok.substr(0, 21), "format ottr-series-v1");

  ParseError e = parse_error(replace_line(ok, 10, "2/12 0 [t,1,0,3] [t,1,1,1]"));
  EXPECT_EQ(e.line(), 10);
  EXPECT_EQ(e.column(), 1);

  e = parse_error(replace_line(ok, 10, "1/6 0 [u,1,0,3] [t,1,1,1]"));
  EXPECT_EQ(e.line(), 10);
  EXPECT_GT(e.column(), 1);

  EXPECT_EQ(parse_error(replace_line(ok, 1, "format ottr-series-v2")).line(), 1);
  EXPECT_EQ(parse_error(replace_line(ok, 10, "0 0 [t,1,0,3] [t,1,1,1]")).line(), 10);
  EXPECT_EQ(parse_error(replace_line(ok, 10, "1/6  0 [t,1,0,3] [t,1,1,1]")).line(), 10);
  EXPECT_EQ(parse_error(replace_line(ok, 10, "1/6 0 [t,1,1,1] [t,1,0,3]")).line(), 10);
  EXPECT_EQ(parse_error(replace_line(ok, 10, "1/6 0 [t,1,0,3] [t,1,4,1]")).line(), 10);
  EXPECT_EQ(parse_error(replace_line(ok, 10, "1/6 0 [t,1,0,3] [t,1,1,9]")).line(), 10);
  EXPECT_EQ(parse_error(replace_line(ok, 10, "1/6 0 [t,2,0,3] [t,1,1,1]")).line(), 10);
  // swapping two term lines breaks canonical order
  std::string l9 = replace_line(ok, 9, "1/6 0 [t,1,0,3] [t,1,1,1]");
  EXPECT_GE(parse_error(replace_line(l9, 10, "1/6 0 [t,1,0,3]")).line(), 9);

  parse_error(ok + "extra\n");
  parse_error(ok.substr(0, ok.size() - 1));
  parse_error(replace_line(ok, 8, "terms 17"));
  parse_error(replace_line(ok, 6, "kind banana"));
  parse_error("");
}

TEST(Serialize, RestrictTruncation) {
  SeriesFile f = parse(slurp(fixture("open_F0o.txt")));
  Truncation lower = f.theory.truncation();
  lower.D_t = 5;
  lower.A_max = 2;
  SeriesFile g = restrict_truncation(f, lower);
  const BigSeries& s = std::get<BigSeries>(g.value);
  EXPECT_EQ(s.prec(), 5);
  EXPECT_EQ(s.layout().max_level, 2);
  EXPECT_EQ(g.theory.truncation(), lower);
  for (const auto& t : s.terms()) EXPECT_LE(t.degree, 5);
  EXPECT_EQ(emit(parse(emit(g))), emit(g));

  Truncation higher = f.theory.truncation();
  higher.D_t = 9;
  EXPECT_THROW(restrict_truncation(f, higher), DomainError);
}

TEST(Serialize, MissingFile) {
  try {
    read_file("/nonexistent/ottr/file.txt");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 0);
  }
}

TEST(Determinism, ReportsIndependentOfThreadCount) {
  const auto& d = rank_one();
  OpenContext ctx = d.context();
  BigSeries F1o = F1o_formula(ctx, d.phi() * d.v());
  EXPECT_EQ(emit(d.th, validate_closed_genus0(d.F0, d.th, 1)), emit(d.th, validate_closed_genus0(d.F0, d.th, 4)));
  EXPECT_EQ(emit(d.th, validate_open_genus0(d.F0, d.F0o, d.th, 1)),
            emit(d.th, validate_open_genus0(d.F0, d.F0o, d.th, 4)));
  EXPECT_EQ(emit(d.th, validate_open_genus1(ctx, F1o, 1)), emit(d.th, validate_open_genus1(ctx, F1o, 4)));
  EXPECT_EQ(emit(d.th, OperatorList(build_operators(ctx, d.phi(), 1))),
            emit(d.th, OperatorList(build_operators(ctx, d.phi(), 4))));
}

TEST_F(Cli, PassingFixture) {
  std::string out;
  EXPECT_EQ(run("validate-genus0 " + fixture("witten_F0.txt"), &out), 0) << out;
}

TEST_F(Cli, CorruptedFixtureNamesEquation) {
  std::string out;
  EXPECT_EQ(run("validate-genus0 " + fixture("witten_F0_corrupted.txt") + " --report " + path("r.txt"), &out), 1);
  EXPECT_NE(out.find("nonzero: trr0(1,0,1,0,1,0)"), std::string::npos) << out;
  SeriesFile rep = read_file(path("r.txt"));
  EXPECT_FALSE(std::get<ResidualReport>(rep.value).all_zero());
}

TEST_F(Cli, InputErrors) {
  std::string out;
  EXPECT_EQ(run("validate-genus0 " + fixture("witten_F0_malformed.txt"), &out), 2);
  EXPECT_NE(out.find("line 10"), std::string::npos) << out;
  EXPECT_EQ(run("validate-genus0 /nonexistent.txt"), 2);
  EXPECT_EQ(run("--D_t 9 validate-genus0 " + fixture("witten_F0.txt")), 2);
  EXPECT_EQ(run("validate-genus0"), 2);
  EXPECT_EQ(run("no-such-verb"), 2);
  EXPECT_EQ(run("validate-open " + fixture("open_F0o.txt") + " " + fixture("witten_F0.txt")), 1);
}

TEST_F(Cli, InconsistentSeed) {
  std::string out;
  EXPECT_EQ(run("gen-example witten-rank1 --seed " + fixture("zero_seed.txt") + " --out " + path("g"), &out), 3);
  EXPECT_NE(out.find("degree 3"), std::string::npos) << out;
}

TEST_F(Cli, GenerateAndCheckTheorem) {
  std::string out;
  ASSERT_EQ(run("gen-example open-rank1 --degree 8 --out " + path("g"), &out), 0) << out;
  EXPECT_EQ(slurp(path("g/F0.txt")), slurp(fixture("witten_F0.txt")));
  EXPECT_EQ(slurp(path("g/F0o.txt")), slurp(fixture("open_F0o.txt")));
  ASSERT_EQ(run("derive-genus1 " + path("g/F0.txt") + " " + path("g/F0o.txt") + " --out " + path("F1o.txt")), 0);
  EXPECT_EQ(slurp(path("F1o.txt")), slurp(fixture("open_F1o.txt")));
  EXPECT_EQ(run("check-genus1 " + path("g/F0.txt") + " " + path("g/F0o.txt") + " " + path("F1o.txt")), 0);
  EXPECT_EQ(run("check-theorem32 " + path("g/F0.txt") + " " + path("g/F0o.txt") + " " + path("F1o.txt"), &out), 0)
      << out;
  EXPECT_EQ(run("compare " + path("F1o.txt") + " " + fixture("open_F1o.txt")), 0);
  EXPECT_EQ(run("compare " + path("g/F0.txt") + " " + fixture("witten_F0_corrupted.txt")), 1);
}

TEST_F(Cli, ThreadCountDoesNotChangeOutput) {
  std::string args = "validate-open " + fixture("witten_F0.txt") + " " + fixture("open_F0o.txt") + " --report ";
  ASSERT_EQ(run("--threads 1 " + args + path("r1.txt")), 0);
  ASSERT_EQ(run("--threads 4 " + args + path("r4.txt")), 0);
  EXPECT_EQ(slurp(path("r1.txt")), slurp(path("r4.txt")));
}

TEST_F(Cli, QPoly) {
  std::string out;
  EXPECT_EQ(run("qpoly 3", &out), 0);
  EXPECT_NE(out.find("f_1^3 + 3*eps*f_1*f_2 + eps^2*f_3"), std::string::npos) << out;
  EXPECT_EQ(run("qpoly 7 --lemma"), 0);
}
