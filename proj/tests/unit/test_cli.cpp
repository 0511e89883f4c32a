#include <gtest/gtest.h>

#include <sstream>

#include <json.hpp>

#include "valdef/cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "valdef");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = valdef::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, SolveExitCodes) {
  EXPECT_EQ(run({"solve", "--field", "Laurent(Fp(3))", "--p", "2", "--x", "t"}).code, 0);
  EXPECT_EQ(run({"solve", "--field", "Laurent(Fp(3))", "--p", "2", "--x", "t^-1"}).code, 1);
  EXPECT_EQ(run({"solve", "--field", "Laurent(Fp(3))", "--p", "2", "--x", "-1 + O(t)"}).code, 2);
}

TEST(Cli, PhiZJsonAgreesWithOracle) {
  const auto r = run({"phi-z", "--field", "Laurent(Fp(3))", "--x", "1 + t", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["decision"]["truth"], "True");
  EXPECT_EQ(j["oracle"]["agrees"], true);
  EXPECT_EQ(j["oracle"]["in_valuation_ring"], true);
}

TEST(Cli, JsonIsDeterministic) {
  const std::vector<std::string> args{"phi-z", "--field", "Qp(5)", "--x", "3/25", "--json", "--seed", "9"};
  const auto a = run(args), b = run(args);
  EXPECT_EQ(a.code, 1);
  EXPECT_EQ(a.out, b.out);
  const auto s1 = run({"suite", "--json", "--samples", "20"}), s2 = run({"suite", "--json", "--samples", "20"});
  EXPECT_EQ(s1.out, s2.out);
  EXPECT_EQ(s1.code, 0);
}

TEST(Cli, MalformedInputAndUsage) {
  const auto bad = run({"solve", "--field", "Qp(5)", "--x", "1 +"});
  EXPECT_EQ(bad.code, 64);
  EXPECT_NE(bad.err.find("malformed"), std::string::npos);
  EXPECT_EQ(run({"solve", "--field", "Qp(6)", "--x", "1"}).code, 64);
  EXPECT_EQ(run({"bogus"}).code, 64);
  EXPECT_EQ(run({}).code, 64);
  EXPECT_EQ(run({"robinson", "--x", "1", "--what"}).code, 64);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, EvalFormulaWithAssignment) {
  const auto r = run({"eval", "--field", "Qp(7)", "--formula", "P_2(x) & ~P_2(3*x)", "--assign", "x=2"});
  EXPECT_EQ(r.code, 0) << r.err << r.out;
  EXPECT_EQ(run({"eval", "--field", "Qp(7)", "--formula", "P_3(x)", "--assign", "x=7"}).code, 1);
  EXPECT_EQ(run({"eval", "--field", "Qp(7)", "--formula", "x = ", "--assign", "x=7"}).code, 64);
}

TEST(Cli, TableLabelsCitedCells) {
  const auto r = run({"table", "--field", "Laurent(Laurent(Qp(5)))", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  const auto& rows = j["rows"];
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& row : rows) {
    for (const char* k : {"exists_mac", "forall_mac", "exists_forall_ring", "forall_exists_ring"}) {
      EXPECT_EQ(row[k]["basis"], "cited");
    }
  }
  const auto text = run({"table", "--field", "Laurent(Laurent(Qp(5)))"});
  EXPECT_NE(text.out.find("cited"), std::string::npos);
  EXPECT_NE(text.out.find("computed"), std::string::npos);
}

TEST(Cli, CounterexampleAndRobinson) {
  EXPECT_EQ(run({"counterexample", "--residue", "Q"}).code, 0);
  EXPECT_EQ(run({"counterexample", "--residue", "Q", "--gamma", "Z*Z"}).code, 64);
  EXPECT_EQ(run({"robinson", "--p", "7", "--x", "1/7"}).code, 1);
  EXPECT_EQ(run({"robinson", "--p", "7", "--x", "14"}).code, 0);
}
