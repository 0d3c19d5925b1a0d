#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lempertlab/cli.hpp"
#include "lempertlab/serialize.hpp"

namespace lempertlab {
namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "lempertlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

// value printed after "key = "
double field(const std::string& out, const std::string& key) {
  size_t at = out.find(key + " = ");
  if (at == std::string::npos) return NAN;
  return std::stod(out.substr(at + key.size() + 3));
}

std::filesystem::path tmp(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("lempertlab_test_" + name);
}

TEST(CliMember, Examples) {
  CliRun r = run({"member", "lhat", "[ [0.5,0],[0.7,0],[0,0],[0,0] ]"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out.rfind("member", 0), 0u);
  EXPECT_TRUE(r.err.empty());

  r = run({"member", "tetra", "[[0.8,0],[0.8,0],[0,0]]"});
  EXPECT_EQ(r.code, kExitNotMember);
  EXPECT_EQ(r.out.rfind("non-member", 0), 0u);

  r = run({"member", "lhat", "[[1,0]]"});
  EXPECT_EQ(r.code, kExitNotMember);
}

TEST(CliMember, ParseErrorsAreUsageErrors) {
  EXPECT_EQ(run({"member", "lhat", "[[0.5,0],[0.7"}).code, kExitUsage);
  EXPECT_EQ(run({"member", "cube", "[[0,0]]"}).code, kExitUsage);
  EXPECT_EQ(run({"member", "tetra", "[[0,0],[0,0]]"}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({}).code, kExitUsage);
}

TEST(CliDist, OriginClosedForm) {
  CliRun r = run({"dist", "lhat", "0", "[[0.5,0],[0,0],[0,0]]"});
  ASSERT_EQ(r.code, kExitOk) << r.out << r.err;
  EXPECT_NEAR(field(r.out, "exact"), std::atanh(0.5), 1e-12);
  EXPECT_NEAR(field(r.out, "c_lower"), std::atanh(0.5), 1e-3);
  EXPECT_NEAR(field(r.out, "l_upper"), std::atanh(0.5), 1e-3);
  EXPECT_TRUE(r.err.empty());

  r = run({"dist", "tetra", "0", "[[0,0],[0,0],[0.5,0]]"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_NEAR(field(r.out, "exact"), std::atanh(0.5), 1e-12);
  EXPECT_NEAR(field(r.out, "c_lower"), std::atanh(0.5), 1e-6);
}

TEST(CliDist, IdenticalPoints) {
  std::string p = "[[0.2,0.1],[0.1,-0.3],[0,0.2]]";
  CliRun r = run({"dist", "lhat", p, p});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_EQ(field(r.out, "c_lower"), 0);
  EXPECT_EQ(field(r.out, "l_upper"), 0);
  EXPECT_EQ(field(r.out, "gap"), 0);
}

TEST(CliDist, NonMemberAndJson) {
  EXPECT_EQ(run({"dist", "lhat", "0", "[[0.9,0],[0.5,0],[0,0]]"}).code, kExitNotMember);
  CliRun r = run({"dist", "lieball", "[[0.1,0],[0,0.2],[0.1,0]]", "[[0,0.3],[0.2,0],[0,0]]", "--json"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("\"c_lower\""), std::string::npos);
}

TEST(CliKappa, TetrablockExample) {
  CliRun r = run({"kappa", "tetra", "[[0.5,0],[0.2,0],[0.3,0]]"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_NEAR(field(r.out, "exact"), 0.8, 1e-15);
  EXPECT_NEAR(field(r.out, "kappa_upper(0; X)"), 0.8, 1e-3);
}

TEST(CliNormalize, Examples) {
  CliRun r = run({"normalize", "lhat", "[[0.4,0],[0,0],[0,0],[0,0]]"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  json j = json::parse(r.out);
  EXPECT_NEAR(j["rho"].get<double>(), 0.4, 1e-10);
  Point nf = point_from_json(j["normal_form"]);
  EXPECT_NEAR(std::abs(nf[0] - 0.4), 0, 1e-10);
  EXPECT_LT(nf.tail(3).norm(), 1e-10);

  r = run({"normalize", "lhat", "[[0.1,0.3],[0.2,-0.1],[0,0.2],[0.1,0]]"});
  ASSERT_EQ(r.code, kExitOk);
  nf = point_from_json(json::parse(r.out)["normal_form"]);
  EXPECT_GE(nf[0].real(), 0);
  EXPECT_LT(std::abs(nf[0].imag()), 1e-8);
  EXPECT_LT(nf.tail(3).norm(), 1e-8);
}

TEST(CliNormalize, PairWithOrigin) {
  CliRun r = run({"normalize", "lhat", "0", "[[0.1,0.3],[0.2,-0.1],[0,0.2],[0.1,0]]"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  json j = json::parse(r.out);
  EXPECT_LT(point_from_json(j["normal_form"]).norm(), 1e-12);
  Point w = point_from_json(j["second"]);
  EXPECT_NEAR(std::abs(w[0]), std::abs(cplx(0.1, 0.3)), 1e-10);
  EXPECT_LT(std::abs(w[3]), 1e-10);
}

TEST(CliNormalize, Errors) {
  EXPECT_EQ(run({"normalize", "lhat", "[[0.9,0],[0.5,0],[0,0]]"}).code, kExitNotMember);
  EXPECT_EQ(run({"normalize", "lieball", "[[0.1,0],[0,0],[0,0]]"}).code, kExitUsage);
}

TEST(CliVerify, IdenticalPairGivesZeroGap) {
  CliRun r = run({"verify-lempert", "--samples", "1", "--n", "3", "--identical"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("max gap 0 "), std::string::npos);
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
  EXPECT_TRUE(r.err.empty());
}

TEST(CliVerify, CsvIsByteIdenticalPerSeed) {
  auto a = tmp("a.csv"), b = tmp("b.csv");
  std::vector<std::string> args = {"verify-lempert", "--samples", "3", "--n", "3", "--seed", "11", "--format", "csv"};
  auto with = [&](const std::filesystem::path& p) {
    auto v = args;
    v.push_back("--out");
    v.push_back(p.string());
    return v;
  };
  ASSERT_EQ(run(with(a)).code, kExitOk);
  ASSERT_EQ(run(with(b)).code, kExitOk);
  std::string sa = slurp(a), sb = slurp(b);
  EXPECT_FALSE(sa.empty());
  EXPECT_EQ(sa, sb);
  EXPECT_EQ(sa.rfind("z,w,c_lower,l_upper,gap,sigma,witness_lambda,seconds\n", 0), 0u);
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST(CliVerify, OriginModeReportsClosedFormDeviation) {
  CliRun r = run({"verify-lempert", "--samples", "2", "--n", "3", "--origin"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("max |bound - closed form|"), std::string::npos);
}

TEST(CliVerify, ConfigFileAndFlagPrecedence) {
  auto cfg = tmp("cfg.toml"), out1 = tmp("c1.json"), out2 = tmp("c2.json"), out3 = tmp("c3.json");
  {
    std::ofstream f(cfg);
    f << "# comment\nseed = 5\nsamples = 2\nn = 3\nformat = json\n";
  }
  ASSERT_EQ(run({"verify-lempert", "--config", cfg.string(), "--out", out1.string()}).code, kExitOk);
  ASSERT_EQ(run({"verify-lempert", "--samples", "2", "--n", "3", "--seed", "5", "--out", out2.string()}).code,
            kExitOk);
  ASSERT_EQ(run({"verify-lempert", "--config", cfg.string(), "--seed", "6", "--out", out3.string()}).code, kExitOk);
  EXPECT_EQ(slurp(out1), slurp(out2));
  EXPECT_NE(slurp(out1), slurp(out3));
  for (auto& p : {cfg, out1, out2, out3}) std::filesystem::remove(p);
}

TEST(CliVerify, EnvironmentSeedIsTheDefault) {
  auto a = tmp("e1.csv"), b = tmp("e2.csv");
  setenv("LEMPERTLAB_SEED", "13", 1);
  ASSERT_EQ(run({"verify-lempert", "--samples", "2", "--n", "3", "--format", "csv", "--out", a.string()}).code,
            kExitOk);
  unsetenv("LEMPERTLAB_SEED");
  ASSERT_EQ(run({"verify-lempert", "--samples", "2", "--n", "3", "--format", "csv", "--seed", "13", "--out",
                 b.string()})
                .code,
            kExitOk);
  EXPECT_EQ(slurp(a), slurp(b));
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST(CliVerify, InvalidConfigIsAUsageError) {
  EXPECT_EQ(run({"verify-lempert", "--samples", "0"}).code, kExitUsage);
  EXPECT_EQ(run({"verify-lempert", "--n", "40"}).code, kExitUsage);
  EXPECT_EQ(run({"verify-lempert", "--format", "xml"}).code, kExitUsage);
  EXPECT_EQ(run({"verify-lempert", "--config", "/nonexistent/file"}).code, kExitUsage);
}

}  // namespace
}  // namespace lempertlab
