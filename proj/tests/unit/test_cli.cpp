#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "json.hpp"
#include "phasespace/cli/app.hpp"
#include "phasespace/cli/csv.hpp"
#include "phasespace/cli/manifest.hpp"
#include "phasespace/cli/verify.hpp"
#include "phasespace/error.hpp"
#include "phasespace/states.hpp"
#include "phasespace/transforms.hpp"

using namespace phasespace;
using namespace phasespace::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("phasespace_unit_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string row_at_origin(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("0,0,", 0) == 0) return line;
  }
  return {};
}

}  // namespace

TEST(Csv, FormatDoubleRoundTrips) {
  for (double x : {0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, -0.0}) {
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(Csv, DistributionRoundTripIsBitExact) {
  const PositionGrid g(-8, 8, 64);
  const auto psi = build_state(parse_state_spec("ho:n=1"), g);
  const auto sn = sn_from_density(density_from_pure(psi));
  const std::string text = distribution_csv(sn);
  EXPECT_EQ(text.rfind("# kind=SobutiNasiri\n# nq=64\n# np=64\n# qmin=-8\n# qmax=8\n# hbar=1\n# mass=1\nq,p,re,im\n", 0), 0u);
  const auto back = parse_distribution_csv(text);
  EXPECT_EQ(back.kind(), DistributionKind::SobutiNasiri);
  EXPECT_EQ(back.qgrid(), g);
  EXPECT_TRUE(back.values() == sn.values());
  EXPECT_EQ(distribution_csv(back), text);
}

TEST(Csv, RejectsMalformedInput) {
  EXPECT_THROW(parse_distribution_csv("q,p,re,im\n"), Error);
  EXPECT_THROW(parse_distribution_csv("# kind=Wigner\n# nq=8\n# np=8\n# qmin=-1\n# qmax=1\n# hbar=1\n# mass=1\nq,p,re,im\n0,0,1,0\n"),
               Error);
  const PositionGrid g(-6, 6, 8);
  const auto w = PhaseSpaceDistribution(DistributionKind::Wigner, g, {}, ComplexMatrix::Zero(8, 8));
  std::string text = distribution_csv(w);
  const auto pos = text.find("\n-6,");
  text.replace(pos + 1, 2, "-5");
  EXPECT_THROW(parse_distribution_csv(text), Error);
}

TEST(Csv, Marginal) {
  MarginalVector m;
  m.points = {-1.0, 0.0};
  m.values = {0.25, 0.75};
  EXPECT_EQ(marginal_csv(m), "x,value\n-1,0.25\n0,0.75\n");
}

TEST(Manifest, RoundTripAndStableKeys) {
  RunManifest m;
  m.command = "evolve";
  m.state_spec = "gauss:q0=1,p0=0,sigma=1";
  m.grid = {-7.5, 8.25, 128};
  m.constants = {1.0 / 3.0, 2.0};
  m.potential = {0.0, 0.1, 0.5};
  m.evolution = {1e-3 / 3.0, 17, 2};
  m.tolerances = {{"b", 1e-7}, {"a", 1e-6}};
  m.outputs = {{"x.csv", sha256_hex("x")}};
  m.checks = {{"norm", "pass", 1.234567890123e-15}};
  const std::string text = to_json(m);
  EXPECT_EQ(manifest_from_json(text), m);
  EXPECT_EQ(to_json(manifest_from_json(text)), text);
  EXPECT_LT(text.find("\"checks\""), text.find("\"command\""));
  EXPECT_LT(text.find("\"a\""), text.find("\"b\""));
  EXPECT_THROW(manifest_from_json("{\"grid\": 3}"), Error);
  EXPECT_THROW(manifest_from_json("not json"), Error);
}

TEST(Manifest, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Verify, RandomWeightsAreSeededAndNormalized) {
  std::mt19937_64 a(kVerifySeed), b(kVerifySeed);
  const auto wa = random_weights(a, 5);
  EXPECT_EQ(wa, random_weights(b, 5));
  double sum = 0.0;
  for (double w : wa) {
    EXPECT_GT(w, 0.0);
    sum += w;
  }
  EXPECT_NEAR(sum, 1.0, 1e-15);
}

TEST(Verify, QuickSuitePassesAndIsDeterministic) {
  VerifyOptions options;
  options.dynamics = false;
  const auto first = run_verify(options);
  EXPECT_GE(first.checks.size(), 12u);
  EXPECT_TRUE(first.all_passed()) << first.to_text();
  EXPECT_EQ(first.to_text(), run_verify(options).to_text());
}

TEST(App, WignerOfFirstExcitedState) {
  const auto dir = scratch("wigner");
  const auto r = invoke({"wigner", "--state", "ho:n=1,omega=1", "--out", dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string csv = read_text_file(dir / "wigner.csv");
  const std::string row = row_at_origin(csv);
  ASSERT_FALSE(row.empty());
  const double re = std::stod(row.substr(4, row.find(',', 4) - 4));
  EXPECT_NEAR(re, -0.318310, 1e-6);

  const auto manifest = manifest_from_json(read_text_file(dir / "manifest.json"));
  ASSERT_EQ(manifest.outputs.size(), 1u);
  EXPECT_EQ(manifest.outputs[0].path, "wigner.csv");
  EXPECT_EQ(manifest.outputs[0].sha256, sha256_hex(csv));
  EXPECT_EQ(manifest.state_spec, "ho:n=1,omega=1");

  const auto again = scratch("wigner_again");
  ASSERT_EQ(invoke({"wigner", "--state", "ho:n=1,omega=1", "--out", again.string()}).code, kExitOk);
  EXPECT_EQ(read_text_file(again / "wigner.csv"), csv);
}

TEST(App, ExpectHamiltonianOfGroundState) {
  const auto dir = scratch("expect");
  const auto r = invoke({"expect", "--state", "ho:n=0,omega=1", "--observable", "H", "--potential", "0,0,0.5",
                         "--out", dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(read_text_file(dir / "expect.json"));
  EXPECT_NEAR(j.at("value").get<double>(), 0.5, 1e-6);
  EXPECT_NEAR(j.at("oracle").get<double>(), 0.5, 1e-6);
}

TEST(App, ConvertSnToWigner) {
  const auto dir = scratch("convert");
  ASSERT_EQ(invoke({"sn", "--state", "cat:q0=2,p0=0,sigma=0.5", "--out", dir.string()}).code, kExitOk);
  const auto r = invoke({"convert", "--in", (dir / "sn.csv").string(), "--out", dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto w = parse_distribution_csv(read_text_file(dir / "wigner_from_sn.csv"));
  const auto direct = wigner_from_wavefunction(build_state(parse_state_spec("cat:q0=2,p0=0,sigma=0.5"), default_grid()));
  EXPECT_LT((w.values() - direct.values()).cwiseAbs().maxCoeff(), 1e-10);

  // A Wigner file is not a valid input.
  EXPECT_EQ(invoke({"convert", "--in", (dir / "wigner_from_sn.csv").string(), "--out", dir.string()}).code, kExitUsage);
}

TEST(App, MarginalsWriteTwoFiles) {
  const auto dir = scratch("marginals");
  const auto r = invoke({"marginals", "--state", "gauss:q0=-1,p0=1,sigma=0.8", "--dist", "sn", "--out", dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(dir / "sn_position_marginal.csv"));
  EXPECT_TRUE(fs::exists(dir / "sn_momentum_marginal.csv"));
  const auto m = manifest_from_json(read_text_file(dir / "manifest.json"));
  EXPECT_EQ(m.outputs.size(), 2u);
  EXPECT_EQ(m.checks.size(), 2u);
}

TEST(App, EvolveWritesLogAndSnapshots) {
  const auto dir = scratch("evolve");
  const auto r = invoke({"evolve", "--state", "ho:n=0,omega=1", "--potential", "0,0,0.5", "--dt", "1e-3", "--steps",
                         "20", "--snapshot-every", "10", "--log-every", "5", "--oracle", "--out", dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  for (const char* f : {"evolve_step_00000000.csv", "evolve_step_00000010.csv", "evolve_step_00000020.csv", "evolve_log.csv"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  const std::string log = read_text_file(dir / "evolve_log.csv");
  EXPECT_EQ(std::count(log.begin(), log.end(), '\n'), 6);
  const auto m = manifest_from_json(read_text_file(dir / "manifest.json"));
  EXPECT_EQ(m.outputs.size(), 4u);
  EXPECT_EQ(m.evolution.steps, 20u);
}

TEST(App, ExitCodes) {
  const auto dir = scratch("codes");
  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"bogus"}).code, kExitUsage);
  EXPECT_EQ(invoke({"wigner", "--state", "ho:n=1,frobnicate=2", "--out", dir.string()}).code, kExitUsage);
  EXPECT_EQ(invoke({"wigner", "--state", "ho:n=0", "--grid", "-8,8,100", "--out", dir.string()}).code, kExitUsage);
  EXPECT_EQ(invoke({"expect", "--state", "ho:n=0", "--observable", "x", "--out", dir.string()}).code, kExitUsage);
  EXPECT_EQ(invoke({"wigner", "--state", "ho:n=40", "--out", dir.string()}).code, kExitNumericalGuard);
  const auto r = invoke({"evolve", "--state", "ho:n=0", "--potential", "0,0,0.5", "--dt", "0.1", "--steps", "3",
                         "--out", dir.string()});
  EXPECT_EQ(r.code, kExitNumericalGuard);
  EXPECT_NE(r.err.find("StepTooLarge"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir / "evolve_step_00000000.csv"));
  EXPECT_EQ(invoke({"--help"}).code, kExitOk);
}

TEST(App, ConfigFileAndEnvironment) {
  const auto dir = scratch("config");
  RunManifest cfg;
  cfg.state_spec = "ho:n=0,omega=1";
  cfg.grid = {-7, 7, 128};
  write_text_file(dir / "cfg.json", to_json(cfg));
  const fs::path env_out = dir / "from_env";
  ::setenv(kOutDirEnv, env_out.string().c_str(), 1);
  const auto r = invoke({"wigner", "--config", (dir / "cfg.json").string()});
  ::unsetenv(kOutDirEnv);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto w = parse_distribution_csv(read_text_file(env_out / "wigner.csv"));
  EXPECT_EQ(w.qgrid(), PositionGrid(-7, 7, 128));

  // Flags override the file.
  const auto r2 = invoke({"wigner", "--config", (dir / "cfg.json").string(), "--grid", "-8,8,64", "--out", dir.string()});
  ASSERT_EQ(r2.code, kExitOk) << r2.err;
  EXPECT_EQ(parse_distribution_csv(read_text_file(dir / "wigner.csv")).qgrid(), PositionGrid(-8, 8, 64));
}

TEST(Tool, VerifyQuickRunsAreByteIdentical) {
  const auto a = scratch("tool_a");
  const auto b = scratch("tool_b");
  const std::string tool = PHASESPACE_TOOL;
  ASSERT_EQ(std::system((tool + " verify --quick --out " + a.string() + " > " + (a / "stdout.txt").string()).c_str()), 0);
  ASSERT_EQ(std::system((tool + " verify --quick --out " + b.string() + " > " + (b / "stdout.txt").string()).c_str()), 0);
  EXPECT_EQ(read_text_file(a / "verify_report.txt"), read_text_file(b / "verify_report.txt"));
  EXPECT_EQ(read_text_file(a / "manifest.json"), read_text_file(b / "manifest.json"));
}
