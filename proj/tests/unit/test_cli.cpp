#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bfev/biconv.hpp"
#include "bfev/cli.hpp"
#include "bfev/family_spec.hpp"
#include "bfev/io.hpp"
#include "fixtures.hpp"

using namespace bfev;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "bfev");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "bfev_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(FamilySpec, Grammar) {
  const auto s = parse_spec("lomax:p=0.5,theta=1");
  EXPECT_EQ(s.name, "lomax");
  EXPECT_EQ(s.number("p"), 0.5);
  EXPECT_EQ(s.number("theta"), 1.0);
  EXPECT_THROW(s.number("m"), std::invalid_argument);
  EXPECT_THROW(s.only({"p"}), std::invalid_argument);
  const auto d = parse_spec("dirac:1,-2");
  ASSERT_EQ(d.positional.size(), 2u);
  EXPECT_THROW(parse_spec("amh:theta=1,theta=2"), std::invalid_argument);
}

TEST(FamilySpec, Numbers) {
  EXPECT_EQ(parse_number("1e-3"), 1e-3);
  EXPECT_EQ(parse_number("+2"), 2.0);
  EXPECT_EQ(parse_number("inf"), kInf);
  EXPECT_EQ(parse_number("-inf"), -kInf);
  EXPECT_THROW(parse_number("1.5x"), std::invalid_argument);
  EXPECT_THROW(parse_number(""), std::invalid_argument);
  EXPECT_EQ(parse_number_list("2,5,10"), (std::vector<double>{2, 5, 10}));
}

TEST(FamilySpec, Copulas) {
  EXPECT_EQ(parse_copula("amh:theta=0.5").family(), Copula::Family::amh);
  EXPECT_EQ(parse_copula("clayton:p=2").family(), Copula::Family::clayton);
  EXPECT_EQ(parse_copula("logistic:m=2").family(), Copula::Family::logistic);
  EXPECT_EQ(parse_copula("ev-logistic:m=2").family(), Copula::Family::ev_from_pickands);
  EXPECT_EQ(parse_copula("bifree-gumbel-mixed:theta=0.5").family(), Copula::Family::bifree_from_pickands);
  EXPECT_EQ(parse_copula("survival:clayton:p=0.5").family(), Copula::Family::survival_of);
  EXPECT_EQ(parse_copula("power:p=0.5:amh:theta=1").family(), Copula::Family::power_of);
  EXPECT_THROW(parse_copula("amh"), std::invalid_argument);
  EXPECT_THROW(parse_copula("amh:theta=0.5,p=1"), std::invalid_argument);
  EXPECT_THROW(parse_copula("nonsense:x=1"), std::invalid_argument);
}

TEST(FamilySpec, SpectralMeasureFromFile) {
  const auto path = scratch("rho.json");
  write_text_file(path.string(), R"({"atoms": [[1, 0, 1], [0, 1, 1]]})");
  const auto C = parse_copula("pickands-spectral:@" + path.string());
  EXPECT_NEAR(C(0.3, 0.5), 0.15, 1e-15);
  write_text_file(path.string(), R"({"atoms": [[1, 0, 1]]})");
  EXPECT_THROW(parse_copula("pickands-spectral:@" + path.string()), PickandsConstraintError);
}

TEST(FamilySpec, Marginals) {
  EXPECT_NEAR(parse_marginal("uniform")(0.25), 0.25, 1e-15);
  EXPECT_NEAR(parse_marginal("uniform:a=-1,b=1")(0.0), 0.5, 1e-15);
  EXPECT_NEAR(parse_marginal("pareto:alpha=1")(2.0), 0.5, 1e-15);
  EXPECT_NEAR(parse_marginal("exponential")(std::log(2.0)), 0.5, 1e-15);
  EXPECT_NEAR(parse_marginal("gev:xi=0,m=0,sigma=1")(0.0), std::exp(-1.0), 1e-15);
  EXPECT_EQ(parse_marginal("dirac:3")(3.0), 1.0);
  EXPECT_EQ(parse_marginal("dirac:at=3")(2.9), 0.0);
  EXPECT_NEAR(parse_marginal("semicircle")(0.0), 0.5, 1e-15);
  EXPECT_EQ(extreme_type_params("pareto:alpha=2")->xi, 0.5);
  EXPECT_FALSE(extreme_type_params("uniform").has_value());
}

TEST(Io, UnivariateRoundTrip) {
  const auto F = UnivariateDF::grid({0.0, 1.0}, {0.4, 0.9}, kInf);
  const auto G = univariate_from_json(to_json(F));
  EXPECT_EQ(G(0.5), 0.4);
  EXPECT_EQ(G(50.0), 0.9);
  EXPECT_EQ(G.upper(), kInf);
  const auto P = univariate_from_json(to_json(free_pareto(2.0)));
  EXPECT_NEAR(P(2.0), 0.75, 1e-15);
}

TEST(Io, BivariateRoundTrip) {
  const auto F = from_exponent_measure(DiscreteMeasure({{{1.0, 2.0}, 0.3}, {{2.0, 1.0}, 0.2}}), {0.0, 0.0});
  const Json j = to_json(F);
  const auto G = bivariate_from_json(Json::parse(j.dump()));
  EXPECT_EQ(sup_distance(F, G, fixtures::refined_probe(F)), 0.0);
  EXPECT_EQ(j.at("kind"), "grid");
}

TEST(Io, MeasureAndNumbers) {
  const DiscreteMeasure mu({{{1.0, 2.0}, 0.5}});
  const auto back = measure_from_json(to_json(mu));
  EXPECT_EQ(back.total_mass(), 0.5);
  EXPECT_EQ(number_to_json(kInf), "inf");
  EXPECT_TRUE(number_to_json(std::nan("")).is_null());
  EXPECT_EQ(number_from_json(Json("-inf")), -kInf);
}

TEST(Io, SurfaceCsvIsRowMajor) {
  Surface s{{0.0, 1.0}, {0.5}, {0.25, std::nan("")}};
  std::ostringstream os;
  write_surface_csv(os, s);
  EXPECT_EQ(os.str(), "x,y,value\n0,0.5,0.25\n1,0.5,nan\n");
}

TEST(Cli, CopulaCheckExitCodes) {
  EXPECT_EQ(cli({"check", "copula", "lomax:p=0.5,theta=1"}).code, 0);
  const auto r = cli({"check", "copula", "amh:theta=-0.2"});
  EXPECT_EQ(r.code, 1);
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j.at("status"), "no");
  EXPECT_FALSE(j.at("witness").is_null());
}

TEST(Cli, InputErrorsExitThree) {
  EXPECT_EQ(cli({"check", "copula", "amh:theta=7"}).code, 3);
  EXPECT_EQ(cli({"check", "copula", "bogus"}).code, 3);
  EXPECT_EQ(cli({"frobnicate"}).code, 3);
  EXPECT_EQ(cli({"convolve", "--bifree", "missing.json", "dirac:0,0"}).code, 3);
  const auto r = cli({"experiment", "doa-copula", "amh:theta=0.5"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("target"), std::string::npos);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(cli({"--help"}).code, 0); }

TEST(Cli, BuildConvolveRoundTrip) {
  const auto path = scratch("F.json");
  const auto out = scratch("H.json");
  ASSERT_EQ(cli({"build", "exponent", "dirac:1,1", "--L", "0,0", "-o", path.string()}).code, 0);
  // The exponent measure dirac:1,1 has unit mass: both marginals vanish below 1.
  const auto F = parse_bivariate(path.string());
  EXPECT_EQ(F({0.5, 0.5}), 0.0);
  ASSERT_EQ(cli({"convolve", "--bifree", path.string(), "dirac:-10,-10", "-o", out.string()}).code, 0);
  const auto H = parse_bivariate(out.string());
  EXPECT_EQ(sup_distance(F, H, fixtures::refined_probe(F)), 0.0);
}

TEST(Cli, FreeConvolutionCsv) {
  const auto r = cli({"--format", "csv", "--grid", "3", "convolve", "--free", "uniform", "uniform"});
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,value");
  const std::vector<std::pair<double, double>> expected{{0.5, 0.0}, {0.75, 0.5}, {1.0, 1.0}};
  for (const auto& [x, v] : expected) {
    ASSERT_TRUE(std::getline(in, line));
    const auto comma = line.find(',');
    EXPECT_NEAR(std::stod(line.substr(0, comma)), x, 1e-12);
    EXPECT_NEAR(std::stod(line.substr(comma + 1)), v, 1e-12);
  }
  EXPECT_FALSE(std::getline(in, line));
}

TEST(Cli, GaussianVerdictAndIdentity) {
  EXPECT_EQ(cli({"check", "maxid", "--gaussian", "c=0"}).code, 0);
  EXPECT_EQ(cli({"check", "maxid", "--gaussian", "c=-0.5"}).code, 1);
  const auto r = cli({"gaussian", "identity", "c=0.5", "--x", "-2"});
  ASSERT_EQ(r.code, 0);
  EXPECT_LE(Json::parse(r.out).at("abs_diff").get<double>(), 1e-6);
  EXPECT_EQ(cli({"gaussian", "density", "c=1"}).code, 3);
}

TEST(Cli, ExperimentReportAndSummary) {
  const auto dir = scratch("exp");
  fs::remove_all(dir);
  const auto r = cli({"--out-dir", dir.string(), "experiment", "compound-poisson", "--kmax", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto summary = Json::parse(r.out);
  EXPECT_EQ(summary.at("experiment"), "compound-poisson");
  EXPECT_TRUE(summary.at("monotone_decrease").get<bool>());
  EXPECT_TRUE(fs::exists(dir / "compound-poisson.csv"));
  EXPECT_TRUE(fs::exists(dir / "compound-poisson.summary.json"));
}

TEST(Cli, ExperimentConfigValidation) {
  const auto cfg = scratch("cfg.json");
  write_text_file(cfg.string(), R"({"experiment": "max-stable", "pickands": "logistic:m=2",
                                    "marginal": "pareto:alpha=1", "ns": [2, 5, 10]})");
  const auto ok = cli({"experiment", "run", cfg.string()});
  ASSERT_EQ(ok.code, 0) << ok.err;
  EXPECT_EQ(ok.out.rfind("n,diagnostic,value\n2,max_stable_distance,", 0), 0u);
  write_text_file(cfg.string(), R"({"experiment": "max-stable", "pickands": "logistic:m=2",
                                    "marginal": "pareto:alpha=1", "bogus": 1})");
  EXPECT_EQ(cli({"experiment", "run", cfg.string()}).code, 3);
  write_text_file(cfg.string(), R"({"pickands": "logistic:m=2"})");
  EXPECT_EQ(cli({"experiment", "run", cfg.string()}).code, 3);
}

TEST(Cli, DeterministicOutput) {
  const std::vector<std::string> args{"experiment", "doa-copula", "gumbel-mixed:theta=1", "--ns", "10,100"};
  EXPECT_EQ(cli(args).out, cli(args).out);
}

TEST(Report, SummaryFlagsEventualMonotonicity) {
  ExperimentReport r{"x", {{1, "d", 0.5}, {2, "d", 0.7}, {4, "d", 0.3}, {8, "d", 0.1}}, Json::object()};
  const auto s = report_summary(r);
  EXPECT_FALSE(s.at("monotone_decrease").get<bool>());
  EXPECT_EQ(s.at("series")[0].at("monotone_from"), 2);
  EXPECT_EQ(s.at("final"), 0.1);
  EXPECT_EQ(report_csv(r), "n,diagnostic,value\n1,d,0.5\n2,d,0.7\n4,d,0.3\n8,d,0.1\n");
}
