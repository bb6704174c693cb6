#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "kquant/lab/experiments.hpp"

using namespace kquant;
using namespace kquant::lab;

namespace {

Report sample_report() {
  Report r{"demo", {}, {}, {}};
  Series a{"main", {8, 16, 32}, {0.5, 0.25, 0.125}, {}};
  a.fit = fit_power_law(a.k, a.value);
  Series b{"aux", {8, 16, 32}, {0.0, 0.0, 0.0}, {}};
  b.fit = fit_power_law(b.k, b.value);
  r.series = {a, b};
  r.verdicts = {{"decay", true, "p=1"}, {"other", false, "note"}};
  r.environment = {{"grid", "radial"}, {"seed", "7"}};
  return r;
}

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

// ---------------------------------------------------------------- fits

TEST(PowerFit, InverseLawHasUnitExponent) {
  std::vector<double> k{8, 16, 32, 64}, v;
  for (double x : k) v.push_back(5.0 / x);
  const PowerFit f = fit_power_law(k, v);
  EXPECT_NEAR(f.exponent, 1.0, 1e-6);
  EXPECT_NEAR(f.coeff, 5.0, 1e-9);
  EXPECT_NEAR(f.residual, 0.0, 1e-12);
  EXPECT_FALSE(f.exact);
}

TEST(PowerFit, ConstantSeriesHasZeroExponent) {
  const PowerFit f = fit_power_law({8, 16, 32, 64}, {0.3, 0.3, 0.3, 0.3});
  EXPECT_NEAR(f.exponent, 0.0, 1e-12);
}

TEST(PowerFit, ZeroSeriesIsExact) {
  const PowerFit f = fit_power_law({8, 16, 32}, {0.0, 1e-15, -2e-16});
  EXPECT_TRUE(f.exact);
  EXPECT_TRUE(std::isinf(f.exponent));
  EXPECT_EQ(f.predict(64), 0.0);
}

TEST(PowerFit, NonPositiveValuesAreExcludedAndCounted) {
  const PowerFit f = fit_power_law({4, 8, 16, 32, 64}, {0.25, -1.0, 1.0 / 16, 0.0, 1.0 / 64});
  EXPECT_EQ(f.excluded, 2);
  EXPECT_NEAR(f.exponent, 1.0, 1e-12);
}

TEST(PowerFit, RejectsTooFewPositiveValues) {
  EXPECT_THROW(fit_power_law({8, 16, 32}, {1.0, -1.0, 0.5}), DomainError);
  EXPECT_THROW(fit_power_law({8, 16}, {1.0, 0.5, 0.2}), DomainError);
}

// ---------------------------------------------------------------- reports

TEST(Report, JsonRoundTrip) {
  const Report r = sample_report();
  const Report back = report_from_json(nlohmann::json::parse(to_json(r).dump()));
  EXPECT_EQ(back, r);
}

TEST(Report, PassedRequiresEveryVerdict) {
  Report r = sample_report();
  EXPECT_FALSE(r.passed());
  r.verdicts[1].pass = true;
  EXPECT_TRUE(r.passed());
  r.verdicts.clear();
  EXPECT_FALSE(r.passed());
}

TEST(Report, CsvHeaderAndRows) {
  std::ostringstream os;
  write_csv(os, sample_report());
  const std::string s = os.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "experiment,k,value,fit_coeff,fit_exp,verdict");
  EXPECT_EQ(count(s, "\n"), 7u);
  EXPECT_EQ(count(s, "demo:aux,"), 3u);
  EXPECT_EQ(count(s, ",FAIL\n"), 6u);
}

TEST(Report, SvgHasOnePolylinePerSeries) {
  std::ostringstream os;
  const Report r = sample_report();
  write_svg(os, r);
  EXPECT_EQ(count(os.str(), "<polyline"), r.series.size());
}

TEST(Report, EmitWritesEachFormat) {
  const auto dir = std::filesystem::temp_directory_path() / "kquant_emit_test";
  for (const std::string fmt : {"csv", "json", "svg"}) {
    const std::string path = emit_report(sample_report(), fmt, dir.string());
    EXPECT_TRUE(std::filesystem::exists(path));
    EXPECT_EQ(std::filesystem::path(path).extension(), "." + fmt);
  }
  EXPECT_THROW(emit_report(sample_report(), "png", dir.string()), DomainError);
  std::filesystem::remove_all(dir);
}

TEST(Report, UnwritablePathIsReported) {
  const auto file = std::filesystem::temp_directory_path() / "kquant_not_a_dir";
  std::ofstream(file) << "x";
  EXPECT_THROW(emit_report(sample_report(), "csv", (file / "sub").string()), Error);
  std::filesystem::remove(file);
}

// ---------------------------------------------------------------- config

TEST(Config, ParsesKeysAndComments) {
  std::istringstream is(
      "# sample\n"
      "experiment = compare-LZ\n"
      "k = 4, 8, 16   # degrees\n"
      "\n"
      "resolution = 128\n"
      "seed = 42\n"
      "c0 = 0.05\n"
      "twist = none\n"
      "format = json\n");
  const ExperimentConfig c = parse_config(is);
  EXPECT_EQ(c.experiment, "compare-LZ");
  EXPECT_EQ(c.k_list, (std::vector<int>{4, 8, 16}));
  EXPECT_EQ(c.resolution, 128);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.c0, 0.05);
  EXPECT_EQ(c.twist, TwistKind::none);
  EXPECT_EQ(c.format, "json");
}

TEST(Config, ErrorsCarryKeyAndLine) {
  auto fails = [](const std::string& text, const std::string& key, int line) {
    std::istringstream is(text);
    try {
      parse_config(is);
    } catch (const ConfigError& e) {
      EXPECT_EQ(e.key, key) << text;
      EXPECT_EQ(e.line, line) << text;
      return;
    }
    ADD_FAILURE() << "no ConfigError for: " << text;
  };
  fails("k = 8, 4\n", "k", 1);
  fails("seed = 1\nk = 0, 4\n", "k", 2);
  fails("\n\nresolution = 3\n", "resolution", 3);
  fails("resolution = 100000\n", "resolution", 1);
  fails("seed = abc\n", "seed", 1);
  fails("format = png\n", "format", 1);
  fails("colour = red\n", "colour", 1);
}

TEST(Config, MissingEqualsIsParseError) {
  std::istringstream is("seed 4\n");
  try {
    parse_config(is);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 1);
  }
}

TEST(Config, FlagsOverrideFileValues) {
  std::istringstream is("k = 4, 8\nseed = 3\n");
  ExperimentConfig c = parse_config(is);
  set_config_value(c, "k", "8,16,32");
  EXPECT_EQ(c.k_list, (std::vector<int>{8, 16, 32}));
  EXPECT_EQ(c.seed, 3u);
}

// ---------------------------------------------------------------- experiments

TEST(Experiments, ListHasTenUniqueNames) {
  const auto& l = experiment_list();
  EXPECT_EQ(l.size(), 10u);
  std::set<std::string> names;
  for (const auto& e : l) names.insert(e.name);
  EXPECT_EQ(names.size(), 10u);
}

TEST(Experiments, UnknownNameIsRejected) {
  ExperimentConfig c;
  c.experiment = "nope";
  EXPECT_THROW(run_experiment(c), ConfigError);
}

TEST(Experiments, BergmanAtFubiniStudyIsExact) {
  ExperimentConfig c;
  c.experiment = "bergman-expansion";
  c.potential = {0.0};
  c.resolution = 64;
  const Report r = run_experiment(c);
  ASSERT_TRUE(r.series[0].fit.has_value());
  EXPECT_TRUE(r.series[0].fit->exact);
  EXPECT_TRUE(r.passed());
  for (std::size_t i = 0; i < r.series[1].k.size(); ++i) EXPECT_NEAR(r.series[1].value[i], r.series[1].k[i] + 1, 1e-9);
}

TEST(Experiments, RerunIsBitIdentical) {
  ExperimentConfig c;
  c.experiment = "minimization";
  c.resolution = 64;
  c.resolution_2d = 12;
  c.seed = 99;
  EXPECT_EQ(run_experiment(c), run_experiment(c));
  c.experiment = "compare-LZ";
  c.k_list = {4, 8, 16};
  EXPECT_EQ(run_experiment(c), run_experiment(c));
}

TEST(Experiments, SeedChangesRandomFamilies) {
  ExperimentConfig c;
  c.experiment = "minimization";
  c.resolution = 64;
  c.resolution_2d = 12;
  c.seed = 1;
  const Report a = run_experiment(c);
  c.seed = 2;
  EXPECT_NE(a.series, run_experiment(c).series);
}

TEST(Experiments, NumericalFailureBecomesFailedVerdict) {
  ExperimentConfig c;
  c.experiment = "compare-LZ";
  c.potential = {0.0, 0.0, 2.0};
  c.resolution = 64;
  const Report r = run_experiment(c);
  EXPECT_FALSE(r.passed());
  ASSERT_EQ(r.verdicts.size(), 1u);
  EXPECT_NE(r.verdicts[0].detail.find("aborted"), std::string::npos);
}

TEST(Experiments, EnvironmentEchoesRunSettings) {
  ExperimentConfig c;
  c.experiment = "psi-expansion";
  c.resolution = 64;
  const Report r = run_experiment(c);
  EXPECT_EQ(r.environment.at("resolution"), "64");
  EXPECT_EQ(r.environment.at("c0_source"), "calibrated");
  EXPECT_NEAR(std::stod(r.environment.at("c0")), analytic_c0(), 1e-6);
  EXPECT_EQ(r.environment.at("k"), "8,16,32,64");
}
