#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <sys/wait.h>

#include "efpdet/asymptotics.hpp"
#include "efpdet/errors.hpp"
#include "efpdet/harness.hpp"

using namespace efpdet;

namespace {

constexpr double kPi = std::numbers::pi;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_path(const std::string& name) { return ::testing::TempDir() + "efpdet_" + name; }

#ifdef EFPDET_CLI_PATH
int cli(const std::string& args, const std::string& stdout_path = "/dev/null") {
  const std::string cmd =
      std::string(EFPDET_CLI_PATH) + " " + args + " > " + stdout_path + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}
#endif

SweepRecord sample_record() {
  SweepRecord r;
  r.n = 3;
  r.log_p = -5.262812345678901;
  r.ratio_log = -2.851479;
  r.second_diff = 0.1 + 0.2;  // not a short decimal
  r.predicted_ratio_log = predictions(3, -kPi / 2).log_ratio;
  r.predicted_leading = predictions(3, -kPi / 2).leading_log_p;
  r.converged = true;
  r.min_pivot = 3.0e-7 / 7.0;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

TEST(FieldAngle, Limits) {
  EXPECT_NEAR(psi_from_field(1e-12).psi, -kPi / 2, 1e-6);
  EXPECT_NEAR(psi_from_field(2.0 - 1e-12).psi, -kPi, 1e-5);
  EXPECT_NEAR(psi_from_field(0.5).psi, -1.8234765819369751, 1e-14);
}

TEST(FieldAngle, UnitModulusAndRange) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> h(1e-9, 2.0 - 1e-9);
  double prev_h = 0, prev_psi = 0;
  for (int k = 0; k < 500; ++k) {
    const double hv = h(rng);
    const auto a = psi_from_field(hv);
    EXPECT_GT(a.psi, -kPi);
    EXPECT_LT(a.psi, 0.0);
    EXPECT_FALSE(a.wrapped);
    EXPECT_NEAR(std::cosh(2 * a.coupling_l), 2 / hv, 1e-9 * (2 / hv));
    const double x = std::exp(-2 * a.coupling_l);
    const cplx image = cplx(0, -1) * (cplx(x, -1) / cplx(x, 1));
    EXPECT_NEAR(std::abs(image), 1.0, 1e-12);
    EXPECT_LT(std::abs(image - std::polar(1.0, -a.psi)), 1e-12);
    if (k > 0 && hv > prev_h) {
      EXPECT_LE(a.psi, prev_psi);  // psi decreases with h
    }
    prev_h = hv;
    prev_psi = a.psi;
  }
}

TEST(FieldAngle, Errors) {
  for (double h : {0.0, -1.0, 2.0, 3.0, std::nan("")}) EXPECT_THROW(psi_from_field(h), DomainError);
}

// ---------------------------------------------------------------------------

TEST(Sweep, ZeroCouplingGivesZeros) {
  SweepConfig c;
  c.base = ModelParams::make(0, -1.1, {}, 0.0);
  c.n_max = 6;
  c.m_nodes = 32;
  const auto res = run_sweep(c);
  ASSERT_EQ(res.records.size(), 7u);
  for (const auto& r : res.records) {
    EXPECT_EQ(r.log_p, 0.0);
    EXPECT_TRUE(r.converged);
  }
}

TEST(Sweep, RatiosAndSecondDifferences) {
  SweepConfig c;
  c.base = ModelParams::make(0, -kPi / 2);
  c.n_min = 2;
  c.n_max = 8;
  c.m_nodes = 64;
  const auto res = run_sweep(c);
  ASSERT_EQ(res.records.size(), 7u);
  EXPECT_TRUE(res.aborted.empty());
  for (std::size_t i = 0; i < res.records.size(); ++i) {
    const auto& r = res.records[i];
    EXPECT_EQ(r.n, int(i) + 2);
    EXPECT_EQ(r.ratio_log.has_value(), r.n < 8);
    EXPECT_EQ(r.second_diff.has_value(), r.n > 2 && r.n < 8);
    if (r.ratio_log) {
      EXPECT_LT(*r.ratio_log, 0.0);
      EXPECT_DOUBLE_EQ(*r.ratio_log, res.records[i + 1].log_p - r.log_p);
    }
    if (r.second_diff) {
      EXPECT_DOUBLE_EQ(*r.second_diff,
                       res.records[i + 1].log_p - 2 * r.log_p + res.records[i - 1].log_p);
    }
    EXPECT_EQ(r.predicted_leading, predictions(r.n, -kPi / 2).leading_log_p);
    EXPECT_GT(r.min_pivot, kMinTrustedPivot);
  }
}

TEST(Sweep, DeterministicAcrossSchedules) {
  SweepConfig c;
  c.base = ModelParams::make(0, -2.2, {0.0, 0.1});
  c.n_max = 9;
  c.m_nodes = 48;
  std::ostringstream a, b;
  emit(run_sweep(c).records, Format::csv, a);
  c.parallel = false;
  emit(run_sweep(c).records, Format::csv, b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Sweep, AcceptedFilter) {
  SweepResult res;
  res.records.resize(3);
  res.records[0].converged = true;
  res.records[2].converged = true;
  res.records[2].n = 9;
  const auto acc = res.accepted();
  ASSERT_EQ(acc.size(), 2u);
  EXPECT_EQ(acc[1].n, 9);
}

TEST(Sweep, InvalidRanges) {
  SweepConfig c;
  c.n_min = -1;
  EXPECT_THROW(run_sweep(c), DomainError);
  c.n_min = 5;
  c.n_max = 4;
  EXPECT_THROW(run_sweep(c), DomainError);
  c.n_min = 0;
  c.n_max = 100000;
  EXPECT_THROW(run_sweep(c), DomainError);
}

// Second differences approach 2 log|sin(psi/2)|: closer at n = 10 than at
// n = 4, and within 20 % relative for n = 10..12.
class LeadingCoefficientTrend : public ::testing::TestWithParam<double> {};

TEST_P(LeadingCoefficientTrend, SecondDifferences) {
  const double psi = GetParam();
  const double target = 2 * std::log(std::abs(std::sin(psi / 2)));
  SweepConfig c;
  c.base = ModelParams::make(0, psi);
  c.n_max = 13;
  c.m_nodes = 128;
  const auto res = run_sweep(c);
  auto sd = [&](int n) {
    for (const auto& r : res.records)
      if (r.n == n && r.second_diff) return *r.second_diff;
    ADD_FAILURE() << "no second difference at n=" << n;
    return std::nan("");
  };
  EXPECT_LT(std::abs(sd(10) - target), std::abs(sd(4) - target));
  for (int n = 10; n <= 12; ++n) EXPECT_LT(std::abs(sd(n) - target), 0.2 * std::abs(target)) << n;
}

INSTANTIATE_TEST_SUITE_P(FieldAngles, LeadingCoefficientTrend, ::testing::Values(-0.8, -kPi / 2, -2.2),
                         [](const auto& info) {
                           return std::string(info.index == 0   ? "psi_m0_8"
                                              : info.index == 1 ? "psi_m_half_pi"
                                                                : "psi_m2_2");
                         });

// ---------------------------------------------------------------------------

TEST(Emit, CsvHeaderAndOneLine) {
  std::ostringstream out;
  emit({sample_record()}, Format::csv, out);
  std::istringstream in(out.str());
  std::string header, line, extra;
  std::getline(in, header);
  std::getline(in, line);
  EXPECT_EQ(header, kCsvHeader);
  EXPECT_FALSE(std::getline(in, extra));
  EXPECT_EQ(line.rfind("3,-5.2628123456789009,", 0), 0u) << line;
  EXPECT_NE(line.find("0.30000000000000004"), std::string::npos);
  EXPECT_NE(line.find(",true,"), std::string::npos);
}

TEST(Emit, MissingOptionalsAreEmptyFields) {
  SweepRecord r;
  r.n = 0;
  std::ostringstream out;
  emit({r}, Format::csv, out);
  EXPECT_NE(out.str().find("\n0,0,,,0,0,false,0"), std::string::npos) << out.str();
}

TEST(Emit, EmptyListIsAnError) {
  std::ostringstream out;
  EXPECT_THROW(emit({}, Format::csv, out), DomainError);
  EXPECT_THROW(emit({}, Format::json, out), DomainError);
}

TEST(Emit, JsonRoundTripIsBitExact) {
  SweepRecord a = sample_record();
  SweepRecord b;
  b.n = 4;
  b.log_p = -std::numeric_limits<double>::denorm_min();
  b.min_pivot = 1.0 / 3.0;
  std::ostringstream out;
  emit({a, b}, Format::json, out);
  const auto back = records_from_json(out.str());
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].log_p, a.log_p);
  EXPECT_EQ(back[0].ratio_log, a.ratio_log);
  EXPECT_EQ(back[0].second_diff, a.second_diff);
  EXPECT_EQ(back[0].predicted_ratio_log, a.predicted_ratio_log);
  EXPECT_EQ(back[0].min_pivot, a.min_pivot);
  EXPECT_EQ(back[0].converged, true);
  EXPECT_EQ(back[1].log_p, b.log_p);
  EXPECT_FALSE(back[1].ratio_log.has_value());
  EXPECT_EQ(back[1].min_pivot, b.min_pivot);
}

TEST(Emit, FileDestinationAndIoErrors) {
  const auto path = temp_path("emit.csv");
  emit({sample_record()}, Format::csv, path);
  EXPECT_EQ(slurp(path).rfind(kCsvHeader, 0), 0u);
  try {
    emit({sample_record()}, Format::csv, "/nonexistent-dir/x.csv");
    FAIL() << "expected an I/O error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent-dir/x.csv"), std::string::npos);
  }
}

TEST(Emit, FormatNames) {
  EXPECT_EQ(parse_format("csv"), Format::csv);
  EXPECT_EQ(parse_format("json"), Format::json);
  EXPECT_THROW(parse_format("xml"), DomainError);
}

// ---------------------------------------------------------------------------

TEST(ParseComplex, Forms) {
  EXPECT_EQ(parse_complex("1"), cplx(1, 0));
  EXPECT_EQ(parse_complex("-0.5"), cplx(-0.5, 0));
  EXPECT_EQ(parse_complex("2i"), cplx(0, 2));
  EXPECT_EQ(parse_complex("-i"), cplx(0, -1));
  EXPECT_EQ(parse_complex("0.1-3e-2i"), cplx(0.1, -0.03));
  EXPECT_EQ(parse_complex(" 1e-1+2.5i "), cplx(0.1, 2.5));
  for (const char* bad : {"", "i2", "1+", "1+2", "abc", "1++2i", "inf", "nan", "1+2ii"})
    EXPECT_THROW(parse_complex(bad), DomainError) << bad;
}

TEST(ParseComplex, Lists) {
  const auto v = parse_complex_list("0,0.1+0.2i, -i");
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[2], cplx(0, -1));
  EXPECT_TRUE(parse_complex_list("").empty());
  EXPECT_THROW(parse_complex_list("1,"), DomainError);
}

TEST(Config, FullDocument) {
  const auto c = parse_config(R"({"field_h": 0.5, "n_min": 1, "n_max": 9, "m_nodes": 96,
      "hl_nodes": 32, "phi_coeffs": [0, "0.1+0.2i", [0.3, -0.4]], "gamma": 0.5,
      "output": "out.csv", "format": "csv"})");
  EXPECT_NEAR(c.resolved_psi(), -1.8234765819369751, 1e-14);
  EXPECT_EQ(c.n_min, 1);
  EXPECT_EQ(c.n_max, 9);
  EXPECT_EQ(c.m_nodes, 96u);
  EXPECT_EQ(c.hl_nodes, 32u);
  ASSERT_EQ(c.phi_coeffs.size(), 3u);
  EXPECT_EQ(c.phi_coeffs[1], cplx(0.1, 0.2));
  EXPECT_EQ(c.phi_coeffs[2], cplx(0.3, -0.4));
  EXPECT_EQ(c.gamma, 0.5);
  EXPECT_EQ(c.output, "out.csv");
}

TEST(Config, StringCoefficients) {
  const auto c = parse_config(R"({"psi": -1.0, "phi_coeffs": "0,0.1"})");
  EXPECT_EQ(c.resolved_psi(), -1.0);
  ASSERT_EQ(c.phi_coeffs.size(), 2u);
}

TEST(Config, SchemaViolations) {
  for (const char* bad :
       {R"({"n_max": 3})", R"({"psi": -1, "field_h": 0.5})", R"({"psi": -1, "colour": 1})",
        R"({"psi": "x"})", R"([1, 2])", R"({"psi": -1, "n_min": 4, "n_max": 2})",
        R"({"psi": -1, "phi_coeffs": [true]})", "{not json"})
    EXPECT_THROW(parse_config(bad).resolved_psi(), DomainError) << bad;
  EXPECT_THROW(load_config("/nonexistent/config.json"), DomainError);
}

// ---------------------------------------------------------------------------

TEST(Verify, QuickPasses) {
  const auto r = run_verify();
  for (const auto& c : r.checks) EXPECT_TRUE(c.pass) << c.id << " residual " << c.residual;
  EXPECT_TRUE(r.overall);
}

TEST(Verify, ZeroCouplingPasses) {
  VerifyOptions o;
  o.gamma = 0.0;
  EXPECT_TRUE(run_verify(o).overall);
}

TEST(Verify, BetaFaultIsDetected) {
  VerifyOptions o;
  o.beta_fault = {0, 1};
  const auto r = run_verify(o);
  EXPECT_FALSE(r.overall);
  bool jump_failed = false;
  for (const auto& c : r.checks)
    if (c.id.find("f_tilde_jump") != std::string::npos) jump_failed = !c.pass;
  EXPECT_TRUE(jump_failed);
}

TEST(Verify, OverallIsConjunction) {
  VerifyReport r;
  r.add("a", 0.5, 1.0);
  EXPECT_TRUE(r.overall);
  r.add("b", 2.0, 1.0);
  r.add("c", 0.0, 1.0);
  EXPECT_FALSE(r.overall);
  EXPECT_FALSE(r.checks[1].pass);
  std::ostringstream out;
  print_report(r, out);
  EXPECT_NE(out.str().find("overall: FAIL"), std::string::npos);
}

TEST(Verify, FourthRootTracking) {
  const auto ctx = BranchContext::make(-kPi / 2);
  auto f4 = [&](cplx z) { return (z - ctx.endpoint_end) / (z - ctx.endpoint_begin); };
  EXPECT_LT(std::abs(track_fourth_root_to_origin(f4) - beta_fn(0.0, ctx)), 1e-6);
}

// ---------------------------------------------------------------------------

#ifdef EFPDET_CLI_PATH

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli("psi --field 0.5"), 0);
  EXPECT_EQ(cli("psi --field 2"), 2);
  EXPECT_EQ(cli("compute --psi -1.5707963267948966 --n 3 --nodes 32"), 0);
  EXPECT_EQ(cli("compute --psi 0.3 --n 3"), 2);
  EXPECT_EQ(cli("compute --n 3"), 2);
  EXPECT_EQ(cli("compute --psi -1 --field 0.5"), 2);
  EXPECT_EQ(cli("compute --psi -1 --phi 1+"), 2);
  EXPECT_EQ(cli("bogus"), 2);
  EXPECT_EQ(cli("verify --level quick"), 0);
  EXPECT_EQ(cli("verify --inject-beta-fault"), 1);
  EXPECT_EQ(cli("sweep --psi -1 --n-min 0 --n-max 2 --out /nonexistent-dir/x.csv"), 2);
}

TEST(Cli, SweepWritesCsv) {
  const auto path = temp_path("cli_sweep.csv");
  ASSERT_EQ(cli("sweep --psi -1.5707963267948966 --n-min 0 --n-max 3 --nodes 32 --out " + path), 0);
  const auto text = slurp(path);
  EXPECT_EQ(text.rfind(kCsvHeader, 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
}

TEST(Cli, ConfigFileWithOverride) {
  const auto cfg = temp_path("cfg.json");
  std::ofstream(cfg) << R"({"psi": -1.2, "n_min": 0, "n_max": 2, "m_nodes": 32, "format": "json"})";
  const auto out = temp_path("cfg_out.json");
  ASSERT_EQ(cli("sweep --config " + cfg + " --n-max 4", out), 0);
  const auto recs = records_from_json(slurp(out));
  ASSERT_EQ(recs.size(), 5u);
  EXPECT_EQ(recs.back().n, 4);
}

TEST(Cli, ComputeJson) {
  const auto out = temp_path("compute.json");
  ASSERT_EQ(cli("compute --psi -1.5707963267948966 --n 0 --nodes 64 --format json", out), 0);
  const auto text = slurp(out);
  EXPECT_NE(text.find("\"log_abs\": 0.148485485850358"), std::string::npos) << text;
}

#endif  // EFPDET_CLI_PATH
