#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gravent/sweep.hpp"

using namespace gravent;

namespace {

std::string csv_of(const SweepResult& r) {
  std::ostringstream os;
  write_csv(os, r);
  return os.str();
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(GRAVENT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Grid, Parse) {
  auto g = parse_grid("1e-3:10:5:log", "x");
  EXPECT_EQ(g.points, 5);
  EXPECT_EQ(g.spacing, Spacing::log);
  EXPECT_EQ(g.at(0), 1e-3);
  EXPECT_EQ(g.at(4), 10.0);
  EXPECT_NEAR(g.at(2), 0.1, 1e-15);
  auto l = parse_grid("-1:1:3:lin", "r");
  EXPECT_EQ(l.at(1), 0.0);
  for (const char* bad : {"1:2:3", "1:2:x:lin", "2:1:3:lin", "0:1:3:log", "1:2:1:lin", "1:2:3:cubic", "1a:2:3:lin"})
    EXPECT_THROW(parse_grid(bad, "x"), DomainError) << bad;
}

TEST(Spec, JsonRoundTrip) {
  for (auto mode : {SweepMode::ground_delocalization, SweepMode::squeezed_max_entropy, SweepMode::time_trace,
                    SweepMode::dip_scan, SweepMode::oracle_check}) {
    auto s = default_spec(mode);
    s.output_path = "out.csv";
    nlohmann::json j = s;
    SweepSpec back;
    from_json(nlohmann::json::parse(j.dump()), back);
    EXPECT_EQ(back, s);
  }
}

TEST(Spec, PartialParamsKeepDefaults) {
  SweepSpec s;
  from_json(nlohmann::json::parse(R"({"params": {"m": 2e-14}})"), s);
  EXPECT_EQ(s.params.m, 2e-14);
  EXPECT_EQ(s.params.d, lab_defaults().d);
}

TEST(Format, RoundTripsDoubles) {
  for (double v : {0.1, 1.0 / 3.0, 6.674e-11, -2.5e-300, 1e24}) EXPECT_EQ(std::stod(format_double(v)), v);
}

TEST(Sweep, CsvIndependentOfWorkerCount) {
  auto g = default_spec(SweepMode::ground_delocalization);
  g.grid.points = 300;
  EXPECT_EQ(csv_of(run_sweep(g, 1)), csv_of(run_sweep(g, 3)));
  auto s = default_spec(SweepMode::squeezed_max_entropy);
  s.grid.points = 61;
  s.rescale_coupling = 1e-3;
  EXPECT_EQ(csv_of(run_sweep(s, 1)), csv_of(run_sweep(s, 4)));
  auto t = default_spec(SweepMode::time_trace);
  t.grid.points = 73;
  t.rescale_coupling = 1e-4;
  EXPECT_EQ(csv_of(run_sweep(t, 1)), csv_of(run_sweep(t, 2)));
}

TEST(Sweep, SkippedPointsAreAccounted) {
  auto g = default_spec(SweepMode::ground_delocalization);
  g.grid = parse_grid("1e20:1e31:56:log", g.grid.variable);
  g.series = {1.0};
  g.normalization = Normalization::raw;
  auto res = run_sweep(g, 2);
  EXPECT_EQ(long(res.rows.size() + res.skipped.size()), 56);
  bool regime = false, validity = false;
  for (auto& s : res.skipped) {
    regime |= s.guard.rfind("regime:", 0) == 0;
    validity |= s.guard == "d>10*delta_x";
  }
  EXPECT_TRUE(regime);
  EXPECT_TRUE(validity);
  auto text = csv_of(res);
  size_t skips = 0;
  for (size_t pos = 0; (pos = text.find("\n#skip index=", pos)) != std::string::npos; ++pos) ++skips;
  EXPECT_EQ(skips, res.skipped.size());
}

TEST(Sweep, GroundPlateauAndDip) {
  auto g = default_spec(SweepMode::ground_delocalization);
  g.series = {1.0};
  g.grid.points = 481;
  auto res = run_sweep(g, 1);
  ASSERT_EQ(res.rows.size(), 481u);
  auto dip = find_dip_ground(g.params);
  double xp = res.metadata["x_planck"].get<double>();
  size_t imin = 0;
  for (size_t i = 0; i < res.rows.size(); ++i)
    if (res.rows[i].log10_entropy < res.rows[imin].log10_entropy) imin = i;
  double step = std::log(g.grid.at(1) / g.grid.at(0));
  EXPECT_LE(std::abs(std::log(res.rows[imin].axis_value * xp / dip.delta_x_dip)), step);
  // plateau between the dip region and the 2PN branch
  double dx_mid = dip.delta_x_dip / 1e4 / xp;
  for (auto& r : res.rows)
    if (std::abs(std::log10(r.axis_value / dx_mid)) < 1) EXPECT_NEAR(r.entropy, 1.0, 0.01);
}

TEST(Sweep, SqueezedReferenceMaximum) {
  auto s = default_spec(SweepMode::squeezed_max_entropy);
  s.grid.points = 121;
  s.rescale_coupling = 1e-3;
  auto res = run_sweep(s, 2);
  double best = 0;
  for (auto& r : res.rows)
    if (r.series == "omega=omega0*1") best = std::max(best, r.entropy);
  EXPECT_NEAR(best, 1.0, 1e-14);
  EXPECT_EQ(res.metadata["reference_series"], "omega=omega0*1");
}

TEST(Sweep, TimeTraceStartsUnentangled) {
  auto t = default_spec(SweepMode::time_trace);
  t.grid.points = 9;
  auto res = run_sweep(t, 1);
  ASSERT_FALSE(res.rows.empty());
  EXPECT_EQ(res.rows.front().entropy, 0.0);
  EXPECT_GT(res.rows[2].entropy, 0.0);
}

TEST(Sweep, DipScanDocument) {
  auto s = default_spec(SweepMode::dip_scan);
  s.omega_factor = 4.0;
  auto j = run_dip_scan(s);
  EXPECT_NEAR(j["ground"]["sqrt2_omega_d_over_c"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(j["squeezed"]["r_dip"].get<double>(), -std::log(16.0) / 4, 1e-12);
}

TEST(Sweep, OracleReportIsolatesLiteralClosedForm) {
  auto rep = run_oracle_check(default_spec(SweepMode::oracle_check));
  EXPECT_EQ(rep.report["coefficient_summary"]["compared"], 25);
  EXPECT_EQ(rep.report["coefficient_summary"]["passed"], 25);
  EXPECT_FALSE(rep.passed);
  EXPECT_EQ(rep.report["failure_count"], 1);
  for (auto& c : rep.report["entropy_checks"]) {
    if (c["check"] == "closed_form_vs_schmidt") {
      EXPECT_FALSE(c["pass"].get<bool>());
      EXPECT_LT(c["diagnostic_max_rel_gap_with_sum_C2_added"].get<double>(), 0.1 * c["max_rel_gap"].get<double>());
    } else {
      EXPECT_TRUE(c["pass"].get<bool>()) << c["check"];
    }
  }
}

TEST(Cli, ExitCodes) {
  const std::string dir = testing::TempDir();
  EXPECT_EQ(run_cli("find-dip --out " + dir + "/dip.json"), 0);
  EXPECT_NE(slurp(dir + "/dip.json").find("gravent.dip/1"), std::string::npos);
  EXPECT_EQ(run_cli("sweep-ground --grid 1:2:x:log"), 2);
  EXPECT_EQ(run_cli("sweep-squeezed --omega 10 --omega-factor 2"), 2);
  EXPECT_EQ(run_cli("sweep-ground --omega-factor 2"), 2);
  EXPECT_EQ(run_cli("sweep-squeezed --mass 1e-40 --grid -0.1:0.1:3:lin"), 3);
  EXPECT_EQ(run_cli("oracle-check --out " + dir + "/oracle.json"), 4);
  EXPECT_EQ(run_cli("nonsense"), 2);
}

TEST(Cli, CsvOutputAndConfig) {
  const std::string dir = testing::TempDir();
  {
    std::ofstream cfg(dir + "/spec.json");
    cfg << R"({"params": {"r": 0.5}, "grid": {"variable": "omega_t", "min": 0, "max": 3.0, "points": 7, "spacing": "lin"}})";
  }
  const std::string args = "time-trace --config " + dir + "/spec.json --rescale-coupling 1e-3 --out " + dir + "/a.csv";
  ASSERT_EQ(run_cli(args), 0);
  auto a = slurp(dir + "/a.csv");
  ASSERT_EQ(run_cli(args + " --workers 3"), 0);
  EXPECT_EQ(a, slurp(dir + "/a.csv"));
  ASSERT_EQ(a.rfind("# {", 0), 0u);
  std::istringstream lines(a);
  std::string line;
  int data = 0;
  std::getline(lines, line);
  auto meta = nlohmann::json::parse(line.substr(2));
  EXPECT_EQ(meta["spec"]["params"]["r"], 0.5);
  std::getline(lines, line);
  EXPECT_EQ(line.rfind("series,index,axis_value,entropy,log10_entropy", 0), 0u);
  while (std::getline(lines, line)) data += line.empty() ? 0 : 1;
  EXPECT_EQ(data, 7);
}
