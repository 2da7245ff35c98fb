#include "isosec/cli.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <fstream>
#include <sstream>

using namespace isosec;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::path(testing::TempDir()) / ("isosec_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(ISOSEC_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
}

cli::RunConfig parse(const std::string& text) {
  cli::RunConfig c;
  std::istringstream in(text);
  cli::read_config(in, c);
  return c;
}

std::string dump(const SphericalFunction& f) {
  std::ostringstream s;
  write_grid_csv(s, f);
  return s.str();
}

}  // namespace

TEST(Config, KeysCommentsAndDefaults) {
  const cli::RunConfig d;
  EXPECT_EQ(d.n_theta, 64);
  EXPECT_EQ(d.n_phi, 128);
  EXPECT_EQ(d.band, 48);
  const cli::RunConfig c = parse(
      "# comment\n"
      "grid = 16,32   # trailing\n"
      "\n"
      "band=12\n"
      "seed=7\n"
      "cap_u_center=0,0,2\n"
      "cap_v_height=0.75\n"
      "construction=spectral\n"
      "tol_isotropy=1e-6\n");
  EXPECT_EQ(c.n_theta, 16);
  EXPECT_EQ(c.n_phi, 32);
  EXPECT_EQ(c.band, 12);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_NEAR((c.cap_u_center - Vec3::UnitZ()).norm(), 0.0, 1e-15);
  EXPECT_EQ(c.cap_v_height, 0.75);
  EXPECT_EQ(c.construction, Construction::spectral);
  EXPECT_EQ(c.tol.isotropy, 1e-6);
}

TEST(Config, UnknownKeyAndBadValuesFailLoud) {
  try {
    parse("band=8\nbnad=9\n");
    FAIL() << "unknown key accepted";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("bnad"), std::string::npos);
  }
  EXPECT_THROW(parse("band\n"), InputError);
  EXPECT_THROW(parse("band=4.5\n"), InputError);
  EXPECT_THROW(parse("grid=16\n"), InputError);
  EXPECT_THROW(parse("grid=16,31\n"), InputError);
  EXPECT_THROW(parse("cap_u_height=1.2\n"), InputError);
  EXPECT_THROW(parse("cap_u_center=0,0,0\n"), InputError);
  EXPECT_THROW(parse("transition=-0.1\n"), InputError);
  EXPECT_THROW(parse("tol_funk_gap=0\n"), InputError);
  EXPECT_THROW(parse("construction=magic\n"), InputError);
  EXPECT_THROW(cli::validate(parse("grid=16,32\nband=20\n")), InputError);
}

TEST(Csv, GridDumpRoundTripAndMalformedInput) {
  const GridPtr g = build_grid(8, 16);
  const auto f = SphericalFunction::from_rule(g, [](const Vec3& x) { return std::exp(x.x()) - x.z(); });
  std::istringstream in(dump(f));
  const SphericalFunction r = read_grid_csv(in, g);
  EXPECT_EQ(r.values(), f.values());

  std::string text = dump(f);
  const auto third = text.find('\n', text.find('\n', text.find('\n') + 1) + 1);
  std::string bad = text;
  bad.insert(third + 1, "0.1,0.2,abc\n");
  std::istringstream b1(bad);
  try {
    read_grid_csv(b1, g);
    FAIL() << "malformed row accepted";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
  std::istringstream b2("theta,phi,weight\n");
  EXPECT_THROW(read_grid_csv(b2, g), InputError);
  std::istringstream b3(text.substr(0, third + 1));
  EXPECT_THROW(read_grid_csv(b3, g), InputError);
  std::istringstream b4(text);
  EXPECT_THROW(read_grid_csv(b4, build_grid(8, 18)), InputError);
}

TEST(Csv, CoefficientsMultipliersMeasureAndJson) {
  HarmonicCoeffs c(3);
  c(2, -1) = 0.5;
  c(3, 3) = -1.25;
  std::ostringstream s;
  write_coeffs_csv(s, c);
  std::istringstream in(s.str());
  const HarmonicCoeffs r = read_coeffs_csv(in);
  ASSERT_EQ(r.band(), 3);
  EXPECT_EQ(r(2, -1), 0.5);
  EXPECT_EQ(r(3, 3), -1.25);
  std::istringstream bad("l,m,value\n2,3,1.0\n");
  EXPECT_THROW(read_coeffs_csv(bad), InputError);

  std::ostringstream m;
  write_multipliers_csv(m, multiplier_table(Kernel::cosine, 2));
  EXPECT_EQ(m.str().substr(0, 9), "l,lambda\n");
  EXPECT_NE(m.str().find("1,0\n"), std::string::npos);

  std::ostringstream z;
  write_zonal_measure_csv(z, surface_area_measure_zonal(unit_ball_profile(), uniform_bands(2)));
  EXPECT_EQ(z.str().substr(0, 15), "t_lo,t_hi,mass\n");
  EXPECT_NE(z.str().find("atom_t,atom_mass\n"), std::string::npos);

  const GridPtr g = build_grid(8, 16);
  const auto one = [](const Vec3&) { return 1.0; };
  const nlohmann::json j = to_json(section_isotropy_tensor(one, Vec3::UnitZ(), 64));
  ASSERT_EQ(j["u"].size(), 3u);
  ASSERT_EQ(j["T"].size(), 3u);
  EXPECT_NEAR(j["T"][0].get<double>(), kPi, 1e-13);
  EXPECT_NEAR(j["trace"].get<double>(), kTwoPi, 1e-13);
  EXPECT_NEAR(j["deviation"].get<double>(), 0.0, 1e-14);
}

TEST(Transform, ConstantInputGivesTwoPi) {
  cli::RunConfig c = parse("grid=16,32\nband=12\n");
  const GridPtr g = c.grid();
  const auto one = SphericalFunction::from_rule(g, [](const Vec3&) { return 1.0; });
  for (auto k : {cli::TransformKind::cosine, cli::TransformKind::funk}) {
    std::istringstream in(dump(one));
    std::ostringstream out;
    EXPECT_EQ(cli::cmd_transform(c, k, in, out), 0);
    std::istringstream back(out.str());
    const SphericalFunction t = read_grid_csv(back, g);
    for (double v : t.values()) EXPECT_NEAR(v, kTwoPi, 1e-12);
  }
  EXPECT_THROW(cli::parse_transform("sine"), InputError);
}

TEST(Transform, MatchesQuadratureOnPolynomial) {
  cli::RunConfig c = parse("grid=24,48\nband=8\n");
  const GridPtr g = c.grid();
  const auto f = SphericalFunction::from_rule(g, [](const Vec3& x) { return 1.0 + x.x() * x.x() + 0.3 * x.y(); });
  const SphericalFunction cf = cli::run_transform(c, cli::TransformKind::cosine, f);
  const SphericalFunction rf = cli::run_transform(c, cli::TransformKind::funk, f);
  const auto rule = [](const Vec3& x) { return 1.0 + x.x() * x.x() + 0.3 * x.y(); };
  for (std::size_t i = 0; i < g->size(); i += 37) {
    EXPECT_NEAR(cf.value(i), cosine_transform_at(rule, g->node(i), AdaptedQuadrature{8, 32}), 1e-10);
    EXPECT_NEAR(rf.value(i), funk_transform_at(rule, g->node(i), 512), 1e-10);
  }
}

TEST(Transform, ZonalSymmetrizeIsIdentical) {
  cli::RunConfig c = parse("grid=16,32\nband=12\n");
  const auto z = SphericalFunction::from_rule(c.grid(), [](const Vec3& x) { return std::cos(3.0 * x.z()) + 2.0; });
  std::istringstream in(dump(z));
  std::ostringstream out;
  cli::cmd_transform(c, cli::TransformKind::symmetrize, in, out);
  EXPECT_EQ(out.str(), dump(z));
}

TEST(Binary, TransformExitCodes) {
  const fs::path d = scratch("transform");
  write_text(d / "cfg.txt", "grid=16,32\nband=12\n");
  const auto one = SphericalFunction::from_rule(build_grid(16, 32), [](const Vec3&) { return 1.0; });
  write_text(d / "one.csv", dump(one));
  EXPECT_EQ(run("transform funk " + (d / "one.csv").string() + " " + (d / "r.csv").string() + " --config " +
                    (d / "cfg.txt").string(),
                d / "log"),
            0);
  std::ifstream r(d / "r.csv");
  const SphericalFunction t = read_grid_csv(r, build_grid(16, 32));
  for (double v : t.values()) EXPECT_NEAR(v, kTwoPi, 1e-12);

  std::string bad = dump(one);
  bad.replace(bad.find('\n', 30) + 1, 1, "x");
  write_text(d / "bad.csv", bad);
  EXPECT_EQ(run("transform cosine " + (d / "bad.csv").string() + " --config " + (d / "cfg.txt").string(), d / "log"), 3);
  EXPECT_NE(slurp(d / "log").find("line 3"), std::string::npos) << slurp(d / "log");
  EXPECT_EQ(run("transform cosine " + (d / "missing.csv").string(), d / "log"), 3);
  EXPECT_EQ(run("transform sine " + (d / "one.csv").string(), d / "log"), 3);
}

TEST(Binary, CounterexampleDefaultPasses) {
  const fs::path d = scratch("cx");
  EXPECT_EQ(run("counterexample --out " + (d / "out").string(), d / "log"), 0) << slurp(d / "log");
  for (const char* f : {"g.csv", "w.csv", "coeffs.csv", "h.csv", "diagnostics.json"}) EXPECT_TRUE(fs::exists(d / "out" / f));
  const auto j = nlohmann::json::parse(slurp(d / "out" / "diagnostics.json"));
  EXPECT_LT(j["isotropy_max_dev_on_U"].get<double>(), 1e-5);
  EXPECT_NEAR(j["funk_gap_UV"].get<double>(), 1.0, 5e-3);
  EXPECT_NEAR(j["sphere_radius_V"].get<double>() - j["sphere_radius_U"].get<double>(), 1.0, 1e-12);
  ASSERT_EQ(j["assertions"].size(), 3u);
  for (const auto& a : j["assertions"]) {
    EXPECT_TRUE(a["pass"].get<bool>());
    EXPECT_TRUE(a.contains("budget"));
  }
  const std::string log = slurp(d / "log");
  EXPECT_NE(log.find("budget="), std::string::npos);
  // the grid dump of g reads back on the configured grid
  std::ifstream g(d / "out" / "g.csv");
  EXPECT_NO_THROW(read_grid_csv(g, build_grid(64, 128)));
}

TEST(Binary, CounterexampleErrors) {
  const fs::path d = scratch("cx_err");
  write_text(d / "overlap.cfg", "cap_v_center=0,0.1,-1\n");
  EXPECT_EQ(run("counterexample --config " + (d / "overlap.cfg").string() + " --out " + (d / "o").string(), d / "log"),
            3);
  EXPECT_NE(slurp(d / "log").find("antipode"), std::string::npos) << slurp(d / "log");
  write_text(d / "coarse.cfg", "construction=spectral\n");
  EXPECT_EQ(run("counterexample --band 8 --config " + (d / "coarse.cfg").string() + " --out " + (d / "c").string(),
                d / "log"),
            2);
  EXPECT_NE(slurp(d / "log").find("FAIL"), std::string::npos);
  EXPECT_NE(slurp(d / "log").find("budget="), std::string::npos);
}

TEST(Verify, SrSuiteHasConstantIdentityRow) {
  cli::RunConfig c = parse("grid=32,64\n");
  c.band = 16;
  const auto rows = cli::run_suite(c, "sr");
  const auto it = std::find_if(rows.begin(), rows.end(), [](const cli::Row& r) { return r.test_id == "sr-identity-constant-4pi"; });
  ASSERT_NE(it, rows.end());
  EXPECT_TRUE(it->pass);
  EXPECT_LT(it->metric, 1e-12);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.pass) << r.test_id << " " << r.metric;
    EXPECT_FALSE(r.anchor.empty());
  }
}

TEST(Verify, NewtonBallGapsVanish) {
  cli::RunConfig c = parse("grid=16,32\nband=8\n");
  const auto rows = cli::run_suite(c, "newton");
  for (const auto& r : rows) EXPECT_TRUE(r.pass) << r.test_id << " " << r.metric;
  const auto it = std::find_if(rows.begin(), rows.end(), [](const cli::Row& r) { return r.test_id == "newton-ball-gap"; });
  ASSERT_NE(it, rows.end());
  EXPECT_LE(it->metric, 1e-15);
}

TEST(Verify, UnknownSuite) {
  EXPECT_THROW(cli::run_suite(cli::RunConfig{}, "everything"), InputError);
  const fs::path d = scratch("unknown");
  EXPECT_EQ(run("verify everything --out " + d.string(), d / "log"), 3);
}

TEST(Verify, AllIsDeterministicAndPasses) {
  const fs::path d = scratch("all");
  ASSERT_EQ(run("verify --suite all --out " + (d / "a").string(), d / "log_a"), 0) << slurp(d / "log_a");
  ASSERT_EQ(run("verify all --out " + (d / "b").string(), d / "log_b"), 0);
  const std::string a = slurp(d / "a" / "verify-all.json"), b = slurp(d / "b" / "verify-all.json");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, b);
  EXPECT_EQ(slurp(d / "log_a"), a);
  const auto j = nlohmann::json::parse(a);
  EXPECT_EQ(j["version"], cli::kReportVersion);
  EXPECT_TRUE(j.contains("config_echo"));
  std::set<std::string> ids;
  for (const auto& r : j["results"]) {
    for (const char* k : {"test_id", "paper_anchor", "metric", "tolerance", "pass"}) EXPECT_TRUE(r.contains(k)) << k;
    EXPECT_TRUE(ids.insert(r["test_id"].get<std::string>()).second);
  }
  EXPECT_GE(ids.size(), 30u);
}
