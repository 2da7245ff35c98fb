#pragma once

#include "io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>

namespace isosec::cli {

inline constexpr const char* kReportVersion = "1.0";

enum ExitCode : int { kPass = 0, kAssertionFailure = 2, kInputError = 3 };

struct RunConfig {
  int n_theta = 64, n_phi = 128;
  int band = 48;
  int circle_m = 256;  // Weil and section quadrature
  int check_m = 4096;  // counterexample circles and Funk residuals
  int samples = 50;
  std::uint64_t seed = 1;
  std::string out = "isosec_out";
  Vec3 cap_u_center = Vec3::UnitZ();
  double cap_u_height = 0.8;
  Vec3 cap_v_center = Vec3::UnitX();
  double cap_v_height = 0.8;
  double transition = 0.14;
  Construction construction = Construction::zonal;
  CheckTolerances tol{};

  Cap cap_u() const { return Cap::make(cap_u_center, cap_u_height); }
  Cap cap_v() const { return Cap::make(cap_v_center, cap_v_height); }
  GridPtr grid() const { return build_grid(n_theta, n_phi); }

  CounterexampleOptions counterexample_options() const {
    CounterexampleOptions o;
    o.U = cap_u();
    o.V = cap_v();
    o.transition = transition;
    o.L = band;
    o.construction = construction;
    return o;
  }
};

namespace detail {

inline std::string where(int line) { return line > 0 ? "config line " + std::to_string(line) + ": " : ""; }

template <class Int>
Int parse_int(const std::string& s_in, int line, const std::string& key) {
  const std::string s = isosec::detail::strip(s_in);
  Int v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw InputError(where(line) + key + ": expected an integer, got '" + s + "'");
  }
  return v;
}

inline double parse_real(const std::string& s, int line, const std::string& key) {
  try {
    return isosec::detail::parse_number(s, line);
  } catch (const InputError&) {
    throw InputError(where(line) + key + ": expected a number, got '" + isosec::detail::strip(s) + "'");
  }
}

inline std::vector<std::string> split_list(const std::string& s, std::size_t n, int line, const std::string& key) {
  const auto cells = isosec::detail::split_csv(s);
  if (cells.size() != n) {
    throw InputError(where(line) + key + ": expected " + std::to_string(n) + " comma-separated values");
  }
  return cells;
}

inline double positive(double v, int line, const std::string& key) {
  if (!(v > 0.0)) throw InputError(where(line) + key + " must be positive");
  return v;
}

inline Vec3 parse_center(const std::string& s, int line, const std::string& key) {
  const auto c = split_list(s, 3, line, key);
  const Vec3 v(parse_real(c[0], line, key), parse_real(c[1], line, key), parse_real(c[2], line, key));
  if (v.norm() < 1e-12) throw InputError(where(line) + key + " must be a nonzero vector");
  return v.normalized();
}

inline double parse_height(const std::string& s, int line, const std::string& key) {
  const double a = parse_real(s, line, key);
  if (!(a > 0.0 && a < 1.0)) throw InputError(where(line) + key + " must lie in (0, 1)");
  return a;
}

}  // namespace detail

// Applies one key=value setting; line 0 marks a command-line flag.
inline void apply_setting(RunConfig& c, const std::string& key, const std::string& value, int line = 0) {
  using namespace detail;
  if (key == "grid") {
    const auto p = split_list(value, 2, line, key);
    c.n_theta = parse_int<int>(p[0], line, key);
    c.n_phi = parse_int<int>(p[1], line, key);
    if (c.n_theta < 2 || c.n_phi < 4 || c.n_phi % 2 != 0) {
      throw InputError(where(line) + "grid needs n_theta >= 2 and an even n_phi >= 4");
    }
  } else if (key == "band") {
    c.band = parse_int<int>(value, line, key);
    if (c.band < 0) throw InputError(where(line) + "band must be non-negative");
  } else if (key == "circle_m") {
    c.circle_m = parse_int<int>(value, line, key);
    if (c.circle_m < 8) throw InputError(where(line) + "circle_m must be at least 8");
  } else if (key == "check_m") {
    c.check_m = parse_int<int>(value, line, key);
    if (c.check_m < 8) throw InputError(where(line) + "check_m must be at least 8");
  } else if (key == "samples") {
    c.samples = parse_int<int>(value, line, key);
    if (c.samples < 1) throw InputError(where(line) + "samples must be positive");
  } else if (key == "seed") {
    c.seed = parse_int<std::uint64_t>(value, line, key);
  } else if (key == "out") {
    c.out = isosec::detail::strip(value);
    if (c.out.empty()) throw InputError(where(line) + "out must not be empty");
  } else if (key == "cap_u_center") {
    c.cap_u_center = parse_center(value, line, key);
  } else if (key == "cap_u_height") {
    c.cap_u_height = parse_height(value, line, key);
  } else if (key == "cap_v_center") {
    c.cap_v_center = parse_center(value, line, key);
  } else if (key == "cap_v_height") {
    c.cap_v_height = parse_height(value, line, key);
  } else if (key == "transition") {
    c.transition = positive(parse_real(value, line, key), line, key);
  } else if (key == "construction") {
    const std::string v = isosec::detail::strip(value);
    if (v == "zonal") {
      c.construction = Construction::zonal;
    } else if (v == "spectral") {
      c.construction = Construction::spectral;
    } else {
      throw InputError(where(line) + "construction must be 'zonal' or 'spectral'");
    }
  } else if (key == "tol_isotropy") {
    c.tol.isotropy = positive(parse_real(value, line, key), line, key);
  } else if (key == "tol_funk_gap") {
    c.tol.funk_gap = positive(parse_real(value, line, key), line, key);
  } else if (key == "tol_variance_ratio") {
    c.tol.variance_ratio = positive(parse_real(value, line, key), line, key);
  } else {
    throw InputError(where(line) + "unknown key '" + key + "'");
  }
}

// key = value lines; '#' starts a comment.
inline void read_config(std::istream& in, RunConfig& c) {
  std::string raw;
  int n = 0;
  while (std::getline(in, raw)) {
    ++n;
    const std::string s = isosec::detail::strip(raw.substr(0, raw.find('#')));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw InputError(detail::where(n) + "expected key=value");
    const std::string key = isosec::detail::strip(s.substr(0, eq));
    if (key.empty()) throw InputError(detail::where(n) + "empty key");
    apply_setting(c, key, s.substr(eq + 1), n);
  }
}

inline void validate(const RunConfig& c) {
  const int max_band = std::min(c.n_theta - 1, (c.n_phi - 1) / 2);
  if (c.band > max_band) {
    throw InputError("band " + std::to_string(c.band) + " exceeds the grid limit " + std::to_string(max_band));
  }
}

inline nlohmann::ordered_json config_echo(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["grid"] = {c.n_theta, c.n_phi};
  j["band"] = c.band;
  j["circle_m"] = c.circle_m;
  j["check_m"] = c.check_m;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["cap_u_center"] = {c.cap_u_center.x(), c.cap_u_center.y(), c.cap_u_center.z()};
  j["cap_u_height"] = c.cap_u_height;
  j["cap_v_center"] = {c.cap_v_center.x(), c.cap_v_center.y(), c.cap_v_center.z()};
  j["cap_v_height"] = c.cap_v_height;
  j["transition"] = c.transition;
  j["construction"] = construction_name(c.construction);
  j["tol_isotropy"] = c.tol.isotropy;
  j["tol_funk_gap"] = c.tol.funk_gap;
  j["tol_variance_ratio"] = c.tol.variance_ratio;
  return j;
}

inline std::ofstream open_output(const std::filesystem::path& p) {
  std::ofstream f(p);
  if (!f) throw InputError("cannot write " + p.string());
  f.precision(17);
  return f;
}

// ---------------------------------------------------------------------------
// transform

enum class TransformKind { cosine, funk, symmetrize };

inline TransformKind parse_transform(const std::string& s) {
  if (s == "cosine") return TransformKind::cosine;
  if (s == "funk") return TransformKind::funk;
  if (s == "symmetrize") return TransformKind::symmetrize;
  throw InputError("unknown transform '" + s + "' (cosine, funk, symmetrize)");
}

// Cosine and Funk transforms act spectrally on the band-L analysis of the
// input; symmetrize takes ring averages about e3.
inline SphericalFunction run_transform(const RunConfig& c, TransformKind which, const SphericalFunction& f) {
  const SphericalGrid& grid = *f.grid();
  if (which == TransformKind::symmetrize) return radial_symmetrize(f);
  const Kernel k = which == TransformKind::cosine ? Kernel::cosine : Kernel::funk;
  const HarmonicCoeffs t = apply_multipliers(analyze(grid, f.values(), c.band), multiplier_table(k, c.band).lambda);
  return SphericalFunction::from_coeffs(f.grid(), t);
}

inline int cmd_transform(const RunConfig& c, TransformKind which, std::istream& in, std::ostream& out) {
  validate(c);
  const SphericalFunction f = read_grid_csv(in, c.grid());
  write_grid_csv(out, run_transform(c, which, f));
  return kPass;
}

// ---------------------------------------------------------------------------
// counterexample

inline nlohmann::ordered_json assertion_json(const Assertion& a) {
  return {{"test_id", a.test_id}, {"paper_anchor", a.anchor}, {"metric", a.metric},
          {"tolerance", a.tolerance}, {"budget", a.budget},   {"pass", a.pass}};
}

inline int cmd_counterexample(const RunConfig& c, std::ostream& log) {
  validate(c);
  const GridPtr grid = c.grid();
  const Counterexample cx = build_counterexample(c.counterexample_options(), grid);
  const CounterexampleCheck chk = check_counterexample(cx, c.seed, c.samples, c.check_m, c.tol);

  const std::filesystem::path dir(c.out);
  std::filesystem::create_directories(dir);
  {
    auto f = open_output(dir / "g.csv");
    write_grid_csv(f, cx.zonoid.g);
  }
  {
    auto f = open_output(dir / "w.csv");
    write_grid_csv(f, cx.w);
  }
  {
    auto f = open_output(dir / "coeffs.csv");
    write_coeffs_csv(f, analyze(*grid, cx.zonoid.g.values(), c.band));
  }
  {
    auto f = open_output(dir / "h.csv");
    write_support_csv(f, cx.zonoid.h, *grid);
  }

  const Plateau& p = cx.plateau;
  nlohmann::ordered_json d;
  d["version"] = kReportVersion;
  d["config_echo"] = config_echo(c);
  d["construction"] = construction_name(c.construction);
  d["c0"] = cx.c0;
  d["plateau_residual"] = {{"U", p.residual_U}, {"V", p.residual_V}};
  d["representation_residual"] = cx.representation_residual;
  d["conditioning"] = cx.conditioning;
  d["budget"] = cx.error_budget();
  d["table_error"] = cx.table_error;
  d["transform_residual"] = cx.zonoid.transform_residual;
  d["certificate_min_eigenvalue"] = cx.zonoid.certificate.min_eigenvalue;
  d["isotropy_max_dev_on_U"] = chk.isotropy_max_dev;
  d["funk_mean_U"] = chk.funk_U;
  d["funk_mean_V"] = chk.funk_V;
  d["funk_gap_UV"] = chk.funk_gap;
  d["variance_ratio_on_U_perp"] = chk.variance_ratio;
  // support radii on the caps, including the 2 pi c0 shift
  d["support_shift"] = kTwoPi * cx.c0;
  d["sphere_radius_U"] = cx.options.v_U + kTwoPi * cx.c0;
  d["sphere_radius_V"] = cx.options.v_V + kTwoPi * cx.c0;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const Assertion& a : chk.assertions) rows.push_back(assertion_json(a));
  d["assertions"] = rows;
  {
    auto f = open_output(dir / "diagnostics.json");
    f << d.dump(2) << '\n';
  }

  char buf[256];
  for (const Assertion& a : chk.assertions) {
    std::snprintf(buf, sizeof buf, "%-4s %-24s metric=%.6e tol=%.1e budget=%.3e\n", a.pass ? "PASS" : "FAIL",
                  a.test_id.c_str(), a.metric, a.tolerance, a.budget);
    log << buf;
  }
  log << "artifacts written to " << dir.string() << '\n';
  return chk.pass() ? kPass : kAssertionFailure;
}

// ---------------------------------------------------------------------------
// verify

struct Row {
  std::string test_id;
  std::string anchor;
  double metric;
  double tolerance;
  bool pass;
};

inline Row below(std::string id, std::string anchor, double metric, double tol) {
  return {std::move(id), std::move(anchor), metric, tol, metric < tol};
}
inline Row above(std::string id, std::string anchor, double metric, double tol) {
  return {std::move(id), std::move(anchor), metric, tol, metric > tol};
}

// Shared state across suites of one run.
class VerifyContext {
 public:
  explicit VerifyContext(const RunConfig& c) : config(c), grid(c.grid()) {}

  const Counterexample& counterexample() {
    if (!cx_) cx_ = std::make_unique<Counterexample>(build_counterexample(config.counterexample_options(), grid));
    return *cx_;
  }

  const RunConfig& config;
  GridPtr grid;

 private:
  std::unique_ptr<Counterexample> cx_;
};

inline std::vector<Row> suite_newton(VerifyContext& ctx) {
  Rng rng(ctx.config.seed);
  const SphericalGrid& grid = *ctx.grid;
  double min_gap = 1e300, ball_gap = 0.0;
  int flag_mismatch = 0;
  for (const Vec3& u : grid.nodes()) {
    const NewtonReport n = newton_report(SupportFunction::ball(), u);
    ball_gap = std::max(ball_gap, std::abs(n.gap));
    if (!n.equality) ++flag_mismatch;
  }
  for (int k = 0; k < 50; ++k) {
    const SupportFunction h = random_support(rng, ctx.grid);
    bool all_equal = true;
    for (const Vec3& u : grid.nodes()) {
      const NewtonReport n = newton_report(h, u);
      min_gap = std::min(min_gap, n.gap);
      all_equal = all_equal && n.equality;
    }
    if (all_equal) ++flag_mismatch;
  }
  return {{"newton-random-min-gap", "newton-inequality", min_gap, -1e-10, min_gap >= -1e-10},
          {"newton-ball-gap", "newton-equality-ball", ball_gap, 1e-15, ball_gap <= 1e-15},
          {"newton-equality-flags", "newton-equality-ball", static_cast<double>(flag_mismatch), 0.0, flag_mismatch == 0}};
}

inline std::vector<Row> suite_af(VerifyContext& ctx) {
  Rng rng(ctx.config.seed + 1);
  const SampledSupport B = sample_support(SupportFunction::ball(), ctx.grid);
  const auto slack = [&B](const SampledSupport& K, const SampledSupport& L) {
    const double vkl = mixed_volume(K, L, B), vkk = mixed_volume(K, K, B), vll = mixed_volume(L, L, B);
    return (vkl * vkl - vkk * vll) / (vkl * vkl);
  };
  constexpr double kEquality = 1e-8;
  double min_slack = 1e300;
  int flag_mismatch = 0;
  for (int k = 0; k < 100; ++k) {
    const SampledSupport K = sample_support(random_support(rng, ctx.grid), ctx.grid);
    const SampledSupport L = sample_support(random_support(rng, ctx.grid), ctx.grid);
    const double s = slack(K, L);
    min_slack = std::min(min_slack, s);
    if (std::abs(s) < kEquality) ++flag_mismatch;
  }
  const SampledSupport B2 = sample_support(SupportFunction::ball(2.0), ctx.grid);
  const double sb = slack(B, B2);
  if (!(std::abs(sb) < kEquality)) ++flag_mismatch;
  return {{"af-random-pairs-min-slack", "aleksandrov-fenchel", min_slack, -1e-9, min_slack >= -1e-9},
          below("af-ball-pair-slack", "aleksandrov-fenchel-equality", std::abs(sb), kEquality),
          {"af-equality-flags", "aleksandrov-fenchel-equality", static_cast<double>(flag_mismatch), 0.0,
           flag_mismatch == 0}};
}

inline std::vector<Row> suite_sr(VerifyContext& ctx) {
  Rng rng(ctx.config.seed + 2);
  const GridPtr& grid = ctx.grid;
  double l1 = 0.0, l2 = -1e300, ident = 0.0, ident_lit = 0.0, avg = 0.0;
  std::size_t not_idempotent = 0;
  std::vector<Mat3> rots;
  for (int k = 0; k < 64; ++k) rots.push_back(rotation_about_e3(kTwoPi * k / 64));
  for (int t = 0; t < 8; ++t) {
    const SphericalFunction f = random_density(rng, grid, 16);
    const SphericalFunction s = radial_symmetrize(f);
    const double n1 = lp_norm(f, 1);
    l1 = std::max(l1, std::abs(lp_norm(s, 1) - n1) / n1);
    l2 = std::max(l2, (lp_norm(s, 2) - lp_norm(f, 2)) / lp_norm(f, 2));
    ident = std::max(ident, std::abs(radial_identity_integral(f) - n1) / n1);
    ident_lit = std::max(ident_lit, std::abs(radial_identity_integral_tr(f) - n1) / n1);
    const SphericalFunction ss = radial_symmetrize(s);
    for (std::size_t i = 0; i < grid->size(); ++i) not_idempotent += ss.value(i) != s.value(i);
    const SphericalFunction a = finite_average(f, rots);
    std::vector<double> d(grid->size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.value(i) - s.value(i);
    avg = std::max(avg, lp_norm(SphericalFunction::from_values(grid, d), 2));
  }
  const SphericalFunction one = SphericalFunction::from_rule(grid, [](const Vec3&) { return 1.0; });
  const double c4pi = std::abs(radial_identity_integral(one) - kFourPi);
  return {below("sr-l1-preserved", "radial-symmetrization-l1", l1, 1e-10),
          {"sr-l2-contracts", "radial-symmetrization-l2", l2, 1e-12, l2 <= 1e-12},
          below("sr-identity", "radial-identity", ident, 1e-6),
          below("sr-identity-literal", "radial-identity", ident_lit, 1e-6),
          below("sr-identity-constant-4pi", "radial-identity-constant", c4pi, 1e-12),
          {"sr-idempotent", "radial-symmetrization-idempotent", static_cast<double>(not_idempotent), 0.0,
           not_idempotent == 0},
          below("sr-rotation-average-64", "rotation-average-convergence", avg, 1e-6)};
}

// Section-isotropy corpus: g = 1 + kappa Re(z^4) + delta Re(z^2) + q <x, u>^2 in a random
// frame (e1, e2, u), z = <x, e1> + i <x, e2>.  On the circle orthogonal to u
// the degree-2 Fourier mode is delta, so the section deviation is
// delta / (2 sqrt 2) relative to the mean 1.
struct Lemma41Case {
  std::string kind;
  Vec3 u;
  double kappa, delta, q;
  double target_dev;
};

inline std::vector<Lemma41Case> lemma41_corpus(std::uint64_t seed) {
  Rng rng(seed + 3);
  std::vector<Lemma41Case> cases;
  for (int k = 0; k < 200; ++k) {
    Lemma41Case c;
    c.u = rng.unit_vector();
    c.kappa = rng.uniform(-0.3, 0.3);
    c.q = rng.uniform(0.0, 1.0);
    if (k % 3 == 0) {
      c.kind = "isotropic";
      c.target_dev = 0.0;
    } else if (k % 3 == 1) {
      c.kind = "near-isotropic";
      c.target_dev = std::exp(rng.uniform(std::log(1e-6), std::log(5e-5)));
    } else {
      c.kind = "anisotropic";
      c.target_dev = std::exp(rng.uniform(std::log(1e-3), std::log(0.2)));
    }
    c.delta = 2.0 * std::sqrt(2.0) * c.target_dev * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    cases.push_back(c);
  }
  return cases;
}

inline std::vector<Row> suite_lemma41(VerifyContext& ctx) {
  const GridPtr grid = build_grid(16, 32);
  const int m = ctx.config.circle_m;
  int mismatch = 0;
  double oracle = 0.0, ratio = 0.0, iso_dev = 0.0;
  for (const Lemma41Case& c : lemma41_corpus(ctx.config.seed)) {
    const auto [e1, e2] = tangent_basis(c.u);
    const auto rule = [c, e1, e2](const Vec3& x) {
      const std::complex<double> z(x.dot(e1), x.dot(e2));
      return 1.0 + c.kappa * std::pow(z, 4).real() + c.delta * (z * z).real() + c.q * std::pow(x.dot(c.u), 2);
    };
    const SphericalFunction s = SphericalFunction::from_rule(grid, rule);
    const ZonoidSpec z = make_zonoid(SphericalFunction::from_coeffs(grid, analyze(*grid, s.values(), 4)), 8);
    const Lemma41Report r = lemma41_report(z, c.u, m);
    if ((r.gap < 1e-8) != (r.dev < 1e-4)) ++mismatch;
    if (c.kind == "isotropic") iso_dev = std::max(iso_dev, r.dev);
    if (c.kind != "anisotropic") continue;
    // degree-2 circle Fourier mass, by a direct sum
    const GreatCircle circle = great_circle(c.u, m);
    std::complex<double> s2 = 0.0;
    for (int k = 0; k < m; ++k) s2 += z.g(circle.point(k)) * circle.weight() * std::polar(1.0, 2.0 * circle.angle(k));
    oracle = std::max(oracle, std::abs(r.f1 * r.f1 - r.f2 - std::norm(s2)) / std::norm(s2));
    ratio = std::max(ratio, r.dev / std::sqrt(r.gap));
  }
  return {{"lemma41-equivalence-mismatches", "isotropy-weil-equivalence", static_cast<double>(mismatch), 0.0,
           mismatch == 0},
          below("lemma41-isotropic-deviation", "isotropy-weil-equivalence", iso_dev, 1e-10),
          below("lemma41-fourier-oracle", "weil-gap-degree2-mass", oracle, 1e-6),
          {"lemma41-dev-over-sqrt-gap", "isotropy-weil-constant", ratio, 1.0 / std::sqrt(2.0),
           ratio <= 1.0 / std::sqrt(2.0) * (1.0 + 1e-9)}};
}

inline std::vector<Row> suite_rigidity(VerifyContext& ctx) {
  const Counterexample& cx = ctx.counterexample();
  const int m = ctx.config.check_m;
  std::vector<Row> rows;
  for (const auto& [name, cap] : {std::pair{"U", cx.options.U}, std::pair{"V", cx.options.V}}) {
    const RigidityReport r = verify_local_rigidity(cx.zonoid, cap, m);
    const std::string s(name);
    rows.push_back(below("rigidity-affine-" + s, "local-rigidity-affine", r.affine_residual, 1e-4));
    rows.push_back(below("rigidity-funk-" + s, "local-rigidity-funk", r.funk_residual, 1e-4));
    rows.push_back(below("rigidity-translation-" + s, "local-rigidity-translation", r.a.norm() / r.c, 1e-6));
  }
  Rng rng(ctx.config.seed + 4);
  double even_a = 0.0;
  for (int k = 0; k < 5; ++k) {
    const double v = rng.uniform(0.5, 2.0);
    HarmonicCoeffs c(0);
    c.add_constant(v);
    const ZonoidSpec z = make_zonoid(SphericalFunction::from_coeffs(ctx.grid, c));
    const RigidityReport r = verify_local_rigidity(z, Cap::make(rng.unit_vector(), rng.uniform(0.6, 0.9)));
    even_a = std::max(even_a, r.a.norm() / r.c);
  }
  rows.push_back(below("rigidity-even-translation-corpus", "local-rigidity-translation", even_a, 1e-6));
  const ZonoidSpec aniso = make_zonoid(random_density(rng, ctx.grid, 8));
  const RigidityReport neg = verify_local_rigidity(aniso, Cap::make(rng.unit_vector(), 0.7));
  rows.push_back(above("rigidity-negative-control", "local-rigidity-affine", neg.affine_residual, 1e-4));
  return rows;
}

inline std::vector<Row> suite_minkowski(VerifyContext&) {
  const RevolutionBody ball = unit_ball_profile();
  const Cap U = Cap::make(Vec3::UnitZ(), 0.5);
  std::vector<std::pair<double, double>> bands;
  for (int i = 0; i < 8; ++i) bands.push_back({-1.0 + i / 16.0, -1.0 + (i + 1) / 16.0});
  bands.push_back({-0.5, 0.5});
  for (int i = 0; i < 8; ++i) bands.push_back({0.5 + i / 16.0, 0.5 + (i + 1) / 16.0});
  const MinkowskiSolution sol = minkowski_solve_revolution(cap_measure(ball, U, bands), ball, U);
  const RevolutionBody lens = lens_profile(1.0, 0.5);
  double profile = 0.0;
  for (int k = 0; k <= 32; ++k) {
    const double r = sol.cap_radius * k / 32.0;
    profile = std::max(profile, std::abs(sol.body.value(r) - lens.value(r)));
  }
  return {below("minkowski-band-masses", "minkowski-revolution", sol.max_band_rel_error, 1e-6),
          below("minkowski-mass-outside", "minkowski-revolution", sol.mass_outside, 1e-8),
          below("minkowski-lens-profile", "minkowski-revolution-lens", profile, 1e-10)};
}

inline std::vector<Row> suite_umbilic(VerifyContext& ctx) {
  const SphericalGrid& grid = *ctx.grid;
  std::vector<Row> rows;
  const UmbilicReport ball =
      umbilic_sphere_check(SupportFunction::ball(1.5).translated(Vec3(0.2, -0.1, 0.3)), Cap::make(Vec3(1, 1, 1), 0.7), grid);
  rows.push_back(below("umbilic-ball", "umbilic-sphere", ball.fit ? ball.fit->residual : 1e300, 1e-10));
  const Counterexample& cx = ctx.counterexample();
  const UmbilicReport z = umbilic_sphere_check(cx.zonoid.h, cx.options.U, grid);
  rows.push_back(below("umbilic-counterexample-U", "umbilic-sphere", z.fit ? z.fit->residual : 1e300, 1e-4));
  const UmbilicReport sc = umbilic_sphere_check(SupportFunction::spherocylinder(1.0), Cap::make(Vec3::UnitX(), 0.6), grid);
  rows.push_back(above("umbilic-spherocylinder-equator", "umbilic-needs-absolute-continuity",
                       sc.fit ? sc.fit->residual : 1e300, 1e-2));
  const RevolutionBody lens = lens_profile(1.0, 0.5);
  double curv = 0.0;
  for (int k = 1; k < 32; ++k) {
    const auto [km, kp] = lens.boundary_curvatures(lens.radius() * k / 32.0);
    curv = std::max(curv, std::abs(km - kp));
  }
  rows.push_back(below("lens-equal-curvatures", "lens-negative-fixture", curv, 1e-12));
  const UmbilicReport lr = umbilic_sphere_check(profile_to_support(lens), Cap::make(Vec3(std::sqrt(3.0), 0, 1), 0.9), grid);
  rows.push_back({"lens-radii-not-umbilic", "lens-negative-fixture", lr.max_radii_spread, 1e-2,
                  !lr.is_umbilic && lr.max_radii_spread > 1e-2});
  return rows;
}

using Suite = std::function<std::vector<Row>(VerifyContext&)>;

inline const std::vector<std::pair<std::string, Suite>>& suites() {
  static const std::vector<std::pair<std::string, Suite>> s{
      {"newton", suite_newton},     {"af", suite_af},
      {"sr", suite_sr},             {"lemma41", suite_lemma41},
      {"rigidity", suite_rigidity}, {"minkowski-rev", suite_minkowski},
      {"umbilic", suite_umbilic}};
  return s;
}

inline std::vector<Row> run_suite(const RunConfig& c, const std::string& name) {
  VerifyContext ctx(c);
  std::vector<Row> rows;
  bool found = false;
  for (const auto& [n, fn] : suites()) {
    if (name != "all" && name != n) continue;
    found = true;
    auto r = fn(ctx);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  if (!found) throw InputError("unknown suite '" + name + "'");
  return rows;
}

inline std::string report_json(const RunConfig& c, const std::vector<Row>& rows) {
  nlohmann::ordered_json j;
  j["version"] = kReportVersion;
  j["config_echo"] = config_echo(c);
  nlohmann::ordered_json res = nlohmann::ordered_json::array();
  for (const Row& r : rows) {
    res.push_back({{"test_id", r.test_id},
                   {"paper_anchor", r.anchor},
                   {"metric", r.metric},
                   {"tolerance", r.tolerance},
                   {"pass", r.pass}});
  }
  j["results"] = res;
  return j.dump(2) + "\n";
}

// Report goes to stdout and to <out>/verify-<suite>.json.
inline int cmd_verify(const RunConfig& c, const std::string& suite, std::ostream& out) {
  validate(c);
  const std::vector<Row> rows = run_suite(c, suite);
  const std::string json = report_json(c, rows);
  std::filesystem::create_directories(c.out);
  auto f = open_output(std::filesystem::path(c.out) / ("verify-" + suite + ".json"));
  f << json;
  out << json;
  const bool ok = std::all_of(rows.begin(), rows.end(), [](const Row& r) { return r.pass; });
  return ok ? kPass : kAssertionFailure;
}

}  // namespace isosec::cli
