#pragma once

#include "convex.hpp"
#include "plateau.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace isosec {

// ---------------------------------------------------------------------------
// Constants of the mixed area density formula for zonoids, n = 3.

struct DimensionConstants {
  int n = 3;
  double a_n = 0.0;                // (int_S |x_1|)^-1
  std::array<double, 2> printed{};  // 2^(n-1) / (n-1)! * a_n^(n-j-1), j = 1, 2
  std::array<double, 2> calibrated{};
  int m1 = 256, m2 = 128;  // circle nodes for j = 1 and per axis for j = 2

  double prefactor(int j) const { return calibrated[j - 1]; }
  double calibration_defect() const {
    return std::max(std::abs(calibrated[0] / printed[0] - 1.0), std::abs(calibrated[1] / printed[1] - 1.0));
  }
};

namespace detail {

// int int det(x1, x2)^2 g(x1) [g(x2)] over the circle orthogonal to u, with
// det(x1, x2) = sin(alpha - beta) in an orthonormal basis of u-perp.
template <PointFunction F>
double weil_raw(const F& g, const Vec3& u, int j, int m) {
  const GreatCircle c = great_circle(u, m);
  const std::vector<double> v = sample_circle(g, c);
  std::vector<double> ca(m), sa(m);
  for (int k = 0; k < m; ++k) {
    ca[k] = std::cos(c.angle(k));
    sa[k] = std::sin(c.angle(k));
  }
  std::vector<double> outer(m), inner(m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      const double d = sa[a] * ca[b] - ca[a] * sa[b];
      inner[b] = d * d * (j == 2 ? v[b] : 1.0);
    }
    outer[a] = v[a] * pairwise_sum(inner);
  }
  return c.weight() * c.weight() * pairwise_sum(outer);
}

}  // namespace detail

// Prefactors calibrated on g = 1, whose zonoid is the ball of radius 2 pi:
// f1 = 2 pi, f2 = 4 pi^2.
inline DimensionConstants calibrate_constants(int m1 = 256, int m2 = 128) {
  DimensionConstants k;
  k.m1 = m1;
  k.m2 = m2;
  k.a_n = 1.0 / kTwoPi;
  k.printed[0] = 2.0 * k.a_n;
  k.printed[1] = 2.0;
  const auto one = [](const Vec3&) { return 1.0; };
  k.calibrated[0] = kTwoPi / detail::weil_raw(one, Vec3::UnitZ(), 1, m1);
  k.calibrated[1] = kTwoPi * kTwoPi / detail::weil_raw(one, Vec3::UnitZ(), 2, m2);
  return k;
}

// ---------------------------------------------------------------------------

struct ZonoidSpec {
  SphericalFunction g;  // generating density, even
  SupportFunction h;    // C(g)
  DimensionConstants constants;
  double transform_residual = 0.0;  // measured |h - C(g)| by an independent quadrature
  Certificate certificate{};
};

inline constexpr double kZonoidTransformTolerance = 1e-9;
inline constexpr double kNegativityTolerance = 1e-10;

namespace detail {

inline SphericalFunction even_symmetrize(const SphericalFunction& g) {
  const SphericalGrid& grid = *g.grid();
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.5 * (g.value(i) + g.value(grid.antipode(i)));
  SphericalFunction e = SphericalFunction::from_values(g.grid(), std::move(v), Parity::even);
  return g.has_coeffs() ? e.with_coeffs(g.coeffs().even_part()) : e;
}

inline void require_nonnegative(const SphericalFunction& g) {
  const double mn = *std::min_element(g.values().begin(), g.values().end());
  if (mn < -kNegativityTolerance) throw InputError("generating density is negative (min " + std::to_string(mn) + ")");
}

inline ZonoidSpec finish_zonoid(ZonoidSpec z, GridPtr grid) {
  if (z.transform_residual > kZonoidTransformTolerance * std::max(1.0, z.h(Vec3::UnitZ()))) {
    throw NumericalError("support function differs from the cosine transform by " +
                         std::to_string(z.transform_residual));
  }
  z.certificate = certify(z.h, std::move(grid));
  if (!z.certificate.valid) throw NumericalError("zonoid support function failed the convexity certificate");
  return z;
}

}  // namespace detail

// Zonoid of a band-limited density.  h is the spectral cosine transform; it is
// checked against the adapted quadrature at `n_check` grid nodes.
inline ZonoidSpec make_zonoid(const SphericalFunction& g_in, int n_check = 32) {
  if (!g_in.has_coeffs()) throw InputError("make_zonoid needs a density with a harmonic expansion");
  const SphericalFunction g = detail::even_symmetrize(g_in);
  detail::require_nonnegative(g);
  ZonoidSpec z;
  z.g = g;
  z.h = SupportFunction::from_harmonics(cosine_transform_spectral(g.coeffs()), "zonoid");
  z.constants = calibrate_constants();
  const SphericalGrid& grid = *g.grid();
  const int L = g.coeffs().band();
  const AdaptedQuadrature q{L / 2 + 2, 2 * L + 8};
  const std::size_t stride = std::max<std::size_t>(1, grid.size() / std::max(1, n_check));
  for (std::size_t i = stride / 2; i < grid.size(); i += stride) {
    const Vec3& u = grid.node(i);
    z.transform_residual = std::max(z.transform_residual, std::abs(z.h(u) - cosine_transform_at(g, u, q)));
  }
  return detail::finish_zonoid(std::move(z), g.grid());
}

// Random band-L density 1 + p, p scaled so that min over the grid is `floor`.
inline SphericalFunction random_density(Rng& rng, GridPtr grid, int L = 16, double floor = 0.2) {
  HarmonicCoeffs p(L);
  for (int l = 1; l <= L; ++l)
    for (int m = -l; m <= l; ++m) p(l, m) = rng.normal() / (1.0 + l);
  const std::vector<double> v = synthesize(p, *grid);
  const double mn = *std::min_element(v.begin(), v.end());
  p *= (1.0 - floor) / std::max(-mn, 1e-12);
  p.add_constant(1.0);
  return SphericalFunction::from_coeffs(std::move(grid), std::move(p));
}

// f^(j)(u), j = 1 (m = m1) or j = 2 (m = m2 per axis); m = 0 selects the
// calibrated resolution.
inline double weil_density(const ZonoidSpec& z, const Vec3& u, int j, int m = 0) {
  require(j == 1 || j == 2, "weil_density: j must be 1 or 2");
  if (m == 0) m = j == 1 ? z.constants.m1 : z.constants.m2;
  return z.constants.prefactor(j) * detail::weil_raw(z.g, u, j, m);
}

struct Lemma41Report {
  double dev;  // isotropy deviation of g on the circle orthogonal to u
  double gap;  // |f1^2 - f2| / max(f2, eps)
  double f1, f2;
};

// m = 0 uses the calibrated circle resolutions.
inline Lemma41Report lemma41_report(const ZonoidSpec& z, const Vec3& u, int m = 0) {
  Lemma41Report r;
  r.dev = section_isotropy_tensor(z.g, u, m == 0 ? z.constants.m1 : m).deviation;
  r.f1 = weil_density(z, u, 1, m);
  r.f2 = weil_density(z, u, 2, m);
  r.gap = std::abs(r.f1 * r.f1 - r.f2) / std::max(r.f2, kDeviationFloor);
  return r;
}

struct RigidityReport {
  Cap U;
  double c = 0.0;
  Vec3 a = Vec3::Zero();
  double affine_residual = 0.0;  // sup over cap nodes of |h - c - <a, u>|
  double funk_constant = 0.0;    // mean of R(g) over cap nodes
  double funk_residual = 0.0;    // sup over cap nodes of |R(g) - funk_constant|
  std::size_t nodes = 0;
};

inline RigidityReport verify_local_rigidity(const ZonoidSpec& z, const Cap& U, int m = 256) {
  const SphericalGrid& grid = *z.g.grid();
  std::vector<Vec3> pts;
  for (const Vec3& u : grid.nodes())
    if (U.contains(u)) pts.push_back(u);
  require(pts.size() >= 4, "verify_local_rigidity: cap contains fewer than 4 grid nodes");
  const Eigen::Index n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd A(n, 4);
  Eigen::VectorXd b(n), f(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    A.row(i) << 1.0, pts[i].x(), pts[i].y(), pts[i].z();
    b(i) = z.h(pts[i]);
    f(i) = funk_transform_at(z.g, pts[i], m);
  }
  const Eigen::Vector4d s = A.colPivHouseholderQr().solve(b);
  RigidityReport r;
  r.U = U;
  r.c = s(0);
  r.a = s.tail<3>();
  r.affine_residual = (A * s - b).cwiseAbs().maxCoeff();
  r.funk_constant = f.mean();
  r.funk_residual = (f.array() - r.funk_constant).abs().maxCoeff();
  r.nodes = pts.size();
  return r;
}

// ---------------------------------------------------------------------------
// Piecewise Chebyshev interpolant, refined by bisection until the error at
// the interleaved test points is below tol.

class ChebyshevTable {
 public:
  template <class Fn>
  static ChebyshevTable build(const Fn& f, double a, double b, double tol, int degree = 16, int max_panels = 8192) {
    require(b > a && degree >= 2, "ChebyshevTable: bad interval or degree");
    ChebyshevTable t;
    t.n_ = degree;
    std::vector<std::pair<double, double>> todo{{a, b}};
    while (!todo.empty()) {
      const auto [lo, hi] = todo.back();
      todo.pop_back();
      Panel p{lo, hi, std::vector<double>(degree + 1)};
      for (int k = 0; k <= degree; ++k) p.v[k] = f(t.node(lo, hi, k));
      double err = 0.0;
      for (int k = 0; k < degree; ++k) {
        const double x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * std::cos(kPi * (k + 0.5) / degree);
        err = std::max(err, std::abs(f(x) - t.interpolate(p, x)));
      }
      if (err <= tol || static_cast<int>(t.panels_.size() + todo.size()) >= max_panels) {
        if (err > tol) throw NumericalError("ChebyshevTable: panel budget exhausted");
        t.panels_.push_back(std::move(p));
      } else {
        const double mid = 0.5 * (lo + hi);
        todo.emplace_back(lo, mid);
        todo.emplace_back(mid, hi);
      }
    }
    std::sort(t.panels_.begin(), t.panels_.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    return t;
  }

  double operator()(double x) const {
    auto it = std::upper_bound(panels_.begin(), panels_.end(), x, [](double v, const Panel& p) { return v < p.b; });
    if (it == panels_.end()) it = std::prev(panels_.end());
    return interpolate(*it, std::clamp(x, panels_.front().a, panels_.back().b));
  }

  double lower() const { return panels_.front().a; }
  double upper() const { return panels_.back().b; }
  std::size_t panels() const { return panels_.size(); }
  std::vector<double> breaks() const {
    std::vector<double> b;
    for (const Panel& p : panels_) b.push_back(p.a);
    b.push_back(upper());
    return b;
  }
  double max_abs_node_value() const {
    double m = 0.0;
    for (const Panel& p : panels_)
      for (double v : p.v) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  struct Panel {
    double a, b;
    std::vector<double> v;  // values at the Chebyshev-Lobatto nodes
  };

  double node(double a, double b, int k) const { return 0.5 * (a + b) + 0.5 * (b - a) * std::cos(kPi * k / n_); }

  double interpolate(const Panel& p, double x) const {
    double num = 0.0, den = 0.0;
    for (int k = 0; k <= n_; ++k) {
      const double xk = node(p.a, p.b, k);
      if (x == xk) return p.v[k];
      double w = (k % 2 == 0 ? 1.0 : -1.0) / (x - xk);
      if (k == 0 || k == n_) w *= 0.5;
      num += w * p.v[k];
      den += w;
    }
    return num / den;
  }

  int n_ = 16;
  std::vector<Panel> panels_;
};

// ---------------------------------------------------------------------------
// Zonal functions of y = |<x, c>|.

// int_0^{2 pi} |s t + sqrt(1 - s^2) sqrt(1 - t^2) cos a| da.
inline double cosine_kernel_1d(double s, double t) {
  const double a = s * t;
  const double b = std::sqrt(std::max(0.0, 1.0 - s * s)) * std::sqrt(std::max(0.0, 1.0 - t * t));
  if (std::abs(a) >= b) return kTwoPi * std::abs(a);
  const double a0 = std::acos(-a / b);
  return 2.0 * (a * (2.0 * a0 - kPi) + 2.0 * b * std::sqrt(std::max(0.0, 1.0 - (a / b) * (a / b))));
}

// C(f)(u) for f(x) = f1(|<x, c>|) and s = <u, c>, by adaptive Gauss-Kronrod in
// q with t = <x, c> = sin(q), split at the kernel kinks and at `breaks` (in t).
template <class Fn>
double zonal_cosine_transform(const Fn& f1, double s, std::vector<double> breaks = {}) {
  s = std::abs(s);
  breaks.push_back(0.0);
  breaks.push_back(1.0);
  breaks.push_back(std::sqrt(std::max(0.0, 1.0 - s * s)));
  for (double& b : breaks) b = std::asin(std::clamp(b, 0.0, 1.0));
  std::sort(breaks.begin(), breaks.end());
  const auto integrand = [&](double q) {
    const double t = std::sin(q);
    return std::cos(q) * f1(t) * (cosine_kernel_1d(s, t) + cosine_kernel_1d(s, -t));
  };
  std::vector<double> parts;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (breaks[i + 1] - breaks[i] < 1e-15) continue;
    parts.push_back(
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, breaks[i], breaks[i + 1], 10, 1e-11));
  }
  return pairwise_sum(parts);
}

// Even w with C(w) = G for the plateau G(x) = F(|<x, c>|), by Abel inversion.
// With phi = (1 + Laplacian / 2) G = R(w) and Phi(r) = phi(sqrt(1 - r^2)) / 4,
//   w(y) = (2 / pi) d/dy int_0^y r Phi(r) / sqrt(y^2 - r^2) dr
//        = (2 / pi) int_0^{pi/2} [Phi(y sin q) sin q + y sin^2 q Phi'(y sin q)] dq.
class AbelInverse {
 public:
  explicit AbelInverse(PlateauProfile p) : p_(p) {
    const double sb = p_.s_inner(), sa = p_.s_outer();
    ra_ = std::sqrt(1.0 - sb * sb);
    rb_ = std::sqrt(1.0 - sa * sa);
  }

  double ramp_lo() const { return ra_; }
  double ramp_hi() const { return rb_; }

  // phi and phi' in s = |<u, c>|.
  std::pair<double, double> funk_profile(double s) const {
    const auto F = p_.jet(s);
    return {F[0] + 0.5 * ((1.0 - s * s) * F[2] - 2.0 * s * F[1]), 0.5 * ((1.0 - s * s) * F[3] - 4.0 * s * F[2])};
  }

  double operator()(double y) const {
    y = std::abs(y);
    const double pin = p_.v_in / 4.0, pout = p_.v_out / 4.0;
    if (y <= ra_) return 2.0 / kPi * pin;
    const double qa = std::asin(std::min(1.0, ra_ / y)), qb = std::asin(std::min(1.0, rb_ / y));
    const auto f = [&](double q) {
      const double sq = std::sin(q), r = y * sq, s = std::sqrt(std::max(0.0, 1.0 - r * r));
      const auto [phi, dphi] = funk_profile(s);
      return 0.25 * phi * sq - y * sq * sq * 0.25 * (r / s) * dphi;
    };
    const double ramp =
        qb > qa ? boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, qa, qb, 10, 1e-10) : 0.0;
    return 2.0 / kPi * (pin * (1.0 - std::cos(qa)) + ramp + pout * std::cos(qb));
  }

 private:
  PlateauProfile p_;
  double ra_, rb_;
};

// ---------------------------------------------------------------------------
// Counterexample: g > 0 whose sections orthogonal to every u in U are
// isotropic, while g is not constant there.

enum class Construction { zonal, spectral };

inline const char* construction_name(Construction c) { return c == Construction::zonal ? "zonal" : "spectral"; }

struct CounterexampleOptions {
  Cap U = Cap::make(Vec3::UnitZ(), 0.8);
  Cap V = Cap::make(Vec3::UnitX(), 0.8);
  double v_U = 1.0, v_V = 2.0;
  double transition = 0.14;
  int L = 48;
  Construction construction = Construction::zonal;
  double table_tolerance = 1e-10;
};

struct Counterexample {
  CounterexampleOptions options;
  Plateau plateau;
  SphericalFunction w;
  double c0 = 0.0;
  ZonoidSpec zonoid;  // g = w + c0, h = C(g) = G + 2 pi c0
  std::shared_ptr<const ChebyshevTable> table;  // zonal construction only
  double table_error = 0.0;      // max |table - direct Abel inversion| at check points
  double representation_residual = 0.0;  // zonal: sup |C(w) - G|; spectral: plateau truncation on U, V
  double conditioning = 1.0;     // max |lambda_0 / lambda_l| over even l <= L (spectral only)

  double error_budget() const { return representation_residual * conditioning; }
};

// Largest ratio |lambda_0 / lambda_l| of cosine multipliers, even l <= L.
inline double cosine_conditioning(int L) {
  double c = 1.0;
  for (int l = 2; l <= L; l += 2)
    c = std::max(c, std::abs(funk_hecke_multiplier(Kernel::cosine, 0) / funk_hecke_multiplier(Kernel::cosine, l)));
  return c;
}

namespace detail {

inline Counterexample build_zonal(const CounterexampleOptions& o, GridPtr grid, Plateau plateau) {
  Counterexample cx;
  cx.options = o;
  const PlateauProfile prof = plateau.profile;
  const Vec3 c = plateau.axis;
  const AbelInverse inv(prof);
  const double ra = inv.ramp_lo();
  auto table = std::make_shared<const ChebyshevTable>(ChebyshevTable::build(inv, ra, 1.0, o.table_tolerance));
  cx.table = table;
  for (int k = 0; k < 97; ++k) {
    const double y = ra + (1.0 - ra) * (k + 0.37) / 97.0;
    cx.table_error = std::max(cx.table_error, std::abs((*table)(y) - inv(y)));
  }
  const double w_in = inv(0.0);
  const auto w1 = [table, ra, w_in](double y) { return y <= ra ? w_in : (*table)(std::min(1.0, y)); };
  cx.c0 = 1.0 + std::max(std::abs(w_in), table->max_abs_node_value());
  const double c0 = cx.c0;
  cx.w = SphericalFunction::from_rule(grid, [w1, c](const Vec3& x) { return w1(std::abs(x.dot(c))); }, Parity::even);
  SphericalFunction g = SphericalFunction::from_rule(
      grid, [w1, c, c0](const Vec3& x) { return c0 + w1(std::abs(x.dot(c))); }, Parity::even);

  ZonoidSpec z;
  z.g = g;
  z.h = SupportFunction::zonal(
      c,
      [prof, c0](double t) {
        const auto F = prof.jet(std::abs(t));
        const double sg = t < 0 ? -1.0 : 1.0;
        return ZonalValue{F[0] + kTwoPi * c0, sg * F[1], F[2]};
      },
      "counterexample");
  z.constants = calibrate_constants();
  std::vector<double> breaks = table->breaks();
  breaks.push_back(inv.ramp_hi());
  const auto g1 = [w1, c0](double y) { return c0 + w1(y); };
  for (int k = 0; k <= 40; ++k) {
    const double s = k / 40.0;
    const double Cw = zonal_cosine_transform(w1, s, breaks);
    cx.representation_residual = std::max(cx.representation_residual, std::abs(Cw - prof(s)));
    z.transform_residual =
        std::max(z.transform_residual, std::abs(zonal_cosine_transform(g1, s, breaks) - (prof(s) + kTwoPi * c0)));
  }
  cx.plateau = std::move(plateau);
  cx.zonoid = finish_zonoid(std::move(z), grid);
  return cx;
}

inline Counterexample build_spectral(const CounterexampleOptions& o, GridPtr grid, Plateau plateau) {
  Counterexample cx;
  cx.options = o;
  HarmonicCoeffs w = inverse_cosine_transform(plateau.coeffs.even_part());
  const std::vector<double> wv = synthesize(w, *grid);
  double mx = 0.0;
  for (double v : wv) mx = std::max(mx, std::abs(v));
  cx.c0 = 1.0 + mx;
  cx.w = SphericalFunction::from_coeffs(grid, w, Parity::even);
  HarmonicCoeffs g = w;
  g.add_constant(cx.c0);
  cx.zonoid = make_zonoid(SphericalFunction::from_coeffs(grid, std::move(g), Parity::even));
  cx.representation_residual = std::max(plateau.residual_U, plateau.residual_V);
  cx.conditioning = cosine_conditioning(o.L);
  cx.plateau = std::move(plateau);
  return cx;
}

}  // namespace detail

inline Counterexample build_counterexample(const CounterexampleOptions& o, GridPtr grid) {
  Plateau plateau = smooth_plateau(o.U, o.V, o.v_U, o.v_V, o.transition, grid, o.L);
  if (o.construction == Construction::spectral) return detail::build_spectral(o, std::move(grid), std::move(plateau));
  return detail::build_zonal(o, std::move(grid), std::move(plateau));
}

struct Assertion {
  std::string test_id;
  std::string anchor;
  double metric;
  double tolerance;
  double budget;
  bool pass;
};

struct CheckTolerances {
  double isotropy = 1e-5;
  double funk_gap = 5e-3;
  double variance_ratio = 0.1;
};

struct CounterexampleCheck {
  std::vector<Assertion> assertions;
  double isotropy_max_dev = 0.0;
  double funk_U = 0.0, funk_V = 0.0;
  double funk_gap = 0.0;  // mean R(g) on V minus mean on U
  double variance_ratio = 0.0;

  bool pass() const {
    return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.pass; });
  }
};

// The three properties of the construction, on n_u random directions of each
// cap with circle quadrature of m nodes.
inline CounterexampleCheck check_counterexample(const Counterexample& cx, std::uint64_t seed = 1, int n_u = 50,
                                                int m = 4096, const CheckTolerances& tol = {}) {
  require(tol.isotropy > 0 && tol.funk_gap > 0 && tol.variance_ratio > 0, "tolerances must be positive");
  const SphericalFunction& g = cx.zonoid.g;
  const CounterexampleOptions& o = cx.options;
  Rng rng(seed);
  CounterexampleCheck r;
  std::vector<double> fu, fv, pooled;
  for (int i = 0; i < n_u; ++i) {
    const Vec3 u = sample_in_cap(rng, o.U);
    const GreatCircle circle = great_circle(u, m);
    const std::vector<double> s = sample_circle(g, circle);
    r.isotropy_max_dev = std::max(r.isotropy_max_dev, isotropy_from_circle_samples(circle, s).deviation);
    fu.push_back(circle.weight() * pairwise_sum(s));
    pooled.insert(pooled.end(), s.begin(), s.end());
  }
  for (int i = 0; i < n_u; ++i) fv.push_back(funk_transform_at(g, sample_in_cap(rng, o.V), m));
  r.funk_U = pairwise_sum(fu) / n_u;
  r.funk_V = pairwise_sum(fv) / n_u;
  r.funk_gap = r.funk_V - r.funk_U;
  const double mean = pairwise_sum(pooled) / static_cast<double>(pooled.size());
  std::vector<double> sq(pooled.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = (pooled[i] - mean) * (pooled[i] - mean);
  r.variance_ratio = pairwise_sum(sq) / static_cast<double>(sq.size()) / mean;

  const double budget = cx.error_budget();
  const double dv = o.v_V - o.v_U;
  const double gap_err = std::abs(r.funk_gap - dv);
  r.assertions.push_back({"isotropy-on-U", "isotropic-sections", r.isotropy_max_dev, tol.isotropy, budget,
                          r.isotropy_max_dev < tol.isotropy && budget < tol.isotropy});
  r.assertions.push_back({"funk-gap-UV", "funk-plateau-gap", gap_err, tol.funk_gap, budget,
                          gap_err < tol.funk_gap && budget < tol.funk_gap});
  r.assertions.push_back({"nonconstant-on-U-perp", "not-constant-on-sections", r.variance_ratio, tol.variance_ratio,
                          budget, r.variance_ratio > tol.variance_ratio});
  return r;
}

}  // namespace isosec
