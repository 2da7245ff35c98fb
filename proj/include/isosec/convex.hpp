#pragma once

#include "transforms.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <optional>

namespace isosec {

// Value, gradient and Hessian of the 1-homogeneous extension of h at a unit u.
// The gradient is the boundary point with outer normal u; the Hessian
// annihilates u and its restriction to u-perp is the radii matrix.
struct SupportJet {
  double h = 0.0;
  Vec3 grad = Vec3::Zero();
  Mat3 hess = Mat3::Zero();

  SupportJet& operator+=(const SupportJet& o) {
    h += o.h;
    grad += o.grad;
    hess += o.hess;
    return *this;
  }
  SupportJet& operator*=(double s) {
    h *= s;
    grad *= s;
    hess *= s;
    return *this;
  }
};

// Zonal profile of a support function: h(u) = F(<u, axis>).
struct ZonalValue {
  double F, dF, ddF;
};

inline SupportJet zonal_jet(const Vec3& axis, const ZonalValue& z, const Vec3& u) {
  const double t = std::clamp(u.dot(axis), -1.0, 1.0);
  const Vec3 v = axis - t * u;
  const Mat3 P = Mat3::Identity() - u * u.transpose();
  SupportJet j;
  j.h = z.F;
  j.grad = z.F * u + z.dF * v;
  j.hess = z.ddF * v * v.transpose() + (z.F - t * z.dF) * P;
  return j;
}

class SupportFunction {
 public:
  using JetFn = std::function<SupportJet(const Vec3&)>;

  SupportFunction() = default;
  SupportFunction(JetFn jet, std::string name) : jet_(std::move(jet)), name_(std::move(name)) {}

  static SupportFunction from_harmonics(HarmonicCoeffs c, std::string name = "harmonic") {
    auto shared = std::make_shared<const HarmonicCoeffs>(std::move(c));
    SupportFunction s(
        [shared](const Vec3& u) {
          const SurfaceJet sj = surface_jet(*shared, u);
          const Mat3 P = Mat3::Identity() - u * u.transpose();
          return SupportJet{sj.value, sj.value * u + sj.gradient, P * (sj.hessian + sj.value * P) * P};
        },
        std::move(name));
    s.coeffs_ = shared;
    return s;
  }

  static SupportFunction ball(double radius = 1.0) {
    require(radius > 0.0, "ball radius must be positive");
    return SupportFunction(
        [radius](const Vec3& u) {
          return SupportJet{radius, radius * u, radius * (Mat3::Identity() - u * u.transpose())};
        },
        "ball");
  }

  // Ellipsoid with semi-axes (a, b, c) along e1, e2, e3.
  static SupportFunction ellipsoid(double a, double b, double c) {
    require(a > 0 && b > 0 && c > 0, "ellipsoid semi-axes must be positive");
    const Mat3 A = Vec3(a * a, b * b, c * c).asDiagonal();
    return SupportFunction(
        [A](const Vec3& u) {
          const Vec3 Au = A * u;
          const double H = std::sqrt(u.dot(Au));
          return SupportJet{H, Au / H, A / H - Au * Au.transpose() / (H * H * H)};
        },
        "ellipsoid");
  }

  static SupportFunction zonal(const Vec3& axis, std::function<ZonalValue(double)> profile, std::string name = "zonal") {
    const Vec3 c = require_unit(axis, "axis");
    return SupportFunction(
        [c, profile = std::move(profile)](const Vec3& u) { return zonal_jet(c, profile(std::clamp(u.dot(c), -1.0, 1.0)), u); },
        std::move(name));
  }

  // Ball of radius 1 plus the segment [-l/2, l/2] e3: h = 1 + (l/2)|t|.
  static SupportFunction spherocylinder(double length) {
    require(length >= 0.0, "segment length must be non-negative");
    return zonal(
        Vec3::UnitZ(),
        [length](double t) {
          const double sg = t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0);
          return ZonalValue{1.0 + 0.5 * length * std::abs(t), 0.5 * length * sg, 0.0};
        },
        "spherocylinder");
  }

  SupportJet jet(const Vec3& u) const { return jet_(u); }
  double operator()(const Vec3& u) const { return jet_(u).h; }
  bool has_coeffs() const { return coeffs_ != nullptr; }
  const HarmonicCoeffs& coeffs() const {
    if (!coeffs_) throw InputError("support function has no harmonic expansion");
    return *coeffs_;
  }
  const std::string& name() const { return name_; }

  friend SupportFunction operator+(const SupportFunction& a, const SupportFunction& b) {
    SupportFunction s(
        [ja = a.jet_, jb = b.jet_](const Vec3& u) {
          SupportJet j = ja(u);
          j += jb(u);
          return j;
        },
        a.name_ + "+" + b.name_);
    if (a.coeffs_ && b.coeffs_) s.coeffs_ = std::make_shared<const HarmonicCoeffs>(*a.coeffs_ + *b.coeffs_);
    return s;
  }
  friend SupportFunction operator*(double lambda, const SupportFunction& a) {
    require(lambda >= 0.0, "support functions scale by non-negative factors");
    SupportFunction s(
        [lambda, ja = a.jet_](const Vec3& u) {
          SupportJet j = ja(u);
          j *= lambda;
          return j;
        },
        a.name_);
    if (a.coeffs_) s.coeffs_ = std::make_shared<const HarmonicCoeffs>(lambda * *a.coeffs_);
    return s;
  }
  // Support function of K + a.
  SupportFunction translated(const Vec3& a) const {
    SupportFunction s(
        [a, j0 = jet_](const Vec3& u) {
          SupportJet j = j0(u);
          j.h += a.dot(u);
          j.grad += a;
          return j;
        },
        name_);
    if (coeffs_) {
      HarmonicCoeffs c = coeffs_->resized(std::max(1, coeffs_->band()));
      // <a, u> = sqrt(4 pi / 3) (a3 Y_10 + a1 Y_11 + a2 Y_1,-1)
      const double k = std::sqrt(kFourPi / 3.0);
      c(1, 0) += k * a.z();
      c(1, 1) += k * a.x();
      c(1, -1) += k * a.y();
      s.coeffs_ = std::make_shared<const HarmonicCoeffs>(std::move(c));
    }
    return s;
  }

 private:
  JetFn jet_;
  std::shared_ptr<const HarmonicCoeffs> coeffs_;
  std::string name_;
};

struct RadiiMatrix {
  Vec3 u;
  Mat2 Q;
  double r1, r2;  // r1 <= r2
};

inline Mat2 restrict_to_tangent(const Mat3& hess, const Vec3& u) {
  const auto [e1, e2] = tangent_basis(u);
  Mat2 Q;
  Q(0, 0) = e1.dot(hess * e1);
  Q(1, 1) = e2.dot(hess * e2);
  Q(0, 1) = Q(1, 0) = 0.5 * (e1.dot(hess * e2) + e2.dot(hess * e1));
  return Q;
}

inline std::pair<double, double> sorted_eigenvalues(const Mat2& Q) {
  const double m = 0.5 * (Q(0, 0) + Q(1, 1));
  const double d = std::hypot(0.5 * (Q(0, 0) - Q(1, 1)), Q(0, 1));
  return {m - d, m + d};
}

inline RadiiMatrix radii(const SupportFunction& h, const Vec3& u_in) {
  const Vec3 u = require_unit(u_in);
  RadiiMatrix r;
  r.u = u;
  r.Q = restrict_to_tangent(h.jet(u).hess, u);
  std::tie(r.r1, r.r2) = sorted_eigenvalues(r.Q);
  return r;
}

// Normalized elementary symmetric mean s_j of the radii, n - 1 = radii count.
inline double elementary_symmetric_mean(std::span<const double> r, int j) {
  const int k = static_cast<int>(r.size());
  require(j >= 0 && j <= k, "elementary_symmetric_mean: order out of range");
  std::vector<double> e(j + 1, 0.0);
  e[0] = 1.0;
  for (double x : r)
    for (int i = j; i >= 1; --i) e[i] += x * e[i - 1];
  double binom = 1.0;
  for (int i = 1; i <= j; ++i) binom = binom * (k - j + i) / i;
  return e[j] / binom;
}

// s_j of the radii at u, n = 3: s1 = (r1 + r2)/2, s2 = r1 r2.
inline double area_density(const SupportFunction& h, const Vec3& u, int j) {
  require(j == 1 || j == 2, "area_density: j must be 1 or 2");
  const RadiiMatrix r = radii(h, u);
  return j == 1 ? 0.5 * r.Q.trace() : r.Q.determinant();
}

// f1 = h + (Laplace-Beltrami h) / 2 from the harmonic expansion.
inline double area_density_spectral(const SupportFunction& h, const Vec3& u) {
  const HarmonicCoeffs& c = h.coeffs();
  return synthesize(c, u) + 0.5 * synthesize(laplacian(c), u);
}

struct NewtonReport {
  double lhs, rhs, gap;
  bool equality;
};

inline NewtonReport newton_gap(std::span<const double> r, int i, int j, double tol = 1e-12) {
  require(1 <= i && i < j && j <= static_cast<int>(r.size()), "newton: need 1 <= i < j <= n - 1");
  NewtonReport n;
  n.lhs = std::pow(std::max(0.0, elementary_symmetric_mean(r, i)), 1.0 / i);
  n.rhs = std::pow(std::max(0.0, elementary_symmetric_mean(r, j)), 1.0 / j);
  n.gap = n.lhs - n.rhs;
  if (r.size() == 2 && i == 1 && j == 2 && r[0] >= 0.0 && r[1] >= 0.0) {
    // s1 - sqrt(s2) = (sqrt r2 - sqrt r1)^2 / 2 without cancellation
    n.gap = 0.5 * std::pow(std::sqrt(r[1]) - std::sqrt(r[0]), 2);
  }
  n.equality = std::abs(n.gap) <= tol * std::max(n.lhs, 1.0);
  return n;
}

inline NewtonReport newton_report(const SupportFunction& h, const Vec3& u, int i = 1, int j = 2, double tol = 1e-12) {
  const RadiiMatrix rm = radii(h, u);
  const double r[2] = {rm.r1, rm.r2};
  return newton_gap(r, i, j, tol);
}

// Mixed discriminant of two symmetric 2x2 matrices; D(Q, Q) = det Q.
inline double mixed_discriminant(const Mat2& A, const Mat2& B) {
  return 0.5 * (A(0, 0) * B(1, 1) + A(1, 1) * B(0, 0)) - A(0, 1) * B(0, 1);
}

inline double mixed_area_density(const SupportFunction& hK, const SupportFunction& hL, const Vec3& u) {
  return mixed_discriminant(radii(hK, u).Q, radii(hL, u).Q);
}

// Values and radii matrices of a support function at every node of a grid.
struct SampledSupport {
  GridPtr grid;
  std::vector<double> h;
  std::vector<Mat2> Q;
};

inline SampledSupport sample_support(const SupportFunction& s, GridPtr grid) {
  SampledSupport out{grid, std::vector<double>(grid->size()), std::vector<Mat2>(grid->size())};
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const Vec3& u = grid->node(i);
    const SupportJet j = s.jet(u);
    out.h[i] = j.h;
    out.Q[i] = restrict_to_tangent(j.hess, u);
  }
  return out;
}

inline double mixed_volume(const SampledSupport& a, const SampledSupport& b, const SampledSupport& c) {
  require(a.grid == b.grid && b.grid == c.grid, "mixed_volume: samples on different grids");
  std::vector<double> v(a.h.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.h[i] * mixed_discriminant(b.Q[i], c.Q[i]);
  return integrate(*a.grid, v) / 3.0;
}

inline double mixed_volume(const SupportFunction& a, const SupportFunction& b, const SupportFunction& c, GridPtr grid) {
  return mixed_volume(sample_support(a, grid), sample_support(b, grid), sample_support(c, grid));
}

struct Certificate {
  double min_h;
  double min_eigenvalue;
  double max_eigenvalue;
  bool valid;
};

inline constexpr double kPsdRelativeTolerance = 1e-8;

inline Certificate certify(const SampledSupport& s) {
  Certificate c{1e300, 1e300, -1e300, false};
  for (std::size_t i = 0; i < s.h.size(); ++i) {
    const auto [r1, r2] = sorted_eigenvalues(s.Q[i]);
    c.min_h = std::min(c.min_h, s.h[i]);
    c.min_eigenvalue = std::min(c.min_eigenvalue, r1);
    c.max_eigenvalue = std::max(c.max_eigenvalue, r2);
  }
  c.valid = c.min_h > 0.0 && c.min_eigenvalue >= -kPsdRelativeTolerance * std::max(c.max_eigenvalue, 0.0);
  return c;
}

inline Certificate certify(const SupportFunction& s, GridPtr grid) { return certify(sample_support(s, std::move(grid))); }

// h = 1 + eps p with p a random even band-L function without constant term;
// eps is `fraction` of the largest value keeping the radii PSD on the grid
// (radii are affine in eps, so the threshold is explicit).
inline SupportFunction random_support(Rng& rng, GridPtr grid, int L = 8, double fraction = 0.8) {
  HarmonicCoeffs p(L);
  for (int l = 2; l <= L; l += 2)
    for (int m = -l; m <= l; ++m) p(l, m) = rng.normal() / (1.0 + l);
  const SampledSupport sp = sample_support(SupportFunction::from_harmonics(p), grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < sp.Q.size(); ++i) {
    worst = std::max(worst, -sorted_eigenvalues(sp.Q[i]).first);
    worst = std::max(worst, -sp.h[i]);
  }
  const double eps = fraction / std::max(worst, 1e-12);
  HarmonicCoeffs c = eps * p;
  c.add_constant(1.0);
  return SupportFunction::from_harmonics(std::move(c), "random");
}

struct BoundaryPoint {
  Vec3 x;
  bool degenerate;
};

inline BoundaryPoint boundary_point(const SupportFunction& h, const Vec3& u, double tol = 1e-12) {
  const SupportJet j = h.jet(require_unit(u));
  const auto [r1, r2] = sorted_eigenvalues(restrict_to_tangent(j.hess, u));
  return {j.grad, r1 <= tol * std::max(r2, 1.0)};
}

struct SphereFit {
  Vec3 center;
  double radius;
  double residual;  // max | |x - center| - radius |
};

// Algebraic least squares on |x|^2 = 2 <c, x> + k, then one Gauss-Newton step
// on the geometric residuals.
inline SphereFit fit_sphere(std::span<const Vec3> pts) {
  require(pts.size() >= 4, "fit_sphere: need at least 4 points");
  const Eigen::Index n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd A(n, 4);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    A.row(i) << 2 * pts[i].x(), 2 * pts[i].y(), 2 * pts[i].z(), 1.0;
    b(i) = pts[i].squaredNorm();
  }
  const Eigen::Vector4d s = A.colPivHouseholderQr().solve(b);
  Vec3 c = s.head<3>();
  double R = std::sqrt(std::max(0.0, s(3) + c.squaredNorm()));
  Eigen::MatrixXd J(n, 4);
  Eigen::VectorXd r(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec3 d = pts[i] - c;
    const double dn = d.norm();
    r(i) = dn - R;
    J.row(i) << -d.x() / dn, -d.y() / dn, -d.z() / dn, -1.0;
  }
  const Eigen::Vector4d step = J.colPivHouseholderQr().solve(-r);
  c += step.head<3>();
  R += step(3);
  SphereFit f{c, R, 0.0};
  for (const Vec3& p : pts) f.residual = std::max(f.residual, std::abs((p - c).norm() - R));
  return f;
}

struct UmbilicReport {
  bool is_umbilic;
  double max_radii_spread;  // max |r1 - r2| / max(r1, r2) over the cap nodes
  std::optional<SphereFit> fit;
  std::size_t nodes;
};

inline UmbilicReport umbilic_sphere_check(const SupportFunction& h, const Cap& U, const SphericalGrid& grid,
                                          double tol = 1e-6) {
  UmbilicReport rep{false, 0.0, std::nullopt, 0};
  std::vector<Vec3> pts;
  for (const Vec3& u : grid.nodes()) {
    if (!U.contains(u)) continue;
    const SupportJet j = h.jet(u);
    const auto [r1, r2] = sorted_eigenvalues(restrict_to_tangent(j.hess, u));
    rep.max_radii_spread = std::max(rep.max_radii_spread, std::abs(r2 - r1) / std::max({std::abs(r1), std::abs(r2), 1e-300}));
    pts.push_back(j.grad);
  }
  rep.nodes = pts.size();
  require(rep.nodes >= 4, "umbilic_sphere_check: cap contains fewer than 4 grid nodes");
  rep.is_umbilic = rep.max_radii_spread <= tol;
  if (rep.is_umbilic) rep.fit = fit_sphere(pts);
  return rep;
}

// Sr(h) by averaging jets over m rotations about e3; exact for band-limited
// h with m > L.  The result is certified on the grid.
inline SupportFunction radial_symmetrize_support(const SupportFunction& h, GridPtr grid, int m = 256) {
  require(m >= 1, "radial_symmetrize_support: m must be positive");
  std::vector<Mat3> rots(m);
  for (int k = 0; k < m; ++k) rots[k] = rotation_about_e3(kTwoPi * k / m);
  SupportFunction s(
      [h, rots](const Vec3& u) {
        SupportJet acc;
        for (const Mat3& T : rots) {
          const SupportJet j = h.jet(T * u);
          acc.h += j.h;
          acc.grad += T.transpose() * j.grad;
          acc.hess += T.transpose() * j.hess * T;
        }
        acc *= 1.0 / static_cast<double>(rots.size());
        return acc;
      },
      "Sr(" + h.name() + ")");
  if (h.has_coeffs()) s = SupportFunction::from_harmonics(h.coeffs().zonal_part(), s.name());
  const Certificate c = certify(s, std::move(grid));
  if (!c.valid) {
    throw NumericalError("radial symmetrization produced a non-convex support function (min eigenvalue " +
                         std::to_string(c.min_eigenvalue) + ")");
  }
  return s;
}

// ---------------------------------------------------------------------------
// Bodies of revolution about e3, symmetric about the plane x3 = 0:
//   { (x, x3) : |x| <= d, |x3| <= phi(|x|) }
// with phi concave and non-increasing on [0, d].

struct ZonalMeasure {
  struct Band {
    double t_lo, t_hi, mass;
  };
  struct Atom {
    double t, mass;
  };
  std::vector<Band> bands;  // absolutely continuous part
  std::vector<Atom> atoms;
  std::vector<std::pair<double, double>> fans;  // normal ranges of edges, zero area

  double total() const {
    double s = 0.0;
    for (const Band& b : bands) s += b.mass;
    for (const Atom& a : atoms) s += a.mass;
    return s;
  }
};

// Partition of [-1, 1] into n equal bands.
inline std::vector<std::pair<double, double>> uniform_bands(int n) {
  require(n >= 1, "need at least one band");
  std::vector<std::pair<double, double>> b(n);
  for (int i = 0; i < n; ++i) b[i] = {-1.0 + 2.0 * i / n, -1.0 + 2.0 * (i + 1) / n};
  return b;
}

class RevolutionBody {
 public:
  using Fn = std::function<double(double)>;

  // Smooth profile with derivatives; checked for concavity and monotonicity
  // at Chebyshev-spaced radii.
  static RevolutionBody analytic(double d, Fn phi, Fn dphi, Fn ddphi, int n_check = 257) {
    require(d > 0.0, "profile radius must be positive");
    RevolutionBody b;
    b.d_ = d;
    b.phi_ = std::move(phi);
    b.dphi_ = std::move(dphi);
    b.ddphi_ = std::move(ddphi);
    b.rho_ = chebyshev_radii(d, n_check);
    for (double r : b.rho_) b.val_.push_back(b.phi_(r));
    b.check_samples();
    return b;
  }

  // Piecewise-linear profile through samples at increasing radii starting at
  // 0, projected onto concave non-increasing profiles (PAV on the slopes).
  static RevolutionBody polygonal(std::vector<double> rho, std::vector<double> phi) {
    require(rho.size() == phi.size() && rho.size() >= 2, "profile needs at least two samples");
    require(rho.front() == 0.0, "profile must start at radius 0");
    for (std::size_t i = 1; i < rho.size(); ++i) require(rho[i] > rho[i - 1], "profile radii must increase");
    RevolutionBody b;
    b.d_ = rho.back();
    b.rho_ = std::move(rho);
    b.val_ = concave_projection(b.rho_, phi);
    b.check_samples();
    return b;
  }

  static RevolutionBody sampled(double d, const Fn& phi, int n) {
    std::vector<double> r = chebyshev_radii(d, n), v;
    for (double x : r) v.push_back(phi(x));
    return polygonal(std::move(r), std::move(v));
  }

  static std::vector<double> chebyshev_radii(double d, int n) {
    require(n >= 2, "need at least two radii");
    std::vector<double> r(n);
    for (int k = 0; k < n; ++k) r[k] = 0.5 * d * (1.0 - std::cos(kPi * k / (n - 1)));
    r.front() = 0.0;
    r.back() = d;
    return r;
  }

  // Pool-adjacent-violators on segment slopes (weights = segment lengths),
  // enforcing non-increasing slopes that are <= 0.
  static std::vector<double> concave_projection(const std::vector<double>& rho, const std::vector<double>& phi) {
    const std::size_t n = rho.size() - 1;
    struct Block {
      double slope, weight;
      std::size_t count;
    };
    std::vector<Block> st;
    for (std::size_t i = 0; i < n; ++i) {
      const double w = rho[i + 1] - rho[i];
      st.push_back({(phi[i + 1] - phi[i]) / w, w, 1});
      while (st.size() >= 2 && st[st.size() - 2].slope < st.back().slope) {
        Block b = st.back();
        st.pop_back();
        Block& a = st.back();
        a.slope = (a.slope * a.weight + b.slope * b.weight) / (a.weight + b.weight);
        a.weight += b.weight;
        a.count += b.count;
      }
    }
    std::vector<double> out(rho.size());
    out[0] = phi[0];
    std::size_t i = 0;
    for (const Block& b : st)
      for (std::size_t k = 0; k < b.count; ++k, ++i) out[i + 1] = out[i] + std::min(b.slope, 0.0) * (rho[i + 1] - rho[i]);
    return out;
  }

  bool is_analytic() const { return static_cast<bool>(phi_); }
  double radius() const { return d_; }
  const std::vector<double>& radii_samples() const { return rho_; }
  const std::vector<double>& value_samples() const { return val_; }

  double value(double r) const {
    if (phi_) return phi_(r);
    const auto it = std::upper_bound(rho_.begin(), rho_.end(), r);
    const std::size_t k = std::clamp<std::size_t>(it - rho_.begin(), 1, rho_.size() - 1);
    const double s = (val_[k] - val_[k - 1]) / (rho_[k] - rho_[k - 1]);
    return val_[k - 1] + s * (r - rho_[k - 1]);
  }
  double slope(double r) const { return dphi_(r); }
  double curvature_slope(double r) const { return ddphi_(r); }

  // Height of the outer normal (its <., e3>) on the upper surface at radius r.
  double normal_height(double r) const {
    const double s = dphi_(r);
    return std::isinf(s) ? 0.0 : 1.0 / std::sqrt(1.0 + s * s);
  }

  // Radius on the upper smooth surface whose outer normal has height t in
  // [0, 1]; clamps to 0 (apex) or d (edge).  Solved in sigma = sqrt(d - rho),
  // which keeps full resolution next to a vertical tangent.
  double sigma_for_normal(double t) const {
    require(is_analytic(), "radius_for_normal needs an analytic profile");
    const double smax = std::sqrt(d_);
    if (t >= normal_height(0.0)) return smax;
    if (t <= normal_height(d_)) return 0.0;
    double lo = 0.0, hi = smax;
    for (int it = 0; it < 200 && hi - lo > 1e-17 * smax; ++it) {
      const double mid = 0.5 * (lo + hi);
      (normal_height(d_ - mid * mid) < t ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }
  double radius_for_normal(double t) const {
    const double sg = sigma_for_normal(t);
    return std::max(0.0, d_ - sg * sg);
  }

  // Principal curvatures of the upper boundary surface at radius r in (0, d):
  // meridian and parallel.
  std::pair<double, double> boundary_curvatures(double r) const {
    require(is_analytic(), "boundary curvatures need an analytic profile");
    const double p = dphi_(r), q = ddphi_(r);
    const double w = std::sqrt(1.0 + p * p);
    return {-q / (w * w * w), -p / (r * w)};
  }

  // Support function h(t) = max over the profile of rho sqrt(1 - t^2) + phi(rho)|t|.
  ZonalValue support(double t) const {
    t = std::clamp(t, -1.0, 1.0);
    const double at = std::abs(t), sg = t >= 0 ? 1.0 : -1.0;
    const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
    if (s == 0.0) return {value(0.0), 0.0, 0.0};
    double rs = 0.0, ps = 0.0, drho = 0.0;
    if (is_analytic()) {
      rs = at > 0.0 ? radius_for_normal(at) : d_;
      ps = phi_(rs);
      if (rs > 0.0 && rs < d_) drho = 1.0 / (s * at * at * ddphi_(rs));
    } else {
      double best = -1e300;
      for (std::size_t k = 0; k < rho_.size(); ++k) {
        const double v = rho_[k] * s + val_[k] * at;
        if (v > best) best = v, rs = rho_[k], ps = val_[k];
      }
    }
    ZonalValue z;
    z.F = rs * s + ps * at;
    z.dF = -rs * t / s + ps * sg;
    z.ddF = -rs / (s * s * s) - (at > 0.0 ? drho / (s * at) : 0.0);
    return z;
  }

  // Area of the part of the upper smooth surface with normal heights in [a, b] within (0, 1].
  double upper_smooth_area(double a, double b) const {
    if (!is_analytic() || b <= a) return 0.0;
    // rho = d - sigma^2 removes the square-root singularity of a vertical tangent.
    const double s_lo = sigma_for_normal(a), s_hi = sigma_for_normal(b);
    if (s_hi <= s_lo) return 0.0;
    auto f = [this](double sg) {
      const double r = d_ - sg * sg;
      const double p = dphi_(r);
      return 2.0 * kTwoPi * sg * r * std::sqrt(1.0 + p * p);
    };
    // Below sigma_min the radius d - sigma^2 loses its low digits; the integrand
    // is smooth in sigma there and is extrapolated linearly.
    constexpr double sigma_min = 1e-4;
    double area = 0.0;
    const double a0 = std::max(s_lo, sigma_min);
    if (s_hi > a0) area += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a0, s_hi, 12, 1e-12);
    if (s_lo < sigma_min) {
      const double b0 = std::min(s_hi, sigma_min);
      const double f1 = f(sigma_min), f2 = f(2.0 * sigma_min);
      auto lin = [&](double x) { return f1 + (f2 - f1) * (x - sigma_min) / sigma_min; };
      area += 0.5 * (b0 - s_lo) * (lin(s_lo) + lin(b0));
    }
    return area;
  }

 private:
  void check_samples() const {
    for (std::size_t i = 1; i < rho_.size(); ++i) {
      if (val_[i] - val_[i - 1] > 1e-12) throw InputError("profile is not non-increasing");
    }
    for (std::size_t i = 1; i + 1 < rho_.size(); ++i) {
      const double s0 = (val_[i] - val_[i - 1]) / (rho_[i] - rho_[i - 1]);
      const double s1 = (val_[i + 1] - val_[i]) / (rho_[i + 1] - rho_[i]);
      if (s1 - s0 > 1e-10 * std::max(1.0, std::abs(s0))) throw InputError("profile is not concave");
    }
    if (val_.back() < -1e-12) throw InputError("profile must be non-negative at the edge");
  }

  double d_ = 0.0;
  Fn phi_, dphi_, ddphi_;
  std::vector<double> rho_, val_;
};

inline SupportFunction profile_to_support(const RevolutionBody& body) {
  return SupportFunction::zonal(
      Vec3::UnitZ(), [body](double t) { return body.support(t); }, "revolution");
}

inline RevolutionBody unit_ball_profile(double radius = 1.0) {
  const double R = radius;
  return RevolutionBody::analytic(
      R, [R](double r) { return std::sqrt(std::max(0.0, R * R - r * r)); },
      [R](double r) { return r >= R ? -std::numeric_limits<double>::infinity() : -r / std::sqrt(R * R - r * r); },
      [R](double r) {
        return r >= R ? -std::numeric_limits<double>::infinity() : -R * R / std::pow(R * R - r * r, 1.5);
      });
}

// Intersection of the balls of radius R centered at +-c e3, 0 < c < R.
inline RevolutionBody lens_profile(double R, double c) {
  require(R > 0.0 && c > 0.0 && c < R, "lens needs 0 < c < R");
  const double d = std::sqrt(R * R - c * c);
  return RevolutionBody::analytic(
      d, [R, c](double r) { return std::sqrt(R * R - r * r) - c; },
      [R](double r) { return -r / std::sqrt(R * R - r * r); },
      [R](double r) { return -R * R / std::pow(R * R - r * r, 1.5); });
}

// Surface area measure of the body on the given bands of t = <u, e3>.
inline ZonalMeasure surface_area_measure_zonal(const RevolutionBody& body,
                                               std::span<const std::pair<double, double>> bands) {
  ZonalMeasure mu;
  const double d = body.radius();
  const double edge = body.value(d);
  if (body.is_analytic()) {
    for (const auto& [lo, hi] : bands) {
      require(lo < hi && lo >= -1.0 && hi <= 1.0, "bands must be sub-intervals of [-1, 1]");
      const double up = body.upper_smooth_area(std::max(lo, 0.0), std::max(hi, 0.0));
      const double down = body.upper_smooth_area(std::max(-hi, 0.0), std::max(-lo, 0.0));
      mu.bands.push_back({lo, hi, up + down});
    }
    const double tn = body.normal_height(d);
    if (tn > 1e-12) mu.fans.push_back({-tn, tn});
    const double t0 = body.normal_height(0.0);
    if (t0 < 1.0 - 1e-12) {
      mu.fans.push_back({t0, 1.0});
      mu.fans.push_back({-1.0, -t0});
    }
  } else {
    for (const auto& [lo, hi] : bands) mu.bands.push_back({lo, hi, 0.0});
    const auto& r = body.radii_samples();
    const auto& v = body.value_samples();
    // flat top and each slanted frustum contribute atoms at +-t
    for (std::size_t k = 0; k + 1 < r.size(); ++k) {
      const double s = (v[k + 1] - v[k]) / (r[k + 1] - r[k]);
      const double len = std::hypot(r[k + 1] - r[k], v[k + 1] - v[k]);
      const double area = kPi * (r[k] + r[k + 1]) * len;
      const double t = 1.0 / std::sqrt(1.0 + s * s);
      if (!mu.atoms.empty() && mu.atoms.back().t == t) {
        mu.atoms.back().mass += area;
        mu.atoms[mu.atoms.size() - 2].mass += area;
      } else {
        mu.atoms.push_back({-t, area});
        mu.atoms.push_back({t, area});
      }
    }
  }
  if (edge > 1e-14 * std::max(1.0, d)) mu.atoms.push_back({0.0, 2.0 * kTwoPi * d * edge});
  return mu;
}

// mu(w) = S(K, w n U) + S(K, (-w) n U) for U = cap(e3, a) on a partition of [-1, 1]
// whose points include +-a.
inline ZonalMeasure cap_measure(const RevolutionBody& body, const Cap& U,
                                std::span<const std::pair<double, double>> bands) {
  require((U.center - Vec3::UnitZ()).norm() < 1e-12, "cap must be centered on the axis e3");
  const double a = U.height;
  ZonalMeasure full = surface_area_measure_zonal(body, bands);
  ZonalMeasure mu;
  constexpr double eps = 1e-15;
  for (const auto& b : full.bands) {
    const bool in_cap = b.t_lo >= a - eps || b.t_hi <= -a + eps;
    const bool in_belt = b.t_lo >= -a - eps && b.t_hi <= a + eps;
    require(in_cap || in_belt, "band straddles the cap boundary");
    mu.bands.push_back({b.t_lo, b.t_hi, in_cap ? b.mass : 0.0});
  }
  for (const auto& at : full.atoms)
    if (std::abs(at.t) > a) mu.atoms.push_back(at);
  return mu;
}

struct MinkowskiSolution {
  RevolutionBody body;
  double cap_radius;            // d_U
  double max_band_rel_error;    // over bands inside U and -U
  double mass_outside;          // outside U and -U
};

// Body of revolution K^U whose surface area measure is mu: the part of the
// source profile over U, lowered to height 0 and reflected.
inline MinkowskiSolution minkowski_solve_revolution(const ZonalMeasure& mu, const RevolutionBody& source, const Cap& U,
                                                    double tol = 1e-6) {
  require((U.center - Vec3::UnitZ()).norm() < 1e-12, "cap must be centered on the axis e3");
  const double a = U.height;
  if (a < 1e-6) throw InputError("cap touches the equator");
  require(source.is_analytic(), "minkowski_solve_revolution needs an analytic source profile");
  const double dU = source.radius_for_normal(a);
  const double base = source.value(dU);
  if (source.value(0.0) - base <= 1e-12 * std::max(1.0, source.radius())) {
    throw InputError("source is a cylinder over the cap: no mass on the cap");
  }
  RevolutionBody ku = RevolutionBody::analytic(
      dU, [source, base](double r) { return source.value(r) - base; }, [source](double r) { return source.slope(r); },
      [source](double r) { return source.curvature_slope(r); });

  std::vector<std::pair<double, double>> bands;
  for (const auto& b : mu.bands) bands.push_back({b.t_lo, b.t_hi});
  const ZonalMeasure got = surface_area_measure_zonal(ku, bands);
  MinkowskiSolution sol{ku, dU, 0.0, 0.0};
  for (std::size_t i = 0; i < bands.size(); ++i) {
    const auto& b = mu.bands[i];
    const bool inside = b.t_lo >= a - 1e-15 || b.t_hi <= -a + 1e-15;
    if (inside) {
      const double err = std::abs(got.bands[i].mass - b.mass) / std::max(std::abs(b.mass), 1e-300);
      if (b.mass > 0.0 || got.bands[i].mass > 0.0) sol.max_band_rel_error = std::max(sol.max_band_rel_error, err);
    } else {
      sol.mass_outside += got.bands[i].mass;
    }
  }
  for (const auto& at : got.atoms)
    if (std::abs(at.t) <= a) sol.mass_outside += at.mass;
  if (sol.max_band_rel_error > tol) {
    throw NumericalError("Minkowski solution does not reproduce the measure (rel. error " +
                         std::to_string(sol.max_band_rel_error) + ")");
  }
  return sol;
}

}  // namespace isosec
