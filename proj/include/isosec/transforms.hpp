#pragma once

#include "function.hpp"

namespace isosec {

// Quadrature rule for the cosine transform.
//  grid:    sum_i w_i |<x_i, u>| g(x_i) on the function's own grid.  Cheap, but
//           the kink of |<x, u>| limits it to roughly O(n_theta^-2) accuracy.
//  adapted: per target u, Gauss-Legendre in s = <x, u> on [-1, 0] and [0, 1]
//           times the trapezoid rule around u; exact for band-limited g once
//           n_s >= L/2 + 1 and m > L.  Needs an evaluation rule.
enum class CosineRule { grid, adapted };

struct AdaptedQuadrature {
  int n_s = 32;
  int m = 64;
};

template <PointFunction F>
double cosine_transform_at(const F& g, const Vec3& u_in, AdaptedQuadrature q = {}) {
  const Vec3 u = require_unit(u_in);
  require(q.n_s >= 1 && q.m >= 4, "cosine_transform_at: quadrature too small");
  const auto [e1, e2] = tangent_basis(u);
  const GaussRule half = gauss_legendre(q.n_s, 0.0, 1.0);
  std::vector<double> terms;
  terms.reserve(2 * q.n_s);
  for (int side : {-1, 1}) {
    for (int i = 0; i < q.n_s; ++i) {
      const double s = side * half.nodes[i];
      const double r = std::sqrt(std::max(0.0, 1.0 - s * s));
      std::vector<double> ring(q.m);
      for (int k = 0; k < q.m; ++k) {
        const double a = kTwoPi * k / q.m;
        ring[k] = g(Vec3(s * u + r * (std::cos(a) * e1 + std::sin(a) * e2)));
      }
      terms.push_back(half.weights[i] * std::abs(s) * (kTwoPi / q.m) * pairwise_sum(ring));
    }
  }
  return pairwise_sum(terms);
}

inline SphericalFunction cosine_transform(const SphericalFunction& g, CosineRule rule = CosineRule::grid,
                                          AdaptedQuadrature q = {}) {
  const SphericalGrid& grid = *g.grid();
  std::vector<double> out(grid.size());
  if (rule == CosineRule::grid) {
    std::vector<double> terms(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const Vec3& u = grid.node(j);
      for (std::size_t i = 0; i < grid.size(); ++i) terms[i] = grid.weight(i) * std::abs(grid.node(i).dot(u)) * g.value(i);
      out[j] = pairwise_sum(terms);
    }
  } else {
    if (!g.evaluable()) throw InputError("adapted cosine transform needs an evaluation rule");
    for (std::size_t j = 0; j < grid.size(); ++j) out[j] = cosine_transform_at(g, grid.node(j), q);
  }
  return SphericalFunction::from_values(g.grid(), std::move(out), Parity::even);
}

template <PointFunction F>
double funk_transform_at(const F& g, const Vec3& u, int m = 256) {
  return circle_integrate(g, great_circle(u, m));
}

inline SphericalFunction funk_transform(const SphericalFunction& g, int m = 256) {
  if (!g.evaluable()) throw InputError("funk transform needs an evaluation rule");
  const SphericalGrid& grid = *g.grid();
  std::vector<double> out(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) out[j] = funk_transform_at(g, grid.node(j), m);
  return SphericalFunction::from_values(g.grid(), std::move(out), Parity::even);
}

struct IsotropyReport {
  Vec3 u;
  Mat2 T;
  double trace;
  double deviation;
};

inline constexpr double kDeviationFloor = 1e-14;

inline IsotropyReport isotropy_from_circle_samples(const GreatCircle& c, std::span<const double> g) {
  std::vector<double> t11(c.m), t12(c.m), t22(c.m);
  for (int k = 0; k < c.m; ++k) {
    const double ca = std::cos(c.angle(k)), sa = std::sin(c.angle(k));
    t11[k] = ca * ca * g[k];
    t12[k] = ca * sa * g[k];
    t22[k] = sa * sa * g[k];
  }
  IsotropyReport r;
  r.u = c.normal;
  r.T << c.weight() * pairwise_sum(t11), c.weight() * pairwise_sum(t12), 0.0, c.weight() * pairwise_sum(t22);
  r.T(1, 0) = r.T(0, 1);
  r.trace = r.T.trace();
  const Mat2 dev = r.T - 0.5 * r.trace * Mat2::Identity();
  r.deviation = dev.norm() / std::max(std::abs(r.trace), kDeviationFloor);
  return r;
}

// Second-moment tensor of g on the circle orthogonal to u, in the
// tangent_basis(u) frame.
template <PointFunction F>
IsotropyReport section_isotropy_tensor(const F& g, const Vec3& u, int m = 256) {
  const GreatCircle c = great_circle(u, m);
  const std::vector<double> v = sample_circle(g, c);
  return isotropy_from_circle_samples(c, v);
}

namespace detail {
inline void require_ring_axis(const Vec3& axis) {
  if ((axis - Vec3::UnitZ()).norm() > 1e-12 && (axis + Vec3::UnitZ()).norm() > 1e-12) {
    throw InputError("symmetrization axis must be the grid's ring axis (+-e3)");
  }
}
}  // namespace detail

// Ring averages on the grid (radial symmetrization about e3).  Rings that are
// already constant are copied unchanged, so the operator is exactly idempotent.
inline SphericalFunction radial_symmetrize(const SphericalFunction& f, const Vec3& axis = Vec3::UnitZ()) {
  detail::require_ring_axis(axis);
  const SphericalGrid& grid = *f.grid();
  std::vector<double> out(f.values());
  const int np = grid.n_phi();
  for (const Ring& ring : grid.rings()) {
    std::span<const double> vals(f.values().data() + ring.first, np);
    const bool constant = std::all_of(vals.begin(), vals.end(), [&](double v) { return v == vals[0]; });
    if (constant) continue;
    const double avg = pairwise_sum(vals) / np;
    std::fill(out.begin() + ring.first, out.begin() + ring.first + np, avg);
  }
  SphericalFunction r = SphericalFunction::from_values(f.grid(), std::move(out), f.parity());
  if (f.has_coeffs()) return r.with_coeffs(f.coeffs().zonal_part());
  return r;
}

// Zonal function of the height z = <x, e3> given by its Legendre series.
struct LegendreSeries {
  std::vector<double> a;  // f(z) = sum_l a_l P_l(z)

  double operator()(double z) const {
    double s = 0.0;
    for (std::size_t l = 0; l < a.size(); ++l) s += a[l] * legendre_p(static_cast<int>(l), z);
    return s;
  }
};

// Interpolating Legendre series through the ring values of a zonal function.
inline LegendreSeries zonal_profile(const SphericalFunction& zonal) {
  const SphericalGrid& grid = *zonal.grid();
  const int n = grid.n_theta();
  LegendreSeries s{std::vector<double>(n, 0.0)};
  for (const Ring& ring : grid.rings()) {
    const double w = ring.node_weight * grid.n_phi() / kTwoPi;
    const double v = zonal.value(ring.first);
    for (int l = 0; l < n; ++l) s.a[l] += (2.0 * l + 1.0) / 2.0 * w * v * legendre_p(l, ring.cos_theta);
  }
  return s;
}

// Rotations in O(3) fixing the axis e3: reflections allowed.
inline Mat3 rotation_about_e3(double angle) {
  Mat3 T;
  T << std::cos(angle), -std::sin(angle), 0.0, std::sin(angle), std::cos(angle), 0.0, 0.0, 0.0, 1.0;
  return T;
}

inline SphericalFunction finite_average(const SphericalFunction& f, std::span<const Mat3> rotations,
                                        const Vec3& axis = Vec3::UnitZ()) {
  if (!f.evaluable()) throw InputError("finite_average needs an evaluation rule");
  require(!rotations.empty(), "finite_average: no rotations given");
  for (const Mat3& T : rotations) {
    if ((T * T.transpose() - Mat3::Identity()).norm() > 1e-12) throw InputError("finite_average: matrix is not orthogonal");
    if ((T * axis - axis).norm() > 1e-12) throw InputError("finite_average: rotation does not fix the axis");
  }
  const SphericalGrid& grid = *f.grid();
  std::vector<double> out(grid.size());
  std::vector<double> terms(rotations.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t k = 0; k < rotations.size(); ++k) terms[k] = f(Vec3(rotations[k] * grid.node(i)));
    out[i] = pairwise_sum(terms) / static_cast<double>(rotations.size());
  }
  return SphericalFunction::from_values(f.grid(), std::move(out), f.parity());
}

// Dimension constant (n + 1)(n - 1) omega_{n-1} of the radial identity, n = 3.
inline constexpr double kRadialIdentityConstant = 8.0 * kPi;

// (n+1)(n-1) omega_{n-1} int_{-1}^{1} int_0^{sqrt(1-t^2)} r sqrt(r^2+t^2) Sr(f)(z) dr dt
// with z = t / sqrt(r^2 + t^2), computed in polar coordinates (rho, gamma) of
// the half disk, where the radial factor integrates exactly.  For non-negative
// f it equals the L1 norm of f.
inline double radial_identity_integral(const SphericalFunction& f, int n_gamma = 128) {
  const LegendreSeries prof = zonal_profile(radial_symmetrize(f));
  const GaussRule g = gauss_legendre(n_gamma, 0.0, kPi);
  const GaussRule r = gauss_legendre(2, 0.0, 1.0);
  double radial = 0.0;
  for (int i = 0; i < 2; ++i) radial += r.weights[i] * std::pow(r.nodes[i], 3);
  std::vector<double> terms(n_gamma);
  for (int i = 0; i < n_gamma; ++i) terms[i] = g.weights[i] * std::sin(g.nodes[i]) * prof(std::cos(g.nodes[i]));
  return kRadialIdentityConstant * radial * pairwise_sum(terms);
}

// The same integral taken literally in (t, r) with tensor Gauss-Legendre.
inline double radial_identity_integral_tr(const SphericalFunction& f, int n_t = 200, int n_r = 200) {
  const LegendreSeries prof = zonal_profile(radial_symmetrize(f));
  const GaussRule gt = gauss_legendre(n_t);
  std::vector<double> outer(n_t);
  for (int i = 0; i < n_t; ++i) {
    const double t = gt.nodes[i];
    const GaussRule gr = gauss_legendre(n_r, 0.0, std::sqrt(1.0 - t * t));
    double inner = 0.0;
    for (int j = 0; j < n_r; ++j) {
      const double r = gr.nodes[j], rho = std::hypot(r, t);
      inner += gr.weights[j] * r * rho * prof(t / rho);
    }
    outer[i] = gt.weights[i] * inner;
  }
  return kRadialIdentityConstant * pairwise_sum(outer);
}

}  // namespace isosec
