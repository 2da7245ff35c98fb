#pragma once

#include "core.hpp"

#include <algorithm>
#include <concepts>
#include <memory>
#include <utility>

namespace isosec {

// Open spherical cap {x : <x, center> > height}, 0 < height < 1.
struct Cap {
  Vec3 center{0.0, 0.0, 1.0};
  double height = 0.5;

  static Cap make(const Vec3& center, double height) {
    require(height > 0.0 && height < 1.0, "cap height must lie in (0, 1)");
    require(center.norm() > 1e-12, "cap center must be nonzero");
    return Cap{center.normalized(), height};
  }
  double angular_radius() const { return std::acos(height); }
  bool contains(const Vec3& x) const { return center.dot(x) > height; }
  Cap antipodal() const { return Cap{-center, height}; }
};

// Uniformly distributed point of the cap.
inline Vec3 sample_in_cap(Rng& rng, const Cap& cap) {
  const double t = rng.uniform(cap.height, 1.0);
  const double a = rng.uniform(0.0, kTwoPi);
  const double r = std::sqrt(std::max(0.0, 1.0 - t * t));
  Vec3 e1 = std::abs(cap.center.z()) < 0.9 ? Vec3::UnitZ().cross(cap.center) : Vec3::UnitX().cross(cap.center);
  e1.normalize();
  const Vec3 e2 = cap.center.cross(e1);
  return (t * cap.center + r * (std::cos(a) * e1 + std::sin(a) * e2)).normalized();
}

// Angular gap between the closures of two caps (negative if they overlap).
inline double cap_separation(const Cap& a, const Cap& b) {
  const double c = std::clamp(a.center.dot(b.center), -1.0, 1.0);
  return std::acos(c) - a.angular_radius() - b.angular_radius();
}

struct Ring {
  double cos_theta;
  double theta;
  double node_weight;  // weight of each node on the ring
  int first;           // index of the first node
};

// Gauss-Legendre nodes in cos(theta) times n_phi equispaced longitudes.
// Exact for polynomials of degree <= 2 n_theta - 1 in cos(theta) and
// trigonometric degree <= n_phi - 1 in phi.
class SphericalGrid {
 public:
  SphericalGrid(int n_theta, int n_phi) : n_theta_(n_theta), n_phi_(n_phi) {
    require(n_theta >= 2 && n_phi >= 4, "grid needs n_theta >= 2 and n_phi >= 4");
    const GaussRule gl = gauss_legendre(n_theta);
    const double dphi = kTwoPi / n_phi;
    nodes_.reserve(static_cast<std::size_t>(n_theta) * n_phi);
    for (int i = 0; i < n_theta; ++i) {
      // rings ordered from north to south
      const double t = gl.nodes[n_theta - 1 - i];
      const double w = gl.weights[n_theta - 1 - i] * dphi;
      const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
      rings_.push_back({t, std::acos(t), w, static_cast<int>(nodes_.size())});
      for (int k = 0; k < n_phi; ++k) {
        const double phi = k * dphi;
        nodes_.emplace_back(s * std::cos(phi), s * std::sin(phi), t);
        weights_.push_back(w);
      }
    }
  }

  int n_theta() const { return n_theta_; }
  int n_phi() const { return n_phi_; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<Vec3>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<Ring>& rings() const { return rings_; }
  const Vec3& node(std::size_t i) const { return nodes_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }
  double phi(int k) const { return k * kTwoPi / n_phi_; }
  int ring_of(std::size_t i) const { return static_cast<int>(i) / n_phi_; }
  int longitude_of(std::size_t i) const { return static_cast<int>(i) % n_phi_; }

  // Index of the antipode of node i (needs even n_phi).
  std::size_t antipode(std::size_t i) const {
    require(n_phi_ % 2 == 0, "antipodal pairing needs an even n_phi");
    const int r = ring_of(i), k = longitude_of(i);
    return static_cast<std::size_t>(n_theta_ - 1 - r) * n_phi_ + (k + n_phi_ / 2) % n_phi_;
  }

  // Largest harmonic band L whose products of two band-L functions are
  // integrated exactly.
  int max_band() const { return std::min(n_theta_ - 1, (n_phi_ - 1) / 2); }

 private:
  int n_theta_, n_phi_;
  std::vector<Vec3> nodes_;
  std::vector<double> weights_;
  std::vector<Ring> rings_;
};

using GridPtr = std::shared_ptr<const SphericalGrid>;

inline GridPtr build_grid(int n_theta, int n_phi) {
  return std::make_shared<const SphericalGrid>(n_theta, n_phi);
}

inline double integrate(const SphericalGrid& grid, std::span<const double> values) {
  require(values.size() == grid.size(), "integrate: value count does not match grid");
  std::vector<double> terms(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) terms[i] = grid.weight(i) * values[i];
  return pairwise_sum(terms);
}

// Orthonormal basis (e1, e2) of the tangent plane at u, with e1 x e2 = u.
inline std::pair<Vec3, Vec3> tangent_basis(const Vec3& u_in) {
  const Vec3 u = require_unit(u_in);
  Vec3 e1;
  if (std::abs(u.z()) < 0.9) {
    e1 = Vec3::UnitZ().cross(u).normalized();
  } else {
    e1 = (Vec3::UnitX() - u.x() * u).normalized();
  }
  const Vec3 e2 = u.cross(e1);
  return {e1, e2};
}

// Great circle orthogonal to `normal`, with m equispaced nodes
// x_k = cos(a_k) e1 + sin(a_k) e2, a_k = 2 pi k / m.
struct GreatCircle {
  Vec3 normal;
  Vec3 e1, e2;
  int m;

  double angle(int k) const { return kTwoPi * k / m; }
  Vec3 point(int k) const { return point_at(angle(k)); }
  Vec3 point_at(double a) const { return std::cos(a) * e1 + std::sin(a) * e2; }
  double weight() const { return kTwoPi / m; }
};

inline GreatCircle great_circle(const Vec3& u, int m) {
  require(m >= 8, "great_circle: need at least 8 nodes");
  const auto [e1, e2] = tangent_basis(u);
  return GreatCircle{u.normalized(), e1, e2, m};
}

template <class F>
concept PointFunction = std::regular_invocable<const F&, const Vec3&> &&
    std::convertible_to<std::invoke_result_t<const F&, const Vec3&>, double>;

template <class F>
std::vector<double> sample_circle(const F& g, const GreatCircle& c) {
  std::vector<double> v(c.m);
  for (int k = 0; k < c.m; ++k) v[k] = g(c.point(k));
  return v;
}

// Periodic trapezoid rule for the arc-length integral of g over the circle.
template <PointFunction F>
double circle_integrate(const F& g, const GreatCircle& c) {
  const std::vector<double> v = sample_circle(g, c);
  return c.weight() * pairwise_sum(v);
}

}  // namespace isosec
