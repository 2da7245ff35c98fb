#pragma once

#include "function.hpp"

#include <boost/math/differentiation/autodiff.hpp>

#include <array>

namespace isosec {

// Profile of an even function of s = |<x, axis>|: v_in on the caps of angular
// radius `radius` about +-axis, v_out beyond `radius + transition`, joined by
// the C-infinity step chi(d) = psi(1 - d) / (psi(1 - d) + psi(d)),
// psi(x) = exp(-1/x), in the normalized geodesic distance d.
struct PlateauProfile {
  double v_out = 1.0;
  double v_in = 2.0;
  double radius = 0.5;
  double transition = 0.1;

  double s_inner() const { return std::cos(radius); }
  double s_outer() const { return std::cos(radius + transition); }
  bool is_ramp(double s) const { return s > s_outer() && s < s_inner(); }

  // F, F', F'', F''' at s in [0, 1].
  std::array<double, 4> jet(double s) const {
    if (s >= s_inner()) return {v_in, 0.0, 0.0, 0.0};
    if (s <= s_outer()) return {v_out, 0.0, 0.0, 0.0};
    using namespace boost::math::differentiation;
    const auto x = make_fvar<double, 3>(s);
    const auto d = (acos(x) - radius) / transition;
    const auto a = exp(-1.0 / (1.0 - d));
    const auto b = exp(-1.0 / d);
    const auto F = v_out + (v_in - v_out) * (a / (a + b));
    return {F.derivative(0), F.derivative(1), F.derivative(2), F.derivative(3)};
  }
  double operator()(double s) const { return jet(s)[0]; }
};

struct Plateau {
  Vec3 axis;
  PlateauProfile profile;
  SphericalFunction G;    // exact samples, exact rule
  HarmonicCoeffs coeffs;  // band-L analysis of G
  double residual_U;      // max |G_L - v_U| over grid nodes in U and -U
  double residual_V;
};

inline void check_plateau_caps(const Cap& U, const Cap& V, double transition) {
  require(transition > 0.0, "plateau transition must be positive");
  if (cap_separation(U, V) <= 0.0) throw InputError("caps U and V overlap");
  if (cap_separation(U, V.antipodal()) <= 0.0) throw InputError("cap U overlaps the antipode of V");
  const double gap = 2.0 * transition;
  if (cap_separation(U, U.antipodal()) < gap) throw InputError("cap U is too close to its antipode");
  if (cap_separation(V, V.antipodal()) < gap) throw InputError("cap V is too close to its antipode");
  if (cap_separation(U, V) < gap || cap_separation(U, V.antipodal()) < gap) {
    throw InputError("caps are closer than twice the transition width");
  }
}

// Even C-infinity function equal to v_U on U and -U and to v_V on V and -V.
inline Plateau smooth_plateau(const Cap& U, const Cap& V, double v_U, double v_V, double transition, GridPtr grid,
                              int L) {
  check_plateau_caps(U, V, transition);
  const PlateauProfile prof{v_U, v_V, V.angular_radius(), transition};
  const Vec3 c = V.center;
  SphericalFunction G = SphericalFunction::from_rule(
      grid, [prof, c](const Vec3& x) { return prof(std::min(1.0, std::abs(x.dot(c)))); }, Parity::even);
  HarmonicCoeffs coeffs = analyze(*grid, G.values(), L);
  const std::vector<double> trunc = synthesize(coeffs, *grid);
  double rU = 0.0, rV = 0.0;
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const Vec3& x = grid->node(i);
    if (U.contains(x) || U.contains(-x)) rU = std::max(rU, std::abs(trunc[i] - v_U));
    if (V.contains(x) || V.contains(-x)) rV = std::max(rV, std::abs(trunc[i] - v_V));
  }
  return Plateau{c, prof, std::move(G), std::move(coeffs), rU, rV};
}

}  // namespace isosec
