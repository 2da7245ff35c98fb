#include "isosec/transforms.hpp"

#include <gtest/gtest.h>

using namespace isosec;

namespace {

HarmonicCoeffs random_coeffs(int L, Rng& rng, bool even_only = false) {
  HarmonicCoeffs c(L);
  for (int l = 0; l <= L; ++l) {
    if (even_only && l % 2) continue;
    for (int m = -l; m <= l; ++m) c(l, m) = rng.normal() / (1.0 + l);
  }
  return c;
}

// Non-negative band-L function: 1 + (scaled random part with |.| <= 0.9 on the grid).
HarmonicCoeffs random_positive(int L, Rng& rng, const SphericalGrid& g, bool even_only = false) {
  HarmonicCoeffs c = random_coeffs(L, rng, even_only);
  c(0, 0) = 0.0;
  double mx = 0.0;
  for (double v : synthesize(c, g)) mx = std::max(mx, std::abs(v));
  c *= 0.9 / mx;
  c.add_constant(1.0);
  return c;
}

// Brute-force DFT coefficient of order j of samples on an equispaced circle.
std::pair<double, double> dft(std::span<const double> v, int j) {
  double a = 0.0, b = 0.0;
  const int m = static_cast<int>(v.size());
  for (int k = 0; k < m; ++k) {
    a += v[k] * std::cos(kTwoPi * j * k / m);
    b += v[k] * std::sin(kTwoPi * j * k / m);
  }
  return {2.0 * a / m, 2.0 * b / m};
}

}  // namespace

TEST(CosineTransform, ConstantGridRule) {
  const GridPtr g = build_grid(64, 128);
  const auto one = SphericalFunction::from_rule(g, [](const Vec3&) { return 1.0; });
  const SphericalFunction c = cosine_transform(one);
  for (double v : c.values()) EXPECT_NEAR(v, kTwoPi, 2e-3);
  EXPECT_EQ(c.parity(), Parity::even);
}

TEST(CosineTransform, GridRuleKillsOddAndIsLinear) {
  Rng rng(1);
  const GridPtr g = build_grid(16, 32);
  HarmonicCoeffs odd(5);
  odd(1, 1) = 1.0;
  odd(3, -2) = 0.5;
  odd(5, 0) = -0.3;
  const SphericalFunction c = cosine_transform(sample(g, odd));
  for (double v : c.values()) EXPECT_NEAR(v, 0.0, 1e-13);
  const auto f1 = sample(g, random_coeffs(6, rng)), f2 = sample(g, random_coeffs(6, rng));
  std::vector<double> mix(g->size());
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = 2.0 * f1.value(i) - 3.0 * f2.value(i);
  const auto cm = cosine_transform(SphericalFunction::from_values(g, mix));
  const auto c1 = cosine_transform(f1), c2 = cosine_transform(f2);
  for (std::size_t i = 0; i < mix.size(); ++i) EXPECT_NEAR(cm.value(i), 2.0 * c1.value(i) - 3.0 * c2.value(i), 1e-12);
}

TEST(CosineTransform, AdaptedRuleMatchesSpectral) {
  Rng rng(2);
  const int L = 24;
  const HarmonicCoeffs c = random_coeffs(L, rng, true);
  const HarmonicCoeffs ct = cosine_transform_spectral(c);
  const GridPtr g = build_grid(16, 32);
  const SphericalFunction f = sample(g, c);
  const SphericalFunction adapted = cosine_transform(f, CosineRule::adapted, {L / 2 + 2, L + 2});
  double err = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i) err = std::max(err, std::abs(adapted.value(i) - synthesize(ct, g->node(i))));
  EXPECT_LT(err, 1e-8);
}

TEST(CosineTransform, GridRuleConvergesToSpectral) {
  Rng rng(3);
  const HarmonicCoeffs c = random_coeffs(8, rng, true);
  const HarmonicCoeffs ct = cosine_transform_spectral(c);
  double prev = 1e9;
  for (int nt : {16, 32, 64}) {
    const GridPtr g = build_grid(nt, 2 * nt);
    const SphericalFunction t = cosine_transform(sample(g, c));
    double err = 0.0;
    for (std::size_t i = 0; i < g->size(); i += 7) err = std::max(err, std::abs(t.value(i) - synthesize(ct, g->node(i))));
    EXPECT_LT(err, prev / 2.5);
    prev = err;
  }
  EXPECT_LT(prev, 1e-2);
}

TEST(FunkTransform, ConstantDegreeTwoAndOdd) {
  const GridPtr g = build_grid(12, 24);
  const auto c = SphericalFunction::from_rule(g, [](const Vec3&) { return 3.0; });
  const auto rc = funk_transform(c);
  for (double v : rc.values()) EXPECT_NEAR(v, 3.0 * kTwoPi, 1e-12);
  HarmonicCoeffs z(2);
  z(2, 0) = 1.0;
  const auto zf = sample(g, z);
  const auto rz = funk_transform(zf);
  for (std::size_t i = 0; i < g->size(); ++i) EXPECT_NEAR(rz.value(i), -kPi * zf.value(i), 1e-12);
  HarmonicCoeffs odd(3);
  odd(3, 1) = 1.0;
  const auto ro = funk_transform(sample(g, odd));
  for (double v : ro.values()) EXPECT_NEAR(v, 0.0, 1e-13);
  EXPECT_THROW(funk_transform(SphericalFunction::from_values(g, c.values())), InputError);
}

TEST(FunkTransform, MatchesSpectral) {
  Rng rng(4);
  const HarmonicCoeffs c = random_coeffs(16, rng);
  const HarmonicCoeffs rc = funk_transform_spectral(c);
  const GridPtr g = build_grid(20, 40);
  const auto r = funk_transform(sample(g, c), 64);
  for (std::size_t i = 0; i < g->size(); ++i) EXPECT_NEAR(r.value(i), synthesize(rc, g->node(i)), 1e-11);
}

TEST(Isotropy, ConstantAndQuadratic) {
  Rng rng(5);
  for (int k = 0; k < 10; ++k) {
    const auto r = section_isotropy_tensor([](const Vec3&) { return 1.0; }, rng.unit_vector());
    EXPECT_NEAR(r.T(0, 0), kPi, 1e-13);
    EXPECT_NEAR(r.T(1, 1), kPi, 1e-13);
    EXPECT_NEAR(r.T(0, 1), 0.0, 1e-13);
    EXPECT_LT(r.deviation, 1e-14);
  }
  const auto r = section_isotropy_tensor([](const Vec3& x) { return x.x() * x.x(); }, Vec3::UnitZ());
  // tangent_basis(e3) = (e1, e2)
  EXPECT_NEAR(r.T(0, 0), 3 * kPi / 4, 1e-13);
  EXPECT_NEAR(r.T(1, 1), kPi / 4, 1e-13);
  EXPECT_NEAR(r.T(0, 1), 0.0, 1e-13);
  EXPECT_NEAR(r.deviation, std::sqrt(2.0) / 4, 1e-13);
}

TEST(Isotropy, DeviationIsDegreeTwoFourierMass) {
  Rng rng(6);
  const HarmonicCoeffs c = random_coeffs(12, rng);
  for (int k = 0; k < 20; ++k) {
    const Vec3 u = rng.unit_vector();
    const GreatCircle circ = great_circle(u, 256);
    const std::vector<double> v = sample_circle([&](const Vec3& x) { return synthesize(c, x); }, circ);
    const auto [a0, b0] = dft(v, 0);
    const auto [a2, b2] = dft(v, 2);
    const IsotropyReport r = section_isotropy_tensor([&](const Vec3& x) { return synthesize(c, x); }, u);
    // T - tr/2 I = (pi/2) [[a2, b2], [b2, -a2]], tr = pi a0
    EXPECT_NEAR(r.trace, kPi * a0, 1e-12);
    EXPECT_NEAR(r.deviation * std::abs(r.trace), kPi / std::sqrt(2.0) * std::hypot(a2, b2), 1e-12);
  }
}

TEST(RadialSymmetrize, IdempotentZonalAndLongitude) {
  Rng rng(7);
  const GridPtr g = build_grid(24, 48);
  const auto f = sample(g, random_positive(16, rng, *g));
  const auto s1 = radial_symmetrize(f);
  const auto s2 = radial_symmetrize(s1);
  EXPECT_EQ(s1.values(), s2.values());
  const auto x1 = SphericalFunction::from_rule(g, [](const Vec3& x) { return x.x(); });
  const auto sx = radial_symmetrize(x1);
  for (double v : sx.values()) EXPECT_NEAR(v, 0.0, 1e-15);
  EXPECT_THROW(radial_symmetrize(f, Vec3::UnitX()), InputError);
  EXPECT_NO_THROW(radial_symmetrize(f, -Vec3::UnitZ()));
  // symmetrized samples match the zonal part of the expansion
  for (std::size_t i = 0; i < g->size(); ++i) EXPECT_NEAR(s1.value(i), synthesize(f.coeffs().zonal_part(), g->node(i)), 1e-12);
}

TEST(RadialSymmetrize, NormsOnRandomNonNegative) {
  Rng rng(8);
  const GridPtr g = build_grid(32, 64);
  for (int k = 0; k < 100; ++k) {
    const auto f = sample(g, random_positive(24, rng, *g));
    const auto s = radial_symmetrize(f);
    EXPECT_NEAR(lp_norm(s, 1), lp_norm(f, 1), 1e-10 * lp_norm(f, 1));
    EXPECT_LE(lp_norm(s, 2), lp_norm(f, 2) + 1e-12);
    EXPECT_LE(lp_norm(s, 3), lp_norm(f, 3) + 1e-12);
  }
}

TEST(RadialSymmetrize, JensenPointwise) {
  Rng rng(9);
  const GridPtr g = build_grid(24, 48);
  const auto f = sample(g, random_positive(12, rng, *g));
  std::vector<double> sq(g->size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = f.value(i) * f.value(i);
  const auto sf = radial_symmetrize(f), sf2 = radial_symmetrize(SphericalFunction::from_values(g, sq));
  for (std::size_t i = 0; i < sq.size(); ++i) EXPECT_LE(sf.value(i), std::sqrt(sf2.value(i)) + 1e-14);
}

TEST(RadialSymmetrize, CommutesWithGridRotations) {
  Rng rng(10);
  const GridPtr g = build_grid(16, 32);
  const auto f = sample(g, random_coeffs(10, rng));
  const Mat3 T = rotation_about_e3(kTwoPi * 5 / 32);
  const std::vector<Mat3> rots{T};
  const auto a = radial_symmetrize(finite_average(f, rots));
  const auto b = radial_symmetrize(f);
  for (std::size_t i = 0; i < g->size(); ++i) EXPECT_NEAR(a.value(i), b.value(i), 1e-13);
}

TEST(RadialIdentity, ConstantAndRandom) {
  const GridPtr g = build_grid(32, 64);
  const auto one = SphericalFunction::from_rule(g, [](const Vec3&) { return 1.0; });
  EXPECT_NEAR(radial_identity_integral(one), kFourPi, 1e-12);
  Rng rng(11);
  for (int k = 0; k < 5; ++k) {
    const auto f = sample(g, random_positive(16, rng, *g));
    EXPECT_NEAR(radial_identity_integral(f), lp_norm(f, 1), 1e-10);
    EXPECT_NEAR(radial_identity_integral_tr(f), lp_norm(f, 1), 1e-6);
  }
}

TEST(FiniteAverage, IdentityZonalAndConvergence) {
  Rng rng(12);
  const GridPtr g = build_grid(24, 48);
  const auto f = sample(g, random_coeffs(16, rng));
  const std::vector<Mat3> id{Mat3::Identity()};
  const auto fi = finite_average(f, id);
  for (std::size_t i = 0; i < g->size(); ++i) EXPECT_NEAR(fi.value(i), f.value(i), 1e-13);
  const auto sr = radial_symmetrize(f);
  double prev = 1e9;
  for (int m = 1; m <= 64; m *= 2) {
    std::vector<Mat3> rots;
    for (int k = 0; k < m; ++k) rots.push_back(rotation_about_e3(kTwoPi * k / m));
    const auto a = finite_average(f, rots);
    std::vector<double> d(g->size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.value(i) - sr.value(i);
    const double dist = lp_norm(SphericalFunction::from_values(g, d), 2);
    EXPECT_LE(dist, prev + 1e-13);
    prev = dist;
  }
  EXPECT_LT(prev, 1e-6);
  const auto z = sample(g, f.coeffs().zonal_part());
  std::vector<Mat3> any{rotation_about_e3(0.3), rotation_about_e3(1.1)};
  Mat3 refl = Mat3::Identity();
  refl(1, 1) = -1.0;
  any.push_back(refl);
  const auto za = finite_average(z, any);
  for (std::size_t i = 0; i < g->size(); ++i) EXPECT_NEAR(za.value(i), z.value(i), 1e-12);
}

TEST(FiniteAverage, RejectsAxisMovingRotation) {
  const GridPtr g = build_grid(8, 16);
  HarmonicCoeffs c(2);
  c(2, 1) = 1.0;
  const auto f = sample(g, c);
  Mat3 R;
  R << 1, 0, 0, 0, 0, -1, 0, 1, 0;
  const std::vector<Mat3> bad{R};
  EXPECT_THROW(finite_average(f, bad), InputError);
}
