#include "isosec/function.hpp"

#include <gtest/gtest.h>

using namespace isosec;

TEST(Grid, WeightsSumToSphereArea) {
  for (auto [nt, np] : {std::pair{2, 4}, {16, 32}, {64, 128}, {33, 70}}) {
    const GridPtr g = build_grid(nt, np);
    std::vector<double> one(g->size(), 1.0);
    EXPECT_NEAR(integrate(*g, one), kFourPi, 1e-12) << nt << "x" << np;
  }
}

TEST(Grid, RejectsTooFewNodes) {
  EXPECT_THROW(build_grid(0, 4), InputError);
  EXPECT_THROW(build_grid(1, 8), InputError);
  EXPECT_THROW(build_grid(8, 3), InputError);
}

TEST(Grid, NodesAreUnitAndRingsOrdered) {
  const GridPtr g = build_grid(12, 24);
  for (const Vec3& x : g->nodes()) EXPECT_NEAR(x.norm(), 1.0, 1e-15);
  for (std::size_t r = 1; r < g->rings().size(); ++r)
    EXPECT_GT(g->rings()[r - 1].cos_theta, g->rings()[r].cos_theta);
}

TEST(Grid, AntipodeIndex) {
  const GridPtr g = build_grid(10, 20);
  for (std::size_t i = 0; i < g->size(); ++i) EXPECT_NEAR((g->node(i) + g->node(g->antipode(i))).norm(), 0.0, 1e-14);
}

// Polynomial moments of the coordinates: int x1^a x2^b x3^c has a closed form.
double monomial_moment(int a, int b, int c) {
  if (a % 2 || b % 2 || c % 2) return 0.0;
  return 2.0 * std::tgamma((a + 1) / 2.0) * std::tgamma((b + 1) / 2.0) * std::tgamma((c + 1) / 2.0) /
         std::tgamma((a + b + c + 3) / 2.0);
}

TEST(Grid, ExactForPolynomialsUpToDegree) {
  const GridPtr g = build_grid(8, 16);
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; b + a <= 7; ++b)
      for (int c = 0; a + b + c <= 7; ++c) {
        std::vector<double> v(g->size());
        for (std::size_t i = 0; i < g->size(); ++i) {
          const Vec3& x = g->node(i);
          v[i] = std::pow(x.x(), a) * std::pow(x.y(), b) * std::pow(x.z(), c);
        }
        EXPECT_NEAR(integrate(*g, v), monomial_moment(a, b, c), 1e-13) << a << b << c;
      }
}

TEST(Integrate, OrderDeterministic) {
  const GridPtr g = build_grid(40, 80);
  std::vector<double> v(g->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::exp(g->node(i).x());
  const double a = integrate(*g, v), b = integrate(*g, v);
  EXPECT_EQ(a, b);
}

TEST(TangentBasis, OrthonormalRightHanded) {
  Rng rng(7);
  std::vector<Vec3> dirs = {Vec3::UnitZ(), -Vec3::UnitZ(), Vec3::UnitX(), Vec3(0, 0.43589, 0.9).normalized()};
  for (int k = 0; k < 200; ++k) dirs.push_back(rng.unit_vector());
  for (const Vec3& u : dirs) {
    const auto [e1, e2] = tangent_basis(u);
    EXPECT_NEAR(e1.norm(), 1.0, 1e-14);
    EXPECT_NEAR(e2.norm(), 1.0, 1e-14);
    EXPECT_NEAR(e1.dot(u), 0.0, 1e-14);
    EXPECT_NEAR(e2.dot(u), 0.0, 1e-14);
    EXPECT_NEAR(e1.dot(e2), 0.0, 1e-14);
    EXPECT_NEAR((e1.cross(e2) - u).norm(), 0.0, 1e-14);
  }
}

TEST(TangentBasis, RejectsNonUnit) { EXPECT_THROW(tangent_basis(Vec3(0, 0, 2)), InputError); }

TEST(GreatCircle, ConstantIntegratesToTwoPi) {
  Rng rng(3);
  for (int k = 0; k < 20; ++k) {
    const GreatCircle c = great_circle(rng.unit_vector(), 64);
    EXPECT_NEAR(circle_integrate([](const Vec3&) { return 1.0; }, c), kTwoPi, 1e-13);
  }
}

TEST(GreatCircle, TrigonometricExactness) {
  // x1^2 over the circle orthogonal to e3 is cos^2, integral pi.
  const GreatCircle c = great_circle(Vec3::UnitZ(), 16);
  EXPECT_NEAR(circle_integrate([](const Vec3& x) { return x.x() * x.x(); }, c), kPi, 1e-14);
  // a general quadratic form: int <Ax, x> = pi tr(P A P).
  Rng rng(11);
  Mat3 A = Mat3::Random();
  A = A + A.transpose().eval();
  const Vec3 u = rng.unit_vector();
  const Mat3 P = Mat3::Identity() - u * u.transpose();
  const GreatCircle cu = great_circle(u, 16);
  EXPECT_NEAR(circle_integrate([&](const Vec3& x) { return x.dot(A * x); }, cu), kPi * (P * A * P).trace(), 1e-13);
}

TEST(Cap, Validation) {
  EXPECT_THROW(Cap::make(Vec3::UnitZ(), 0.0), InputError);
  EXPECT_THROW(Cap::make(Vec3::UnitZ(), 1.0), InputError);
  const Cap u = Cap::make(Vec3(0, 0, 2), 0.8);
  EXPECT_NEAR(u.center.norm(), 1.0, 1e-15);
  EXPECT_TRUE(u.contains(Vec3::UnitZ()));
  EXPECT_FALSE(u.contains(Vec3::UnitX()));
  const Cap v = Cap::make(Vec3::UnitX(), 0.8);
  EXPECT_NEAR(cap_separation(u, v), kPi / 2 - 2 * std::acos(0.8), 1e-15);
}

TEST(GaussLegendre, ExactDegree) {
  for (int n : {1, 2, 5, 16, 63}) {
    const GaussRule r = gauss_legendre(n);
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], d);
      EXPECT_NEAR(s, d % 2 ? 0.0 : 2.0 / (d + 1), 1e-13) << n << " " << d;
    }
  }
}

TEST(SphericalFunction, ParityDefectAndEvaluation) {
  const GridPtr g = build_grid(16, 32);
  const auto f = SphericalFunction::from_rule(g, [](const Vec3& x) { return x.z() * x.z() + x.x() * x.y(); },
                                              Parity::even);
  EXPECT_LT(f.parity_defect(), 1e-14);
  EXPECT_NEAR(f(Vec3::UnitZ()), 1.0, 1e-15);
  const auto v = SphericalFunction::from_values(g, f.values());
  EXPECT_FALSE(v.evaluable());
  EXPECT_THROW(v(Vec3::UnitZ()), InputError);
}

TEST(SphericalFunction, LpNorm) {
  const GridPtr g = build_grid(16, 32);
  const auto one = SphericalFunction::from_rule(g, [](const Vec3&) { return 1.0; });
  EXPECT_NEAR(lp_norm(one, 1), kFourPi, 1e-12);
  EXPECT_NEAR(lp_norm(one, 2), std::sqrt(kFourPi), 1e-12);
  EXPECT_THROW(lp_norm(one, 0.5), InputError);
}
