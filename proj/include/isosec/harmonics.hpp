#pragma once

#include "sphere.hpp"

#include <map>
#include <optional>

namespace isosec {

// Real, fully normalized spherical harmonics without the Condon-Shortley phase:
//   Y_l0 = P_l0(cos t),  Y_lm = sqrt2 P_lm cos(m p),  Y_l,-m = sqrt2 P_lm sin(m p),
// with int_{S^2} Y_lm^2 = 1.  Coefficient (l, m) lives at index l^2 + l + m.
class HarmonicCoeffs {
 public:
  HarmonicCoeffs() : HarmonicCoeffs(0) {}
  explicit HarmonicCoeffs(int L) : L_(L), c_(static_cast<std::size_t>(L + 1) * (L + 1), 0.0) {
    require(L >= 0, "band limit must be non-negative");
  }

  static std::size_t index(int l, int m) { return static_cast<std::size_t>(l * l + l + m); }

  int band() const { return L_; }
  std::size_t size() const { return c_.size(); }
  double& operator()(int l, int m) { return c_[index(l, m)]; }
  double operator()(int l, int m) const { return c_[index(l, m)]; }
  double& operator[](std::size_t i) { return c_[i]; }
  double operator[](std::size_t i) const { return c_[i]; }
  const std::vector<double>& data() const { return c_; }

  HarmonicCoeffs resized(int L) const {
    HarmonicCoeffs r(L);
    for (int l = 0; l <= std::min(L, L_); ++l)
      for (int m = -l; m <= l; ++m) r(l, m) = (*this)(l, m);
    return r;
  }

  double norm() const {
    double s = 0.0;
    for (double v : c_) s += v * v;
    return std::sqrt(s);
  }
  double odd_norm() const {
    double s = 0.0;
    for (int l = 1; l <= L_; l += 2)
      for (int m = -l; m <= l; ++m) s += (*this)(l, m) * (*this)(l, m);
    return std::sqrt(s);
  }
  bool is_even(double rel_tol = 1e-8) const { return odd_norm() <= rel_tol * std::max(norm(), 1e-300); }

  HarmonicCoeffs even_part() const {
    HarmonicCoeffs r = *this;
    for (int l = 1; l <= L_; l += 2)
      for (int m = -l; m <= l; ++m) r(l, m) = 0.0;
    return r;
  }
  // Part invariant under rotations about e3.
  HarmonicCoeffs zonal_part() const {
    HarmonicCoeffs r(L_);
    for (int l = 0; l <= L_; ++l) r(l, 0) = (*this)(l, 0);
    return r;
  }

  HarmonicCoeffs& operator+=(const HarmonicCoeffs& o) {
    if (o.L_ > L_) *this = resized(o.L_);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  HarmonicCoeffs& operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
  }
  friend HarmonicCoeffs operator+(HarmonicCoeffs a, const HarmonicCoeffs& b) { return a += b; }
  friend HarmonicCoeffs operator*(double s, HarmonicCoeffs a) { return a *= s; }

  void add_constant(double c) { c_[0] += c * std::sqrt(kFourPi); }

 private:
  int L_;
  std::vector<double> c_;
};

namespace detail {

// Recurrence factors for normalized associated Legendre functions up to band L.
class LegendreTable {
 public:
  explicit LegendreTable(int L) : L_(L), a_((L + 1) * (L + 1)), b_((L + 1) * (L + 1)), d_((L + 1) * (L + 1)) {
    for (int m = 0; m <= L; ++m) {
      for (int l = m + 1; l <= L; ++l) {
        const double ll = l, mm = m;
        a_[idx(l, m)] = std::sqrt((4.0 * ll * ll - 1.0) / (ll * ll - mm * mm));
        b_[idx(l, m)] = std::sqrt(((ll - 1.0) * (ll - 1.0) - mm * mm) / (4.0 * (ll - 1.0) * (ll - 1.0) - 1.0));
      }
      for (int l = m; l <= L; ++l) {
        const double ll = l, mm = m;
        d_[idx(l, m)] = l > m ? std::sqrt((2.0 * ll + 1.0) * (ll - mm) * (ll + mm) / (2.0 * ll - 1.0)) : 0.0;
      }
    }
  }
  static const LegendreTable& get(int L) {
    static std::map<int, std::unique_ptr<LegendreTable>> cache;
    auto& p = cache[L];
    if (!p) p = std::make_unique<LegendreTable>(L);
    return *p;
  }
  int band() const { return L_; }
  std::size_t idx(int l, int m) const { return static_cast<std::size_t>(m) * (L_ + 1) + l; }

  // P[idx(l,m)] = normalized P_lm(t) for 0 <= m <= l <= L; s = sqrt(1 - t^2).
  void evaluate(double t, double s, std::vector<double>& P) const {
    P.assign((L_ + 1) * (L_ + 1), 0.0);
    double pmm = 1.0 / std::sqrt(kFourPi);
    for (int m = 0; m <= L_; ++m) {
      if (m > 0) pmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
      P[idx(m, m)] = pmm;
      if (m + 1 <= L_) P[idx(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * t * pmm;
      for (int l = m + 2; l <= L_; ++l) {
        P[idx(l, m)] = a_[idx(l, m)] * (t * P[idx(l - 1, m)] - b_[idx(l, m)] * P[idx(l - 2, m)]);
      }
    }
  }

  // First and second colatitude derivatives, valid for s > 0.
  void derivatives(double t, double s, const std::vector<double>& P, std::vector<double>& dP,
                   std::vector<double>& ddP) const {
    dP.assign(P.size(), 0.0);
    ddP.assign(P.size(), 0.0);
    const double cot = t / s;
    for (int m = 0; m <= L_; ++m) {
      for (int l = m; l <= L_; ++l) {
        const double prev = l > m ? P[idx(l - 1, m)] : 0.0;
        const double d1 = (l * t * P[idx(l, m)] - d_[idx(l, m)] * prev) / s;
        dP[idx(l, m)] = d1;
        ddP[idx(l, m)] = -cot * d1 - (l * (l + 1.0) - m * m / (s * s)) * P[idx(l, m)];
      }
    }
  }

 private:
  int L_;
  std::vector<double> a_, b_, d_;
};

inline double colatitude_sine(const Vec3& x) { return std::sqrt(x.x() * x.x() + x.y() * x.y()); }

}  // namespace detail

// Value of the expansion at the unit vector x.
inline double synthesize(const HarmonicCoeffs& c, const Vec3& x) {
  const int L = c.band();
  const auto& tab = detail::LegendreTable::get(L);
  const double t = std::clamp(x.z(), -1.0, 1.0);
  const double s = detail::colatitude_sine(x);
  const double phi = std::atan2(x.y(), x.x());
  thread_local std::vector<double> P;
  tab.evaluate(t, s, P);
  double sum = 0.0;
  for (int l = 0; l <= L; ++l) sum += c(l, 0) * P[tab.idx(l, 0)];
  const double c1 = std::cos(phi), s1 = std::sin(phi);
  double cm = 1.0, sm = 0.0;
  for (int m = 1; m <= L; ++m) {
    const double cn = cm * c1 - sm * s1;
    sm = sm * c1 + cm * s1;
    cm = cn;
    double acc_c = 0.0, acc_s = 0.0;
    for (int l = m; l <= L; ++l) {
      acc_c += c(l, m) * P[tab.idx(l, m)];
      acc_s += c(l, -m) * P[tab.idx(l, m)];
    }
    sum += std::sqrt(2.0) * (acc_c * cm + acc_s * sm);
  }
  return sum;
}

// Synthesis on every node of a grid.
inline std::vector<double> synthesize(const HarmonicCoeffs& c, const SphericalGrid& grid) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = synthesize(c, grid.node(i));
  return v;
}

// Quadrature projection of grid samples onto band L.
inline HarmonicCoeffs analyze(const SphericalGrid& grid, std::span<const double> values, int L) {
  require(values.size() == grid.size(), "analyze: value count does not match grid");
  require(L >= 0, "analyze: band must be non-negative");
  if (L > grid.max_band()) {
    throw InputError("grid too coarse for band " + std::to_string(L) + " (max " +
                     std::to_string(grid.max_band()) + ")");
  }
  const auto& tab = detail::LegendreTable::get(L);
  const int np = grid.n_phi();
  std::vector<double> cosm(static_cast<std::size_t>(np) * (L + 1)), sinm(cosm.size());
  for (int k = 0; k < np; ++k)
    for (int m = 0; m <= L; ++m) {
      cosm[k * (L + 1) + m] = std::cos(m * grid.phi(k));
      sinm[k * (L + 1) + m] = std::sin(m * grid.phi(k));
    }
  HarmonicCoeffs c(L);
  std::vector<double> P, A(L + 1), B(L + 1);
  for (const Ring& ring : grid.rings()) {
    tab.evaluate(ring.cos_theta, std::sin(ring.theta), P);
    std::fill(A.begin(), A.end(), 0.0);
    std::fill(B.begin(), B.end(), 0.0);
    for (int k = 0; k < np; ++k) {
      const double f = values[ring.first + k];
      for (int m = 0; m <= L; ++m) {
        A[m] += f * cosm[k * (L + 1) + m];
        B[m] += f * sinm[k * (L + 1) + m];
      }
    }
    for (int l = 0; l <= L; ++l) {
      c(l, 0) += ring.node_weight * P[tab.idx(l, 0)] * A[0];
      for (int m = 1; m <= l; ++m) {
        const double f = ring.node_weight * std::sqrt(2.0) * P[tab.idx(l, m)];
        c(l, m) += f * A[m];
        c(l, -m) += f * B[m];
      }
    }
  }
  return c;
}

// Value, spherical gradient and covariant Hessian of a band-limited function at
// x.  Gradient and Hessian are ambient: tangent to the sphere at x.
struct SurfaceJet {
  double value;
  Vec3 gradient;
  Mat3 hessian;
};

namespace detail {

// Directional derivatives along the geodesic cos(s) x + sin(s) e, recovered
// from the trigonometric polynomial s -> f(cos s x + sin s e) of degree <= L.
inline std::pair<double, double> geodesic_derivatives(const HarmonicCoeffs& c, const Vec3& x, const Vec3& e) {
  const int n = 2 * c.band() + 2;
  double d1 = 0.0, d2 = 0.0;
  std::vector<double> f(n);
  for (int k = 0; k < n; ++k) {
    const double s = kTwoPi * k / n;
    f[k] = synthesize(c, Vec3(std::cos(s) * x + std::sin(s) * e));
  }
  for (int j = 1; j <= c.band(); ++j) {
    double a = 0.0, b = 0.0;
    for (int k = 0; k < n; ++k) {
      a += f[k] * std::cos(kTwoPi * j * k / n);
      b += f[k] * std::sin(kTwoPi * j * k / n);
    }
    a *= 2.0 / n;
    b *= 2.0 / n;
    d1 += j * b;
    d2 -= j * j * a;
  }
  return {d1, d2};
}

inline SurfaceJet surface_jet_geodesic(const HarmonicCoeffs& c, const Vec3& x) {
  const auto [e1, e2] = tangent_basis(x);
  const auto [g1, h11] = geodesic_derivatives(c, x, e1);
  const auto [g2, h22] = geodesic_derivatives(c, x, e2);
  const Vec3 d = (e1 + e2) / std::sqrt(2.0);
  const double hdd = geodesic_derivatives(c, x, d).second;
  const double h12 = hdd - 0.5 * (h11 + h22);
  SurfaceJet j;
  j.value = synthesize(c, x);
  j.gradient = g1 * e1 + g2 * e2;
  j.hessian = h11 * e1 * e1.transpose() + h22 * e2 * e2.transpose() +
              h12 * (e1 * e2.transpose() + e2 * e1.transpose());
  return j;
}

}  // namespace detail

inline SurfaceJet surface_jet(const HarmonicCoeffs& c, const Vec3& x_in) {
  const Vec3 x = x_in.normalized();
  const double s = detail::colatitude_sine(x);
  if (s < 1e-3) return detail::surface_jet_geodesic(c, x);
  const int L = c.band();
  const auto& tab = detail::LegendreTable::get(L);
  const double t = std::clamp(x.z(), -1.0, 1.0);
  const double phi = std::atan2(x.y(), x.x());
  thread_local std::vector<double> P, dP, ddP;
  tab.evaluate(t, s, P);
  tab.derivatives(t, s, P, dP, ddP);
  // f, f_t, f_tt, f_p, f_tp, f_pp in colatitude t and longitude p
  double f = 0, ft = 0, ftt = 0, fp = 0, ftp = 0, fpp = 0;
  for (int l = 0; l <= L; ++l) {
    const double a = c(l, 0);
    f += a * P[tab.idx(l, 0)];
    ft += a * dP[tab.idx(l, 0)];
    ftt += a * ddP[tab.idx(l, 0)];
  }
  for (int m = 1; m <= L; ++m) {
    const double cm = std::cos(m * phi), sm = std::sin(m * phi);
    for (int l = m; l <= L; ++l) {
      const double a = std::sqrt(2.0) * c(l, m), b = std::sqrt(2.0) * c(l, -m);
      const double p = P[tab.idx(l, m)], dp = dP[tab.idx(l, m)], ddp = ddP[tab.idx(l, m)];
      const double ang = a * cm + b * sm;
      const double dang = m * (-a * sm + b * cm);
      const double ddang = -m * m * ang;
      f += p * ang;
      ft += dp * ang;
      ftt += ddp * ang;
      fp += p * dang;
      ftp += dp * dang;
      fpp += p * ddang;
    }
  }
  const double cot = t / s;
  const Vec3 et(t * std::cos(phi), t * std::sin(phi), -s);
  const Vec3 ep(-std::sin(phi), std::cos(phi), 0.0);
  const double htt = ftt;
  const double htp = (ftp - cot * fp) / s;
  const double hpp = fpp / (s * s) + cot * ft;
  SurfaceJet j;
  j.value = f;
  j.gradient = ft * et + (fp / s) * ep;
  j.hessian = htt * et * et.transpose() + hpp * ep * ep.transpose() +
              htp * (et * ep.transpose() + ep * et.transpose());
  return j;
}

// Multiply coefficient (l, m) by lambda[l].
inline HarmonicCoeffs apply_multipliers(const HarmonicCoeffs& c, std::span<const double> lambda) {
  require(static_cast<int>(lambda.size()) > c.band(), "multiplier table shorter than band");
  HarmonicCoeffs r(c.band());
  for (int l = 0; l <= c.band(); ++l)
    for (int m = -l; m <= l; ++m) r(l, m) = lambda[l] * c(l, m);
  return r;
}

inline HarmonicCoeffs laplacian(const HarmonicCoeffs& c) {
  std::vector<double> lam(c.band() + 1);
  for (int l = 0; l <= c.band(); ++l) lam[l] = -l * (l + 1.0);
  return apply_multipliers(c, lam);
}

enum class Kernel { cosine, funk };

inline const char* kernel_name(Kernel k) { return k == Kernel::cosine ? "cosine" : "funk"; }

// Funk-Hecke eigenvalue of the kernel on degree-l harmonics:
// cosine: 2 pi int_{-1}^{1} |t| P_l(t) dt, funk: 2 pi P_l(0).
inline double funk_hecke_multiplier(Kernel k, int l) {
  require(l >= 0, "degree must be non-negative");
  if (l % 2 == 1) return 0.0;
  if (k == Kernel::funk) return kTwoPi * legendre_p(l, 0.0);
  const GaussRule g = gauss_legendre(l / 2 + 2, 0.0, 1.0);
  double s = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * g.nodes[i] * legendre_p(l, g.nodes[i]);
  return 2.0 * kTwoPi * s;
}

struct MultiplierTable {
  Kernel kernel;
  std::vector<double> lambda;
};

inline MultiplierTable multiplier_table(Kernel k, int L) {
  MultiplierTable t{k, std::vector<double>(L + 1)};
  for (int l = 0; l <= L; ++l) t.lambda[l] = funk_hecke_multiplier(k, l);
  return t;
}

inline constexpr int kMaxInverseBand = 64;

inline HarmonicCoeffs cosine_transform_spectral(const HarmonicCoeffs& g) {
  if (!g.is_even()) throw InputError("cosine transform: input has odd-degree content");
  return apply_multipliers(g, multiplier_table(Kernel::cosine, g.band()).lambda);
}

inline HarmonicCoeffs funk_transform_spectral(const HarmonicCoeffs& g) {
  return apply_multipliers(g, multiplier_table(Kernel::funk, g.band()).lambda);
}

namespace detail {
inline HarmonicCoeffs invert_multipliers(const HarmonicCoeffs& G, Kernel k) {
  if (G.band() > kMaxInverseBand) {
    throw InputError("inverse " + std::string(kernel_name(k)) + " transform: band " + std::to_string(G.band()) +
                     " exceeds the ceiling " + std::to_string(kMaxInverseBand));
  }
  if (!G.is_even()) throw InputError(std::string("inverse ") + kernel_name(k) + " transform: odd-degree content");
  HarmonicCoeffs g(G.band());
  for (int l = 0; l <= G.band(); l += 2) {
    const double lam = funk_hecke_multiplier(k, l);
    if (std::abs(lam) < 1e-12) {
      throw NumericalError("inverse transform: multiplier vanishes at degree " + std::to_string(l));
    }
    for (int m = -l; m <= l; ++m) g(l, m) = G(l, m) / lam;
  }
  return g;
}
}  // namespace detail

inline HarmonicCoeffs inverse_cosine_transform(const HarmonicCoeffs& G) {
  return detail::invert_multipliers(G, Kernel::cosine);
}
inline HarmonicCoeffs inverse_funk_transform(const HarmonicCoeffs& G) {
  return detail::invert_multipliers(G, Kernel::funk);
}

}  // namespace isosec
