#pragma once

#include "harmonics.hpp"

#include <functional>

namespace isosec {

enum class Parity { none, even, odd };

// Samples on a grid, optionally with an evaluation rule valid everywhere on
// the sphere (a harmonic expansion or a closed form).
class SphericalFunction {
 public:
  using Rule = std::function<double(const Vec3&)>;

  SphericalFunction() = default;

  static SphericalFunction from_values(GridPtr grid, std::vector<double> values, Parity parity = Parity::none) {
    require(grid != nullptr, "grid is null");
    require(values.size() == grid->size(), "value count does not match grid");
    SphericalFunction f;
    f.grid_ = std::move(grid);
    f.values_ = std::move(values);
    f.parity_ = parity;
    return f;
  }

  static SphericalFunction from_coeffs(GridPtr grid, HarmonicCoeffs c, Parity parity = Parity::none) {
    std::vector<double> v = synthesize(c, *grid);
    return from_values(std::move(grid), std::move(v), parity).with_coeffs(std::move(c));
  }

  static SphericalFunction from_rule(GridPtr grid, Rule rule, Parity parity = Parity::none) {
    std::vector<double> v(grid->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = rule(grid->node(i));
    SphericalFunction f = from_values(std::move(grid), std::move(v), parity);
    f.rule_ = std::move(rule);
    return f;
  }

  SphericalFunction with_coeffs(HarmonicCoeffs c) const {
    SphericalFunction f = *this;
    auto shared = std::make_shared<const HarmonicCoeffs>(std::move(c));
    f.coeffs_ = shared;
    f.rule_ = [shared](const Vec3& x) { return synthesize(*shared, x); };
    return f;
  }

  const GridPtr& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double value(std::size_t i) const { return values_[i]; }
  Parity parity() const { return parity_; }
  bool has_coeffs() const { return coeffs_ != nullptr; }
  const HarmonicCoeffs& coeffs() const {
    if (!coeffs_) throw InputError("function has no harmonic expansion");
    return *coeffs_;
  }
  bool evaluable() const { return static_cast<bool>(rule_); }
  const Rule& rule() const { return rule_; }

  double operator()(const Vec3& x) const {
    if (!rule_) throw InputError("function has no evaluation rule off the grid");
    return rule_(x);
  }

  double integral() const { return integrate(*grid_, values_); }

  // Largest |f(x) - s f(-x)| over grid nodes, s = +1 (even) or -1 (odd).
  double parity_defect() const {
    const double s = parity_ == Parity::odd ? -1.0 : 1.0;
    double d = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i)
      d = std::max(d, std::abs(values_[i] - s * values_[grid_->antipode(i)]));
    return d;
  }

 private:
  GridPtr grid_;
  std::vector<double> values_;
  std::shared_ptr<const HarmonicCoeffs> coeffs_;
  Rule rule_;
  Parity parity_ = Parity::none;
};

inline double integrate(const SphericalFunction& f) { return f.integral(); }

inline SphericalFunction sample(GridPtr grid, const HarmonicCoeffs& c, Parity parity = Parity::none) {
  return SphericalFunction::from_coeffs(std::move(grid), c, parity);
}

// Lp norm by grid quadrature; p must be >= 1.
inline double lp_norm(const SphericalFunction& f, double p) {
  require(p >= 1.0, "lp_norm: p must be >= 1");
  std::vector<double> v(f.values().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::pow(std::abs(f.value(i)), p);
  return std::pow(integrate(*f.grid(), v), 1.0 / p);
}

}  // namespace isosec
