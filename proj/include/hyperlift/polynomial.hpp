#pragma once

// Dense univariate polynomials in the curve parameter t, coefficients ascending.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace hyperlift {

class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }
  Poly(std::initializer_list<double> coeffs) : c_(coeffs) { trim(); }

  static Poly constant(double v) { return Poly({v}); }
  static Poly monomial(double coeff, std::size_t power) {
    std::vector<double> c(power + 1, 0.0);
    c[power] = coeff;
    return Poly(std::move(c));
  }

  /// Degree of the zero polynomial is reported as 0.
  std::size_t degree() const { return c_.empty() ? 0 : c_.size() - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<double>& coeffs() const { return c_; }
  double coeff(std::size_t k) const { return k < c_.size() ? c_[k] : 0.0; }

  double operator()(double t) const {
    double acc = 0.0;
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * t + c_[k];
    return acc;
  }

  Poly derivative(std::size_t order = 1) const {
    std::vector<double> c = c_;
    for (std::size_t o = 0; o < order && !c.empty(); ++o) {
      std::vector<double> d(c.size() > 1 ? c.size() - 1 : 0);
      for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
      c = std::move(d);
    }
    return Poly(std::move(c));
  }

  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }
  Poly& operator*=(double s) {
    for (double& v : c_) v *= s;
    trim();
    return *this;
  }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, double s) { return a *= s; }
  friend Poly operator*(double s, Poly a) { return a *= s; }
  friend Poly operator-(Poly a) { return a *= -1.0; }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<double> c(a.c_.size() + b.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(c));
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  friend bool operator==(const Poly&, const Poly&) = default;

  /// p(scale * t)
  Poly rescaled_argument(double scale) const {
    std::vector<double> c = c_;
    double f = 1.0;
    for (double& v : c) {
      v *= f;
      f *= scale;
    }
    return Poly(std::move(c));
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
  }

  std::vector<double> c_;
};

inline Poly pow(const Poly& p, unsigned e) {
  Poly r = Poly::constant(1.0);
  for (unsigned k = 0; k < e; ++k) r *= p;
  return r;
}

/// Product of linear factors (t - r) for the given real roots; handy for building test families.
inline Poly from_linear_factors(std::span<const double> roots, double lead = 1.0) {
  Poly r = Poly::constant(lead);
  for (double x : roots) r *= Poly({-x, 1.0});
  return r;
}

/// sup_{[lo,hi]} |p| by dense sampling plus bisection on p' around sampled local maxima.
inline double sup_abs(const Poly& p, double lo, double hi, std::size_t samples = 4096) {
  if (p.is_zero()) return 0.0;
  if (p.degree() == 0) return std::abs(p.coeff(0));
  if (samples < 3) samples = 3;
  const Poly dp = p.derivative();
  std::vector<double> vals(samples);
  const double h = (hi - lo) / static_cast<double>(samples - 1);
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = i + 1 == samples ? hi : lo + h * static_cast<double>(i);
    vals[i] = std::abs(p(t));
  }
  double best = std::max(vals.front(), vals.back());
  for (std::size_t i = 1; i + 1 < samples; ++i) {
    best = std::max(best, vals[i]);
    if (vals[i] < vals[i - 1] || vals[i] < vals[i + 1]) continue;
    double a = lo + h * static_cast<double>(i - 1);
    double b = lo + h * static_cast<double>(i + 1);
    double fa = dp(a), fb = dp(b);
    if (fa == 0.0) {
      best = std::max(best, std::abs(p(a)));
      continue;
    }
    if (fb == 0.0 || (fa > 0) == (fb > 0)) {
      best = std::max(best, std::abs(p(b)));
      continue;
    }
    for (int it = 0; it < 80 && b - a > 0.0; ++it) {
      const double m = 0.5 * (a + b);
      if (m <= a || m >= b) break;
      const double fm = dp(m);
      if (fm == 0.0) {
        a = b = m;
        break;
      }
      if ((fm > 0) == (fa > 0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    best = std::max({best, std::abs(p(a)), std::abs(p(b))});
  }
  return best;
}

}  // namespace hyperlift
