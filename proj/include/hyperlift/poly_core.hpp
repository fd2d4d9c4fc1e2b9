#pragma once

// Hyperbolic polynomials: the Vieta map between root multisets and elementary
// symmetric values, hyperbolicity certificates, centering, and power sums.
//
// Convention: a polynomial is carried as its elementary symmetric vector
// e = (e_1, ..., e_n); the monic coefficients are a_j = (-1)^j e_j, i.e.
// P(z) = z^n + a_1 z^{n-1} + ... + a_n.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"

namespace hyperlift {

inline constexpr double kHyperbolicTol = 1e-9;

/// A sorted multiset of real roots.
class RootMultiset {
 public:
  RootMultiset() = default;
  explicit RootMultiset(std::vector<double> values) : values_(std::move(values)) {
    std::sort(values_.begin(), values_.end());
  }

  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const& { return values_; }
  std::vector<double> values() && { return std::move(values_); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

class HyperbolicPoly {
 public:
  HyperbolicPoly() = default;
  explicit HyperbolicPoly(std::vector<double> elem) : elem_(std::move(elem)) {}

  int degree() const { return static_cast<int>(elem_.size()); }
  const std::vector<double>& elem() const { return elem_; }

  /// Monic coefficients (1, a_1, ..., a_n) in descending powers of z.
  std::vector<double> monic_coeffs() const {
    std::vector<double> a(elem_.size() + 1);
    a[0] = 1.0;
    for (std::size_t j = 0; j < elem_.size(); ++j) a[j + 1] = (j % 2 == 0) ? -elem_[j] : elem_[j];
    return a;
  }

  /// max(1, max_j |a_j|)
  double scale() const {
    double s = 1.0;
    for (double v : elem_) s = std::max(s, std::abs(v));
    return s;
  }

  double operator()(double z) const {
    const auto a = monic_coeffs();
    double acc = 0.0;
    for (double c : a) acc = acc * z + c;
    return acc;
  }

 private:
  std::vector<double> elem_;
};

namespace detail {

inline bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

/// Elementary symmetric values of already-sorted roots, accumulated left to right.
inline std::vector<double> elementary_of_sorted(std::span<const double> sorted) {
  const std::size_t n = sorted.size();
  std::vector<double> e(n + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double r = sorted[k];
    for (std::size_t i = k + 1; i >= 1; --i) e[i] += r * e[i - 1];
  }
  e.erase(e.begin());
  return e;
}

// Horner on descending coefficients, value and first derivative together.
inline std::pair<double, double> horner2(std::span<const double> q, double x) {
  double p = q[0], dp = 0.0;
  for (std::size_t j = 1; j < q.size(); ++j) {
    dp = dp * x + p;
    p = p * x + q[j];
  }
  return {p, dp};
}

// One root of the monic polynomial q inside [lo, hi]. Safeguarded Newton; when q
// does not change sign on the bracket the endpoint of smaller |q| is returned
// (tangency, or a double root split into a complex pair by rounding).
inline double bracketed_root(std::span<const double> q, double lo, double hi) {
  if (!(lo < hi)) return lo;
  double flo = horner2(q, lo).first;
  double fhi = horner2(q, hi).first;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) return std::abs(flo) <= std::abs(fhi) ? lo : hi;
  if (flo > 0) std::swap(lo, hi);  // orient so q(lo) < 0 < q(hi)
  double x = 0.5 * (lo + hi);
  double dx_old = std::abs(hi - lo);
  double dx = dx_old;
  auto [f, df] = horner2(q, x);
  if (f == 0.0) return x;
  if (f < 0.0) lo = x; else hi = x;
  for (int it = 0; it < 200; ++it) {
    const bool newton_leaves = ((x - hi) * df - f) * ((x - lo) * df - f) > 0.0;
    if (newton_leaves || std::abs(2.0 * f) > std::abs(dx_old * df)) {
      dx_old = dx;
      dx = 0.5 * (hi - lo);
      const double nx = lo + dx;
      if (nx == x || nx == lo || nx == hi) return x;
      x = nx;
    } else {
      dx_old = dx;
      dx = f / df;
      const double nx = x - dx;
      if (nx == x) return x;
      x = nx;
    }
    std::tie(f, df) = horner2(q, x);
    if (f == 0.0) return x;
    if (f < 0.0) lo = x; else hi = x;
    if (std::abs(hi - lo) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi)))
      return x;
  }
  return x;
}

/// Real roots of a monic polynomial assumed (near-)hyperbolic, via derivative interlacing:
/// the critical points of a hyperbolic polynomial separate its roots.
inline std::vector<double> interlacing_roots(std::span<const double> monic) {
  const std::size_t n = monic.size() - 1;
  if (n == 0) return {};
  // chain[m] holds the monic degree-m normalized derivative of P.
  std::vector<std::vector<double>> chain(n + 1);
  chain[n].assign(monic.begin(), monic.end());
  for (std::size_t m = n; m >= 2; --m) {
    const auto& q = chain[m];
    std::vector<double> d(m);
    for (std::size_t j = 0; j < m; ++j) d[j] = q[j] * static_cast<double>(m - j) / static_cast<double>(m);
    chain[m - 1] = std::move(d);
  }
  std::vector<double> crit{-chain[1][1]};
  crit.reserve(n);
  if (n >= 2) {
    // z^2 + b z + c: closed form, with a negative discriminant projected to the double root
    const double b = chain[2][1], c = chain[2][2];
    const double mean = -0.5 * b;
    const double disc = mean * mean - c;
    if (disc <= 0.0) {
      crit = {mean, mean};
    } else {
      const double big = mean + std::copysign(std::sqrt(disc), mean);
      const double small = big != 0.0 ? c / big : 0.0;
      crit = {std::min(big, small), std::max(big, small)};
    }
  }
  for (std::size_t m = 3; m <= n; ++m) {
    const auto& q = chain[m];
    const double dm = static_cast<double>(m);
    const double mean = -q[1] / dm;
    // Laguerre-Samuelson: roots lie within mean +- sqrt(m-1) * stddev.
    const double p2 = q[1] * q[1] - 2.0 * q[2];
    const double var = std::max(0.0, p2 / dm - mean * mean);
    double radius = std::sqrt(var * (dm - 1.0));
    radius = radius * (1.0 + 1e-10) + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(mean);
    double lo = std::min(mean - radius, crit.front());
    double hi = std::max(mean + radius, crit.back());
    // Widen if rounding left a root outside the bound.
    const double sign_lo = (m % 2 == 0) ? 1.0 : -1.0;
    for (int k = 0; k < 60 && horner2(q, lo).first * sign_lo < 0.0; ++k)
      lo -= (radius + 1.0) * std::ldexp(1.0, k);
    for (int k = 0; k < 60 && horner2(q, hi).first < 0.0; ++k) hi += (radius + 1.0) * std::ldexp(1.0, k);
    std::vector<double> r(m);
    for (std::size_t k = 0; k < m; ++k) {
      const double a = k == 0 ? lo : crit[k - 1];
      const double b = k + 1 == m ? hi : crit[k];
      r[k] = bracketed_root(q, a, b);
    }
    std::sort(r.begin(), r.end());
    crit = std::move(r);
  }
  return crit;
}

inline double max_coeff_deviation(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

/// Max |imaginary part| over all complex roots (companion-matrix eigenvalues).
inline double max_imaginary_part(const HyperbolicPoly& p) {
  const int n = p.degree();
  if (n <= 1) return 0.0;
  const auto a = p.monic_coeffs();
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) comp(0, j) = -a[j + 1];
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  double m = 0.0;
  for (int i = 0; i < n; ++i) m = std::max(m, std::abs(es.eigenvalues()[i].imag()));
  return m;
}

}  // namespace detail

/// Vieta map: roots -> elementary symmetric values. Permutation invariant bit-for-bit.
inline HyperbolicPoly from_roots(std::span<const double> roots) {
  if (!detail::all_finite(roots)) throw Error(ErrorKind::InvalidInput, "non-finite root");
  std::vector<double> sorted(roots.begin(), roots.end());
  std::sort(sorted.begin(), sorted.end());
  return HyperbolicPoly(detail::elementary_of_sorted(sorted));
}

inline HyperbolicPoly from_roots(const RootMultiset& r) { return from_roots(std::span<const double>(r.values())); }

struct HyperbolicityCertificate {
  bool hyperbolic = false;
  /// Largest imaginary magnitude among the complex roots.
  double witness = 0.0;
  /// max_j |e_j - e_j(real projection)| / scale
  double residual = 0.0;
};

namespace detail {

struct RootAttempt {
  std::vector<double> roots;
  double residual = 0.0;  // relative to scale
};

// One Gauss-Seidel sweep of the Aberth-Ehrlich correction on real approximations,
// evaluated in extended precision: near clusters the double-precision Horner
// residual is pure rounding noise. Updates that would cross a neighbour are skipped.
inline void aberth_sweep(std::span<const double> monic, std::vector<double>& z) {
  const std::size_t n = z.size();
  for (std::size_t k = 0; k < n; ++k) {
    long double f = monic[0], df = 0.0L;
    const long double x = z[k];
    for (std::size_t j = 1; j < monic.size(); ++j) {
      df = df * x + f;
      f = f * x + monic[j];
    }
    if (f == 0.0L || df == 0.0L) continue;
    const long double w = f / df;
    long double s = 0.0L;
    bool coincident = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == k) continue;
      const long double d = x - static_cast<long double>(z[j]);
      if (d == 0.0L) {
        coincident = true;
        break;
      }
      s += 1.0L / d;
    }
    if (coincident) continue;
    const double nz = static_cast<double>(x - w / (1.0L - w * s));
    if (!std::isfinite(nz)) continue;
    if (k > 0 && nz < z[k - 1]) continue;
    if (k + 1 < n && nz > z[k + 1]) continue;
    z[k] = nz;
  }
}

// Aberth sweeps entirely in extended precision against extended-precision monic
// coefficients. Resolves nearly coincident roots well below the double-precision noise
// floor when the coefficients themselves are known to extended precision.
inline std::vector<double> polish_extended(std::span<const long double> monic, std::span<const double> start,
                                           int sweeps = 8) {
  const std::size_t n = start.size();
  std::vector<long double> z(start.begin(), start.end());
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    bool moved = false;
    for (std::size_t k = 0; k < n; ++k) {
      long double f = monic[0], df = 0.0L;
      const long double x = z[k];
      for (std::size_t j = 1; j < monic.size(); ++j) {
        df = df * x + f;
        f = f * x + monic[j];
      }
      if (f == 0.0L || df == 0.0L) continue;
      const long double w = f / df;
      long double s = 0.0L;
      bool coincident = false;
      for (std::size_t j = 0; j < n && !coincident; ++j) {
        if (j == k) continue;
        const long double d = x - z[j];
        if (d == 0.0L) coincident = true;
        else s += 1.0L / d;
      }
      if (coincident) continue;
      const long double nz = x - w / (1.0L - w * s);
      if (!std::isfinite(static_cast<double>(nz))) continue;
      if (k > 0 && nz < z[k - 1]) continue;
      if (k + 1 < n && nz > z[k + 1]) continue;
      moved = moved || nz != x;
      z[k] = nz;
    }
    if (!moved) break;
  }
  std::vector<double> out(z.begin(), z.end());
  std::sort(out.begin(), out.end());
  return out;
}

// Backward error at which polishing stops. A double root moves by about the square root
// of the coefficient error, so anything looser shows up as a spurious gap between
// colliding branches.
inline constexpr double kPolishTarget = 1e-15;

// Interlacing roots followed by residual-guarded Aberth sweeps.
inline RootAttempt polished_roots(const HyperbolicPoly& p) {
  RootAttempt out;
  const auto a = p.monic_coeffs();
  const double scale = p.scale();
  out.roots = interlacing_roots(a);
  out.residual = max_coeff_deviation(elementary_of_sorted(out.roots), p.elem()) / scale;
  // Clustered roots found one at a time need not form a backward-stable multiset;
  // simultaneous Aberth sweeps restore consistency. Kept only when the residual drops.
  for (int sweep = 0; sweep < 4 && out.residual > kPolishTarget; ++sweep) {
    std::vector<double> z = out.roots;
    aberth_sweep(a, z);
    const double res = max_coeff_deviation(elementary_of_sorted(z), p.elem()) / scale;
    if (!(res < out.residual)) break;
    out.roots = std::move(z);
    out.residual = res;
  }
  return out;
}

// Elementary symmetric values (with e_0 = 1) of r, leaving out index `skip`.
inline std::vector<long double> elementary_ld(std::span<const long double> r, std::size_t skip) {
  std::vector<long double> e(r.size() + 1, 0.0L);
  e[0] = 1.0L;
  std::size_t k = 0;
  for (std::size_t j = 0; j < r.size(); ++j) {
    if (j == skip) continue;
    ++k;
    for (std::size_t i = k; i >= 1; --i) e[i] += r[j] * e[i - 1];
  }
  return e;
}

// Levenberg-Marquardt on the Vieta map in root space. Near a cluster the rounded
// coefficients usually have complex roots of size eps^{1/m}, and projecting those to the
// real axis costs eps^{2/m}; fitting real roots to the coefficients directly does not.
inline RootAttempt vieta_fit(const HyperbolicPoly& p, std::span<const double> start) {
  using Vec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const std::size_t n = start.size();
  const auto& target = p.elem();
  const long double scale = p.scale();
  std::vector<long double> r(start.begin(), start.end());
  auto residual = [&](std::span<const long double> x) {
    const auto e = elementary_ld(x, x.size());
    Vec f(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) f[static_cast<Eigen::Index>(i)] = (e[i + 1] - target[i]) / scale;
    return f;
  };
  Vec f = residual(r);
  long double cost = f.squaredNorm();
  long double mu = 1e-3L;
  for (int it = 0; it < 100 && cost > 1e-34L; ++it) {
    Mat J(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
      const auto e = elementary_ld(r, j);
      for (std::size_t i = 0; i < n; ++i)
        J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = e[i] / scale;
    }
    const Mat A = J.transpose() * J;
    const Vec g = J.transpose() * f;
    bool improved = false;
    for (int tries = 0; tries < 20 && !improved; ++tries) {
      Mat M = A;
      for (Eigen::Index i = 0; i < M.rows(); ++i) M(i, i) += mu * (A(i, i) + 1e-30L);
      const Vec d = M.ldlt().solve(-g);
      std::vector<long double> rn(n);
      for (std::size_t i = 0; i < n; ++i) rn[i] = r[i] + d[static_cast<Eigen::Index>(i)];
      const Vec fn = residual(rn);
      const long double cn = fn.squaredNorm();
      if (cn < cost) {
        r = std::move(rn);
        f = fn;
        cost = cn;
        mu = std::max(mu * 0.1L, 1e-12L);
        improved = true;
      } else {
        mu *= 10.0L;
      }
    }
    if (!improved) break;
  }
  RootAttempt out;
  out.roots.assign(r.begin(), r.end());
  std::sort(out.roots.begin(), out.roots.end());
  out.residual = max_coeff_deviation(elementary_of_sorted(out.roots), target) / p.scale();
  return out;
}

inline RootAttempt attempt_roots(const HyperbolicPoly& p) {
  if (p.degree() == 0) return {};
  auto out = polished_roots(p);
  if (out.residual <= kPolishTarget) return out;
  auto fit = vieta_fit(p, out.roots);
  if (fit.residual < out.residual) out = std::move(fit);
  return out;
}

}  // namespace detail

/// Hyperbolic iff the real-projected root multiset reproduces the coefficients to
/// within tol * scale(p). A complex pair x +- iy sits at coefficient distance ~ y^2
/// from the double real root x, so this is the backward-error form of the test.
inline HyperbolicityCertificate is_hyperbolic(const HyperbolicPoly& p, double tol = kHyperbolicTol) {
  if (!detail::all_finite(p.elem())) throw Error(ErrorKind::InvalidInput, "non-finite coefficient");
  HyperbolicityCertificate cert;
  const auto attempt = detail::attempt_roots(p);
  cert.residual = attempt.residual;
  cert.hyperbolic = attempt.residual <= tol;
  cert.witness = detail::max_imaginary_part(p);
  return cert;
}

/// Sorted real roots; throws NotHyperbolic when the certificate fails.
inline RootMultiset roots(const HyperbolicPoly& p, double tol = kHyperbolicTol) {
  if (!detail::all_finite(p.elem())) throw Error(ErrorKind::InvalidInput, "non-finite coefficient");
  auto attempt = detail::attempt_roots(p);
  if (attempt.residual > tol) {
    const double w = detail::max_imaginary_part(p);
    throw Error(ErrorKind::NotHyperbolic,
                "polynomial has non-real roots (max |Im| = " + std::to_string(w) + ")", std::nullopt, w);
  }
  return RootMultiset(std::move(attempt.roots));
}

/// Taylor shift of monic descending coefficients: returns coefficients of P(z + s).
/// Works for any ring-like T (double, Poly).
template <class T>
std::vector<T> taylor_shift(std::span<const T> monic, const T& s) {
  const std::size_t n = monic.size() - 1;
  std::vector<T> out(n + 1);
  // coefficient of z^{n-j} in sum_i a_i (z + s)^{n-i} is sum_{i<=j} a_i C(n-i, j-i) s^{j-i}
  std::vector<T> spow;
  spow.reserve(n + 1);
  spow.push_back(T{1.0});
  for (std::size_t k = 1; k <= n; ++k) spow.push_back(spow.back() * s);
  for (std::size_t j = 0; j <= n; ++j) {
    T acc{};
    for (std::size_t i = 0; i <= j; ++i) {
      double binom = 1.0;
      const std::size_t top = n - i, k = j - i;
      for (std::size_t r = 1; r <= k; ++r) binom = binom * static_cast<double>(top - k + r) / static_cast<double>(r);
      acc = acc + monic[i] * spow[k] * binom;
    }
    out[j] = acc;
  }
  return out;
}

struct Centered {
  double shift = 0.0;
  HyperbolicPoly poly;
};

/// Removes the diagonal (fixed-point) component: shift = e_1 / n, roots of the result are r_k - shift.
inline Centered center(const HyperbolicPoly& p) {
  const int n = p.degree();
  if (n == 0) return {0.0, p};
  const double shift = p.elem()[0] / n;
  const auto a = p.monic_coeffs();
  const auto shifted = taylor_shift<double>(a, shift);
  std::vector<double> e(n);
  for (int j = 1; j <= n; ++j) e[j - 1] = (j % 2 == 1) ? -shifted[j] : shifted[j];
  e[0] = 0.0;
  return {shift, HyperbolicPoly(std::move(e))};
}

/// Newton's identities: elementary symmetric values -> power sums p_1..p_n.
inline std::vector<double> power_sums(std::span<const double> e) {
  const std::size_t n = e.size();
  std::vector<double> p(n);
  for (std::size_t k = 1; k <= n; ++k) {
    double acc = 0.0;
    double sign = 1.0;
    for (std::size_t i = 1; i < k; ++i) {
      acc += sign * e[i - 1] * p[k - i - 1];
      sign = -sign;
    }
    acc += sign * static_cast<double>(k) * e[k - 1];
    p[k - 1] = acc;
  }
  return p;
}

/// Inverse of power_sums.
inline std::vector<double> elementary_from_power_sums(std::span<const double> p) {
  const std::size_t n = p.size();
  std::vector<double> e(n + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    double acc = 0.0;
    double sign = 1.0;
    for (std::size_t i = 1; i <= k; ++i) {
      acc += sign * e[k - i] * p[i - 1];
      sign = -sign;
    }
    e[k] = acc / static_cast<double>(k);
  }
  e.erase(e.begin());
  return e;
}

}  // namespace hyperlift
