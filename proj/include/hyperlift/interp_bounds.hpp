#pragma once

// Interpolation inequalities and the explicit quantities bounding the Lipschitz
// constant of a lift:
//
//   A1 = max{ delta^{-1} ||c_1||_{L^inf(I1)}^{1/2}, Lip_{I1}(c_1')^{1/2} }
//   A2 = max_i { M_i ||c_1||_{L^inf(I1)}^{(d - d_i)/2} }^{1/d},   M_i = Lip_{I1}(c_i^{(d-1)})
//   A0 = 6 max{A1, A2}
//
// where delta is the distance between the endpoints of I0 and those of I1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "curve.hpp"
#include "error.hpp"
#include "polynomial.hpp"

namespace hyperlift {

/// Samples of a function on a strictly increasing grid; derivative optional.
struct SampledFunction {
  std::vector<double> t;
  std::vector<double> f;
  std::vector<double> df;  // empty: estimated by finite differences
};

inline SampledFunction sample(const Poly& f, Interval I, std::size_t count) {
  SampledFunction s;
  s.t = uniform_grid(I, count);
  const Poly d = f.derivative();
  for (double t : s.t) {
    s.f.push_back(f(t));
    s.df.push_back(d(t));
  }
  return s;
}

namespace detail {

inline std::vector<double> fd_derivative(std::span<const double> t, std::span<const double> f) {
  const std::size_t N = t.size();
  std::vector<double> d(N, 0.0);
  if (N < 2) return d;
  for (std::size_t j = 0; j < N; ++j) {
    const std::size_t first = j == 0 ? 0 : (j + 1 == N ? N - std::min<std::size_t>(3, N) : j - 1);
    const std::size_t count = std::min<std::size_t>(3, N);
    const auto w = fd_weights(t.subspan(first, count), t[j], 1);
    for (std::size_t k = 0; k < count; ++k) d[j] += w[k] * f[first + k];
  }
  return d;
}

// Grid indices [lo, hi] covering [a, b], snapped outward; false if [a, b] leaves the grid.
inline bool snap_outward(std::span<const double> t, double a, double b, std::size_t& lo, std::size_t& hi) {
  if (a < t.front() || b > t.back()) return false;
  auto it = std::upper_bound(t.begin(), t.end(), a);
  lo = static_cast<std::size_t>(it - t.begin());
  lo = lo == 0 ? 0 : lo - 1;
  auto jt = std::lower_bound(t.begin(), t.end(), b);
  hi = static_cast<std::size_t>(jt - t.begin());
  if (hi >= t.size()) hi = t.size() - 1;
  return true;
}

}  // namespace detail

struct GlaeserResult {
  std::size_t checked = 0;
  /// Points whose window leaves the grid or where M^2 < Lip(f') on the window.
  std::size_t skipped = 0;
  std::size_t violations = 0;
  struct Worst {
    double t = 0.0;
    double lhs = 0.0;  // |f'(t)|
    double rhs = 0.0;  // 2 M f(t)^{1/2}
  } worst;
};

/// Checks |f'(t0)| <= 2 M f(t0)^{1/2} wherever the window |t - t0| < M^{-1} f(t0)^{1/2} lies in the grid.
inline GlaeserResult glaeser_check(const SampledFunction& fn, double M, double tol = 1e-9) {
  if (!(M > 0.0)) throw Error(ErrorKind::InvalidParameter, "Glaeser constant M must be positive");
  const std::size_t N = fn.t.size();
  if (N < 3 || fn.f.size() != N) throw Error(ErrorKind::InvalidInput, "need at least 3 samples");
  for (std::size_t j = 0; j < N; ++j)
    if (fn.f[j] < -tol) throw Error(ErrorKind::NotNonnegative, "function is negative", fn.t[j], fn.f[j]);
  const std::vector<double> df = fn.df.empty() ? detail::fd_derivative(fn.t, fn.f) : fn.df;
  GlaeserResult out;
  double worst_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j + 1 < N; ++j) {
    const double root = std::sqrt(std::max(fn.f[j], 0.0));
    const double r = root / M;
    std::size_t lo = 0, hi = 0;
    if (!detail::snap_outward(fn.t, fn.t[j] - r, fn.t[j] + r, lo, hi)) {
      ++out.skipped;
      continue;
    }
    double local_lip = 0.0;
    for (std::size_t k = lo; k < hi; ++k)
      local_lip = std::max(local_lip, std::abs(df[k + 1] - df[k]) / (fn.t[k + 1] - fn.t[k]));
    if (M * M < local_lip * (1.0 - 1e-9)) {
      ++out.skipped;
      continue;
    }
    ++out.checked;
    const double lhs = std::abs(df[j]);
    const double rhs = 2.0 * M * root;
    if (lhs > rhs + tol * (1.0 + rhs)) ++out.violations;
    if (lhs - rhs > worst_excess) {
      worst_excess = lhs - rhs;
      out.worst = {fn.t[j], lhs, rhs};
    }
  }
  return out;
}

struct LagrangeResult {
  bool holds = true;
  /// (2m)^{m+1} A B^{-j} - |a_j|, j = 0..m
  std::vector<double> margins;
  std::vector<double> bounds;
};

/// Coefficient bound for P(x) = sum a_j x^j with |P| <= A on [0, B]: |a_j| <= (2m)^{m+1} A B^{-j}.
/// Degree 0 is treated as m = 1 (the closed form degenerates to 0 there).
inline LagrangeResult lagrange_coeff_check(std::span<const double> coeffs, double A, double B,
                                           std::size_t samples = 4096) {
  if (coeffs.empty()) throw Error(ErrorKind::InvalidInput, "polynomial needs at least one coefficient");
  if (!(A >= 0.0) || !(B > 0.0)) throw Error(ErrorKind::InvalidParameter, "need A >= 0 and B > 0");
  const Poly P(std::vector<double>(coeffs.begin(), coeffs.end()));
  const double sup = sup_abs(P, 0.0, B, samples);
  if (sup > A * (1.0 + 1e-12) + 1e-300)
    throw Error(ErrorKind::InvalidParameter, "sup of |P| on [0, B] exceeds A");
  const std::size_t m = std::max<std::size_t>(coeffs.size() - 1, 1);
  const double lead = std::pow(2.0 * static_cast<double>(m), static_cast<double>(m + 1));
  LagrangeResult out;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    const double bound = lead * A * std::pow(B, -static_cast<double>(j));
    out.bounds.push_back(bound);
    out.margins.push_back(bound - std::abs(coeffs[j]));
    if (out.margins.back() < 0.0) out.holds = false;
  }
  return out;
}

struct TaylorResult {
  bool holds = true;
  /// C(m) = (2m)^{m+1} (m + 1)
  double constant = 0.0;
  /// Smallest C for which every checked inequality holds.
  double constant_estimate = 0.0;
};

inline double taylor_constant(int m) {
  return std::pow(2.0 * m, m + 1) * (m + 1);
}

/// |f^{(k)}(t)| <= C(m) |I|^{-k} (||f||_{L^inf(I)} + Lip_I(f^{(m-1)}) |I|^m), k = 1..m,
/// for component `component` of the curve on I.
inline TaylorResult taylor_derivative_check(const CoeffCurve& curve, std::size_t component, Interval I, int m,
                                            std::size_t samples = 4096) {
  if (m < 1) throw Error(ErrorKind::InvalidParameter, "order m must be >= 1");
  const auto s = seminorms(curve, I, m, samples)[component];
  const double len = I.length();
  const double rhs_core = s.sup() + s.lip * std::pow(len, m);
  TaylorResult out;
  out.constant = taylor_constant(m);
  for (int k = 1; k <= m; ++k) {
    // sup |f^{(m)}| coincides with Lip(f^{(m-1)})
    const double lhs = (k < m ? s.derivative_sups[static_cast<std::size_t>(k)] : s.lip) * std::pow(len, k);
    if (lhs == 0.0) continue;
    const double needed = rhs_core > 0.0 ? lhs / rhs_core : std::numeric_limits<double>::infinity();
    out.constant_estimate = std::max(out.constant_estimate, needed);
  }
  out.holds = out.constant_estimate <= out.constant * (1.0 + 1e-12);
  return out;
}

inline TaylorResult taylor_derivative_check(const Poly& f, Interval I, int m, std::size_t samples = 4096) {
  return taylor_derivative_check(CoeffCurve::polynomial({f}, I), 0, I, m, samples);
}

struct BoundReport {
  Interval I0;
  Interval I1;
  double delta = 0.0;
  int d = 0;
  /// Order-d seminorms of every component on I1.
  std::vector<SeminormEstimate> seminorms;
  /// M_i = Lip_{I1}(c_i^{(d-1)})
  std::vector<double> M;
  double A1 = 0.0;
  double A2 = 0.0;
  double A0 = 0.0;
  double bound_expr = 0.0;
  double alt_bound = 0.0;
  double empirical_lip = 0.0;
  double ratio = 0.0;
};

/// A1, A2, A0 for a curve in the dominant system (first component c_1 = p_2 >= 0) with I0 inside I1.
inline BoundReport compute_A(const CoeffCurve& dominant, Interval I0, Interval I1, std::size_t samples = 4096) {
  if (!(I0.lo < I0.hi) || !(I1.lo < I1.hi)) throw Error(ErrorKind::InvalidParameter, "empty interval");
  if (!dominant.interval().contains(I1))
    throw Error(ErrorKind::InvalidParameter, "I1 must lie inside the curve interval");
  BoundReport r;
  r.I0 = I0;
  r.I1 = I1;
  r.delta = std::min(I0.lo - I1.lo, I1.hi - I0.hi);
  if (!(r.delta > 0.0)) throw Error(ErrorKind::InvalidParameter, "I0 must be relatively compact in I1 (delta <= 0)");
  r.d = dominant.max_degree();
  r.seminorms = seminorms(dominant, I1, r.d, samples);
  const double c1_sup = r.seminorms[0].sup();
  // Lip(c_1') is the order-2 seminorm; for d = 2 it is already at hand.
  const double lip_c1_prime = r.d == 2 ? r.seminorms[0].lip : seminorms(dominant, I1, 2, samples)[0].lip;
  r.A1 = std::max(std::sqrt(c1_sup) / r.delta, std::sqrt(lip_c1_prime));
  double inner = 0.0;
  for (std::size_t i = 0; i < r.seminorms.size(); ++i) {
    r.M.push_back(r.seminorms[i].lip);
    const double expo = 0.5 * static_cast<double>(r.d - dominant.degrees()[i]);
    inner = std::max(inner, r.M.back() * std::pow(c1_sup, expo));
  }
  r.A2 = std::pow(inner, 1.0 / r.d);
  r.A0 = 6.0 * std::max(r.A1, r.A2);
  r.bound_expr = std::max(r.A1, r.A2);
  for (std::size_t i = 0; i < r.seminorms.size(); ++i)
    r.alt_bound = std::max(r.alt_bound, std::pow(r.seminorms[i].c_norm(), 1.0 / dominant.degrees()[i]));
  return r;
}

struct AssumptionReport {
  bool A1_ok = true;  // windows I_{t0}(1/A) inside I1
  bool A2_ok = true;  // 1/2 <= c_1(t)/c_1(t0) <= 2 on the windows
  bool A3_ok = true;  // |c_i^{(k)}| <= C A^k c_1^{(d_i - k)/d_1} with C <= max_constant
  std::size_t points_checked = 0;
  /// Worst max(c_1(t)/c_1(t0), c_1(t0)/c_1(t)) seen; the doubling assumption needs <= 2.
  double doubling_factor = 1.0;
  /// Smallest workable C in the derivative assumption.
  double derivative_constant = 0.0;
  double worst_A1_t0 = 0.0;
  double worst_A2_t0 = 0.0;
  double worst_A3_t0 = 0.0;
};

/// Diagnostic check of the window assumptions at every grid point t0 in I0 with c_1(t0) > tol.
/// Window containment snaps the window outward to the grid; the doubling and derivative checks
/// use the grid points inside the closed window together with its exact endpoints.
inline AssumptionReport verify_assumptions(const CoeffCurve& dominant, Interval I0, Interval I1, double A,
                                           std::size_t samples = 4096, double max_constant = 2.0,
                                           double tol = 1e-14) {
  if (!(A > 0.0)) throw Error(ErrorKind::InvalidParameter, "A must be positive");
  const auto grid = uniform_grid(I1, samples);
  const std::size_t n = static_cast<std::size_t>(dominant.n());
  const int d = dominant.max_degree();
  const double d1 = dominant.degrees()[0];
  std::vector<std::vector<Poly>> dpolys;
  if (dominant.is_polynomial())
    for (int k = 0; k <= d; ++k) {
      dpolys.emplace_back();
      for (const Poly& c : dominant.components()) dpolys.back().push_back(c.derivative(static_cast<std::size_t>(k)));
    }
  auto value = [&](int k, std::size_t i, double t) {
    return dominant.is_polynomial() ? dpolys[static_cast<std::size_t>(k)][i](t) : dominant.derivative(i, t, k);
  };
  // derivs[k][i][j] = c_i^{(k)}(grid[j])
  std::vector<std::vector<std::vector<double>>> derivs(
      static_cast<std::size_t>(d) + 1, std::vector<std::vector<double>>(n, std::vector<double>(grid.size())));
  for (int k = 0; k <= d; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < grid.size(); ++j) derivs[k][i][j] = value(k, i, grid[j]);
  const auto& c1 = derivs[0][0];

  AssumptionReport rep;
  double worst_factor = 1.0;
  auto inspect = [&](double t0, double c10, auto&& at) {
    const double c1t = at(0, 0);
    const double ratio = c1t / c10;
    const double factor = ratio > 0.0 ? std::max(ratio, 1.0 / ratio) : std::numeric_limits<double>::infinity();
    if (factor > worst_factor) {
      worst_factor = factor;
      rep.worst_A2_t0 = t0;
    }
    for (int k = 0; k <= d; ++k)
      for (std::size_t i = 0; i < n; ++i) {
        const double num = std::abs(at(k, i));
        if (num == 0.0) continue;
        const double den = std::pow(A, k) * std::pow(std::max(c1t, 0.0), (dominant.degrees()[i] - k) / d1);
        const double C = den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
        if (C > rep.derivative_constant) {
          rep.derivative_constant = C;
          rep.worst_A3_t0 = t0;
        }
      }
  };
  for (std::size_t j0 = 0; j0 < grid.size(); ++j0) {
    const double t0 = grid[j0];
    if (!I0.contains(t0) || !(c1[j0] > tol)) continue;
    ++rep.points_checked;
    const double r = std::sqrt(c1[j0]) / A;
    std::size_t lo = 0, hi = 0;
    if (!detail::snap_outward(grid, t0 - r, t0 + r, lo, hi) && rep.A1_ok) {
      rep.A1_ok = false;
      rep.worst_A1_t0 = t0;
    }
    const double a = std::max(t0 - r, I1.lo);
    const double b = std::min(t0 + r, I1.hi);
    const auto first = std::lower_bound(grid.begin(), grid.end(), a);
    const auto last = std::upper_bound(grid.begin(), grid.end(), b);
    for (auto it = first; it != last; ++it) {
      const std::size_t j = static_cast<std::size_t>(it - grid.begin());
      inspect(t0, c1[j0], [&](int k, std::size_t i) { return derivs[static_cast<std::size_t>(k)][i][j]; });
    }
    for (double t : {a, b}) inspect(t0, c1[j0], [&](int k, std::size_t i) { return value(k, i, t); });
  }
  rep.doubling_factor = worst_factor;
  rep.A2_ok = worst_factor <= 2.0 * (1.0 + 1e-12);
  rep.A3_ok = rep.derivative_constant <= max_constant;
  return rep;
}

}  // namespace hyperlift
