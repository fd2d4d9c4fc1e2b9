#pragma once

// Curves t -> (c_1(t), ..., c_n(t)) in the orbit space, either as polynomials in t
// or as samples on a strictly increasing grid (piecewise cubic Hermite in between).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "poly_core.hpp"
#include "polynomial.hpp"

namespace hyperlift {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double t) const { return t >= lo && t <= hi; }
  bool contains(const Interval& o) const { return o.lo >= lo && o.hi <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// count >= 2 points, endpoints exact, t_k = lo + (hi - lo) * k / (count - 1).
inline std::vector<double> uniform_grid(Interval I, std::size_t count) {
  if (count < 2) throw Error(ErrorKind::InvalidParameter, "grid needs at least 2 points");
  std::vector<double> g(count);
  const double span = I.hi - I.lo;
  const double denom = static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) g[k] = I.lo + span * static_cast<double>(k) / denom;
  g.back() = I.hi;
  return g;
}

/// Fornberg's finite-difference weights for the derivative of the given order at x0.
inline std::vector<double> fd_weights(std::span<const double> nodes, double x0, int order) {
  const int n = static_cast<int>(nodes.size()) - 1;
  const int m = order;
  // c[j][k]: weight of node j for derivative k
  std::vector<std::vector<double>> c(n + 1, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n + 1);
  for (int j = 0; j <= n; ++j) w[j] = c[j][m];
  return w;
}

class CoeffCurve {
 public:
  enum class Kind { Polynomial, Sampled };

  /// Components as polynomials in t. Empty degrees means the elementary symmetric system (1, ..., n).
  static CoeffCurve polynomial(std::vector<Poly> components, Interval interval, std::vector<int> degrees = {}) {
    CoeffCurve c;
    c.kind_ = Kind::Polynomial;
    c.interval_ = interval;
    c.polys_ = std::move(components);
    c.degrees_ = default_degrees(std::move(degrees), c.polys_.size());
    c.validate();
    c.precompute_centering();
    return c;
  }

  /// values[k] is the component vector at grid[k].
  static CoeffCurve sampled(std::vector<double> grid, std::vector<std::vector<double>> values, Interval interval,
                            std::vector<int> degrees = {}) {
    CoeffCurve c;
    c.kind_ = Kind::Sampled;
    c.interval_ = interval;
    c.grid_ = std::move(grid);
    c.values_ = std::move(values);
    const std::size_t n = c.values_.empty() ? 0 : c.values_.front().size();
    c.degrees_ = default_degrees(std::move(degrees), n);
    c.validate();
    c.precompute_slopes();
    return c;
  }

  Kind kind() const { return kind_; }
  bool is_polynomial() const { return kind_ == Kind::Polynomial; }
  int n() const { return static_cast<int>(degrees_.size()); }
  const std::vector<int>& degrees() const { return degrees_; }
  int max_degree() const { return degrees_.empty() ? 0 : *std::max_element(degrees_.begin(), degrees_.end()); }
  Interval interval() const { return interval_; }
  const std::vector<Poly>& components() const { return polys_; }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<std::vector<double>>& samples() const { return values_; }

  /// Degrees (1, ..., n): the components are elementary symmetric values of the roots.
  bool is_elementary() const {
    for (std::size_t i = 0; i < degrees_.size(); ++i)
      if (degrees_[i] != static_cast<int>(i) + 1) return false;
    return true;
  }

  std::vector<double> value(double t) const {
    check_domain(t);
    std::vector<double> v(degrees_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = component_value(i, t);
    return v;
  }

  /// k-th derivative of component i at t. Sampled curves use a local (k + 2)-point stencil.
  double derivative(std::size_t i, double t, int k) const {
    check_domain(t);
    if (k == 0) return component_value(i, t);
    if (kind_ == Kind::Polynomial) return polys_[i].derivative(static_cast<std::size_t>(k))(t);
    const auto [first, count] = stencil(t, static_cast<std::size_t>(k) + 2);
    std::vector<double> nodes(grid_.begin() + static_cast<std::ptrdiff_t>(first),
                              grid_.begin() + static_cast<std::ptrdiff_t>(first + count));
    const auto w = fd_weights(nodes, t, k);
    double acc = 0.0;
    for (std::size_t j = 0; j < count; ++j) acc += w[j] * values_[first + j][i];
    return acc;
  }

  /// Component values at t in extended precision; sampled curves are interpolated in double.
  std::vector<long double> value_extended(double t) const {
    check_domain(t);
    std::vector<long double> v(degrees_.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (kind_ != Kind::Polynomial) {
        v[i] = component_value(i, t);
        continue;
      }
      const auto& c = polys_[i].coeffs();
      long double acc = 0.0L;
      for (std::size_t k = c.size(); k-- > 0;) acc = acc * t + c[k];
      v[i] = acc;
    }
    return v;
  }

  /// (shift, centered elementary values): roots of the curve at t equal shift + roots(centered).
  std::pair<double, std::vector<double>> centered(double t) const {
    check_domain(t);
    if (kind_ == Kind::Polynomial) {
      std::vector<double> e(centered_polys_.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = centered_polys_[i](t);
      if (!e.empty()) e[0] = 0.0;
      return {shift_poly_(t), std::move(e)};
    }
    auto c = center(HyperbolicPoly(value(t)));
    return {c.shift, c.poly.elem()};
  }

  /// Centered elementary system as polynomials in t (polynomial curves only).
  const std::vector<Poly>& centered_components() const { return centered_polys_; }
  const Poly& shift_component() const { return shift_poly_; }

 private:
  static std::vector<int> default_degrees(std::vector<int> degrees, std::size_t n) {
    if (!degrees.empty()) return degrees;
    std::vector<int> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = static_cast<int>(i) + 1;
    return d;
  }

  void validate() const {
    if (!(interval_.lo < interval_.hi) || !std::isfinite(interval_.lo) || !std::isfinite(interval_.hi))
      throw Error(ErrorKind::InvalidInput, "curve interval must satisfy a < b");
    if (degrees_.empty()) throw Error(ErrorKind::InvalidInput, "curve needs at least one component");
    for (int d : degrees_)
      if (d < 1) throw Error(ErrorKind::InvalidInput, "invariant degrees must be positive");
    if (kind_ == Kind::Polynomial) {
      if (polys_.size() != degrees_.size())
        throw Error(ErrorKind::InvalidInput, "degrees and components differ in length");
      for (const auto& p : polys_)
        if (!detail::all_finite(p.coeffs())) throw Error(ErrorKind::InvalidInput, "non-finite coefficient");
      return;
    }
    if (grid_.size() < 2) throw Error(ErrorKind::InvalidInput, "sampled curve needs at least 2 grid points");
    if (grid_.size() != values_.size()) throw Error(ErrorKind::InvalidInput, "grid and values differ in length");
    for (std::size_t k = 0; k < grid_.size(); ++k) {
      if (!std::isfinite(grid_[k])) throw Error(ErrorKind::InvalidInput, "non-finite grid point");
      if (k > 0 && !(grid_[k] > grid_[k - 1])) throw Error(ErrorKind::InvalidInput, "grid must be strictly increasing");
      if (values_[k].size() != degrees_.size())
        throw Error(ErrorKind::InvalidInput, "sample has wrong number of components", grid_[k]);
      if (!detail::all_finite(values_[k])) throw Error(ErrorKind::InvalidInput, "non-finite sample", grid_[k]);
    }
    if (interval_.lo < grid_.front() || interval_.hi > grid_.back())
      throw Error(ErrorKind::InvalidInput, "interval exceeds the sampled grid");
  }

  void check_domain(double t) const {
    if (!interval_.contains(t)) throw Error(ErrorKind::Domain, "parameter outside curve interval", t);
  }

  void precompute_centering() {
    if (!is_elementary()) return;
    const std::size_t n = polys_.size();
    std::vector<Poly> monic(n + 1);
    monic[0] = Poly::constant(1.0);
    for (std::size_t j = 1; j <= n; ++j) monic[j] = (j % 2 == 1) ? -polys_[j - 1] : polys_[j - 1];
    shift_poly_ = polys_[0] * (1.0 / static_cast<double>(n));
    const auto shifted = taylor_shift<Poly>(monic, shift_poly_);
    centered_polys_.resize(n);
    for (std::size_t j = 1; j <= n; ++j) centered_polys_[j - 1] = (j % 2 == 1) ? -shifted[j] : shifted[j];
    centered_polys_[0] = Poly();
  }

  // Hermite slopes: three-point nonuniform centred differences, one-sided at the ends.
  void precompute_slopes() {
    const std::size_t N = grid_.size(), n = degrees_.size();
    slopes_.assign(N, std::vector<double>(n, 0.0));
    for (std::size_t k = 0; k < N; ++k) {
      const auto [first, count] = stencil(grid_[k], std::min<std::size_t>(3, N));
      std::vector<double> nodes(grid_.begin() + static_cast<std::ptrdiff_t>(first),
                                grid_.begin() + static_cast<std::ptrdiff_t>(first + count));
      const auto w = fd_weights(nodes, grid_[k], 1);
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < count; ++j) acc += w[j] * values_[first + j][i];
        slopes_[k][i] = acc;
      }
    }
  }

  // [first, first + count) window of grid indices nearest to t.
  std::pair<std::size_t, std::size_t> stencil(double t, std::size_t count) const {
    const std::size_t N = grid_.size();
    count = std::min(count, N);
    const auto it = std::lower_bound(grid_.begin(), grid_.end(), t);
    std::size_t centre = static_cast<std::size_t>(it - grid_.begin());
    if (centre == N) centre = N - 1;
    if (centre > 0 && std::abs(grid_[centre - 1] - t) < std::abs(grid_[centre] - t)) --centre;
    std::size_t first = centre >= count / 2 ? centre - count / 2 : 0;
    if (first + count > N) first = N - count;
    return {first, count};
  }

  double component_value(std::size_t i, double t) const {
    if (kind_ == Kind::Polynomial) return polys_[i](t);
    auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
    std::size_t k = it == grid_.begin() ? 0 : static_cast<std::size_t>(it - grid_.begin()) - 1;
    if (k + 1 >= grid_.size()) return values_.back()[i];
    const double h = grid_[k + 1] - grid_[k];
    const double s = (t - grid_[k]) / h;
    if (s == 0.0) return values_[k][i];
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return h00 * values_[k][i] + h10 * h * slopes_[k][i] + h01 * values_[k + 1][i] + h11 * h * slopes_[k + 1][i];
  }

  Kind kind_ = Kind::Polynomial;
  Interval interval_;
  std::vector<int> degrees_;
  std::vector<Poly> polys_;
  std::vector<Poly> centered_polys_;
  Poly shift_poly_;
  std::vector<double> grid_;
  std::vector<std::vector<double>> values_;
  std::vector<std::vector<double>> slopes_;
};

struct CurvePoint {
  std::vector<double> point;
  HyperbolicPoly poly;
};

/// c(t) together with its polynomial; throws NotHyperbolic (with t) outside the orbit space.
inline CurvePoint eval(const CoeffCurve& curve, double t, double tol = kHyperbolicTol) {
  if (!curve.is_elementary())
    throw Error(ErrorKind::InvalidInput, "eval expects elementary symmetric components (degrees 1..n)");
  CurvePoint out;
  out.point = curve.value(t);
  out.poly = HyperbolicPoly(out.point);
  const auto cert = is_hyperbolic(out.poly, tol);
  if (!cert.hyperbolic)
    throw Error(ErrorKind::NotHyperbolic, "curve leaves the hyperbolic polynomials", t, cert.witness);
  return out;
}

/// Sorted roots of the curve at t, computed from the centered polynomial and shifted back.
inline std::vector<double> roots_at(const CoeffCurve& curve, double t, double tol = kHyperbolicTol) {
  auto [shift, e] = curve.centered(t);
  const HyperbolicPoly q(std::move(e));
  std::vector<double> r;
  try {
    r = roots(q, tol).values();
  } catch (const Error& err) {
    throw Error(ErrorKind::NotHyperbolic, "curve leaves the hyperbolic polynomials", t, err.witness());
  }
  for (double& x : r) x += shift;
  // nearly coincident roots of polynomial curves are re-resolved from extended-precision
  // coefficients; the centered double coefficients only pin them to about sqrt(eps)
  if (curve.is_polynomial() && r.size() > 1) {
    double gap = std::numeric_limits<double>::infinity(), size = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      size = std::max(size, std::abs(r[i]));
      if (i > 0) gap = std::min(gap, r[i] - r[i - 1]);
    }
    if (gap <= 1e-2 * (1.0 + size)) {
      const auto e = curve.value_extended(t);
      std::vector<long double> monic(e.size() + 1);
      monic[0] = 1.0L;
      for (std::size_t j = 0; j < e.size(); ++j) monic[j + 1] = (j % 2 == 0) ? -e[j] : e[j];
      r = detail::polish_extended(monic, r);
    }
  }
  return r;
}

enum class SeminormMethod { ExactPolynomial, FiniteDifference };

struct SeminormEstimate {
  int component = 0;
  Interval K;
  /// sup |c_i^{(k)}| on K for k = 0..p-1; entry 0 is the L-infinity norm.
  std::vector<double> derivative_sups;
  /// Lip_K(c_i^{(p-1)})
  double lip = 0.0;
  SeminormMethod method = SeminormMethod::ExactPolynomial;
  /// Finite-difference methods: largest grid step inside K. Exact: 0.
  double step = 0.0;
  std::size_t samples = 0;

  double sup() const { return derivative_sups.empty() ? 0.0 : derivative_sups.front(); }
  /// ||c_i||_{C^{p-1,1}(K)} with the C^{p-1} part taken as the max over derivative orders.
  double c_norm() const {
    double m = 0.0;
    for (double v : derivative_sups) m = std::max(m, v);
    return m + lip;
  }
};

inline std::vector<SeminormEstimate> seminorms(const CoeffCurve& curve, Interval K, int p,
                                               std::size_t samples = 4096) {
  if (p < 1) throw Error(ErrorKind::InvalidParameter, "seminorm order must be >= 1");
  if (!(K.lo < K.hi) || !curve.interval().contains(K))
    throw Error(ErrorKind::Domain, "seminorm interval must lie inside the curve interval");
  std::vector<SeminormEstimate> out(static_cast<std::size_t>(curve.n()));
  if (curve.is_polynomial()) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      auto& s = out[i];
      s.component = static_cast<int>(i);
      s.K = K;
      s.method = SeminormMethod::ExactPolynomial;
      s.samples = samples;
      for (int k = 0; k < p; ++k)
        s.derivative_sups.push_back(sup_abs(curve.components()[i].derivative(static_cast<std::size_t>(k)), K.lo, K.hi, samples));
      s.lip = sup_abs(curve.components()[i].derivative(static_cast<std::size_t>(p)), K.lo, K.hi, samples);
    }
    return out;
  }
  std::vector<double> ts;
  for (double t : curve.grid())
    if (K.contains(t)) ts.push_back(t);
  if (ts.size() < static_cast<std::size_t>(p) + 2)
    throw Error(ErrorKind::InsufficientResolution,
                "need at least " + std::to_string(p + 2) + " samples in K, have " + std::to_string(ts.size()));
  double step = 0.0;
  for (std::size_t k = 1; k < ts.size(); ++k) step = std::max(step, ts[k] - ts[k - 1]);
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto& s = out[i];
    s.component = static_cast<int>(i);
    s.K = K;
    s.method = SeminormMethod::FiniteDifference;
    s.step = step;
    s.samples = ts.size();
    std::vector<double> top(ts.size());
    for (int k = 0; k < p; ++k) {
      double m = 0.0;
      for (std::size_t j = 0; j < ts.size(); ++j) {
        const double v = curve.derivative(i, ts[j], k);
        m = std::max(m, std::abs(v));
        if (k == p - 1) top[j] = v;
      }
      s.derivative_sups.push_back(m);
    }
    double lip = 0.0;
    for (std::size_t j = 1; j < ts.size(); ++j) lip = std::max(lip, std::abs(top[j] - top[j - 1]) / (ts[j] - ts[j - 1]));
    s.lip = lip;
  }
  return out;
}

/// Re-expresses an elementary symmetric curve in the centered dominant system
/// (p_2, e_2, ..., e_n) of the centered roots, degrees (2, 2, 3, ..., n).
/// For n = 1 the centered part is trivial and the result is the zero curve (p_2).
inline CoeffCurve dominant_system(const CoeffCurve& curve) {
  if (!curve.is_elementary())
    throw Error(ErrorKind::InvalidInput, "dominant_system expects elementary symmetric components");
  const int n = curve.n();
  std::vector<int> degrees{2};
  for (int i = 2; i <= n; ++i) degrees.push_back(i);
  if (curve.is_polynomial()) {
    const auto& cen = curve.centered_components();
    std::vector<Poly> comps;
    comps.push_back(n >= 2 ? cen[1] * -2.0 : Poly());
    for (int i = 2; i <= n; ++i) comps.push_back(cen[static_cast<std::size_t>(i - 1)]);
    return CoeffCurve::polynomial(std::move(comps), curve.interval(), std::move(degrees));
  }
  std::vector<std::vector<double>> values;
  values.reserve(curve.grid().size());
  for (const auto& sample : curve.samples()) {
    const auto e = center(HyperbolicPoly(sample)).poly.elem();
    std::vector<double> v{n >= 2 ? -2.0 * e[1] : 0.0};
    for (int i = 2; i <= n; ++i) v.push_back(e[static_cast<std::size_t>(i - 1)]);
    values.push_back(std::move(v));
  }
  return CoeffCurve::sampled(curve.grid(), std::move(values), curve.interval(), std::move(degrees));
}

/// The curve of the roots scaled by lambda: c_i -> lambda^{d_i} c_i.
inline CoeffCurve scale_roots(const CoeffCurve& curve, double lambda) {
  std::vector<double> factors;
  for (int d : curve.degrees()) factors.push_back(std::pow(lambda, d));
  if (curve.is_polynomial()) {
    std::vector<Poly> comps;
    for (std::size_t i = 0; i < factors.size(); ++i) comps.push_back(curve.components()[i] * factors[i]);
    return CoeffCurve::polynomial(std::move(comps), curve.interval(), curve.degrees());
  }
  auto values = curve.samples();
  for (auto& v : values)
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= factors[i];
  return CoeffCurve::sampled(curve.grid(), std::move(values), curve.interval(), curve.degrees());
}

/// max over samples and j >= 2 of |c_j|^{1/d_j} / (1 + c_1^{1/2}) for a curve in the dominant system.
inline double dominance_check(const CoeffCurve& curve, std::span<const double> ts, double tol = 1e-12) {
  double worst = 0.0;
  for (double t : ts) {
    const auto v = curve.value(t);
    if (v[0] < -tol) throw Error(ErrorKind::NotInOrbitSpace, "dominant invariant is negative", t, v[0]);
    const double denom = 1.0 + std::sqrt(std::max(v[0], 0.0));
    for (std::size_t j = 1; j < v.size(); ++j)
      worst = std::max(worst, std::pow(std::abs(v[j]), 1.0 / curve.degrees()[j]) / denom);
  }
  return worst;
}

inline double dominance_check(const CoeffCurve& curve, std::size_t samples = 4096, double tol = 1e-12) {
  const auto ts = uniform_grid(curve.interval(), samples);
  return dominance_check(curve, std::span<const double>(ts), tol);
}

}  // namespace hyperlift
