#pragma once

// Eigenvalue curves of symmetric matrices and Lipschitz square roots of nonnegative functions.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "curve.hpp"
#include "error.hpp"
#include "lifting.hpp"
#include "parallel.hpp"
#include "polynomial.hpp"

namespace hyperlift {

inline constexpr int kMaxCharpolySize = 64;

/// t -> A(t), a symmetric matrix of polynomials in t.
struct SymMatrixCurve {
  int m = 0;
  Interval interval;
  /// entries[i][j], symmetric
  std::vector<std::vector<Poly>> entries;

  void validate() const {
    if (m < 1) throw Error(ErrorKind::InvalidInput, "matrix dimension must be >= 1");
    if (!(interval.lo < interval.hi)) throw Error(ErrorKind::InvalidInput, "interval must satisfy a < b");
    if (entries.size() != static_cast<std::size_t>(m))
      throw Error(ErrorKind::InvalidInput, "entries must have m rows");
    for (int i = 0; i < m; ++i) {
      if (entries[static_cast<std::size_t>(i)].size() != static_cast<std::size_t>(m))
        throw Error(ErrorKind::InvalidInput, "entries must have m columns");
      for (int j = 0; j < m; ++j) {
        const auto& a = entry(i, j);
        for (double c : a.coeffs())
          if (!std::isfinite(c)) throw Error(ErrorKind::InvalidInput, "non-finite matrix coefficient");
        if (a.coeffs() != entry(j, i).coeffs()) {
          char buf[96];
          std::snprintf(buf, sizeof buf, "matrix is not symmetric at entry (%d, %d)", i, j);
          throw Error(ErrorKind::InvalidInput, buf);
        }
      }
    }
  }

  const Poly& entry(int i, int j) const {
    return entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }

  Eigen::MatrixXd at(double t, int derivative = 0) const {
    Eigen::MatrixXd A(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        A(i, j) = derivative == 0 ? entry(i, j)(t) : entry(i, j).derivative(static_cast<std::size_t>(derivative))(t);
    return A;
  }
};

/// Characteristic coefficients t -> (Sigma_1(A(t)), ..., Sigma_m(A(t))) as exact polynomial
/// components, by the Faddeev-LeVerrier recursion on polynomial matrices.
inline CoeffCurve charpoly_curve(const SymMatrixCurve& A) {
  A.validate();
  if (A.m > kMaxCharpolySize)
    throw Error(ErrorKind::InvalidParameter, "characteristic coefficients are limited to m <= 64");
  const std::size_t m = static_cast<std::size_t>(A.m);
  using PMat = std::vector<std::vector<Poly>>;
  auto mul = [&](const PMat& X, const PMat& Y) {
    PMat Z(m, std::vector<Poly>(m));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < m; ++k) {
        if (X[i][k].is_zero()) continue;
        for (std::size_t j = 0; j < m; ++j)
          if (!Y[k][j].is_zero()) Z[i][j] += X[i][k] * Y[k][j];
      }
    return Z;
  };
  // M_1 = I, c_k = -tr(A M_k) / k, M_{k+1} = A M_k + c_k I; char poly z^m + c_1 z^{m-1} + ...
  PMat M(m, std::vector<Poly>(m));
  for (std::size_t i = 0; i < m; ++i) M[i][i] = Poly::constant(1.0);
  std::vector<Poly> e(m);
  for (std::size_t k = 1; k <= m; ++k) {
    const PMat AM = mul(A.entries, M);
    Poly tr;
    for (std::size_t i = 0; i < m; ++i) tr += AM[i][i];
    const Poly c = tr * (-1.0 / static_cast<double>(k));
    e[k - 1] = (k % 2 == 0) ? c : -c;
    if (k == m) break;
    M = AM;
    for (std::size_t i = 0; i < m; ++i) M[i][i] += c;
  }
  return CoeffCurve::polynomial(std::move(e), A.interval);
}

/// Sorted eigenvalues of A(t) from a direct symmetric eigensolver.
inline std::vector<double> direct_eigenvalues(const SymMatrixCurve& A, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A.at(t), Eigen::EigenvaluesOnly);
  const auto& v = es.eigenvalues();
  std::vector<double> out(v.data(), v.data() + v.size());
  std::sort(out.begin(), out.end());
  return out;
}

inline double spectral_norm(const Eigen::MatrixXd& S) {
  if (S.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

struct EigenLift {
  LiftResult lift;
  /// max over the lift grid of ||A'(t)||_2
  double weyl_bound = 0.0;
  bool weyl_ok = true;
};

/// Sorted eigenvalue lift through the characteristic coefficients, checked against the
/// Weyl perturbation bound |lambda_i(A) - lambda_i(B)| <= ||A - B||_2.
inline EigenLift eigen_lift(const SymMatrixCurve& A, std::size_t grid_size, const LiftOptions& opt = {}) {
  EigenLift out;
  out.lift = lift_sorted(charpoly_curve(A), grid_size, opt);
  std::vector<double> norms(out.lift.grid.size());
  parallel_for(norms.size(), [&](std::size_t k) { norms[k] = spectral_norm(A.at(out.lift.grid[k], 1)); });
  for (double v : norms) out.weyl_bound = std::max(out.weyl_bound, v);
  out.weyl_ok = out.lift.empirical_lip <= out.weyl_bound * (1.0 + 1e-6) + 1e-12;
  if (!out.weyl_ok) out.lift.warnings.emplace_back("empirical Lipschitz constant exceeds the Weyl bound");
  return out;
}

// ---------------------------------------------------------------------------
// Square roots

/// f = sum of squares of the given polynomials, as a one-component curve.
inline CoeffCurve sum_of_squares(const std::vector<Poly>& squares, Interval I) {
  if (squares.empty()) throw Error(ErrorKind::InvalidInput, "need at least one square");
  Poly f;
  for (const auto& q : squares) f += q * q;
  return CoeffCurve::polynomial({f}, I, {2});
}

struct SqrtOptions {
  /// f below -tol * (1 + |f|) is rejected
  double tol = 1e-10;
  /// f below zero_tol * (1 + |f|) counts as zero
  double zero_tol = 1e-12;
  /// a flip is taken only when it beats keeping the sign by tie_tol * (1 + max|slope|)
  double tie_tol = 1e-4;
  std::size_t seminorm_samples = 4096;
};

struct SignedSqrtLift {
  std::vector<double> grid;
  std::vector<double> g;
  std::vector<double> flips;
  double empirical_lip = 0.0;
  double max_jump = 0.0;
  /// max |g^2 - f| over the grid
  double residual = 0.0;
  /// sqrt(Lip(f'))
  double M = 0.0;
  bool lip_ok = true;
};

/// g = s * sqrt(f) with a sign s that changes only at isolated zeros of f, flipping where that
/// makes the one-sided derivatives of g agree (ties keep the sign). Normalized to g >= 0 on
/// the last segment.
inline SignedSqrtLift sqrt_lift(const CoeffCurve& f, std::size_t grid_size, const SqrtOptions& opt = {}) {
  if (f.n() != 1) throw Error(ErrorKind::InvalidInput, "sqrt_lift expects a single scalar function");
  if (grid_size < 5) throw Error(ErrorKind::InsufficientResolution, "sqrt_lift needs at least 5 grid points");
  const Interval I = f.interval();
  SignedSqrtLift out;
  out.grid = uniform_grid(I, grid_size);
  const std::size_t N = out.grid.size();
  std::vector<double> fv(N);
  for (std::size_t k = 0; k < N; ++k) fv[k] = f.value(out.grid[k])[0];
  double fmax = 0.0;
  for (double v : fv) fmax = std::max(fmax, std::abs(v));
  const double scale = 1.0 + fmax;
  for (std::size_t k = 0; k < N; ++k)
    if (fv[k] < -opt.tol * scale)
      throw Error(ErrorKind::NotNonnegative, "function is negative", out.grid[k], fv[k]);
  const double h = I.length() / static_cast<double>(N - 1);
  auto root = [&](double t) { return std::sqrt(std::max(f.value(t)[0], 0.0)); };
  std::vector<double> r(N);
  for (std::size_t k = 0; k < N; ++k) r[k] = std::sqrt(std::max(fv[k], 0.0));

  // zero sites: runs of grid points below the zero threshold, and V-shaped minima of sqrt(f)
  struct Site {
    double lo, hi;  // extent of the zero set
  };
  std::vector<Site> sites;
  const double zthr = opt.zero_tol * scale;
  for (std::size_t k = 0; k < N;) {
    if (fv[k] <= zthr) {
      std::size_t j = k;
      while (j + 1 < N && fv[j + 1] <= zthr) ++j;
      if (j - k <= 4) {
        // a short run is a numerically widened isolated zero
        const double a = out.grid[k > 0 ? k - 1 : 0], b = out.grid[j + 1 < N ? j + 1 : N - 1];
        const double ts = detail::golden_min(root, a, b);
        sites.push_back({ts, ts});
      } else {
        sites.push_back({out.grid[k], out.grid[j]});
      }
      k = j + 1;
      continue;
    }
    const bool interior = k > 0 && k + 1 < N;
    if (interior && r[k] <= r[k - 1] && r[k] <= r[k + 1] && fv[k - 1] > zthr && fv[k + 1] > zthr) {
      const double slope = std::max(r[k - 1] - r[k], r[k + 1] - r[k]);
      if (r[k] <= slope) {
        const double ts = detail::golden_min(root, out.grid[k - 1], out.grid[k + 1]);
        if (f.value(ts)[0] <= zthr) sites.push_back({ts, ts});
      }
    }
    ++k;
  }

  // sign per grid point
  std::vector<double> sign(N, 1.0);
  double s = 1.0;
  std::size_t next = 0;
  for (const auto& site : sites) {
    const double dl = site.lo - I.lo, dr = I.hi - site.hi;
    if (dl <= 1e-12 * I.length() || dr <= 1e-12 * I.length()) continue;
    const double hl = std::min(h, 0.5 * dl), hr = std::min(h, 0.5 * dr);
    const double left = (3.0 * root(site.lo) - 4.0 * root(site.lo - hl) + root(site.lo - 2.0 * hl)) / (2.0 * hl);
    const double right = (-3.0 * root(site.hi) + 4.0 * root(site.hi + hr) - root(site.hi + 2.0 * hr)) / (2.0 * hr);
    const double keep = std::abs(left - right), flip = std::abs(left + right);
    const double tie = opt.tie_tol * (1.0 + std::max(std::abs(left), std::abs(right)));
    const double at = 0.5 * (site.lo + site.hi);
    while (next < N && out.grid[next] <= at) sign[next++] = s;
    if (flip + tie < keep) {
      s = -s;
      out.flips.push_back(at);
    }
  }
  while (next < N) sign[next++] = s;
  const double last = s;
  out.g.resize(N);
  for (std::size_t k = 0; k < N; ++k) out.g[k] = last * sign[k] * r[k];

  for (std::size_t k = 0; k < N; ++k) out.residual = std::max(out.residual, std::abs(out.g[k] * out.g[k] - fv[k]));
  for (std::size_t k = 0; k + 1 < N; ++k) {
    const double d = std::abs(out.g[k + 1] - out.g[k]);
    out.max_jump = std::max(out.max_jump, d);
    out.empirical_lip = std::max(out.empirical_lip, d / (out.grid[k + 1] - out.grid[k]));
  }
  out.M = std::sqrt(seminorms(f, I, 2, opt.seminorm_samples)[0].lip);
  out.lip_ok = out.empirical_lip <= out.M + 1e-6;
  return out;
}

}  // namespace hyperlift
