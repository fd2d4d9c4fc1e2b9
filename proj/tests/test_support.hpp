#pragma once

#include <hyperlift/curve.hpp>

#include <vector>

namespace hyperlift::testing {

// Elementary symmetric curve of the roots r_k(t) given as polynomials in t.
inline CoeffCurve curve_from_root_polys(const std::vector<Poly>& roots, Interval I) {
  const std::size_t n = roots.size();
  std::vector<Poly> e(n + 1);
  e[0] = Poly::constant(1.0);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = k + 1; i >= 1; --i) e[i] += roots[k] * e[i - 1];
  e.erase(e.begin());
  return CoeffCurve::polynomial(e, I);
}

}  // namespace hyperlift::testing
