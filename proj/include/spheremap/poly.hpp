#pragma once

#include "spheremap/types.hpp"

#include <vector>

namespace spheremap {

// Scalar polynomials as coefficient vectors in ascending powers of z.
using Poly = std::vector<Complex>;

// Drop trailing coefficients of magnitude <= tol (but keep at least one).
Poly trim(Poly p, double tol = 1e-13);

inline bool is_zero_poly(const Poly& p, double tol = 1e-13) {
  for (const Complex& c : p)
    if (std::abs(c) > tol) return false;
  return true;
}

inline int poly_degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

Complex poly_eval(const Poly& p, Complex z);

Poly poly_mul(const Poly& a, const Poly& b);

Poly poly_scale(const Poly& p, Complex c);

// Synthetic division by (z - root); the remainder is discarded.
Poly poly_deflate(const Poly& p, Complex root);

// All roots of p via the companion-matrix eigenvalues, sorted by
// (modulus, argument) for determinism. Requires a nonzero polynomial.
std::vector<Complex> poly_roots(const Poly& p, double lead_tol = 1e-13);

}  // namespace spheremap
