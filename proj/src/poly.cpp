#include "spheremap/poly.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace spheremap {

Poly trim(Poly p, double tol) {
  while (p.size() > 1 && std::abs(p.back()) <= tol) p.pop_back();
  if (p.empty()) p.push_back(Complex(0, 0));
  return p;
}

Complex poly_eval(const Poly& p, Complex z) {
  Complex acc(0, 0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, Complex(0, 0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

Poly poly_scale(const Poly& p, Complex c) {
  Poly out = p;
  for (Complex& x : out) x *= c;
  return out;
}

Poly poly_deflate(const Poly& p, Complex root) {
  if (p.size() < 2)
    throw ValidationError("poly_deflate: degree-zero polynomial");
  Poly q(p.size() - 1);
  Complex carry = p.back();
  for (size_t i = p.size() - 1; i > 0; --i) {
    q[i - 1] = carry;
    carry = p[i - 1] + carry * root;
  }
  return q;
}

std::vector<Complex> poly_roots(const Poly& p_in, double lead_tol) {
  Poly p = trim(p_in, lead_tol);
  if (is_zero_poly(p))
    throw ValidationError("poly_roots: zero polynomial");
  const int d = poly_degree(p);
  std::vector<Complex> roots;
  if (d >= 1) {
    CMatrix comp = CMatrix::Zero(d, d);
    for (int i = 1; i < d; ++i) comp(i, i - 1) = Complex(1, 0);
    for (int i = 0; i < d; ++i) comp(i, d - 1) = -p[i] / p[d];
    Eigen::ComplexEigenSolver<CMatrix> eig(comp, /*computeEigenvectors=*/false);
    if (eig.info() != Eigen::Success)
      throw ValidationError("poly_roots: eigensolver failed");
    roots.assign(eig.eigenvalues().data(), eig.eigenvalues().data() + d);
  }
  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma < mb;
    return std::arg(a) < std::arg(b);
  });
  return roots;
}

}  // namespace spheremap
