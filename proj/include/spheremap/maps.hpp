#pragma once

#include "spheremap/poly.hpp"
#include "spheremap/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace spheremap {

// Polynomial map f(z) = sum_j A_j z^j into C^N. Trailing zero coefficient
// vectors are trimmed on construction so the stored degree is exact.
class PolynomialSphereMap {
 public:
  explicit PolynomialSphereMap(std::vector<CVector> coeffs,
                               double trim_tol = 1e-13);

  int target_dim() const { return static_cast<int>(coeffs_[0].size()); }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<CVector>& coeffs() const { return coeffs_; }
  const CVector& coeff(int j) const { return coeffs_.at(j); }

  CVector evaluate(Complex z) const;

  // f(e^{i theta} z)
  PolynomialSphereMap rotated(double theta) const;
  // U o f
  PolynomialSphereMap transformed(const CMatrix& u) const;
  // Same map into C^n, n >= target_dim, extra coordinates zero.
  PolynomialSphereMap padded(int n) const;

  // Coefficient matrix with column j = A_j (target_dim x (degree+1)).
  CMatrix coefficient_matrix() const;

 private:
  std::vector<CVector> coeffs_;
};

// Rational map p(z)/q(z) with a vector numerator and scalar denominator.
class RationalSphereMap {
 public:
  RationalSphereMap(std::vector<CVector> numerator, Poly denominator,
                    double trim_tol = 1e-13);

  static RationalSphereMap from_polynomial(const PolynomialSphereMap& f);

  int target_dim() const { return static_cast<int>(numerator_[0].size()); }
  int numerator_degree() const { return static_cast<int>(numerator_.size()) - 1; }
  int denominator_degree() const { return poly_degree(denominator_); }
  // Total degree max(deg p, deg q).
  int degree() const;
  const std::vector<CVector>& numerator() const { return numerator_; }
  const Poly& denominator() const { return denominator_; }
  bool is_polynomial(double tol = 1e-13) const;
  // Requires denominator of degree zero.
  PolynomialSphereMap to_polynomial() const;

  CVector evaluate(Complex z, double pole_tol = 1e-12) const;

  RationalSphereMap rotated(double theta) const;
  RationalSphereMap transformed(const CMatrix& u) const;
  RationalSphereMap padded(int n) const;
  // Multiply every component by the scalar rational b/d.
  RationalSphereMap scaled_by(const Poly& num_factor, const Poly& den_factor) const;
  // Multiply one component by a scalar polynomial.
  RationalSphereMap component_scaled(int comp, const Poly& factor) const;

  // Scalar polynomial <p(z), a> (inner product of numerator with a vector).
  Poly numerator_inner(const CVector& a) const;

 private:
  std::vector<CVector> numerator_;
  Poly denominator_;
};

struct VerificationReport {
  bool is_sphere_map = false;
  std::vector<Complex> residuals;  // index l = 0..d
  double max_residual = 0.0;
  // Sup of | ||F||^2 - 1 | over circle samples; NaN when sampling is
  // impossible (pole on the circle).
  double circle_residual = 0.0;
};

// Factorization q(z) = c z^m prod_k (1 - conj(a_k) z) of Lemma-type
// denominators. Roots a_k are sorted by (modulus, argument).
struct DenominatorForm {
  Complex c = Complex(1, 0);
  int m = 0;
  std::vector<Complex> roots;       // the a_k
  std::vector<int> on_circle;       // indices with |a_k| within circle_tol of 1
  std::vector<int> inside_disk;     // indices with |a_k| > 1 (q-root inside disk)
  int K() const { return static_cast<int>(roots.size()); }
};

struct ReduceResult {
  RationalSphereMap map;
  std::vector<std::string> warnings;
  int cancelled = 0;  // number of linear factors removed
};

// lambda_l = sum_j <V_j, V_{j+l}>, l = 0..d.
std::vector<Complex> upper_traces(const std::vector<CVector>& v);

// Same contraction for a scalar polynomial: mu_l = sum_j q_j conj(q_{j+l}).
std::vector<Complex> scalar_traces(const Poly& q);

// Residual system for "f maps the circle to the sphere": entry 0 is
// lambda_0 - 1, entry l >= 1 is lambda_l.
VerificationReport verify_polynomial(const PolynomialSphereMap& f,
                                     double tol = default_tol().identity);

// Rational version via Fourier-coefficient matching of ||p||^2 = |q|^2 on
// the circle: residual l is lambda_l(p) - mu_l(q).
VerificationReport verify_rational(const RationalSphereMap& f,
                                   double tol = default_tol().identity);

// Max over K equispaced points e^{i theta} of | ||F(e^{i theta})||^2 - 1 |.
double circle_sample_residual(const PolynomialSphereMap& f, int K);
double circle_sample_residual(const RationalSphereMap& f, int K,
                              double circle_tol = default_tol().circle);

// Cancel all roots shared (within root_tol) by the denominator and every
// numerator component.
ReduceResult reduce_lowest_terms(const RationalSphereMap& f,
                                 double root_tol = default_tol().root);

DenominatorForm denominator_form(const Poly& q,
                                 double circle_tol = default_tol().circle);

// For a reduced, verified sphere map the denominator must not vanish on the
// circle; throws InconsistencyError if it does.
void check_denominator_consistency(const RationalSphereMap& f,
                                   double root_tol = default_tol().root,
                                   double circle_tol = default_tol().circle);

// True iff deg p > deg q. Preconditions: f reduced, verified sphere map,
// F(0) = 0 within tol.
bool degree_gap_check(const RationalSphereMap& f,
                      double tol = default_tol().identity);

// True when the map has no denominator root in the closed unit disk
// (holomorphic proper map of the disk once reduced and verified).
bool has_pole_in_closed_disk(const RationalSphereMap& f,
                             double circle_tol = default_tol().circle);

}  // namespace spheremap
