#pragma once

#include "spheremap/maps.hpp"
#include "spheremap/types.hpp"

#include <optional>

namespace spheremap {

// Hermitian matrix of coefficient inner products B_jk = <A_j, A_k>.
class GramMatrix {
 public:
  explicit GramMatrix(CMatrix entries, double herm_tol = 1e-10);

  int size() const { return static_cast<int>(m_.rows()); }
  int degree() const { return size() - 1; }
  const CMatrix& matrix() const { return m_; }
  Complex operator()(int j, int k) const { return m_(j, k); }

 private:
  CMatrix m_;
};

// Witness for unitary equivalence: g = U o f o rotation(theta).
struct EquivalenceWitness {
  double theta = 0.0;                        // in [0, 2 pi)
  std::optional<UnitaryMatrix> target_unitary;
  double pointwise_error = 0.0;              // max over validation samples
};

GramMatrix gram(const PolynomialSphereMap& f);

// Entry 0: sum B_jj - 1. Entry l >= 1: sum_k B_(k+l)k.
std::vector<Complex> constraint_residual(const GramMatrix& b);

// Smallest theta in [0, 2 pi) with B_{j(j+m)} = e^{i m theta} C_{j(j+m)}
// for all j, m, within tol; nullopt when none exists.
std::optional<double> star_equivalent(const GramMatrix& b, const GramMatrix& c,
                                      double tol = 1e-8);

// Unitary equivalence decision via Grams, with a constructed witness that is
// validated pointwise. Returns nullopt for inequivalent maps. Maps of
// different degree or target dimension are inequivalent.
std::optional<EquivalenceWitness> unitarily_equivalent(
    const PolynomialSphereMap& f, const PolynomialSphereMap& g,
    double tol = 1e-8);

// Reconstruct a polynomial sphere map of degree <= d with the prescribed
// Gram matrix, in the canonical target dimension d+1.
PolynomialSphereMap gram_to_map(const GramMatrix& b,
                                double tol = default_tol().identity);

// Gram matrix of a seeded random degree-d sphere map (canonical N = d+1).
GramMatrix sample_moduli(int d, uint64_t seed);

// Real rank of the Jacobian of the 2d+1 constraint functions over the
// (d+1)^2 real coordinates of Hermitian matrices, by central differences.
int moduli_tangent_rank(const GramMatrix& b, double step = 1e-6,
                        double sv_tol = 1e-8);

}  // namespace spheremap
