#pragma once

#include "spheremap/maps.hpp"
#include "spheremap/types.hpp"

#include <cstdint>
#include <random>

namespace spheremap {

// Deterministic complex-Gaussian sampler (explicit Box-Muller so results do
// not depend on the standard library's distribution internals).
class SeededRng {
 public:
  explicit SeededRng(uint64_t seed) : engine_(seed) {}

  double uniform();            // in [0, 1)
  double gaussian();           // standard normal
  Complex complex_gaussian();  // independent N(0,1/2) parts
  CVector gaussian_vector(int n);
  CMatrix gaussian_matrix(int rows, int cols);

 private:
  std::mt19937_64 engine_;
};

// Haar-like random unitary from a Ginibre matrix via positive-diagonal QR.
CMatrix random_unitary(int n, SeededRng& rng);

// Tensor step (P_{V_perp} f) (+) z (P_V f) expressed in an adapted
// orthonormal basis; zero coordinate slots are compressed away when
// grow_dim is false, or the V_perp block keeps all original coordinates
// when grow_dim is true (target dimension grows by dim V).
PolynomialSphereMap tensor_step(const PolynomialSphereMap& f,
                                const CMatrix& subspace_columns,
                                bool grow_dim = false,
                                double ortho_tol = 1e-9);

// Seeded random polynomial sphere map of exact degree d into C^N.
PolynomialSphereMap random_sphere_map(int d, int n, uint64_t seed);

// Truncated-Fourier construction of the pair (f_1, f_2) with
// |f_1|^2 + |f_2|^2 = 1 on the circle and f_1(z) = e^{z-2}. The pair
// demonstrates a proper map that extends past the circle without being
// algebraic; non-algebraicity itself is not certified numerically.
struct FourierPair {
  int order = 0;                         // truncation order M
  std::vector<double> phi_coeffs;        // cosine coefficients a_0..a_M of phi
  std::vector<Complex> h_coeffs;         // Taylor coefficients of h = u + iv
  std::vector<Complex> f2_taylor;        // first Taylor coefficients of f_2
  double sup_residual = 0.0;             // on >= 8M circle samples
  double f1_circle_max = 0.0;            // max |f_1| on the circle

  Complex f2_eval(Complex z) const;      // exp of the truncated series
};

FourierPair nonalgebraic_pair(int order);

}  // namespace spheremap
