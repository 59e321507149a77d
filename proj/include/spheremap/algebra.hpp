#pragma once

#include "spheremap/types.hpp"

namespace spheremap {

struct QrResult {
  UnitaryMatrix q;
  CMatrix r;  // upper triangular, real non-negative diagonal
};

// Householder QR with the sign convention that every diagonal entry of R is
// real and >= 0. Deterministic: M = Q * R.
QrResult qr_positive(const CMatrix& m);

// Full QR of a (possibly rectangular) rows x cols matrix with rows >= cols.
// Q is rows x rows unitary, R is rows x cols upper trapezoidal with real
// non-negative diagonal.
QrResult qr_positive_rect(const CMatrix& m);

// Unitary whose first k columns are the given orthonormal columns, completed
// deterministically. Columns must be orthonormal within tol.
UnitaryMatrix complete_orthonormal(const CMatrix& columns, double tol = 1e-8);

// Point at parameter t on the eigenphase path from the identity to U.
// Eigenphases are taken in (-pi, pi]; a phase of exactly -pi maps to pi.
// t=0 gives I, t=1 gives U, and the result is unitary for every t.
UnitaryMatrix unitary_path(const UnitaryMatrix& u, double t);

// Precomputed spectral data for repeated unitary_path evaluations.
class UnitaryPathPlan {
 public:
  explicit UnitaryPathPlan(const UnitaryMatrix& u);
  CMatrix at(double t) const;
  Eigen::Index dim() const { return basis_.rows(); }

 private:
  CMatrix basis_;              // unitary Schur basis
  Eigen::VectorXd phases_;     // eigenphases in (-pi, pi]
};

// Factor a Hermitian PSD matrix H into a square matrix M whose columns
// V_0..V_d reproduce the inner products: <V_j, V_k> = H_jk. Eigenvalues in
// [-psd_tol, 0] are clamped to zero; anything lower raises NotPsdError.
CMatrix psd_factor(const CMatrix& h, double psd_tol = default_tol().psd,
                   double herm_tol = 1e-8);

}  // namespace spheremap
