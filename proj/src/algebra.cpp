#include "spheremap/algebra.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>

namespace spheremap {

namespace {

// Multiply Q and R by a diagonal phase so diag(R) becomes real >= 0.
QrResult fix_signs(CMatrix q, CMatrix r) {
  const Eigen::Index n = std::min(r.rows(), r.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    Complex d = r(i, i);
    if (std::abs(d) == 0.0) continue;
    Complex phase = d / std::abs(d);
    r.row(i) *= std::conj(phase);
    q.col(i) *= phase;
  }
  // Householder leaves numerical dust below the diagonal; zero it.
  for (Eigen::Index j = 0; j < r.cols(); ++j)
    for (Eigen::Index i = j + 1; i < r.rows(); ++i) r(i, j) = Complex(0, 0);
  return QrResult{UnitaryMatrix(std::move(q), 1e-8), std::move(r)};
}

}  // namespace

QrResult qr_positive(const CMatrix& m) {
  if (m.rows() != m.cols())
    throw DimensionError("qr_positive: matrix is not square (" +
                         std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ")");
  return qr_positive_rect(m);
}

QrResult qr_positive_rect(const CMatrix& m) {
  if (!all_finite(m)) throw ValidationError("qr_positive: non-finite entries");
  if (m.rows() < m.cols())
    throw DimensionError("qr_positive_rect: fewer rows than columns");
  Eigen::HouseholderQR<CMatrix> qr(m);
  CMatrix q = qr.householderQ() * CMatrix::Identity(m.rows(), m.rows());
  CMatrix r = qr.matrixQR().topRows(m.cols());
  CMatrix r_full = CMatrix::Zero(m.rows(), m.cols());
  r_full.topRows(m.cols()) =
      r.triangularView<Eigen::Upper>().toDenseMatrix();
  return fix_signs(std::move(q), std::move(r_full));
}

UnitaryMatrix complete_orthonormal(const CMatrix& columns, double tol) {
  const Eigen::Index n = columns.rows();
  const Eigen::Index k = columns.cols();
  if (k > n) throw DimensionError("complete_orthonormal: too many columns");
  if (k > 0) {
    CMatrix g = columns.adjoint() * columns;
    g -= CMatrix::Identity(k, k);
    if (max_abs(g) > tol)
      throw ValidationError("complete_orthonormal: columns not orthonormal");
  }
  CMatrix work(n, k + n);
  work.leftCols(k) = columns;
  work.rightCols(n) = CMatrix::Identity(n, n);
  Eigen::HouseholderQR<CMatrix> qr(work);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  // With orthonormal leading columns the positive-diagonal convention
  // reproduces them exactly (up to roundoff); enforce it.
  CMatrix r = qr.matrixQR();
  for (Eigen::Index i = 0; i < k; ++i) {
    Complex d = r(i, i);
    if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
  }
  q.leftCols(k) = columns;  // exact
  return UnitaryMatrix(std::move(q), 1e-8);
}

UnitaryPathPlan::UnitaryPathPlan(const UnitaryMatrix& u) {
  // A unitary matrix is normal, so its Schur form is diagonal up to roundoff.
  Eigen::ComplexSchur<CMatrix> schur(u.matrix());
  if (schur.info() != Eigen::Success)
    throw ValidationError("unitary_path: Schur decomposition failed");
  basis_ = schur.matrixU();
  const CMatrix& t = schur.matrixT();
  phases_.resize(t.rows());
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    double phi = std::arg(t(i, i));  // in (-pi, pi]
    phases_[i] = phi;
  }
}

CMatrix UnitaryPathPlan::at(double t) const {
  CVector diag(phases_.size());
  for (Eigen::Index i = 0; i < phases_.size(); ++i)
    diag[i] = std::polar(1.0, t * phases_[i]);
  return basis_ * diag.asDiagonal() * basis_.adjoint();
}

UnitaryMatrix unitary_path(const UnitaryMatrix& u, double t) {
  UnitaryPathPlan plan(u);
  return UnitaryMatrix(plan.at(t), 1e-8);
}

CMatrix psd_factor(const CMatrix& h, double psd_tol, double herm_tol) {
  if (h.rows() != h.cols())
    throw DimensionError("psd_factor: matrix is not square");
  if (!all_finite(h)) throw ValidationError("psd_factor: non-finite entries");
  if (hermitian_defect(h) > herm_tol)
    throw ValidationError("psd_factor: matrix is not Hermitian");

  // Columns V_j with <V_j, V_k> = H_jk satisfy M^* M = conj(H).
  CMatrix w = h.conjugate();
  w = (w + CMatrix(w.adjoint())) / 2.0;  // symmetrize roundoff
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(w);
  if (eig.info() != Eigen::Success)
    throw ValidationError("psd_factor: eigendecomposition failed");
  Eigen::VectorXd lam = eig.eigenvalues();
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam[i] < -psd_tol)
      throw NotPsdError("psd_factor: eigenvalue " + std::to_string(lam[i]) +
                        " below -" + std::to_string(psd_tol));
    if (lam[i] < 0) lam[i] = 0;
  }
  return lam.cwiseSqrt().asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace spheremap
