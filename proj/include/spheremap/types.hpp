#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace spheremap {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

constexpr double kPi = 3.14159265358979323846;

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Dimension or shape mismatch between operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Input fails a structural precondition (non-unitary, non-Hermitian,
// malformed polynomial, parameter out of range, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An operation requiring a verified sphere map received something else.
class NotSphereMapError : public Error {
 public:
  using Error::Error;
};

// Evaluation at (or too close to) a denominator root.
class PoleError : public Error {
 public:
  PoleError(const std::string& msg, Complex root) : Error(msg), root_(root) {}
  Complex root() const { return root_; }

 private:
  Complex root_;
};

// Hermitian input with an eigenvalue below -psd_tol.
class NotPsdError : public Error {
 public:
  using Error::Error;
};

// A documented operation precondition does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Internal cross-check failed; never silently ignored.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

// Requested construction is not reachable by the generator.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Default tolerances. All operations accepting a tolerance use these unless
// the caller overrides them.
struct Tolerances {
  double unitary = 1e-9;   // max-entry deviation of U*U from I
  double psd = 1e-9;       // most negative admissible eigenvalue
  double identity = 1e-9;  // per-identity residual for sphere-map checks
  double root = 1e-7;      // root clustering radius
  double circle = 1e-7;    // distance-to-unit-circle threshold for roots
};

inline const Tolerances& default_tol() {
  static const Tolerances t{};
  return t;
}

// Inner product, linear in the first slot: <u,v> = sum_k u_k * conj(v_k).
inline Complex inner(const CVector& u, const CVector& v) {
  if (u.size() != v.size())
    throw DimensionError("inner: vectors of size " + std::to_string(u.size()) +
                         " and " + std::to_string(v.size()));
  return v.dot(u);  // Eigen's dot conjugates its first argument
}

inline double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double max_abs(const CVector& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

inline bool all_finite(const CMatrix& m) { return m.allFinite(); }

// Max-entry deviation of M^* M from the identity.
inline double unitary_defect(const CMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  CMatrix d = m.adjoint() * m;
  d -= CMatrix::Identity(m.rows(), m.cols());
  return max_abs(d);
}

inline double hermitian_defect(const CMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return max_abs(CMatrix(m - m.adjoint()));
}

// Square complex matrix checked to be unitary on construction.
class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(CMatrix m, double tol = default_tol().unitary)
      : m_(std::move(m)) {
    if (m_.rows() != m_.cols())
      throw DimensionError("UnitaryMatrix: matrix is not square");
    if (!all_finite(m_))
      throw ValidationError("UnitaryMatrix: non-finite entries");
    double defect = unitary_defect(m_);
    if (defect >= tol)
      throw ValidationError("UnitaryMatrix: U*U deviates from identity by " +
                            std::to_string(defect));
  }

  static UnitaryMatrix identity(Eigen::Index n) {
    return UnitaryMatrix(CMatrix::Identity(n, n));
  }

  const CMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  CMatrix m_;
};

}  // namespace spheremap
