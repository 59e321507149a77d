#include "spheremap/moduli.hpp"

#include "spheremap/algebra.hpp"
#include "spheremap/constructions.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spheremap {

GramMatrix::GramMatrix(CMatrix entries, double herm_tol) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols())
    throw DimensionError("GramMatrix: matrix is not square");
  if (!all_finite(m_)) throw ValidationError("GramMatrix: non-finite entries");
  if (hermitian_defect(m_) > herm_tol)
    throw ValidationError("GramMatrix: matrix is not Hermitian");
}

GramMatrix gram(const PolynomialSphereMap& f) {
  const int d = f.degree();
  CMatrix b(d + 1, d + 1);
  for (int j = 0; j <= d; ++j)
    for (int k = 0; k <= d; ++k) b(j, k) = inner(f.coeff(j), f.coeff(k));
  return GramMatrix(std::move(b));
}

std::vector<Complex> constraint_residual(const GramMatrix& b) {
  const int d = b.degree();
  std::vector<Complex> res(d + 1, Complex(0, 0));
  for (int j = 0; j <= d; ++j) res[0] += b(j, j);
  res[0] -= 1.0;
  for (int l = 1; l <= d; ++l)
    for (int k = 0; k + l <= d; ++k) res[l] += b(k + l, k);
  return res;
}

std::optional<double> star_equivalent(const GramMatrix& b, const GramMatrix& c,
                                      double tol) {
  if (b.size() != c.size())
    throw DimensionError("star_equivalent: size mismatch");
  const int n = b.size();

  // Moduli must agree entrywise and diagonals must match outright.
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (std::abs(std::abs(b(j, k)) - std::abs(c(j, k))) > tol)
        return std::nullopt;
    }
    if (std::abs(b(j, j) - c(j, j)) > tol) return std::nullopt;
  }

  auto passes = [&](double theta) {
    for (int j = 0; j < n; ++j)
      for (int m = 1; j + m < n; ++m) {
        Complex phase = std::polar(1.0, m * theta);
        if (std::abs(b(j, j + m) - phase * c(j, j + m)) > tol) return false;
      }
    return true;
  };

  double off = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (j != k) off = std::max(off, std::abs(b(j, k)));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (j != k) off = std::max(off, std::abs(c(j, k)));
  if (off < tol) return 0.0;

  // Reference entry: smallest superdiagonal index m with an entry of
  // modulus > 10 tol; largest-modulus entry there, ties to smallest j.
  int m_ref = -1, j_ref = -1;
  double best = 10 * tol;
  for (int m = 1; m < n && m_ref < 0; ++m) {
    for (int j = 0; j + m < n; ++j) {
      double mag = std::abs(c(j, j + m));
      if (mag > best) {
        best = mag;
        m_ref = m;
        j_ref = j;
      }
    }
  }
  if (m_ref < 0) {
    // Off-diagonal mass exists but every superdiagonal entry is within the
    // 10 tol guard band; fall back to testing theta = 0 only.
    if (passes(0.0)) return 0.0;
    return std::nullopt;
  }

  Complex ratio = b(j_ref, j_ref + m_ref) / c(j_ref, j_ref + m_ref);
  double base = std::arg(ratio) / m_ref;
  std::vector<double> candidates;
  for (int k = 0; k < m_ref; ++k) {
    double theta = base + 2.0 * kPi * k / m_ref;
    theta = std::fmod(theta, 2.0 * kPi);
    if (theta < 0) theta += 2.0 * kPi;
    candidates.push_back(theta);
  }
  std::sort(candidates.begin(), candidates.end());
  for (double theta : candidates)
    if (passes(theta)) return theta;
  return std::nullopt;
}

namespace {

// Best unitary aligning the columns of F with those of G (Procrustes):
// U = P Q^* from the SVD of G F^*. Exact whenever the two Grams agree.
CMatrix procrustes_unitary(const CMatrix& f, const CMatrix& g) {
  CMatrix x = g * f.adjoint();
  Eigen::JacobiSVD<CMatrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace

std::optional<EquivalenceWitness> unitarily_equivalent(
    const PolynomialSphereMap& f, const PolynomialSphereMap& g, double tol) {
  VerificationReport rf = verify_polynomial(f);
  VerificationReport rg = verify_polynomial(g);
  if (!rf.is_sphere_map || !rg.is_sphere_map)
    throw PreconditionError("unitarily_equivalent: inputs must verify");
  if (f.degree() != g.degree()) return std::nullopt;
  if (f.target_dim() != g.target_dim()) return std::nullopt;

  std::optional<double> theta = star_equivalent(gram(f), gram(g), tol);
  if (!theta) return std::nullopt;

  PolynomialSphereMap f_rot = f.rotated(*theta);
  CMatrix u = procrustes_unitary(f_rot.coefficient_matrix(),
                                 g.coefficient_matrix());

  // Validate the witness pointwise on circle samples.
  double worst = 0.0;
  for (int k = 0; k < 16; ++k) {
    Complex z = std::polar(1.0, 2.0 * kPi * (k + 0.37) / 16);
    CVector lhs = g.evaluate(z);
    CVector rhs = u * f.evaluate(std::polar(1.0, *theta) * z);
    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  if (worst > std::max(tol, 1e-8))
    throw InconsistencyError(
        "unitarily_equivalent: Grams are *-equivalent but the constructed "
        "witness fails pointwise validation (error " + std::to_string(worst) +
        ")");
  EquivalenceWitness w;
  w.theta = *theta;
  w.target_unitary = UnitaryMatrix(std::move(u), 1e-8);
  w.pointwise_error = worst;
  return w;
}

PolynomialSphereMap gram_to_map(const GramMatrix& b, double tol) {
  std::vector<Complex> res = constraint_residual(b);
  double worst = 0.0;
  for (const Complex& r : res) worst = std::max(worst, std::abs(r));
  if (worst > tol) {
    std::ostringstream os;
    os << "gram_to_map: matrix is not in the moduli set; residuals:";
    for (const Complex& r : res)
      os << " (" << r.real() << "," << r.imag() << ")";
    throw ValidationError(os.str());
  }
  CMatrix m = psd_factor(b.matrix());
  std::vector<CVector> coeffs;
  coeffs.reserve(m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) coeffs.push_back(m.col(j));
  return PolynomialSphereMap(std::move(coeffs));
}

GramMatrix sample_moduli(int d, uint64_t seed) {
  if (d < 0) throw ValidationError("sample_moduli: d must be >= 0");
  return gram(random_sphere_map(d, d + 1, seed));
}

int moduli_tangent_rank(const GramMatrix& b, double step, double sv_tol) {
  std::vector<Complex> base = constraint_residual(b);
  double worst = 0.0;
  for (const Complex& r : base) worst = std::max(worst, std::abs(r));
  if (worst > 1e-6)
    throw PreconditionError("moduli_tangent_rank: matrix not in the moduli set");

  const int n = b.size();
  const int d = b.degree();
  const int n_constraints = 2 * d + 1;  // one real + d complex
  const int n_coords = n * n;           // real diag + re/im of upper triangle

  auto eval = [&](const CMatrix& m) {
    GramMatrix g(m, 1e-6);
    std::vector<Complex> r = constraint_residual(g);
    Eigen::VectorXd out(n_constraints);
    out[0] = r[0].real();
    for (int l = 1; l <= d; ++l) {
      out[2 * l - 1] = r[l].real();
      out[2 * l] = r[l].imag();
    }
    return out;
  };

  RMatrix jac(n_constraints, n_coords);
  int col = 0;
  auto central = [&](const CMatrix& delta) {
    CMatrix plus = b.matrix() + delta;
    CMatrix minus = b.matrix() - delta;
    jac.col(col++) = (eval(plus) - eval(minus)) / (2.0 * step);
  };
  for (int j = 0; j < n; ++j) {
    CMatrix delta = CMatrix::Zero(n, n);
    delta(j, j) = step;
    central(delta);
  }
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      CMatrix re = CMatrix::Zero(n, n);
      re(j, k) = step;
      re(k, j) = step;
      central(re);
      CMatrix im = CMatrix::Zero(n, n);
      im(j, k) = Complex(0, step);
      im(k, j) = Complex(0, -step);
      central(im);
    }

  Eigen::JacobiSVD<RMatrix> svd(jac);
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > sv_tol) ++rank;
  return rank;
}

}  // namespace spheremap
