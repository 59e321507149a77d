#include "spheremap/constructions.hpp"

#include "spheremap/algebra.hpp"

#include <cmath>

namespace spheremap {

double SeededRng::uniform() {
  // 53-bit mantissa from the top bits of the engine output.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SeededRng::gaussian() {
  // Box-Muller; one value per call keeps the stream simple to reason about.
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

Complex SeededRng::complex_gaussian() {
  return Complex(gaussian(), gaussian()) / std::sqrt(2.0);
}

CVector SeededRng::gaussian_vector(int n) {
  CVector v(n);
  for (int i = 0; i < n; ++i) v[i] = complex_gaussian();
  return v;
}

CMatrix SeededRng::gaussian_matrix(int rows, int cols) {
  CMatrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = complex_gaussian();
  return m;
}

CMatrix random_unitary(int n, SeededRng& rng) {
  return qr_positive(rng.gaussian_matrix(n, n)).q.matrix();
}

PolynomialSphereMap tensor_step(const PolynomialSphereMap& f,
                                const CMatrix& v, bool grow_dim,
                                double ortho_tol) {
  const int n = f.target_dim();
  const int r = static_cast<int>(v.cols());
  if (v.rows() != n)
    throw DimensionError("tensor_step: subspace lives in the wrong space");
  if (r < 1 || r > n)
    throw ValidationError("tensor_step: subspace rank out of range");
  CMatrix g = v.adjoint() * v;
  g -= CMatrix::Identity(r, r);
  if (max_abs(g) > ortho_tol)
    throw ValidationError("tensor_step: subspace columns not orthonormal");

  // Coordinates of P_V f in the V basis and of P_{V_perp} f either in the
  // original coordinates (grow_dim) or in a completed orthonormal basis.
  const int d = f.degree();
  const int perp_rows = grow_dim ? n : n - r;
  const int out_dim = perp_rows + r;
  CMatrix perp_basis;  // columns spanning V_perp (compressed form only)
  if (!grow_dim && perp_rows > 0) {
    CMatrix full = complete_orthonormal(v).matrix();
    perp_basis = full.rightCols(perp_rows);
  }

  std::vector<CVector> out(d + 2, CVector::Zero(out_dim));
  for (int j = 0; j <= d; ++j) {
    const CVector& a = f.coeff(j);
    CVector v_part = v.adjoint() * a;  // r coords
    if (grow_dim) {
      out[j].head(n) += a - v * v_part;
    } else if (perp_rows > 0) {
      out[j].head(perp_rows) += perp_basis.adjoint() * a;
    }
    out[j + 1].tail(r) += v_part;  // multiplied by z
  }
  return PolynomialSphereMap(std::move(out));
}

PolynomialSphereMap random_sphere_map(int d, int n, uint64_t seed) {
  if (d < 0) throw ValidationError("random_sphere_map: d must be >= 0");
  if (n < 1) throw ValidationError("random_sphere_map: N must be >= 1");
  SeededRng rng(seed ^ 0x9e3779b97f4a7c15ull);

  CVector c = rng.gaussian_vector(1);
  if (std::abs(c[0]) < 1e-6) c[0] = Complex(1, 0);
  c /= std::sqrt(c.squaredNorm());
  PolynomialSphereMap f({c});

  const int reachable = std::min(n, d + 1);
  for (int step = 0; step < d; ++step) {
    const int cur = f.target_dim();
    const bool grow = cur < reachable;
    // Pick a one-dimensional direction with a healthy leading-coefficient
    // component so the degree rises by exactly one.
    const CVector& lead = f.coeff(f.degree());
    CVector dir;
    double lead_norm = std::sqrt(lead.squaredNorm());
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 64)
        throw InfeasibleError("random_sphere_map: no usable tensor direction");
      dir = rng.gaussian_vector(cur);
      double nrm = std::sqrt(dir.squaredNorm());
      if (nrm < 1e-8) continue;
      dir /= nrm;
      double overlap = std::abs(inner(lead, dir));
      if (overlap >= 0.2 * lead_norm) break;
    }
    f = tensor_step(f, dir, grow);
    f = f.transformed(random_unitary(f.target_dim(), rng));
    if (f.degree() != step + 1)
      throw InfeasibleError("random_sphere_map: degree did not increase");
  }
  if (f.target_dim() > n)
    throw InfeasibleError("random_sphere_map: generator overshot dimension");
  if (f.target_dim() < n) f = f.padded(n);
  return f;
}

Complex FourierPair::f2_eval(Complex z) const {
  Complex h(0, 0);
  for (size_t k = h_coeffs.size(); k > 0; --k) h = h * z + h_coeffs[k - 1];
  return std::exp(h);
}

FourierPair nonalgebraic_pair(int order) {
  if (order < 8)
    throw ValidationError("nonalgebraic_pair: order must be >= 8");
  FourierPair out;
  out.order = order;

  // phi(theta) = (1/2) log(1 - e^{2(cos theta - 2)}), real analytic and even.
  auto phi = [](double theta) {
    return 0.5 * std::log(1.0 - std::exp(2.0 * (std::cos(theta) - 2.0)));
  };

  // Cosine coefficients by the trapezoid rule on a fine grid (the integrand
  // is analytic and periodic, so the rule converges spectrally).
  const int samples = 8 * order;
  out.phi_coeffs.assign(order + 1, 0.0);
  for (int k = 0; k <= order; ++k) {
    double acc = 0.0;
    for (int s = 0; s < samples; ++s) {
      double theta = 2.0 * kPi * s / samples;
      acc += phi(theta) * std::cos(k * theta);
    }
    acc /= samples;
    out.phi_coeffs[k] = (k == 0) ? acc : 2.0 * acc;
  }

  // Boundary value a_0 + sum a_k cos(k theta) extends to the holomorphic
  // h(z) = a_0 + sum a_k z^k (harmonic conjugate normalized by v(0) = 0).
  out.h_coeffs.assign(order + 1, Complex(0, 0));
  for (int k = 0; k <= order; ++k) out.h_coeffs[k] = Complex(out.phi_coeffs[k], 0.0);

  // Taylor coefficients of f_2 = e^h from f' = h' f.
  const int n_taylor = 20;
  out.f2_taylor.assign(n_taylor, Complex(0, 0));
  out.f2_taylor[0] = std::exp(out.h_coeffs[0]);
  for (int m = 1; m < n_taylor; ++m) {
    Complex acc(0, 0);
    for (int k = 1; k <= m && k <= order; ++k)
      acc += static_cast<double>(k) * out.h_coeffs[k] * out.f2_taylor[m - k];
    out.f2_taylor[m] = acc / static_cast<double>(m);
  }

  double worst = 0.0;
  double f1_max = 0.0;
  for (int s = 0; s < samples; ++s) {
    double theta = 2.0 * kPi * (s + 0.5) / samples;
    Complex z = std::polar(1.0, theta);
    Complex f1 = std::exp(z - 2.0);
    Complex f2 = out.f2_eval(z);
    f1_max = std::max(f1_max, std::abs(f1));
    worst = std::max(worst,
                     std::abs(std::norm(f1) + std::norm(f2) - 1.0));
  }
  out.sup_residual = worst;
  out.f1_circle_max = f1_max;
  return out;
}

}  // namespace spheremap
