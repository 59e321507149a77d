#include "spheremap/normalform.hpp"

#include "spheremap/algebra.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spheremap {

namespace {

double wrap_angle(double theta) {
  theta = std::fmod(theta, 2.0 * kPi);
  if (theta < 0) theta += 2.0 * kPi;
  return theta;
}

constexpr double kZeroColumnThreshold = 1e-10;

// One pass of the basis construction for a fixed source rotation.
NormalFormMatrix run_pipeline(const PolynomialSphereMap& f_in, double theta,
                              double tol) {
  PolynomialSphereMap f = theta == 0.0 ? f_in : f_in.rotated(theta);
  const int d = f.degree();
  const int canonical = d + 1;
  const int m = std::max(f.target_dim(), canonical);

  NormalFormMatrix nf;
  nf.applied_source_rotation = theta;

  PolynomialSphereMap fp = f.target_dim() < m ? f.padded(m) : f;
  CMatrix coeffs = fp.coefficient_matrix();  // m x (d+1)

  CMatrix compress = CMatrix::Identity(m, m);
  CMatrix work;  // canonical x (d+1)
  if (m > canonical) {
    QrResult qr = qr_positive_rect(coeffs);
    compress = qr.q.matrix().adjoint();
    work = qr.r.topRows(canonical);
    double leak = max_abs(CMatrix(qr.r.bottomRows(m - canonical)));
    if (leak > 1e-9)
      throw InconsistencyError("normal_form: coefficient span exceeds d+1");
  } else {
    work = coeffs;
  }

  CVector a_last = work.col(d);
  double norm_ad = std::sqrt(a_last.squaredNorm());
  if (norm_ad < 1e-13)
    throw ValidationError("normal_form: top coefficient vanishes");
  CVector u_d = a_last / norm_ad;

  CVector a_first = work.col(0);
  double norm_a0_raw = std::sqrt(a_first.squaredNorm());

  CMatrix w_total;  // canonical x canonical
  double norm_a0 = 0.0;
  if (d == 0) {
    CMatrix basis = complete_orthonormal(u_d).matrix();
    w_total = basis.adjoint();
    norm_a0 = norm_ad;
  } else if (std::abs(inner(a_first, a_last)) >
             std::max(tol * 10, 1e-7) * std::max(1.0, norm_a0_raw * norm_ad)) {
    throw NotSphereMapError(
        "normal_form: <A_0, A_d> does not vanish; input is not a sphere map");
  } else if (norm_a0_raw > kZeroColumnThreshold) {
    CVector a0p = a_first - inner(a_first, u_d) * u_d;
    norm_a0 = std::sqrt(a0p.squaredNorm());
    CVector u_0 = a0p / norm_a0;
    CMatrix pair(canonical, 2);
    pair.col(0) = u_0;
    pair.col(1) = u_d;
    CMatrix full = complete_orthonormal(pair).matrix();
    CMatrix basis(canonical, canonical);
    basis.col(0) = u_0;
    for (int j = 2; j < canonical; ++j) basis.col(j - 1) = full.col(j);
    basis.col(d) = u_d;
    w_total = basis.adjoint();
  } else {
    // Degenerate constant term: pick e_0 orthogonal to the whole coefficient
    // span so the first row vanishes and alpha = 0 is consistent.
    nf.degeneracies.push_back("A_0 = 0: alpha set to 0 by convention");
    norm_a0 = 0.0;
    CMatrix rest(canonical, d);
    for (int j = 1; j <= d; ++j) rest.col(j - 1) = work.col(j);
    Eigen::ColPivHouseholderQR<CMatrix> qr(rest);
    qr.setThreshold(1e-10);
    int rank = static_cast<int>(qr.rank());
    CMatrix q = qr.householderQ() * CMatrix::Identity(canonical, canonical);
    if (rank >= canonical)
      throw InconsistencyError("normal_form: no direction orthogonal to span");
    CVector e0 = q.col(rank);
    e0 -= inner(e0, u_d) * u_d;  // guard roundoff
    e0 /= std::sqrt(e0.squaredNorm());
    CMatrix pair(canonical, 2);
    pair.col(0) = e0;
    pair.col(1) = u_d;
    CMatrix full = complete_orthonormal(pair).matrix();
    CMatrix basis(canonical, canonical);
    basis.col(0) = e0;
    for (int j = 2; j < canonical; ++j) basis.col(j - 1) = full.col(j);
    basis.col(d) = u_d;
    w_total = basis.adjoint();
  }

  CMatrix a = w_total * work;

  if (d >= 2) {
    // Upper-triangularize the inner block with a unitary acting only on
    // e_1..e_{d-1}; columns 0 and d are untouched.
    CMatrix inner_block = a.block(1, 1, d - 1, d - 1);
    QrResult qr = qr_positive(inner_block);
    CMatrix stage = CMatrix::Identity(d + 1, d + 1);
    stage.block(1, 1, d - 1, d - 1) = qr.q.matrix().adjoint();
    a = stage * a;
    w_total = stage * w_total;

    // Degenerate-diagonal convention: when the leading inner columns vanish,
    // push the next column's mass onto its own diagonal entry.
    for (int i = 0; i + 1 < d - 1; ++i) {
      bool leading_zero = true;
      for (int c = 0; c <= i && leading_zero; ++c)
        if (a.block(1, 1, d - 1, d - 1).col(c).cwiseAbs().maxCoeff() >
            kZeroColumnThreshold)
          leading_zero = false;
      if (!leading_zero) break;
      const int r0 = 1 + i, r1 = 2 + i, col = 2 + i;  // global indices
      Complex x = a(r0, col), y = a(r1, col);
      double s = std::sqrt(std::norm(x) + std::norm(y));
      if (std::abs(x) <= kZeroColumnThreshold || s == 0.0) continue;
      CMatrix g = CMatrix::Identity(d + 1, d + 1);
      g(r0, r0) = -y / s;
      g(r0, r1) = x / s;
      g(r1, r0) = std::conj(x) / s;
      g(r1, r1) = std::conj(y) / s;
      a = g * a;
      w_total = g * w_total;
    }

    nf.alpha = norm_a0 > 0.0 ? -a(0, d - 1) / norm_ad : Complex(0, 0);
  } else {
    nf.alpha = Complex(0, 0);
  }

  nf.a = a;
  nf.norm_a0 = norm_a0;
  nf.norm_ad = norm_ad;

  CMatrix u_final = CMatrix::Identity(m, m);
  u_final.topLeftCorner(canonical, canonical) = w_total;
  u_final = u_final * compress;
  nf.applied_target_unitary = u_final;

  // Cross-check that the recorded unitary reproduces the normal form.
  CMatrix check = u_final * coeffs;
  double err = max_abs(CMatrix(check.topRows(canonical) - a));
  if (m > canonical)
    err = std::max(err, max_abs(CMatrix(check.bottomRows(m - canonical))));
  if (err > 1e-8)
    throw InconsistencyError("normal_form: unitary bookkeeping failed");
  return nf;
}

}  // namespace

PolynomialSphereMap NormalFormMatrix::as_map() const {
  std::vector<CVector> coeffs;
  const int n = static_cast<int>(a.rows());
  coeffs.reserve(n);
  for (int j = 0; j < n; ++j) coeffs.push_back(a.col(j));
  return PolynomialSphereMap(std::move(coeffs), 0.0);
}

NormalFormMatrix normal_form(const PolynomialSphereMap& f,
                             const NormalFormOptions& opts) {
  VerificationReport rep = verify_polynomial(f, opts.tol);
  if (!rep.is_sphere_map) {
    std::ostringstream os;
    os << "normal_form: input is not a sphere map (max residual "
       << rep.max_residual << ")";
    throw NotSphereMapError(os.str());
  }
  NormalFormMatrix nf = run_pipeline(f, 0.0, opts.tol);
  if (opts.make_alpha_real && f.degree() >= 2 && std::abs(nf.alpha) > 1e-12 &&
      std::abs(std::arg(nf.alpha)) > 1e-14) {
    double theta = wrap_angle(-std::arg(nf.alpha) / (f.degree() - 1));
    nf = run_pipeline(f, theta, opts.tol);
  }
  return nf;
}

double StructureReport::max_residual() const {
  double m = std::max({zero_pattern_residual, diagonal_imag_residual,
                       diagonal_negativity, alpha_consistency_residual,
                       trace_residual, identity_residual});
  if (eq6_residual) m = std::max(m, *eq6_residual);
  if (eq71_residual) m = std::max(m, *eq71_residual);
  if (eq72_residual) m = std::max(m, *eq72_residual);
  return m;
}

StructureReport check_normal_structure(const NormalFormMatrix& nf, double tol) {
  const CMatrix& a = nf.a;
  const int d = nf.degree();
  StructureReport rep;

  double zp = 0.0;
  zp = std::max(zp, std::abs(a(0, 0) - nf.norm_a0));
  zp = std::max(zp, std::abs(a(d, d) - nf.norm_ad));
  for (int r = 1; r <= d; ++r) zp = std::max(zp, std::abs(a(r, 0)));
  for (int r = 0; r < d; ++r) zp = std::max(zp, std::abs(a(r, d)));
  for (int c = 1; c <= d - 1; ++c)
    for (int r = c + 1; r <= d - 1; ++r) zp = std::max(zp, std::abs(a(r, c)));
  rep.zero_pattern_residual = zp;

  double im = 0.0, neg = 0.0;
  for (int i = 1; i <= d - 1; ++i) {
    im = std::max(im, std::abs(a(i, i).imag()));
    neg = std::max(neg, std::max(0.0, -a(i, i).real()));
  }
  rep.diagonal_imag_residual = im;
  rep.diagonal_negativity = neg;

  if (d >= 2) {
    double ac = std::abs(a(0, d - 1) + nf.alpha * nf.norm_ad);
    ac = std::max(ac, std::abs(a(d, 1) - std::conj(nf.alpha) * nf.norm_a0));
    rep.alpha_consistency_residual = ac;
  }

  double sum_sq = a.squaredNorm();
  rep.trace_residual = std::abs(sum_sq - 1.0);

  std::vector<CVector> cols;
  for (int j = 0; j <= d; ++j) cols.push_back(a.col(j));
  std::vector<Complex> lam = upper_traces(cols);
  lam[0] -= 1.0;
  double idres = 0.0;
  for (const Complex& l : lam) idres = std::max(idres, std::abs(l));
  rep.identity_residual = idres;

  if (d == 2) {
    double lhs = (nf.norm_a0 * nf.norm_a0 + nf.norm_ad * nf.norm_ad) *
                     (1.0 + std::norm(nf.alpha)) +
                 std::norm(a(1, 1));
    rep.eq6_residual = std::abs(lhs - 1.0);
  }
  if (d == 3) {
    Complex a10 = a(0, 1), a11 = a(1, 1), a21 = a(1, 2), a23 = a(3, 2);
    Complex lhs = nf.norm_a0 * std::conj(a10) -
                  std::conj(nf.alpha) * a10 * nf.norm_ad +
                  a11 * std::conj(a21) +
                  std::conj(nf.alpha) * nf.norm_a0 * std::conj(a23) +
                  a23 * nf.norm_ad;
    rep.eq71_residual = std::abs(lhs);
    rep.eq72_residual = rep.trace_residual;
  }

  rep.passes = rep.max_residual() < tol;
  return rep;
}

RationalSphereMap make_G(const GParams& p, int n) {
  if (!(p.alpha >= 0.0 && p.alpha < kPi / 2))
    throw ValidationError("make_G: alpha out of [0, pi/2)");
  if (!(p.r >= 0.0 && p.r < 1.0))
    throw ValidationError("make_G: r out of [0, 1)");
  if (n < 2) throw ValidationError("make_G: target dimension must be >= 2");
  const double ca = std::cos(p.alpha), sa = std::sin(p.alpha);
  // Numerator coefficients of (cos a (r - z), sin a (1 - r z), 0, ...).
  CVector p0 = CVector::Zero(n), p1 = CVector::Zero(n);
  p0[0] = ca * p.r;
  p0[1] = sa;
  p1[0] = -ca;
  p1[1] = -sa * p.r;
  Poly den{Complex(1, 0), Complex(-p.r, 0)};
  return RationalSphereMap({p0, p1}, den);
}

PolynomialSphereMap make_J(const JParams& p, int n) {
  if (!(p.alpha >= 0.0 && p.alpha < kPi / 2))
    throw ValidationError("make_J: alpha out of [0, pi/2)");
  if (!(p.beta >= 0.0 && p.beta < kPi / 2))
    throw ValidationError("make_J: beta out of [0, pi/2)");
  const double ca = std::cos(p.alpha), sa = std::sin(p.alpha);
  const double cb = std::cos(p.beta), sb = std::sin(p.beta);
  if (!p.gamma) {
    if (n < 2) throw ValidationError("make_J: target dimension must be >= 2");
    CVector c0 = CVector::Zero(n), c1 = CVector::Zero(n), c2 = CVector::Zero(n);
    c2[0] = ca * cb;
    c1[0] = sa * sb;
    c1[1] = -sa * cb;
    c0[1] = ca * sb;
    return PolynomialSphereMap({c0, c1, c2}, 0.0);
  }
  if (!(*p.gamma >= 0.0 && *p.gamma <= kPi / 2))
    throw ValidationError("make_J: gamma out of [0, pi/2]");
  if (n < 3)
    throw ValidationError("make_J: gamma given but target dimension < 3");
  const double cg = std::cos(*p.gamma), sg = std::sin(*p.gamma);
  CVector d0 = CVector::Zero(n), d1 = CVector::Zero(n), d2 = CVector::Zero(n);
  d2[0] = ca * cb;
  d1[0] = sa * sb * sg;
  d1[1] = sa * cg;
  d1[2] = -sa * cb * sg;
  d0[2] = ca * sb;
  return PolynomialSphereMap({d0, d1, d2}, 0.0);
}

namespace {

void require_degree1_proper(const RationalSphereMap& f, const char* who) {
  if (f.degree() != 1)
    throw ValidationError(std::string(who) + ": map must have degree 1");
  ReduceResult red = reduce_lowest_terms(f);
  if (red.cancelled != 0)
    throw PreconditionError(std::string(who) + ": map is not in lowest terms");
  if (!verify_rational(f).is_sphere_map)
    throw PreconditionError(std::string(who) + ": not a verified sphere map");
  if (has_pole_in_closed_disk(f))
    throw PreconditionError(std::string(who) +
                            ": denominator vanishes in the closed disk");
}

double pointwise_gap(const RationalSphereMap& lhs, const RationalSphereMap& rhs,
                     const CMatrix& u, double theta) {
  double worst = 0.0;
  for (int k = 0; k < 16; ++k) {
    Complex z = std::polar(1.0, 2.0 * kPi * (k + 0.21) / 16);
    CVector a = lhs.evaluate(z);
    CVector b = u * rhs.evaluate(std::polar(1.0, theta) * z);
    worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace

Degree1Classification classify_degree1(const RationalSphereMap& f, double tol) {
  require_degree1_proper(f, "classify_degree1");
  const int n = f.target_dim();
  if (n < 2)
    throw ValidationError("classify_degree1: target dimension must be >= 2");

  // Normalize q(0) = 1 and make the denominator parameter real by a source
  // rotation: q = 1 - conj(c) z with c = r >= 0 afterwards.
  Complex q0 = poly_eval(f.denominator(), Complex(0, 0));
  if (std::abs(q0) < 1e-12)
    throw PreconditionError("classify_degree1: pole at the origin");
  std::vector<CVector> num = f.numerator();
  for (CVector& v : num) v /= q0;
  Poly den = f.denominator();
  for (Complex& c : den) c /= q0;

  Complex c = den.size() > 1 ? -std::conj(den[1]) : Complex(0, 0);
  if (std::abs(c) >= 1.0)
    throw ValidationError("classify_degree1: not a proper map (|c| >= 1)");
  double theta = std::abs(c) > 1e-15 ? std::arg(c) : 0.0;
  double r = std::abs(c) > 1e-15 ? std::abs(c) : 0.0;

  RationalSphereMap rot =
      RationalSphereMap(num, den, 0.0).rotated(theta);
  CVector b_coef = rot.numerator()[0];
  CVector a_coef = rot.numerator().size() > 1 ? CVector(rot.numerator()[1])
                                              : CVector(CVector::Zero(n));

  // zA + B = (z - r) A' + (1 - r z) B'
  double inv = 1.0 / (1.0 - r * r);
  CVector a_prime = (a_coef + r * b_coef) * inv;
  CVector b_prime = (b_coef + r * a_coef) * inv;

  double na = std::sqrt(a_prime.squaredNorm());
  double nb = std::sqrt(b_prime.squaredNorm());
  if (std::abs(na * na + nb * nb - 1.0) > 1e-6 ||
      std::abs(inner(a_prime, b_prime)) > 1e-6)
    throw InconsistencyError("classify_degree1: frame identities failed");
  if (na < 1e-12)
    throw ValidationError("classify_degree1: degenerate Blaschke coefficient");
  double alpha = std::acos(std::min(1.0, na));

  CVector e0 = -a_prime / na;
  CMatrix cols;
  if (nb > 1e-12) {
    CVector e1 = b_prime - inner(b_prime, e0) * e0;
    e1 /= std::sqrt(e1.squaredNorm());
    cols = CMatrix(n, 2);
    cols.col(0) = e0;
    cols.col(1) = e1;
  } else {
    cols = CMatrix(n, 1);
    cols.col(0) = e0;
  }
  CMatrix u = complete_orthonormal(cols).matrix().adjoint();

  GParams params{alpha, r};
  RationalSphereMap canonical = make_G(params, n);
  double err = pointwise_gap(canonical, f, u, theta);
  if (err > std::max(tol, 1e-8))
    throw InconsistencyError("classify_degree1: witness validation failed");

  EquivalenceWitness w;
  w.theta = wrap_angle(theta);
  w.target_unitary = UnitaryMatrix(u, 1e-8);
  w.pointwise_error = err;
  return Degree1Classification{params, w};
}

Degree2Classification classify_degree2(const PolynomialSphereMap& f,
                                       double tol) {
  if (f.degree() != 2)
    throw ValidationError("classify_degree2: map must have degree 2");
  if (f.target_dim() < 2)
    throw ValidationError("classify_degree2: target dimension must be >= 2");
  if (!verify_polynomial(f).is_sphere_map)
    throw PreconditionError("classify_degree2: not a verified sphere map");

  const CVector& a0 = f.coeff(0);
  const CVector& a1 = f.coeff(1);
  const CVector& a2 = f.coeff(2);
  double n0 = std::sqrt(a0.squaredNorm());
  double n1 = std::sqrt(a1.squaredNorm());
  double n2 = std::sqrt(a2.squaredNorm());

  JParams params;
  params.alpha = std::asin(std::min(1.0, n1));
  params.beta = std::atan2(n0, n2);
  if (params.alpha < 1e-9) params.degeneracies.push_back("alpha = 0");
  if (params.beta < 1e-9) params.degeneracies.push_back("beta = 0");

  if (f.target_dim() >= 3) {
    double gamma = 0.0;
    if (n1 > 1e-9) {
      // Orthonormal basis of span(A_0, A_2).
      std::vector<CVector> basis;
      for (const CVector* v : {&a0, &a2}) {
        CVector w = *v;
        for (const CVector& b : basis) w -= inner(w, b) * b;
        double nw = std::sqrt(w.squaredNorm());
        if (nw > 1e-12) basis.push_back(w / nw);
      }
      CVector orth = a1;
      for (const CVector& b : basis) orth -= inner(orth, b) * b;
      double cg = std::sqrt(orth.squaredNorm()) / n1;
      gamma = std::acos(std::clamp(cg, 0.0, 1.0));
      if (gamma < 1e-9 || gamma > kPi / 2 - 1e-9)
        params.degeneracies.push_back("gamma at range boundary");
    } else {
      params.degeneracies.push_back("gamma undetermined (alpha = 0)");
    }
    params.gamma = gamma;
  }

  PolynomialSphereMap canonical = make_J(params, f.target_dim());
  std::optional<EquivalenceWitness> w = unitarily_equivalent(f, canonical, tol);
  if (!w) {
    std::ostringstream os;
    os << "classify_degree2: recovered parameters (alpha=" << params.alpha
       << ", beta=" << params.beta;
    if (params.gamma) os << ", gamma=" << *params.gamma;
    os << ") do not reproduce the map";
    throw InconsistencyError(os.str());
  }
  // unitarily_equivalent returned J = U o f o rot; that is the witness shape.
  return Degree2Classification{std::move(params), *w};
}

std::optional<EquivalenceWitness> unitarily_equivalent_degree1(
    const RationalSphereMap& f, const RationalSphereMap& g, double tol) {
  if (f.target_dim() != g.target_dim()) return std::nullopt;
  Degree1Classification cf = classify_degree1(f, tol);
  Degree1Classification cg = classify_degree1(g, tol);
  if (std::abs(cf.params.alpha - cg.params.alpha) > 1e-7 ||
      std::abs(cf.params.r - cg.params.r) > 1e-7)
    return std::nullopt;

  // G = U_f o f o rot(t_f) and G = U_g o g o rot(t_g) combine to
  // g = U_g^* U_f o f o rot(t_f - t_g).
  CMatrix u =
      cg.witness.target_unitary->matrix().adjoint() *
      cf.witness.target_unitary->matrix();
  double theta = wrap_angle(cf.witness.theta - cg.witness.theta);
  double err = pointwise_gap(g, f, u, theta);
  if (err > std::max(tol, 1e-8))
    throw InconsistencyError(
        "unitarily_equivalent_degree1: parameters match but the combined "
        "witness fails validation");
  EquivalenceWitness w;
  w.theta = theta;
  w.target_unitary = UnitaryMatrix(std::move(u), 1e-8);
  w.pointwise_error = err;
  return w;
}

BallAutomorphism::BallAutomorphism(CVector center, CMatrix pre_unitary,
                                   CMatrix post_unitary)
    : a_(std::move(center)), pre_(std::move(pre_unitary)),
      post_(std::move(post_unitary)) {
  const int n = static_cast<int>(a_.size());
  if (pre_.rows() != n || pre_.cols() != n || post_.rows() != n ||
      post_.cols() != n)
    throw DimensionError("BallAutomorphism: unitary dimension mismatch");
  if (a_.squaredNorm() >= 1.0)
    throw ValidationError("BallAutomorphism: center must lie in the open ball");
  if (unitary_defect(pre_) > 1e-8 || unitary_defect(post_) > 1e-8)
    throw ValidationError("BallAutomorphism: factors are not unitary");
}

BallAutomorphism BallAutomorphism::involution(CVector center) {
  const int n = static_cast<int>(center.size());
  return BallAutomorphism(std::move(center), CMatrix::Identity(n, n),
                          CMatrix::Identity(n, n));
}

CVector BallAutomorphism::apply(const CVector& w) const {
  if (w.size() != a_.size())
    throw DimensionError("BallAutomorphism: argument dimension mismatch");
  CVector x = pre_ * w;
  double a2 = a_.squaredNorm();
  double s = std::sqrt(1.0 - a2);
  CVector out;
  if (a2 == 0.0) {
    out = -x;
  } else {
    Complex t = inner(x, a_);
    CVector pa = (t / a2) * a_;
    out = (a_ - pa - s * (x - pa)) / (Complex(1, 0) - t);
  }
  return post_ * out;
}

RationalSphereMap BallAutomorphism::compose(const RationalSphereMap& f) const {
  if (f.target_dim() != dim())
    throw DimensionError("BallAutomorphism: map dimension mismatch");
  RationalSphereMap g = f.transformed(pre_);
  const Poly& q = g.denominator();
  double a2 = a_.squaredNorm();
  double s = std::sqrt(1.0 - a2);

  const size_t terms = std::max(g.numerator().size(), q.size());
  std::vector<CVector> num(terms, CVector::Zero(dim()));
  Poly den(terms, Complex(0, 0));
  for (size_t j = 0; j < terms; ++j) {
    CVector pj = j < g.numerator().size() ? g.numerator()[j]
                                          : CVector(CVector::Zero(dim()));
    Complex qj = j < q.size() ? q[j] : Complex(0, 0);
    Complex t = inner(pj, a_);
    CVector pa = a2 > 0.0 ? CVector((t / a2) * a_) : CVector(CVector::Zero(dim()));
    num[j] = a_ * qj - pa - s * (pj - pa);
    den[j] = qj - t;
  }
  RationalSphereMap out(std::move(num), std::move(den));
  return out.transformed(post_);
}

Complex DiskAutomorphism::apply(Complex z) const {
  return std::polar(1.0, theta) * (z - a) / (Complex(1, 0) - std::conj(a) * z);
}

SphericalNormalization spherical_normalize_degree1(const RationalSphereMap& f,
                                                   double tol) {
  require_degree1_proper(f, "spherical_normalize_degree1");
  const int n = f.target_dim();
  if (n < 2)
    throw ValidationError(
        "spherical_normalize_degree1: target dimension must be >= 2");

  CVector b = f.evaluate(Complex(0, 0));
  if (b.squaredNorm() >= 1.0)
    throw PreconditionError("spherical_normalize_degree1: F(0) not in the ball");

  RationalSphereMap g = BallAutomorphism::involution(b).compose(f);
  if (max_abs(g.evaluate(Complex(0, 0))) > 1e-9)
    throw InconsistencyError("spherical_normalize_degree1: G(0) != 0");
  if (g.denominator_degree() != 0)
    throw InconsistencyError(
        "spherical_normalize_degree1: denominator did not collapse");
  if (g.numerator_degree() != 1)
    throw InconsistencyError("spherical_normalize_degree1: degree mismatch");

  CVector a_vec = g.numerator()[1] / g.denominator()[0];
  double na = std::sqrt(a_vec.squaredNorm());
  if (std::abs(na - 1.0) > 1e-6)
    throw InconsistencyError(
        "spherical_normalize_degree1: linear coefficient is not unimodular");

  CMatrix cols(n, 1);
  cols.col(0) = a_vec / na;
  CMatrix u = complete_orthonormal(cols).matrix().adjoint();
  // After u the map is (a_s z) (+) 0 with |a_s| = 1; u already makes the
  // coefficient real positive, so chi only absorbs leftover phase.
  Complex a_s = inner(a_vec, CVector(cols.col(0)));
  DiskAutomorphism chi{Complex(0, 0), -std::arg(a_s)};

  BallAutomorphism psi(b, CMatrix::Identity(n, n), u);

  double worst = 0.0;
  for (int k = 0; k < 16; ++k) {
    Complex z = std::polar(1.0, 2.0 * kPi * (k + 0.43) / 16);
    CVector v = psi.apply(f.evaluate(chi.apply(z)));
    CVector target = CVector::Zero(n);
    target[0] = z;
    worst = std::max(worst, (v - target).cwiseAbs().maxCoeff());
  }
  if (worst > std::max(tol, 1e-8))
    throw InconsistencyError(
        "spherical_normalize_degree1: validation failed (error " +
        std::to_string(worst) + ")");
  return SphericalNormalization{std::move(psi), chi, worst};
}

}  // namespace spheremap
