#include "spheremap/maps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace spheremap {

namespace {

void require_equal_dims(const std::vector<CVector>& coeffs) {
  if (coeffs.empty())
    throw ValidationError("map: empty coefficient list");
  const Eigen::Index n = coeffs[0].size();
  if (n < 1) throw ValidationError("map: target dimension must be positive");
  for (const CVector& c : coeffs) {
    if (c.size() != n)
      throw DimensionError("map: coefficient vectors of unequal dimension");
    if (!c.allFinite())
      throw ValidationError("map: non-finite coefficient entries");
  }
}

std::vector<CVector> trim_coeffs(std::vector<CVector> coeffs, double tol) {
  while (coeffs.size() > 1 && max_abs(coeffs.back()) <= tol)
    coeffs.pop_back();
  return coeffs;
}

}  // namespace

PolynomialSphereMap::PolynomialSphereMap(std::vector<CVector> coeffs,
                                         double trim_tol) {
  require_equal_dims(coeffs);
  coeffs_ = trim_coeffs(std::move(coeffs), trim_tol);
}

CVector PolynomialSphereMap::evaluate(Complex z) const {
  CVector acc = CVector::Zero(target_dim());
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
    acc = acc * z + *it;
  return acc;
}

PolynomialSphereMap PolynomialSphereMap::rotated(double theta) const {
  std::vector<CVector> out = coeffs_;
  for (size_t j = 0; j < out.size(); ++j)
    out[j] *= std::polar(1.0, theta * static_cast<double>(j));
  return PolynomialSphereMap(std::move(out), 0.0);
}

PolynomialSphereMap PolynomialSphereMap::transformed(const CMatrix& u) const {
  if (u.cols() != target_dim())
    throw DimensionError("transformed: unitary dimension mismatch");
  std::vector<CVector> out;
  out.reserve(coeffs_.size());
  for (const CVector& c : coeffs_) out.push_back(u * c);
  return PolynomialSphereMap(std::move(out));
}

PolynomialSphereMap PolynomialSphereMap::padded(int n) const {
  if (n < target_dim())
    throw DimensionError("padded: cannot shrink target dimension");
  std::vector<CVector> out;
  out.reserve(coeffs_.size());
  for (const CVector& c : coeffs_) {
    CVector e = CVector::Zero(n);
    e.head(c.size()) = c;
    out.push_back(std::move(e));
  }
  return PolynomialSphereMap(std::move(out), 0.0);
}

CMatrix PolynomialSphereMap::coefficient_matrix() const {
  CMatrix m(target_dim(), degree() + 1);
  for (int j = 0; j <= degree(); ++j) m.col(j) = coeffs_[j];
  return m;
}

RationalSphereMap::RationalSphereMap(std::vector<CVector> numerator,
                                     Poly denominator, double trim_tol) {
  require_equal_dims(numerator);
  numerator_ = trim_coeffs(std::move(numerator), trim_tol);
  denominator_ = trim(std::move(denominator), trim_tol);
  if (is_zero_poly(denominator_))
    throw ValidationError("rational map: denominator is identically zero");
  for (const Complex& c : denominator_)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw ValidationError("rational map: non-finite denominator entries");
}

RationalSphereMap RationalSphereMap::from_polynomial(
    const PolynomialSphereMap& f) {
  return RationalSphereMap(f.coeffs(), Poly{Complex(1, 0)}, 0.0);
}

int RationalSphereMap::degree() const {
  return std::max(numerator_degree(), denominator_degree());
}

bool RationalSphereMap::is_polynomial(double tol) const {
  if (denominator_degree() == 0) return true;
  for (size_t j = 1; j < denominator_.size(); ++j)
    if (std::abs(denominator_[j]) > tol * std::abs(denominator_[0])) return false;
  return true;
}

PolynomialSphereMap RationalSphereMap::to_polynomial() const {
  if (!is_polynomial())
    throw ValidationError("to_polynomial: denominator is not constant");
  std::vector<CVector> out;
  out.reserve(numerator_.size());
  for (const CVector& c : numerator_) out.push_back(c / denominator_[0]);
  return PolynomialSphereMap(std::move(out));
}

CVector RationalSphereMap::evaluate(Complex z, double pole_tol) const {
  Complex q = poly_eval(denominator_, z);
  double scale = 0.0;
  for (const Complex& c : denominator_) scale = std::max(scale, std::abs(c));
  if (std::abs(q) <= pole_tol * std::max(1.0, scale)) {
    Complex nearest = z;
    double best = std::numeric_limits<double>::infinity();
    for (Complex r : poly_roots(denominator_)) {
      if (std::abs(r - z) < best) {
        best = std::abs(r - z);
        nearest = r;
      }
    }
    std::ostringstream os;
    os << "evaluate: pole near z = (" << nearest.real() << ", "
       << nearest.imag() << ")";
    throw PoleError(os.str(), nearest);
  }
  CVector acc = CVector::Zero(target_dim());
  for (auto it = numerator_.rbegin(); it != numerator_.rend(); ++it)
    acc = acc * z + *it;
  return acc / q;
}

RationalSphereMap RationalSphereMap::rotated(double theta) const {
  std::vector<CVector> num = numerator_;
  for (size_t j = 0; j < num.size(); ++j)
    num[j] *= std::polar(1.0, theta * static_cast<double>(j));
  Poly den = denominator_;
  for (size_t j = 0; j < den.size(); ++j)
    den[j] *= std::polar(1.0, theta * static_cast<double>(j));
  return RationalSphereMap(std::move(num), std::move(den), 0.0);
}

RationalSphereMap RationalSphereMap::transformed(const CMatrix& u) const {
  if (u.cols() != target_dim())
    throw DimensionError("transformed: unitary dimension mismatch");
  std::vector<CVector> num;
  num.reserve(numerator_.size());
  for (const CVector& c : numerator_) num.push_back(u * c);
  return RationalSphereMap(std::move(num), denominator_);
}

RationalSphereMap RationalSphereMap::padded(int n) const {
  if (n < target_dim())
    throw DimensionError("padded: cannot shrink target dimension");
  std::vector<CVector> num;
  num.reserve(numerator_.size());
  for (const CVector& c : numerator_) {
    CVector e = CVector::Zero(n);
    e.head(c.size()) = c;
    num.push_back(std::move(e));
  }
  return RationalSphereMap(std::move(num), denominator_, 0.0);
}

RationalSphereMap RationalSphereMap::scaled_by(const Poly& num_factor,
                                               const Poly& den_factor) const {
  const int n = target_dim();
  std::vector<CVector> num(numerator_.size() + num_factor.size() - 1,
                           CVector::Zero(n));
  for (size_t i = 0; i < numerator_.size(); ++i)
    for (size_t j = 0; j < num_factor.size(); ++j)
      num[i + j] += numerator_[i] * num_factor[j];
  return RationalSphereMap(std::move(num), poly_mul(denominator_, den_factor));
}

RationalSphereMap RationalSphereMap::component_scaled(int comp,
                                                      const Poly& factor) const {
  if (comp < 0 || comp >= target_dim())
    throw DimensionError("component_scaled: component index out of range");
  Poly col(numerator_.size());
  for (size_t j = 0; j < numerator_.size(); ++j) col[j] = numerator_[j][comp];
  Poly scaled = poly_mul(col, factor);
  std::vector<CVector> num(std::max(numerator_.size(), scaled.size()),
                           CVector::Zero(target_dim()));
  for (size_t j = 0; j < numerator_.size(); ++j) num[j] = numerator_[j];
  for (size_t j = 0; j < num.size(); ++j)
    num[j][comp] = j < scaled.size() ? scaled[j] : Complex(0, 0);
  return RationalSphereMap(std::move(num), denominator_);
}

Poly RationalSphereMap::numerator_inner(const CVector& a) const {
  if (a.size() != target_dim())
    throw DimensionError("numerator_inner: vector dimension mismatch");
  Poly out(numerator_.size());
  for (size_t j = 0; j < numerator_.size(); ++j)
    out[j] = inner(numerator_[j], a);
  return out;
}

std::vector<Complex> upper_traces(const std::vector<CVector>& v) {
  if (v.empty()) throw ValidationError("upper_traces: empty list");
  require_equal_dims(v);
  const int d = static_cast<int>(v.size()) - 1;
  std::vector<Complex> lambda(d + 1, Complex(0, 0));
  for (int l = 0; l <= d; ++l)
    for (int j = 0; j + l <= d; ++j) lambda[l] += inner(v[j], v[j + l]);
  return lambda;
}

std::vector<Complex> scalar_traces(const Poly& q) {
  const int d = poly_degree(q);
  std::vector<Complex> mu(d + 1, Complex(0, 0));
  for (int l = 0; l <= d; ++l)
    for (int j = 0; j + l <= d; ++j) mu[l] += q[j] * std::conj(q[j + l]);
  return mu;
}

namespace {

VerificationReport make_report(std::vector<Complex> residuals, double tol) {
  VerificationReport rep;
  rep.residuals = std::move(residuals);
  rep.max_residual = 0.0;
  for (const Complex& r : rep.residuals)
    rep.max_residual = std::max(rep.max_residual, std::abs(r));
  rep.is_sphere_map = rep.max_residual < tol;
  return rep;
}

}  // namespace

VerificationReport verify_polynomial(const PolynomialSphereMap& f, double tol) {
  std::vector<Complex> res = upper_traces(f.coeffs());
  res[0] -= 1.0;
  VerificationReport rep = make_report(std::move(res), tol);
  const int K = std::max(16, 4 * (f.degree() + 1));
  rep.circle_residual = circle_sample_residual(f, K);
  return rep;
}

VerificationReport verify_rational(const RationalSphereMap& f, double tol) {
  std::vector<Complex> lam = upper_traces(f.numerator());
  std::vector<Complex> mu = scalar_traces(f.denominator());
  const size_t n = std::max(lam.size(), mu.size());
  std::vector<Complex> res(n, Complex(0, 0));
  for (size_t l = 0; l < n; ++l) {
    if (l < lam.size()) res[l] += lam[l];
    if (l < mu.size()) res[l] -= mu[l];
  }
  VerificationReport rep = make_report(std::move(res), tol);
  const int K = std::max(16, 4 * (f.degree() + 1));
  try {
    rep.circle_residual = circle_sample_residual(f, K);
  } catch (const PoleError&) {
    rep.circle_residual = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

double circle_sample_residual(const PolynomialSphereMap& f, int K) {
  if (K < 1) throw ValidationError("circle_sample_residual: K must be >= 1");
  double worst = 0.0;
  for (int k = 0; k < K; ++k) {
    Complex z = std::polar(1.0, 2.0 * kPi * k / K);
    worst = std::max(worst, std::abs(f.evaluate(z).squaredNorm() - 1.0));
  }
  return worst;
}

double circle_sample_residual(const RationalSphereMap& f, int K,
                              double circle_tol) {
  if (K < 1) throw ValidationError("circle_sample_residual: K must be >= 1");
  DenominatorForm form = denominator_form(f.denominator(), circle_tol);
  if (!form.on_circle.empty()) {
    Complex a = form.roots[form.on_circle.front()];
    std::ostringstream os;
    os << "circle_sample_residual: denominator root on the unit circle near ("
       << a.real() << ", " << a.imag() << ")";
    throw PoleError(os.str(), a);
  }
  double worst = 0.0;
  for (int k = 0; k < K; ++k) {
    Complex z = std::polar(1.0, 2.0 * kPi * k / K);
    worst = std::max(worst, std::abs(f.evaluate(z).squaredNorm() - 1.0));
  }
  return worst;
}

namespace {

// Multiset of polynomial roots with nearest-match removal.
struct RootBag {
  std::vector<Complex> roots;
  std::vector<bool> used;

  explicit RootBag(std::vector<Complex> r)
      : roots(std::move(r)), used(roots.size(), false) {}

  // Index of nearest unused root within tol, or -1.
  int take_near(Complex a, double tol) {
    int best = -1;
    double best_d = tol;
    for (size_t i = 0; i < roots.size(); ++i) {
      if (used[i]) continue;
      double d = std::abs(roots[i] - a);
      if (d <= best_d) {
        best_d = d;
        best = static_cast<int>(i);
      }
    }
    if (best >= 0) used[best] = true;
    return best;
  }
};

}  // namespace

ReduceResult reduce_lowest_terms(const RationalSphereMap& f, double root_tol) {
  const int n = f.target_dim();
  std::vector<std::string> warnings;

  Poly q = f.denominator();
  if (poly_degree(trim(q)) == 0)
    return ReduceResult{f, {}, 0};

  std::vector<Complex> q_roots = poly_roots(q);

  // Component coefficient polynomials and their root bags.
  std::vector<Poly> comps(n);
  std::vector<std::optional<RootBag>> bags(n);
  bool any_nonzero = false;
  for (int i = 0; i < n; ++i) {
    Poly c(f.numerator().size());
    for (size_t j = 0; j < f.numerator().size(); ++j)
      c[j] = f.numerator()[j][i];
    comps[i] = trim(c);
    if (!is_zero_poly(comps[i])) {
      any_nonzero = true;
      if (poly_degree(comps[i]) >= 1)
        bags[i].emplace(poly_roots(comps[i]));
      else
        bags[i].emplace(std::vector<Complex>{});
    }
  }
  if (!any_nonzero)
    throw ValidationError("reduce_lowest_terms: numerator is identically zero");

  // A q-root is shared when every nonzero component has a root within
  // root_tol of it. Zero components divide everything.
  std::vector<bool> shared(q_roots.size(), false);
  std::vector<std::vector<int>> matched(q_roots.size());
  for (size_t k = 0; k < q_roots.size(); ++k) {
    bool ok = true;
    std::vector<int> picks(n, -1);
    for (int i = 0; i < n && ok; ++i) {
      if (!bags[i]) continue;  // zero component
      picks[i] = bags[i]->take_near(q_roots[k], root_tol);
      if (picks[i] < 0) ok = false;
    }
    if (!ok) {
      // Return any provisional picks for this root.
      for (int i = 0; i < n; ++i)
        if (bags[i] && picks[i] >= 0) bags[i]->used[picks[i]] = false;
    } else {
      shared[k] = true;
      matched[k] = picks;
    }
  }

  // Ambiguity: q-roots closer than 10*root_tol with differing shared status.
  std::vector<bool> blocked(q_roots.size(), false);
  for (size_t a = 0; a < q_roots.size(); ++a)
    for (size_t b = a + 1; b < q_roots.size(); ++b)
      if (std::abs(q_roots[a] - q_roots[b]) < 10 * root_tol &&
          shared[a] != shared[b]) {
        blocked[a] = blocked[b] = true;
        std::ostringstream os;
        os << "ambiguous root cluster near (" << q_roots[a].real() << ", "
           << q_roots[a].imag() << "): cancellation skipped";
        warnings.push_back(os.str());
      }

  int cancelled = 0;
  Poly new_q = q;
  for (size_t k = 0; k < q_roots.size(); ++k) {
    if (!shared[k] || blocked[k]) continue;
    new_q = poly_deflate(new_q, q_roots[k]);
    for (int i = 0; i < n; ++i) {
      if (!bags[i]) continue;
      comps[i] = poly_deflate(comps[i], bags[i]->roots[matched[k][i]]);
    }
    ++cancelled;
  }
  if (cancelled == 0) return ReduceResult{f, std::move(warnings), 0};

  size_t max_len = 1;
  for (int i = 0; i < n; ++i)
    if (bags[i]) max_len = std::max(max_len, comps[i].size());
  std::vector<CVector> num(max_len, CVector::Zero(n));
  for (int i = 0; i < n; ++i) {
    if (!bags[i]) continue;
    for (size_t j = 0; j < comps[i].size(); ++j) num[j][i] = comps[i][j];
  }
  RationalSphereMap reduced(std::move(num), std::move(new_q));

  // Spot-check: the reduced map agrees with the original away from the
  // cancelled roots.
  std::mt19937_64 rng(0x5ee0u);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  int checked = 0;
  for (int attempt = 0; attempt < 64 && checked < 16; ++attempt) {
    Complex z = std::polar(1.0, angle(rng));
    CVector a, b;
    try {
      a = f.evaluate(z);
      b = reduced.evaluate(z);
    } catch (const PoleError&) {
      continue;
    }
    if ((a - b).cwiseAbs().maxCoeff() > 1e-8)
      throw InconsistencyError(
          "reduce_lowest_terms: reduced map deviates from input");
    ++checked;
  }
  return ReduceResult{std::move(reduced), std::move(warnings), cancelled};
}

DenominatorForm denominator_form(const Poly& q_in, double circle_tol) {
  Poly q = trim(q_in);
  if (is_zero_poly(q))
    throw ValidationError("denominator_form: zero polynomial");
  DenominatorForm form;
  const int d = poly_degree(q);
  Complex lead = q[d];
  if (d == 0) {
    form.c = lead;
    return form;
  }
  std::vector<Complex> zroots = poly_roots(q);
  // Roots at the origin give the z^m factor.
  form.c = lead;
  for (Complex r : zroots) {
    if (std::abs(r) < 1e-10) {
      ++form.m;
      continue;
    }
    // z - r = (-r)(1 - conj(a) z) with a = 1/conj(r)
    form.roots.push_back(Complex(1, 0) / std::conj(r));
    form.c *= -r;
  }
  std::sort(form.roots.begin(), form.roots.end(), [](Complex a, Complex b) {
    double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma < mb;
    return std::arg(a) < std::arg(b);
  });
  for (size_t i = 0; i < form.roots.size(); ++i) {
    double mod = std::abs(form.roots[i]);
    if (std::abs(mod - 1.0) < circle_tol)
      form.on_circle.push_back(static_cast<int>(i));
    else if (mod > 1.0)
      form.inside_disk.push_back(static_cast<int>(i));
  }
  return form;
}

void check_denominator_consistency(const RationalSphereMap& f, double root_tol,
                                   double circle_tol) {
  ReduceResult red = reduce_lowest_terms(f, root_tol);
  VerificationReport rep = verify_rational(red.map);
  if (!rep.is_sphere_map) return;  // nothing to assert for non-sphere-maps
  DenominatorForm form = denominator_form(red.map.denominator(), circle_tol);
  if (!form.on_circle.empty()) {
    Complex a = form.roots[form.on_circle.front()];
    std::ostringstream os;
    os << "reduced sphere map with denominator root on the circle near ("
       << a.real() << ", " << a.imag() << ")";
    throw InconsistencyError(os.str());
  }
}

bool has_pole_in_closed_disk(const RationalSphereMap& f, double circle_tol) {
  Poly q = trim(f.denominator());
  if (poly_degree(q) == 0) return false;
  DenominatorForm form = denominator_form(q, circle_tol);
  // q-roots in the open disk appear as m > 0 or |a_k| > 1; circle roots
  // count as poles of the closed disk as well.
  return form.m > 0 || !form.inside_disk.empty() || !form.on_circle.empty();
}

bool degree_gap_check(const RationalSphereMap& f, double tol) {
  ReduceResult red = reduce_lowest_terms(f);
  if (red.cancelled != 0)
    throw PreconditionError("degree_gap_check: map is not in lowest terms");
  VerificationReport rep = verify_rational(f, tol);
  if (!rep.is_sphere_map)
    throw PreconditionError("degree_gap_check: not a verified sphere map");
  Complex q0 = poly_eval(f.denominator(), Complex(0, 0));
  if (std::abs(q0) < 1e-12)
    throw PreconditionError("degree_gap_check: denominator vanishes at 0");
  CVector f0 = f.evaluate(Complex(0, 0));
  if (max_abs(f0) > tol)
    throw PreconditionError("degree_gap_check: F(0) != 0");
  return f.numerator_degree() > f.denominator_degree();
}

}  // namespace spheremap
