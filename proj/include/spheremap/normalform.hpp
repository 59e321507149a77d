#pragma once

#include "spheremap/maps.hpp"
#include "spheremap/moduli.hpp"
#include "spheremap/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace spheremap {

// Partial normal form of a degree-d polynomial sphere map: the (d+1)x(d+1)
// matrix whose column j holds the coordinates of A_j in the constructed
// orthonormal basis e_0..e_d, together with its parameter ledger.
struct NormalFormMatrix {
  CMatrix a;                    // (d+1)x(d+1), column j = A_j
  Complex alpha = Complex(0, 0);
  double norm_a0 = 0.0;
  double norm_ad = 0.0;
  // Composite target unitary applied to the (padded) input coefficients and
  // the source rotation used, so that
  //   applied_target_unitary * pad(A_j) e^{i j theta} = column j of a
  // (rows past d are zero).
  CMatrix applied_target_unitary;
  double applied_source_rotation = 0.0;
  std::vector<std::string> degeneracies;

  int degree() const { return static_cast<int>(a.rows()) - 1; }
  CMatrix inner_matrix() const {
    const int d = degree();
    if (d < 2) return CMatrix(0, 0);
    return a.block(1, 1, d - 1, d - 1);
  }
  PolynomialSphereMap as_map() const;
};

struct StructureReport {
  bool passes = false;
  double zero_pattern_residual = 0.0;
  double diagonal_imag_residual = 0.0;
  double diagonal_negativity = 0.0;
  double alpha_consistency_residual = 0.0;
  double trace_residual = 0.0;           // |sum |a_jk|^2 - 1|
  double identity_residual = 0.0;        // max upper-trace residual of a
  std::optional<double> eq6_residual;    // d = 2
  std::optional<double> eq71_residual;   // d = 3
  std::optional<double> eq72_residual;   // d = 3
  double max_residual() const;
};

struct NormalFormOptions {
  double tol = default_tol().identity;
  // Apply the optional source rotation making alpha real and non-negative.
  bool make_alpha_real = false;
};

NormalFormMatrix normal_form(const PolynomialSphereMap& f,
                             const NormalFormOptions& opts = {});

StructureReport check_normal_structure(const NormalFormMatrix& nf,
                                       double tol = 1e-8);

// Canonical families.
struct GParams {
  double alpha = 0.0;  // [0, pi/2)
  double r = 0.0;      // [0, 1)
};

struct JParams {
  double alpha = 0.0;                 // [0, pi/2)
  double beta = 0.0;                  // [0, pi/2)
  std::optional<double> gamma;        // [0, pi/2], present for N >= 3
  std::vector<std::string> degeneracies;
};

// G_{alpha,r} = (cos a (r-z)/(1-rz), sin a, 0, ..., 0) into C^N, N >= 2.
RationalSphereMap make_G(const GParams& p, int n);

// J_{alpha,beta} (gamma absent) or J_{alpha,beta,gamma} (+) 0 into C^N.
PolynomialSphereMap make_J(const JParams& p, int n);

struct Degree1Classification {
  GParams params;
  EquivalenceWitness witness;  // G = U o F o rotation(theta)
};

Degree1Classification classify_degree1(const RationalSphereMap& f,
                                       double tol = 1e-8);

struct Degree2Classification {
  JParams params;
  EquivalenceWitness witness;  // J = U o f o rotation(theta)
};

Degree2Classification classify_degree2(const PolynomialSphereMap& f,
                                       double tol = 1e-8);

// Degree-1 rational maps are compared through their canonical parameters.
std::optional<EquivalenceWitness> unitarily_equivalent_degree1(
    const RationalSphereMap& f, const RationalSphereMap& g, double tol = 1e-8);

// Automorphism of the unit ball: w -> post * phi_a(pre * w) with the
// standard involution phi_a; phi_0 = -identity.
class BallAutomorphism {
 public:
  BallAutomorphism(CVector center, CMatrix pre_unitary, CMatrix post_unitary);
  static BallAutomorphism involution(CVector center);  // pre = post = I

  const CVector& center() const { return a_; }
  const CMatrix& pre_unitary() const { return pre_; }
  const CMatrix& post_unitary() const { return post_; }
  int dim() const { return static_cast<int>(a_.size()); }

  CVector apply(const CVector& w) const;
  // Symbolic composition with a rational map into the same ball.
  RationalSphereMap compose(const RationalSphereMap& f) const;

 private:
  CVector a_;
  CMatrix pre_, post_;
};

// Mobius automorphism of the disk: z -> e^{i theta} (z - a)/(1 - conj(a) z).
struct DiskAutomorphism {
  Complex a = Complex(0, 0);
  double theta = 0.0;
  Complex apply(Complex z) const;
};

struct SphericalNormalization {
  BallAutomorphism psi;
  DiskAutomorphism chi;
  double pointwise_error = 0.0;  // of psi o F o chi vs z (+) 0
};

// Prop-style normalization of a degree-1 proper map to z (+) 0.
SphericalNormalization spherical_normalize_degree1(
    const RationalSphereMap& f, double tol = 1e-8);

}  // namespace spheremap
