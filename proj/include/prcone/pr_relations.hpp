#pragma once

// Positive-real matrices and decision procedures for the pre-order A ≺ B
// (A - B = Re(B)^{1/2} X Re(B)^{1/2}, X acting on the support of Re(B)) and
// the equivalence A ∼ B (A ≺ B and B ≺ A).
//
// Witness operators live in the orthonormal coordinates of the relevant
// support subspace, never padded to the ambient dimension. For a PRMatrix
// with support basis U (n x k) and kept square-root eigenvalues d, the root
// factor R = diag(d) U^* is k x n and satisfies R^* R = Re(A); witnesses are
// stated in terms of R.

#include <cstdint>
#include <optional>
#include <string>

#include "prcone/linalg.hpp"

namespace prcone {

class NotComparable : public Error {
 public:
  NotComparable(double residual, const std::string& what)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class PRMatrix {
 public:
  /// Validates Re(A) >= -tol * ||A|| and caches every derived quantity.
  /// strict_rho defaults to 1e-8 * ||A||. Throws NotPositiveReal.
  static PRMatrix make(const CMatrix& A, double tol = kDefaultTol,
                       std::optional<double> strict_rho = std::nullopt);

  Index dim() const { return value_.rows(); }
  Index rank() const { return support_.rank; }
  const CMatrix& value() const { return value_; }
  const CMatrix& re_part() const { return re_part_; }
  const CMatrix& im_part() const { return im_part_; }
  const CMatrix& re_sqrt() const { return re_sqrt_; }
  const CMatrix& re_pinv_sqrt() const { return re_pinv_sqrt_; }
  /// Support of Re(A).
  const SupportBasis& support() const { return support_; }
  /// Support of Im(A). Exposed for completeness; no check depends on it.
  const SupportBasis& im_support() const { return im_support_; }
  /// eigmin(Re(A)).
  double pr_margin() const { return pr_margin_; }
  double strict_threshold() const { return strict_rho_; }
  /// pr_margin >= strict_threshold, i.e. membership in the strict class.
  bool is_strict() const { return pr_margin_ >= strict_rho_ && dim() > 0; }
  /// R = diag(d) U^*, rank x n.
  const CMatrix& root_factor() const { return root_; }
  /// U diag(d)^{-1}, n x rank; R * R^+ = I.
  const CMatrix& root_factor_pinv() const { return root_pinv_; }
  double norm() const { return norm_; }

 private:
  PRMatrix() = default;

  CMatrix value_;
  CMatrix re_part_;
  CMatrix im_part_;
  CMatrix re_sqrt_;
  CMatrix re_pinv_sqrt_;
  SupportBasis support_;
  SupportBasis im_support_;
  CMatrix root_;
  CMatrix root_pinv_;
  double pr_margin_ = 0.0;
  double strict_rho_ = 0.0;
  double norm_ = 0.0;
};

inline PRMatrix make_pr(const CMatrix& A, double tol = kDefaultTol,
                        std::optional<double> strict_rho = std::nullopt) {
  return PRMatrix::make(A, tol, strict_rho);
}

struct PrecWitness {
  CMatrix X;  // k x k in the support coordinates of B
  CMatrix Y;  // X^* + 2I
  /// 1/||X||; +infinity when X = 0.
  double r = 0.0;
  /// ||(A - B) - Re(B)^{1/2} X Re(B)^{1/2}||
  double residual = 0.0;
  CMatrix basis;  // support basis of B

  /// ||Y - X^* - 2I||
  double algebra_residual() const;
  /// eigmin(Re(X) + I); nonnegative up to roundoff.
  double sum_margin() const;
};

struct PrecResult {
  std::optional<PrecWitness> witness;
  double residual = 0.0;
  double threshold = 0.0;

  bool comparable() const { return witness.has_value(); }
  explicit operator bool() const { return comparable(); }
};

/// Decides A ≺ B by compressing A - B to the support of Re(B) and testing
/// the reconstruction residual against tol * (||A|| + ||B||).
PrecResult prec_check(const PRMatrix& A, const PRMatrix& B,
                      double tol = kDefaultTol);

/// As prec_check but throws NotComparable on failure.
PrecWitness certify_prec(const PRMatrix& A, const PRMatrix& B,
                         double tol = kDefaultTol);

struct EpsDiscReport {
  double min_margin = 0.0;
  Complex worst_eps;
  /// ||A|| + ||B||, for scaling tolerances on min_margin.
  double scale = 0.0;
};

/// min over n_samples equispaced eps on |eps| = r of eigmin(Re(B + eps(A-B))).
EpsDiscReport prec_check_eps(const PRMatrix& A, const PRMatrix& B, double r,
                             int n_samples);

struct EquivWitness {
  CMatrix Xt;  // maps support(B) coordinates to support(A) coordinates
  CMatrix Yt;
  CMatrix M;      // Re(A)^{1/2} = M Re(B)^{1/2}
  CMatrix M_inv;  // inverse of M
  CMatrix basis_A;
  CMatrix basis_B;
  PrecWitness forward;   // A ≺ B, coordinates of support(B)
  PrecWitness backward;  // B ≺ A, coordinates of support(A)

  double recon_residual = 0.0;    // ||(A-B) - Re(A)^{1/2} Xt Re(B)^{1/2}||
  double sum_residual = 0.0;      // ||(Xt+Yt) Re(B)^{1/2} - 2 Re(A)^{1/2}||
  double factor_residual = 0.0;   // ||Re(A)^{1/2} - M Re(B)^{1/2}||
  double inverse_residual = 0.0;  // max(||M M_inv - I||, ||M M' - I||)
  double gram_residual = 0.0;     // ||M^{-*} M^{-1} - (X'+Y')/2||
};

enum class EquivFailure {
  none,
  forward,           // A ≺ B failed
  backward,          // B ≺ A failed
  support_mismatch,  // ranks differ
  singular_factor,   // M not invertible within tolerance
  invariant,         // a witness identity failed its residual check
};

const char* to_string(EquivFailure f);

struct EquivResult {
  std::optional<EquivWitness> witness;
  EquivFailure failure = EquivFailure::none;
  std::string detail;

  bool equivalent() const { return witness.has_value(); }
  explicit operator bool() const { return equivalent(); }
};

EquivResult equiv_check(const PRMatrix& A, const PRMatrix& B,
                        double tol = kDefaultTol);

/// M = Re(A)^{1/2} Re(B)^{+1/2} restricted to supports, as a map from
/// support(B) coordinates to support(A) coordinates. Rechecks the witness
/// (X, Y) first; throws InvariantViolation when it does not certify A ≺ B.
CMatrix douglas_factor(const PRMatrix& A, const PRMatrix& B, const CMatrix& X,
                       const CMatrix& Y, double tol = kDefaultTol);

struct DerivedPropsReport {
  bool adjoint_ok = false;      // A^* ≺ B^*
  bool support_ok = false;      // Ran Re(A) ⊂ Ran Re(B)
  bool complement_ok = false;   // A and B agree off the support of Re(B)
  bool congruence_ok = false;   // C^* A C ≺ C^* B C
  double complement_residual = 0.0;       // ||(A - B) P_perp||
  double complement_re_residual = 0.0;    // ||(A + A^*) P_perp||

  bool all() const {
    return adjoint_ok && support_ok && complement_ok && congruence_ok;
  }
};

/// Consequences of a certified A ≺ B. C is n x m for any m.
DerivedPropsReport derived_props_check(const PRMatrix& A, const PRMatrix& B,
                                       const PrecWitness& witness,
                                       const CMatrix& C,
                                       double tol = kDefaultTol);

/// Q with Q N1 = N2 mapping the closed range of N1 onto that of N2, for
/// N1, N2 related by N1^* N1 ± N2^* N2 = Re(N2^* Z N1).
struct TwoSidedDouglas {
  CMatrix Q;          // ambient representation N2 N1^+
  CMatrix Q_inv;      // N1 N2^+
  double norm_Q = 0.0;
  double norm_Q_inv = 0.0;
  double residual = 0.0;  // ||Q N1 - N2||
  bool kernels_equal = false;
};

TwoSidedDouglas douglas_two_sided(const CMatrix& N1, const CMatrix& N2,
                                  double tol = kDefaultTol);

enum class DouglasSign { plus, minus };

/// Bound on ||Q|| and ||Q^{-1}|| given ||Z||. Plus case: ||Z||. Minus case:
/// the positive root of t^2 = 1 + ||Z|| t.
double douglas_bound(double z_norm, DouglasSign sign);

// Random instance generators for property testing.

/// A = G^* G + iH, G re_rank x n Gaussian, H Gaussian Hermitian.
PRMatrix sample_pr(Index n, Index re_rank, std::uint64_t seed,
                   double tol = kDefaultTol);

struct PrecPair {
  PRMatrix A;
  CMatrix X_true;  // support(B) coordinates
};

/// A = B + Re(B)^{1/2} X Re(B)^{1/2} with ||Re(X)|| = re_x_bound < 1 and
/// Im(X) Gaussian Hermitian scaled by im_scale.
PrecPair sample_prec_pair(const PRMatrix& B, double re_x_bound,
                          std::uint64_t seed, double im_scale = 1.0,
                          double tol = kDefaultTol);

}  // namespace prcone
