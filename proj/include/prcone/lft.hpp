#pragma once

// J-contractive 2n x 2n block matrices W and the linear fractional
// transformation T_W[A] = (W11 A + W12)(W21 A + W22)^{-1}, with the witness
// push-forwards carrying A ≺ B and A ∼ B to their images.
//
// J = [[0, -I], [-I, 0]], Jhat = diag(I, -I), Wt = Jhat W^{-1} Jhat.

#include <cstdint>
#include <optional>

#include "prcone/pr_relations.hpp"

namespace prcone {

struct SignaturePair {
  Index n = 0;
  CMatrix J;
  CMatrix Jhat;

  static SignaturePair make(Index n);
};

class JContractiveW {
 public:
  /// Checks J - W^*JW >= -tol * max(1, ||W||^2). Caches Wt when
  /// cond(W) < 1/tol. Throws NotJContractive or DimensionError.
  static JContractiveW validate(const CMatrix& W, double tol = kDefaultTol);

  Index n() const { return n_; }
  const CMatrix& W() const { return W_; }
  const CMatrix& W11() const { return W11_; }
  const CMatrix& W12() const { return W12_; }
  const CMatrix& W21() const { return W21_; }
  const CMatrix& W22() const { return W22_; }

  bool invertible() const { return invertible_; }
  /// Requires invertible(); throws SingularMatrix otherwise.
  const CMatrix& Wt() const;
  const CMatrix& Wt11() const;
  const CMatrix& Wt12() const;
  const CMatrix& Wt21() const;
  const CMatrix& Wt22() const;

  /// eigmin(J - W^*JW)
  double contractivity_margin() const { return margin_; }
  /// eigmin of [[2Re(W11^*W21), W21^*W12 + W11^*W22 - I], [., 2Re(W12^*W22)]]
  double block_margin() const { return block_margin_; }
  /// ||block criterion - (J - W^*JW)||
  double block_residual() const { return block_residual_; }
  /// eigmin(J - Wt^*JWt); NaN when W is not invertible.
  double wt_margin() const { return wt_margin_; }
  /// ||Wt - Jhat W^{-1} Jhat|| measured against an independent solve.
  double wt_residual() const { return wt_residual_; }
  double cond_W() const { return cond_W_; }
  double cond_W22() const { return cond_W22_; }
  double tol() const { return tol_; }

 private:
  JContractiveW() = default;

  Index n_ = 0;
  CMatrix W_, W11_, W12_, W21_, W22_;
  CMatrix Wt_, Wt11_, Wt12_, Wt21_, Wt22_;
  bool invertible_ = false;
  double margin_ = 0.0;
  double block_margin_ = 0.0;
  double block_residual_ = 0.0;
  double wt_margin_ = 0.0;
  double wt_residual_ = 0.0;
  double cond_W_ = 0.0;
  double cond_W22_ = 0.0;
  double tol_ = kDefaultTol;
};

/// cond(W21 A + W22) < 1/tol.
bool in_domain(const JContractiveW& W, const PRMatrix& A,
               double tol = kDefaultTol);

struct LftEval {
  CMatrix value;  // (W11 A + W12)(W21 A + W22)^{-1}
  double denom_cond = 0.0;
  /// (Wt11 + A Wt21)^{-1}(Wt12 + A Wt22), when W is invertible.
  std::optional<CMatrix> alt_value;
  std::optional<double> alt_denom_cond;
  /// ||value - alt_value|| / max(1, ||value||); 0 without alt_value.
  double agreement = 0.0;
  /// ||W [A; I] - [T; I](W21 A + W22)||
  double right_intertwine = 0.0;
  /// ||[I, A] Wt - (Wt11 + A Wt21)[I, T]||; 0 without alt_value.
  double left_intertwine = 0.0;
};

/// Evaluates T_W[A] in both forms. Throws OutOfDomain when W21 A + W22 is
/// not invertible within tol.
LftEval lft_evaluate(const JContractiveW& W, const CMatrix& A,
                     double tol = kDefaultTol);

/// T_W[A] as a validated PRMatrix. When W is invertible the two forms must
/// agree and the two domain criteria must coincide, otherwise
/// InvariantViolation.
PRMatrix apply(const JContractiveW& W, const PRMatrix& A,
               double tol = kDefaultTol);

struct UseIneqReport {
  double margin_right_A = 0.0;  // eigmin(Re T[A] - D_A^{-*} Re(A) D_A^{-1})
  double margin_left_A = 0.0;   // eigmin(Re T[A] - E_A^{-1} Re(A) E_A^{-*})
  double margin_right_B = 0.0;
  double margin_left_B = 0.0;
  double identity_residual = 0.0;  // T[A]-T[B] vs E_A^{-1}(A-B)D_B^{-1}
  double swapped_residual = 0.0;   // T[A]-T[B] vs E_B^{-1}(A-B)D_A^{-1}
  double scale = 0.0;              // ||T[A]|| + ||T[B]||

  double min_margin() const;
  bool ok(double tol) const;
};

/// D = W21 A + W22, E = Wt11 + A Wt21. Requires invertible W.
UseIneqReport useineq_check(const JContractiveW& W, const PRMatrix& A,
                            const PRMatrix& B, double tol = kDefaultTol);

struct ContractionWitnesses {
  CMatrix M;   // M R_T = R_A D^{-1}, support(T) -> support(A) coordinates
  CMatrix Mt;  // Mt R_T = R_A E^{-*}
  double norm_M = 0.0;
  double norm_Mt = 0.0;
  double residual_M = 0.0;
  double residual_Mt = 0.0;
};

/// Throws InvariantViolation when either solve leaves a residual or either
/// norm exceeds 1 + tol. No clipping is applied.
ContractionWitnesses contraction_witnesses(const JContractiveW& W,
                                           const PRMatrix& A,
                                           double tol = kDefaultTol);

struct PushResult {
  CMatrix witness;
  PRMatrix TA;
  PRMatrix TB;
  double residual = 0.0;
  double threshold = 0.0;
  double input_norm = 0.0;
  double output_norm = 0.0;
};

/// Xt_W = Mt_A^* Xt M_B, with T[A] - T[B] = R_{T[A]}^* Xt_W R_{T[B]}.
/// Xt is rank(A) x rank(B). Throws InvariantViolation when the
/// reconstruction fails or ||Xt_W|| > ||Xt|| + tol.
PushResult equiv_push(const JContractiveW& W, const PRMatrix& A,
                      const PRMatrix& B, const CMatrix& Xt,
                      double tol = kDefaultTol);

/// X_W = Mt_B^* (I - X R_B Wt21 E_A^{-1} R_B^*) X M_B, with
/// T[A] - T[B] = R_{T[B]}^* X_W R_{T[B]}.
PushResult prec_push(const JContractiveW& W, const PRMatrix& A,
                     const PRMatrix& B, const CMatrix& X,
                     double tol = kDefaultTol);

/// W = exp(J N) with Re(N) <= 0. With invertible = false, W is multiplied by
/// a J-contractive factor of determinant ~1e-12 so that Wt is not cached.
JContractiveW sample_jcontractive(Index n, bool invertible, std::uint64_t seed,
                                  double tol = kDefaultTol);

/// exp(J N) for the given N; throws when Re(N) is not negative semidefinite.
CMatrix jcontractive_from_generator(const CMatrix& N, double tol = kDefaultTol);

}  // namespace prcone
