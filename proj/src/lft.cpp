#include "prcone/lft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "prcone/random.hpp"

namespace prcone {

namespace {

CMatrix eye(Index k) { return CMatrix::Identity(k, k); }

// X D^{-1} via LU; the caller has already screened cond(D).
CMatrix rdiv(const CMatrix& X, const CMatrix& D) {
  return D.transpose().partialPivLu().solve(X.transpose()).transpose();
}

CMatrix ldiv(const CMatrix& D, const CMatrix& X) {
  return D.partialPivLu().solve(X);
}

void require_invertible(const JContractiveW& W, const char* what) {
  if (!W.invertible()) {
    throw SingularMatrix(W.cond_W(),
                         std::string(what) + ": W is not invertible (cond " +
                             std::to_string(W.cond_W()) + ")");
  }
}

// Everything the push-forwards need about one point A.
struct Pushed {
  PRMatrix T;
  CMatrix D;
  CMatrix E;
  ContractionWitnesses cw;
};

Pushed push_point(const JContractiveW& W, const PRMatrix& A, double tol) {
  PRMatrix T = apply(W, A, tol);
  CMatrix D = W.W21() * A.value() + W.W22();
  CMatrix E = W.Wt11() + A.value() * W.Wt21();
  ContractionWitnesses cw = contraction_witnesses(W, A, tol);
  return Pushed{std::move(T), std::move(D), std::move(E), std::move(cw)};
}

}  // namespace

SignaturePair SignaturePair::make(Index n) {
  SignaturePair s;
  s.n = n;
  s.J = CMatrix::Zero(2 * n, 2 * n);
  s.J.topRightCorner(n, n) = -eye(n);
  s.J.bottomLeftCorner(n, n) = -eye(n);
  s.Jhat = CMatrix::Zero(2 * n, 2 * n);
  s.Jhat.topLeftCorner(n, n) = eye(n);
  s.Jhat.bottomRightCorner(n, n) = -eye(n);
  return s;
}

JContractiveW JContractiveW::validate(const CMatrix& W, double tol) {
  require_square(W, "validate_w");
  require_finite(W, "validate_w");
  if (W.rows() % 2 != 0 || W.rows() == 0) {
    throw DimensionError("validate_w: W must be 2n x 2n with n >= 1");
  }
  JContractiveW out;
  const Index n = W.rows() / 2;
  out.n_ = n;
  out.tol_ = tol;
  out.W_ = W;
  out.W11_ = W.topLeftCorner(n, n);
  out.W12_ = W.topRightCorner(n, n);
  out.W21_ = W.bottomLeftCorner(n, n);
  out.W22_ = W.bottomRightCorner(n, n);

  const SignaturePair sig = SignaturePair::make(n);
  const CMatrix crit = symmetrize(sig.J - W.adjoint() * sig.J * W);
  out.margin_ = eigmin_herm(crit);
  const double wnorm = opnorm(W);
  const double band = tol * std::max(1.0, wnorm * wnorm);
  if (out.margin_ < -band) {
    throw NotJContractive(-out.margin_,
                          "validate_w: eigmax(W*JW - J) = " +
                              std::to_string(-out.margin_) + " > 0");
  }

  CMatrix block(2 * n, 2 * n);
  const CMatrix& a = out.W11_;
  const CMatrix& b = out.W12_;
  const CMatrix& c = out.W21_;
  const CMatrix& d = out.W22_;
  block.topLeftCorner(n, n) = 2.0 * herm_part(a.adjoint() * c);
  block.topRightCorner(n, n) = c.adjoint() * b + a.adjoint() * d - eye(n);
  block.bottomLeftCorner(n, n) = block.topRightCorner(n, n).adjoint();
  block.bottomRightCorner(n, n) = 2.0 * herm_part(b.adjoint() * d);
  out.block_margin_ = eigmin_herm(symmetrize(block));
  out.block_residual_ = opnorm(block - crit);

  out.cond_W22_ = cond(out.W22_);
  if (!(out.cond_W22_ <= 1.0 / tol)) {
    throw InvariantViolation(out.cond_W22_,
                             "validate_w: W22 is singular for a J-contractive W");
  }

  out.cond_W_ = cond(W);
  out.invertible_ = out.cond_W_ <= 1.0 / tol;
  out.wt_margin_ = std::numeric_limits<double>::quiet_NaN();
  if (out.invertible_) {
    const CMatrix Winv = W.partialPivLu().inverse();
    out.Wt_ = sig.Jhat * Winv * sig.Jhat;
    out.Wt11_ = out.Wt_.topLeftCorner(n, n);
    out.Wt12_ = out.Wt_.topRightCorner(n, n);
    out.Wt21_ = out.Wt_.bottomLeftCorner(n, n);
    out.Wt22_ = out.Wt_.bottomRightCorner(n, n);
    out.wt_residual_ = opnorm(W * (sig.Jhat * out.Wt_ * sig.Jhat) - eye(2 * n));
    out.wt_margin_ =
        eigmin_herm(symmetrize(sig.J - out.Wt_.adjoint() * sig.J * out.Wt_));
  }
  return out;
}

const CMatrix& JContractiveW::Wt() const {
  require_invertible(*this, "Wt");
  return Wt_;
}
const CMatrix& JContractiveW::Wt11() const {
  require_invertible(*this, "Wt11");
  return Wt11_;
}
const CMatrix& JContractiveW::Wt12() const {
  require_invertible(*this, "Wt12");
  return Wt12_;
}
const CMatrix& JContractiveW::Wt21() const {
  require_invertible(*this, "Wt21");
  return Wt21_;
}
const CMatrix& JContractiveW::Wt22() const {
  require_invertible(*this, "Wt22");
  return Wt22_;
}

bool in_domain(const JContractiveW& W, const PRMatrix& A, double tol) {
  if (A.dim() != W.n()) throw DimensionError("in_domain: dimension mismatch");
  return cond(W.W21() * A.value() + W.W22()) < 1.0 / tol;
}

LftEval lft_evaluate(const JContractiveW& W, const CMatrix& A, double tol) {
  require_square(A, "lft_evaluate");
  if (A.rows() != W.n()) {
    throw DimensionError("lft_evaluate: A is " + std::to_string(A.rows()) +
                         "x" + std::to_string(A.rows()) + ", W has n = " +
                         std::to_string(W.n()));
  }
  LftEval out;
  const CMatrix D = W.W21() * A + W.W22();
  const CMatrix N = W.W11() * A + W.W12();
  out.denom_cond = cond(D);
  if (!(out.denom_cond < 1.0 / tol)) {
    throw OutOfDomain(out.denom_cond, Complex(0.0, 0.0),
                      "lft: W21 A + W22 is singular (cond " +
                          std::to_string(out.denom_cond) + ")");
  }
  out.value = rdiv(N, D);
  out.right_intertwine = opnorm(N - out.value * D);

  if (W.invertible()) {
    const CMatrix E = W.Wt11() + A * W.Wt21();
    const CMatrix F = W.Wt12() + A * W.Wt22();
    out.alt_denom_cond = cond(E);
    if (*out.alt_denom_cond < 1.0 / tol) {
      out.alt_value = ldiv(E, F);
      out.agreement = opnorm(out.value - *out.alt_value) /
                      std::max(1.0, opnorm(out.value));
      out.left_intertwine = opnorm(F - E * out.value);
    }
  }
  return out;
}

PRMatrix apply(const JContractiveW& W, const PRMatrix& A, double tol) {
  const LftEval ev = lft_evaluate(W, A.value(), tol);
  if (W.invertible()) {
    if (!ev.alt_value) {
      throw InvariantViolation(
          *ev.alt_denom_cond,
          "apply: W21 A + W22 is invertible but Wt11 + A Wt21 is not");
    }
    const double bound = tol * std::max(1.0, W.cond_W());
    if (!(ev.agreement <= bound)) {
      throw InvariantViolation(ev.agreement,
                               "apply: the two LFT forms disagree by " +
                                   std::to_string(ev.agreement));
    }
  }
  return make_pr(ev.value, tol);
}

double UseIneqReport::min_margin() const {
  return std::min({margin_right_A, margin_left_A, margin_right_B,
                   margin_left_B});
}

bool UseIneqReport::ok(double tol) const {
  const double band = scaled_tol(tol, std::max(1.0, scale));
  return min_margin() >= -band && identity_residual <= band &&
         swapped_residual <= band;
}

UseIneqReport useineq_check(const JContractiveW& W, const PRMatrix& A,
                            const PRMatrix& B, double tol) {
  require_invertible(W, "useineq_check");
  if (A.dim() != W.n() || B.dim() != W.n()) {
    throw DimensionError("useineq_check: dimension mismatch");
  }
  const PRMatrix TA = apply(W, A, tol);
  const PRMatrix TB = apply(W, B, tol);
  const CMatrix DA = W.W21() * A.value() + W.W22();
  const CMatrix DB = W.W21() * B.value() + W.W22();
  const CMatrix EA = W.Wt11() + A.value() * W.Wt21();
  const CMatrix EB = W.Wt11() + B.value() * W.Wt21();

  auto right_margin = [](const PRMatrix& T, const PRMatrix& X,
                         const CMatrix& D) {
    const CMatrix inner = ldiv(D.adjoint(), rdiv(X.re_part(), D));
    return eigmin_herm(symmetrize(T.re_part() - inner));
  };
  auto left_margin = [](const PRMatrix& T, const PRMatrix& X,
                        const CMatrix& E) {
    const CMatrix inner = rdiv(ldiv(E, X.re_part()), E.adjoint());
    return eigmin_herm(symmetrize(T.re_part() - inner));
  };

  UseIneqReport rep;
  rep.margin_right_A = right_margin(TA, A, DA);
  rep.margin_left_A = left_margin(TA, A, EA);
  rep.margin_right_B = right_margin(TB, B, DB);
  rep.margin_left_B = left_margin(TB, B, EB);
  const CMatrix diff = TA.value() - TB.value();
  const CMatrix AB = A.value() - B.value();
  rep.identity_residual = opnorm(diff - rdiv(ldiv(EA, AB), DB));
  rep.swapped_residual = opnorm(diff - rdiv(ldiv(EB, AB), DA));
  rep.scale = TA.norm() + TB.norm();
  return rep;
}

ContractionWitnesses contraction_witnesses(const JContractiveW& W,
                                           const PRMatrix& A, double tol) {
  require_invertible(W, "contraction_witnesses");
  const PRMatrix T = apply(W, A, tol);
  const CMatrix D = W.W21() * A.value() + W.W22();
  const CMatrix E = W.Wt11() + A.value() * W.Wt21();
  const CMatrix& RA = A.root_factor();
  const CMatrix& RT = T.root_factor();
  const CMatrix& RTp = T.root_factor_pinv();

  const CMatrix target_M = rdiv(RA, D);
  const CMatrix target_Mt = rdiv(RA, E.adjoint());
  ContractionWitnesses out;
  out.M = target_M * RTp;
  out.Mt = target_Mt * RTp;
  out.residual_M = opnorm(out.M * RT - target_M);
  out.residual_Mt = opnorm(out.Mt * RT - target_Mt);
  out.norm_M = opnorm(out.M);
  out.norm_Mt = opnorm(out.Mt);

  const double band_M = scaled_tol(tol, std::max(1.0, opnorm(target_M)));
  const double band_Mt = scaled_tol(tol, std::max(1.0, opnorm(target_Mt)));
  if (!(out.residual_M <= band_M) || !(out.residual_Mt <= band_Mt)) {
    throw InvariantViolation(std::max(out.residual_M, out.residual_Mt),
                             "contraction_witnesses: Douglas solve left a "
                             "residual outside the support of Re(T_W[A])");
  }
  if (!(out.norm_M <= 1.0 + tol) || !(out.norm_Mt <= 1.0 + tol)) {
    const double excess = std::max(out.norm_M, out.norm_Mt) - 1.0;
    throw InvariantViolation(excess,
                             "contraction_witnesses: witness norm exceeds 1 by " +
                                 std::to_string(excess));
  }
  return out;
}

PushResult equiv_push(const JContractiveW& W, const PRMatrix& A,
                      const PRMatrix& B, const CMatrix& Xt, double tol) {
  require_invertible(W, "equiv_push");
  if (Xt.rows() != A.rank() || Xt.cols() != B.rank()) {
    throw DimensionError("equiv_push: Xt must be rank(A) x rank(B)");
  }
  Pushed pa = push_point(W, A, tol);
  Pushed pb = push_point(W, B, tol);
  CMatrix Xw = pa.cw.Mt.adjoint() * Xt * pb.cw.M;

  const CMatrix recon =
      pa.T.root_factor().adjoint() * Xw * pb.T.root_factor();
  const double residual = opnorm(pa.T.value() - pb.T.value() - recon);
  const double threshold = scaled_tol(tol, pa.T.norm() + pb.T.norm());
  const double in_norm = opnorm(Xt);
  const double out_norm = opnorm(Xw);
  if (!(residual <= threshold)) {
    throw InvariantViolation(residual,
                             "equiv_push: reconstruction residual " +
                                 std::to_string(residual));
  }
  if (!(out_norm <= in_norm + tol)) {
    throw InvariantViolation(out_norm - in_norm,
                             "equiv_push: ||Xt_W|| exceeds ||Xt||");
  }
  return PushResult{std::move(Xw), std::move(pa.T), std::move(pb.T),
                    residual,      threshold,        in_norm,
                    out_norm};
}

PushResult prec_push(const JContractiveW& W, const PRMatrix& A,
                     const PRMatrix& B, const CMatrix& X, double tol) {
  require_invertible(W, "prec_push");
  if (X.rows() != B.rank() || X.cols() != B.rank()) {
    throw DimensionError("prec_push: X must be rank(B) x rank(B)");
  }
  PRMatrix TA = apply(W, A, tol);
  Pushed pb = push_point(W, B, tol);
  const CMatrix EA = W.Wt11() + A.value() * W.Wt21();
  const CMatrix& RB = B.root_factor();
  const Index k = B.rank();

  const CMatrix middle = eye(k) - X * RB * W.Wt21() * ldiv(EA, RB.adjoint());
  CMatrix Xw = pb.cw.Mt.adjoint() * middle * X * pb.cw.M;

  const CMatrix& RT = pb.T.root_factor();
  const double residual =
      opnorm(TA.value() - pb.T.value() - RT.adjoint() * Xw * RT);
  const double threshold = scaled_tol(tol, TA.norm() + pb.T.norm());
  if (!(residual <= threshold)) {
    throw InvariantViolation(residual,
                             "prec_push: reconstruction residual " +
                                 std::to_string(residual));
  }
  const double in_norm = opnorm(X);
  const double out_norm = opnorm(Xw);
  return PushResult{std::move(Xw), std::move(TA), std::move(pb.T),
                    residual,      threshold,     in_norm,
                    out_norm};
}

CMatrix jcontractive_from_generator(const CMatrix& N, double tol) {
  require_square(N, "jcontractive_from_generator");
  if (N.rows() % 2 != 0) {
    throw DimensionError("jcontractive_from_generator: N must be 2n x 2n");
  }
  const double top = eigmax_herm(herm_part(N));
  if (top > scaled_tol(tol, std::max(1.0, opnorm(N)))) {
    throw NotJContractive(top, "jcontractive_from_generator: Re(N) has "
                               "positive eigenvalue " + std::to_string(top));
  }
  const SignaturePair sig = SignaturePair::make(N.rows() / 2);
  const CMatrix K = sig.J * N;
  return K.exp();
}

JContractiveW sample_jcontractive(Index n, bool invertible, std::uint64_t seed,
                                  double tol) {
  if (n < 1) throw DimensionError("sample_jcontractive: n must be positive");
  Rng rng(seed);
  const Index m = 2 * n;
  CMatrix N = random_gaussian(m, m, rng) / std::sqrt(static_cast<double>(m));
  const double shift = eigmax_herm(herm_part(N)) + 0.25 * rng.uniform();
  N -= shift * eye(m);
  CMatrix W = jcontractive_from_generator(N, tol);
  if (!invertible) {
    constexpr double eta = 1e-12;
    CMatrix V(m, m);
    V << 0.5 * eye(n), 0.5 * eye(n), (0.5 + eta) * eye(n), 0.5 * eye(n);
    W = W * V;
  }
  return JContractiveW::validate(W, tol);
}

}  // namespace prcone
