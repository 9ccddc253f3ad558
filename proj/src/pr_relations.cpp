#include "prcone/pr_relations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace prcone {

namespace {

void require_same_dim(const PRMatrix& A, const PRMatrix& B, const char* what) {
  if (A.dim() != B.dim()) {
    throw DimensionError(std::string(what) + ": dimensions differ (" +
                         std::to_string(A.dim()) + " vs " +
                         std::to_string(B.dim()) + ")");
  }
}

CMatrix identity(Index k) { return CMatrix::Identity(k, k); }

}  // namespace

PRMatrix PRMatrix::make(const CMatrix& A, double tol,
                        std::optional<double> strict_rho) {
  require_square(A, "make_pr");
  require_finite(A, "make_pr");
  PRMatrix out;
  const Index n = A.rows();
  out.value_ = A;
  out.norm_ = opnorm(A);
  out.re_part_ = herm_part(A);
  out.im_part_ = skew_part(A);

  PsdRoots roots;
  try {
    roots = psd_roots(out.re_part_, tol);
  } catch (const NotPSD& e) {
    throw NotPositiveReal(e.eigenvalue(),
                          "make_pr: Re(A) has eigenvalue " +
                              std::to_string(e.eigenvalue()) +
                              " below -tol*||A||");
  }
  // psd_roots scales by ||Re(A)||; PR membership is judged against ||A||.
  out.pr_margin_ = roots.eigmin;
  if (n > 0 && out.pr_margin_ < -scaled_tol(tol, out.norm_)) {
    throw NotPositiveReal(out.pr_margin_, "make_pr: Re(A) is not PSD");
  }
  out.re_sqrt_ = std::move(roots.sqrt);
  out.re_pinv_sqrt_ = std::move(roots.pinv_sqrt);
  out.support_ = std::move(roots.support);
  out.im_support_ = herm_support(out.im_part_);

  const CMatrix& U = out.support_.basis;
  const auto d = roots.root_values.cast<Complex>();
  out.root_ = d.asDiagonal() * U.adjoint();
  out.root_pinv_ = U * d.cwiseInverse().asDiagonal();
  out.strict_rho_ = strict_rho.value_or(1e-8 * out.norm_);
  return out;
}

double PrecWitness::algebra_residual() const {
  const Index k = X.rows();
  return opnorm(Y - X.adjoint() - 2.0 * identity(k));
}

double PrecWitness::sum_margin() const {
  const Index k = X.rows();
  return eigmin_herm(herm_part(X) + identity(k));
}

PrecResult prec_check(const PRMatrix& A, const PRMatrix& B, double tol) {
  require_same_dim(A, B, "prec_check");
  const CMatrix delta = A.value() - B.value();
  const CMatrix& R = B.root_factor();
  const CMatrix& Rp = B.root_factor_pinv();
  const Index k = B.rank();

  CMatrix X = Rp.adjoint() * delta * Rp;
  const CMatrix recon = R.adjoint() * X * R;

  PrecResult out;
  out.residual = opnorm(delta - recon);
  out.threshold = scaled_tol(tol, A.norm() + B.norm());
  if (!(out.residual <= out.threshold)) return out;

  PrecWitness w;
  w.Y = X.adjoint() + 2.0 * identity(k);
  const double xnorm = opnorm(X);
  w.r = xnorm > 0.0 ? 1.0 / xnorm : std::numeric_limits<double>::infinity();
  w.X = std::move(X);
  w.residual = out.residual;
  w.basis = B.support().basis;
  out.witness = std::move(w);
  return out;
}

PrecWitness certify_prec(const PRMatrix& A, const PRMatrix& B, double tol) {
  PrecResult res = prec_check(A, B, tol);
  if (!res) {
    throw NotComparable(res.residual,
                        "A is not below B: reconstruction residual " +
                            std::to_string(res.residual) + " exceeds " +
                            std::to_string(res.threshold));
  }
  return std::move(*res.witness);
}

EpsDiscReport prec_check_eps(const PRMatrix& A, const PRMatrix& B, double r,
                             int n_samples) {
  require_same_dim(A, B, "prec_check_eps");
  if (!(r > 0.0)) throw Error("prec_check_eps: radius must be positive");
  if (n_samples < 1) throw Error("prec_check_eps: need at least one sample");
  const CMatrix delta = A.value() - B.value();
  EpsDiscReport out;
  out.scale = A.norm() + B.norm();
  out.min_margin = std::numeric_limits<double>::infinity();
  for (int s = 0; s < n_samples; ++s) {
    const double angle = 2.0 * std::numbers::pi * s / n_samples;
    const Complex eps = std::polar(r, angle);
    const CMatrix probe = B.value() + eps * delta;
    const double margin = eigmin_herm(herm_part(probe));
    if (margin < out.min_margin) {
      out.min_margin = margin;
      out.worst_eps = eps;
    }
  }
  return out;
}

const char* to_string(EquivFailure f) {
  switch (f) {
    case EquivFailure::none: return "none";
    case EquivFailure::forward: return "forward";
    case EquivFailure::backward: return "backward";
    case EquivFailure::support_mismatch: return "support_mismatch";
    case EquivFailure::singular_factor: return "singular_factor";
    case EquivFailure::invariant: return "invariant";
  }
  return "unknown";
}

EquivResult equiv_check(const PRMatrix& A, const PRMatrix& B, double tol) {
  require_same_dim(A, B, "equiv_check");
  EquivResult out;
  PrecResult fwd = prec_check(A, B, tol);
  if (!fwd) {
    out.failure = EquivFailure::forward;
    out.detail = "A ≺ B fails, residual " + std::to_string(fwd.residual);
    return out;
  }
  PrecResult bwd = prec_check(B, A, tol);
  if (!bwd) {
    out.failure = EquivFailure::backward;
    out.detail = "B ≺ A fails, residual " + std::to_string(bwd.residual);
    return out;
  }
  if (A.rank() != B.rank()) {
    out.failure = EquivFailure::support_mismatch;
    out.detail = "support ranks differ";
    return out;
  }

  const CMatrix& RA = A.root_factor();
  const CMatrix& RB = B.root_factor();
  EquivWitness w;
  w.M = RA * B.root_factor_pinv();
  const CMatrix M_prime = RB * A.root_factor_pinv();
  const double kappa = cond(w.M);
  if (!(kappa <= 1.0 / tol)) {
    out.failure = EquivFailure::singular_factor;
    out.detail = "Douglas factor has condition number " + std::to_string(kappa);
    return out;
  }
  const Index k = B.rank();
  w.M_inv = k > 0 ? CMatrix(w.M.partialPivLu().inverse()) : CMatrix(0, 0);
  w.forward = std::move(*fwd.witness);
  w.backward = std::move(*bwd.witness);
  w.Xt = w.M_inv.adjoint() * w.forward.X;
  w.Yt = w.M_inv.adjoint() * w.forward.Y;
  w.basis_A = A.support().basis;
  w.basis_B = B.support().basis;

  const CMatrix delta = A.value() - B.value();
  w.recon_residual = opnorm(delta - RA.adjoint() * w.Xt * RB);
  w.sum_residual = opnorm((w.Xt + w.Yt) * RB - 2.0 * RA);
  w.factor_residual = opnorm(RA - w.M * RB);
  w.inverse_residual = std::max(opnorm(w.M * w.M_inv - identity(k)),
                                opnorm(w.M * M_prime - identity(k)));
  const CMatrix gram = w.M_inv.adjoint() * w.M_inv;
  w.gram_residual =
      opnorm(gram - 0.5 * (w.backward.X + w.backward.Y));

  // Roundoff in these identities grows with the conditioning of M.
  const double amp = std::max(1.0, kappa);
  const double scale = A.norm() + B.norm();
  const double root_scale = std::sqrt(std::max(A.norm(), B.norm()));
  const double gram_scale = std::max(1.0, opnorm(gram));
  struct Check {
    const char* name;
    double value;
    double bound;
  };
  const Check checks[] = {
      {"reconstruction", w.recon_residual, scaled_tol(tol * amp, scale)},
      {"sum identity", w.sum_residual, scaled_tol(tol * amp, root_scale)},
      {"factorization", w.factor_residual, scaled_tol(tol, root_scale)},
      {"inverse", w.inverse_residual, tol * amp},
      {"gram", w.gram_residual, scaled_tol(tol * amp, gram_scale)},
  };
  for (const Check& c : checks) {
    if (!(c.value <= c.bound)) {
      out.failure = EquivFailure::invariant;
      out.detail = std::string(c.name) + " residual " +
                   std::to_string(c.value) + " exceeds " +
                   std::to_string(c.bound);
      return out;
    }
  }
  out.witness = std::move(w);
  return out;
}

CMatrix douglas_factor(const PRMatrix& A, const PRMatrix& B, const CMatrix& X,
                       const CMatrix& Y, double tol) {
  require_same_dim(A, B, "douglas_factor");
  const Index k = B.rank();
  if (X.rows() != k || X.cols() != k || Y.rows() != k || Y.cols() != k) {
    throw DimensionError("douglas_factor: witness does not match support of B");
  }
  const CMatrix& RB = B.root_factor();
  const double recon =
      opnorm(A.value() - B.value() - RB.adjoint() * X * RB);
  if (!(recon <= scaled_tol(tol, A.norm() + B.norm()))) {
    throw InvariantViolation(recon,
                             "douglas_factor: X does not reconstruct A - B");
  }
  const double algebra = opnorm(Y - X.adjoint() - 2.0 * identity(k));
  if (!(algebra <= scaled_tol(tol, std::max(1.0, opnorm(X))))) {
    throw InvariantViolation(algebra, "douglas_factor: Y != X^* + 2I");
  }
  return A.root_factor() * B.root_factor_pinv();
}

DerivedPropsReport derived_props_check(const PRMatrix& A, const PRMatrix& B,
                                       const PrecWitness& witness,
                                       const CMatrix& C, double tol) {
  require_same_dim(A, B, "derived_props_check");
  if (C.rows() != A.dim()) {
    throw DimensionError("derived_props_check: C must have n rows");
  }
  if (witness.X.rows() != B.rank()) {
    throw DimensionError("derived_props_check: witness/support mismatch");
  }
  DerivedPropsReport rep;
  const PRMatrix As = make_pr(A.value().adjoint(), tol);
  const PRMatrix Bs = make_pr(B.value().adjoint(), tol);
  rep.adjoint_ok = prec_check(As, Bs, tol).comparable();

  rep.support_ok = range_included(A.re_part(), B.re_part(), tol);

  const CMatrix perp = B.support().complement();
  const double scale = A.norm() + B.norm();
  rep.complement_residual = opnorm((A.value() - B.value()) * perp);
  rep.complement_re_residual =
      opnorm((A.value() + A.value().adjoint()) * perp);
  rep.complement_ok = rep.complement_residual <= scaled_tol(tol, scale) &&
                      rep.complement_re_residual <= scaled_tol(tol, scale);

  const CMatrix CAC = C.adjoint() * A.value() * C;
  const CMatrix CBC = C.adjoint() * B.value() * C;
  const PRMatrix Ac = make_pr(CAC, tol);
  const PRMatrix Bc = make_pr(CBC, tol);
  rep.congruence_ok = prec_check(Ac, Bc, tol).comparable();
  return rep;
}

TwoSidedDouglas douglas_two_sided(const CMatrix& N1, const CMatrix& N2,
                                  double tol) {
  if (N1.cols() != N2.cols()) {
    throw DimensionError("douglas_two_sided: N1 and N2 need a common domain");
  }
  TwoSidedDouglas out;
  out.Q = N2 * pinv(N1);
  out.Q_inv = N1 * pinv(N2);
  out.norm_Q = opnorm(out.Q);
  out.norm_Q_inv = opnorm(out.Q_inv);
  out.residual = opnorm(out.Q * N1 - N2);
  // Ker N1 = Ker N2  <=>  Ran N1^* = Ran N2^*
  const CMatrix a = N1.adjoint();
  const CMatrix b = N2.adjoint();
  out.kernels_equal = range_included(a, b, tol) && range_included(b, a, tol);
  return out;
}

double douglas_bound(double z_norm, DouglasSign sign) {
  if (sign == DouglasSign::plus) return z_norm;
  return 0.5 * (z_norm + std::sqrt(z_norm * z_norm + 4.0));
}

}  // namespace prcone
