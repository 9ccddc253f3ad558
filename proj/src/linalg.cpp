#include "prcone/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/SVD>

namespace prcone {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double rank_threshold(double rank_rel, Index n, double top) {
  const double rel = rank_rel < 0.0 ? default_rank_rel(n) : rank_rel;
  return std::max(rel * top, kAbsFloor);
}

// Rotate each column so its largest-magnitude entry is real and positive.
// Eigenvectors are only defined up to a phase; fixing it keeps serialized
// output stable.
void fix_phases(CMatrix& V) {
  for (Index j = 0; j < V.cols(); ++j) {
    Index arg = 0;
    V.col(j).cwiseAbs().maxCoeff(&arg);
    const Complex pivot = V(arg, j);
    if (std::abs(pivot) > 0.0) {
      V.col(j) *= std::conj(pivot) / std::abs(pivot);
    }
  }
}

}  // namespace

double scaled_tol(double rel, double scale) {
  return std::max(rel * scale, kAbsFloor);
}

double default_rank_rel(Index n) {
  return static_cast<double>(std::max<Index>(n, 1)) * kEps * kRankSafety;
}

void require_square(const CMatrix& A, const char* what) {
  if (A.rows() != A.cols()) {
    throw DimensionError(std::string(what) + ": expected a square matrix, got " +
                         std::to_string(A.rows()) + "x" +
                         std::to_string(A.cols()));
  }
}

void require_finite(const CMatrix& A, const char* what) {
  if (!A.allFinite()) {
    throw Error(std::string(what) + ": matrix has non-finite entries");
  }
}

CMatrix herm_part(const CMatrix& A) {
  require_square(A, "herm_part");
  // a_ij + conj(a_ji) is computed identically for (i,j) and (j,i) up to
  // conjugation, so the result is exactly Hermitian.
  return 0.5 * (A + A.adjoint());
}

CMatrix skew_part(const CMatrix& A) {
  require_square(A, "skew_part");
  // (A - A*)/(2i) = -i/2 (A - A*)
  CMatrix D = A - A.adjoint();
  CMatrix S = Complex(0.0, -0.5) * D;
  return symmetrize(S);
}

CMatrix symmetrize(const CMatrix& A) {
  require_square(A, "symmetrize");
  return 0.5 * (A + A.adjoint());
}

CMatrix SupportBasis::projector() const {
  return basis * basis.adjoint();
}

CMatrix SupportBasis::complement() const {
  if (rank == 0) return CMatrix::Identity(ambient_dim, ambient_dim);
  Eigen::JacobiSVD<CMatrix> svd(basis, Eigen::ComputeFullU);
  return svd.matrixU().rightCols(ambient_dim - rank);
}

HermEig herm_eig(const CMatrix& P) {
  require_square(P, "herm_eig");
  HermEig out;
  const Index n = P.rows();
  if (n == 0) return out;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(P);
  if (es.info() != Eigen::Success) {
    throw Error("herm_eig: eigensolver did not converge");
  }
  out.eigenvalues = es.eigenvalues().reverse();
  out.eigenvectors = es.eigenvectors().rowwise().reverse();
  fix_phases(out.eigenvectors);
  out.source_norm = out.eigenvalues.cwiseAbs().maxCoeff();
  return out;
}

double eigmin_herm(const CMatrix& P) {
  require_square(P, "eigmin_herm");
  if (P.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(P, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double eigmax_herm(const CMatrix& P) {
  require_square(P, "eigmax_herm");
  if (P.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(P, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(P.rows() - 1);
}

PsdRoots psd_roots(const CMatrix& P, double tol, double rank_rel) {
  require_square(P, "psd_roots");
  const Index n = P.rows();
  PsdRoots out;
  out.support.ambient_dim = n;
  out.sqrt = CMatrix::Zero(n, n);
  out.pinv_sqrt = CMatrix::Zero(n, n);
  out.support.basis = CMatrix::Zero(n, 0);
  if (n == 0) return out;

  const HermEig eig = herm_eig(P);
  out.eigmin = eig.eigenvalues(n - 1);
  if (out.eigmin < -scaled_tol(tol, eig.source_norm)) {
    throw NotPSD(out.eigmin, "psd_roots: matrix has eigenvalue " +
                                 std::to_string(out.eigmin) +
                                 " below the PSD tolerance");
  }
  const double top = std::max(eig.eigenvalues(0), 0.0);
  const double threshold = rank_threshold(rank_rel, n, top);
  Index k = 0;
  while (k < n && eig.eigenvalues(k) > threshold) ++k;

  out.support.rank = k;
  out.support.tol_used = threshold;
  out.support.basis = eig.eigenvectors.leftCols(k);
  out.root_values = eig.eigenvalues.head(k).cwiseSqrt();
  const CMatrix& V = out.support.basis;
  out.sqrt = symmetrize(V * out.root_values.cast<Complex>().asDiagonal() *
                        V.adjoint());
  out.pinv_sqrt = symmetrize(
      V * out.root_values.cwiseInverse().cast<Complex>().asDiagonal() *
      V.adjoint());
  return out;
}

std::pair<CMatrix, SupportBasis> psd_sqrt(const CMatrix& P, double tol,
                                          double rank_rel) {
  PsdRoots r = psd_roots(P, tol, rank_rel);
  return {std::move(r.sqrt), std::move(r.support)};
}

CMatrix psd_pinv_sqrt(const CMatrix& P, double tol, double rank_rel) {
  return psd_roots(P, tol, rank_rel).pinv_sqrt;
}

SupportBasis range_basis(const CMatrix& A, double rank_rel) {
  SupportBasis out;
  out.ambient_dim = A.rows();
  out.basis = CMatrix::Zero(A.rows(), 0);
  if (A.rows() == 0 || A.cols() == 0) return out;
  Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeThinU);
  const RVector& s = svd.singularValues();
  const double threshold =
      rank_threshold(rank_rel, std::max(A.rows(), A.cols()), s(0));
  Index k = 0;
  while (k < s.size() && s(k) > threshold) ++k;
  out.rank = k;
  out.tol_used = threshold;
  out.basis = svd.matrixU().leftCols(k);
  fix_phases(out.basis);
  return out;
}

SupportBasis herm_support(const CMatrix& H, double rank_rel) {
  require_square(H, "herm_support");
  SupportBasis out;
  const Index n = H.rows();
  out.ambient_dim = n;
  out.basis = CMatrix::Zero(n, 0);
  if (n == 0) return out;
  const HermEig eig = herm_eig(H);
  const double threshold = rank_threshold(rank_rel, n, eig.source_norm);
  std::vector<Index> keep;
  for (Index i = 0; i < n; ++i) {
    if (std::abs(eig.eigenvalues(i)) > threshold) keep.push_back(i);
  }
  out.rank = static_cast<Index>(keep.size());
  out.tol_used = threshold;
  out.basis.resize(n, out.rank);
  for (Index j = 0; j < out.rank; ++j) {
    out.basis.col(j) = eig.eigenvectors.col(keep[j]);
  }
  return out;
}

bool range_included(const CMatrix& A, const CMatrix& B, double tol) {
  if (A.rows() != B.rows()) {
    throw DimensionError("range_included: row counts differ");
  }
  const double normA = opnorm(A);
  if (normA == 0.0) return true;
  const SupportBasis rb = range_basis(B);
  const CMatrix residual = A - rb.basis * (rb.basis.adjoint() * A);
  return opnorm(residual) <= scaled_tol(tol, normA);
}

CMatrix pinv(const CMatrix& A, double rank_rel) {
  if (A.rows() == 0 || A.cols() == 0) return CMatrix::Zero(A.cols(), A.rows());
  Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  const double threshold =
      rank_threshold(rank_rel, std::max(A.rows(), A.cols()), s(0));
  RVector inv_s = RVector::Zero(s.size());
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > threshold) inv_s(i) = 1.0 / s(i);
  }
  return svd.matrixV() * inv_s.cast<Complex>().asDiagonal() *
         svd.matrixU().adjoint();
}

double opnorm(const CMatrix& A) {
  if (A.rows() == 0 || A.cols() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(A);
  return svd.singularValues()(0);
}

double cond(const CMatrix& A) {
  if (A.rows() == 0 || A.cols() == 0) return 1.0;
  Eigen::JacobiSVD<CMatrix> svd(A);
  const RVector& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

CMatrix inv(const CMatrix& A, double tol) {
  require_square(A, "inv");
  const double c = cond(A);
  if (!(c <= 1.0 / tol)) {
    throw SingularMatrix(c, "inv: condition number " + std::to_string(c) +
                                " exceeds 1/tol");
  }
  return A.partialPivLu().inverse();
}

CMatrix solve(const CMatrix& A, const CMatrix& b, double tol) {
  require_square(A, "solve");
  if (A.rows() != b.rows()) throw DimensionError("solve: row mismatch");
  const double c = cond(A);
  if (!(c <= 1.0 / tol)) {
    throw SingularMatrix(c, "solve: condition number " + std::to_string(c) +
                                " exceeds 1/tol");
  }
  return A.partialPivLu().solve(b);
}

CMatrix right_solve(const CMatrix& N, const CMatrix& D, double tol) {
  require_square(D, "right_solve");
  if (N.cols() != D.rows()) throw DimensionError("right_solve: size mismatch");
  const double c = cond(D);
  if (!(c <= 1.0 / tol)) {
    throw SingularMatrix(c, "right_solve: condition number " +
                                std::to_string(c) + " exceeds 1/tol");
  }
  // X D = N  <=>  D^T X^T = N^T
  return D.transpose().partialPivLu().solve(N.transpose()).transpose();
}

CMatrix lift(const CMatrix& coords, const CMatrix& row_basis,
             const CMatrix& col_basis) {
  return row_basis * coords * col_basis.adjoint();
}

}  // namespace prcone
