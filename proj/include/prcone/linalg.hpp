#pragma once

// Dense complex matrix kernel: Hermitian spectral decompositions, PSD
// functional calculus with a numerical-rank cut, range bases, norms and
// solves. Everything is a pure function of its arguments.

#include <complex>
#include <utility>

#include <Eigen/Dense>

#include "prcone/errors.hpp"

namespace prcone {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Absolute floor applied to every scale-relative tolerance.
inline constexpr double kAbsFloor = 1e-14;
/// Safety factor of the default numerical-rank rule n * eps * lambda_max * 64.
inline constexpr double kRankSafety = 64.0;
/// Library-wide default relative tolerance.
inline constexpr double kDefaultTol = 1e-9;

/// max(rel * scale, kAbsFloor).
double scaled_tol(double rel, double scale);

/// Default relative rank threshold for an n x n problem.
double default_rank_rel(Index n);

struct HermEig {
  RVector eigenvalues;   // descending
  CMatrix eigenvectors;  // columns, unitary
  double source_norm = 0.0;
};

/// Orthonormal basis of a subspace of C^ambient_dim.
struct SupportBasis {
  Index ambient_dim = 0;
  CMatrix basis;  // ambient_dim x rank, orthonormal columns
  Index rank = 0;
  double tol_used = 0.0;

  CMatrix projector() const;
  /// Orthonormal basis of the orthogonal complement.
  CMatrix complement() const;
};

/// Square root and pseudo-inverse square root of a PSD matrix sharing one
/// eigendecomposition. root_values are the square roots of the kept
/// eigenvalues, matched to the columns of support.basis.
struct PsdRoots {
  CMatrix sqrt;
  CMatrix pinv_sqrt;
  SupportBasis support;
  RVector root_values;
  double eigmin = 0.0;
};

void require_square(const CMatrix& A, const char* what);
void require_finite(const CMatrix& A, const char* what);

/// (A + A*) / 2.
CMatrix herm_part(const CMatrix& A);
/// (A - A*) / (2i).
CMatrix skew_part(const CMatrix& A);
/// Identical to herm_part; used to scrub roundoff from products that are
/// Hermitian in exact arithmetic.
CMatrix symmetrize(const CMatrix& A);

HermEig herm_eig(const CMatrix& P);
double eigmin_herm(const CMatrix& P);
double eigmax_herm(const CMatrix& P);

/// Square roots for P >= 0 up to tol * ||P||. Eigenvalues at or below the
/// rank threshold are zeroed. rank_rel < 0 selects default_rank_rel(n).
/// Throws NotPSD.
PsdRoots psd_roots(const CMatrix& P, double tol = kDefaultTol,
                   double rank_rel = -1.0);
std::pair<CMatrix, SupportBasis> psd_sqrt(const CMatrix& P,
                                          double tol = kDefaultTol,
                                          double rank_rel = -1.0);
CMatrix psd_pinv_sqrt(const CMatrix& P, double tol = kDefaultTol,
                      double rank_rel = -1.0);

/// Column space of an arbitrary matrix via SVD.
SupportBasis range_basis(const CMatrix& A, double rank_rel = -1.0);
/// Span of eigenvectors of a Hermitian matrix with |lambda| above threshold.
SupportBasis herm_support(const CMatrix& H, double rank_rel = -1.0);

/// ||(I - P_B) A|| <= tol * ||A||, with P_B the projector onto range(B).
bool range_included(const CMatrix& A, const CMatrix& B,
                    double tol = kDefaultTol);

/// Moore-Penrose pseudo-inverse with the default rank rule.
CMatrix pinv(const CMatrix& A, double rank_rel = -1.0);

double opnorm(const CMatrix& A);
/// sigma_max / sigma_min; +inf for exactly singular or empty-rank input.
double cond(const CMatrix& A);
/// Throws SingularMatrix when cond(A) > 1 / tol.
CMatrix inv(const CMatrix& A, double tol = kDefaultTol);
CMatrix solve(const CMatrix& A, const CMatrix& b, double tol = kDefaultTol);
/// N * D^{-1}; throws SingularMatrix when cond(D) > 1 / tol.
CMatrix right_solve(const CMatrix& N, const CMatrix& D,
                    double tol = kDefaultTol);

/// Embed coordinates back into the ambient space: rows * C * cols^*.
CMatrix lift(const CMatrix& coords, const CMatrix& row_basis,
             const CMatrix& col_basis);

}  // namespace prcone
