#include <algorithm>
#include <cmath>

#include "prcone/pr_relations.hpp"
#include "prcone/random.hpp"

namespace prcone {

PRMatrix sample_pr(Index n, Index re_rank, std::uint64_t seed, double tol) {
  if (re_rank < 0 || re_rank > n) {
    throw DimensionError("sample_pr: re_rank must lie in [0, n]");
  }
  Rng rng(seed);
  const double s = 1.0 / std::sqrt(static_cast<double>(std::max<Index>(n, 1)));
  const CMatrix G = s * random_gaussian(re_rank, n, rng);
  const CMatrix H = s * random_hermitian(n, rng);
  CMatrix re = symmetrize(G.adjoint() * G);
  return make_pr(re + Complex(0.0, 1.0) * H, tol);
}

PrecPair sample_prec_pair(const PRMatrix& B, double re_x_bound,
                          std::uint64_t seed, double im_scale, double tol) {
  if (!(re_x_bound >= 0.0 && re_x_bound < 1.0)) {
    throw Error("sample_prec_pair: re_x_bound must lie in [0, 1)");
  }
  Rng rng(seed);
  const Index k = B.rank();
  CMatrix H = random_hermitian(k, rng);
  const double h = opnorm(H);
  if (h > 0.0) {
    H *= re_x_bound / h;
  } else {
    H.setZero();
  }
  const CMatrix S = im_scale * random_hermitian(k, rng);
  CMatrix X = H + Complex(0.0, 1.0) * S;
  const CMatrix& R = B.root_factor();
  const CMatrix A = B.value() + R.adjoint() * X * R;
  return PrecPair{make_pr(A, tol), std::move(X)};
}

}  // namespace prcone
