#include "prcone/random.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/QR>

namespace prcone {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t split_seed(std::uint64_t root, std::uint64_t stream,
                         std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(root) ^ stream) + index);
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Complex Rng::cnormal() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) * std::sqrt(0.5);
}

Index Rng::integer(Index lo, Index hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<Index>(engine_() % span);
}

CMatrix random_gaussian(Index rows, Index cols, Rng& rng) {
  CMatrix G(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) G(i, j) = rng.cnormal();
  }
  return G;
}

CMatrix random_hermitian(Index n, Rng& rng) {
  return symmetrize(random_gaussian(n, n, rng));
}

CMatrix random_unitary(Index n, Rng& rng) {
  const CMatrix G = random_gaussian(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(G);
  CMatrix Q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    const Complex d = R(j, j);
    if (std::abs(d) > 0.0) Q.col(j) *= d / std::abs(d);
  }
  return Q;
}

}  // namespace prcone
