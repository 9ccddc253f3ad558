#pragma once

#include <cstdint>
#include <random>

#include "prcone/linalg.hpp"

namespace prcone {

/// Counter-based seed splitter: one root seed fans out into independent
/// streams addressed by (stream, index). Built on splitmix64.
std::uint64_t split_seed(std::uint64_t root, std::uint64_t stream,
                         std::uint64_t index);

/// Seeded generator. Gaussian and uniform draws are computed here rather
/// than through <random> distributions so output is identical across
/// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform();
  double normal();
  /// Circularly symmetric complex Gaussian with E|z|^2 = 1.
  Complex cnormal();
  /// Uniform integer in [lo, hi].
  Index integer(Index lo, Index hi);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

CMatrix random_gaussian(Index rows, Index cols, Rng& rng);
/// (G + G*)/2 for Gaussian G.
CMatrix random_hermitian(Index n, Rng& rng);
/// Haar-distributed unitary via QR with phase correction.
CMatrix random_unitary(Index n, Rng& rng);

}  // namespace prcone
