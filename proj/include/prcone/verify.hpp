#pragma once

// Randomized verification suites. Every trial draws its randomness from
// split_seed(seed, suite, trial), so a violation is reproduced by its seed
// and trial index alone.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "prcone/cara.hpp"
#include "prcone/json_io.hpp"

namespace prcone {

enum class Suite { preorder, equivalence, lft_prec, lft_equiv, cara, example41, all };

/// Throws InputError for an unknown name.
Suite parse_suite(const std::string& name);
const char* to_string(Suite s);

struct VerifyConfig {
  Suite suite = Suite::all;
  int trials = 20;
  Index dim = 4;
  std::uint64_t seed = 0;
  double tol = kDefaultTol;
  DiscGrid grid = DiscGrid::uniform(8, 16, 1e-2);

  /// trials >= 1, dim >= 1, tol > 0; throws InputError.
  void validate() const;
};

struct VerifyResult {
  Json summary;
  std::size_t violations = 0;

  bool ok() const { return violations == 0; }
};

VerifyResult run_verify(const VerifyConfig& cfg);

/// Brute-force cross-check of the witness test against the eps-circle
/// criterion: when prec_check fails, every radius on the ladder must show a
/// negative margin below -tol.
struct ConverseReport {
  bool comparable = false;
  std::vector<std::pair<double, double>> margins;  // (r, min margin)
  bool consistent = false;
};

ConverseReport converse_check(const PRMatrix& A, const PRMatrix& B,
                              double tol = kDefaultTol,
                              std::vector<double> ladder = {1.0, 0.5, 0.25, 0.125},
                              int samples = 64);

}  // namespace prcone
