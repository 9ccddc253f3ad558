// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "prcone/cara.hpp"
#include "prcone/lft.hpp"
#include "prcone/pr_relations.hpp"
#include "prcone/random.hpp"
#include "prcone/verify.hpp"

using namespace prcone;

namespace {

constexpr std::uint64_t kSeed = 42;

struct Line {
  int id;
  std::string title;
  bool pass;
  std::string detail;
};

std::vector<Line> lines;

void report(int id, std::string title, bool pass, std::string detail) {
  std::printf("criterion %2d: %s  %s  (%s)\n", id, pass ? "PASS" : "FAIL", title.c_str(),
              detail.c_str());
  std::fflush(stdout);
  lines.push_back({id, std::move(title), pass, std::move(detail)});
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const Json& suite_checks(const VerifyResult& r, const std::string& name) {
  for (const Json& s : r.summary["suites"])
    if (s["name"] == name) return s["checks"];
  throw std::runtime_error("suite missing from summary: " + name);
}

/// A check passes if it recorded no failures or its worst value is within its
/// bound. Missing checks count as failures.
bool check_ok(const Json& checks, const std::string& name, std::string* detail = nullptr) {
  if (!checks.contains(name)) {
    if (detail) *detail += name + "=missing ";
    return false;
  }
  const Json& c = checks[name];
  if (c.contains("failures")) {
    const auto f = c["failures"].get<long>();
    if (f != 0 && detail) *detail += name + " failures=" + std::to_string(f) + " ";
    return f == 0;
  }
  const double worst = c["worst"].get<double>();
  const double bound = c["bound"].get<double>();
  const bool ok = c["kind"] == "max" ? worst <= bound : worst >= bound;
  if (detail) *detail += name + "=" + fmt("%.3g", worst) + " ";
  return ok;
}

bool all_ok(const Json& checks, std::initializer_list<const char*> names, std::string& detail) {
  bool ok = true;
  for (const char* n : names) ok = check_ok(checks, n, &detail) && ok;
  if (!detail.empty() && detail.back() == ' ') detail.pop_back();
  return ok;
}

VerifyResult run(Suite s, int trials, Index dim) {
  VerifyConfig cfg;
  cfg.suite = s;
  cfg.trials = trials;
  cfg.dim = dim;
  cfg.seed = kSeed;
  return run_verify(cfg);
}

void criterion_1_2_3() {
  const VerifyResult pre = run(Suite::preorder, 200, 8);
  const Json& c = suite_checks(pre, "preorder");

  std::string d1;
  const bool ok1 = all_ok(c, {"reflexive", "reflexive_X_max_abs", "A_prec_B", "B_prec_C",
                              "transitive_A_prec_C", "reconstruction_rel", "recovery_rel",
                              "transitive_reconstruction_rel", "transitive_witness_rel"},
                          d1);
  report(1, "pre-order axioms, 200 trials, dim 8", ok1, d1);

  std::string d2;
  bool ok2 = all_ok(c, {"algebra_residual", "sum_margin", "eps_disc_margin_rel", "r_times_normX"}, d2);
  // Converse: incomparable pairs must show negative margins on the whole ladder.
  int total = 0, incomparable = 0, inconsistent = 0;
  for (Index n = 1; n <= 3; ++n) {
    for (int t = 0; t < 100; ++t) {
      const std::uint64_t s = split_seed(kSeed, 100 + static_cast<std::uint64_t>(n), t);
      const PRMatrix B = sample_pr(n, static_cast<Index>(t % (n + 1)), s);
      const PRMatrix A = t % 3 == 0 ? sample_prec_pair(B, 0.5, s + 1).A : sample_pr(n, n, s + 2);
      const ConverseReport r = converse_check(A, B);
      ++total;
      if (!r.comparable) ++incomparable;
      if (!r.consistent) ++inconsistent;
    }
  }
  ok2 = ok2 && inconsistent == 0 && incomparable > 0 && incomparable < total;
  d2 += " converse: " + std::to_string(total) + " pairs, " + std::to_string(incomparable) +
        " incomparable, " + std::to_string(inconsistent) + " inconsistent";
  report(2, "characterization consistency", ok2, d2);

  const VerifyResult eq = run(Suite::equivalence, 100, 8);
  const Json& e = suite_checks(eq, "equivalence");
  std::string d3;
  bool ok3 = all_ok(c, {"douglas_factor", "douglas_gram"}, d3);
  d3 += " | ";
  ok3 = all_ok(e, {"equivalent", "douglas_factor", "douglas_gram", "inverse_gram"}, d3) && ok3;
  report(3, "Douglas identities, 100 equivalence trials plus pre-order run", ok3, d3);
}

void criterion_4_5_6() {
  const VerifyResult p = run(Suite::lft_prec, 200, 8);
  const Json& c = suite_checks(p, "lft_prec");
  std::string d4;
  const bool ok4 = all_ok(c, {"w_margin", "A_prec_B", "image_prec", "push_reconstruction_rel",
                              "push_vs_oracle"},
                          d4);
  report(4, "pre-order pushed through J-contractive W, 200 trials", ok4, d4);

  const VerifyResult q = run(Suite::lft_equiv, 200, 8);
  const Json& e = suite_checks(q, "lft_equiv");
  std::string d5;
  const bool ok5 = all_ok(e, {"equivalent", "image_equivalent", "norm_excess",
                              "useineq_margin_rel", "useineq_identity_rel", "push_vs_oracle"},
                          d5);
  report(5, "equivalence witness norm contraction, 200 trials", ok5, d5);

  std::string d6;
  const bool ok6 = all_ok(c, {"representation_agreement", "right_intertwine_rel",
                              "left_intertwine_rel"},
                          d6);
  report(6, "LFT representation agreement when cond(W) < 1e6", ok6, d6);
}

void criterion_7_8() {
  const VerifyResult r = run(Suite::cara, 100, 4);
  const Json& c = suite_checks(r, "cara");
  std::string d7;
  const bool ok7 = all_ok(c, {"herglotz_positivity", "pointwise_audit", "support_rank_constant"}, d7);
  report(7, "Caratheodory pointwise audits, 100 Herglotz models, dim <= 4", ok7, d7);

  std::string d8;
  const bool ok8 = all_ok(c, {"psi_jcontractive", "source_equivalent", "image_equivalent",
                              "pointwise_norm_excess", "sup_norm_excess", "push_mismatch"},
                          d8);
  report(8, "equivalence preserved by T_Psi on the grid, 100 strict bounded pairs", ok8, d8);
}

void criterion_9() {
  const Example41Report r = example_4_1();
  std::string d = "T1_dev=" + fmt("%.3g", r.t1_sup_dev) + " T0_rel=" + fmt("%.3g", r.t0_max_rel_err) +
                  " Re_err=" + fmt("%.3g", r.re_max_err) +
                  " min_supQ_delta=" + fmt("%.3g", r.min_q_times_delta);
  report(9, "worked example on a 32x32 grid", r.all(kDefaultTol), d);
}

void criterion_10() {
  const DiscGrid grid = DiscGrid::uniform(8, 16, 1e-2);
  const CMatrix one = CMatrix::Identity(1, 1);
  const auto G = std::make_shared<const CaraFunction>(
      CaraFunction::rational({one, -one}, {one}, grid));
  const std::vector<double> ladder{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  const std::vector<Complex> cs{-1.0, -0.5, 0.0, 1.0, {2.0, 3.0}, {-1.0, 5.0}, {0.0, 10.0}};
  const CVector u = CVector::Ones(1);
  constexpr double eps = std::numeric_limits<double>::epsilon();

  bool ok = true;
  double worst_ratio = 0.0;
  for (Complex c : cs) {
    const Evaluator F = [G, c](Complex z) {
      const CMatrix g = G->value(z);
      return CMatrix(g + c * herm_part(g));
    };
    const ProbeReport p = radial_limit_probe(F, u, 1.0, ladder);
    const double bound = 1.0 + std::abs(c);
    for (const ProbeRow& row : p.rows) {
      const double allowed = bound * row.delta_eff * (1.0 + 8 * eps);
      if (row.value > allowed) ok = false;
      if (row.delta_eff > 0.0) worst_ratio = std::max(worst_ratio, row.value / (bound * row.delta_eff));
    }
  }
  report(10, "radial probe of 1 - z plus constant-witness perturbations", ok,
         "max ||F|| / ((1+|c|) delta)=" + fmt("%.6g", worst_ratio) + " over " +
             std::to_string(cs.size()) + " values of c");
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    criterion_1_2_3();
    criterion_4_5_6();
    criterion_7_8();
    criterion_9();
    criterion_10();
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 1;
  }
  int failed = 0;
  for (const Line& l : lines) failed += l.pass ? 0 : 1;
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%d/%zu criteria passed in %.1f s\n", static_cast<int>(lines.size()) - failed,
              lines.size(), secs);
  return failed == 0 ? 0 : 1;
}
