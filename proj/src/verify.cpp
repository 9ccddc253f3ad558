#include "prcone/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "prcone/random.hpp"

namespace prcone {

namespace {

constexpr std::size_t kMaxListed = 50;

CMatrix eye(Index k) { return CMatrix::Identity(k, k); }

// Tracks the worst value of every named check across trials and records the
// trials that break a bound.
class Recorder {
 public:
  Recorder(std::string suite, Json& violations, std::size_t& total)
      : suite_(std::move(suite)), violations_(violations), total_(total) {}

  void trial(int index, std::uint64_t seed) {
    index_ = index;
    seed_ = seed;
    ++trials_;
  }

  void at_most(const std::string& name, double value, double bound) {
    update(name, value, bound, true);
    if (!(value <= bound)) fail(name, value, bound, "");
  }

  void at_least(const std::string& name, double value, double bound) {
    update(name, value, bound, false);
    if (!(value >= bound)) fail(name, value, bound, "");
  }

  void require(const std::string& name, bool ok, const std::string& detail = "") {
    if (!checks_.contains(name)) checks_[name] = {{"failures", 0}};
    if (!ok) {
      checks_[name]["failures"] = checks_[name]["failures"].get<int>() + 1;
      fail(name, std::numeric_limits<double>::quiet_NaN(),
           std::numeric_limits<double>::quiet_NaN(), detail);
    }
  }

  void exception(const std::exception& e) {
    require("no_exception", false, e.what());
  }

  Json summary() const {
    Json out;
    out["name"] = suite_;
    out["trials"] = trials_;
    out["violations"] = failures_;
    out["checks"] = checks_;
    return out;
  }

 private:
  void update(const std::string& name, double value, double bound, bool upper) {
    if (!checks_.contains(name)) {
      checks_[name] = {{"worst", value}, {"bound", bound},
                       {"kind", upper ? "max" : "min"}};
      return;
    }
    Json& c = checks_[name];
    const double worst = c["worst"].is_number() ? c["worst"].get<double>()
                                                : std::numeric_limits<double>::quiet_NaN();
    const bool replace = std::isnan(value) ||
                         (!std::isnan(worst) && (upper ? value > worst : value < worst));
    if (replace) {
      c["worst"] = value;
      c["bound"] = bound;
    }
  }

  void fail(const std::string& name, double value, double bound,
            const std::string& detail) {
    ++failures_;
    ++total_;
    if (violations_.size() >= kMaxListed) return;
    Json v;
    v["suite"] = suite_;
    v["trial"] = index_;
    v["seed"] = seed_;
    v["check"] = name;
    if (!std::isnan(value)) v["value"] = value;
    if (!std::isnan(bound)) v["bound"] = bound;
    if (!detail.empty()) v["detail"] = detail;
    violations_.push_back(std::move(v));
  }

  std::string suite_;
  Json& violations_;
  std::size_t& total_;
  Json checks_ = Json::object();
  int trials_ = 0;
  int failures_ = 0;
  int index_ = 0;
  std::uint64_t seed_ = 0;
};

using TrialFn = std::function<void(Recorder&, std::uint64_t, int)>;

Json run_suite(const char* name, std::uint64_t stream, int trials,
               const VerifyConfig& cfg, Json& violations, std::size_t& total,
               const TrialFn& body) {
  Recorder rec(name, violations, total);
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t seed = split_seed(cfg.seed, stream, t);
    rec.trial(t, seed);
    try {
      body(rec, seed, t);
    } catch (const std::exception& e) {
      rec.exception(e);
    }
  }
  return rec.summary();
}

void converse_trial(Recorder& rec, std::uint64_t seed, Index n, double tol) {
  Rng rng(seed);
  const PRMatrix B = sample_pr(n, rng.integer(0, n - 1), split_seed(seed, 0, 0), tol);
  const PRMatrix A = sample_pr(n, n, split_seed(seed, 0, 1), tol);
  const ConverseReport c = converse_check(A, B, tol);
  rec.require("converse_consistent", c.consistent);
}

void preorder_trial(Recorder& rec, std::uint64_t seed, const VerifyConfig& cfg) {
  Rng rng(seed);
  const Index n = cfg.dim;
  const double tol = cfg.tol;
  const Index rank = rng.integer(1, n);
  const PRMatrix C = sample_pr(n, rank, split_seed(seed, 1, 0), tol);
  const PrecPair pb = sample_prec_pair(C, 0.9 * rng.uniform(), split_seed(seed, 1, 1), 1.0, tol);
  const PrecPair pa = sample_prec_pair(pb.A, 0.9 * rng.uniform(), split_seed(seed, 1, 2), 1.0, tol);
  const PRMatrix& B = pb.A;
  const PRMatrix& A = pa.A;

  const PrecResult refl = prec_check(C, C, tol);
  rec.require("reflexive", refl.comparable());
  if (refl) rec.at_most("reflexive_X_max_abs", refl.witness->X.cwiseAbs().maxCoeff() , 0.0);

  const PrecResult ab = prec_check(A, B, tol);
  const PrecResult bc = prec_check(B, C, tol);
  const PrecResult ac = prec_check(A, C, tol);
  rec.require("A_prec_B", ab.comparable());
  rec.require("B_prec_C", bc.comparable());
  rec.require("transitive_A_prec_C", ac.comparable());
  if (!ab || !bc || !ac) return;
  const PrecWitness& w = *ab.witness;

  rec.at_most("reconstruction_rel", ab.residual / (A.norm() + B.norm()), 1e-8);
  rec.at_most("recovery_rel",
              opnorm(w.X - pa.X_true) / (1.0 + opnorm(pa.X_true)), 1e-8);
  rec.at_most("algebra_residual", w.algebra_residual(), 1e-10);
  rec.at_least("sum_margin", w.sum_margin(), -1e-10);
  if (std::isfinite(w.r)) {
    const EpsDiscReport eps = prec_check_eps(A, B, w.r, 64);
    rec.at_least("eps_disc_margin_rel", eps.min_margin / eps.scale, -1e-10);
  }
  rec.at_least("r_times_normX", std::isfinite(w.r) ? w.r * opnorm(w.X) : 1.0,
               1.0 - 1e-12);

  const CMatrix M = douglas_factor(A, B, w.X, w.Y, tol);
  rec.at_most("douglas_factor", opnorm(A.root_factor() - M * B.root_factor()), 1e-9);
  rec.at_most("douglas_gram", opnorm(M.adjoint() * M - 0.5 * (w.X + w.Y)), 1e-9);

  // A - C = R_C^* (M^* X1 M + X2) R_C with M the factor of B over C.
  const PrecWitness& w2 = *bc.witness;
  const CMatrix Mbc = douglas_factor(B, C, w2.X, w2.Y, tol);
  const CMatrix composed = Mbc.adjoint() * w.X * Mbc + w2.X;
  const CMatrix& RC = C.root_factor();
  rec.at_most("transitive_reconstruction_rel",
              opnorm(A.value() - C.value() - RC.adjoint() * composed * RC) /
                  (A.norm() + C.norm()),
              1e-8);
  rec.at_most("transitive_witness_rel",
              opnorm(composed - ac.witness->X) / (1.0 + opnorm(composed)), 1e-8);

  const Index m = rng.integer(1, n + 2);
  const CMatrix Cmap = random_gaussian(n, m, rng);
  const DerivedPropsReport dp = derived_props_check(A, B, w, Cmap, 1e-8);
  rec.require("derived_adjoint", dp.adjoint_ok);
  rec.require("derived_support", dp.support_ok);
  rec.require("derived_complement", dp.complement_ok);
  rec.require("derived_congruence", dp.congruence_ok);

  if (n <= 3) converse_trial(rec, split_seed(seed, 1, 3), n, tol);
}

void equivalence_trial(Recorder& rec, std::uint64_t seed, int t,
                       const VerifyConfig& cfg) {
  Rng rng(seed);
  const Index n = cfg.dim;
  const double tol = cfg.tol;
  std::optional<PRMatrix> A, B;
  if (t % 2 == 0) {
    B = sample_pr(n, rng.integer(1, n), split_seed(seed, 2, 0), tol);
    A = sample_prec_pair(*B, 0.9 * rng.uniform(), split_seed(seed, 2, 1), 1.0, tol).A;
  } else {
    A = sample_pr(n, n, split_seed(seed, 2, 2), tol);
    B = sample_pr(n, n, split_seed(seed, 2, 3), tol);
  }
  const EquivResult fwd = equiv_check(*A, *B, tol);
  const EquivResult bwd = equiv_check(*B, *A, tol);
  rec.require("equivalent", fwd.equivalent(), fwd.detail);
  rec.require("symmetric", fwd.equivalent() == bwd.equivalent());
  if (!fwd || !bwd) return;
  const EquivWitness& w = *fwd.witness;
  const double scale = A->norm() + B->norm();
  const double amp = std::max(1.0, cond(w.M));
  rec.at_most("reconstruction_rel", w.recon_residual / scale, 1e-8);
  rec.at_most("sum_identity", w.sum_residual / amp, 1e-8);
  rec.at_most("douglas_factor", w.factor_residual, 1e-9);
  rec.at_most("douglas_gram",
              opnorm(w.M.adjoint() * w.M - 0.5 * (w.forward.X + w.forward.Y)), 1e-9);
  rec.at_most("inverse_gram", w.gram_residual, 1e-8);
  const Index k = w.M.rows();
  rec.at_most("mutual_inverse", opnorm(w.M * bwd.witness->M - eye(k)) / amp, 1e-8);
}

void lft_prec_trial(Recorder& rec, std::uint64_t seed, const VerifyConfig& cfg) {
  Rng rng(seed);
  const Index n = cfg.dim;
  const double tol = cfg.tol;
  const PRMatrix B = sample_pr(n, n, split_seed(seed, 3, 0), tol);
  const PrecPair pa = sample_prec_pair(B, 0.9 * rng.uniform(), split_seed(seed, 3, 1), 1.0, tol);
  const JContractiveW W = sample_jcontractive(n, true, split_seed(seed, 3, 2), tol);
  rec.at_least("w_margin", W.contractivity_margin(), -tol * std::max(1.0, std::pow(opnorm(W.W()), 2)));
  rec.at_least("wt_margin_rel", W.wt_margin() / std::max(1.0, std::pow(opnorm(W.Wt()), 2)), -1e-9);
  const PrecResult pr = prec_check(pa.A, B, tol);
  rec.require("A_prec_B", pr.comparable());
  if (!pr) return;
  const PushResult push = prec_push(W, pa.A, B, pr.witness->X, tol);
  rec.at_most("push_reconstruction_rel", push.residual / (push.TA.norm() + push.TB.norm()), 1e-8);
  const PrecResult oracle = prec_check(push.TA, push.TB, tol);
  rec.require("image_prec", oracle.comparable());
  if (oracle) rec.at_most("push_vs_oracle", opnorm(oracle.witness->X - push.witness), 1e-7);

  for (const PRMatrix* X : {&pa.A, &B}) {
    const LftEval ev = lft_evaluate(W, X->value(), tol);
    if (W.cond_W() < 1e6) rec.at_most("representation_agreement", ev.agreement, 1e-9);
    const double s = std::max(1.0, opnorm(W.W())) * (1.0 + X->norm()) * std::max(1.0, opnorm(ev.value));
    rec.at_most("right_intertwine_rel", ev.right_intertwine / s, 1e-12);
    rec.at_most("left_intertwine_rel", ev.left_intertwine / (s * std::max(1.0, opnorm(W.Wt()))), 1e-12);
  }
}

void lft_equiv_trial(Recorder& rec, std::uint64_t seed, int t, const VerifyConfig& cfg) {
  const Index n = cfg.dim;
  const double tol = cfg.tol;
  const PRMatrix A = sample_pr(n, n, split_seed(seed, 4, 0), tol);
  const PRMatrix B = sample_pr(n, n, split_seed(seed, 4, 1), tol);
  const JContractiveW W = sample_jcontractive(n, true, split_seed(seed, 4, 2), tol);
  const EquivResult eq = equiv_check(A, B, tol);
  rec.require("equivalent", eq.equivalent(), eq.detail);
  if (!eq) return;
  const PushResult push = equiv_push(W, A, B, eq.witness->Xt, tol);
  rec.at_most("norm_excess", push.output_norm - push.input_norm, 1e-10);
  rec.at_most("push_reconstruction_rel", push.residual / (push.TA.norm() + push.TB.norm()), 1e-8);
  const EquivResult oracle = equiv_check(push.TA, push.TB, tol);
  rec.require("image_equivalent", oracle.equivalent(), oracle.detail);
  if (oracle) {
    const CMatrix pushed = lift(push.witness, push.TA.support().basis, push.TB.support().basis);
    const CMatrix direct = lift(oracle.witness->Xt, oracle.witness->basis_A, oracle.witness->basis_B);
    rec.at_most("push_vs_oracle", opnorm(pushed - direct), 1e-7);
  }
  const UseIneqReport ui = useineq_check(W, A, B, tol);
  rec.at_least("useineq_margin_rel", ui.min_margin() / std::max(1.0, ui.scale), -1e-10);
  rec.at_most("useineq_identity_rel", std::max(ui.identity_residual, ui.swapped_residual) / std::max(1.0, ui.scale), 1e-9);
  const ContractionWitnesses cw = contraction_witnesses(W, A, tol);
  rec.at_most("contraction_norm", std::max(cw.norm_M, cw.norm_Mt), 1.0 + 1e-10);

  if (t % 4 == 0) {
    const JContractiveW Ws = sample_jcontractive(n, false, split_seed(seed, 4, 3), tol);
    rec.require("stress_flagged_singular", !Ws.invertible());
    bool refused = false;
    try {
      equiv_push(Ws, A, B, eq.witness->Xt, tol);
    } catch (const SingularMatrix&) {
      refused = true;
    }
    rec.require("stress_push_refused", refused);
    rec.require("stress_apply_in_domain", in_domain(Ws, A, tol));
    apply(Ws, A, tol);
  }
}

void cara_trial(Recorder& rec, std::uint64_t seed, int t, const VerifyConfig& cfg) {
  Rng rng(seed);
  const double tol = cfg.tol;
  const Index d = rng.integer(1, std::min<Index>(cfg.dim, 4));
  HerglotzOptions o;
  o.strict = rng.uniform() < 0.5;
  o.bounded = rng.uniform() < 0.5;
  o.support_rank = rng.integer(1, d);
  const CaraFunction F = random_herglotz(d, static_cast<int>(rng.integer(0, 5)),
                                         split_seed(seed, 5, 0), o, tol);
  double worst = std::numeric_limits<double>::infinity();
  std::vector<Complex> pts;
  for (int i = 0; i < 20; ++i) {
    const Complex z = std::polar(0.99 * std::sqrt(rng.uniform()), 2.0 * M_PI * rng.uniform());
    worst = std::min(worst, eigmin_herm(herm_part(F.value(z))));
    if (i < 6) pts.push_back(z);
  }
  rec.at_least("herglotz_positivity", worst, -1e-12);
  const PointwiseAudit pa = pointwise_equiv_audit(F, pts, 1e-8);
  rec.require("pointwise_audit", pa.ok(), pa.first_failure);
  bool constant_rank = true;
  for (const Complex& z : cfg.grid.points()) {
    constant_rank = constant_rank && F.eval(z, tol).rank() == F.support().rank;
  }
  rec.require("support_rank_constant", constant_rank);

  HerglotzOptions sb;
  auto Fs = std::make_shared<const CaraFunction>(random_herglotz(d, 3, split_seed(seed, 5, 1), sb, tol));
  auto Gs = std::make_shared<const CaraFunction>(random_herglotz(d, 3, split_seed(seed, 5, 2), sb, tol));
  auto psi = std::make_shared<const PsiBlock>(
      t % 2 == 0 ? PsiBlock::example_4_1(d) : PsiBlock::sample(d, split_seed(seed, 5, 3)));
  rec.require("psi_jcontractive", audit_psi(*psi, cfg.grid, tol).ok(1e-9));
  const PreservationReport pr =
      preservation_audit(psi, Fs, Gs, cfg.grid, AuditMode::equivalence, tol);
  rec.require("source_equivalent", pr.source_ok, pr.detail);
  rec.require("image_equivalent", pr.image_ok, pr.detail);
  rec.at_most("pointwise_norm_excess", pr.max_pointwise_excess, 1e-9);
  rec.at_most("sup_norm_excess", pr.sup_image - pr.sup_source, 1e-9);
  rec.at_most("push_mismatch", pr.push_mismatch, 1e-7);
}

void example41_trial(Recorder& rec, const VerifyConfig& cfg) {
  Example41Config ec;
  ec.tol = cfg.tol;
  const Example41Report r = example_4_1(ec);
  rec.at_least("a_jcontractive_margin", r.jcontr_margin, -cfg.tol);
  rec.at_most("b_T1_sup_deviation", r.t1_sup_dev, 1e-12);
  rec.at_most("c_T0_rel_error", r.t0_max_rel_err, 1e-12);
  rec.at_most("d_re_T0_error", r.re_max_err, 1e-12);
  rec.at_least("d_re_T0_min", r.re_min, -1e-12);
  rec.at_least("e_supQ_times_delta", r.min_q_times_delta, 0.5);
  rec.require("e_supQ_monotone", r.q_monotone);
}

}  // namespace

ConverseReport converse_check(const PRMatrix& A, const PRMatrix& B, double tol,
                              std::vector<double> ladder, int samples) {
  ConverseReport out;
  out.comparable = prec_check(A, B, tol).comparable();
  out.consistent = true;
  for (double r : ladder) {
    const EpsDiscReport e = prec_check_eps(A, B, r, samples);
    out.margins.emplace_back(r, e.min_margin);
    if (!out.comparable && !(e.min_margin < -tol)) out.consistent = false;
  }
  return out;
}

Suite parse_suite(const std::string& name) {
  static const std::pair<const char*, Suite> table[] = {
      {"preorder", Suite::preorder}, {"equivalence", Suite::equivalence},
      {"lft_prec", Suite::lft_prec}, {"lft_equiv", Suite::lft_equiv},
      {"cara", Suite::cara},         {"example41", Suite::example41},
      {"all", Suite::all}};
  for (const auto& [key, s] : table) {
    if (name == key) return s;
  }
  throw InputError("unknown suite \"" + name + "\"");
}

const char* to_string(Suite s) {
  switch (s) {
    case Suite::preorder: return "preorder";
    case Suite::equivalence: return "equivalence";
    case Suite::lft_prec: return "lft_prec";
    case Suite::lft_equiv: return "lft_equiv";
    case Suite::cara: return "cara";
    case Suite::example41: return "example41";
    case Suite::all: return "all";
  }
  return "unknown";
}

void VerifyConfig::validate() const {
  if (trials < 1) throw InputError("trials must be at least 1");
  if (dim < 1) throw InputError("dim must be at least 1");
  if (!(tol > 0.0)) throw InputError("tol must be positive");
}

VerifyResult run_verify(const VerifyConfig& cfg) {
  cfg.validate();
  VerifyResult out;
  Json violations = Json::array();
  Json suites = Json::array();
  const auto wants = [&](Suite s) {
    return cfg.suite == Suite::all || cfg.suite == s;
  };
  const int T = cfg.trials;

  if (wants(Suite::preorder)) {
    suites.push_back(run_suite("preorder", 1, T, cfg, violations, out.violations,
                               [&](Recorder& r, std::uint64_t s, int) { preorder_trial(r, s, cfg); }));
  }
  if (wants(Suite::equivalence)) {
    suites.push_back(run_suite("equivalence", 2, T, cfg, violations, out.violations,
                               [&](Recorder& r, std::uint64_t s, int t) { equivalence_trial(r, s, t, cfg); }));
  }
  if (wants(Suite::lft_prec)) {
    suites.push_back(run_suite("lft_prec", 3, T, cfg, violations, out.violations,
                               [&](Recorder& r, std::uint64_t s, int) { lft_prec_trial(r, s, cfg); }));
  }
  if (wants(Suite::lft_equiv)) {
    suites.push_back(run_suite("lft_equiv", 4, T, cfg, violations, out.violations,
                               [&](Recorder& r, std::uint64_t s, int t) { lft_equiv_trial(r, s, t, cfg); }));
  }
  if (wants(Suite::cara)) {
    suites.push_back(run_suite("cara", 5, T, cfg, violations, out.violations,
                               [&](Recorder& r, std::uint64_t s, int t) { cara_trial(r, s, t, cfg); }));
  }
  if (wants(Suite::example41)) {
    // Deterministic; one run regardless of the trial count.
    suites.push_back(run_suite("example41", 6, 1, cfg, violations, out.violations,
                               [&](Recorder& r, std::uint64_t, int) { example41_trial(r, cfg); }));
  }

  Json config;
  config["suite"] = to_string(cfg.suite);
  config["trials"] = cfg.trials;
  config["dim"] = cfg.dim;
  config["seed"] = cfg.seed;
  config["tol"] = cfg.tol;
  config["grid"] = to_json(cfg.grid);
  out.summary["config"] = std::move(config);
  out.summary["suites"] = std::move(suites);
  out.summary["total_violations"] = out.violations;
  out.summary["violations"] = std::move(violations);
  out.summary["ok"] = out.ok();
  return out;
}

}  // namespace prcone
