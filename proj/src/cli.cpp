#include "prcone/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "prcone/json_io.hpp"
#include "prcone/random.hpp"
#include "prcone/verify.hpp"

namespace prcone {

namespace {

struct Options {
  double tol = kDefaultTol;
  std::string json_out;
  std::uint64_t seed = 0;
  int trials = 20;
  Index dim = 4;
  std::vector<double> grid_radii;
  int grid_angles = 16;
};

double env_tol() {
  const char* s = std::getenv("PRCONE_TOL");
  if (s == nullptr || *s == '\0') return kDefaultTol;
  char* end = nullptr;
  const double v = std::strtod(s, &end);
  if (end == s || *end != '\0' || !(v > 0.0)) {
    throw InputError(std::string("PRCONE_TOL is not a positive number: ") + s);
  }
  return v;
}

Complex parse_complex(const std::string& text) {
  std::istringstream in(text);
  double re = 0.0, im = 0.0;
  char comma = 0;
  if (!(in >> re)) throw InputError("cannot parse complex value \"" + text + "\"");
  if (in >> comma) {
    if (comma != ',' || !(in >> im)) {
      throw InputError("complex values are written re or re,im: \"" + text + "\"");
    }
  }
  in >> std::ws;
  if (!in.eof()) throw InputError("trailing characters in \"" + text + "\"");
  return {re, im};
}

Json complex_json(Complex z) { return complex_to_json(z); }

DiscGrid grid_of(const Options& o) {
  if (o.grid_angles < 1) throw InputError("--grid-angles must be at least 1");
  if (o.grid_radii.empty()) return DiscGrid::uniform(8, o.grid_angles, 1e-2);
  try {
    return DiscGrid::make(o.grid_radii, o.grid_angles);
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw InputError(e.what());
  }
}

CMatrix load_matrix(const std::string& path) {
  return matrix_from_json(read_json_file(path));
}

PRMatrix load_pr(const std::string& path, double tol) {
  const CMatrix A = load_matrix(path);
  if (A.rows() != A.cols() || A.rows() == 0) {
    throw InputError(path + ": expected a nonempty square matrix");
  }
  return make_pr(A, tol);
}

void same_dim(const PRMatrix& A, const PRMatrix& B) {
  if (A.dim() != B.dim()) {
    throw InputError("dimension mismatch: " + std::to_string(A.dim()) + " vs " +
                     std::to_string(B.dim()));
  }
}

// A W file holds either a 2n x 2n matrix or a Psi block evaluated at --at.
JContractiveW load_w(const std::string& path, const std::string& at, double tol) {
  const Json j = read_json_file(path);
  CMatrix W;
  if (j.is_object() && j.contains("rows")) {
    W = matrix_from_json(j);
  } else {
    if (at.empty()) throw InputError(path + ": a Psi block needs --at");
    W = psi_from_json(j).value(parse_complex(at));
  }
  if (W.rows() != W.cols() || W.rows() % 2 != 0 || W.rows() == 0) {
    throw InputError(path + ": W must be 2n x 2n");
  }
  return JContractiveW::validate(W, tol);
}

void emit(const Json& j, const Options& o, std::ostream& out) {
  const std::string text = dump_json(j) + "\n";
  out << text;
  if (!o.json_out.empty()) write_text_file(o.json_out, text);
}

int cmd_check_prec(const std::string& pa, const std::string& pb, const Options& o,
                   std::ostream& out) {
  const PRMatrix A = load_pr(pa, o.tol);
  const PRMatrix B = load_pr(pb, o.tol);
  same_dim(A, B);
  const PrecResult r = prec_check(A, B, o.tol);
  Json j;
  j["relation"] = "prec";
  j["comparable"] = r.comparable();
  j["residual"] = r.residual;
  j["threshold"] = r.threshold;
  j["tol"] = o.tol;
  j["rank_B"] = B.rank();
  if (r) j["witness"] = to_json(*r.witness);
  emit(j, o, out);
  return r ? kExitOk : kExitViolation;
}

int cmd_check_equiv(const std::string& pa, const std::string& pb, const Options& o,
                    std::ostream& out) {
  const PRMatrix A = load_pr(pa, o.tol);
  const PRMatrix B = load_pr(pb, o.tol);
  same_dim(A, B);
  const EquivResult r = equiv_check(A, B, o.tol);
  Json j;
  j["relation"] = "equiv";
  j["equivalent"] = r.equivalent();
  j["failure"] = to_string(r.failure);
  if (!r.detail.empty()) j["detail"] = r.detail;
  j["tol"] = o.tol;
  if (r) j["witness"] = to_json(*r.witness);
  emit(j, o, out);
  return r ? kExitOk : kExitViolation;
}

int cmd_lft_apply(const std::string& pw, const std::string& pa, const std::string& at,
                  const Options& o, std::ostream& out) {
  const JContractiveW W = load_w(pw, at, o.tol);
  const PRMatrix A = load_pr(pa, o.tol);
  if (A.dim() != W.n()) throw InputError("A does not match the blocks of W");
  const LftEval ev = lft_evaluate(W, A.value(), o.tol);
  const PRMatrix T = apply(W, A, o.tol);
  Json j;
  j["T"] = matrix_to_json(T.value());
  j["denom_cond"] = ev.denom_cond;
  j["alt_form"] = ev.alt_value.has_value();
  j["agreement"] = ev.agreement;
  j["right_intertwine"] = ev.right_intertwine;
  j["contractivity_margin"] = W.contractivity_margin();
  j["cond_W"] = W.cond_W();
  j["pr_margin"] = T.pr_margin();
  emit(j, o, out);
  return kExitOk;
}

// Pushes the relation between A and B through W and compares the pushed
// witness with the one recovered directly from the images.
Json witness_run(const JContractiveW& W, const PRMatrix& A, const PRMatrix& B,
                 bool want_equiv, double tol, bool& pass) {
  Json j;
  if (want_equiv) {
    const EquivResult eq = equiv_check(A, B, tol);
    if (!eq) throw NotComparable(0.0, std::string("A and B are not equivalent: ") + eq.detail);
    const PushResult push = equiv_push(W, A, B, eq.witness->Xt, tol);
    const EquivResult oracle = equiv_check(push.TA, push.TB, tol);
    double mismatch = std::numeric_limits<double>::infinity();
    if (oracle) {
      mismatch = opnorm(lift(push.witness, push.TA.support().basis, push.TB.support().basis) -
                        lift(oracle.witness->Xt, oracle.witness->basis_A, oracle.witness->basis_B));
    }
    const bool ok = oracle.equivalent() && mismatch <= 1e-7 * std::max(1.0, push.output_norm);
    j["route"] = "equivalence";
    j["input_norm"] = push.input_norm;
    j["output_norm"] = push.output_norm;
    j["witness"] = matrix_to_json(push.witness);
    j["residual"] = push.residual;
    j["oracle"] = {{"equivalent", oracle.equivalent()}, {"mismatch", mismatch}};
    j["T_A"] = matrix_to_json(push.TA.value());
    j["T_B"] = matrix_to_json(push.TB.value());
    j["verdict"] = ok ? "pass" : "fail";
    pass = pass && ok;
    return j;
  }
  const PrecResult pr = prec_check(A, B, tol);
  if (!pr) throw NotComparable(pr.residual, "A is not below B");
  const PushResult push = prec_push(W, A, B, pr.witness->X, tol);
  const PrecResult oracle = prec_check(push.TA, push.TB, tol);
  const double mismatch = oracle ? opnorm(oracle.witness->X - push.witness)
                                 : std::numeric_limits<double>::infinity();
  const bool ok = oracle.comparable() && mismatch <= 1e-7 * std::max(1.0, opnorm(push.witness));
  j["route"] = "preorder";
  j["witness"] = matrix_to_json(push.witness);
  j["residual"] = push.residual;
  j["threshold"] = push.threshold;
  j["oracle"] = {{"comparable", oracle.comparable()}, {"mismatch", mismatch}};
  j["T_A"] = matrix_to_json(push.TA.value());
  j["T_B"] = matrix_to_json(push.TB.value());
  j["verdict"] = ok ? "pass" : "fail";
  pass = pass && ok;
  return j;
}

int cmd_lft_witness(const std::string& pw, const std::string& pa, const std::string& pb,
                    const std::string& at, bool selftest, const Options& o,
                    std::ostream& out) {
  bool pass = true;
  Json j;
  if (selftest) {
    if (o.dim < 1) throw InputError("--dim must be at least 1");
    const JContractiveW W = sample_jcontractive(o.dim, true, split_seed(o.seed, 7, 0), o.tol);
    const PRMatrix B = sample_pr(o.dim, o.dim, split_seed(o.seed, 7, 1), o.tol);
    const PRMatrix A = sample_prec_pair(B, 0.5, split_seed(o.seed, 7, 2), 1.0, o.tol).A;
    j["seed"] = o.seed;
    j["dim"] = o.dim;
    j["runs"] = Json::array({witness_run(W, A, B, false, o.tol, pass),
                             witness_run(W, A, B, true, o.tol, pass)});
  } else {
    if (pw.empty() || pa.empty() || pb.empty()) {
      throw InputError("lft witness needs W, A and --witness B, or --selftest");
    }
    const JContractiveW W = load_w(pw, at, o.tol);
    const PRMatrix A = load_pr(pa, o.tol);
    const PRMatrix B = load_pr(pb, o.tol);
    same_dim(A, B);
    if (A.dim() != W.n()) throw InputError("A does not match the blocks of W");
    const bool equivalent = equiv_check(A, B, o.tol).equivalent();
    j = witness_run(W, A, B, equivalent, o.tol, pass);
  }
  j["verdict"] = pass ? "pass" : "fail";
  emit(j, o, out);
  return pass ? kExitOk : kExitViolation;
}

int cmd_cara_prec(const std::string& pf, const std::string& pg, const Options& o,
                  std::ostream& out) {
  const DiscGrid grid = grid_of(o);
  const CaraFunction F = cara_from_json(read_json_file(pf), grid, o.tol);
  const CaraFunction G = cara_from_json(read_json_file(pg), grid, o.tol);
  if (F.dim() != G.dim()) throw InputError("F and G have different dimensions");
  const PrecCReport r = prec_c_check(F, G, grid, o.tol);
  Json j;
  j["relation"] = "prec_c";
  j["comparable"] = r.comparable;
  j["sup_q"] = r.sup_q;
  j["worst_point"] = complex_json(r.worst_point);
  j["delta_min"] = r.delta_min;
  j["points"] = r.samples.size();
  if (!r.detail.empty()) j["detail"] = r.detail;
  j["grid"] = to_json(grid);
  emit(j, o, out);
  return r.comparable ? kExitOk : kExitViolation;
}

int cmd_cara_equiv(const std::string& pf, const std::string& pg, const Options& o,
                   std::ostream& out) {
  const DiscGrid grid = grid_of(o);
  const CaraFunction F = cara_from_json(read_json_file(pf), grid, o.tol);
  const CaraFunction G = cara_from_json(read_json_file(pg), grid, o.tol);
  if (F.dim() != G.dim()) throw InputError("F and G have different dimensions");
  const EquivCReport r = equiv_c_check(F, G, grid, o.tol);
  Json j;
  j["relation"] = "equiv_c";
  j["equivalent"] = r.equivalent();
  j["pointwise_ok"] = r.pointwise_ok;
  j["supports_equal"] = r.supports_equal;
  j["sup_qt"] = r.sup_qt;
  j["sup_rt"] = r.sup_rt;
  j["worst_point"] = complex_json(r.worst_point);
  j["delta_min"] = r.delta_min;
  j["continuity_ratio"] = r.continuity_ratio;
  j["continuity_ok"] = r.continuity_ok();
  if (!r.detail.empty()) j["detail"] = r.detail;
  j["grid"] = to_json(grid);
  emit(j, o, out);
  return r.equivalent() ? kExitOk : kExitViolation;
}

int cmd_cara_tpsi(const std::string& ppsi, const std::string& pf, bool literal,
                  const Options& o, std::ostream& out) {
  const DiscGrid grid = grid_of(o);
  auto psi = std::make_shared<const PsiBlock>(psi_from_json(read_json_file(ppsi)));
  auto F = std::make_shared<const CaraFunction>(cara_from_json(read_json_file(pf), grid, o.tol));
  if (psi->n() != F->dim()) throw InputError("Psi blocks do not match the dimension of F");
  const PsiAudit audit = audit_psi(*psi, grid, o.tol);
  if (!audit.ok(o.tol)) {
    throw NotJContractive(-audit.jcontr_margin, "Psi is not J-contractive on the grid");
  }
  const CaraFunction T = t_psi_apply(psi, F, grid, o.tol, literal);
  Json values = Json::array();
  for (const Complex& z : grid.points()) {
    values.push_back({{"z", complex_json(z)}, {"value", matrix_to_json(T.value(z))}});
  }
  Json j;
  j["psi"] = psi->label();
  j["literal"] = literal;
  j["jcontr_margin"] = audit.jcontr_margin;
  j["singular_points"] = audit.singular_points.size();
  j["re_min"] = is_strict(T, grid).rho;
  j["at_zero"] = matrix_to_json(T.value(0.0));
  j["grid"] = to_json(grid);
  j["values"] = std::move(values);
  emit(j, o, out);
  return kExitOk;
}

int cmd_cara_probe(const std::string& pf, const std::string& beta,
                   const std::vector<double>& u_entries, std::vector<double> deltas,
                   const Options& o, std::ostream& out) {
  const DiscGrid grid = grid_of(o);
  const CaraFunction F = cara_from_json(read_json_file(pf), grid, o.tol);
  CVector u = CVector::Zero(F.dim());
  if (u_entries.empty()) {
    u(0) = 1.0;
  } else if (static_cast<Index>(u_entries.size()) != F.dim()) {
    throw InputError("--u must have one entry per dimension");
  } else {
    for (Index i = 0; i < F.dim(); ++i) u(i) = u_entries[static_cast<std::size_t>(i)];
  }
  const Complex b = parse_complex(beta);
  if (std::abs(std::abs(b) - 1.0) > 1e-12) throw InputError("--beta must lie on the unit circle");
  for (double d : deltas) {
    if (!(d > 0.0 && d < 1.0)) throw InputError("--deltas must lie in (0, 1)");
  }
  const ProbeReport r = radial_limit_probe(F.evaluator(), u, b, std::move(deltas), o.tol);
  Json rows = Json::array();
  for (const ProbeRow& row : r.rows) {
    rows.push_back({{"delta", row.delta}, {"delta_eff", row.delta_eff}, {"value", row.value}});
  }
  Json j;
  j["beta"] = complex_json(b);
  j["rows"] = std::move(rows);
  j["monotone"] = r.monotone;
  j["below_tol"] = r.below_tol;
  j["max_rate"] = r.max_rate;
  emit(j, o, out);
  return kExitOk;
}

int cmd_verify(const std::string& suite, const Options& o, std::ostream& out,
               std::ostream& err) {
  VerifyConfig cfg;
  cfg.suite = parse_suite(suite);
  cfg.trials = o.trials;
  cfg.dim = o.dim;
  cfg.seed = o.seed;
  cfg.tol = o.tol;
  cfg.grid = grid_of(o);
  const VerifyResult r = run_verify(cfg);
  emit(r.summary, o, out);
  if (!r.ok()) err << "verify: " << r.violations << " violation(s)\n";
  return r.ok() ? kExitOk : kExitViolation;
}

int cmd_example41(const Options& o, std::ostream& out) {
  Example41Config cfg;
  cfg.tol = o.tol;
  const Example41Report r = example_4_1(cfg);
  Json t0 = Json::array();
  for (const auto& [d, v] : r.t0_values) t0.push_back({{"delta", d}, {"T0", v}});
  Json q = Json::array();
  for (const auto& [d, v] : r.q_growth) q.push_back({{"delta_min", d}, {"sup_q", v}});
  Json j;
  j["jcontr_margin"] = r.jcontr_margin;
  j["j2_margin"] = r.j2_margin;
  j["j2_display_residual"] = r.j2_display_residual;
  j["det_residual"] = r.det_residual;
  j["det_unnormalized_residual"] = r.det_unnormalized_residual;
  j["t1_sup_dev"] = r.t1_sup_dev;
  j["t0_max_rel_err"] = r.t0_max_rel_err;
  j["t0_values"] = std::move(t0);
  j["re_max_err"] = r.re_max_err;
  j["re_min"] = r.re_min;
  j["q_growth"] = std::move(q);
  j["min_q_times_delta"] = r.min_q_times_delta;
  j["q_monotone"] = r.q_monotone;
  j["reduced_zero"] = r.reduced_zero;
  j["reduced_one"] = r.reduced_one;
  j["clauses"] = {{"a", r.clause_a(o.tol)}, {"b", r.clause_b()}, {"c", r.clause_c()},
                  {"d", r.clause_d()}, {"e", r.clause_e()}};
  j["ok"] = r.all(o.tol);
  emit(j, o, out);
  return r.all(o.tol) ? kExitOk : kExitViolation;
}

int report(std::ostream& out, std::ostream& err, int code, const char* kind,
           const std::string& message, Json extra = Json::object()) {
  Json j;
  j["ok"] = false;
  extra["type"] = kind;
  extra["message"] = message;
  j["error"] = std::move(extra);
  out << dump_json(j) << "\n";
  err << "error: " << message << "\n";
  return code;
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  Options o;
  try {
    o.tol = env_tol();
  } catch (const InputError& e) {
    return report(out, err, kExitInput, "InputError", e.what());
  }

  CLI::App app{"Positive-real pre-order and equivalence toolkit", "prcone"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--tol", o.tol, "Relative tolerance (default: PRCONE_TOL or 1e-9)")
      ->check(CLI::PositiveNumber);
  app.add_option("--json-out", o.json_out, "Also write the JSON result to PATH");
  app.add_option("--seed", o.seed, "Seed for randomized commands");
  app.add_option("--trials", o.trials, "Trials per verification suite");
  app.add_option("--dim", o.dim, "Matrix dimension for randomized commands");
  app.add_option("--grid-radii", o.grid_radii, "Disc grid radii in (0, 1)");
  app.add_option("--grid-angles", o.grid_angles, "Points per grid ring");

  std::string a, b, w, witness, at, suite = "all", beta = "1";
  bool literal = false, selftest = false;
  std::vector<double> u_entries;
  std::vector<double> deltas{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};

  auto* check_prec = app.add_subcommand("check-prec", "Decide A ≺ B and print the witness");
  check_prec->add_option("A", a)->required();
  check_prec->add_option("B", b)->required();
  auto* check_equiv = app.add_subcommand("check-equiv", "Decide A ∼ B and print the witness");
  check_equiv->add_option("A", a)->required();
  check_equiv->add_option("B", b)->required();

  auto* lft = app.add_subcommand("lft", "Linear fractional transformations");
  lft->require_subcommand(1);
  auto* lft_apply = lft->add_subcommand("apply", "Evaluate T_W[A]");
  lft_apply->add_option("W", w)->required();
  lft_apply->add_option("A", a)->required();
  lft_apply->add_option("--at", at, "Evaluation point when W is a Psi block");
  auto* lft_witness = lft->add_subcommand("witness", "Push a witness through T_W");
  lft_witness->add_option("W", w);
  lft_witness->add_option("A", a);
  lft_witness->add_option("--witness", b, "Matrix B related to A");
  lft_witness->add_option("--at", at, "Evaluation point when W is a Psi block");
  lft_witness->add_flag("--selftest", selftest, "Run on a seeded random triple");

  auto* cara = app.add_subcommand("cara", "Carathéodory functions on the disc");
  cara->require_subcommand(1);
  auto* cara_prec = cara->add_subcommand("check-prec", "Grid check of F ≺_C G");
  cara_prec->add_option("F", a)->required();
  cara_prec->add_option("G", b)->required();
  auto* cara_equiv = cara->add_subcommand("check-equiv", "Grid check of F ∼_C G");
  cara_equiv->add_option("F", a)->required();
  cara_equiv->add_option("G", b)->required();
  auto* cara_tpsi = cara->add_subcommand("tpsi", "Evaluate T_Psi[F] on the grid");
  cara_tpsi->add_option("PSI", w)->required();
  cara_tpsi->add_option("F", a)->required();
  cara_tpsi->add_flag("--literal", literal, "Use the (Psi11 + Psi12 F)(Psi22 + Psi21 F)^-1 ordering");
  auto* cara_probe = cara->add_subcommand("probe", "Radial probe of ||F((1 - delta) beta) u||");
  cara_probe->add_option("F", a)->required();
  cara_probe->add_option("--beta", beta, "Boundary point, re or re,im");
  cara_probe->add_option("--u", u_entries, "Real direction vector (default e1)");
  cara_probe->add_option("--deltas", deltas, "Distances to the boundary");

  auto* verify = app.add_subcommand("verify", "Randomized verification suites");
  verify->add_option("--suite", suite,
                     "preorder, equivalence, lft_prec, lft_equiv, cara, example41 or all");

  auto* repro = app.add_subcommand("repro", "Reproduce a worked example");
  repro->require_subcommand(1);
  auto* repro41 = repro->add_subcommand("example-4-1", "The scalar LFT example");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*check_prec) return cmd_check_prec(a, b, o, out);
    if (*check_equiv) return cmd_check_equiv(a, b, o, out);
    if (*lft_apply) return cmd_lft_apply(w, a, at, o, out);
    if (*lft_witness) return cmd_lft_witness(w, a, b, at, selftest, o, out);
    if (*cara_prec) return cmd_cara_prec(a, b, o, out);
    if (*cara_equiv) return cmd_cara_equiv(a, b, o, out);
    if (*cara_tpsi) return cmd_cara_tpsi(w, a, literal, o, out);
    if (*cara_probe) return cmd_cara_probe(a, beta, u_entries, deltas, o, out);
    if (*verify) return cmd_verify(suite, o, out, err);
    if (*repro41) return cmd_example41(o, out);
    return report(out, err, kExitInput, "InputError", "no command given");
  } catch (const NotJContractive& e) {
    return report(out, err, kExitInvalidW, "NotJContractive", e.what(),
                  {{"excess", e.excess()}});
  } catch (const SingularMatrix& e) {
    return report(out, err, kExitInvalidW, "SingularMatrix", e.what(), {{"cond", e.cond()}});
  } catch (const OutOfDomain& e) {
    return report(out, err, kExitDomain, "OutOfDomain", e.what(),
                  {{"cond", e.cond()}, {"point", complex_json(e.point())}});
  } catch (const NotPositiveReal& e) {
    return report(out, err, kExitInput, "NotPositiveReal", e.what(),
                  {{"eigmin", e.eigmin()}});
  } catch (const NotPSD& e) {
    return report(out, err, kExitInput, "NotPSD", e.what(), {{"eigenvalue", e.eigenvalue()}});
  } catch (const InputError& e) {
    return report(out, err, kExitInput, "InputError", e.what());
  } catch (const DimensionError& e) {
    return report(out, err, kExitInput, "DimensionError", e.what());
  } catch (const nlohmann::json::exception& e) {
    return report(out, err, kExitInput, "InputError", e.what());
  } catch (const NotComparable& e) {
    return report(out, err, kExitViolation, "NotComparable", e.what(),
                  {{"residual", e.residual()}});
  } catch (const InvariantViolation& e) {
    return report(out, err, kExitViolation, "InvariantViolation", e.what(),
                  {{"residual", e.residual()}});
  } catch (const std::exception& e) {
    return report(out, err, kExitViolation, "Error", e.what());
  }
}

}  // namespace prcone
