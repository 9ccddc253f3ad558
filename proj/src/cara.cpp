#include "prcone/cara.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "prcone/random.hpp"

namespace prcone {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CMatrix eye(Index k) { return CMatrix::Identity(k, k); }

std::string fmt_point(Complex z) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << z.real() << ", " << z.imag() << ")";
  return os.str();
}

void require_disc(Complex z) {
  if (!(std::abs(z) < 1.0)) {
    throw OutOfDomain(kInf, z, "point " + fmt_point(z) +
                                   " is not inside the open unit disc");
  }
}

CMatrix horner(const std::vector<CMatrix>& c, Complex z) {
  CMatrix acc = c.back();
  for (std::size_t k = c.size() - 1; k-- > 0;) acc = (z * acc + c[k]).eval();
  return acc;
}

void require_psd(const CMatrix& P, double tol, const char* what) {
  require_square(P, what);
  const CMatrix S = symmetrize(P);
  if (opnorm(P - S) > scaled_tol(tol, opnorm(P))) {
    throw Error(std::string(what) + ": coefficient is not Hermitian");
  }
  psd_roots(S, tol);  // throws NotPSD
}

CMatrix lift_xt(const EquivWitness& w) {
  return lift(w.Xt, w.basis_A, w.basis_B);
}

Evaluator wrap(const CaraFunction& F) { return F.evaluator(); }

}  // namespace

// ---------------------------------------------------------------------------
// DiscGrid

DiscGrid DiscGrid::make(std::vector<double> radii, int angles) {
  if (radii.empty()) throw Error("grid: at least one radius is required");
  if (angles < 1) throw Error("grid: angles must be positive");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r = radii[i];
    if (!(r > 0.0 && r < 1.0)) {
      throw Error("grid: radius " + std::to_string(r) + " outside (0, 1)");
    }
    if (i > 0 && !(r > radii[i - 1])) {
      throw Error("grid: radii must be strictly increasing");
    }
  }
  DiscGrid g;
  g.radii = std::move(radii);
  g.angles = angles;
  return g;
}

DiscGrid DiscGrid::uniform(int rings, int angles, double delta_min) {
  if (rings < 1) throw Error("grid: rings must be positive");
  if (!(delta_min > 0.0 && delta_min < 1.0)) {
    throw Error("grid: delta_min must lie in (0, 1)");
  }
  std::vector<double> radii(rings);
  const double top = 1.0 - delta_min;
  for (int i = 0; i < rings; ++i) radii[i] = top * (i + 1) / rings;
  radii.back() = top;
  return make(std::move(radii), angles);
}

double DiscGrid::delta_min() const { return 1.0 - radii.back(); }

Complex DiscGrid::point(std::size_t ring, int k) const {
  if (k == 0) return Complex(radii[ring], 0.0);
  return std::polar(radii[ring], 2.0 * std::numbers::pi * k / angles);
}

std::vector<Complex> DiscGrid::points() const {
  std::vector<Complex> out;
  out.reserve(size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    for (int k = 0; k < angles; ++k) out.push_back(point(i, k));
  }
  return out;
}

// ---------------------------------------------------------------------------
// CaraFunction

CaraFunction CaraFunction::herglotz(CMatrix H0, CMatrix P0,
                                    std::vector<HerglotzTerm> terms,
                                    double tol) {
  require_square(H0, "herglotz");
  const Index n = H0.rows();
  if (P0.rows() != n || P0.cols() != n) {
    throw DimensionError("herglotz: P0 does not match H0");
  }
  if (opnorm(H0 - H0.adjoint()) > scaled_tol(tol, opnorm(H0))) {
    throw Error("herglotz: H0 is not Hermitian");
  }
  require_psd(P0, tol, "herglotz P0");
  for (HerglotzTerm& t : terms) {
    if (t.P.rows() != n || t.P.cols() != n) {
      throw DimensionError("herglotz: term coefficient has the wrong size");
    }
    require_psd(t.P, tol, "herglotz P_k");
    if (!(std::abs(t.beta) >= 1.0 - tol)) {
      throw Error("herglotz: |beta| must be at least 1");
    }
    t.P = symmetrize(t.P);
  }
  CaraFunction f;
  f.dim_ = n;
  f.tol_ = tol;
  f.model_ = HerglotzModel{symmetrize(H0), symmetrize(P0), std::move(terms)};
  f.init_support(tol);
  return f;
}

CaraFunction CaraFunction::rational(std::vector<CMatrix> num,
                                    std::vector<CMatrix> den,
                                    const DiscGrid& grid, double tol) {
  if (num.empty() || den.empty()) {
    throw Error("rational: numerator and denominator need coefficients");
  }
  const Index n = num[0].rows();
  for (const auto* list : {&num, &den}) {
    for (const CMatrix& c : *list) {
      if (c.rows() != n || c.cols() != n) {
        throw DimensionError("rational: coefficient sizes differ");
      }
    }
  }
  CaraFunction f;
  f.dim_ = n;
  f.tol_ = tol;
  f.model_ = RationalModel{std::move(num), std::move(den)};
  f.eval(Complex(0.0, 0.0), tol);
  for (const Complex& z : grid.points()) f.eval(z, tol);
  f.init_support(tol);
  return f;
}

CaraFunction CaraFunction::constant(const CMatrix& A, double tol) {
  const PRMatrix pr = make_pr(A, tol);
  CaraFunction f;
  f.dim_ = pr.dim();
  f.tol_ = tol;
  f.model_ = ConstantModel{A};
  f.support_ = pr.support();
  return f;
}

CaraFunction CaraFunction::lft(std::shared_ptr<const PsiBlock> psi,
                               std::shared_ptr<const CaraFunction> inner,
                               bool literal, double tol) {
  if (!psi || !inner) throw Error("lft: null component");
  if (psi->n() != inner->dim()) {
    throw DimensionError("lft: Psi and F dimensions differ");
  }
  CaraFunction f;
  f.dim_ = inner->dim();
  f.tol_ = tol;
  f.model_ = LftModel{std::move(psi), std::move(inner), literal};
  f.init_support(tol);
  return f;
}

void CaraFunction::init_support(double tol) {
  // Any interior point works; try a few in case the first is a singular
  // point of an LFT denominator.
  const Complex refs[] = {{0.0, 0.0}, {0.25, 0.0}, {0.0, 0.25}, {-0.25, 0.0},
                          {0.0, -0.25}};
  for (const Complex& z : refs) {
    try {
      support_ = eval(z, tol).support();
      return;
    } catch (const OutOfDomain&) {
    }
  }
  throw OutOfDomain(kInf, refs[0], "no reference point for the support");
}

const char* CaraFunction::kind() const {
  switch (model_.index()) {
    case 0: return "herglotz";
    case 1: return "rational";
    case 2: return "constant";
    default: return "lft";
  }
}

CMatrix CaraFunction::value(Complex z) const {
  require_disc(z);
  if (const auto* h = std::get_if<HerglotzModel>(&model_)) {
    CMatrix out = Complex(0.0, 1.0) * h->H0 + h->P0;
    for (const HerglotzTerm& t : h->terms) {
      out += ((t.beta + z) / (t.beta - z)) * t.P;
    }
    return out;
  }
  if (const auto* r = std::get_if<RationalModel>(&model_)) {
    const CMatrix N = horner(r->num, z);
    const CMatrix D = horner(r->den, z);
    const double c = cond(D);
    if (!(c < 1.0 / tol_)) {
      throw OutOfDomain(c, z, "rational: denominator singular at " +
                                  fmt_point(z));
    }
    return D.transpose().partialPivLu().solve(N.transpose()).transpose();
  }
  if (const auto* c = std::get_if<ConstantModel>(&model_)) return c->value;

  const auto& m = std::get<LftModel>(model_);
  const CMatrix F = m.inner->value(z);
  const CMatrix P = m.psi->value(z);
  const Index n = dim_;
  const CMatrix P11 = P.topLeftCorner(n, n);
  const CMatrix P12 = P.topRightCorner(n, n);
  const CMatrix P21 = P.bottomLeftCorner(n, n);
  const CMatrix P22 = P.bottomRightCorner(n, n);
  const CMatrix D = P21 * F + P22;
  const CMatrix N = m.literal ? CMatrix(P11 + P12 * F) : CMatrix(P11 * F + P12);
  const double c = cond(D);
  if (!(c < 1.0 / tol_)) {
    throw OutOfDomain(c, z, "T_Psi: denominator singular at " + fmt_point(z));
  }
  return D.transpose().partialPivLu().solve(N.transpose()).transpose();
}

PRMatrix CaraFunction::eval(Complex z, double tol) const {
  const CMatrix v = value(z);
  try {
    return make_pr(v, tol);
  } catch (const NotPositiveReal& e) {
    throw NotPositiveReal(e.eigmin(), std::string(kind()) +
                                          " model is not positive real at " +
                                          fmt_point(z));
  }
}

Evaluator CaraFunction::evaluator() const {
  // Copy so the evaluator outlives this object.
  auto self = std::make_shared<const CaraFunction>(*this);
  return [self](Complex z) { return self->value(z); };
}

// ---------------------------------------------------------------------------
// PsiBlock

PsiBlock PsiBlock::polynomial(std::vector<CMatrix> coeffs, std::string label) {
  if (coeffs.empty()) throw Error("psi: no coefficients");
  const Index m = coeffs[0].rows();
  if (m == 0 || m % 2 != 0) throw DimensionError("psi: blocks must be 2n x 2n");
  for (const CMatrix& c : coeffs) {
    if (c.rows() != m || c.cols() != m) {
      throw DimensionError("psi: coefficient sizes differ");
    }
    require_finite(c, "psi");
  }
  PsiBlock p;
  p.n_ = m / 2;
  p.coeffs_ = std::move(coeffs);
  p.label_ = std::move(label);
  return p;
}

PsiBlock PsiBlock::example_4_1(Index n) {
  if (n < 1) throw DimensionError("psi: n must be positive");
  const CMatrix I = 0.5 * eye(n);
  CMatrix c0(2 * n, 2 * n), c1(2 * n, 2 * n);
  c0 << I, I, I, I;
  c1 << -I, I, I, -I;
  return polynomial({c0, c1}, "example-4.1");
}

PsiBlock PsiBlock::example_4_1_unnormalized() {
  CMatrix c0(2, 2), c1(2, 2);
  c0 << 1.0, 1.0, 1.0, 1.0;
  c1 << -1.0, 1.0, 1.0, -1.0;
  return polynomial({c0, c1}, "example-4.1-unnormalized");
}

PsiBlock PsiBlock::constant(const CMatrix& W) {
  return polynomial({W}, "constant");
}

PsiBlock PsiBlock::sample(Index n, std::uint64_t seed) {
  Rng rng(split_seed(seed, 0x505349, 0));
  const CMatrix U = random_unitary(n, rng);
  const CMatrix W1 = sample_jcontractive(n, true, split_seed(seed, 0x505349, 1)).W();
  const CMatrix W2 = sample_jcontractive(n, true, split_seed(seed, 0x505349, 2)).W();
  const CMatrix I = eye(n);
  CMatrix c0(2 * n, 2 * n), c1(2 * n, 2 * n);
  c0 << I, I, I, I;
  c1 << -U, U, U, -U;
  c0 *= 0.5;
  c1 *= 0.5;
  return polynomial({W1 * c0 * W2, W1 * c1 * W2}, "sampled");
}

CMatrix PsiBlock::value(Complex z) const { return horner(coeffs_, z); }

Complex PsiBlock::det(Complex z) const {
  return value(z).partialPivLu().determinant();
}

CMatrix PsiBlock::tilde(Complex z, double tol) const {
  const SignaturePair sig = SignaturePair::make(n_);
  return sig.Jhat * inv(value(z), tol) * sig.Jhat;
}

bool PsiBlock::singular_at(Complex z, double tol) const {
  const CMatrix P = value(z);
  if (std::abs(P.partialPivLu().determinant()) <= tol) return true;
  return !(cond(P) <= 1.0 / tol);
}

PsiAudit audit_psi(const PsiBlock& psi, const DiscGrid& grid, double tol) {
  std::vector<Complex> pts = grid.points();
  pts.insert(pts.begin(), Complex(0.0, 0.0));
  const SignaturePair sig = SignaturePair::make(psi.n());
  PsiAudit out;
  out.jcontr_margin = kInf;
  for (const Complex& z : pts) {
    const CMatrix P = psi.value(z);
    const double m = eigmin_herm(symmetrize(sig.J - P.adjoint() * sig.J * P));
    if (m < out.jcontr_margin) {
      out.jcontr_margin = m;
      out.worst_point = z;
    }
    out.max_abs_det = std::max(out.max_abs_det, std::abs(psi.det(z)));
    if (psi.singular_at(z, tol)) out.singular_points.push_back(z);
  }
  out.det_not_identically_zero = out.max_abs_det > tol;
  return out;
}

// ---------------------------------------------------------------------------
// Function-level relations

PointwiseAudit pointwise_equiv_audit(const CaraFunction& F,
                                     const std::vector<Complex>& pts,
                                     double tol) {
  std::vector<PRMatrix> vals;
  vals.reserve(pts.size());
  for (const Complex& z : pts) vals.push_back(F.eval(z, tol));
  PointwiseAudit out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      ++out.pairs;
      const EquivResult r = equiv_check(vals[i], vals[j], tol);
      if (!r) {
        if (out.failures++ == 0) {
          out.first_failure = fmt_point(pts[i]) + " vs " + fmt_point(pts[j]) +
                              ": " + to_string(r.failure) + " " + r.detail;
        }
        continue;
      }
      out.max_xt_norm = std::max(out.max_xt_norm, opnorm(r.witness->Xt));
      out.max_residual = std::max(out.max_residual, r.witness->recon_residual);
    }
  }
  return out;
}

PrecCReport prec_c_check(const Evaluator& F, const Evaluator& G,
                         const DiscGrid& grid, double tol) {
  PrecCReport out;
  out.delta_min = grid.delta_min();
  out.comparable = true;
  for (const Complex& z : grid.points()) {
    const PRMatrix A = make_pr(F(z), tol);
    const PRMatrix B = make_pr(G(z), tol);
    const PrecResult r = prec_check(A, B, tol);
    PointSample s;
    s.z = z;
    s.residual = r.residual;
    s.ok = r.comparable();
    if (s.ok) {
      s.norm = opnorm(r.witness->X);
      if (s.norm > out.sup_q) {
        out.sup_q = s.norm;
        out.worst_point = z;
      }
    } else if (out.comparable) {
      out.comparable = false;
      out.detail = "pointwise pre-order fails at " + fmt_point(z) +
                   ", residual " + std::to_string(r.residual);
    }
    out.samples.push_back(s);
  }
  return out;
}

PrecCReport prec_c_check(const CaraFunction& F, const CaraFunction& G,
                         const DiscGrid& grid, double tol) {
  if (F.dim() != G.dim()) throw DimensionError("prec_c_check: dims differ");
  return prec_c_check(wrap(F), wrap(G), grid, tol);
}

EquivCReport equiv_c_check(const Evaluator& F, const Evaluator& G,
                           const DiscGrid& grid, double tol) {
  EquivCReport out;
  out.delta_min = grid.delta_min();
  out.pointwise_ok = true;
  out.supports_equal = true;
  const std::size_t rings = grid.radii.size();
  const int na = grid.angles;
  std::vector<std::optional<CMatrix>> lifted(grid.size());
  Index rank_F = -1;
  Index rank_G = -1;

  for (std::size_t i = 0; i < rings; ++i) {
    for (int k = 0; k < na; ++k) {
      const Complex z = grid.point(i, k);
      const PRMatrix A = make_pr(F(z), tol);
      const PRMatrix B = make_pr(G(z), tol);
      if (rank_F < 0) {
        rank_F = A.rank();
        rank_G = B.rank();
      }
      if (A.rank() != rank_F || B.rank() != rank_G || A.rank() != B.rank()) {
        if (out.supports_equal) {
          out.detail = "support rank changes at " + fmt_point(z);
        }
        out.supports_equal = false;
      }
      const EquivResult r = equiv_check(A, B, tol);
      PointSample s;
      s.z = z;
      s.ok = r.equivalent();
      if (s.ok) {
        s.norm = opnorm(r.witness->Xt);
        s.aux_norm = opnorm(r.witness->Yt);
        s.residual = r.witness->recon_residual;
        out.sup_rt = std::max(out.sup_rt, s.aux_norm);
        if (s.norm > out.sup_qt) {
          out.sup_qt = s.norm;
          out.worst_point = z;
        }
        lifted[i * na + k] = lift_xt(*r.witness);
      } else {
        if (out.pointwise_ok) {
          out.detail = "pointwise equivalence fails at " + fmt_point(z) +
                       ": " + to_string(r.failure) + " " + r.detail;
        }
        out.pointwise_ok = false;
        if (r.failure == EquivFailure::support_mismatch) {
          out.supports_equal = false;
        }
      }
      out.samples.push_back(s);
    }
  }

  for (std::size_t i = 0; i < rings && na > 1; ++i) {
    const double r = grid.radii[i];
    for (int k = 0; k < na; ++k) {
      const int k2 = (k + 1) % na;
      const auto& a = lifted[i * na + k];
      const auto& b = lifted[i * na + k2];
      if (!a || !b) continue;
      const double dz = std::abs(grid.point(i, k) - grid.point(i, k2));
      const double bound = 8.0 * (out.sup_qt + 1.0) * dz / (1.0 - r);
      out.continuity_ratio =
          std::max(out.continuity_ratio, opnorm(*a - *b) / bound);
    }
  }
  return out;
}

EquivCReport equiv_c_check(const CaraFunction& F, const CaraFunction& G,
                           const DiscGrid& grid, double tol) {
  if (F.dim() != G.dim()) throw DimensionError("equiv_c_check: dims differ");
  EquivCReport out = equiv_c_check(wrap(F), wrap(G), grid, tol);
  const CMatrix& uF = F.support().basis;
  const CMatrix& uG = G.support().basis;
  if (!(range_included(uF, uG, tol) && range_included(uG, uF, tol))) {
    if (out.supports_equal) out.detail = "support subspaces differ";
    out.supports_equal = false;
  }
  return out;
}

StrictReport is_strict(const CaraFunction& F, const DiscGrid& grid) {
  StrictReport out;
  out.rho = kInf;
  for (const Complex& z : grid.points()) {
    const double m = eigmin_herm(herm_part(F.value(z)));
    if (m < out.rho) {
      out.rho = m;
      out.worst_point = z;
    }
  }
  return out;
}

CaraFunction t_psi_apply(std::shared_ptr<const PsiBlock> psi,
                         std::shared_ptr<const CaraFunction> F,
                         const DiscGrid& grid, double tol, bool literal) {
  CaraFunction T = CaraFunction::lft(std::move(psi), std::move(F), literal, tol);
  for (const Complex& z : grid.points()) T.eval(z, tol);
  return T;
}

ReducedDomainReport reduced_domain_check(const PsiBlock& psi,
                                         const CaraFunction& F,
                                         const DiscGrid& grid, double tol,
                                         double cap) {
  if (psi.n() != F.dim()) {
    throw DimensionError("reduced_domain_check: dims differ");
  }
  ReducedDomainReport out;
  out.cap = cap;
  out.caratheodory = true;
  const Index n = psi.n();
  for (const Complex& z : grid.points()) {
    const CMatrix Fz = F.value(z);
    out.sup_f = std::max(out.sup_f, opnorm(Fz));
    try {
      make_pr(Fz, tol);
    } catch (const NotPositiveReal&) {
      out.caratheodory = false;
    }
    if (psi.singular_at(z, tol)) {
      ++out.skipped;
      continue;
    }
    const CMatrix Pt = psi.tilde(z, tol);
    const CMatrix E = Pt.topLeftCorner(n, n) + Fz * Pt.bottomLeftCorner(n, n);
    double v = kInf;
    if (cond(E) <= 1.0 / tol) v = opnorm(E.partialPivLu().inverse());
    if (v > out.sup_inv) {
      out.sup_inv = v;
      out.worst_point = z;
    }
  }
  out.in_domain = out.caratheodory && out.sup_f < cap && out.sup_inv < cap;
  return out;
}

bool PreservationReport::preserved(double tol) const {
  if (!source_ok || !image_ok) return false;
  if (mode == AuditMode::preorder) return true;
  return max_pointwise_excess <= tol &&
         push_mismatch <= scaled_tol(tol, std::max(1.0, sup_source));
}

PreservationReport preservation_audit(std::shared_ptr<const PsiBlock> psi,
                                      std::shared_ptr<const CaraFunction> F,
                                      std::shared_ptr<const CaraFunction> G,
                                      const DiscGrid& grid, AuditMode mode,
                                      double tol) {
  PreservationReport out;
  out.mode = mode;
  const CaraFunction TF = t_psi_apply(psi, F, grid, tol);
  const CaraFunction TG = t_psi_apply(psi, G, grid, tol);

  if (mode == AuditMode::preorder) {
    const PrecCReport src = prec_c_check(*F, *G, grid, tol);
    const PrecCReport img = prec_c_check(TF, TG, grid, tol);
    out.source_ok = src.comparable;
    out.image_ok = img.comparable;
    out.sup_source = src.sup_q;
    out.sup_image = img.sup_q;
    out.detail = !src.comparable ? src.detail : img.detail;
    return out;
  }

  const EquivCReport src = equiv_c_check(*F, *G, grid, tol);
  const EquivCReport img = equiv_c_check(TF, TG, grid, tol);
  out.source_ok = src.equivalent();
  out.image_ok = img.equivalent();
  out.sup_source = src.sup_qt;
  out.sup_image = img.sup_qt;
  out.detail = !src.equivalent() ? src.detail : img.detail;
  if (!out.source_ok || !out.image_ok) return out;

  out.max_pointwise_excess = -kInf;
  const std::vector<Complex> pts = grid.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Complex z = pts[i];
    if (psi->singular_at(z, tol)) {
      ++out.skipped_points;
      continue;
    }
    ++out.invertible_points;
    out.max_pointwise_excess = std::max(
        out.max_pointwise_excess, img.samples[i].norm - src.samples[i].norm);

    const JContractiveW W = JContractiveW::validate(psi->value(z), tol);
    if (!W.invertible()) continue;
    const PRMatrix A = F->eval(z, tol);
    const PRMatrix B = G->eval(z, tol);
    const EquivResult eq = equiv_check(A, B, tol);
    try {
      const PushResult pr = equiv_push(W, A, B, eq.witness->Xt, tol);
      const EquivResult oracle = equiv_check(pr.TA, pr.TB, tol);
      if (!oracle) {
        out.push_mismatch = kInf;
        out.detail = "images not equivalent at " + fmt_point(z);
        continue;
      }
      const CMatrix pushed = lift(pr.witness, pr.TA.support().basis,
                                  pr.TB.support().basis);
      out.push_mismatch =
          std::max(out.push_mismatch, opnorm(pushed - lift_xt(*oracle.witness)));
    } catch (const InvariantViolation& e) {
      out.push_mismatch = kInf;
      out.detail = std::string("push-forward failed at ") + fmt_point(z) +
                   ": " + e.what();
    }
  }
  if (out.invertible_points == 0) out.max_pointwise_excess = 0.0;
  return out;
}

ProbeReport radial_limit_probe(const Evaluator& F, const CVector& u,
                               Complex beta, std::vector<double> deltas,
                               double tol) {
  if (std::abs(std::abs(beta) - 1.0) > 1e-12) {
    throw Error("radial_limit_probe: beta must be unimodular");
  }
  std::sort(deltas.begin(), deltas.end(), std::greater<>());
  ProbeReport out;
  out.monotone = true;
  for (double d : deltas) {
    if (!(d > 0.0 && d <= 1.0)) {
      throw Error("radial_limit_probe: deltas must lie in (0, 1]");
    }
    const Complex z = (1.0 - d) * beta;
    ProbeRow row;
    row.delta = d;
    row.delta_eff = 1.0 - std::abs(z);
    const CMatrix Fz = F(z);
    if (Fz.cols() != u.size()) {
      throw DimensionError("radial_limit_probe: u has the wrong length");
    }
    row.value = (Fz * u).norm();
    if (!out.rows.empty() && row.value > out.rows.back().value) {
      out.monotone = false;
    }
    if (row.delta_eff > 0.0) {
      out.max_rate = std::max(out.max_rate, row.value / row.delta_eff);
    }
    out.rows.push_back(row);
  }
  out.below_tol = !out.rows.empty() && out.rows.back().value <= tol;
  return out;
}

CaraFunction random_herglotz(Index dim, int terms, std::uint64_t seed,
                             const HerglotzOptions& opts, double tol) {
  if (dim < 1) throw DimensionError("random_herglotz: dim must be positive");
  if (terms < 0) throw Error("random_herglotz: terms must be nonnegative");
  const Index r = opts.support_rank < 0 ? dim : opts.support_rank;
  if (r > dim) throw DimensionError("random_herglotz: support_rank > dim");
  Rng rng(seed);
  const CMatrix Q = random_unitary(dim, rng).leftCols(r);
  const double s = 1.0 / std::sqrt(static_cast<double>(std::max<Index>(r, 1)));
  const CMatrix H0 = 0.5 * random_hermitian(dim, rng);

  const CMatrix G0 = s * random_gaussian(r, r, rng);
  CMatrix core = G0.adjoint() * G0;
  if (opts.strict) core += 0.5 * eye(r);
  const CMatrix P0 = symmetrize(Q * core * Q.adjoint());

  std::vector<HerglotzTerm> list;
  for (int k = 0; k < terms; ++k) {
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    const double radius = opts.bounded ? 1.2 + rng.uniform() : 1.0;
    const CVector g = Q * (s * random_gaussian(r, 1, rng));
    list.push_back({std::polar(radius, theta), symmetrize(g * g.adjoint())});
  }
  return CaraFunction::herglotz(H0, P0, std::move(list), tol);
}

}  // namespace prcone
