#pragma once

// Matrix-valued Caratheodory functions on the unit disc and the function
// level relations ≺_C and ∼_C, decided on finite polar grids.
//
// Every "bounded on the disc" verdict here is a grid estimate. Divergence is
// shown by growth across a ladder of grids approaching the boundary.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "prcone/lft.hpp"
#include "prcone/pr_relations.hpp"

namespace prcone {

/// Polar grid: rings at the given radii, `angles` equispaced points per ring
/// starting at angle 0 so the positive real axis is always sampled.
struct DiscGrid {
  std::vector<double> radii;
  int angles = 0;

  /// Validates strictly increasing radii in (0, 1) and angles >= 1.
  static DiscGrid make(std::vector<double> radii, int angles);
  /// `rings` radii evenly spaced on (0, 1 - delta_min], outermost exactly
  /// 1 - delta_min.
  static DiscGrid uniform(int rings, int angles, double delta_min);

  double delta_min() const;
  std::size_t size() const { return radii.size() * angles; }
  Complex point(std::size_t ring, int k) const;
  /// Ring-major order.
  std::vector<Complex> points() const;
};

using Evaluator = std::function<CMatrix(Complex)>;

class PsiBlock;
class CaraFunction;

struct HerglotzTerm {
  Complex beta;  // |beta| >= 1
  CMatrix P;     // PSD
};

/// i H0 + P0 + sum_k (beta_k + z)/(beta_k - z) P_k.
struct HerglotzModel {
  CMatrix H0;
  CMatrix P0;
  std::vector<HerglotzTerm> terms;
};

/// N(z) D(z)^{-1} with ascending polynomial coefficients.
struct RationalModel {
  std::vector<CMatrix> num;
  std::vector<CMatrix> den;
};

struct ConstantModel {
  CMatrix value;
};

/// Pointwise T_Psi[inner]. The default ordering is
/// (Psi11 F + Psi12)(Psi21 F + Psi22)^{-1}; literal = true evaluates
/// (Psi11 + Psi12 F)(Psi22 + Psi21 F)^{-1} instead.
struct LftModel {
  std::shared_ptr<const PsiBlock> psi;
  std::shared_ptr<const CaraFunction> inner;
  bool literal = false;
};

class CaraFunction {
 public:
  using Model =
      std::variant<HerglotzModel, RationalModel, ConstantModel, LftModel>;

  /// Checks H0 Hermitian, P0 and every P_k PSD, |beta_k| >= 1.
  static CaraFunction herglotz(CMatrix H0, CMatrix P0,
                               std::vector<HerglotzTerm> terms,
                               double tol = kDefaultTol);
  /// Rejects the model (NotPositiveReal / OutOfDomain) if any grid point
  /// fails.
  static CaraFunction rational(std::vector<CMatrix> num,
                               std::vector<CMatrix> den, const DiscGrid& grid,
                               double tol = kDefaultTol);
  static CaraFunction constant(const CMatrix& A, double tol = kDefaultTol);
  static CaraFunction lft(std::shared_ptr<const PsiBlock> psi,
                          std::shared_ptr<const CaraFunction> inner,
                          bool literal, double tol = kDefaultTol);

  Index dim() const { return dim_; }
  const Model& model() const { return model_; }
  const char* kind() const;
  /// Support of Re F, fixed at construction from a reference point.
  const SupportBasis& support() const { return support_; }

  /// Raw value. Throws OutOfDomain for |z| >= 1 or a singular LFT
  /// denominator.
  CMatrix value(Complex z) const;
  /// Value validated as positive real.
  PRMatrix eval(Complex z, double tol = kDefaultTol) const;
  Evaluator evaluator() const;

 private:
  CaraFunction() = default;
  void init_support(double tol);

  Index dim_ = 0;
  Model model_;
  SupportBasis support_;
  double tol_ = kDefaultTol;
};

/// Psi(z) = sum_k C_k z^k with 2n x 2n coefficients.
class PsiBlock {
 public:
  static PsiBlock polynomial(std::vector<CMatrix> coeffs, std::string label);
  /// 1/2 [[1 - z, 1 + z], [1 + z, 1 - z]] (tensored with I_n): J-contractive,
  /// det = -z for n = 1.
  static PsiBlock example_4_1(Index n = 1);
  /// [[1 - z, 1 + z], [1 + z, 1 - z]] without the factor 1/2.
  static PsiBlock example_4_1_unnormalized();
  static PsiBlock constant(const CMatrix& W);
  /// W1 Psi_U(z) W2 with Psi_U = 1/2 [[I - zU, I + zU], [I + zU, I - zU]],
  /// U Haar unitary and W1, W2 sampled J-contractive. Singular at z = 0.
  static PsiBlock sample(Index n, std::uint64_t seed);

  Index n() const { return n_; }
  const std::vector<CMatrix>& coeffs() const { return coeffs_; }
  const std::string& label() const { return label_; }
  CMatrix value(Complex z) const;
  Complex det(Complex z) const;
  /// Jhat Psi(z)^{-1} Jhat; throws SingularMatrix.
  CMatrix tilde(Complex z, double tol = kDefaultTol) const;
  /// True when Psi(z) is singular: |det| <= tol or cond > 1/tol.
  bool singular_at(Complex z, double tol = kDefaultTol) const;

 private:
  PsiBlock() = default;

  Index n_ = 0;
  std::vector<CMatrix> coeffs_;
  std::string label_;
};

struct PsiAudit {
  double jcontr_margin = 0.0;  // min over points of eigmin(J - Psi^*JPsi)
  Complex worst_point;
  double max_abs_det = 0.0;
  bool det_not_identically_zero = false;
  std::vector<Complex> singular_points;

  bool ok(double tol) const { return jcontr_margin >= -tol; }
};

/// Audits the grid points plus the centre z = 0.
PsiAudit audit_psi(const PsiBlock& psi, const DiscGrid& grid,
                   double tol = kDefaultTol);

struct PointwiseAudit {
  std::size_t pairs = 0;
  std::size_t failures = 0;
  double max_xt_norm = 0.0;
  double max_residual = 0.0;
  std::string first_failure;

  bool ok() const { return failures == 0; }
};

/// equiv_check(F(z_i), F(z_j)) for every pair i < j.
PointwiseAudit pointwise_equiv_audit(const CaraFunction& F,
                                     const std::vector<Complex>& pts,
                                     double tol = kDefaultTol);

struct PointSample {
  Complex z;
  double norm = 0.0;      // ||Q(z)|| or ||Qt(z)||
  double aux_norm = 0.0;  // ||Rt(z)|| in the equivalence check
  double residual = 0.0;
  bool ok = false;
};

struct PrecCReport {
  bool comparable = false;
  double sup_q = 0.0;  // grid estimate
  Complex worst_point;
  double delta_min = 0.0;
  std::vector<PointSample> samples;
  std::string detail;
};

/// Pointwise prec_check(F(z), G(z)) over the grid; sup ||Q|| is an estimate.
PrecCReport prec_c_check(const CaraFunction& F, const CaraFunction& G,
                         const DiscGrid& grid, double tol = kDefaultTol);
PrecCReport prec_c_check(const Evaluator& F, const Evaluator& G,
                         const DiscGrid& grid, double tol = kDefaultTol);

struct EquivCReport {
  bool pointwise_ok = false;
  bool supports_equal = false;
  double sup_qt = 0.0;
  double sup_rt = 0.0;
  Complex worst_point;
  double delta_min = 0.0;
  /// Largest ratio of the ring-neighbour increment of the ambient Qt to
  /// 8 (sup_qt + 1) |dz| / (1 - r). Values <= 1 pass the heuristic.
  double continuity_ratio = 0.0;
  std::vector<PointSample> samples;
  std::string detail;

  bool equivalent() const { return pointwise_ok && supports_equal; }
  bool continuity_ok() const { return continuity_ratio <= 1.0; }
};

EquivCReport equiv_c_check(const CaraFunction& F, const CaraFunction& G,
                           const DiscGrid& grid, double tol = kDefaultTol);
EquivCReport equiv_c_check(const Evaluator& F, const Evaluator& G,
                           const DiscGrid& grid, double tol = kDefaultTol);

struct StrictReport {
  double rho = 0.0;  // min over grid of eigmin(Re F)
  Complex worst_point;
};

StrictReport is_strict(const CaraFunction& F, const DiscGrid& grid);

/// Builds T_Psi[F] after checking the denominator at every grid point.
/// Throws OutOfDomain carrying the offending point.
CaraFunction t_psi_apply(std::shared_ptr<const PsiBlock> psi,
                         std::shared_ptr<const CaraFunction> F,
                         const DiscGrid& grid, double tol = kDefaultTol,
                         bool literal = false);

struct ReducedDomainReport {
  bool in_domain = false;
  bool caratheodory = false;
  double sup_f = 0.0;
  double sup_inv = 0.0;  // sup of ||(Psit11 + F Psit21)^{-1}|| off singular points
  Complex worst_point;
  double cap = 0.0;
  std::size_t skipped = 0;  // singular points of Psi
};

ReducedDomainReport reduced_domain_check(const PsiBlock& psi,
                                         const CaraFunction& F,
                                         const DiscGrid& grid,
                                         double tol = kDefaultTol,
                                         double cap = 1e3);

enum class AuditMode { equivalence, preorder };

struct PreservationReport {
  AuditMode mode = AuditMode::equivalence;
  bool source_ok = false;
  bool image_ok = false;
  double sup_source = 0.0;
  double sup_image = 0.0;
  /// Max over invertible points of ||Qt_Psi(z)|| - ||Qt(z)||.
  double max_pointwise_excess = 0.0;
  /// Max over invertible points of the gap between the pushed witness and
  /// the witness recomputed from the images.
  double push_mismatch = 0.0;
  std::size_t invertible_points = 0;
  std::size_t skipped_points = 0;
  std::string detail;

  bool preserved(double tol) const;
};

PreservationReport preservation_audit(std::shared_ptr<const PsiBlock> psi,
                                      std::shared_ptr<const CaraFunction> F,
                                      std::shared_ptr<const CaraFunction> G,
                                      const DiscGrid& grid, AuditMode mode,
                                      double tol = kDefaultTol);

struct ProbeRow {
  double delta = 0.0;
  double delta_eff = 0.0;  // 1 - |z| as evaluated
  double value = 0.0;      // ||F(z) u||
};

struct ProbeReport {
  std::vector<ProbeRow> rows;
  bool monotone = false;
  bool below_tol = false;  // last value <= tol
  /// max value / delta_eff over the ladder.
  double max_rate = 0.0;
};

/// Evaluates ||F((1 - delta) beta) u|| along the ladder; deltas are sorted
/// into decreasing order.
ProbeReport radial_limit_probe(const Evaluator& F, const CVector& u,
                               Complex beta, std::vector<double> deltas,
                               double tol = kDefaultTol);

struct HerglotzOptions {
  bool strict = true;   // P0 >= rho I on the support
  bool bounded = true;  // |beta_k| > 1
  /// Rank of the common support of all coefficients; -1 means full.
  Index support_rank = -1;
};

CaraFunction random_herglotz(Index dim, int terms, std::uint64_t seed,
                             const HerglotzOptions& opts = {},
                             double tol = kDefaultTol);

struct Example41Report {
  double jcontr_margin = 0.0;       // (a)
  double j2_margin = 0.0;           // eigmin(Psi^* Jhat Psi - Jhat) on grid
  double j2_display_residual = 0.0; // vs 1/2 [[1-|z|^2, 1+|z|^2], ...]
  double det_residual = 0.0;        // |det Psi(z) + z|
  double det_unnormalized_residual = 0.0;  // |det + 4z| without the 1/2
  double t1_sup_dev = 0.0;          // (b)
  double t0_max_rel_err = 0.0;      // (c)
  std::vector<std::pair<double, double>> t0_values;  // (delta, T[0](1-delta))
  double re_max_err = 0.0;          // (d)
  double re_min = 0.0;
  std::vector<std::pair<double, double>> q_growth;   // (e) (delta_min, sup Q)
  double min_q_times_delta = 0.0;
  bool q_monotone = false;
  bool reduced_zero = false;  // F = 0 in the reduced domain
  bool reduced_one = false;   // G = 1 in the reduced domain

  bool clause_a(double tol) const { return jcontr_margin >= -tol; }
  bool clause_b() const { return t1_sup_dev <= 1e-12; }
  bool clause_c() const { return t0_max_rel_err <= 1e-12; }
  bool clause_d() const { return re_max_err <= 1e-12 && re_min >= -1e-12; }
  bool clause_e() const { return q_monotone && min_q_times_delta >= 0.5; }
  bool all(double tol) const {
    return clause_a(tol) && clause_b() && clause_c() && clause_d() &&
           clause_e();
  }
};

struct Example41Config {
  std::vector<double> deltas{0.5, 1e-1, 1e-2, 1e-3};
  std::vector<double> delta_mins{1e-2, 1e-3, 1e-4};
  int rings = 32;
  int angles = 32;
  double tol = kDefaultTol;
};

Example41Report example_4_1(const Example41Config& cfg = {});

}  // namespace prcone
