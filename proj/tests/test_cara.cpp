#include <doctest.h>

#include <cmath>

#include "prcone/cara.hpp"
#include "prcone/random.hpp"

using namespace prcone;

namespace {

const Complex I1(0.0, 1.0);

CMatrix scalar(Complex z) { return CMatrix::Constant(1, 1, z); }

CMatrix eye(Index n) { return CMatrix::Identity(n, n); }

// (1 + z)/(1 - z) as a one-term Herglotz sum.
CaraFunction mobius() {
  return CaraFunction::herglotz(scalar(0.0), scalar(0.0), {{1.0, scalar(1.0)}});
}

// 1 - z as a polynomial model.
CaraFunction one_minus(const DiscGrid& g) {
  return CaraFunction::rational({scalar(1.0), scalar(-1.0)}, {scalar(1.0)}, g);
}

std::shared_ptr<const CaraFunction> share(CaraFunction F) {
  return std::make_shared<const CaraFunction>(std::move(F));
}

}  // namespace

TEST_CASE("disc grids") {
  const DiscGrid g = DiscGrid::uniform(4, 8, 1e-3);
  CHECK(g.radii.size() == 4);
  CHECK(g.radii.back() == 1.0 - 1e-3);
  CHECK(g.delta_min() == doctest::Approx(1e-3));
  CHECK(g.point(3, 0).imag() == 0.0);
  CHECK(g.points().size() == 32);
  CHECK(std::abs(g.points()[8] - g.point(1, 0)) == 0.0);
  CHECK_THROWS(DiscGrid::make({0.5, 0.4}, 4));
  CHECK_THROWS(DiscGrid::make({0.5, 1.0}, 4));
  CHECK_THROWS(DiscGrid::make({0.5}, 0));
}

TEST_CASE("evaluating models") {
  const DiscGrid g = DiscGrid::uniform(6, 12, 1e-2);
  const CaraFunction C = CaraFunction::constant(eye(2));
  CHECK(opnorm(C.value(0.3 + 0.2 * I1) - eye(2)) == 0.0);

  const CaraFunction F = mobius();
  CHECK(std::abs(F.value(0.0)(0, 0) - 1.0) < 1e-15);
  for (double d : {0.5, 1e-1, 1e-2, 1e-3}) {
    const Complex v = F.value(1.0 - d)(0, 0);
    CHECK(std::abs(v - (2.0 - d) / d) <= 1e-12 * (2.0 - d) / d);
  }
  CHECK_THROWS_AS(F.value(1.0), OutOfDomain);
  CHECK_THROWS_AS(F.value(0.8 + 0.8 * I1), OutOfDomain);

  // Rational models are rejected when they leave the positive-real class.
  CHECK_THROWS_AS(CaraFunction::rational({scalar(-1.0)}, {scalar(1.0)}, g), NotPositiveReal);
  CHECK_THROWS(CaraFunction::herglotz(scalar(0.0), scalar(-1.0), {}));
  CHECK_THROWS(CaraFunction::herglotz(scalar(0.0), scalar(0.0), {{0.5, scalar(1.0)}}));
  CHECK_THROWS(CaraFunction::herglotz(scalar(I1), scalar(0.0), {}));
}

TEST_CASE("pointwise equivalence audit") {
  const PointwiseAudit c = pointwise_equiv_audit(CaraFunction::constant(eye(2)), {0.0, 0.5, 0.5 * I1});
  CHECK(c.ok());
  CHECK(c.max_xt_norm == 0.0);

  const PointwiseAudit m = pointwise_equiv_audit(mobius(), {0.0, 0.5});
  CHECK(m.ok());
  CHECK(m.pairs == 1);
  CHECK(m.max_xt_norm == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-12));

  Rng rng(3);
  const CaraFunction H = random_herglotz(3, 4, 4);
  std::vector<Complex> pts;
  for (int i = 0; i < 6; ++i) pts.push_back(std::polar(0.95 * rng.uniform(), 6.28 * rng.uniform()));
  const PointwiseAudit h = pointwise_equiv_audit(H, pts, 1e-8);
  CHECK(h.ok());
  CHECK(h.pairs == 15);
}

TEST_CASE("grid pre-order") {
  const DiscGrid g = DiscGrid::uniform(8, 16, 1e-2);
  const CaraFunction F = random_herglotz(2, 3, 5);
  const PrecCReport same = prec_c_check(F, F, g);
  CHECK(same.comparable);
  CHECK(same.sup_q == 0.0);

  // G = I: Q = F - I pointwise.
  const PrecCReport toI = prec_c_check(F, CaraFunction::constant(eye(2)), g);
  CHECK(toI.comparable);
  double sup = 0.0;
  for (const Complex& z : g.points()) sup = std::max(sup, opnorm(F.value(z) - eye(2)));
  CHECK(toI.sup_q == doctest::Approx(sup).epsilon(1e-12));

  // F = 0 against the Mobius function: comparable pointwise, unbounded.
  const CaraFunction Z = CaraFunction::constant(scalar(0.0));
  double last = 0.0;
  for (double dm : {1e-2, 1e-3, 1e-4}) {
    const PrecCReport r = prec_c_check(Z, mobius(), DiscGrid::uniform(8, 16, dm));
    CHECK(r.comparable);
    CHECK(r.sup_q > last);
    CHECK(r.sup_q * dm >= 0.5);
    last = r.sup_q;
  }

  // A purely imaginary constant is comparable only with itself.
  Rng rng(6);
  const CMatrix iH = I1 * random_hermitian(2, rng);
  const CaraFunction Fi = CaraFunction::constant(iH);
  CHECK(prec_c_check(Fi, Fi, g).comparable);
  CHECK_FALSE(prec_c_check(CaraFunction::constant(iH + 0.1 * I1 * eye(2)), Fi, g).comparable);
  CHECK_FALSE(prec_c_check(F, Fi, g).comparable);
}

TEST_CASE("grid equivalence") {
  const DiscGrid g2 = DiscGrid::uniform(8, 16, 1e-2);
  const DiscGrid g3 = DiscGrid::uniform(8, 16, 1e-3);
  const CaraFunction F = random_herglotz(3, 3, 7);
  CHECK(equiv_c_check(F, F, g2).sup_qt < 1e-14);

  for (std::uint64_t s = 0; s < 5; ++s) {
    const CaraFunction A = random_herglotz(3, 3, split_seed(s, 8, 0));
    const CaraFunction B = random_herglotz(3, 3, split_seed(s, 8, 1));
    const EquivCReport r2 = equiv_c_check(A, B, g2);
    const EquivCReport r3 = equiv_c_check(A, B, g3);
    CHECK(r2.equivalent());
    CHECK(r3.equivalent());
    CHECK(r2.continuity_ok());
    CHECK(r3.sup_qt <= 2.0 * r2.sup_qt);
  }

  // 1 and (1+z)/(1-z): pointwise equivalent, witness blows up at z = 1.
  // On the real axis |Qt(1 - d)| = 2(1 - d)/sqrt(d(2 - d)).
  const CaraFunction one = CaraFunction::constant(scalar(1.0));
  double last = 0.0;
  for (double dm : {1e-2, 1e-3, 1e-4}) {
    const EquivCReport r = equiv_c_check(one, mobius(), DiscGrid::uniform(8, 16, dm));
    CHECK(r.equivalent());
    CHECK(r.sup_qt >= (1.0 - 1e-12) * 2.0 * (1.0 - dm) / std::sqrt(dm * (2.0 - dm)));
    CHECK(r.sup_qt > 3.0 * last);
    last = r.sup_qt;
  }

  // Different supports.
  HerglotzOptions o;
  o.support_rank = 1;
  CHECK_FALSE(equiv_c_check(random_herglotz(2, 2, 9, o), random_herglotz(2, 2, 10), g2).equivalent());
}

TEST_CASE("strictness estimate") {
  const DiscGrid g = DiscGrid::uniform(8, 16, 1e-2);
  CHECK(is_strict(CaraFunction::constant(eye(2)), g).rho == doctest::Approx(1.0));
  CHECK(is_strict(one_minus(g), g).rho == doctest::Approx(g.delta_min()).epsilon(1e-12));
  CHECK(is_strict(CaraFunction::constant(scalar(I1)), g).rho == 0.0);
}

TEST_CASE("random Herglotz models") {
  Rng rng(11);
  const DiscGrid g = DiscGrid::uniform(6, 12, 1e-2);
  for (std::uint64_t s = 0; s < 30; ++s) {
    HerglotzOptions o;
    o.strict = s % 2 == 0;
    o.bounded = s % 3 != 0;
    const Index d = 1 + static_cast<Index>(s % 4);
    o.support_rank = 1 + static_cast<Index>(s % d);
    const CaraFunction F = random_herglotz(d, static_cast<int>(s % 6), s, o);
    for (int i = 0; i < 20; ++i) {
      const Complex z = std::polar(0.999 * std::sqrt(rng.uniform()), 6.283185307 * rng.uniform());
      CHECK(eigmin_herm(herm_part(F.value(z))) >= -1e-12);
    }
    for (const Complex& z : g.points()) CHECK(F.eval(z).rank() == o.support_rank);
    if (o.strict && o.support_rank == d) CHECK(is_strict(F, g).rho > 0.0);
  }
}

TEST_CASE("Psi blocks") {
  const DiscGrid g = DiscGrid::uniform(8, 16, 1e-2);
  const PsiBlock psi = PsiBlock::example_4_1();
  for (const Complex& z : g.points()) {
    CHECK(std::abs(psi.det(z) + z) < 1e-15);
    CHECK(std::abs(PsiBlock::example_4_1_unnormalized().det(z) + 4.0 * z) < 1e-14);
  }
  CHECK(psi.singular_at(0.0));
  CHECK_FALSE(psi.singular_at(0.5));
  CHECK_THROWS_AS(psi.tilde(0.0), SingularMatrix);

  const PsiAudit a = audit_psi(psi, g);
  CHECK(a.ok(1e-12));
  CHECK(a.det_not_identically_zero);
  CHECK(a.singular_points.size() == 1);

  // Closed form of the J-contractivity defect: (1 - |z|^2)/2 [[1, -1], [-1, 1]].
  const SignaturePair s = SignaturePair::make(1);
  const Complex z(0.3, -0.4);
  const CMatrix P = psi.value(z);
  CMatrix expect(2, 2);
  expect << 1, -1, -1, 1;
  expect *= 0.5 * (1.0 - std::norm(z));
  CHECK(opnorm(s.J - P.adjoint() * s.J * P - expect) < 1e-15);

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const PsiBlock r = PsiBlock::sample(2, seed);
    CHECK(audit_psi(r, g).ok(1e-9));
    CHECK(r.singular_at(0.0));
  }

  // A block that is not J-contractive.
  CMatrix W = eye(2);
  W(0, 0) = 2.0;
  CHECK_FALSE(audit_psi(PsiBlock::constant(W), g).ok(1e-9));
}

TEST_CASE("T_Psi on the worked example") {
  const DiscGrid g = DiscGrid::uniform(8, 16, 1e-2);
  auto psi = std::make_shared<const PsiBlock>(PsiBlock::example_4_1());
  const CaraFunction T0 = t_psi_apply(psi, share(CaraFunction::constant(scalar(0.0))), g);
  const CaraFunction T1 = t_psi_apply(psi, share(CaraFunction::constant(scalar(1.0))), g);
  for (const Complex& z : g.points()) {
    CHECK(std::abs(T0.value(z)(0, 0) - (1.0 + z) / (1.0 - z)) <= 1e-12 * std::abs((1.0 + z) / (1.0 - z)));
    CHECK(std::abs(T1.value(z)(0, 0) - 1.0) <= 1e-12);
  }
  CHECK(std::abs(T0.value(0.5)(0, 0) - 3.0) < 1e-14);
  CHECK(std::abs(T0.value(1.0 - 1e-3)(0, 0) - 1999.0) < 1e-9);

  // The literal ordering sends F = 0 to the constant 1 instead.
  const CaraFunction L0 =
      t_psi_apply(psi, share(CaraFunction::constant(scalar(0.0))), g, kDefaultTol, true);
  CHECK(std::abs(L0.value(0.5)(0, 0) - 1.0) < 1e-14);

  // Identity blocks leave F unchanged.
  auto id = std::make_shared<const PsiBlock>(PsiBlock::constant(eye(4)));
  auto F = share(random_herglotz(2, 2, 12));
  const CaraFunction TF = t_psi_apply(id, F, g);
  CHECK(opnorm(TF.value(0.2 + 0.1 * I1) - F->value(0.2 + 0.1 * I1)) < 1e-13);
}

TEST_CASE("reduced domain") {
  const DiscGrid g = DiscGrid::uniform(8, 16, 1e-3);
  const PsiBlock psi = PsiBlock::example_4_1();
  CHECK(reduced_domain_check(PsiBlock::constant(eye(2)), CaraFunction::constant(scalar(2.0)), g).in_domain);

  const ReducedDomainReport zero = reduced_domain_check(psi, CaraFunction::constant(scalar(0.0)), g);
  double hand = 0.0;
  for (const Complex& z : g.points()) hand = std::max(hand, 2.0 * std::abs(z) / std::abs(1.0 - z));
  CHECK(zero.sup_inv == doctest::Approx(hand).epsilon(1e-10));
  CHECK_FALSE(zero.in_domain);

  const ReducedDomainReport one = reduced_domain_check(psi, CaraFunction::constant(scalar(1.0)), g);
  CHECK(one.in_domain);
  CHECK(one.sup_inv == doctest::Approx(1.0 - 1e-3).epsilon(1e-10));

  CHECK_FALSE(reduced_domain_check(PsiBlock::constant(eye(2)), mobius(), g).in_domain);
}

TEST_CASE("preservation under T_Psi") {
  const DiscGrid g = DiscGrid::uniform(8, 16, 1e-2);
  auto psi = std::make_shared<const PsiBlock>(PsiBlock::example_4_1());
  auto F = share(random_herglotz(1, 3, 13));
  auto G = share(random_herglotz(1, 3, 14));
  const PreservationReport same = preservation_audit(psi, F, F, g, AuditMode::equivalence);
  CHECK(same.preserved(1e-9));
  const PreservationReport r = preservation_audit(psi, F, G, g, AuditMode::equivalence);
  CHECK(r.preserved(1e-9));
  CHECK(r.sup_image <= r.sup_source + 1e-9);
  CHECK(r.skipped_points == 0);

  auto psi2 = std::make_shared<const PsiBlock>(PsiBlock::sample(2, 15));
  const PreservationReport r2 = preservation_audit(
      psi2, share(random_herglotz(2, 3, 16)), share(random_herglotz(2, 3, 17)), g,
      AuditMode::equivalence);
  CHECK(r2.preserved(1e-9));

  // Example data outside the reduced domain: the image witness diverges.
  auto zero = share(CaraFunction::constant(scalar(0.0)));
  auto one = share(CaraFunction::constant(scalar(1.0)));
  for (double dm : {1e-2, 1e-3, 1e-4}) {
    const PreservationReport p =
        preservation_audit(psi, zero, one, DiscGrid::uniform(8, 16, dm), AuditMode::preorder);
    CHECK(p.source_ok);
    CHECK(p.sup_source == doctest::Approx(1.0));
    CHECK(p.sup_image * dm >= 0.5);
  }
}

TEST_CASE("radial probe") {
  const DiscGrid g = DiscGrid::uniform(8, 16, 1e-2);
  CVector u(1);
  u << 1.0;
  const std::vector<double> ladder{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  const ProbeReport zero = radial_limit_probe(CaraFunction::constant(scalar(0.0)).evaluator(), u, 1.0, ladder);
  for (const ProbeRow& row : zero.rows) CHECK(row.value == 0.0);

  const ProbeReport lin = radial_limit_probe(one_minus(g).evaluator(), u, 1.0, ladder);
  CHECK(lin.monotone);
  for (const ProbeRow& row : lin.rows) {
    CHECK(row.value == doctest::Approx(row.delta_eff).epsilon(1e-15));
    CHECK(row.value == doctest::Approx(row.delta).epsilon(1e-9));
  }
  CHECK(lin.max_rate == doctest::Approx(1.0));
  CHECK_THROWS(radial_limit_probe(one_minus(g).evaluator(), u, 0.5, ladder));
}

TEST_CASE("worked example report") {
  const Example41Report r = example_4_1();
  CHECK(r.all(kDefaultTol));
  CHECK(r.det_residual < 1e-14);
  CHECK(r.det_unnormalized_residual < 1e-13);
  REQUIRE(r.t0_values.size() == 4);
  CHECK(r.t0_values[0].second == doctest::Approx(3.0));
  CHECK(r.t0_values[3].second == doctest::Approx(1999.0));
  CHECK(r.reduced_one);
  CHECK_FALSE(r.reduced_zero);
  // The Jhat-form display does not hold for this block.
  CHECK(r.j2_display_residual > 0.1);
}
