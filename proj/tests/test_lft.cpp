#include <doctest.h>

#include "prcone/lft.hpp"
#include "prcone/random.hpp"

using namespace prcone;

namespace {

const Complex I1(0.0, 1.0);

CMatrix eye(Index n) { return CMatrix::Identity(n, n); }

CMatrix block(const CMatrix& a, const CMatrix& b, const CMatrix& c, const CMatrix& d) {
  const Index n = a.rows();
  CMatrix W(2 * n, 2 * n);
  W << a, b, c, d;
  return W;
}

CMatrix scalar_block(Complex a, Complex b, Complex c, Complex d) {
  CMatrix W(2, 2);
  W << a, b, c, d;
  return W;
}

}  // namespace

TEST_CASE("signature matrices") {
  const SignaturePair s = SignaturePair::make(3);
  CHECK(opnorm(s.J * s.J - eye(6)) == 0.0);
  CHECK(opnorm(s.Jhat * s.Jhat - eye(6)) == 0.0);
  CHECK(opnorm(s.Jhat * s.J * s.Jhat + s.J) == 0.0);
  CHECK(opnorm(s.J.topRightCorner(3, 3) + eye(3)) == 0.0);
  CHECK(opnorm(s.J.topLeftCorner(3, 3)) == 0.0);
}

TEST_CASE("validating W") {
  SUBCASE("identity is J-unitary") {
    const JContractiveW W = JContractiveW::validate(eye(4));
    CHECK(W.contractivity_margin() == doctest::Approx(0.0));
    CHECK(W.invertible());
    CHECK(opnorm(W.Wt() - eye(4)) < 1e-15);
  }
  SUBCASE("exponential of J N") {
    CHECK(opnorm(jcontractive_from_generator(CMatrix::Zero(4, 4)) - eye(4)) < 1e-15);
    const JContractiveW W = JContractiveW::validate(jcontractive_from_generator(-eye(4)));
    CHECK(W.contractivity_margin() >= -1e-12);
    Rng rng(3);
    CMatrix N = random_gaussian(6, 6, rng);
    N -= (eigmax_herm(herm_part(N)) + 0.1) * eye(6);
    const JContractiveW W2 = JContractiveW::validate(jcontractive_from_generator(N));
    CHECK(W2.contractivity_margin() >= -1e-10);
    CHECK_THROWS(jcontractive_from_generator(eye(4)));
  }
  SUBCASE("W11 = 2I fails with excess 1") {
    const CMatrix W = block(2.0 * eye(2), CMatrix::Zero(2, 2), CMatrix::Zero(2, 2), eye(2));
    CHECK_THROWS_AS(JContractiveW::validate(W), NotJContractive);
    try {
      JContractiveW::validate(W);
    } catch (const NotJContractive& e) {
      CHECK(e.excess() == doctest::Approx(1.0));
    }
  }
  SUBCASE("shape") {
    CHECK_THROWS_AS(JContractiveW::validate(eye(3)), DimensionError);
  }
  SUBCASE("block criterion matches") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const JContractiveW W = sample_jcontractive(3, true, s);
      CHECK(W.block_residual() <= 1e-12 * std::max(1.0, std::pow(opnorm(W.W()), 2)));
      CHECK(W.block_margin() == doctest::Approx(W.contractivity_margin()).epsilon(1e-8));
      CHECK(W.wt_residual() <= 1e-10);
      CHECK(W.wt_margin() >= -1e-9 * std::max(1.0, std::pow(opnorm(W.Wt()), 2)));
      CHECK(cond(W.W22()) < 1e9);
    }
  }
}

TEST_CASE("domain of T_W") {
  Rng rng(4);
  const PRMatrix A = sample_pr(3, 3, 5);
  const JContractiveW I = JContractiveW::validate(eye(6));
  CHECK(in_domain(I, A));
  CHECK(in_domain(I, make_pr(I1 * random_hermitian(3, rng))));
  CHECK(opnorm(apply(I, A).value() - A.value()) < 1e-14);

  // W = [[1, 0], [i, 1]] is J-unitary and W21 a + W22 vanishes at a = i.
  const JContractiveW W = JContractiveW::validate(scalar_block(1.0, 0.0, I1, 1.0));
  CHECK(W.contractivity_margin() >= -1e-15);
  const PRMatrix a = make_pr(scalar_block(I1, 0, 0, 0).topLeftCorner(1, 1));
  CHECK_FALSE(in_domain(W, a));
  CHECK_THROWS_AS(apply(W, a), OutOfDomain);

  for (std::uint64_t s = 0; s < 20; ++s) {
    CHECK(in_domain(sample_jcontractive(4, true, s), sample_pr(4, 4, s + 100)));
  }
}

TEST_CASE("scalar LFT arithmetic") {
  const PRMatrix zero = make_pr(CMatrix::Zero(1, 1));
  // Example-4.1 block at 1/2, with and without the factor 1/2.
  for (double c : {1.0, 0.5}) {
    const JContractiveW W = JContractiveW::validate(c * scalar_block(0.5, 1.5, 1.5, 0.5));
    const PRMatrix T = apply(W, zero);
    CHECK(T.value()(0, 0).real() == doctest::Approx(3.0));
    CHECK(std::abs(T.value()(0, 0).imag()) < 1e-15);
  }
}

TEST_CASE("representations and intertwining") {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const Index n = 1 + static_cast<Index>(s % 6);
    const JContractiveW W = sample_jcontractive(n, true, split_seed(s, 1, 0));
    const PRMatrix A = sample_pr(n, n, split_seed(s, 1, 1));
    const LftEval ev = lft_evaluate(W, A.value());
    REQUIRE(ev.alt_value.has_value());
    CHECK(ev.agreement <= 1e-9);
    const double scale = std::max(1.0, opnorm(W.W())) * (1.0 + A.norm()) *
                         std::max(1.0, opnorm(ev.value));
    CHECK(ev.right_intertwine <= 1e-12 * scale);
    CHECK(ev.left_intertwine <= 1e-12 * scale * std::max(1.0, opnorm(W.Wt())));
    const PRMatrix T = apply(W, A);
    // First bound: Re T >= D^{-*} Re(A) D^{-1}.
    const CMatrix D = W.W21() * A.value() + W.W22();
    const CMatrix Di = D.inverse();
    CHECK(eigmin_herm(T.re_part() - Di.adjoint() * A.re_part() * Di) >= -1e-10 * (1.0 + T.norm()));
  }
}

TEST_CASE("value inequalities and the difference identity") {
  SUBCASE("trivial cases") {
    const PRMatrix A = sample_pr(3, 2, 7);
    const UseIneqReport same = useineq_check(sample_jcontractive(3, true, 8), A, A);
    CHECK(same.identity_residual < 1e-14);
    const UseIneqReport id = useineq_check(JContractiveW::validate(eye(6)), A, A);
    CHECK(std::abs(id.margin_right_A) < 1e-14);
    CHECK(std::abs(id.margin_left_A) < 1e-14);
  }
  SUBCASE("random triples") {
    for (std::uint64_t s = 0; s < 30; ++s) {
      const JContractiveW W = sample_jcontractive(6, true, split_seed(s, 2, 0));
      const PRMatrix A = sample_pr(6, 6, split_seed(s, 2, 1));
      const PRMatrix B = sample_pr(6, 6, split_seed(s, 2, 2));
      const UseIneqReport r = useineq_check(W, A, B);
      CHECK(r.ok(1e-8));
      CHECK(r.min_margin() >= -1e-10 * std::max(1.0, r.scale));
    }
  }
}

TEST_CASE("contraction witnesses") {
  SUBCASE("identity W") {
    const PRMatrix A = sample_pr(4, 2, 9);
    const ContractionWitnesses c = contraction_witnesses(JContractiveW::validate(eye(8)), A);
    CHECK(opnorm(c.M - eye(2)) < 1e-12);
    CHECK(c.norm_M <= 1.0 + 1e-12);
  }
  SUBCASE("zero real part") {
    Rng rng(10);
    const PRMatrix A = make_pr(I1 * random_hermitian(3, rng));
    const ContractionWitnesses c =
        contraction_witnesses(sample_jcontractive(3, true, 11), A);
    CHECK(c.M.size() == 0);
    CHECK(c.norm_M == 0.0);
  }
  SUBCASE("random") {
    for (std::uint64_t s = 0; s < 30; ++s) {
      const Index n = 1 + static_cast<Index>(s % 5);
      const PRMatrix A = sample_pr(n, 1 + static_cast<Index>(s % n), split_seed(s, 3, 0));
      const JContractiveW W = sample_jcontractive(n, true, split_seed(s, 3, 1));
      if (!in_domain(W, A)) continue;
      const ContractionWitnesses c = contraction_witnesses(W, A);
      CHECK(c.norm_M <= 1.0 + 1e-10);
      CHECK(c.norm_Mt <= 1.0 + 1e-10);
      CHECK(c.residual_M <= 1e-9);
      CHECK(c.residual_Mt <= 1e-9);
    }
  }
}

TEST_CASE("witness push-forwards") {
  SUBCASE("trivial inputs") {
    const PRMatrix B = sample_pr(3, 3, 12);
    const JContractiveW W = sample_jcontractive(3, true, 13);
    CHECK(opnorm(prec_push(W, B, B, CMatrix::Zero(3, 3)).witness) < 1e-13);
    CHECK(opnorm(equiv_push(W, B, B, CMatrix::Zero(3, 3)).witness) < 1e-13);
    const PrecPair p = sample_prec_pair(B, 0.5, 14);
    const JContractiveW I = JContractiveW::validate(eye(6));
    const PrecWitness w = certify_prec(p.A, B);
    CHECK(opnorm(prec_push(I, p.A, B, w.X).witness - w.X) < 1e-12);
    const EquivWitness e = *equiv_check(p.A, B).witness;
    const PushResult q = equiv_push(I, p.A, B, e.Xt);
    CHECK(q.output_norm <= q.input_norm + 1e-12);
  }
  SUBCASE("pre-order push matches the oracle") {
    for (std::uint64_t s = 0; s < 40; ++s) {
      const Index n = 5;
      const PRMatrix B = sample_pr(n, n, split_seed(s, 4, 0));
      const PrecPair p = sample_prec_pair(B, 0.8, split_seed(s, 4, 1));
      const JContractiveW W = sample_jcontractive(n, true, split_seed(s, 4, 2));
      const PrecWitness w = certify_prec(p.A, B);
      const PushResult r = prec_push(W, p.A, B, w.X);
      CHECK(r.residual <= 1e-8 * (r.TA.norm() + r.TB.norm()));
      const PrecResult oracle = prec_check(r.TA, r.TB);
      REQUIRE(oracle);
      CHECK(opnorm(oracle.witness->X - r.witness) <= 1e-7);
    }
  }
  SUBCASE("equivalence push contracts the witness") {
    for (std::uint64_t s = 0; s < 40; ++s) {
      const Index n = 1 + static_cast<Index>(s % 6);
      const PRMatrix A = sample_pr(n, n, split_seed(s, 5, 0));
      const PRMatrix B = sample_pr(n, n, split_seed(s, 5, 1));
      const JContractiveW W = sample_jcontractive(n, true, split_seed(s, 5, 2));
      const EquivWitness e = *equiv_check(A, B).witness;
      const PushResult r = equiv_push(W, A, B, e.Xt);
      CHECK(r.output_norm <= r.input_norm + 1e-10);
      const EquivResult oracle = equiv_check(r.TA, r.TB);
      REQUIRE(oracle);
      const CMatrix pushed = lift(r.witness, r.TA.support().basis, r.TB.support().basis);
      const CMatrix direct = lift(oracle.witness->Xt, oracle.witness->basis_A, oracle.witness->basis_B);
      CHECK(opnorm(pushed - direct) <= 1e-7);
    }
  }
}

TEST_CASE("near-singular W") {
  const JContractiveW W = sample_jcontractive(3, false, 20);
  CHECK_FALSE(W.invertible());
  CHECK_THROWS_AS(W.Wt(), SingularMatrix);
  const PRMatrix A = sample_pr(3, 3, 21);
  const PRMatrix B = sample_pr(3, 3, 22);
  const EquivWitness e = *equiv_check(A, B).witness;
  CHECK_THROWS_AS(equiv_push(W, A, B, e.Xt), SingularMatrix);
  CHECK_THROWS_AS(useineq_check(W, A, B), SingularMatrix);
  CHECK(in_domain(W, A));
  const LftEval ev = lft_evaluate(W, A.value());
  CHECK_FALSE(ev.alt_value.has_value());
  CHECK(apply(W, A).pr_margin() >= -1e-9 * apply(W, A).norm());
}

TEST_CASE("sampling is reproducible") {
  const JContractiveW a = sample_jcontractive(4, true, 99);
  const JContractiveW b = sample_jcontractive(4, true, 99);
  CHECK((a.W() - b.W()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.W() - sample_jcontractive(4, true, 98).W()).cwiseAbs().maxCoeff() > 0.0);
}
