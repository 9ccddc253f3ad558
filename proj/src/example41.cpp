#include <algorithm>
#include <cmath>

#include "prcone/cara.hpp"

namespace prcone {

Example41Report example_4_1(const Example41Config& cfg) {
  if (cfg.delta_mins.empty()) throw Error("example_4_1: empty delta_min ladder");
  const double tol = cfg.tol;
  auto psi = std::make_shared<const PsiBlock>(PsiBlock::example_4_1());
  const PsiBlock raw = PsiBlock::example_4_1_unnormalized();
  const DiscGrid grid =
      DiscGrid::uniform(cfg.rings, cfg.angles, cfg.delta_mins.front());
  const std::vector<Complex> pts = grid.points();

  Example41Report rep;
  rep.jcontr_margin = audit_psi(*psi, grid, tol).jcontr_margin;

  const SignaturePair sig = SignaturePair::make(1);
  rep.j2_margin = std::numeric_limits<double>::infinity();
  for (const Complex& z : pts) {
    const CMatrix P = psi->value(z);
    const CMatrix G = symmetrize(P.adjoint() * sig.Jhat * P);
    rep.j2_margin = std::min(rep.j2_margin, eigmin_herm(G - sig.Jhat));
    const double a = std::norm(z);
    CMatrix shown(2, 2);
    shown << 1.0 - a, 1.0 + a, 1.0 + a, 1.0 - a;
    rep.j2_display_residual =
        std::max(rep.j2_display_residual, opnorm(G - 0.5 * shown));
    rep.det_residual = std::max(rep.det_residual, std::abs(psi->det(z) + z));
    rep.det_unnormalized_residual =
        std::max(rep.det_unnormalized_residual, std::abs(raw.det(z) + 4.0 * z));
  }

  auto zero = std::make_shared<const CaraFunction>(
      CaraFunction::constant(CMatrix::Zero(1, 1), tol));
  auto one = std::make_shared<const CaraFunction>(
      CaraFunction::constant(CMatrix::Identity(1, 1), tol));
  const CaraFunction T0 = t_psi_apply(psi, zero, grid, tol);
  const CaraFunction T1 = t_psi_apply(psi, one, grid, tol);

  for (const Complex& z : pts) {
    rep.t1_sup_dev = std::max(rep.t1_sup_dev, std::abs(T1.value(z)(0, 0) - 1.0));
  }

  for (double d : cfg.deltas) {
    const Complex z(1.0 - d, 0.0);
    const double got = T0.value(z)(0, 0).real();
    const double want = (2.0 - d) / d;
    rep.t0_values.emplace_back(d, got);
    rep.t0_max_rel_err =
        std::max(rep.t0_max_rel_err, std::abs(got - want) / std::abs(want));
  }

  rep.re_min = std::numeric_limits<double>::infinity();
  for (const Complex& z : pts) {
    const Complex v = T0.value(z)(0, 0);
    const double want = (1.0 - std::norm(z)) / std::norm(1.0 - z);
    rep.re_min = std::min(rep.re_min, v.real());
    rep.re_max_err = std::max(rep.re_max_err, std::abs(v.real() - want) /
                                                  std::max(1.0, std::abs(v)));
  }

  rep.q_monotone = true;
  rep.min_q_times_delta = std::numeric_limits<double>::infinity();
  for (double dm : cfg.delta_mins) {
    const DiscGrid g = DiscGrid::uniform(cfg.rings, cfg.angles, dm);
    const PrecCReport pc = prec_c_check(T0, T1, g, tol);
    const double sup = pc.comparable ? pc.sup_q
                                     : std::numeric_limits<double>::quiet_NaN();
    if (!rep.q_growth.empty() && !(sup > rep.q_growth.back().second)) {
      rep.q_monotone = false;
    }
    rep.q_growth.emplace_back(dm, sup);
    rep.min_q_times_delta = std::min(rep.min_q_times_delta, sup * dm);
    if (std::isnan(sup)) rep.min_q_times_delta = sup;
  }

  const double finest =
      *std::min_element(cfg.delta_mins.begin(), cfg.delta_mins.end());
  const DiscGrid fine = DiscGrid::uniform(cfg.rings, cfg.angles, finest);
  rep.reduced_zero = reduced_domain_check(*psi, *zero, fine, tol).in_domain;
  rep.reduced_one = reduced_domain_check(*psi, *one, fine, tol).in_domain;
  return rep;
}

}  // namespace prcone
