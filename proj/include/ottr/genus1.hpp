#pragma once

#include <memory>
#include <vector>

#include "ottr/derivatives.hpp"
#include "ottr/genus0.hpp"
#include "ottr/jetpoly.hpp"
#include "ottr/report.hpp"

namespace ottr {

/// Genus-0 data the genus-1 operators are built from.
class OpenContext {
 public:
  OpenContext(const TheoryData& theory, BigSeries F0, BigSeries F0o);

  const TheoryData& theory() const { return *theory_; }
  const BigSeries& F0() const { return d0_->base(); }
  const BigSeries& F0o() const { return do_->base(); }
  Derivatives<Rational>& d0() const { return *d0_; }
  Derivatives<Rational>& dopen() const { return *do_; }

 private:
  const TheoryData* theory_;
  std::shared_ptr<Derivatives<Rational>> d0_;
  std::shared_ptr<Derivatives<Rational>> do_;
};

/// d/dt^al_{a+1} - d^2F0/dt^al_a dt^mu_0 eta^{mu nu} d/dt^nu_0 - dF0o/dt^al_a d/ds_0, applied to F.
template <class C>
Series<C> apply_P1(Derivatives<C>& F, int alpha, int a, const OpenContext& ctx) {
  const TheoryData& th = ctx.theory();
  const PhaseLayout& lay = F.layout();
  if (a + 1 > lay.max_level || a < 0) throw DomainError("P1 needs a+1 <= A_max");
  Series<C> r = F.t(alpha, a + 1);
  std::vector<BigSeries> u;
  std::vector<Series<C>> w;
  for (int mu = 1; mu <= th.rank(); ++mu) {
    u.push_back(ctx.d0().t(alpha, a, {lay.t_index(mu, 0)}));
    w.push_back(F.t(mu, 0));
  }
  r -= eta_contract(th, u, w);
  r -= ctx.dopen().t(alpha, a) * F.s(0);
  return r;
}

/// d/ds_{a+1} - dF0o/ds_a d/ds_0, applied to F.
template <class C>
Series<C> apply_P2(Derivatives<C>& F, int a, const OpenContext& ctx) {
  const PhaseLayout& lay = F.layout();
  if (a + 1 > lay.max_level || a < 0) throw DomainError("P2 needs a+1 <= A_max");
  return F.s(a + 1) - ctx.dopen().s(a) * F.s(0);
}

BigSeries apply_P1(const BigSeries& F, int alpha, int a, const OpenContext& ctx);
BigSeries apply_P2(const BigSeries& F, int a, const OpenContext& ctx);

/// Open genus-1 TRR residuals P1 F - 1/2 d^2F0o/dt ds_0 and P2 F - 1/2 d^2F0o/ds ds_0.
template <class C>
std::vector<Residual<C>> open_genus1_residuals(Derivatives<C>& F, const OpenContext& ctx) {
  const TheoryData& th = ctx.theory();
  const int A = th.truncation().A_max;
  std::vector<Residual<C>> out;
  for (int al = 1; al <= th.rank(); ++al) {
    for (int a = 0; a < A; ++a) {
      Series<C> r = apply_P1(F, al, a, ctx) - convert<C>(ctx.dopen().t(al, a, {F.layout().s_index(0)}) * make_rational(1, 2));
      out.push_back({"open-trr1-t", {al, a}, 1, std::move(r)});
    }
  }
  for (int a = 0; a < A; ++a) {
    Series<C> r = apply_P2(F, a, ctx) - convert<C>(ctx.dopen().s(a, {F.layout().s_index(0)}) * make_rational(1, 2));
    out.push_back({"open-trr1-s", {a}, 1, std::move(r)});
  }
  return out;
}

/// Solves the open genus-1 TRRs degree by degree from F1o|_{small} = Go.
BigSeries solve_F1o(const OpenContext& ctx, const JetPoly& Go, SolveLog* log = nullptr);

/// log d^2F0o/dt^11_0 ds_0.
BigSeries open_log_term(const OpenContext& ctx);

/// 1/2 log d^2F0o/dt^11_0 ds_0 + Go(v^T, phi^T).
BigSeries F1o_formula(const OpenContext& ctx, const JetPoly& Go);

ResidualReport validate_open_genus1(const OpenContext& ctx, const BigSeries& F1o, int threads = 1);

/// The identities P1 log(...) = d^2F0o/dt ds_0, P2 log(...) = d^2F0o/ds ds_0
/// and P-annihilation of v^T, phi^T.
ResidualReport check_P_identities(const OpenContext& ctx);

/// M_{ab} = d^3F0/dt^11_0 dt^a_0 dt^b_0.
std::vector<std::vector<BigSeries>> closed_M(const BigSeries& F0, const TheoryData& theory);

/// Cofactor-expansion determinant of a small matrix of series.
BigSeries series_det(const std::vector<std::vector<BigSeries>>& m);

/// 1/24 log det(eta^{-1} M) + G(v^T).
BigSeries closed_F1_formula(const BigSeries& F0, const JetPoly& G, const TheoryData& theory);

ResidualReport validate_closed_genus1(const BigSeries& F0, const BigSeries& F1, const TheoryData& theory);

/// Small-phase-space restriction of F1o.
JetPoly extract_Go(const BigSeries& F1o, const TheoryData& theory);

/// Re-indexes a rank-1 series into component `alpha` of a rank-N layout
/// (t^1_a -> t^alpha_a; s is kept only when keep_s).
BigSeries embed_component(const BigSeries& f, const PhaseLayout& target, int alpha);

}  // namespace ottr
