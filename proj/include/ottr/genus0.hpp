#pragma once

#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "ottr/bigphase.hpp"
#include "ottr/derivatives.hpp"
#include "ottr/jetpoly.hpp"
#include "ottr/linsolve.hpp"
#include "ottr/report.hpp"
#include "ottr/theory.hpp"

namespace ottr {

// ---------------------------------------------------------------------------
// Closed genus-0 equations. Templated on the coefficient type so that the
// validators (Rational) and the solver (Affine) share one definition.

/// sum t^a_{a+1} dF/dt^a_a - dF/dt^11_0 + 1/2 eta t t.
template <class C>
Residual<C> closed_string(Derivatives<C>& F, const TheoryData& th) {
  const PhaseLayout& lay = F.layout();
  const int A = lay.max_level;
  Series<C> r = -F.unit(th, 0);
  for (int alpha = 1; alpha <= th.rank(); ++alpha) {
    for (int a = 0; a < A; ++a) r += times_variable(F.t(alpha, a), lay.t_index(alpha, a + 1));
  }
  BigSeries q(lay);
  for (int al = 1; al <= th.rank(); ++al) {
    for (int be = 1; be <= th.rank(); ++be) {
      const Rational& e = th.eta()(al - 1, be - 1);
      if (is_zero(e)) continue;
      BigMonomial m;
      m.increment(lay.t_index(al, 0));
      m.increment(lay.t_index(be, 0));
      q += BigSeries::monomial(lay, m, e / 2);
    }
  }
  r += convert<C>(q);
  return {"string", {}, 1, std::move(r)};
}

/// sum t dF/dt - dF/dt^11_1 - 2F.
template <class C>
Residual<C> closed_dilaton(Derivatives<C>& F, const TheoryData& th) {
  const PhaseLayout& lay = F.layout();
  if (lay.max_level < 1) throw DomainError("dilaton equation needs A_max >= 1");
  Series<C> r = -F.unit(th, 1) - F.base() * Rational(2);
  for (int alpha = 1; alpha <= th.rank(); ++alpha) {
    for (int a = 0; a <= lay.max_level; ++a) r += times_variable(F.t(alpha, a), lay.t_index(alpha, a));
  }
  return {"dilaton", {}, 1, std::move(r)};
}

/// d^3F/dt^al_{a+1} dt^be_b dt^ga_c - d^2F/dt^al_a dt^mu_0 eta^{mu nu} d^3F/dt^nu_0 dt^be_b dt^ga_c.
template <class C>
Residual<C> closed_trr0(Derivatives<C>& F, const TheoryData& th, int al, int a, int be, int b, int ga, int c) {
  const PhaseLayout& lay = F.layout();
  int ib = lay.t_index(be, b), ic = lay.t_index(ga, c);
  Series<C> r = F.t(al, a + 1, {ib, ic});
  std::vector<Series<C>> x, y;
  for (int mu = 1; mu <= th.rank(); ++mu) {
    x.push_back(F.t(al, a, {lay.t_index(mu, 0)}));
    y.push_back(F.t(mu, 0, {ib, ic}));
  }
  r -= eta_contract(th, x, y);
  return {"trr0", {al, a, be, b, ga, c}, 3, std::move(r)};
}

/// d^2F/dt^al_{a+1}dt^be_b + d^2F/dt^al_a dt^be_{b+1} - d^2F/dt^al_a dt^mu_0 eta^{mu nu} d^2F/dt^nu_0 dt^be_b.
template <class C>
Residual<C> closed_fourth(Derivatives<C>& F, const TheoryData& th, int al, int a, int be, int b) {
  const PhaseLayout& lay = F.layout();
  Series<C> r = F.t(al, a + 1, {lay.t_index(be, b)}) + F.t(al, a, {lay.t_index(be, b + 1)});
  std::vector<Series<C>> x, y;
  for (int mu = 1; mu <= th.rank(); ++mu) {
    x.push_back(F.t(al, a, {lay.t_index(mu, 0)}));
    y.push_back(F.t(mu, 0, {lay.t_index(be, b)}));
  }
  r -= eta_contract(th, x, y);
  return {"fourth", {al, a, be, b}, 2, std::move(r)};
}

/// Index tuples (al,a,be,b,ga,c) of the closed TRR-0 family on the window,
/// with (be,b) <= (ga,c).
std::vector<std::vector<int>> trr0_indices(const TheoryData& th);
std::vector<std::vector<int>> fourth_indices(const TheoryData& th);

template <class C>
std::vector<Residual<C>> closed_genus0_residuals(Derivatives<C>& F, const TheoryData& th, bool solver_set) {
  std::vector<Residual<C>> out;
  out.push_back(closed_string(F, th));
  if (!solver_set && th.truncation().A_max >= 1) out.push_back(closed_dilaton(F, th));
  for (const auto& i : trr0_indices(th)) out.push_back(closed_trr0(F, th, i[0], i[1], i[2], i[3], i[4], i[5]));
  if (!solver_set) {
    for (const auto& i : fourth_indices(th)) out.push_back(closed_fourth(F, th, i[0], i[1], i[2], i[3]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Open genus-0 equations; F0 is fixed, F0o has coefficient type C.

template <class C>
Residual<C> open_string(Derivatives<C>& Fo, const TheoryData& th) {
  const PhaseLayout& lay = Fo.layout();
  const int A = lay.max_level;
  Series<C> r = -Fo.unit(th, 0);
  for (int beta = 1; beta <= th.rank(); ++beta) {
    for (int b = 0; b < A; ++b) r += times_variable(Fo.t(beta, b), lay.t_index(beta, b + 1));
  }
  for (int a = 0; a < A; ++a) r += times_variable(Fo.s(a), lay.s_index(a + 1));
  r += convert<C>(BigSeries::variable(lay, lay.s_index(0)));
  return {"open-string", {}, 1, std::move(r)};
}

template <class C>
Residual<C> open_dilaton(Derivatives<C>& Fo, const TheoryData& th) {
  const PhaseLayout& lay = Fo.layout();
  if (lay.max_level < 1) throw DomainError("dilaton equation needs A_max >= 1");
  Series<C> r = -Fo.unit(th, 1) - Fo.base();
  for (int beta = 1; beta <= th.rank(); ++beta) {
    for (int b = 0; b <= lay.max_level; ++b) r += times_variable(Fo.t(beta, b), lay.t_index(beta, b));
  }
  for (int a = 0; a <= lay.max_level; ++a) r += times_variable(Fo.s(a), lay.s_index(a));
  return {"open-dilaton", {}, 1, std::move(r)};
}

/// Component along the variable with layout index x of
/// d(dF/dt^al_{p+1}) - d^2F0/dt^al_p dt^mu_0 eta^{mu nu} d(dF/dt^nu_0) - dF/dt^al_p d(dF/ds_0).
template <class C>
Residual<C> open_trr_t(Derivatives<Rational>& F0, Derivatives<C>& Fo, const TheoryData& th, int al, int p, int x) {
  const PhaseLayout& lay = Fo.layout();
  Series<C> r = Fo.t(al, p + 1, {x});
  std::vector<BigSeries> u;
  std::vector<Series<C>> w;
  for (int mu = 1; mu <= th.rank(); ++mu) {
    u.push_back(F0.t(al, p, {lay.t_index(mu, 0)}));
    w.push_back(Fo.t(mu, 0, {x}));
  }
  r -= eta_contract(th, u, w);
  r -= Fo.t(al, p) * Fo.s(0, {x});
  return {"open-trr-t", {al, p, x}, 2, std::move(r)};
}

/// Component along x of d(dF/ds_{p+1}) - dF/ds_p d(dF/ds_0).
template <class C>
Residual<C> open_trr_s(Derivatives<C>& Fo, int p, int x) {
  Series<C> r = Fo.s(p + 1, {x}) - Fo.s(p) * Fo.s(0, {x});
  return {"open-trr-s", {p, x}, 2, std::move(r)};
}

template <class C>
std::vector<Residual<C>> open_genus0_residuals(Derivatives<Rational>& F0, Derivatives<C>& Fo, const TheoryData& th,
                                               bool solver_set) {
  const PhaseLayout& lay = Fo.layout();
  std::vector<Residual<C>> out;
  out.push_back(open_string(Fo, th));
  if (!solver_set && lay.max_level >= 1) out.push_back(open_dilaton(Fo, th));
  for (int al = 1; al <= th.rank(); ++al) {
    for (int p = 0; p < lay.max_level; ++p) {
      for (int x = 0; x < lay.num_vars(); ++x) out.push_back(open_trr_t(F0, Fo, th, al, p, x));
    }
  }
  for (int p = 0; p < lay.max_level; ++p) {
    for (int x = 0; x < lay.num_vars(); ++x) out.push_back(open_trr_s(Fo, p, x));
  }
  return out;
}

// ---------------------------------------------------------------------------

ResidualReport validate_closed_genus0(const BigSeries& F0, const TheoryData& theory, int threads = 1);
ResidualReport validate_open_genus0(const BigSeries& F0, const BigSeries& F0o, const TheoryData& theory,
                                    int threads = 1);

/// d^2 F0o / dt^11_0 ds_0 at t_{>=1} = s_{>=1} = 0, minus 1.
BigSeries open_normalization_residual(const BigSeries& F0o, const TheoryData& theory);

JetPoly omega(const BigSeries& F0, int alpha, int a, int beta, int b, const TheoryData& theory);
JetPoly gamma(const BigSeries& F0o, int alpha, int a, const TheoryData& theory);
JetPoly delta(const BigSeries& F0o, int a, const TheoryData& theory);

struct TwoPointTable {
  std::map<std::tuple<int, int, int, int>, JetPoly> omega;
  std::map<std::pair<int, int>, JetPoly> gamma;
  std::map<int, JetPoly> delta;
};

/// All two-point functions on the window; gamma/delta only when F0o given.
TwoPointTable two_point_table(const BigSeries& F0, const std::optional<BigSeries>& F0o, const TheoryData& theory);

/// eta^{alpha mu} dx Omega_{mu,0;beta,b}, alpha = 1..N.
std::vector<JetPoly> principal_flow(const BigSeries& F0, int beta, int b, const TheoryData& theory);

struct ExtendedFlow {
  std::vector<JetPoly> v;  // right-hand sides for v^1..v^N
  JetPoly phi;
};

/// Flow along t^beta_b.
ExtendedFlow extended_flow_t(const BigSeries& F0, const BigSeries& F0o, int beta, int b, const TheoryData& theory);
/// Flow along s_b (v does not move).
ExtendedFlow extended_flow_s(const BigSeries& F0o, int b, const TheoryData& theory);

/// Two-point recovery and (extended) principal hierarchy along v^T, phi^T.
ResidualReport check_two_point_recovery(const BigSeries& F0, const std::optional<BigSeries>& F0o,
                                        const TheoryData& theory);
ResidualReport check_hierarchy(const BigSeries& F0, const std::optional<BigSeries>& F0o, const TheoryData& theory);

BigSeries solve_closed_order_by_order(const JetPoly& seed, const TheoryData& theory, SolveLog* log = nullptr);
BigSeries solve_open_order_by_order(const BigSeries& F0, const JetPoly& seed, const TheoryData& theory,
                                    SolveLog* log = nullptr);

/// True if the monomial contains a variable of positive level.
bool has_positive_level(const PhaseLayout& layout, const BigMonomial& m);

/// Seeds used by the examples: t0^3/6 (rank 1), t0 s0 + s0^3/6.
JetPoly witten_seed(const TheoryData& theory);
JetPoly open_seed(const TheoryData& theory);

}  // namespace ottr
