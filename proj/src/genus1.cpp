#include "ottr/genus1.hpp"

namespace ottr {

OpenContext::OpenContext(const TheoryData& theory, BigSeries F0, BigSeries F0o)
    : theory_(&theory),
      d0_(std::make_shared<Derivatives<Rational>>(std::move(F0))),
      do_(std::make_shared<Derivatives<Rational>>(std::move(F0o))) {
  if (!(d0_->layout() == theory.layout()) || !(do_->layout() == theory.layout())) {
    throw MetadataMismatch("potentials do not match the theory layout");
  }
}

BigSeries apply_P1(const BigSeries& F, int alpha, int a, const OpenContext& ctx) {
  Derivatives<Rational> D(F);
  return apply_P1(D, alpha, a, ctx);
}

BigSeries apply_P2(const BigSeries& F, int a, const OpenContext& ctx) {
  Derivatives<Rational> D(F);
  return apply_P2(D, a, ctx);
}

BigSeries solve_F1o(const OpenContext& ctx, const JetPoly& Go, SolveLog* log) {
  const TheoryData& th = ctx.theory();
  DegreeSolveSpec spec;
  spec.layout = th.layout();
  spec.given = lift_small(Go, spec.layout);
  spec.is_unknown = [lay = spec.layout](const BigMonomial& m) { return has_positive_level(lay, m); };
  spec.equations = [&ctx](const Series<Affine>& F) {
    Derivatives<Affine> D(F);
    return open_genus1_residuals(D, ctx);
  };
  spec.max_degree = th.truncation().D_t;
  spec.name = "open genus-1 solver";
  return solve_by_degree(spec, log);
}

BigSeries open_log_term(const OpenContext& ctx) {
  const TheoryData& th = ctx.theory();
  BigSeries d = ctx.dopen().unit(th, 0, {th.layout().s_index(0)});
  return series_log(d);
}

BigSeries F1o_formula(const OpenContext& ctx, const JetPoly& Go) {
  const TheoryData& th = ctx.theory();
  BigSeries lg = open_log_term(ctx) * make_rational(1, 2);
  JetEvaluator ev(th, vtop(ctx.F0(), th), phitop(ctx.F0o(), th));
  return lg + ev.eval(Go);
}

ResidualReport validate_open_genus1(const OpenContext& ctx, const BigSeries& F1o, int threads) {
  (void)threads;
  Derivatives<Rational> D(F1o);
  ResidualReport r("open genus 1");
  r.add_all(open_genus1_residuals(D, ctx));
  r.note("open TRR-1 for levels 0.." + std::to_string(ctx.theory().truncation().A_max - 1));
  return r;
}

ResidualReport check_P_identities(const OpenContext& ctx) {
  const TheoryData& th = ctx.theory();
  const PhaseLayout lay = th.layout();
  ResidualReport r("P identities");
  Derivatives<Rational> lg(open_log_term(ctx));
  auto v = vtop(ctx.F0(), th);
  std::vector<std::unique_ptr<Derivatives<Rational>>> vd;
  for (auto& s : v) vd.push_back(std::make_unique<Derivatives<Rational>>(s));
  Derivatives<Rational> pd(phitop(ctx.F0o(), th));
  for (int al = 1; al <= th.rank(); ++al) {
    for (int a = 0; a < lay.max_level; ++a) {
      r.add("P1-log", {al, a}, apply_P1(lg, al, a, ctx) - ctx.dopen().t(al, a, {lay.s_index(0)}));
      for (int be = 1; be <= th.rank(); ++be) r.add("P1-vtop", {al, a, be}, apply_P1(*vd[be - 1], al, a, ctx));
      r.add("P1-phitop", {al, a}, apply_P1(pd, al, a, ctx));
    }
  }
  for (int a = 0; a < lay.max_level; ++a) {
    r.add("P2-log", {a}, apply_P2(lg, a, ctx) - ctx.dopen().s(a, {lay.s_index(0)}));
    for (int be = 1; be <= th.rank(); ++be) r.add("P2-vtop", {a, be}, apply_P2(*vd[be - 1], a, ctx));
    r.add("P2-phitop", {a}, apply_P2(pd, a, ctx));
  }
  return r;
}

std::vector<std::vector<BigSeries>> closed_M(const BigSeries& F0, const TheoryData& th) {
  Derivatives<Rational> D(F0);
  const PhaseLayout lay = th.layout();
  std::vector<std::vector<BigSeries>> m(th.rank());
  for (int al = 1; al <= th.rank(); ++al) {
    for (int be = 1; be <= th.rank(); ++be) {
      m[al - 1].push_back(D.unit(th, 0, {lay.t_index(al, 0), lay.t_index(be, 0)}));
    }
  }
  return m;
}

BigSeries series_det(const std::vector<std::vector<BigSeries>>& m) {
  const std::size_t n = m.size();
  if (n == 0) throw DomainError("empty matrix");
  if (n == 1) return m[0][0];
  std::optional<BigSeries> acc;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<BigSeries>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<BigSeries> row;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != j) row.push_back(m[i][k]);
      }
      minor.push_back(std::move(row));
    }
    BigSeries term = m[0][j] * series_det(minor);
    if (j % 2 == 1) term = -term;
    acc = acc ? *acc + term : term;
  }
  return *acc;
}

BigSeries closed_F1_formula(const BigSeries& F0, const JetPoly& G, const TheoryData& th) {
  auto M = closed_M(F0, th);
  const int n = th.rank();
  std::vector<std::vector<BigSeries>> X(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      BigSeries acc(F0.layout(), M[0][0].prec());
      for (int k = 0; k < n; ++k) {
        const Rational& e = th.eta_inv()(i, k);
        if (!is_zero(e)) acc += M[k][j] * e;
      }
      X[i].push_back(std::move(acc));
    }
  }
  BigSeries det = series_det(X);
  if (is_zero(det.constant_term())) throw DomainError("det(eta^-1 M) has zero constant term; F0 is not a valid potential");
  BigSeries lg = series_log(det * (1 / det.constant_term()));
  JetEvaluator ev(th, vtop(F0, th));
  return lg * make_rational(1, 24) + ev.eval(G);
}

ResidualReport validate_closed_genus1(const BigSeries& F0, const BigSeries& F1, const TheoryData& th) {
  Derivatives<Rational> D0(F0);
  Derivatives<Rational> D1(F1);
  const PhaseLayout lay = th.layout();
  ResidualReport r("closed genus 1");
  for (int al = 1; al <= th.rank(); ++al) {
    for (int a = 0; a < lay.max_level; ++a) {
      BigSeries res = D1.t(al, a + 1);
      std::vector<BigSeries> u, w, third;
      for (int mu = 1; mu <= th.rank(); ++mu) {
        u.push_back(D0.t(al, a, {lay.t_index(mu, 0)}));
        w.push_back(D1.t(mu, 0));
      }
      res -= eta_contract(th, u, w);
      for (int mu = 1; mu <= th.rank(); ++mu) {
        for (int nu = 1; nu <= th.rank(); ++nu) {
          const Rational& e = th.eta_inv()(mu - 1, nu - 1);
          if (is_zero(e)) continue;
          res -= D0.t(al, a, {lay.t_index(mu, 0), lay.t_index(nu, 0)}) * (e / 24);
        }
      }
      r.add("closed-trr1", {al, a}, res);
    }
  }
  r.note("closed TRR-1 for levels 0.." + std::to_string(lay.max_level - 1));
  return r;
}

JetPoly extract_Go(const BigSeries& F1o, const TheoryData& th) { return restrict_small(F1o, jet_truncation(th)); }

BigSeries embed_component(const BigSeries& f, const PhaseLayout& target, int alpha) {
  const PhaseLayout& src = f.layout();
  if (src.rank != 1 || src.max_level != target.max_level) throw DomainError("embed_component expects a rank-1 series");
  std::vector<BigSeries::Term> out;
  for (const auto& t : f.terms()) {
    BigMonomial m;
    for (int idx = 0; idx < src.num_vars(); ++idx) {
      int e = t.mono[idx];
      if (e == 0) continue;
      int level = src.level_of(idx);
      int to = src.is_s(idx) ? target.s_index(level) : target.t_index(alpha, level);
      m.set(to, e);
    }
    out.push_back({t.degree, m, t.coef});
  }
  return BigSeries::from_terms(target, f.prec(), std::move(out));
}

}  // namespace ottr
