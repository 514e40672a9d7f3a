#include "ottr/bigphase.hpp"

#include <algorithm>

namespace ottr {

int var_index(const PhaseLayout& layout, const BigVar& x) {
  if (x.level < 0 || x.level > layout.max_level) {
    throw DomainError("level " + std::to_string(x.level) + " outside window A_max=" + std::to_string(layout.max_level));
  }
  if (x.kind == BigKind::s) return layout.s_index(x.level);
  if (x.alpha < 1 || x.alpha > layout.rank) throw DomainError("alpha outside 1..N");
  return layout.t_index(x.alpha, x.level);
}

BigVar var_at(const PhaseLayout& layout, int index) {
  if (layout.is_s(index)) return BigVar::s(layout.level_of(index));
  return BigVar::t(layout.alpha_of(index), layout.level_of(index));
}

JetTruncation jet_truncation(const TheoryData& theory) {
  const auto& t = theory.truncation();
  return JetTruncation{theory.rank(), t.D_v, t.J, t.E};
}

JetPoly restrict_small(const BigSeries& f, const JetTruncation& trunc) {
  const auto& lay = f.layout();
  if (lay.rank != trunc.rank) throw MetadataMismatch("rank of series and jet truncation differ");
  std::vector<JetPoly::Term> out;
  for (const auto& t : f.terms()) {
    JetMonomial m;
    bool small = true;
    for (int idx = 0; idx < lay.num_vars() && small; ++idx) {
      int e = t.mono[idx];
      if (e == 0) continue;
      if (lay.level_of(idx) != 0) {
        small = false;
        break;
      }
      JetVar x = lay.is_s(idx) ? JetVar::phi(0) : JetVar::v(lay.alpha_of(idx), 0);
      m.set(trunc.index(x), e);
    }
    if (small) out.push_back({0, m, t.coef});
  }
  return JetPoly::from_terms(trunc, f.prec(), std::move(out));
}

BigSeries restrict_level0(const BigSeries& f) {
  const auto& lay = f.layout();
  std::vector<BigSeries::Term> out;
  for (const auto& t : f.terms()) {
    bool small = true;
    for (int idx = 0; idx < lay.num_vars(); ++idx) {
      if (t.mono[idx] != 0 && lay.level_of(idx) != 0) {
        small = false;
        break;
      }
    }
    if (small) out.push_back(t);
  }
  return BigSeries::from_terms(lay, f.prec(), std::move(out));
}

BigSeries lift_small(const JetPoly& p, const PhaseLayout& layout) {
  const auto& tr = p.truncation();
  if (tr.rank != layout.rank) throw MetadataMismatch("rank of jet polynomial and layout differ");
  std::vector<BigSeries::Term> out;
  for (const auto& t : p.terms()) {
    if (t.eps != 0) throw DomainError("lift_small: eps-dependent polynomial");
    BigMonomial m;
    for (int idx = 0; idx < tr.num_vars(); ++idx) {
      int e = t.mono[idx];
      if (e == 0) continue;
      JetVar x = tr.var_at(idx);
      if (x.order != 0 || x.kind == JetKind::f) throw DomainError("lift_small: polynomial has jet variables");
      int target = x.kind == JetKind::phi ? layout.s_index(0) : layout.t_index(x.alpha, 0);
      m.set(target, e);
    }
    out.push_back({m.total_degree(), m, t.coef});
  }
  return BigSeries::from_terms(layout, p.reliable(), std::move(out));
}

std::vector<BigSeries> vtop(const BigSeries& F0, const TheoryData& theory) {
  const int n = theory.rank();
  std::vector<BigSeries> d2;
  BigSeries unit_derivative = t11_partial(F0, 0, theory);
  for (int mu = 1; mu <= n; ++mu) d2.push_back(partial(unit_derivative, BigVar::t(mu, 0)));
  std::vector<BigSeries> out;
  for (int alpha = 1; alpha <= n; ++alpha) {
    BigSeries acc(F0.layout(), d2[0].prec());
    for (int mu = 1; mu <= n; ++mu) {
      const Rational& e = theory.eta_inv()(alpha - 1, mu - 1);
      if (!is_zero(e)) acc += d2[mu - 1] * e;
    }
    out.push_back(std::move(acc));
  }
  return out;
}

BigSeries phitop(const BigSeries& F0o, const TheoryData& theory) { return t11_partial(F0o, 0, theory); }

namespace {

int effective_prec(const BigSeries& x) {
  if (x.is_exact() && !x.is_zero()) throw DomainError("series_log/exp of an exact non-polynomial result; truncate first");
  return x.prec();
}

}  // namespace

BigSeries series_log(const BigSeries& f) {
  if (f.constant_term() != 1) throw DomainError("series_log: constant term must be 1");
  BigSeries x = f - BigSeries::constant(f.layout(), Rational(1));
  BigSeries result(f.layout(), x.prec());
  if (x.is_zero()) return result;
  int prec = effective_prec(x);
  BigSeries pw = x;
  for (int k = 1; k <= prec && !pw.is_zero(); ++k) {
    Rational c = make_rational(k % 2 == 1 ? 1 : -1, k);
    result += pw * c;
    pw = pw * x;
  }
  return result;
}

BigSeries series_exp(const BigSeries& f) {
  if (!is_zero(f.constant_term())) throw DomainError("series_exp: constant term must be 0");
  BigSeries result = BigSeries::constant(f.layout(), Rational(1)).with_prec(f.prec());
  if (f.is_zero()) return result;
  int prec = effective_prec(f);
  BigSeries pw = f;
  for (int k = 1; k <= prec && !pw.is_zero(); ++k) {
    result += pw * (1 / factorial(k));
    pw = pw * f;
  }
  return result;
}

std::vector<BigSeries> eps_mul(const std::vector<BigSeries>& a, const std::vector<BigSeries>& b, int max_eps) {
  std::vector<BigSeries> out;
  if (a.empty() || b.empty()) return out;
  int top = std::min<int>(max_eps, static_cast<int>(a.size() + b.size()) - 2);
  for (int k = 0; k <= top; ++k) {
    std::optional<BigSeries> acc;
    for (int i = 0; i <= k; ++i) {
      int j = k - i;
      if (i >= static_cast<int>(a.size()) || j >= static_cast<int>(b.size())) continue;
      BigSeries p = a[i] * b[j];
      acc = acc ? *acc + p : p;
    }
    out.push_back(acc ? std::move(*acc) : BigSeries(a[0].layout()));
  }
  return out;
}

JetEvaluator::JetEvaluator(const TheoryData& theory, std::vector<BigSeries> sol_v, std::optional<BigSeries> sol_phi,
                           std::vector<BigSeries> sol_f)
    : theory_(&theory),
      layout_(theory.layout()),
      sol_v_(std::move(sol_v)),
      sol_phi_(std::move(sol_phi)),
      sol_f_(std::move(sol_f)) {
  if (static_cast<int>(sol_v_.size()) != theory.rank()) throw DomainError("need one v solution per component");
  v0_ = kExact;
  for (const auto& s : sol_v_) {
    if (!(s.layout() == layout_)) throw MetadataMismatch("solution layout differs from theory");
    v0_ = std::min(v0_, s.valuation());
  }
  if (sol_phi_) v0_ = std::min(v0_, sol_phi_->valuation());
}

void JetEvaluator::prepare(const JetTruncation& tr) {
  if (cache_ready_ && tr.rank == cache_layout_.rank && tr.J == cache_layout_.J) return;
  cache_layout_ = tr;
  cache_ready_ = true;
  jet_cache_.assign(tr.num_vars(), {});
  power_cache_.assign(tr.num_vars(), {});
}

const std::vector<BigSeries>& JetEvaluator::jets(const JetVar& x) {
  const JetTruncation& tr = cache_layout_;
  int idx = tr.index(x);
  auto& slot = jet_cache_[idx];
  if (!slot.empty()) return slot;
  if (x.order > 0) {
    const auto& lower = jets(JetVar{x.kind, x.alpha, x.order - 1});
    std::vector<BigSeries> d;
    for (const auto& s : lower) d.push_back(t11_partial(s, 0, *theory_));
    jet_cache_[idx] = std::move(d);
    return jet_cache_[idx];
  }
  switch (x.kind) {
    case JetKind::v:
      slot = {sol_v_[x.alpha - 1]};
      break;
    case JetKind::phi:
      if (!sol_phi_) throw DomainError("polynomial depends on phi but no phi solution was given");
      slot = {*sol_phi_};
      break;
    case JetKind::f:
      if (sol_f_.empty()) throw DomainError("polynomial depends on f-jets but no f solution was given");
      slot = sol_f_;
      break;
  }
  return slot;
}

const std::vector<BigSeries>& JetEvaluator::power(int var, int exponent, const JetTruncation& tr) {
  auto& pw = power_cache_[var];
  if (pw.empty()) pw.push_back(jets(tr.var_at(var)));
  while (static_cast<int>(pw.size()) < exponent) {
    pw.push_back(eps_mul(pw.back(), pw.front(), max_eps_));
  }
  return pw[exponent - 1];
}

std::vector<BigSeries> JetEvaluator::eval_sliced(const JetPoly& p, int max_eps) {
  const JetTruncation& tr = p.truncation();
  if (tr.rank != layout_.rank) throw MetadataMismatch("rank of polynomial and solutions differ");
  prepare(tr);
  if (max_eps != max_eps_) {
    max_eps_ = max_eps;
    for (auto& pc : power_cache_) pc.clear();
  }
  std::vector<BigSeries> out(max_eps + 1, BigSeries(layout_));
  for (const auto& t : p.terms()) {
    if (t.eps > max_eps) continue;
    std::vector<BigSeries> value{BigSeries::constant(layout_, t.coef)};
    for (int idx = 0; idx < tr.num_vars(); ++idx) {
      int e = t.mono[idx];
      if (e == 0) continue;
      value = eps_mul(value, power(idx, e, tr), max_eps - t.eps);
    }
    for (std::size_t k = 0; k < value.size(); ++k) out[t.eps + k] += value[k];
  }
  if (!p.is_exact()) {
    long cap = (long(p.reliable()) + 1) * v0_ - 1;
    for (auto& s : out) s = s.with_prec(clamp_prec(cap));
  }
  return out;
}

BigSeries JetEvaluator::eval(const JetPoly& p) {
  if (p.max_eps() > 0) throw DomainError("eval: polynomial depends on eps; use eval_sliced");
  return eval_sliced(p, 0)[0];
}

BigSeries eval_jetpoly(const JetPoly& p, const std::vector<BigSeries>& sol_v, const std::optional<BigSeries>& sol_phi,
                       const TheoryData& theory) {
  JetEvaluator ev(theory, sol_v, sol_phi);
  return ev.eval(p);
}

}  // namespace ottr
