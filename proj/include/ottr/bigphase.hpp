#pragma once

#include <optional>
#include <vector>

#include "ottr/jetpoly.hpp"
#include "ottr/series.hpp"
#include "ottr/theory.hpp"

namespace ottr {

enum class BigKind : int { t = 0, s = 1 };

/// t^alpha_a or s_a.
struct BigVar {
  BigKind kind = BigKind::t;
  int alpha = 1;  // ignored for s
  int level = 0;

  static BigVar t(int alpha, int level) { return {BigKind::t, alpha, level}; }
  static BigVar s(int level) { return {BigKind::s, 0, level}; }

  bool operator==(const BigVar&) const = default;
};

/// Layout index of a big-phase-space variable; throws DomainError when the
/// level or alpha is outside the layout.
int var_index(const PhaseLayout& layout, const BigVar& x);
BigVar var_at(const PhaseLayout& layout, int index);

template <class C>
Series<C> partial(const Series<C>& f, const BigVar& x) {
  return partial(f, var_index(f.layout(), x));
}

/// sum_alpha A^alpha d/dt^alpha_a.
template <class C>
Series<C> t11_partial(const Series<C>& f, int level, const TheoryData& theory) {
  Series<C> r(f.layout(), f.is_exact() ? kExact : f.prec() - 1);
  for (int alpha = 1; alpha <= theory.rank(); ++alpha) {
    const Rational& a = theory.unit()[alpha - 1];
    if (is_zero(a)) continue;
    r += partial(f, BigVar::t(alpha, level)) * a;
  }
  return r;
}

JetTruncation jet_truncation(const TheoryData& theory);

/// Keeps monomials in level-0 variables only and renames t^g_0 -> v^g,
/// s_0 -> phi. The result is reliable up to F's reliable degree.
JetPoly restrict_small(const BigSeries& f, const JetTruncation& trunc);

/// Level-0 part as a series (t_{>=1} = s_{>=1} = 0).
BigSeries restrict_level0(const BigSeries& f);

/// Inverse of restrict_small for a polynomial in v^g_0, phi_0.
BigSeries lift_small(const JetPoly& p, const PhaseLayout& layout);

/// (v^T)^alpha = eta^{alpha mu} d^2 F0 / dt^mu_0 dt^11_0.
std::vector<BigSeries> vtop(const BigSeries& F0, const TheoryData& theory);
/// phi^T = dF0o / dt^11_0.
BigSeries phitop(const BigSeries& F0o, const TheoryData& theory);

/// log F for F with constant term 1, via the Mercator series.
BigSeries series_log(const BigSeries& f);
/// exp F for F with zero constant term.
BigSeries series_exp(const BigSeries& f);

/// Substitutes v^alpha_i -> (d/dt^11_0)^i v_sol^alpha, phi_i likewise, and
/// f_i -> (d/dt^11_0)^i (f_0 + eps f_1 + ...). Jets and their powers are
/// cached, so one evaluator should be reused for many polynomials sharing
/// the same solutions.
class JetEvaluator {
 public:
  JetEvaluator(const TheoryData& theory, std::vector<BigSeries> sol_v, std::optional<BigSeries> sol_phi = std::nullopt,
               std::vector<BigSeries> sol_f = {});

  /// One series per eps power 0..max_eps. Each slice is reliable up to the
  /// degree the inputs support; a JetPoly known only up to order-0 degree r
  /// caps the result at (r+1)*v0 - 1, v0 the least valuation of the
  /// order-0 solutions.
  std::vector<BigSeries> eval_sliced(const JetPoly& p, int max_eps);
  /// Evaluation of an eps-free polynomial.
  BigSeries eval(const JetPoly& p);

  const PhaseLayout& layout() const { return layout_; }
  const std::vector<BigSeries>& jets(const JetVar& x);

 private:
  const TheoryData* theory_;
  PhaseLayout layout_;
  std::vector<BigSeries> sol_v_;
  std::optional<BigSeries> sol_phi_;
  std::vector<BigSeries> sol_f_;
  int max_eps_ = 0;
  int v0_ = 1;
  // cache key: jet variable index in a fixed-size jet layout
  std::vector<std::vector<BigSeries>> jet_cache_;  // eps-sliced value of each jet variable
  std::vector<std::vector<std::vector<BigSeries>>> power_cache_;

  const std::vector<BigSeries>& power(int var, int exponent, const JetTruncation& tr);
  JetTruncation cache_layout_{};
  bool cache_ready_ = false;
  void prepare(const JetTruncation& tr);
};

/// Convenience wrapper: evaluates an eps-free JetPoly along (v_sol, phi_sol).
BigSeries eval_jetpoly(const JetPoly& p, const std::vector<BigSeries>& sol_v, const std::optional<BigSeries>& sol_phi,
                       const TheoryData& theory);

/// Product of eps-sliced series, truncated at eps^max_eps.
std::vector<BigSeries> eps_mul(const std::vector<BigSeries>& a, const std::vector<BigSeries>& b, int max_eps);

}  // namespace ottr
