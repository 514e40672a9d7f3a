#include <gtest/gtest.h>

#include <random>

#include "common.hpp"
#include "ottr/bigphase.hpp"

using namespace ottr;
using ottr::testing::mono;
using ottr::testing::random_jetpoly;
using ottr::testing::random_rational;
using ottr::testing::rank_one;

namespace {

BigSeries var(const PhaseLayout& lay, const BigVar& x) { return BigSeries::variable(lay, var_index(lay, x)); }

BigSeries random_series(std::mt19937& rng, const PhaseLayout& lay, int terms, int max_deg) {
  std::uniform_int_distribution<int> pick(0, lay.num_vars() - 1), deg(1, max_deg);
  BigSeries s(lay);
  for (int k = 0; k < terms; ++k) {
    BigMonomial m;
    int d = deg(rng);
    for (int j = 0; j < d; ++j) m.increment(pick(rng));
    s += BigSeries::monomial(lay, m, random_rational(rng));
  }
  return s;
}

}  // namespace

TEST(Partial, Examples) {
  PhaseLayout lay{1, 2};
  BigSeries t0 = var(lay, BigVar::t(1, 0));
  BigSeries s0 = var(lay, BigVar::s(0)), s1 = var(lay, BigVar::s(1));
  EXPECT_EQ(partial(t0 * t0 * make_rational(1, 2), BigVar::t(1, 0)), t0);
  EXPECT_TRUE(partial(t0, BigVar::s(0)).is_zero());
  EXPECT_EQ(partial(s1 * s0, BigVar::s(1)), s0);
}

TEST(Partial, OutsideWindow) {
  PhaseLayout lay{1, 2};
  BigSeries t0 = var(lay, BigVar::t(1, 0));
  EXPECT_THROW(partial(t0, BigVar::t(1, 3)), DomainError);
  EXPECT_THROW(partial(t0, BigVar::t(2, 0)), DomainError);
}

TEST(Partial, Commute) {
  std::mt19937 rng(31);
  PhaseLayout lay{2, 2};
  for (int trial = 0; trial < 20; ++trial) {
    BigSeries f = random_series(rng, lay, 8, 5).with_prec(5);
    for (int x = 0; x < lay.num_vars(); ++x) {
      for (int y = 0; y < x; ++y) EXPECT_EQ(partial(partial(f, x), y), partial(partial(f, y), x));
    }
  }
}

TEST(T11Partial, RankTwoLinearity) {
  TheoryData th(2, RationalMatrix::identity(2), {1, 1}, Truncation{4, 1, 4, 3, 2});
  PhaseLayout lay = th.layout();
  BigSeries f = var(lay, BigVar::t(1, 0)) + var(lay, BigVar::t(2, 0)) * Rational(2);
  EXPECT_EQ(t11_partial(f, 0, th), BigSeries::constant(lay, Rational(3)));
}

TEST(RestrictSmall, Examples) {
  const auto& d = rank_one();
  PhaseLayout lay = d.th.layout();
  BigSeries t0 = var(lay, BigVar::t(1, 0)), t1 = var(lay, BigVar::t(1, 1)), s0 = var(lay, BigVar::s(0));
  EXPECT_EQ(restrict_small(t0 * t0 * t0 * make_rational(1, 6), d.tr), d.v() * d.v() * d.v() * make_rational(1, 6));
  EXPECT_TRUE(restrict_small(t1 * s0, d.tr).is_zero());
  EXPECT_EQ(restrict_small(s0 * t0, d.tr), d.phi() * d.v());
}

TEST(RestrictSmall, LiftIsInverse) {
  const auto& d = rank_one();
  std::mt19937 rng(32);
  for (int trial = 0; trial < 10; ++trial) {
    JetPoly p = random_jetpoly(rng, d.tr, {JetVar::v(1), JetVar::phi()}, 5, 4);
    EXPECT_EQ(restrict_small(lift_small(p, d.th.layout()), d.tr), p);
  }
}

TEST(Vtop, RestrictionAndLowDegree) {
  const auto& d = rank_one();
  PhaseLayout lay = d.th.layout();
  BigSeries vt = vtop(d.F0, d.th)[0];
  BigSeries t0 = var(lay, BigVar::t(1, 0));
  EXPECT_TRUE(equal_up_to_prec(restrict_level0(vt), t0));
  EXPECT_EQ(vt.coefficient(mono({{lay.t_index(1, 0), 1}, {lay.t_index(1, 1), 1}})), 1);
}

TEST(Vtop, LinearInF0) {
  const auto& d = rank_one();
  std::mt19937 rng(33);
  BigSeries G = random_series(rng, d.th.layout(), 10, 6).with_prec(d.F0.prec());
  auto a = vtop(d.F0 + G, d.th)[0];
  auto b = vtop(d.F0, d.th)[0] + vtop(G, d.th)[0];
  EXPECT_TRUE(equal_up_to_prec(a, b));
}

TEST(Phitop, Restriction) {
  const auto& d = rank_one();
  PhaseLayout lay = d.th.layout();
  BigSeries pt = phitop(d.F0o, d.th);
  EXPECT_TRUE(equal_up_to_prec(restrict_level0(pt), var(lay, BigVar::s(0))));
  EXPECT_TRUE(phitop(BigSeries(lay), d.th).is_zero());
}

TEST(SeriesLog, Examples) {
  PhaseLayout lay{1, 1};
  BigSeries one = BigSeries::constant(lay, Rational(1)).with_prec(6);
  EXPECT_TRUE(series_log(one).is_zero());
  BigSeries t0 = var(lay, BigVar::t(1, 0));
  BigSeries lg = series_log((one + t0).with_prec(6));
  for (int k = 1; k <= 6; ++k) {
    EXPECT_EQ(lg.coefficient(mono({{0, k}})), make_rational(k % 2 ? 1 : -1, k)) << k;
  }
  EXPECT_THROW(series_log((t0 + one * Rational(2)).with_prec(6)), DomainError);
}

TEST(SeriesLog, ExpRoundTrip) {
  std::mt19937 rng(34);
  PhaseLayout lay{1, 2};
  for (int trial = 0; trial < 10; ++trial) {
    BigSeries f = (BigSeries::constant(lay, Rational(1)) + random_series(rng, lay, 6, 3)).with_prec(6);
    EXPECT_TRUE(equal_up_to_prec(series_exp(series_log(f)), f));
    BigSeries g = random_series(rng, lay, 6, 3).with_prec(6);
    EXPECT_TRUE(equal_up_to_prec(series_log(series_exp(g)), g));
  }
}

TEST(Eval, Examples) {
  const auto& d = rank_one();
  auto vt = vtop(d.F0, d.th);
  EXPECT_EQ(eval_jetpoly(JetPoly::constant(d.tr, 1), vt, std::nullopt, d.th),
            BigSeries::constant(d.th.layout(), Rational(1)));
  EXPECT_TRUE(equal_up_to_prec(eval_jetpoly(d.v(), vt, std::nullopt, d.th), vt[0]));
  EXPECT_THROW(eval_jetpoly(d.phi(), vt, std::nullopt, d.th), DomainError);
}

TEST(Eval, RingMorphism) {
  const auto& d = rank_one();
  auto vt = vtop(d.F0, d.th);
  BigSeries pt = phitop(d.F0o, d.th);
  JetEvaluator ev(d.th, vt, pt);
  std::mt19937 rng(35);
  std::vector<JetVar> vars{JetVar::v(1, 0), JetVar::v(1, 1), JetVar::v(1, 2), JetVar::phi(0), JetVar::phi(1)};
  for (int trial = 0; trial < 10; ++trial) {
    JetPoly p = random_jetpoly(rng, d.tr, vars, 3, 3);
    JetPoly q = random_jetpoly(rng, d.tr, vars, 3, 3);
    EXPECT_TRUE(equal_up_to_prec(ev.eval(p * q), ev.eval(p) * ev.eval(q)));
    EXPECT_TRUE(equal_up_to_prec(ev.eval(p + q), ev.eval(p) + ev.eval(q)));
  }
}

TEST(Eval, ShiftRealization) {
  // evaluating dx p equals differentiating the evaluation along t^11_0
  const auto& d = rank_one();
  auto vt = vtop(d.F0, d.th);
  BigSeries pt = phitop(d.F0o, d.th);
  JetEvaluator ev(d.th, vt, pt);
  std::mt19937 rng(36);
  std::vector<JetVar> vars{JetVar::v(1, 0), JetVar::v(1, 1), JetVar::phi(0), JetVar::phi(1), JetVar::phi(2)};
  for (int trial = 0; trial < 10; ++trial) {
    JetPoly p = random_jetpoly(rng, d.tr, vars, 4, 3);
    EXPECT_TRUE(equal_up_to_prec(ev.eval(dx(p)), t11_partial(ev.eval(p), 0, d.th)));
  }
}

TEST(Eval, EpsSlicesMultiply) {
  const auto& d = rank_one();
  auto vt = vtop(d.F0, d.th);
  JetEvaluator ev(d.th, vt);
  JetPoly e = JetPoly::constant(d.tr, 1, 1);
  JetPoly p = d.v() + e * d.v(1);
  auto sl = ev.eval_sliced(p * p, 2);
  auto one = ev.eval_sliced(p, 2);
  auto prod = eps_mul(one, one, 2);
  for (int j = 0; j <= 2; ++j) EXPECT_TRUE(equal_up_to_prec(sl[j], prod[j])) << j;
}
