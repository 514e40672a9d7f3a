#pragma once

#include <ostream>
#include <random>
#include <vector>

#include "ottr/genus0.hpp"
#include "ottr/genus1.hpp"

namespace ottr {

// gtest failure messages
inline void PrintTo(const JetPoly& p, std::ostream* os) {
  *os << to_string(p) << " (reliable " << p.reliable() << ")";
}

}  // namespace ottr

namespace ottr::testing {

/// Rank-1 Witten data at the default truncation, computed once per binary.
struct RankOne {
  TheoryData th = TheoryData::rank_one();
  BigSeries F0;
  BigSeries F0o;
  JetTruncation tr;

  RankOne() {
    F0 = solve_closed_order_by_order(witten_seed(th), th);
    F0o = solve_open_order_by_order(F0, open_seed(th), th);
    tr = jet_truncation(th);
  }
  OpenContext context() const { return OpenContext(th, F0, F0o); }
  JetPoly v(int order = 0) const { return JetPoly::variable(tr, JetVar::v(1, order)); }
  JetPoly phi(int order = 0) const { return JetPoly::variable(tr, JetVar::phi(order)); }
  JetPoly zero() const { return JetPoly(tr); }
};

inline const RankOne& rank_one() {
  static const RankOne data;
  return data;
}

inline BigMonomial mono(std::initializer_list<std::pair<int, int>> index_exp) {
  BigMonomial m;
  for (auto [i, e] : index_exp) m.set(i, e);
  return m;
}

inline Rational random_rational(std::mt19937& rng, int span = 5) {
  std::uniform_int_distribution<int> num(-span, span), den(1, span);
  return make_rational(num(rng), den(rng));
}

/// Random eps-free polynomial in the given jet variables, order-0 degree <= max_deg.
inline JetPoly random_jetpoly(std::mt19937& rng, const JetTruncation& tr, const std::vector<JetVar>& vars,
                              int max_terms, int max_deg) {
  std::uniform_int_distribution<int> pick(0, static_cast<int>(vars.size()) - 1), deg(0, max_deg);
  JetPoly p(tr);
  std::uniform_int_distribution<int> count(1, max_terms);
  int n = count(rng);
  for (int k = 0; k < n; ++k) {
    JetPoly t = JetPoly::constant(tr, random_rational(rng));
    int d = deg(rng);
    for (int j = 0; j < d; ++j) t = t * JetPoly::variable(tr, vars[pick(rng)]);
    p += t;
  }
  return p;
}

/// Random nonzero coefficient on every v^i phi^j with i + j <= max_deg.
inline JetPoly random_small_poly(std::mt19937& rng, const JetTruncation& tr, int max_deg) {
  JetPoly p(tr);
  JetPoly v = JetPoly::variable(tr, JetVar::v(1)), phi = JetPoly::variable(tr, JetVar::phi());
  JetPoly vi = JetPoly::constant(tr, 1);
  for (int i = 0; i <= max_deg; ++i, vi = vi * v) {
    JetPoly m = vi;
    for (int j = 0; i + j <= max_deg; ++j, m = m * phi) {
      Rational c = 0;
      while (is_zero(c)) c = random_rational(rng);
      p += m * c;
    }
  }
  return p;
}

}  // namespace ottr::testing
