#pragma once

#include <map>
#include <vector>

#include "ottr/jetpoly.hpp"
#include "ottr/rational.hpp"

// Independent reference computations for the Q-polynomials.
namespace ottr::oracles {

// Complete Bell polynomials: B_{n+1} = sum_k C(n,k) B_{n-k} x_{k+1}.
// Keys are exponent vectors (m_1, m_2, ...).
using Bell = std::map<std::vector<int>, Rational>;

inline std::vector<Bell> bell_polynomials(int n_max) {
  std::vector<Bell> B(n_max + 1);
  B[0][std::vector<int>(n_max, 0)] = 1;
  for (int n = 0; n < n_max; ++n) {
    for (int k = 0; k <= n; ++k) {
      for (const auto& [m, c] : B[n - k]) {
        std::vector<int> e = m;
        e[k] += 1;
        B[n + 1][e] += c * binomial(n, k);
      }
    }
  }
  return B;
}

// Q_i = eps^i B_i(f_1/eps, f_2/eps, ...).
inline JetPoly q_from_bell(const Bell& b, int i, const JetTruncation& tr) {
  JetPoly out(tr);
  for (const auto& [m, c] : b) {
    int factors = 0;
    JetPoly term = JetPoly::constant(tr, c);
    for (std::size_t k = 0; k < m.size(); ++k) {
      for (int r = 0; r < m[k]; ++r) term = term * JetPoly::variable(tr, JetVar::f(static_cast<int>(k) + 1));
      factors += m[k];
    }
    out += term.times_eps(i - factors);
  }
  return out;
}

// Truncated univariate power series in x with rational coefficients.
using XSeries = std::vector<Rational>;

inline XSeries xmul(const XSeries& a, const XSeries& b) {
  XSeries r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; i + j < a.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

inline XSeries xderiv(const XSeries& a) {
  XSeries r(a.size());
  for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * Rational(static_cast<long>(i));
  return r;
}

// exp(g) for g(0) = 0, via E' = g' E
inline XSeries xexp(const XSeries& g) {
  XSeries e(g.size());
  e[0] = 1;
  for (std::size_t n = 1; n < g.size(); ++n) {
    Rational acc = 0;
    for (std::size_t k = 1; k <= n; ++k) acc += Rational(static_cast<long>(k)) * g[k] * e[n - k];
    e[n] = acc / Rational(static_cast<long>(n));
  }
  return e;
}

// Substitutes f_k -> d^k f/dx^k and eps -> e.
inline XSeries eval_in_x(const JetPoly& p, const XSeries& fx, const Rational& e) {
  const JetTruncation& tr = p.truncation();
  std::vector<XSeries> jets{fx};
  for (int k = 1; k <= tr.J; ++k) jets.push_back(xderiv(jets.back()));
  XSeries out(fx.size());
  for (const auto& t : p.terms()) {
    XSeries term(fx.size());
    Rational c = t.coef;
    for (int j = 0; j < t.eps; ++j) c *= e;
    term[0] = c;
    for (int idx = 0; idx < tr.num_vars(); ++idx) {
      for (int r = 0; r < t.mono[idx]; ++r) term = xmul(term, jets[tr.var_at(idx).order]);
    }
    for (std::size_t n = 0; n < out.size(); ++n) out[n] += term[n];
  }
  return out;
}

/// Checks (eps d/dx)^i e^{f/eps} = Q_i e^{f/eps} through x^{n-1-i} for f(x) =
/// sum_k fx[k] x^k with fx[0] = 0 and eps the number e.
inline bool exponential_identity(const JetPoly& q, int i, const XSeries& fx, const Rational& e) {
  const std::size_t n = fx.size();
  XSeries g(n);
  for (std::size_t k = 0; k < n; ++k) g[k] = fx[k] / e;
  XSeries E = xexp(g);
  XSeries lhs = E;
  for (int k = 0; k < i; ++k) {
    lhs = xderiv(lhs);
    for (auto& c : lhs) c *= e;
  }
  XSeries rhs = xmul(eval_in_x(q, fx, e), E);
  for (std::size_t k = 0; k + i < n; ++k) {
    if (lhs[k] != rhs[k]) return false;
  }
  return true;
}

}  // namespace ottr::oracles
