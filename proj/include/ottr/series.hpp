#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ottr/affine.hpp"
#include "ottr/monomial.hpp"
#include "ottr/rational.hpp"

namespace ottr {

/// Reliable degree of a value that is known exactly (no truncation loss).
inline constexpr int kExact = 1 << 24;

inline int clamp_prec(long p) { return p >= kExact ? kExact : static_cast<int>(p); }

class MetadataMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Variable layout of the big phase space: t^alpha_a for 1 <= alpha <= rank,
/// 0 <= a <= max_level, followed by s_0..s_{max_level}.
struct PhaseLayout {
  int rank = 1;
  int max_level = 0;

  int num_vars() const { return (rank + 1) * (max_level + 1); }
  int t_index(int alpha, int level) const { return (alpha - 1) * (max_level + 1) + level; }
  int s_index(int level) const { return rank * (max_level + 1) + level; }
  bool is_s(int index) const { return index >= rank * (max_level + 1); }
  int level_of(int index) const { return index % (max_level + 1); }
  int alpha_of(int index) const { return is_s(index) ? 0 : index / (max_level + 1) + 1; }

  bool operator==(const PhaseLayout&) const = default;
};

using BigMonomial = Exponents<32>;

/// Truncated formal power series in the big-phase-space variables.
///
/// `prec` is the reliable total degree: every coefficient of degree <= prec
/// is exact and nothing above it is stored. Arithmetic propagates prec the
/// way p-adic precision propagates (a product is reliable up to
/// min(prec_a + val_b, prec_b + val_a)), so comparisons never see truncation
/// artefacts. Terms are kept sorted by (total degree, exponent vector).
template <class Coef>
class Series {
 public:
  struct Term {
    int degree;
    BigMonomial mono;
    Coef coef;
  };

  Series() = default;
  explicit Series(PhaseLayout layout, int prec = kExact) : layout_(layout), prec_(prec) {}

  static Series constant(PhaseLayout layout, const Coef& c) {
    Series s(layout);
    if (!ottr::is_zero(c)) s.terms_.push_back({0, BigMonomial{}, c});
    return s;
  }

  static Series monomial(PhaseLayout layout, const BigMonomial& m, const Coef& c) {
    Series s(layout);
    if (!ottr::is_zero(c)) s.terms_.push_back({m.total_degree(), m, c});
    return s;
  }

  static Series variable(PhaseLayout layout, int index) {
    BigMonomial m;
    m.set(index, 1);
    return monomial(layout, m, Coef(Rational(1)));
  }

  /// Builds a canonical series from arbitrary (possibly repeated) terms.
  static Series from_terms(PhaseLayout layout, int prec, std::vector<Term> terms) {
    Series s(layout, prec);
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
      return a.degree != b.degree ? a.degree < b.degree : a.mono < b.mono;
    });
    for (auto& t : terms) {
      if (t.degree > prec) break;
      if (!s.terms_.empty() && s.terms_.back().mono == t.mono) {
        s.terms_.back().coef += t.coef;
      } else {
        s.terms_.push_back(std::move(t));
      }
    }
    std::erase_if(s.terms_, [](const Term& t) { return ottr::is_zero(t.coef); });
    return s;
  }

  const PhaseLayout& layout() const { return layout_; }
  int prec() const { return prec_; }
  bool is_exact() const { return prec_ >= kExact; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  /// Lowest degree with a nonzero coefficient; prec + 1 for the zero series.
  int valuation() const { return terms_.empty() ? clamp_prec(long(prec_) + 1) : terms_.front().degree; }

  Coef coefficient(const BigMonomial& m) const {
    int d = m.total_degree();
    auto it = std::lower_bound(terms_.begin(), terms_.end(), std::make_pair(d, m),
                               [](const Term& t, const std::pair<int, BigMonomial>& key) {
                                 return t.degree != key.first ? t.degree < key.first : t.mono < key.second;
                               });
    if (it != terms_.end() && it->mono == m) return it->coef;
    return Coef{};
  }

  Coef constant_term() const { return coefficient(BigMonomial{}); }

  Series truncated(int degree) const {
    Series r(layout_, std::min(prec_, degree));
    for (const auto& t : terms_) {
      if (t.degree > r.prec_) break;
      r.terms_.push_back(t);
    }
    return r;
  }

  Series degree_part(int d) const {
    Series r(layout_, prec_);
    for (const auto& t : terms_) {
      if (t.degree == d) r.terms_.push_back(t);
    }
    return r;
  }

  /// Same terms, forgetting that anything above `degree` was known.
  Series with_prec(int degree) const { return truncated(degree); }

  Series operator-() const {
    Series r = *this;
    for (auto& t : r.terms_) t.coef *= Rational(-1);
    return r;
  }

  Series& operator*=(const Rational& s) {
    if (ottr::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& t : terms_) t.coef *= s;
    return *this;
  }

  Series& operator+=(const Series& o) { return *this = combine(*this, o, 1); }
  Series& operator-=(const Series& o) { return *this = combine(*this, o, -1); }

  friend Series operator+(const Series& a, const Series& b) { return combine(a, b, 1); }
  friend Series operator-(const Series& a, const Series& b) { return combine(a, b, -1); }
  friend Series operator*(Series a, const Rational& s) { return a *= s; }
  friend Series operator*(const Rational& s, Series a) { return a *= s; }

  /// Structural equality: same layout, same reliable degree, same terms.
  friend bool operator==(const Series& a, const Series& b) {
    if (!(a.layout_ == b.layout_) || a.prec_ != b.prec_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      if (!(a.terms_[i].mono == b.terms_[i].mono) || !(a.terms_[i].coef == b.terms_[i].coef)) return false;
    }
    return true;
  }

 private:
  template <class>
  friend class Series;

  PhaseLayout layout_{};
  int prec_ = kExact;
  std::vector<Term> terms_;

  static void check_layout(const PhaseLayout& a, const PhaseLayout& b) {
    if (!(a == b)) throw MetadataMismatch("series over different phase-space layouts");
  }

  static Series combine(const Series& a, const Series& b, int sign) {
    check_layout(a.layout_, b.layout_);
    Series r(a.layout_, std::min(a.prec_, b.prec_));
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    auto less = [](const Term& x, const Term& y) {
      return x.degree != y.degree ? x.degree < y.degree : x.mono < y.mono;
    };
    auto i = a.terms_.begin();
    auto j = b.terms_.begin();
    auto push = [&](Term t) {
      if (t.degree <= r.prec_ && !ottr::is_zero(t.coef)) r.terms_.push_back(std::move(t));
    };
    while (i != a.terms_.end() || j != b.terms_.end()) {
      if (j == b.terms_.end() || (i != a.terms_.end() && less(*i, *j))) {
        push(*i++);
      } else if (i == a.terms_.end() || less(*j, *i)) {
        Term t = *j++;
        if (sign < 0) t.coef *= Rational(-1);
        push(std::move(t));
      } else {
        Term t = *i++;
        if (sign > 0) {
          t.coef += j->coef;
        } else {
          t.coef -= j->coef;
        }
        ++j;
        push(std::move(t));
      }
    }
    return r;
  }
};

using BigSeries = Series<Rational>;

template <class A, class B>
Series<typename ProductCoef<A, B>::type> operator*(const Series<A>& x, const Series<B>& y) {
  using C = typename ProductCoef<A, B>::type;
  if (!(x.layout() == y.layout())) throw MetadataMismatch("series over different phase-space layouts");
  int prec = clamp_prec(std::min(long(x.prec()) + y.valuation(), long(y.prec()) + x.valuation()));
  std::vector<typename Series<C>::Term> out;
  if (x.is_zero() || y.is_zero()) return Series<C>::from_terms(x.layout(), prec, std::move(out));
  std::unordered_map<BigMonomial, C, ExponentsHash> acc;
  acc.reserve(x.size() + y.size());
  const auto& yt = y.terms();
  for (const auto& a : x.terms()) {
    if (a.degree + yt.front().degree > prec) break;
    for (const auto& b : yt) {
      if (a.degree + b.degree > prec) break;
      acc[a.mono * b.mono] += mul_coef(a.coef, b.coef);
    }
  }
  out.reserve(acc.size());
  for (auto& [m, c] : acc) out.push_back({m.total_degree(), m, std::move(c)});
  return Series<C>::from_terms(x.layout(), prec, std::move(out));
}

/// Converts a series to another coefficient type (e.g. Rational -> Affine).
template <class To, class From>
Series<To> convert(const Series<From>& s) {
  std::vector<typename Series<To>::Term> terms;
  terms.reserve(s.size());
  for (const auto& t : s.terms()) terms.push_back({t.degree, t.mono, To(t.coef)});
  return Series<To>::from_terms(s.layout(), s.prec(), std::move(terms));
}

/// Formal partial derivative with respect to the variable with the given
/// layout index. Loses one degree of reliability.
template <class C>
Series<C> partial(const Series<C>& f, int index) {
  std::vector<typename Series<C>::Term> out;
  for (const auto& t : f.terms()) {
    int e = t.mono[index];
    if (e == 0) continue;
    typename Series<C>::Term d{t.degree - 1, t.mono, t.coef};
    d.mono.set(index, e - 1);
    d.coef *= Rational(e);
    out.push_back(std::move(d));
  }
  int prec = f.is_exact() ? kExact : f.prec() - 1;
  return Series<C>::from_terms(f.layout(), prec, std::move(out));
}

/// Multiplication by a single variable.
template <class C>
Series<C> times_variable(const Series<C>& f, int index) {
  std::vector<typename Series<C>::Term> out;
  out.reserve(f.size());
  for (const auto& t : f.terms()) {
    typename Series<C>::Term d{t.degree + 1, t.mono, t.coef};
    d.mono.increment(index);
    out.push_back(std::move(d));
  }
  return Series<C>::from_terms(f.layout(), clamp_prec(long(f.prec()) + 1), std::move(out));
}

/// Power of a series by repeated multiplication; power 0 is the exact unit.
template <class C>
Series<C> power(const Series<C>& f, int n) {
  Series<C> r = Series<C>::constant(f.layout(), C(Rational(1)));
  for (int i = 0; i < n; ++i) r = r * f;
  return r;
}

/// True when a - b vanishes up to the smaller reliable degree of the two.
template <class C>
bool equal_up_to_prec(const Series<C>& a, const Series<C>& b) {
  return (a - b).is_zero();
}

}  // namespace ottr
