#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ottr/monomial.hpp"
#include "ottr/rational.hpp"
#include "ottr/series.hpp"

namespace ottr {

/// Jet order went past the declared bound J.
class TruncationOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

enum class JetKind : int { v = 0, phi = 1, f = 2 };

/// v^alpha_i, phi_i, or f_i (the last one only for the Q-polynomials).
struct JetVar {
  JetKind kind = JetKind::v;
  int alpha = 1;  // ignored unless kind == v
  int order = 0;

  static JetVar v(int alpha, int order = 0) { return {JetKind::v, alpha, order}; }
  static JetVar phi(int order = 0) { return {JetKind::phi, 0, order}; }
  static JetVar f(int order) { return {JetKind::f, 0, order}; }

  bool operator==(const JetVar&) const = default;
};

using JetMonomial = Exponents<48>;

/// Per-value truncation of jet polynomials. `rank` fixes the variable layout.
struct JetTruncation {
  int rank = 1;
  int D_v = 8;
  int J = 6;
  int E = 2;

  int num_vars() const { return (rank + 2) * (J + 1); }
  int index(const JetVar& x) const;
  JetVar var_at(int index) const;

  bool operator==(const JetTruncation&) const = default;
};

/// Differential polynomial in v^alpha_i, phi_i, f_i and eps with rational
/// coefficients.
///
/// Terms are sorted by (eps power, monomial). The degree in the order-0
/// variables (v^alpha_0, phi_0) is capped by D_v and by `reliable`, the
/// degree up to which the value is exactly known (kExact for exact data).
class JetPoly {
 public:
  struct Term {
    int eps;
    JetMonomial mono;
    Rational coef;
  };

  JetPoly() = default;
  explicit JetPoly(JetTruncation trunc, int reliable = kExact) : trunc_(trunc), reliable_(reliable) {}

  static JetPoly constant(JetTruncation trunc, const Rational& c, int eps = 0);
  static JetPoly variable(JetTruncation trunc, const JetVar& x, const Rational& c = 1);
  static JetPoly from_terms(JetTruncation trunc, int reliable, std::vector<Term> terms);

  const JetTruncation& truncation() const { return trunc_; }
  int reliable() const { return reliable_; }
  bool is_exact() const { return reliable_ >= kExact; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Rational coefficient(const JetMonomial& m, int eps = 0) const;

  /// Degree of a monomial in the order-0 variables.
  int level0_degree(const JetMonomial& m) const;
  /// Standard degree: v_i, phi_i count i, f_i counts i-1, eps counts -1.
  int standard_degree(const JetMonomial& m, int eps) const;
  /// Minimum order-0 degree over the terms; reliable+1 for zero.
  int valuation() const;
  int max_eps() const;

  /// Coefficient of eps^j as an eps-free polynomial.
  JetPoly eps_slice(int j) const;
  /// Multiply by eps^j (dropping what passes E).
  JetPoly times_eps(int j) const;
  /// Keeps at most the given reliable degree.
  JetPoly with_reliable(int r) const;
  bool has_positive_phi_jets() const;
  bool has_phi() const;

  JetPoly operator-() const;
  JetPoly& operator*=(const Rational& s);
  friend JetPoly operator+(const JetPoly& a, const JetPoly& b);
  friend JetPoly operator-(const JetPoly& a, const JetPoly& b);
  friend JetPoly operator*(const JetPoly& a, const JetPoly& b);
  friend JetPoly operator*(JetPoly a, const Rational& s) { return a *= s; }
  friend JetPoly operator*(const Rational& s, JetPoly a) { return a *= s; }
  JetPoly& operator+=(const JetPoly& o) { return *this = *this + o; }
  JetPoly& operator-=(const JetPoly& o) { return *this = *this - o; }

  friend bool operator==(const JetPoly& a, const JetPoly& b);

 private:
  JetTruncation trunc_{};
  int reliable_ = kExact;
  std::vector<Term> terms_;

  static JetPoly combine(const JetPoly& a, const JetPoly& b, int sign);
};

/// a - b vanishes up to the common reliable degree.
bool equal_up_to_reliable(const JetPoly& a, const JetPoly& b);

JetPoly add(const JetPoly& p, const JetPoly& q);
JetPoly mul(const JetPoly& p, const JetPoly& q);

/// Total x-derivative, sum over jets x_{i+1} d/dx_i. Throws
/// TruncationOverflow when a jet of order J would have to be raised.
JetPoly dx(const JetPoly& p);

JetPoly jet_partial(const JetPoly& p, const JetVar& x);

/// Homogeneous components keyed by standard degree.
std::map<int, JetPoly> standard_degree(const JetPoly& p);

/// Coefficient of phi_0^i. Requires p to be free of phi_1, phi_2, ...
JetPoly coef_phi_power(const JetPoly& p, int i);

/// Human-readable rendering, e.g. "1/2*v1_0^2 + eps*v1_1".
std::string to_string(const JetPoly& p);

}  // namespace ottr
