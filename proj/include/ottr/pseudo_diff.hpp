#pragma once

#include <map>

#include "ottr/jetpoly.hpp"

namespace ottr {

/// Pseudo-differential operator sum_n a_n D^n with D = eps d/dx and
/// coefficients in the jet ring. Powers below `min_power` are discarded,
/// and eps powers above the truncation E are dropped by the coefficients.
class PsiDO {
 public:
  PsiDO(JetTruncation trunc, int min_power) : trunc_(trunc), min_power_(min_power) {}

  static PsiDO D(JetTruncation trunc, int min_power);
  static PsiDO multiplication(const JetPoly& a, int min_power);

  const std::map<int, JetPoly>& coefficients() const { return c_; }
  JetPoly coefficient(int power) const;
  int min_power() const { return min_power_; }
  const JetTruncation& truncation() const { return trunc_; }

  void add(int power, const JetPoly& a);
  PsiDO operator+(const PsiDO& o) const;
  PsiDO operator*(const Rational& s) const;
  /// Composition, using D^m o b = sum_k binom(m,k) eps^k b^{(k)} D^{m-k}.
  PsiDO compose(const PsiDO& o) const;
  /// Nonnegative-power part.
  PsiDO plus_part() const;
  PsiDO with_min_power(int p) const;

  friend bool operator==(const PsiDO& a, const PsiDO& b);

 private:
  JetTruncation trunc_;
  int min_power_;
  std::map<int, JetPoly> c_;
};

/// L = D^2 + 2w for a given coefficient w.
PsiDO kdv_lax(const JetPoly& w, int min_power);

/// The square root D + sum_{n>=1} r_{-n} D^{-n} of D^2 + 2w, kept down to D^{min_power}.
PsiDO lax_sqrt(const JetPoly& w, int min_power);

}  // namespace ottr
