#include "ottr/pseudo_diff.hpp"

#include "ottr/theory.hpp"

namespace ottr {

PsiDO PsiDO::D(JetTruncation trunc, int min_power) {
  PsiDO r(trunc, min_power);
  r.add(1, JetPoly::constant(trunc, Rational(1)));
  return r;
}

PsiDO PsiDO::multiplication(const JetPoly& a, int min_power) {
  PsiDO r(a.truncation(), min_power);
  r.add(0, a);
  return r;
}

JetPoly PsiDO::coefficient(int power) const {
  auto it = c_.find(power);
  return it == c_.end() ? JetPoly(trunc_) : it->second;
}

void PsiDO::add(int power, const JetPoly& a) {
  if (power < min_power_ || a.is_zero()) return;
  auto it = c_.find(power);
  if (it == c_.end()) {
    c_.emplace(power, a);
    return;
  }
  it->second += a;
  if (it->second.is_zero()) c_.erase(it);
}

PsiDO PsiDO::operator+(const PsiDO& o) const {
  PsiDO r(trunc_, std::max(min_power_, o.min_power_));
  for (const auto& [n, a] : c_) r.add(n, a);
  for (const auto& [n, a] : o.c_) r.add(n, a);
  return r;
}

PsiDO PsiDO::operator*(const Rational& s) const {
  PsiDO r(trunc_, min_power_);
  for (const auto& [n, a] : c_) r.add(n, a * s);
  return r;
}

PsiDO PsiDO::compose(const PsiDO& o) const {
  if (!(trunc_ == o.trunc_)) throw MetadataMismatch("operators over different jet truncations");
  PsiDO r(trunc_, std::min(min_power_, o.min_power_));
  for (const auto& [m, a] : c_) {
    for (const auto& [n, b] : o.c_) {
      JetPoly deriv = b;
      for (int k = 0; k <= trunc_.E; ++k) {
        if (k > 0) {
          if (m >= 0 && k > m) break;
          deriv = dx(deriv);
        }
        if (m + n - k < r.min_power_) break;
        Rational c = binomial(m, k);
        if (is_zero(c)) continue;
        r.add(m + n - k, (a * deriv.times_eps(k)) * c);
      }
    }
  }
  return r;
}

PsiDO PsiDO::plus_part() const {
  PsiDO r(trunc_, 0);
  for (const auto& [n, a] : c_) r.add(n, a);
  return r;
}

PsiDO PsiDO::with_min_power(int p) const {
  PsiDO r(trunc_, p);
  for (const auto& [n, a] : c_) r.add(n, a);
  return r;
}

bool operator==(const PsiDO& a, const PsiDO& b) {
  if (a.c_.size() != b.c_.size()) return false;
  for (const auto& [n, x] : a.c_) {
    auto it = b.c_.find(n);
    if (it == b.c_.end() || !(it->second == x)) return false;
  }
  return true;
}

PsiDO kdv_lax(const JetPoly& w, int min_power) {
  const JetTruncation& tr = w.truncation();
  PsiDO L(tr, min_power);
  L.add(2, JetPoly::constant(tr, Rational(1)));
  L.add(0, w * Rational(2));
  return L;
}

PsiDO lax_sqrt(const JetPoly& w, int min_power) {
  const JetTruncation& tr = w.truncation();
  // S = D + R; the D^{1-n} coefficient of S^2 = D^2 + 2w gives
  // 2 r_{-n} + eps r_{-(n-1)}' + [R^2]_{1-n} = 2 w delta_{n,1}.
  PsiDO R(tr, min_power);
  for (int n = 1; -n >= min_power; ++n) {
    JetPoly rhs(tr);
    if (n == 1) rhs += w * Rational(2);
    if (n >= 2) rhs -= dx(R.coefficient(-(n - 1))).times_eps(1);
    PsiDO R2 = R.compose(R);
    rhs -= R2.coefficient(1 - n);
    R.add(-n, rhs * make_rational(1, 2));
  }
  PsiDO S = PsiDO::D(tr, min_power);
  return S + R;
}

}  // namespace ottr
