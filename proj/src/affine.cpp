#include "ottr/affine.hpp"

namespace ottr {

Affine Affine::unknown(std::uint32_t id) {
  Affine a;
  a.linear_.emplace_back(id, Rational(1));
  return a;
}

Affine Affine::nonlinear() {
  Affine a;
  a.nonlinear_ = true;
  return a;
}

void Affine::combine(const Affine& other, int sign) {
  if (other.nonlinear_) nonlinear_ = true;
  if (nonlinear_) {
    constant_ = 0;
    linear_.clear();
    return;
  }
  if (sign > 0) {
    constant_ += other.constant_;
  } else {
    constant_ -= other.constant_;
  }
  if (other.linear_.empty()) return;
  std::vector<LinearTerm> merged;
  merged.reserve(linear_.size() + other.linear_.size());
  auto a = linear_.begin();
  auto b = other.linear_.begin();
  while (a != linear_.end() || b != other.linear_.end()) {
    if (b == other.linear_.end() || (a != linear_.end() && a->first < b->first)) {
      merged.push_back(std::move(*a++));
    } else if (a == linear_.end() || b->first < a->first) {
      merged.emplace_back(b->first, sign > 0 ? Rational(b->second) : Rational(-b->second));
      ++b;
    } else {
      Rational sum = sign > 0 ? Rational(a->second + b->second) : Rational(a->second - b->second);
      if (!is_zero(sum)) merged.emplace_back(a->first, std::move(sum));
      ++a;
      ++b;
    }
  }
  linear_ = std::move(merged);
}

Affine& Affine::operator+=(const Affine& other) {
  combine(other, 1);
  return *this;
}

Affine& Affine::operator-=(const Affine& other) {
  combine(other, -1);
  return *this;
}

Affine& Affine::operator*=(const Rational& s) {
  if (nonlinear_) return *this;
  if (is_zero(s)) {
    constant_ = 0;
    linear_.clear();
    return *this;
  }
  constant_ *= s;
  for (auto& [id, c] : linear_) c *= s;
  return *this;
}

Affine Affine::operator-() const {
  Affine r = *this;
  r *= Rational(-1);
  return r;
}

Affine mul_coef(const Affine& a, const Rational& b) {
  Affine r = a;
  r *= b;
  return r;
}

Affine mul_coef(const Rational& a, const Affine& b) { return mul_coef(b, a); }

Affine mul_coef(const Affine& a, const Affine& b) {
  if (a.is_nonlinear() || b.is_nonlinear()) return Affine::nonlinear();
  if (a.linear().empty()) return mul_coef(b, a.constant());
  if (b.linear().empty()) return mul_coef(a, b.constant());
  return Affine::nonlinear();
}

}  // namespace ottr
