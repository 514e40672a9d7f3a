#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ottr/rational.hpp"

namespace ottr {

/// Coefficient that is an affine form c + sum_k a_k x_k in solver unknowns.
///
/// Series with Affine coefficients let the order-by-order solvers reuse the
/// same residual expressions as the validators: the degree-d unknowns enter
/// linearly at the degree being solved. Products of two non-constant forms
/// are not representable; they produce a "nonlinear" marker that poisons
/// every value it touches. Reading a poisoned coefficient at a degree that
/// is being solved is a solver bug and is reported as such.
class Affine {
 public:
  using LinearTerm = std::pair<std::uint32_t, Rational>;

  Affine() = default;
  Affine(const Rational& c) : constant_(c) {}  // NOLINT(google-explicit-constructor)

  static Affine unknown(std::uint32_t id);
  static Affine nonlinear();

  const Rational& constant() const { return constant_; }
  const std::vector<LinearTerm>& linear() const { return linear_; }
  bool is_nonlinear() const { return nonlinear_; }
  bool is_constant() const { return !nonlinear_ && linear_.empty(); }

  Affine& operator+=(const Affine& other);
  Affine& operator-=(const Affine& other);
  Affine& operator*=(const Rational& s);
  Affine operator-() const;

  friend bool operator==(const Affine&, const Affine&) = default;

 private:
  Rational constant_ = 0;
  std::vector<LinearTerm> linear_;  // sorted by id, no zero entries
  bool nonlinear_ = false;

  void combine(const Affine& other, int sign);
};

inline bool is_zero(const Affine& a) {
  return !a.is_nonlinear() && a.linear().empty() && is_zero(a.constant());
}

inline Rational mul_coef(const Rational& a, const Rational& b) { return a * b; }
Affine mul_coef(const Affine& a, const Rational& b);
Affine mul_coef(const Rational& a, const Affine& b);
Affine mul_coef(const Affine& a, const Affine& b);

template <class A, class B>
struct ProductCoef {
  using type = Affine;
};
template <>
struct ProductCoef<Rational, Rational> {
  using type = Rational;
};

}  // namespace ottr
