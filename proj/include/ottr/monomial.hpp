#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>

namespace ottr {

/// Dense exponent vector over a fixed variable layout. Comparison is
/// lexicographic in variable-index order, which is the canonical monomial
/// order used everywhere in the library.
template <std::size_t Capacity>
class Exponents {
 public:
  static constexpr std::size_t capacity = Capacity;

  std::uint8_t operator[](std::size_t i) const { return e_[i]; }

  void set(std::size_t i, int value) {
    if (value < 0 || value > 255) throw std::overflow_error("monomial exponent out of range");
    e_[i] = static_cast<std::uint8_t>(value);
  }
  void increment(std::size_t i, int by = 1) { set(i, e_[i] + by); }

  int total_degree() const {
    int d = 0;
    for (auto x : e_) d += x;
    return d;
  }

  bool is_one() const {
    for (auto x : e_) {
      if (x != 0) return false;
    }
    return true;
  }

  std::size_t hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (auto x : e_) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }

  friend Exponents operator*(const Exponents& a, const Exponents& b) {
    Exponents r;
    for (std::size_t i = 0; i < Capacity; ++i) r.set(i, a.e_[i] + b.e_[i]);
    return r;
  }

  auto operator<=>(const Exponents&) const = default;
  bool operator==(const Exponents&) const = default;

 private:
  std::array<std::uint8_t, Capacity> e_{};
};

struct ExponentsHash {
  template <std::size_t C>
  std::size_t operator()(const Exponents<C>& e) const {
    return e.hash();
  }
};

}  // namespace ottr
