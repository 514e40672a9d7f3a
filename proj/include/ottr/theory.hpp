#pragma once

#include <stdexcept>
#include <vector>

#include "ottr/rational.hpp"
#include "ottr/series.hpp"

namespace ottr {

/// Error raised for malformed mathematical input (bad theory data,
/// out-of-window indices, violated preconditions).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Square matrix over Q, dense row-major.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  explicit RationalMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n) {}
  RationalMatrix(int n, std::vector<Rational> row_major);

  static RationalMatrix identity(int n);

  int size() const { return n_; }
  const Rational& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  Rational& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  const std::vector<Rational>& data() const { return a_; }

  bool is_symmetric() const;
  Rational determinant() const;
  /// Gauss-Jordan inverse; throws DomainError when singular.
  RationalMatrix inverse() const;

  friend RationalMatrix operator*(const RationalMatrix& x, const RationalMatrix& y);
  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

 private:
  int n_ = 0;
  std::vector<Rational> a_;
};

/// Truncation parameters shared by every value in a computation:
/// D_t total degree in t,s; A_max max level; D_v degree in level-0 jet
/// variables; J max jet order; E max power of eps.
struct Truncation {
  int D_t = 8;
  int A_max = 3;
  int D_v = 8;
  int J = 6;
  int E = 2;

  bool operator==(const Truncation&) const = default;
  /// True when every field of `o` is <= the corresponding field here.
  bool dominates(const Truncation& o) const {
    return o.D_t <= D_t && o.A_max <= A_max && o.D_v <= D_v && o.J <= J && o.E <= E;
  }
};

class TheoryData {
 public:
  /// Validates and builds. eta must be symmetric and nondegenerate, A nonzero.
  TheoryData(int rank, RationalMatrix eta, std::vector<Rational> unit, Truncation trunc);

  /// Rank-1 theory with eta = (1), A = (1).
  static TheoryData rank_one(Truncation trunc = {});

  int rank() const { return rank_; }
  const RationalMatrix& eta() const { return eta_; }
  const RationalMatrix& eta_inv() const { return eta_inv_; }
  const std::vector<Rational>& unit() const { return unit_; }
  const Truncation& truncation() const { return trunc_; }
  PhaseLayout layout() const { return PhaseLayout{rank_, trunc_.A_max}; }

  TheoryData with_truncation(Truncation t) const { return TheoryData(rank_, eta_, unit_, t); }

  bool operator==(const TheoryData&) const = default;

 private:
  int rank_;
  RationalMatrix eta_;
  RationalMatrix eta_inv_;
  std::vector<Rational> unit_;
  Truncation trunc_;
};

}  // namespace ottr
