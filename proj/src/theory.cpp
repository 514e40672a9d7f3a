#include "ottr/theory.hpp"

#include <utility>

namespace ottr {

RationalMatrix::RationalMatrix(int n, std::vector<Rational> row_major) : n_(n), a_(std::move(row_major)) {
  if (n < 0 || a_.size() != static_cast<std::size_t>(n) * n) throw DomainError("matrix data has wrong size");
}

RationalMatrix RationalMatrix::identity(int n) {
  RationalMatrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

bool RationalMatrix::is_symmetric() const {
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      if ((*this)(i, j) != (*this)(j, i)) return false;
    }
  }
  return true;
}

Rational RationalMatrix::determinant() const {
  RationalMatrix m = *this;
  Rational det = 1;
  for (int c = 0; c < n_; ++c) {
    int p = c;
    while (p < n_ && is_zero(m(p, c))) ++p;
    if (p == n_) return 0;
    if (p != c) {
      for (int k = 0; k < n_; ++k) std::swap(m(p, k), m(c, k));
      det = -det;
    }
    det *= m(c, c);
    for (int r = c + 1; r < n_; ++r) {
      if (is_zero(m(r, c))) continue;
      Rational f = m(r, c) / m(c, c);
      for (int k = c; k < n_; ++k) m(r, k) -= f * m(c, k);
    }
  }
  return det;
}

RationalMatrix RationalMatrix::inverse() const {
  RationalMatrix m = *this;
  RationalMatrix inv = identity(n_);
  for (int c = 0; c < n_; ++c) {
    int p = c;
    while (p < n_ && is_zero(m(p, c))) ++p;
    if (p == n_) throw DomainError("matrix is singular");
    if (p != c) {
      for (int k = 0; k < n_; ++k) {
        std::swap(m(p, k), m(c, k));
        std::swap(inv(p, k), inv(c, k));
      }
    }
    Rational d = m(c, c);
    for (int k = 0; k < n_; ++k) {
      m(c, k) /= d;
      inv(c, k) /= d;
    }
    for (int r = 0; r < n_; ++r) {
      if (r == c || is_zero(m(r, c))) continue;
      Rational f = m(r, c);
      for (int k = 0; k < n_; ++k) {
        m(r, k) -= f * m(c, k);
        inv(r, k) -= f * inv(c, k);
      }
    }
  }
  return inv;
}

RationalMatrix operator*(const RationalMatrix& x, const RationalMatrix& y) {
  if (x.n_ != y.n_) throw DomainError("matrix size mismatch");
  RationalMatrix r(x.n_);
  for (int i = 0; i < x.n_; ++i) {
    for (int j = 0; j < x.n_; ++j) {
      for (int k = 0; k < x.n_; ++k) r(i, j) += x(i, k) * y(k, j);
    }
  }
  return r;
}

TheoryData::TheoryData(int rank, RationalMatrix eta, std::vector<Rational> unit, Truncation trunc)
    : rank_(rank), eta_(std::move(eta)), unit_(std::move(unit)), trunc_(trunc) {
  if (rank < 1 || rank > 4) throw DomainError("rank must be between 1 and 4");
  if (eta_.size() != rank) throw DomainError("eta must be rank x rank");
  if (!eta_.is_symmetric()) throw DomainError("eta must be symmetric");
  if (static_cast<int>(unit_.size()) != rank) throw DomainError("unit vector must have rank entries");
  bool any = false;
  for (const auto& a : unit_) any = any || !is_zero(a);
  if (!any) throw DomainError("unit vector A must not be zero");
  if (trunc_.D_t < 0 || trunc_.A_max < 0 || trunc_.D_v < 0 || trunc_.J < 0 || trunc_.E < 0) {
    throw DomainError("truncation parameters must be nonnegative");
  }
  if ((rank + 1) * (trunc_.A_max + 1) > static_cast<int>(BigMonomial::capacity)) {
    throw DomainError("too many big-phase-space variables for this build");
  }
  eta_inv_ = eta_.inverse();
  if (!(eta_ * eta_inv_ == RationalMatrix::identity(rank))) throw DomainError("eta inverse check failed");
}

TheoryData TheoryData::rank_one(Truncation trunc) {
  return TheoryData(1, RationalMatrix::identity(1), {Rational(1)}, trunc);
}

}  // namespace ottr
