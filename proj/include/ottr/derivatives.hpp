#pragma once

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "ottr/bigphase.hpp"
#include "ottr/series.hpp"
#include "ottr/theory.hpp"

namespace ottr {

/// Memoized mixed partial derivatives of one series, keyed by the sorted
/// list of layout indices. Safe to share between threads.
template <class C>
class Derivatives {
 public:
  explicit Derivatives(Series<C> f) : f_(std::move(f)) {}

  const Series<C>& base() const { return f_; }
  const PhaseLayout& layout() const { return f_.layout(); }

  const Series<C>& operator()(std::vector<int> idx) {
    if (idx.empty()) return f_;
    std::sort(idx.begin(), idx.end());
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = cache_.find(idx);
      if (it != cache_.end()) return it->second;
    }
    int last = idx.back();
    std::vector<int> prefix(idx.begin(), idx.end() - 1);
    Series<C> value = partial((*this)(prefix), last);
    std::lock_guard<std::mutex> lock(mutex_);
    return cache_.emplace(std::move(idx), std::move(value)).first->second;
  }

  const Series<C>& t(int alpha, int level, std::vector<int> more = {}) {
    more.push_back(layout().t_index(alpha, level));
    return (*this)(std::move(more));
  }
  const Series<C>& s(int level, std::vector<int> more = {}) {
    more.push_back(layout().s_index(level));
    return (*this)(std::move(more));
  }

  /// d/dt^11_level applied after the derivatives in `more`.
  Series<C> unit(const TheoryData& theory, int level, const std::vector<int>& more = {}) {
    std::optional<Series<C>> acc;
    for (int alpha = 1; alpha <= theory.rank(); ++alpha) {
      const Rational& a = theory.unit()[alpha - 1];
      if (is_zero(a)) continue;
      std::vector<int> idx = more;
      idx.push_back(layout().t_index(alpha, level));
      Series<C> term = (*this)(idx) * a;
      acc = acc ? *acc + term : term;
    }
    return *acc;
  }

 private:
  Series<C> f_;
  std::mutex mutex_;
  std::map<std::vector<int>, Series<C>> cache_;
};

/// sum_{mu,nu} eta^{mu nu} x_mu y_nu.
template <class A, class B>
auto eta_contract(const TheoryData& theory, const std::vector<Series<A>>& x, const std::vector<Series<B>>& y) {
  using C = typename ProductCoef<A, B>::type;
  std::optional<Series<C>> acc;
  for (int mu = 0; mu < theory.rank(); ++mu) {
    for (int nu = 0; nu < theory.rank(); ++nu) {
      const Rational& e = theory.eta_inv()(mu, nu);
      if (is_zero(e)) continue;
      Series<C> term = (x[mu] * y[nu]) * e;
      acc = acc ? *acc + term : term;
    }
  }
  return *acc;
}

}  // namespace ottr
