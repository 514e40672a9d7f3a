#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ottr/affine.hpp"
#include "ottr/series.hpp"

namespace ottr {

/// A linear system had no solution. Carries where the contradiction arose.
class InconsistentSystem : public std::runtime_error {
 public:
  InconsistentSystem(const std::string& what, int degree, std::string equation)
      : std::runtime_error(what), degree_(degree), equation_(std::move(equation)) {}
  int degree() const { return degree_; }
  const std::string& equation() const { return equation_; }

 private:
  int degree_;
  std::string equation_;
};

/// Invariant of the implementation was violated (a bug, not bad input).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Incremental sparse row echelon form over Q. Each equation is an Affine
/// form required to vanish.
class SparseEchelon {
 public:
  /// Returns false when the reduced row is 0 = c with c != 0.
  bool add(const Affine& form);
  /// Back substitution with free unknowns set to 0.
  std::vector<Rational> solve(std::uint32_t num_unknowns) const;
  std::size_t rank() const { return pivots_.size(); }

 private:
  struct Row {
    std::map<std::uint32_t, Rational> coeffs;  // pivot coefficient 1, all other ids larger
    Rational rhs;
  };
  std::map<std::uint32_t, Row> pivots_;
};

/// Every monomial of the given total degree over `num_vars` variables, in
/// canonical order.
std::vector<BigMonomial> monomials_of_degree(int num_vars, int degree);

/// One scalar equation "residual = 0" of differential order `order`.
template <class C>
struct Residual {
  std::string id;
  std::vector<int> index;
  int order;
  Series<C> residual;
};

using EquationResidual = Residual<Affine>;

struct DegreeSolveSpec {
  PhaseLayout layout;
  /// Coefficients that are not unknowns (e.g. the lifted seed).
  BigSeries given;
  /// Which degree-d monomials are unknowns.
  std::function<bool(const BigMonomial&)> is_unknown;
  std::function<std::vector<EquationResidual>(const Series<Affine>&)> equations;
  int max_degree = 0;
  std::string name;
};

struct SolveLog {
  int reached_degree = -1;
  /// (degree, number of unknowns left free and set to zero)
  std::vector<std::pair<int, int>> free_unknowns;
  bool unique() const {
    for (const auto& [d, n] : free_unknowns) {
      if (n != 0) return false;
    }
    return true;
  }
};

/// Solves for a series degree by degree. At degree d the unknown degree-d
/// coefficients enter each equation of order o linearly through its
/// degree d-o coefficient. Stops at max_degree or as soon as some residual
/// is no longer reliable at its target degree.
BigSeries solve_by_degree(const DegreeSolveSpec& spec, SolveLog* log = nullptr);

std::string index_string(const std::vector<int>& index);

}  // namespace ottr
