#include "ottr/linsolve.hpp"

#include <unordered_map>

namespace ottr {

bool SparseEchelon::add(const Affine& form) {
  if (form.is_nonlinear()) throw InternalError("nonlinear coefficient reached the linear solver");
  std::map<std::uint32_t, Rational> row;
  for (const auto& [id, c] : form.linear()) row.emplace(id, c);
  Rational rhs = -form.constant();
  auto it = row.begin();
  while (it != row.end()) {
    auto p = pivots_.find(it->first);
    if (p == pivots_.end()) {
      ++it;
      continue;
    }
    std::uint32_t var = it->first;
    Rational factor = it->second;
    for (const auto& [id, c] : p->second.coeffs) {
      auto& slot = row[id];
      slot -= factor * c;
      if (is_zero(slot)) row.erase(id);
    }
    rhs -= factor * p->second.rhs;
    it = row.upper_bound(var);
  }
  if (row.empty()) return is_zero(rhs);
  auto first = row.begin();
  Rational lead = first->second;
  Row r;
  for (auto& [id, c] : row) r.coeffs.emplace(id, c / lead);
  r.rhs = rhs / lead;
  pivots_.emplace(first->first, std::move(r));
  return true;
}

std::vector<Rational> SparseEchelon::solve(std::uint32_t num_unknowns) const {
  std::vector<Rational> x(num_unknowns);
  for (auto p = pivots_.rbegin(); p != pivots_.rend(); ++p) {
    Rational v = p->second.rhs;
    for (const auto& [id, c] : p->second.coeffs) {
      if (id != p->first) v -= c * x[id];
    }
    x[p->first] = v;
  }
  return x;
}

namespace {

void enumerate(int var, int num_vars, int left, BigMonomial& cur, std::vector<BigMonomial>& out) {
  if (var == num_vars - 1) {
    cur.set(var, left);
    out.push_back(cur);
    cur.set(var, 0);
    return;
  }
  for (int e = left; e >= 0; --e) {
    cur.set(var, e);
    enumerate(var + 1, num_vars, left - e, cur, out);
  }
  cur.set(var, 0);
}

}  // namespace

std::vector<BigMonomial> monomials_of_degree(int num_vars, int degree) {
  std::vector<BigMonomial> out;
  if (num_vars <= 0) {
    if (degree == 0) out.emplace_back();
    return out;
  }
  BigMonomial cur;
  enumerate(0, num_vars, degree, cur, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::string index_string(const std::vector<int>& index) {
  std::string s = "(";
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(index[i]);
  }
  return s + ")";
}

BigSeries solve_by_degree(const DegreeSolveSpec& spec, SolveLog* log) {
  const PhaseLayout& lay = spec.layout;
  BigSeries known(lay, -1);
  for (int d = 0; d <= spec.max_degree; ++d) {
    std::vector<BigMonomial> unknowns;
    for (const auto& m : monomials_of_degree(lay.num_vars(), d)) {
      if (spec.is_unknown(m)) unknowns.push_back(m);
    }
    std::vector<Series<Affine>::Term> terms;
    for (const auto& t : known.terms()) terms.push_back({t.degree, t.mono, Affine(t.coef)});
    const BigSeries given_d = spec.given.degree_part(d);
    for (const auto& t : given_d.terms()) terms.push_back({t.degree, t.mono, Affine(t.coef)});
    for (std::uint32_t k = 0; k < unknowns.size(); ++k) terms.push_back({d, unknowns[k], Affine::unknown(k)});
    Series<Affine> trial = Series<Affine>::from_terms(lay, d, std::move(terms));

    std::vector<EquationResidual> eqs = spec.equations(trial);
    bool reliable = true;
    for (const auto& e : eqs) {
      if (d - e.order >= 0 && e.residual.prec() < d - e.order) reliable = false;
    }
    if (!reliable) break;

    SparseEchelon system;
    for (const auto& e : eqs) {
      int target = d - e.order;
      if (target < 0) continue;
      for (const auto& t : e.residual.terms()) {
        if (t.degree < target) continue;
        if (t.degree > target) break;
        if (!system.add(t.coef)) {
          throw InconsistentSystem(spec.name + ": no solution at degree " + std::to_string(d) + ", equation " + e.id +
                                       index_string(e.index) + " at coefficient degree " + std::to_string(target),
                                   d, e.id + index_string(e.index));
        }
      }
    }
    std::vector<Rational> values = system.solve(static_cast<std::uint32_t>(unknowns.size()));
    std::vector<BigSeries::Term> next;
    for (std::uint32_t k = 0; k < unknowns.size(); ++k) next.push_back({d, unknowns[k], values[k]});
    BigSeries part = BigSeries::from_terms(lay, kExact, std::move(next)) + given_d;
    std::vector<BigSeries::Term> merged(known.terms().begin(), known.terms().end());
    merged.insert(merged.end(), part.terms().begin(), part.terms().end());
    known = BigSeries::from_terms(lay, d, std::move(merged));
    if (log) {
      log->reached_degree = d;
      log->free_unknowns.emplace_back(d, static_cast<int>(unknowns.size() - system.rank()));
    }
  }
  return known;
}

}  // namespace ottr
