#include "ottr/jetpoly.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "ottr/theory.hpp"

namespace ottr {

int JetTruncation::index(const JetVar& x) const {
  if (x.order < 0) throw DomainError("negative jet order");
  if (x.order > J) throw TruncationOverflow("jet order " + std::to_string(x.order) + " exceeds J=" + std::to_string(J));
  switch (x.kind) {
    case JetKind::v:
      if (x.alpha < 1 || x.alpha > rank) throw DomainError("jet variable index out of range");
      return (x.alpha - 1) * (J + 1) + x.order;
    case JetKind::phi:
      return rank * (J + 1) + x.order;
    case JetKind::f:
      return (rank + 1) * (J + 1) + x.order;
  }
  throw DomainError("unknown jet kind");
}

JetVar JetTruncation::var_at(int index) const {
  int block = index / (J + 1);
  int order = index % (J + 1);
  if (block < rank) return JetVar::v(block + 1, order);
  if (block == rank) return JetVar::phi(order);
  return JetVar::f(order);
}

namespace {

struct KeyHash {
  std::size_t operator()(const std::pair<int, JetMonomial>& k) const {
    return k.second.hash() * 31u + static_cast<std::size_t>(k.first);
  }
};

bool term_less(const JetPoly::Term& a, const JetPoly::Term& b) {
  return a.eps != b.eps ? a.eps < b.eps : a.mono < b.mono;
}

void check_compatible(const JetPoly& a, const JetPoly& b) {
  if (!(a.truncation() == b.truncation())) throw MetadataMismatch("jet polynomials with different truncation metadata");
}

}  // namespace

int JetPoly::level0_degree(const JetMonomial& m) const {
  int d = 0;
  for (int a = 0; a <= trunc_.rank; ++a) d += m[a * (trunc_.J + 1)];
  return d;
}

int JetPoly::standard_degree(const JetMonomial& m, int eps) const {
  int d = -eps;
  for (int idx = 0; idx < trunc_.num_vars(); ++idx) {
    int e = m[idx];
    if (e == 0) continue;
    JetVar x = trunc_.var_at(idx);
    d += e * (x.kind == JetKind::f ? x.order - 1 : x.order);
  }
  return d;
}

JetPoly JetPoly::constant(JetTruncation trunc, const Rational& c, int eps) {
  return from_terms(trunc, kExact, {{eps, JetMonomial{}, c}});
}

JetPoly JetPoly::variable(JetTruncation trunc, const JetVar& x, const Rational& c) {
  JetMonomial m;
  m.set(trunc.index(x), 1);
  return from_terms(trunc, kExact, {{0, m, c}});
}

JetPoly JetPoly::from_terms(JetTruncation trunc, int reliable, std::vector<Term> terms) {
  JetPoly p(trunc, reliable);
  int cap = std::min(reliable, trunc.D_v);
  bool dropped = false;
  std::sort(terms.begin(), terms.end(), term_less);
  for (auto& t : terms) {
    if (t.eps < 0) throw DomainError("negative eps power");
    if (t.eps > trunc.E) continue;
    if (p.level0_degree(t.mono) > cap) {
      dropped = true;
      continue;
    }
    if (!p.terms_.empty() && p.terms_.back().eps == t.eps && p.terms_.back().mono == t.mono) {
      p.terms_.back().coef += t.coef;
    } else {
      p.terms_.push_back(std::move(t));
    }
  }
  std::erase_if(p.terms_, [](const Term& t) { return ottr::is_zero(t.coef); });
  if (dropped && p.reliable_ > trunc.D_v) p.reliable_ = trunc.D_v;
  return p;
}

Rational JetPoly::coefficient(const JetMonomial& m, int eps) const {
  Term key{eps, m, 0};
  auto it = std::lower_bound(terms_.begin(), terms_.end(), key, term_less);
  if (it != terms_.end() && it->eps == eps && it->mono == m) return it->coef;
  return 0;
}

int JetPoly::valuation() const {
  if (terms_.empty()) return clamp_prec(long(reliable_) + 1);
  int v = kExact;
  for (const auto& t : terms_) v = std::min(v, level0_degree(t.mono));
  return v;
}

int JetPoly::max_eps() const { return terms_.empty() ? 0 : terms_.back().eps; }

JetPoly JetPoly::eps_slice(int j) const {
  JetPoly r(trunc_, reliable_);
  for (const auto& t : terms_) {
    if (t.eps == j) r.terms_.push_back({0, t.mono, t.coef});
  }
  return r;
}

JetPoly JetPoly::times_eps(int j) const {
  std::vector<Term> out;
  for (const auto& t : terms_) out.push_back({t.eps + j, t.mono, t.coef});
  return from_terms(trunc_, reliable_, std::move(out));
}

JetPoly JetPoly::with_reliable(int r) const {
  return from_terms(trunc_, std::min(r, reliable_), terms_);
}

bool JetPoly::has_positive_phi_jets() const {
  int base = trunc_.rank * (trunc_.J + 1);
  for (const auto& t : terms_) {
    for (int i = 1; i <= trunc_.J; ++i) {
      if (t.mono[base + i] != 0) return true;
    }
  }
  return false;
}

bool JetPoly::has_phi() const {
  int base = trunc_.rank * (trunc_.J + 1);
  for (const auto& t : terms_) {
    for (int i = 0; i <= trunc_.J; ++i) {
      if (t.mono[base + i] != 0) return true;
    }
  }
  return false;
}

JetPoly JetPoly::operator-() const {
  JetPoly r = *this;
  for (auto& t : r.terms_) t.coef = -t.coef;
  return r;
}

JetPoly& JetPoly::operator*=(const Rational& s) {
  if (ottr::is_zero(s)) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coef *= s;
  return *this;
}

JetPoly JetPoly::combine(const JetPoly& a, const JetPoly& b, int sign) {
  check_compatible(a, b);
  int rel = std::min(a.reliable_, b.reliable_);
  std::vector<Term> out;
  out.reserve(a.terms_.size() + b.terms_.size());
  auto i = a.terms_.begin();
  auto j = b.terms_.begin();
  while (i != a.terms_.end() || j != b.terms_.end()) {
    if (j == b.terms_.end() || (i != a.terms_.end() && term_less(*i, *j))) {
      out.push_back(*i++);
    } else if (i == a.terms_.end() || term_less(*j, *i)) {
      Term t = *j++;
      if (sign < 0) t.coef = -t.coef;
      out.push_back(std::move(t));
    } else {
      Term t = *i++;
      if (sign > 0) {
        t.coef += j->coef;
      } else {
        t.coef -= j->coef;
      }
      ++j;
      out.push_back(std::move(t));
    }
  }
  return from_terms(a.trunc_, rel, std::move(out));
}

JetPoly operator+(const JetPoly& a, const JetPoly& b) { return JetPoly::combine(a, b, 1); }
JetPoly operator-(const JetPoly& a, const JetPoly& b) { return JetPoly::combine(a, b, -1); }

JetPoly operator*(const JetPoly& a, const JetPoly& b) {
  check_compatible(a, b);
  int rel = clamp_prec(std::min(long(a.reliable_) + b.valuation(), long(b.reliable_) + a.valuation()));
  int cap = std::min(rel, a.trunc_.D_v);
  std::unordered_map<std::pair<int, JetMonomial>, Rational, KeyHash> acc;
  bool dropped = false;
  for (const auto& x : a.terms_) {
    int dx0 = a.level0_degree(x.mono);
    for (const auto& y : b.terms_) {
      int e = x.eps + y.eps;
      if (e > a.trunc_.E) continue;
      if (dx0 + a.level0_degree(y.mono) > cap) {
        dropped = true;
        continue;
      }
      acc[{e, x.mono * y.mono}] += x.coef * y.coef;
    }
  }
  std::vector<JetPoly::Term> out;
  out.reserve(acc.size());
  for (auto& [k, c] : acc) out.push_back({k.first, k.second, std::move(c)});
  if (dropped && rel > a.trunc_.D_v) rel = a.trunc_.D_v;
  return JetPoly::from_terms(a.trunc_, rel, std::move(out));
}

bool operator==(const JetPoly& a, const JetPoly& b) {
  if (!(a.trunc_ == b.trunc_) || a.reliable_ != b.reliable_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    const auto& x = a.terms_[i];
    const auto& y = b.terms_[i];
    if (x.eps != y.eps || !(x.mono == y.mono) || x.coef != y.coef) return false;
  }
  return true;
}

bool equal_up_to_reliable(const JetPoly& a, const JetPoly& b) { return (a - b).is_zero(); }

JetPoly add(const JetPoly& p, const JetPoly& q) { return p + q; }
JetPoly mul(const JetPoly& p, const JetPoly& q) { return p * q; }

JetPoly dx(const JetPoly& p) {
  const auto& tr = p.truncation();
  std::vector<JetPoly::Term> out;
  for (const auto& t : p.terms()) {
    for (int idx = 0; idx < tr.num_vars(); ++idx) {
      int e = t.mono[idx];
      if (e == 0) continue;
      int order = idx % (tr.J + 1);
      if (order == tr.J) throw TruncationOverflow("dx needs jet order " + std::to_string(tr.J + 1) + " > J");
      JetPoly::Term d{t.eps, t.mono, t.coef * e};
      d.mono.set(idx, e - 1);
      d.mono.increment(idx + 1);
      out.push_back(std::move(d));
    }
  }
  int rel = p.is_exact() ? kExact : p.reliable() - 1;
  return JetPoly::from_terms(tr, rel, std::move(out));
}

JetPoly jet_partial(const JetPoly& p, const JetVar& x) {
  const auto& tr = p.truncation();
  int idx = tr.index(x);
  std::vector<JetPoly::Term> out;
  for (const auto& t : p.terms()) {
    int e = t.mono[idx];
    if (e == 0) continue;
    JetPoly::Term d{t.eps, t.mono, t.coef * e};
    d.mono.set(idx, e - 1);
    out.push_back(std::move(d));
  }
  bool level0 = x.order == 0 && x.kind != JetKind::f;
  int rel = (p.is_exact() || !level0) ? p.reliable() : p.reliable() - 1;
  return JetPoly::from_terms(tr, rel, std::move(out));
}

std::map<int, JetPoly> standard_degree(const JetPoly& p) {
  std::map<int, std::vector<JetPoly::Term>> buckets;
  for (const auto& t : p.terms()) buckets[p.standard_degree(t.mono, t.eps)].push_back(t);
  std::map<int, JetPoly> r;
  for (auto& [d, ts] : buckets) r.emplace(d, JetPoly::from_terms(p.truncation(), p.reliable(), std::move(ts)));
  return r;
}

JetPoly coef_phi_power(const JetPoly& p, int i) {
  if (i < 0) throw DomainError("negative phi power");
  if (p.has_positive_phi_jets()) throw DomainError("coef_phi_power: positive phi jets present");
  const auto& tr = p.truncation();
  int idx = tr.index(JetVar::phi(0));
  std::vector<JetPoly::Term> out;
  for (const auto& t : p.terms()) {
    if (t.mono[idx] != i) continue;
    JetPoly::Term d = t;
    d.mono.set(idx, 0);
    out.push_back(std::move(d));
  }
  int rel = p.is_exact() ? kExact : p.reliable() - i;
  return JetPoly::from_terms(tr, rel, std::move(out));
}

std::string to_string(const JetPoly& p) {
  if (p.is_zero()) return "0";
  const auto& tr = p.truncation();
  std::ostringstream os;
  bool first = true;
  for (const auto& t : p.terms()) {
    std::vector<std::string> factors;
    if (t.eps == 1) factors.push_back("eps");
    if (t.eps > 1) factors.push_back("eps^" + std::to_string(t.eps));
    for (int idx = 0; idx < tr.num_vars(); ++idx) {
      int e = t.mono[idx];
      if (e == 0) continue;
      JetVar x = tr.var_at(idx);
      std::string f;
      switch (x.kind) {
        case JetKind::v: f = "v" + std::to_string(x.alpha) + "_" + std::to_string(x.order); break;
        case JetKind::phi: f = "phi_" + std::to_string(x.order); break;
        case JetKind::f: f = "f_" + std::to_string(x.order); break;
      }
      if (e > 1) f += "^" + std::to_string(e);
      factors.push_back(std::move(f));
    }
    Rational c = t.coef;
    bool negative = c < 0;
    if (negative) c = -c;
    if (first) {
      if (negative) os << '-';
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    bool unit = c == 1 && !factors.empty();
    if (!unit) os << format_rational(c);
    for (std::size_t k = 0; k < factors.size(); ++k) os << (k == 0 && unit ? "" : "*") << factors[k];
  }
  return os.str();
}

}  // namespace ottr
