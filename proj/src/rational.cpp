#include "ottr/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace ottr {

Rational make_rational(long numerator, long denominator) {
  if (denominator == 0) throw std::domain_error("rational with zero denominator");
  Rational q(numerator, denominator);
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace {

bool is_canonical_integer(std::string_view s, bool allow_sign) {
  if (s.empty()) return false;
  if (s.front() == '-') {
    if (!allow_sign) return false;
    s.remove_prefix(1);
    if (s.empty() || s == "0") return false;
  }
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return s.size() == 1 || s.front() != '0';
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  if (!is_canonical_integer(num, true)) return std::nullopt;
  mpz_class n(std::string(num), 10);
  if (slash == std::string_view::npos) return Rational(n);
  std::string_view den = text.substr(slash + 1);
  if (!is_canonical_integer(den, false)) return std::nullopt;
  mpz_class d(std::string(den), 10);
  if (d <= 1 || n == 0) return std::nullopt;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  if (g != 1) return std::nullopt;
  return Rational(n, d);
}

Rational binomial(long top, int k) {
  if (k < 0) return 0;
  Rational result = 1;
  for (int j = 0; j < k; ++j) {
    result *= Rational(top - j);
    result /= Rational(j + 1);
  }
  return result;
}

Rational factorial(int n) {
  Rational result = 1;
  for (int j = 2; j <= n; ++j) result *= j;
  return result;
}

Rational odd_double_factorial(int n) {
  Rational result = 1;
  for (int j = 1; j <= 2 * n + 1; j += 2) result *= j;
  return result;
}

}  // namespace ottr
