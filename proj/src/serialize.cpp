#include "ottr/serialize.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include "ottr/bigphase.hpp"

namespace ottr {

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

const char* SeriesFile::kind() const {
  switch (value.index()) {
    case 0:
      return "bigseries";
    case 1:
      return "jetpoly";
    case 2:
      return "operator";
    default:
      return "report";
  }
}

namespace {

std::string reliable_string(int r) { return r >= kExact ? "exact" : std::to_string(r); }

void emit_header(std::ostringstream& os, const TheoryData& th, const char* kind) {
  const Truncation& t = th.truncation();
  os << "format " << kFormatTag << "\n";
  os << "rank " << th.rank() << "\n";
  os << "eta";
  for (const auto& e : th.eta().data()) os << ' ' << format_rational(e);
  os << "\nA";
  for (const auto& a : th.unit()) os << ' ' << format_rational(a);
  os << "\ntruncation D_t=" << t.D_t << " A_max=" << t.A_max << " D_v=" << t.D_v << " J=" << t.J << " E=" << t.E
     << "\n";
  os << "kind " << kind << "\n";
}

void emit_big_terms(std::ostringstream& os, const BigSeries& f) {
  const PhaseLayout& lay = f.layout();
  for (const auto& t : f.terms()) {
    os << format_rational(t.coef) << " 0";
    for (int idx = 0; idx < lay.num_vars(); ++idx) {
      int e = t.mono[idx];
      if (e == 0) continue;
      if (lay.is_s(idx)) {
        os << " [s,0," << lay.level_of(idx) << ',' << e << ']';
      } else {
        os << " [t," << lay.alpha_of(idx) << ',' << lay.level_of(idx) << ',' << e << ']';
      }
    }
    os << "\n";
  }
}

void emit_jet_terms(std::ostringstream& os, const JetPoly& p) {
  const JetTruncation& tr = p.truncation();
  for (const auto& t : p.terms()) {
    os << format_rational(t.coef) << ' ' << t.eps;
    for (int idx = 0; idx < tr.num_vars(); ++idx) {
      int e = t.mono[idx];
      if (e == 0) continue;
      JetVar x = tr.var_at(idx);
      const char* k = x.kind == JetKind::v ? "v" : x.kind == JetKind::phi ? "phi" : "f";
      os << " [" << k << ',' << (x.kind == JetKind::v ? x.alpha : 0) << ',' << x.order << ',' << e << ']';
    }
    os << "\n";
  }
}

void check_layout(const TheoryData& th, const PhaseLayout& lay) {
  if (!(lay == th.layout())) throw MetadataMismatch("series layout does not match the theory");
}

void check_jet(const TheoryData& th, const JetTruncation& tr) {
  if (!(tr == jet_truncation(th))) throw MetadataMismatch("jet truncation does not match the theory");
}

std::string index_token(const std::vector<int>& idx) {
  std::string s = "[";
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(idx[i]);
  }
  return s + "]";
}

}  // namespace

std::string emit(const TheoryData& th, const BigSeries& f) {
  check_layout(th, f.layout());
  std::ostringstream os;
  emit_header(os, th, "bigseries");
  os << "reliable " << reliable_string(f.prec()) << "\n";
  os << "terms " << f.size() << "\n";
  emit_big_terms(os, f);
  os << "end\n";
  return os.str();
}

std::string emit(const TheoryData& th, const JetPoly& p) {
  check_jet(th, p.truncation());
  std::ostringstream os;
  emit_header(os, th, "jetpoly");
  os << "reliable " << reliable_string(p.reliable()) << "\n";
  os << "terms " << p.size() << "\n";
  emit_jet_terms(os, p);
  os << "end\n";
  return os.str();
}

std::string emit(const TheoryData& th, const OperatorList& ops) {
  std::ostringstream os;
  emit_header(os, th, "operator");
  os << "operators " << ops.size() << "\n";
  for (const auto& op : ops) {
    check_jet(th, op.trunc);
    if (op.kind == OperatorKind::interior) {
      os << "operator int " << op.alpha << ' ' << op.level;
    } else {
      os << "operator boun " << op.level;
    }
    os << " reliable " << reliable_string(op.reliable[0]) << ' ' << reliable_string(op.reliable[1]) << "\n";
    os << "coefficients " << op.coeffs.size() << "\n";
    for (const auto& [key, c] : op.coeffs) {
      os << "coefficient " << key.first << ' ' << key.second << " reliable " << reliable_string(c.reliable())
         << " terms " << c.size() << "\n";
      emit_jet_terms(os, c);
    }
  }
  os << "end\n";
  return os.str();
}

std::string emit(const TheoryData& th, const ResidualReport& rep) {
  std::ostringstream os;
  emit_header(os, th, "report");
  os << "title" << (rep.title().empty() ? "" : " ") << rep.title() << "\n";
  os << "status " << (rep.all_zero() ? "pass" : "fail") << "\n";
  os << "notes " << rep.notes().size() << "\n";
  for (const auto& n : rep.notes()) os << "note" << (n.empty() ? "" : " ") << n << "\n";
  os << "entries " << rep.entries().size() << "\n";
  for (const auto& e : rep.entries()) {
    check_layout(th, e.residual.layout());
    os << "entry " << e.equation << ' ' << index_token(e.index) << " status=" << (e.zero() ? "zero" : "nonzero")
       << " reliable=" << reliable_string(e.residual.prec()) << " terms=" << e.residual.size() << "\n";
    emit_big_terms(os, e.residual);
  }
  os << "end\n";
  return os.str();
}

std::string emit(const SeriesFile& file) {
  return std::visit([&](const auto& v) { return emit(file.theory, v); }, file.value);
}

// ---------------------------------------------------------------------------

namespace {

struct Token {
  std::string_view text;
  int col;
};

class Reader {
 public:
  explicit Reader(std::string_view text) {
    if (text.empty()) throw ParseError(1, 1, "empty file");
    if (text.back() != '\n') {
      int line = 1;
      for (char c : text) line += c == '\n';
      throw ParseError(line, 1, "file must end with a newline");
    }
    std::size_t start = 0;
    while (start < text.size()) {
      std::size_t nl = text.find('\n', start);
      lines_.push_back(text.substr(start, nl - start));
      start = nl + 1;
    }
  }

  int line() const { return static_cast<int>(pos_); }  // 1-based number of the last line read
  bool at_end() const { return pos_ >= lines_.size(); }

  std::vector<Token> next() {
    if (at_end()) throw ParseError(static_cast<int>(lines_.size()) + 1, 1, "unexpected end of file");
    std::string_view s = lines_[pos_++];
    std::vector<Token> out;
    if (s.empty()) throw ParseError(line(), 1, "empty line");
    std::size_t i = 0;
    while (i <= s.size()) {
      std::size_t sp = s.find(' ', i);
      if (sp == std::string_view::npos) sp = s.size();
      if (sp == i) throw ParseError(line(), static_cast<int>(i) + 1, "unexpected whitespace");
      for (std::size_t k = i; k < sp; ++k) {
        if (s[k] == '\t' || s[k] == '\r') throw ParseError(line(), static_cast<int>(k) + 1, "unexpected whitespace");
      }
      out.push_back({s.substr(i, sp - i), static_cast<int>(i) + 1});
      i = sp + 1;
    }
    return out;
  }

  /// Whole line after a keyword, for free text.
  std::string rest_after(std::string_view keyword) {
    if (at_end()) throw ParseError(static_cast<int>(lines_.size()) + 1, 1, "unexpected end of file");
    std::string_view s = lines_[pos_++];
    if (s == keyword) return "";
    if (s.size() > keyword.size() && s.substr(0, keyword.size()) == keyword && s[keyword.size()] == ' ') {
      return std::string(s.substr(keyword.size() + 1));
    }
    throw ParseError(line(), 1, "expected '" + std::string(keyword) + "'");
  }

  [[noreturn]] void fail(const Token& t, const std::string& msg) const { throw ParseError(line(), t.col, msg); }

  std::vector<Token> keyword_line(std::string_view kw, std::size_t args) {
    auto toks = next();
    if (toks[0].text != kw) fail(toks[0], "expected '" + std::string(kw) + "'");
    if (toks.size() != args + 1) {
      fail(toks.back(), "'" + std::string(kw) + "' takes " + std::to_string(args) + " argument(s)");
    }
    return toks;
  }

 private:
  std::vector<std::string_view> lines_;
  std::size_t pos_ = 0;
};

std::optional<long> parse_int(std::string_view s) {
  if (s.empty() || s.size() > 12) return std::nullopt;
  bool neg = s.front() == '-';
  std::string_view d = neg ? s.substr(1) : s;
  if (d.empty() || (d.size() > 1 && d.front() == '0') || (neg && d == "0")) return std::nullopt;
  long v = 0;
  for (char c : d) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + (c - '0');
  }
  return neg ? -v : v;
}

long int_at(Reader& r, const Token& t, long lo, long hi, const char* what) {
  auto v = parse_int(t.text);
  if (!v) r.fail(t, std::string("malformed integer for ") + what);
  if (*v < lo || *v > hi) r.fail(t, std::string(what) + " out of range");
  return *v;
}

Rational rational_at(Reader& r, const Token& t) {
  auto q = parse_rational(t.text);
  if (!q) r.fail(t, "malformed coefficient '" + std::string(t.text) + "' (expected p/q in lowest terms)");
  return *q;
}

int reliable_at(Reader& r, const Token& t) {
  if (t.text == "exact") return kExact;
  return static_cast<int>(int_at(r, t, -1000, kExact - 1, "reliable degree"));
}

int key_value(Reader& r, const Token& t, std::string_view key, long lo, long hi) {
  if (t.text.size() <= key.size() + 1 || t.text.substr(0, key.size()) != key || t.text[key.size()] != '=') {
    r.fail(t, "expected " + std::string(key) + "=<int>");
  }
  Token v{t.text.substr(key.size() + 1), t.col + static_cast<int>(key.size()) + 1};
  return static_cast<int>(int_at(r, v, lo, hi, std::string(key).c_str()));
}

struct VarToken {
  std::string_view kind;
  long alpha, level, exp;
};

VarToken var_at_token(Reader& r, const Token& t) {
  std::string_view s = t.text;
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') r.fail(t, "expected variable [kind,alpha,level,exp]");
  s = s.substr(1, s.size() - 2);
  std::vector<Token> parts;
  std::size_t i = 0;
  while (true) {
    std::size_t c = s.find(',', i);
    std::size_t e = c == std::string_view::npos ? s.size() : c;
    parts.push_back({s.substr(i, e - i), t.col + 1 + static_cast<int>(i)});
    if (c == std::string_view::npos) break;
    i = c + 1;
  }
  if (parts.size() != 4) r.fail(t, "variable needs four fields");
  VarToken v{parts[0].text, 0, 0, 0};
  v.alpha = int_at(r, parts[1], 0, 1000, "alpha");
  v.level = int_at(r, parts[2], 0, 1000, "level");
  v.exp = int_at(r, parts[3], 1, 255, "exponent");
  return v;
}

BigSeries::Term big_term(Reader& r, const std::vector<Token>& toks, const TheoryData& th) {
  const PhaseLayout lay = th.layout();
  BigSeries::Term term{0, {}, rational_at(r, toks[0])};
  if (is_zero(term.coef)) r.fail(toks[0], "zero coefficient");
  if (toks.size() < 2) r.fail(toks[0], "missing eps power");
  if (int_at(r, toks[1], 0, 0, "eps power") != 0) r.fail(toks[1], "series terms carry no eps");
  int last = -1;
  for (std::size_t k = 2; k < toks.size(); ++k) {
    VarToken v = var_at_token(r, toks[k]);
    int idx;
    if (v.kind == "t") {
      if (v.alpha < 1 || v.alpha > th.rank()) r.fail(toks[k], "alpha outside 1..rank");
      if (v.level > lay.max_level) r.fail(toks[k], "level exceeds A_max");
      idx = lay.t_index(static_cast<int>(v.alpha), static_cast<int>(v.level));
    } else if (v.kind == "s") {
      if (v.alpha != 0) r.fail(toks[k], "s variables take alpha 0");
      if (v.level > lay.max_level) r.fail(toks[k], "level exceeds A_max");
      idx = lay.s_index(static_cast<int>(v.level));
    } else {
      r.fail(toks[k], "unknown variable kind '" + std::string(v.kind) + "'");
    }
    if (idx <= last) r.fail(toks[k], "variables out of canonical order");
    last = idx;
    term.mono.set(idx, static_cast<int>(v.exp));
  }
  term.degree = term.mono.total_degree();
  if (term.degree > th.truncation().D_t) r.fail(toks[0], "term degree exceeds D_t");
  return term;
}

JetPoly::Term jet_term(Reader& r, const std::vector<Token>& toks, const JetTruncation& tr) {
  JetPoly::Term term{0, {}, rational_at(r, toks[0])};
  if (is_zero(term.coef)) r.fail(toks[0], "zero coefficient");
  if (toks.size() < 2) r.fail(toks[0], "missing eps power");
  term.eps = static_cast<int>(int_at(r, toks[1], 0, tr.E, "eps power"));
  int last = -1;
  for (std::size_t k = 2; k < toks.size(); ++k) {
    VarToken v = var_at_token(r, toks[k]);
    JetVar x;
    if (v.kind == "v") {
      if (v.alpha < 1 || v.alpha > tr.rank) r.fail(toks[k], "alpha outside 1..rank");
      x = JetVar::v(static_cast<int>(v.alpha), static_cast<int>(v.level));
    } else if (v.kind == "phi" || v.kind == "f") {
      if (v.alpha != 0) r.fail(toks[k], std::string(v.kind) + " variables take alpha 0");
      x = v.kind == "phi" ? JetVar::phi(static_cast<int>(v.level)) : JetVar::f(static_cast<int>(v.level));
    } else {
      r.fail(toks[k], "unknown variable kind '" + std::string(v.kind) + "'");
    }
    if (v.level > tr.J) r.fail(toks[k], "jet order exceeds J");
    int idx = tr.index(x);
    if (idx <= last) r.fail(toks[k], "variables out of canonical order");
    last = idx;
    term.mono.set(idx, static_cast<int>(v.exp));
  }
  return term;
}

BigSeries big_terms(Reader& r, const TheoryData& th, int reliable, long n) {
  std::vector<BigSeries::Term> terms;
  for (long k = 0; k < n; ++k) {
    auto toks = r.next();
    BigSeries::Term t = big_term(r, toks, th);
    if (t.degree > reliable) r.fail(toks[0], "term degree exceeds the reliable degree");
    if (!terms.empty()) {
      const auto& p = terms.back();
      if (!(p.degree < t.degree || (p.degree == t.degree && p.mono < t.mono))) {
        r.fail(toks[0], "terms out of canonical order");
      }
    }
    terms.push_back(std::move(t));
  }
  return BigSeries::from_terms(th.layout(), reliable, std::move(terms));
}

JetPoly jet_terms(Reader& r, const JetTruncation& tr, int reliable, long n, bool eps_free) {
  std::vector<JetPoly::Term> terms;
  JetPoly probe(tr, reliable);
  for (long k = 0; k < n; ++k) {
    auto toks = r.next();
    JetPoly::Term t = jet_term(r, toks, tr);
    if (eps_free && t.eps != 0) r.fail(toks[1], "operator coefficients are eps-free");
    if (probe.level0_degree(t.mono) > std::min(reliable, tr.D_v)) {
      r.fail(toks[0], "order-0 degree exceeds the reliable degree or D_v");
    }
    if (!terms.empty()) {
      const auto& p = terms.back();
      if (!(p.eps < t.eps || (p.eps == t.eps && p.mono < t.mono))) r.fail(toks[0], "terms out of canonical order");
    }
    terms.push_back(std::move(t));
  }
  return JetPoly::from_terms(tr, reliable, std::move(terms));
}

void expect_end(Reader& r) {
  auto toks = r.next();
  if (toks.size() != 1 || toks[0].text != "end") r.fail(toks[0], "expected 'end'");
  if (!r.at_end()) throw ParseError(r.line() + 1, 1, "content after 'end'");
}

TheoryData parse_header(Reader& r, std::string& kind) {
  auto toks = r.keyword_line("format", 1);
  if (toks[1].text != kFormatTag) r.fail(toks[1], "unsupported format '" + std::string(toks[1].text) + "'");
  toks = r.keyword_line("rank", 1);
  int N = static_cast<int>(int_at(r, toks[1], 1, 4, "rank"));
  toks = r.keyword_line("eta", static_cast<std::size_t>(N) * N);
  std::vector<Rational> eta;
  for (std::size_t k = 1; k < toks.size(); ++k) eta.push_back(rational_at(r, toks[k]));
  int eta_line = r.line();
  toks = r.keyword_line("A", N);
  std::vector<Rational> unit;
  for (std::size_t k = 1; k < toks.size(); ++k) unit.push_back(rational_at(r, toks[k]));
  toks = r.keyword_line("truncation", 5);
  Truncation t;
  t.D_t = key_value(r, toks[1], "D_t", 0, 200);
  t.A_max = key_value(r, toks[2], "A_max", 0, 200);
  t.D_v = key_value(r, toks[3], "D_v", 0, 200);
  t.J = key_value(r, toks[4], "J", 0, 200);
  t.E = key_value(r, toks[5], "E", 0, 200);
  int trunc_line = r.line();
  toks = r.keyword_line("kind", 1);
  kind = std::string(toks[1].text);
  if (kind != "bigseries" && kind != "jetpoly" && kind != "operator" && kind != "report") {
    r.fail(toks[1], "unknown kind '" + kind + "'");
  }
  try {
    RationalMatrix m(N, eta);
    return TheoryData(N, m, unit, t);
  } catch (const std::exception& e) {
    std::string msg = e.what();
    int line = msg.find("eta") != std::string::npos || msg.find("symmetric") != std::string::npos ? eta_line
                                                                                                  : trunc_line;
    throw ParseError(line, 1, "inconsistent theory data: " + msg);
  }
}

long count_line(Reader& r, std::string_view kw) {
  auto toks = r.keyword_line(kw, 1);
  return int_at(r, toks[1], 0, 100000000, std::string(kw).c_str());
}

OperatorList parse_operators(Reader& r, const TheoryData& th) {
  const JetTruncation tr = jet_truncation(th);
  long n = count_line(r, "operators");
  OperatorList ops;
  for (long k = 0; k < n; ++k) {
    auto toks = r.next();
    if (toks[0].text != "operator" || toks.size() < 2) r.fail(toks[0], "expected 'operator'");
    LinearDiffOp op;
    op.trunc = tr;
    std::size_t at;
    if (toks[1].text == "int") {
      if (toks.size() != 7) r.fail(toks[0], "interior operator line needs alpha, level and two reliable degrees");
      op.kind = OperatorKind::interior;
      op.alpha = static_cast<int>(int_at(r, toks[2], 1, th.rank(), "alpha"));
      op.level = static_cast<int>(int_at(r, toks[3], 0, th.truncation().A_max, "level"));
      at = 4;
    } else if (toks[1].text == "boun") {
      if (toks.size() != 6) r.fail(toks[0], "boundary operator line needs level and two reliable degrees");
      op.kind = OperatorKind::boundary;
      op.alpha = 0;
      op.level = static_cast<int>(int_at(r, toks[2], 0, th.truncation().A_max, "level"));
      at = 3;
    } else {
      r.fail(toks[1], "unknown operator kind '" + std::string(toks[1].text) + "'");
    }
    if (toks[at].text != "reliable") r.fail(toks[at], "expected 'reliable'");
    op.reliable = {reliable_at(r, toks[at + 1]), reliable_at(r, toks[at + 2])};
    long m = count_line(r, "coefficients");
    for (long c = 0; c < m; ++c) {
      auto ct = r.next();
      if (ct[0].text != "coefficient" || ct.size() != 7 || ct[3].text != "reliable" || ct[5].text != "terms") {
        r.fail(ct[0], "expected 'coefficient <i> <j> reliable <r> terms <n>'");
      }
      int i = static_cast<int>(int_at(r, ct[1], 0, 1000, "power"));
      int j = static_cast<int>(int_at(r, ct[2], 0, 1, "eps slot"));
      if (!op.coeffs.empty() && !(op.coeffs.rbegin()->first < std::make_pair(i, j))) {
        r.fail(ct[1], "coefficients out of canonical order");
      }
      int rel = reliable_at(r, ct[4]);
      long nt = int_at(r, ct[6], 0, 100000000, "term count");
      op.coeffs.emplace(std::make_pair(i, j), jet_terms(r, tr, rel, nt, true));
    }
    ops.push_back(std::move(op));
  }
  return ops;
}

std::vector<int> index_at(Reader& r, const Token& t) {
  std::string_view s = t.text;
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') r.fail(t, "expected index list [i,j,...]");
  s = s.substr(1, s.size() - 2);
  std::vector<int> out;
  if (s.empty()) return out;
  std::size_t i = 0;
  while (true) {
    std::size_t c = s.find(',', i);
    std::size_t e = c == std::string_view::npos ? s.size() : c;
    Token p{s.substr(i, e - i), t.col + 1 + static_cast<int>(i)};
    out.push_back(static_cast<int>(int_at(r, p, -1000000, 1000000, "index")));
    if (c == std::string_view::npos) break;
    i = c + 1;
  }
  return out;
}

ResidualReport parse_report(Reader& r, const TheoryData& th) {
  ResidualReport rep(r.rest_after("title"));
  auto st = r.keyword_line("status", 1);
  if (st[1].text != "pass" && st[1].text != "fail") r.fail(st[1], "status must be pass or fail");
  int status_line = r.line();
  long nn = count_line(r, "notes");
  for (long k = 0; k < nn; ++k) rep.note(r.rest_after("note"));
  long ne = count_line(r, "entries");
  for (long k = 0; k < ne; ++k) {
    auto toks = r.next();
    if (toks[0].text != "entry" || toks.size() != 6) r.fail(toks[0], "expected 'entry <id> [index] status= reliable= terms='");
    std::string id(toks[1].text);
    std::vector<int> idx = index_at(r, toks[2]);
    bool zero;
    if (toks[3].text == "status=zero") {
      zero = true;
    } else if (toks[3].text == "status=nonzero") {
      zero = false;
    } else {
      r.fail(toks[3], "expected status=zero or status=nonzero");
    }
    std::string_view rel = toks[4].text;
    if (rel.substr(0, 9) != "reliable=") r.fail(toks[4], "expected reliable=<int|exact>");
    int reliable = reliable_at(r, Token{rel.substr(9), toks[4].col + 9});
    long nt = key_value(r, toks[5], "terms", 0, 100000000);
    if (zero != (nt == 0)) r.fail(toks[3], "status does not match the number of terms");
    rep.add(std::move(id), std::move(idx), big_terms(r, th, reliable, nt));
  }
  if ((st[1].text == "pass") != rep.all_zero()) throw ParseError(status_line, 8, "status does not match the entries");
  return rep;
}

}  // namespace

SeriesFile parse(std::string_view text) {
  Reader r(text);
  std::string kind;
  TheoryData th = parse_header(r, kind);
  if (kind == "operator") {
    OperatorList ops = parse_operators(r, th);
    expect_end(r);
    return {th, std::move(ops)};
  }
  if (kind == "report") {
    ResidualReport rep = parse_report(r, th);
    expect_end(r);
    return {th, std::move(rep)};
  }
  auto toks = r.keyword_line("reliable", 1);
  int reliable = reliable_at(r, toks[1]);
  long n = count_line(r, "terms");
  if (kind == "bigseries") {
    BigSeries f = big_terms(r, th, reliable, n);
    expect_end(r);
    return {th, std::move(f)};
  }
  JetPoly p = jet_terms(r, jet_truncation(th), reliable, n, false);
  expect_end(r);
  return {th, std::move(p)};
}

namespace {

BigSeries shrink_series(const BigSeries& f, const TheoryData& to) {
  const PhaseLayout from = f.layout(), lay = to.layout();
  std::vector<BigSeries::Term> out;
  for (const auto& t : f.terms()) {
    BigMonomial m;
    bool keep = true;
    for (int idx = 0; idx < from.num_vars() && keep; ++idx) {
      int e = t.mono[idx];
      if (e == 0) continue;
      int level = from.level_of(idx);
      if (level > lay.max_level) {
        keep = false;
        break;
      }
      m.set(from.is_s(idx) ? lay.s_index(level) : lay.t_index(from.alpha_of(idx), level), e);
    }
    if (keep) out.push_back({t.degree, m, t.coef});
  }
  return BigSeries::from_terms(lay, f.prec(), std::move(out)).truncated(to.truncation().D_t);
}

JetPoly shrink_jet(const JetPoly& p, const JetTruncation& to) {
  const JetTruncation& from = p.truncation();
  std::vector<JetPoly::Term> out;
  for (const auto& t : p.terms()) {
    if (t.eps > to.E) continue;
    JetMonomial m;
    bool keep = true;
    for (int idx = 0; idx < from.num_vars(); ++idx) {
      int e = t.mono[idx];
      if (e == 0) continue;
      JetVar x = from.var_at(idx);
      if (x.order > to.J) {
        keep = false;
        break;
      }
      m.set(to.index(x), e);
    }
    if (keep) out.push_back({t.eps, m, t.coef});
  }
  return JetPoly::from_terms(to, p.reliable(), std::move(out));
}

}  // namespace

SeriesFile restrict_truncation(const SeriesFile& file, const Truncation& to) {
  if (!file.theory.truncation().dominates(to)) {
    throw DomainError("truncation overrides may only lower the parameters stored in the file");
  }
  TheoryData th = file.theory.with_truncation(to);
  const JetTruncation jt = jet_truncation(th);
  struct Visitor {
    const TheoryData& th;
    const JetTruncation& jt;
    FileValue operator()(const BigSeries& f) const { return shrink_series(f, th); }
    FileValue operator()(const JetPoly& p) const { return shrink_jet(p, jt); }
    FileValue operator()(const OperatorList& ops) const {
      OperatorList out;
      for (const auto& op : ops) {
        if (op.level > th.truncation().A_max) continue;
        LinearDiffOp o = op;
        o.trunc = jt;
        o.coeffs.clear();
        for (const auto& [k, c] : op.coeffs) {
          JetPoly s = shrink_jet(c, jt);
          if (!s.is_zero()) o.coeffs.emplace(k, s);
        }
        out.push_back(std::move(o));
      }
      return out;
    }
    FileValue operator()(const ResidualReport& rep) const {
      ResidualReport out(rep.title());
      for (const auto& n : rep.notes()) out.note(n);
      for (const auto& e : rep.entries()) out.add(e.equation, e.index, shrink_series(e.residual, th));
      return out;
    }
  };
  return {th, std::visit(Visitor{th, jt}, file.value)};
}

SeriesFile read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, 0, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace ottr
