// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "common.hpp"
#include "oracles.hpp"
#include "ottr/laxpde.hpp"
#include "ottr/serialize.hpp"

using namespace ottr;
using ottr::testing::mono;
using ottr::testing::random_small_poly;
using ottr::testing::random_rational;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void info(const std::string& s) {
    if (pass) detail += (detail.empty() ? "" : "; ") + s;
  }
};

int failures = 0;

void criterion(int n, const char* title, const std::function<Outcome()>& body) {
  auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  std::printf("%s criterion %d: %s [%s] (%.1fs)\n", o.pass ? "PASS" : "FAIL", n, title, o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(OTTR_CLI) + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string n_of(const ResidualReport& r) {
  return std::to_string(r.entries().size()) + " residuals zero through degree " + std::to_string(r.min_reliable());
}

}  // namespace

int main() {
  const TheoryData th = TheoryData::rank_one();
  const JetTruncation tr = jet_truncation(th);
  const PhaseLayout lay = th.layout();
  const JetPoly zero(tr), v = JetPoly::variable(tr, JetVar::v(1)), vx = JetPoly::variable(tr, JetVar::v(1, 1));
  const JetPoly phi = JetPoly::variable(tr, JetVar::phi());
  const JetPoly phi3 = phi * phi * phi * make_rational(1, 6);
  BigSeries F0, F0o;

  criterion(1, "closed genus-0 axioms for the Witten potential", [&] {
    Outcome o;
    F0 = solve_closed_order_by_order(witten_seed(th), th);
    ResidualReport rep = validate_closed_genus0(F0, th);
    o.require(F0.prec() == th.truncation().D_t, "potential known through D_t");
    o.require(rep.all_zero(), rep.summary());
    o.info(n_of(rep));
    return o;
  });

  criterion(2, "principal hierarchy is dispersionless KdV", [&] {
    Outcome o;
    JetPoly t1 = principal_flow(F0, 1, 1, th)[0];
    JetPoly t0 = principal_flow(F0, 1, 0, th)[0];
    o.require(equal_up_to_reliable(t1, v * vx), "t1 flow = v v_x, got " + to_string(t1));
    o.require(equal_up_to_reliable(t0, vx), "t0 flow = v_x, got " + to_string(t0));
    o.require(std::min(t0.reliable(), t1.reliable()) >= 4, "flows reliable through degree 4");
    o.info("t1: " + to_string(t1) + ", t0: " + to_string(t0) + ", reliable through v-degree " +
           std::to_string(std::min(t0.reliable(), t1.reliable())));
    return o;
  });

  criterion(3, "open genus-0 axioms and normalization", [&] {
    Outcome o;
    F0o = solve_open_order_by_order(F0, open_seed(th), th);
    ResidualReport rep = validate_open_genus0(F0, F0o, th);
    o.require(rep.all_zero(), rep.summary());
    o.require(open_normalization_residual(F0o, th).is_zero(), "normalization");
    o.info(n_of(rep) + ", normalization exact");
    return o;
  });

  OpenContext ctx(th, F0, F0o);
  std::mt19937 rng(2024);
  JetPoly rnd = random_small_poly(rng, tr, 3);
  std::vector<std::pair<std::string, JetPoly>> gos{{"0", zero}, {"phi^3/6", phi3}, {"v*phi", v * phi}, {"random", rnd}};
  std::vector<BigSeries> solved, formula;

  criterion(4, "open genus-1 solver agrees with the closed formula", [&] {
    Outcome o;
    for (const auto& [name, Go] : gos) {
      solved.push_back(solve_F1o(ctx, Go));
      formula.push_back(F1o_formula(ctx, Go));
      const BigSeries &a = solved.back(), &b = formula.back();
      o.require(equal_up_to_prec(a, b), "Go = " + name);
      o.require(std::min(a.prec(), b.prec()) >= 6, "Go = " + name + " reliable through 6");
      o.info("Go=" + name + " equal through degree " + std::to_string(std::min(a.prec(), b.prec())));
    }
    o.info("random Go = " + to_string(rnd));
    return o;
  });

  criterion(5, "both genus-1 constructions satisfy the open genus-1 TRRs", [&] {
    Outcome o;
    for (std::size_t k = 0; k < gos.size(); ++k) {
      ResidualReport a = validate_open_genus1(ctx, solved.at(k)), b = validate_open_genus1(ctx, formula.at(k));
      o.require(a.all_zero(), "solver, Go = " + gos[k].first + ": " + a.summary());
      o.require(b.all_zero(), "formula, Go = " + gos[k].first + ": " + b.summary());
    }
    o.info(std::to_string(2 * gos.size()) + " reports zero");
    return o;
  });

  criterion(6, "closed genus-1 formula, rank 1 and rank-2 direct sum", [&] {
    Outcome o;
    BigSeries F1 = closed_F1_formula(F0, zero, th);
    ResidualReport r1 = validate_closed_genus1(F0, F1, th);
    o.require(r1.all_zero(), "rank 1: " + r1.summary());
    int t0 = lay.t_index(1, 0);
    BigSeries M = partial(partial(partial(F0, t0), t0), t0);
    BigSeries X = M - BigSeries::constant(lay, Rational(1)), lg(lay, M.prec()), pw = BigSeries::constant(lay, Rational(1));
    for (int k = 1; k <= M.prec(); ++k) {
      pw = pw * X;
      lg += pw * make_rational(k % 2 ? 1 : -1, k);
    }
    BigMonomial t1 = mono({{lay.t_index(1, 1), 1}});
    o.require(F1.coefficient(t1) == make_rational(1, 24), "t1 coefficient 1/24");
    o.require(lg.coefficient(t1) / 24 == F1.coefficient(t1), "direct log of M");

    TheoryData th2(2, RationalMatrix::identity(2), {1, 1}, th.truncation());
    BigSeries S0 = embed_component(F0, th2.layout(), 1) + embed_component(F0, th2.layout(), 2);
    ResidualReport g0 = validate_closed_genus0(S0, th2);
    o.require(g0.all_zero(), "rank 2 genus 0: " + g0.summary());
    BigSeries S1 = closed_F1_formula(S0, JetPoly(jet_truncation(th2)), th2);
    ResidualReport r2 = validate_closed_genus1(S0, S1, th2);
    o.require(r2.all_zero(), "rank 2: " + r2.summary());
    o.info("rank 1: " + n_of(r1) + ", t1 coefficient " + format_rational(F1.coefficient(t1)) + "; rank 2: " + n_of(r2));
    return o;
  });

  criterion(7, "Q-polynomials", [&] {
    Outcome o;
    JetTruncation wide{1, 8, 6, 6};
    auto f = [&](int i) { return JetPoly::variable(wide, JetVar::f(i)); };
    JetPoly e = JetPoly::constant(wide, 1, 1);
    o.require(qpoly(0, wide) == JetPoly::constant(wide, 1), "Q0 = 1");
    o.require(qpoly(2, wide) == f(1) * f(1) + e * f(2), "Q2");
    o.require(qpoly(3, wide) == f(1) * f(1) * f(1) + JetPoly::constant(wide, 3) * e * f(1) * f(2) + e * e * f(3), "Q3");
    std::mt19937 g(7);
    std::uniform_int_distribution<int> small(1, 9);
    int checks = 0;
    for (int trial = 0; trial < 5; ++trial) {
      oracles::XSeries fx(14);
      for (int k = 1; k <= 4; ++k) fx[k] = random_rational(g);
      Rational eps = make_rational(small(g), small(g));
      for (int i = 0; i <= 6; ++i, ++checks) {
        o.require(oracles::exponential_identity(qpoly(i, wide), i, fx, eps), "exponential identity i=" + std::to_string(i));
      }
    }
    for (int i = 0; i <= 10; ++i) {
      JetPoly r = qpoly_lemma_residual(i, tr);
      o.require(r.eps_slice(0).is_zero() && r.eps_slice(1).is_zero(), "lemma i=" + std::to_string(i));
    }
    o.info(std::to_string(checks) + " exponential identities, lemma i<=10, Q3 = " + to_string(qpoly(3, wide)));
    return o;
  });

  criterion(8, "open PDEs through eps^1 and perturbation sensitivity", [&] {
    Outcome o;
    for (const auto& [name, Go] : {std::pair{std::string("0"), zero}, std::pair{std::string("phi^3/6"), phi3}}) {
      BigSeries F1o = F1o_formula(ctx, Go);
      auto ops = build_operators(ctx, Go);
      ResidualReport rep = check_open_pde(ctx, F1o, ops);
      o.require(rep.all_zero(), "Go = " + name + ": " + rep.summary());
      PerturbationSweep sw = perturbation_sweep(ctx, F1o, ops, rep.min_reliable());
      o.require(sw.detected == sw.tested && sw.tested > 0, "perturbations detected, Go = " + name);
      o.info("Go=" + name + ": " + n_of(rep) + ", " + std::to_string(sw.detected) + "/" + std::to_string(sw.tested) +
             " perturbations detected");
    }
    return o;
  });

  criterion(9, "wave-function flow generator cross-check", [&] {
    Outcome o;
    PstResult pst = pst_generator(th);
    o.require(equal_up_to_prec(pst.F0o, F0o), "genus-0 part matches the open solver");
    JetPoly Go = extract_Go(pst.F1o, th);
    o.require(equal_up_to_prec(pst.F1o, F1o_formula(ctx, Go)), "genus-1 part matches the formula at its Go");
    o.require(validate_open_genus1(ctx, pst.F1o).all_zero(), "genus-1 part satisfies the TRRs");
    o.info("F0o equal through degree " + std::to_string(std::min(pst.F0o.prec(), F0o.prec())) + ", F1o through " +
           std::to_string(pst.F1o.prec()) + ", extracted Go = " + to_string(Go));
    return o;
  });

  criterion(10, "serialization, determinism, CLI exit codes", [&] {
    Outcome o;
    BigSeries F1o = formula.at(1);
    std::vector<std::string> texts{emit(th, F0), emit(th, F0o), emit(th, F1o), emit(th, phi3),
                                   emit(th, OperatorList(build_operators(ctx, phi3))),
                                   emit(th, validate_open_genus1(ctx, BigSeries(lay, 8)))};
    for (const auto& t : texts) o.require(emit(parse(t)) == t, "round trip");
    std::string fx = slurp(std::string(OTTR_FIXTURES) + "/witten_F0.txt");
    o.require(emit(parse(fx)) == fx, "fixture round trip");
    o.require(emit(th, validate_open_genus0(F0, F0o, th, 1)) == emit(th, validate_open_genus0(F0, F0o, th, 4)),
              "open genus-0 report, 1 vs 4 threads");
    o.require(emit(th, OperatorList(build_operators(ctx, phi3, 1))) == emit(th, OperatorList(build_operators(ctx, phi3, 4))),
              "operators, 1 vs 4 threads");
    int pass = run_cli("validate-genus0 " + std::string(OTTR_FIXTURES) + "/witten_F0.txt");
    int fail = run_cli("validate-genus0 " + std::string(OTTR_FIXTURES) + "/witten_F0_corrupted.txt");
    o.require(pass == 0, "passing fixture exit 0, got " + std::to_string(pass));
    o.require(fail == 1, "corrupted fixture exit 1, got " + std::to_string(fail));
    o.info(std::to_string(texts.size() + 1) + " byte-identical round trips, thread-count invariant, exit codes " +
           std::to_string(pass) + "/" + std::to_string(fail));
    return o;
  });

  std::printf("%s: %d of 10 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
