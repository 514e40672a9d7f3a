// Command-line front end: example generation, validation, genus-1
// derivation, operator construction and residual checks.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ottr/genus0.hpp"
#include "ottr/genus1.hpp"
#include "ottr/laxpde.hpp"
#include "ottr/serialize.hpp"

using namespace ottr;

namespace {

enum Exit { kPass = 0, kResidual = 1, kInput = 2, kInternal = 3 };

struct Overrides {
  std::optional<int> D_t, A_max, D_v, J, E;
  bool any() const { return D_t || A_max || D_v || J || E; }
  Truncation apply(Truncation t) const {
    if (D_t) t.D_t = *D_t;
    if (A_max) t.A_max = *A_max;
    if (D_v) t.D_v = *D_v;
    if (J) t.J = *J;
    if (E) t.E = *E;
    return t;
  }
};

Overrides g_over;
int g_threads = 1;

SeriesFile load(const std::string& path) {
  SeriesFile f = read_file(path);
  if (g_over.any()) f = restrict_truncation(f, g_over.apply(f.theory.truncation()));
  return f;
}

template <class T>
const T& value_as(const SeriesFile& f, const std::string& path) {
  const T* v = std::get_if<T>(&f.value);
  if (!v) throw DomainError(path + ": unexpected file kind '" + f.kind() + "'");
  return *v;
}

void same_theory(const SeriesFile& a, const SeriesFile& b, const std::string& what) {
  if (!(a.theory == b.theory)) throw DomainError(what + ": inputs carry different theory data or truncations");
}

int finish(const ResidualReport& rep, const TheoryData& th, const std::string& report_path) {
  std::cout << rep.summary() << "\n";
  for (const auto& e : rep.entries()) {
    if (!e.zero()) std::cout << "  nonzero: " << e.equation << index_string(e.index) << "\n";
  }
  if (!report_path.empty()) write_file(report_path, emit(th, rep));
  return rep.all_zero() ? kPass : kResidual;
}

JetPoly load_go(const std::string& path, const TheoryData& th) {
  if (path.empty()) return JetPoly(jet_truncation(th));
  SeriesFile f = load(path);
  if (!(f.theory == th)) throw DomainError(path + ": theory data differs from the genus-0 inputs");
  return value_as<JetPoly>(f, path);
}

std::string out_path(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / name).string();
}

void write(const std::string& path, const std::string& text) {
  write_file(path, text);
  std::cout << "wrote " << path << "\n";
}

TheoryData direct_sum_theory(Truncation t) {
  return TheoryData(2, RationalMatrix::identity(2), {Rational(1), Rational(1)}, t);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open/closed descendent potentials: solvers and residual checks"};
  app.require_subcommand(1);
  app.add_option("--threads", g_threads, "worker threads for residual checks")->check(CLI::Range(1, 256));
  app.add_option("--D_t", g_over.D_t, "lower the degree truncation of every input");
  app.add_option("--A_max", g_over.A_max, "lower the maximal level of every input");
  app.add_option("--D_v", g_over.D_v, "lower the jet-polynomial degree bound");
  app.add_option("--J", g_over.J, "lower the jet order bound");
  app.add_option("--E", g_over.E, "lower the eps bound");

  std::string name, out = ".", seed_path, go_path, report, method = "solve";
  std::string f0_path, f0o_path, f1_path, a_path, b_path;
  int degree = 8, index = 0;
  bool closed = false, lemma = false, perturb = false;

  auto* gen = app.add_subcommand("gen-example", "generate a fixture");
  gen->add_option("name", name)->required()->check(CLI::IsMember({"witten-rank1", "open-rank1", "direct-sum-rank2"}));
  gen->add_option("--degree", degree, "degree truncation D_t")->check(CLI::Range(1, 40));
  gen->add_option("--seed", seed_path, "jetpoly file replacing the default seed");
  gen->add_option("--out", out, "output directory");

  auto* vg0 = app.add_subcommand("validate-genus0", "check the closed genus-0 equations");
  vg0->add_option("F0", f0_path)->required();
  vg0->add_option("--report", report);

  auto* vo = app.add_subcommand("validate-open", "check the open genus-0 equations");
  vo->add_option("F0", f0_path)->required();
  vo->add_option("F0o", f0o_path)->required();
  vo->add_option("--report", report);

  auto* dg1 = app.add_subcommand("derive-genus1", "compute F1o (or closed F1 with --closed)");
  dg1->add_option("F0", f0_path)->required();
  dg1->add_option("F0o", f0o_path);
  dg1->add_option("--go", go_path, "jetpoly file with the small-phase-space part (default 0)");
  dg1->add_option("--method", method)->check(CLI::IsMember({"solve", "formula"}));
  dg1->add_flag("--closed", closed);
  dg1->add_option("--out", f1_path)->required();

  auto* cg1 = app.add_subcommand("check-genus1", "check the genus-1 equations");
  cg1->add_option("F0", f0_path)->required();
  cg1->add_option("files", a_path, "F0o then F1o, or F1 with --closed")->required();
  cg1->add_option("F1o", b_path);
  cg1->add_flag("--closed", closed);
  cg1->add_option("--report", report);

  auto* qp = app.add_subcommand("qpoly", "print Q_i");
  qp->add_option("i", index)->required()->check(CLI::Range(0, 40));
  Truncation qtr;
  qp->add_option("--J", qtr.J)->check(CLI::Range(1, 40));
  qp->add_option("--E", qtr.E)->check(CLI::Range(0, 40));
  qp->add_flag("--lemma", lemma, "print the residual against the two leading terms");
  qp->add_option("--out", f1_path);

  auto* bo = app.add_subcommand("build-operators", "build the interior and boundary operators");
  bo->add_option("F0", f0_path)->required();
  bo->add_option("F0o", f0o_path)->required();
  bo->add_option("--go", go_path);
  bo->add_option("--out", f1_path)->required();

  auto* t32 = app.add_subcommand("check-theorem32", "check the open PDEs through eps^1");
  t32->add_option("F0", f0_path)->required();
  t32->add_option("F0o", f0o_path)->required();
  t32->add_option("F1o", f1_path)->required();
  t32->add_flag("--perturb", perturb, "also run the single-coefficient perturbation sweep");
  t32->add_option("--report", report);

  auto* pst = app.add_subcommand("gen-pst", "integrate the KdV wave-function flows");
  pst->add_option("--degree", degree)->check(CLI::Range(1, 40));
  pst->add_option("--out", out);

  auto* cmp = app.add_subcommand("compare", "compare two series up to the common reliable degree");
  cmp->add_option("A", a_path)->required();
  cmp->add_option("B", b_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kPass : kInput;
  }

  try {
    if (*gen) {
      Truncation t;
      t.D_t = degree;
      TheoryData th = name == "direct-sum-rank2" ? direct_sum_theory(t) : TheoryData::rank_one(t);
      JetPoly seed = witten_seed(th);
      if (!seed_path.empty()) seed = load_go(seed_path, th);
      if (name == "open-rank1") {
        BigSeries F0 = solve_closed_order_by_order(witten_seed(th), th);
        SolveLog log;
        BigSeries F0o = solve_open_order_by_order(F0, seed_path.empty() ? open_seed(th) : seed, th, &log);
        write(out_path(out, "F0.txt"), emit(th, F0));
        write(out_path(out, "F0o.txt"), emit(th, F0o));
      } else if (name == "direct-sum-rank2" && seed_path.empty()) {
        TheoryData one = TheoryData::rank_one(t);
        BigSeries f = solve_closed_order_by_order(witten_seed(one), one);
        BigSeries F0 = embed_component(f, th.layout(), 1) + embed_component(f, th.layout(), 2);
        write(out_path(out, "F0.txt"), emit(th, F0));
      } else {
        SolveLog log;
        BigSeries F0 = solve_closed_order_by_order(seed, th, &log);
        write(out_path(out, "F0.txt"), emit(th, F0));
        if (!log.unique()) std::cout << "note: free coefficients were set to 0\n";
      }
      return kPass;
    }
    if (*vg0) {
      SeriesFile f = load(f0_path);
      return finish(validate_closed_genus0(value_as<BigSeries>(f, f0_path), f.theory, g_threads), f.theory, report);
    }
    if (*vo) {
      SeriesFile a = load(f0_path), b = load(f0o_path);
      same_theory(a, b, "validate-open");
      return finish(validate_open_genus0(value_as<BigSeries>(a, f0_path), value_as<BigSeries>(b, f0o_path), a.theory,
                                         g_threads),
                    a.theory, report);
    }
    if (*dg1) {
      SeriesFile a = load(f0_path);
      const TheoryData& th = a.theory;
      const BigSeries& F0 = value_as<BigSeries>(a, f0_path);
      JetPoly G = load_go(go_path, th);
      if (closed) {
        if (method != "formula" && dg1->count("--method")) {
          throw DomainError("closed genus 1 is only available through the formula (--method formula)");
        }
        write(f1_path, emit(th, closed_F1_formula(F0, G, th)));
        return kPass;
      }
      if (f0o_path.empty()) throw DomainError("derive-genus1 needs F0o unless --closed is given");
      SeriesFile b = load(f0o_path);
      same_theory(a, b, "derive-genus1");
      OpenContext ctx(th, F0, value_as<BigSeries>(b, f0o_path));
      BigSeries F1o = method == "solve" ? solve_F1o(ctx, G) : F1o_formula(ctx, G);
      write(f1_path, emit(th, F1o));
      return kPass;
    }
    if (*cg1) {
      SeriesFile a = load(f0_path), b = load(a_path);
      same_theory(a, b, "check-genus1");
      const TheoryData& th = a.theory;
      const BigSeries& F0 = value_as<BigSeries>(a, f0_path);
      if (closed) return finish(validate_closed_genus1(F0, value_as<BigSeries>(b, a_path), th), th, report);
      if (b_path.empty()) throw DomainError("check-genus1 needs F0 F0o F1o (or --closed F0 F1)");
      SeriesFile c = load(b_path);
      same_theory(a, c, "check-genus1");
      OpenContext ctx(th, F0, value_as<BigSeries>(b, a_path));
      return finish(validate_open_genus1(ctx, value_as<BigSeries>(c, b_path), g_threads), th, report);
    }
    if (*qp) {
      TheoryData th = TheoryData::rank_one(qtr);
      JetTruncation tr = jet_truncation(th);
      JetPoly q = lemma ? qpoly_lemma_residual(index, tr) : qpoly(index, tr);
      std::cout << (lemma ? "lemma residual " : "Q_") << index << " = " << to_string(q) << "\n";
      if (!f1_path.empty()) write(f1_path, emit(th, q));
      if (lemma) return q.eps_slice(0).is_zero() && q.eps_slice(1).is_zero() ? kPass : kResidual;
      return kPass;
    }
    if (*bo) {
      SeriesFile a = load(f0_path), b = load(f0o_path);
      same_theory(a, b, "build-operators");
      OpenContext ctx(a.theory, value_as<BigSeries>(a, f0_path), value_as<BigSeries>(b, f0o_path));
      OperatorList ops = build_operators(ctx, load_go(go_path, a.theory), g_threads);
      write(f1_path, emit(a.theory, ops));
      return kPass;
    }
    if (*t32) {
      SeriesFile a = load(f0_path), b = load(f0o_path), c = load(f1_path);
      same_theory(a, b, "check-theorem32");
      same_theory(a, c, "check-theorem32");
      const TheoryData& th = a.theory;
      OpenContext ctx(th, value_as<BigSeries>(a, f0_path), value_as<BigSeries>(b, f0o_path));
      const BigSeries& F1o = value_as<BigSeries>(c, f1_path);
      OperatorList ops = build_operators(ctx, extract_Go(F1o, th), g_threads);
      ResidualReport rep = check_open_pde(ctx, F1o, ops);
      rep.merge(check_pde_forms(ctx, F1o, ops));
      int rc = finish(rep, th, report);
      if (perturb) {
        PerturbationSweep sw = perturbation_sweep(ctx, F1o, ops, rep.min_reliable());
        std::cout << "perturbations: " << sw.detected << " of " << sw.tested << " detected through degree "
                  << sw.checked_through << "\n";
        if (sw.detected != sw.tested && rc == kPass) rc = kResidual;
      }
      return rc;
    }
    if (*pst) {
      Truncation t;
      t.D_t = degree;
      TheoryData th = TheoryData::rank_one(t);
      PstResult r = pst_generator(th);
      write(out_path(out, "F0.txt"), emit(th, r.F0));
      write(out_path(out, "F0o.txt"), emit(th, r.F0o));
      write(out_path(out, "F1o.txt"), emit(th, r.F1o));
      return kPass;
    }
    if (*cmp) {
      SeriesFile a = load(a_path), b = load(b_path);
      same_theory(a, b, "compare");
      const BigSeries& x = value_as<BigSeries>(a, a_path);
      const BigSeries& y = value_as<BigSeries>(b, b_path);
      BigSeries d = x - y;
      if (d.is_zero()) {
        std::cout << "equal through degree " << (d.is_exact() ? std::string("exact") : std::to_string(d.prec()))
                  << "\n";
        return kPass;
      }
      std::cout << "differ at degree " << d.terms().front().degree << " (" << d.size() << " coefficients)\n";
      return kResidual;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kInput;
  } catch (const DomainError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const MetadataMismatch& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const TruncationOverflow& e) {
    std::cerr << "truncation error: " << e.what() << "\n";
    return kInput;
  } catch (const InconsistentSystem& e) {
    std::cerr << "inconsistent system at degree " << e.degree() << " (" << e.equation() << "): " << e.what() << "\n";
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
