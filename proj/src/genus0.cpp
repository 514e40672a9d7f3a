#include "ottr/genus0.hpp"

#include <functional>
#include <memory>

#include "ottr/parallel.hpp"

namespace ottr {

namespace {

void check_level(const TheoryData& th, int level) {
  if (level < 0 || level > th.truncation().A_max) {
    throw DomainError("level " + std::to_string(level) + " outside window 0.." + std::to_string(th.truncation().A_max));
  }
}

void check_alpha(const TheoryData& th, int alpha) {
  if (alpha < 1 || alpha > th.rank()) throw DomainError("alpha outside 1..N");
}

std::string window_note(const TheoryData& th) {
  const auto& t = th.truncation();
  return "window: N=" + std::to_string(th.rank()) + " levels 0.." + std::to_string(t.A_max) +
         " (recursion levels 0.." + std::to_string(t.A_max - 1) + "), D_t=" + std::to_string(t.D_t);
}

}  // namespace

std::vector<std::vector<int>> trr0_indices(const TheoryData& th) {
  std::vector<std::vector<int>> out;
  const int N = th.rank(), A = th.truncation().A_max;
  for (int al = 1; al <= N; ++al) {
    for (int a = 0; a < A; ++a) {
      for (int be = 1; be <= N; ++be) {
        for (int b = 0; b <= A; ++b) {
          for (int ga = 1; ga <= N; ++ga) {
            for (int c = 0; c <= A; ++c) {
              if (std::make_pair(be, b) > std::make_pair(ga, c)) continue;
              out.push_back({al, a, be, b, ga, c});
            }
          }
        }
      }
    }
  }
  return out;
}

std::vector<std::vector<int>> fourth_indices(const TheoryData& th) {
  std::vector<std::vector<int>> out;
  const int N = th.rank(), A = th.truncation().A_max;
  for (int al = 1; al <= N; ++al) {
    for (int a = 0; a < A; ++a) {
      for (int be = 1; be <= N; ++be) {
        for (int b = 0; b < A; ++b) out.push_back({al, a, be, b});
      }
    }
  }
  return out;
}

namespace {

/// Evaluates the listed residual producers in parallel, keeping order.
ResidualReport collect(std::string title, const std::vector<std::function<Residual<Rational>()>>& jobs, int threads) {
  std::vector<std::optional<Residual<Rational>>> slots(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t i) { slots[i] = jobs[i](); });
  ResidualReport report(std::move(title));
  for (auto& s : slots) report.add(*s);
  return report;
}

}  // namespace

ResidualReport validate_closed_genus0(const BigSeries& F0, const TheoryData& th, int threads) {
  Derivatives<Rational> F(F0);
  std::vector<std::function<Residual<Rational>()>> jobs;
  jobs.push_back([&] { return closed_string(F, th); });
  if (th.truncation().A_max >= 1) jobs.push_back([&] { return closed_dilaton(F, th); });
  for (const auto& i : trr0_indices(th)) {
    jobs.push_back([&, i] { return closed_trr0(F, th, i[0], i[1], i[2], i[3], i[4], i[5]); });
  }
  for (const auto& i : fourth_indices(th)) {
    jobs.push_back([&, i] { return closed_fourth(F, th, i[0], i[1], i[2], i[3]); });
  }
  ResidualReport r = collect("closed genus 0", jobs, threads);
  r.note(window_note(th));
  return r;
}

BigSeries open_normalization_residual(const BigSeries& F0o, const TheoryData& th) {
  BigSeries d = partial(t11_partial(F0o, 0, th), BigVar::s(0));
  BigSeries r = restrict_level0(d) - BigSeries::constant(F0o.layout(), Rational(1));
  return r;
}

ResidualReport validate_open_genus0(const BigSeries& F0, const BigSeries& F0o, const TheoryData& th, int threads) {
  Derivatives<Rational> D0(F0);
  Derivatives<Rational> Do(F0o);
  const PhaseLayout lay = th.layout();
  std::vector<std::function<Residual<Rational>()>> jobs;
  jobs.push_back([&] { return open_string(Do, th); });
  if (lay.max_level >= 1) jobs.push_back([&] { return open_dilaton(Do, th); });
  for (int al = 1; al <= th.rank(); ++al) {
    for (int p = 0; p < lay.max_level; ++p) {
      for (int x = 0; x < lay.num_vars(); ++x) jobs.push_back([&, al, p, x] { return open_trr_t(D0, Do, th, al, p, x); });
    }
  }
  for (int p = 0; p < lay.max_level; ++p) {
    for (int x = 0; x < lay.num_vars(); ++x) jobs.push_back([&, p, x] { return open_trr_s(Do, p, x); });
  }
  jobs.push_back([&] { return Residual<Rational>{"normalization", {}, 2, open_normalization_residual(F0o, th)}; });
  ResidualReport r = collect("open genus 0", jobs, threads);
  r.note(window_note(th));
  r.note("open TRR checked component-wise along every window variable");
  return r;
}

JetPoly omega(const BigSeries& F0, int alpha, int a, int beta, int b, const TheoryData& th) {
  check_alpha(th, alpha);
  check_alpha(th, beta);
  check_level(th, a);
  check_level(th, b);
  BigSeries d = partial(partial(F0, BigVar::t(alpha, a)), BigVar::t(beta, b));
  return restrict_small(d, jet_truncation(th));
}

JetPoly gamma(const BigSeries& F0o, int alpha, int a, const TheoryData& th) {
  check_alpha(th, alpha);
  check_level(th, a);
  return restrict_small(partial(F0o, BigVar::t(alpha, a)), jet_truncation(th));
}

JetPoly delta(const BigSeries& F0o, int a, const TheoryData& th) {
  check_level(th, a);
  return restrict_small(partial(F0o, BigVar::s(a)), jet_truncation(th));
}

TwoPointTable two_point_table(const BigSeries& F0, const std::optional<BigSeries>& F0o, const TheoryData& th) {
  TwoPointTable t;
  const int N = th.rank(), A = th.truncation().A_max;
  for (int al = 1; al <= N; ++al) {
    for (int a = 0; a <= A; ++a) {
      for (int be = 1; be <= N; ++be) {
        for (int b = 0; b <= A; ++b) t.omega.emplace(std::make_tuple(al, a, be, b), omega(F0, al, a, be, b, th));
      }
      if (F0o) t.gamma.emplace(std::make_pair(al, a), gamma(*F0o, al, a, th));
    }
  }
  if (F0o) {
    for (int a = 0; a <= A; ++a) t.delta.emplace(a, delta(*F0o, a, th));
  }
  return t;
}

std::vector<JetPoly> principal_flow(const BigSeries& F0, int beta, int b, const TheoryData& th) {
  check_alpha(th, beta);
  check_level(th, b);
  std::vector<JetPoly> dom;
  for (int mu = 1; mu <= th.rank(); ++mu) dom.push_back(dx(omega(F0, mu, 0, beta, b, th)));
  std::vector<JetPoly> out;
  for (int al = 1; al <= th.rank(); ++al) {
    JetPoly acc(jet_truncation(th));
    for (int mu = 1; mu <= th.rank(); ++mu) {
      const Rational& e = th.eta_inv()(al - 1, mu - 1);
      if (!is_zero(e)) acc += dom[mu - 1] * e;
    }
    out.push_back(std::move(acc));
  }
  return out;
}

ExtendedFlow extended_flow_t(const BigSeries& F0, const BigSeries& F0o, int beta, int b, const TheoryData& th) {
  return {principal_flow(F0, beta, b, th), dx(gamma(F0o, beta, b, th))};
}

ExtendedFlow extended_flow_s(const BigSeries& F0o, int b, const TheoryData& th) {
  std::vector<JetPoly> zero(th.rank(), JetPoly(jet_truncation(th)));
  return {zero, dx(delta(F0o, b, th))};
}

ResidualReport check_two_point_recovery(const BigSeries& F0, const std::optional<BigSeries>& F0o,
                                        const TheoryData& th) {
  ResidualReport r("two-point recovery");
  auto v = vtop(F0, th);
  std::optional<BigSeries> phi;
  if (F0o) phi = phitop(*F0o, th);
  JetEvaluator ev(th, v, phi);
  const int N = th.rank(), A = th.truncation().A_max;
  for (int al = 1; al <= N; ++al) {
    for (int a = 0; a <= A; ++a) {
      for (int be = 1; be <= N; ++be) {
        for (int b = 0; b <= A; ++b) {
          if (std::make_pair(al, a) > std::make_pair(be, b)) continue;
          BigSeries d = partial(partial(F0, BigVar::t(al, a)), BigVar::t(be, b));
          r.add("omega", {al, a, be, b}, d - ev.eval(omega(F0, al, a, be, b, th)));
        }
      }
      if (F0o) r.add("gamma", {al, a}, partial(*F0o, BigVar::t(al, a)) - ev.eval(gamma(*F0o, al, a, th)));
    }
  }
  if (F0o) {
    for (int a = 0; a <= A; ++a) r.add("delta", {a}, partial(*F0o, BigVar::s(a)) - ev.eval(delta(*F0o, a, th)));
  }
  return r;
}

ResidualReport check_hierarchy(const BigSeries& F0, const std::optional<BigSeries>& F0o, const TheoryData& th) {
  ResidualReport r("principal hierarchy");
  auto v = vtop(F0, th);
  std::optional<BigSeries> phi;
  if (F0o) phi = phitop(*F0o, th);
  JetEvaluator ev(th, v, phi);
  const int N = th.rank(), A = th.truncation().A_max;
  for (int be = 1; be <= N; ++be) {
    for (int b = 0; b <= A; ++b) {
      auto flow = principal_flow(F0, be, b, th);
      for (int al = 1; al <= N; ++al) {
        r.add("flow-v", {al, be, b}, partial(v[al - 1], BigVar::t(be, b)) - ev.eval(flow[al - 1]));
      }
      if (F0o) {
        JetPoly g = dx(gamma(*F0o, be, b, th));
        r.add("flow-phi-t", {be, b}, partial(*phi, BigVar::t(be, b)) - ev.eval(g));
      }
    }
  }
  if (F0o) {
    for (int b = 0; b <= A; ++b) {
      for (int al = 1; al <= N; ++al) r.add("flow-v-s", {al, b}, partial(v[al - 1], BigVar::s(b)));
      r.add("flow-phi-s", {b}, partial(*phi, BigVar::s(b)) - ev.eval(dx(delta(*F0o, b, th))));
    }
  }
  return r;
}

bool has_positive_level(const PhaseLayout& layout, const BigMonomial& m) {
  for (int idx = 0; idx < layout.num_vars(); ++idx) {
    if (m[idx] != 0 && layout.level_of(idx) > 0) return true;
  }
  return false;
}

namespace {

void check_seed(const JetPoly& seed, bool allow_phi) {
  for (const auto& t : seed.terms()) {
    if (t.eps != 0) throw DomainError("seed must not depend on eps");
  }
  const auto& tr = seed.truncation();
  for (const auto& t : seed.terms()) {
    for (int idx = 0; idx < tr.num_vars(); ++idx) {
      if (t.mono[idx] == 0) continue;
      JetVar x = tr.var_at(idx);
      if (x.order != 0 || x.kind == JetKind::f || (x.kind == JetKind::phi && !allow_phi)) {
        throw DomainError("seed must be a polynomial in the small-phase-space variables");
      }
    }
  }
}

}  // namespace

BigSeries solve_closed_order_by_order(const JetPoly& seed, const TheoryData& th, SolveLog* log) {
  check_seed(seed, false);
  DegreeSolveSpec spec;
  spec.layout = th.layout();
  spec.given = lift_small(seed, spec.layout);
  spec.is_unknown = [lay = spec.layout](const BigMonomial& m) { return has_positive_level(lay, m); };
  spec.equations = [&th](const Series<Affine>& F) {
    Derivatives<Affine> D(F);
    return closed_genus0_residuals(D, th, true);
  };
  spec.max_degree = th.truncation().D_t;
  spec.name = "closed genus-0 solver";
  return solve_by_degree(spec, log);
}

BigSeries solve_open_order_by_order(const BigSeries& F0, const JetPoly& seed, const TheoryData& th, SolveLog* log) {
  check_seed(seed, true);
  DegreeSolveSpec spec;
  spec.layout = th.layout();
  spec.given = lift_small(seed, spec.layout);
  spec.is_unknown = [lay = spec.layout](const BigMonomial& m) { return has_positive_level(lay, m); };
  auto D0 = std::make_shared<Derivatives<Rational>>(F0);
  spec.equations = [&th, D0](const Series<Affine>& F) {
    Derivatives<Affine> D(F);
    return open_genus0_residuals(*D0, D, th, true);
  };
  spec.max_degree = th.truncation().D_t;
  spec.name = "open genus-0 solver";
  return solve_by_degree(spec, log);
}

JetPoly witten_seed(const TheoryData& th) {
  JetTruncation tr = jet_truncation(th);
  JetPoly p(tr);
  for (int al = 1; al <= th.rank(); ++al) {
    JetPoly v = JetPoly::variable(tr, JetVar::v(al));
    p += v * v * v * make_rational(1, 6);
  }
  return p;
}

JetPoly open_seed(const TheoryData& th) {
  if (th.rank() != 1) throw DomainError("the example open seed is defined for rank 1");
  JetTruncation tr = jet_truncation(th);
  JetPoly v = JetPoly::variable(tr, JetVar::v(1));
  JetPoly phi = JetPoly::variable(tr, JetVar::phi());
  return v * phi * (1 / th.unit()[0]) + phi * phi * phi * make_rational(1, 6);
}

}  // namespace ottr
