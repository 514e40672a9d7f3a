#pragma once

#include <array>
#include <map>
#include <utility>
#include <vector>

#include "ottr/genus1.hpp"
#include "ottr/jetpoly.hpp"
#include "ottr/pseudo_diff.hpp"
#include "ottr/report.hpp"

namespace ottr {

/// Q_0 = 1, Q_i = f_1 Q_{i-1} + eps dx Q_{i-1}, so that
/// (eps d/dx)^i e^{f/eps} = Q_i e^{f/eps}.
JetPoly qpoly(int i, const JetTruncation& trunc);

/// Q_i - f_1^i - eps i(i-1)/2 f_1^{i-2} f_2; its eps^0 and eps^1 parts vanish.
JetPoly qpoly_lemma_residual(int i, const JetTruncation& trunc);

enum class OperatorKind { interior, boundary };

/// sum_i (L^{[0]}_i + eps L^{[1]}_i) (eps d/dx)^i with eps-free coefficients.
struct LinearDiffOp {
  OperatorKind kind = OperatorKind::interior;
  int alpha = 1;  // interior only
  int level = 0;
  JetTruncation trunc;
  std::map<std::pair<int, int>, JetPoly> coeffs;  // (i, j) -> L^{[j]}_i
  /// Reliable degree of the phi-polynomials the coefficients were taken
  /// from; a missing L^{[j]}_i is zero only up to reliable[j] - i.
  std::array<int, 2> reliable{kExact, kExact};

  JetPoly coefficient(int i, int j) const;
  int max_power() const;
  std::vector<int> index() const;
};

/// Interior operator for t^alpha_a built from the two-point functions and Go.
/// With include_go_free = false only the part linear in Go is kept.
LinearDiffOp build_Lint(const OpenContext& ctx, const JetPoly& Go, int alpha, int a, bool include_go_free = true);
/// Boundary operator for s_a.
LinearDiffOp build_Lboun(const OpenContext& ctx, const JetPoly& Go, int a, bool include_go_free = true);
/// All interior operators (alpha, a) followed by the boundary ones, a = 0..A_max.
std::vector<LinearDiffOp> build_operators(const OpenContext& ctx, const JetPoly& Go, int threads = 1);

struct PdeRhs {
  BigSeries eps0;
  BigSeries eps1;
};

/// Right-hand sides of the open PDEs along f = F0o + eps F1o.
class PdeEvaluator {
 public:
  PdeEvaluator(const OpenContext& ctx, const BigSeries& F1o);

  /// sum_i L^{[0]}_i f0x^i, and at eps^1
  /// sum_i L^{[1]}_i f0x^i + L^{[0]}_i (i f0x^{i-1} f1x + i(i-1)/2 f0x^{i-2} f0xx).
  PdeRhs first_order(const LinearDiffOp& op);
  /// sum_i (L^{[0]}_i + eps L^{[1]}_i) Q_i(f) through eps^1.
  PdeRhs via_qpoly(const LinearDiffOp& op);
  /// sum_i i L^{[0]}_i f0x^{i-1}.
  BigSeries symbol_derivative(const LinearDiffOp& op);
  BigSeries eval(const JetPoly& p) { return ev_.eval(p); }

  const BigSeries& f0x_power(int n);
  const BigSeries& f0x() { return f0x_power(1); }
  const BigSeries& f1x() const { return f1x_; }
  const BigSeries& f0xx() const { return f0xx_; }

 private:
  const OpenContext* ctx_;
  JetEvaluator ev_;
  BigSeries f1x_, f0xx_;
  std::vector<BigSeries> f0x_pow_;
};

/// Flow variable derivative of F0o and F1o minus the PDE right-hand sides,
/// one eps^0 and one eps^1 entry per operator.
ResidualReport check_open_pde(const OpenContext& ctx, const BigSeries& F1o, const std::vector<LinearDiffOp>& ops);

/// Difference between the first-order form and the Q-polynomial form.
ResidualReport check_pde_forms(const OpenContext& ctx, const BigSeries& F1o, const std::vector<LinearDiffOp>& ops);

struct PerturbationSweep {
  std::size_t tested = 0;
  std::size_t detected = 0;
  int checked_through = 0;
  std::vector<BigMonomial> undetected;
};

/// Adds each nonconstant monomial of degree <= checked_through to F1o,
/// keeping the operators fixed, and records whether some eps^1 residual
/// becomes nonzero through `checked_through`.
PerturbationSweep perturbation_sweep(const OpenContext& ctx, const BigSeries& F1o, const std::vector<LinearDiffOp>& ops,
                                     int checked_through);

/// (L^{p+1/2})_+ / (2p+1)!! and L^{p+1} / (2^{p+1} (p+1)!) for L = D^2 + 2w.
PsiDO kdv_t_operator(int p, const JetPoly& w);
PsiDO kdv_s_operator(int p, const JetPoly& w);

/// Coefficientwise comparison of a PDE operator with a Lax operator, up to
/// the operator's reliable degree.
ResidualReport compare_with_lax(const OpenContext& ctx, const LinearDiffOp& op, const PsiDO& lax);

/// With w = w0 + eps^2 w2 (w2 carried by a second jet component), checks
/// that the eps^0 and eps^1 parts of the flow operators up to max_level
/// never involve w2.
bool kdv_low_genus_independent(int max_level, const JetTruncation& base);

struct PstResult {
  BigSeries F0;
  BigSeries F0o;
  BigSeries F1o;
  SolveLog log0;
  SolveLog log1;
};

/// Integrates the KdV wave-function flows d/dy e^{f/eps} = eps^{-1} P_y e^{f/eps}
/// along the Witten solution, orders eps^0 and eps^1, with f = 0 on the
/// t_0 line. Requires the rank-1 theory with eta = 1 and A = 1.
PstResult pst_generator(const TheoryData& theory);

}  // namespace ottr
