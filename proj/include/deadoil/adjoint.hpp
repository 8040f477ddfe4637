// Adjoint machinery: the exact transpose of the linearized explicit step,
// the backward multiplier recursion, the control gradient, and the
// aggregate stationarity system for the summed mismatches together with the
// first-order (KKT) residual it induces.
#pragma once

#include "deadoil/linsolve.hpp"
#include "deadoil/objective.hpp"
#include "deadoil/state.hpp"

namespace deadoil {

// Multipliers lam_u[n], lam_p[n], n = 0..N, terminal level identically zero.
// lam[n] multiplies the residual rows of step n with the Lagrangian
// L = J + tau * sum_n <lam[n], residual of step n>; equivalently
// lam_p[n] = -dJ/dp^{n+1}, so gradient = cost_control_partial - tau*lam_p.
struct AdjointTrajectory {
    std::vector<ScalarField> lam_u, lam_p;
    int levels() const { return static_cast<int>(lam_u.size()); }
};

// Transpose of linearized_step_apply at state (u_n, p_n): the pairing
//   inner(tangent(e,w,h), (lu,lp)) == inner((e,w,h), transpose(lu,lp))
// holds to roundoff. Stencil transposes: the 5-point Laplacian and
// div(a grad .) at fixed a are self-adjoint; the coefficient slot transposes
// through div_coeff_grad_wrt_coeff.
struct StepTranspose {
    ScalarField tu, tp, th;
};

StepTranspose transposed_step_apply(const ScalarField& u_n, const ScalarField& p_n,
                                    const ScalarField& lam_u, const ScalarField& lam_p,
                                    const CoefficientSet& coef, const TimeGrid& tg);

// Backward recursion, m = N..1:
//   lam[m-1] = transpose at level-m state applied to lam[m]
//              - (tau*(u^m - U), tau*(p^m - P)),
// lam[N] = 0. Exact reverse mode of J o solve_forward.
AdjointTrajectory solve_adjoint_discrete(const StateTrajectory& traj, const CostParams& params,
                                         const CoefficientSet& coef, const TimeGrid& tg);

// Per level n = 0..N-1: cost_control_partial - tau*lam_p[n].
ControlTrajectory gradient_wrt_control(const ControlTrajectory& controls,
                                       const AdjointTrajectory& adj, const CostParams& params,
                                       const TimeGrid& tg);

// Aggregate stationarity system for the multiplier pair (e1, p1):
//   e1 + div(phi'(ub) grad e1) - d'(ub)*grad(pb).grad(p1)
//      - phi''(ub)*grad(ub).grad(e1) - g'(ub)*grad(pb).grad(e1)
//        = tau * sum_{n=1..N} (u^n - U)
//   p1 + div(d(ub) grad p1) + div(g(ub) grad e1)
//        = tau * sum_{n=1..N} (p^n - P)
// with (ub, pb) the terminal state or the average of the sampled levels.
// Solved matrix-free by GMRES; the operator may be indefinite, so
// non-convergence is reported in the result, never silently dropped.
struct AggregateAdjoint {
    ScalarField e1, p1;
};

enum class AggregateStateMode { terminal, time_average };

struct AggregateAdjointResult {
    AggregateAdjoint adj;
    bool converged = false;
    int iterations = 0;
    double residual = 0;
};

LinearOperator aggregate_operator(const ScalarField& ub, const ScalarField& pb,
                                  const CoefficientSet& coef);

AggregateAdjointResult solve_adjoint_aggregate(const StateTrajectory& traj,
                                               const CostParams& params,
                                               const CoefficientSet& coef, const TimeGrid& tg,
                                               double tol, int max_iter,
                                               AggregateStateMode mode = AggregateStateMode::terminal);

// q0*beta1*tau * sum_{n} |f^n|^(2q0-2) f^n, the control side of the
// stationarity condition that p1 balances.
ScalarField control_stationarity_field(const ControlTrajectory& controls,
                                       const CostParams& params, const TimeGrid& tg);

// ||control_stationarity_field - p1||_2 in the quadrature-weighted norm.
double kkt_residual(const ControlTrajectory& controls, const AggregateAdjoint& agg,
                    const CostParams& params, const TimeGrid& tg);

// Pack/unpack a field pair into one flat vector (linsolve interface).
std::vector<double> pack_pair(const ScalarField& a, const ScalarField& b);
void unpack_pair(const std::vector<double>& x, ScalarField& a, ScalarField& b);

}  // namespace deadoil
