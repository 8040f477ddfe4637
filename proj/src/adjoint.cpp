#include "deadoil/adjoint.hpp"

#include <cmath>

namespace deadoil {

StepTranspose transposed_step_apply(const ScalarField& u_n, const ScalarField& p_n,
                                    const ScalarField& lam_u, const ScalarField& lam_p,
                                    const CoefficientSet& coef, const TimeGrid& tg) {
    require(same_grid(u_n.grid, p_n.grid) && same_grid(u_n.grid, lam_u.grid) &&
                same_grid(u_n.grid, lam_p.grid),
            "transposed_step_apply: fields use different grids");
    // e-slot: lam_u + tau*( phi'(u)*lap(lam_u) + g'(u)*W(p, lam_u)
    //                       + d'(u)*W(p, lam_p) )
    // where W is the coefficient-slot adjoint of div_coeff_grad.
    StepTranspose out{lam_u, lam_p, lam_p};
    ScalarField acc = product(apply_fn(coef.dphi, u_n), laplacian(lam_u));
    axpy(acc, 1.0, product(apply_fn(coef.dg, u_n), div_coeff_grad_wrt_coeff(p_n, lam_u)));
    axpy(acc, 1.0, product(apply_fn(coef.dd, u_n), div_coeff_grad_wrt_coeff(p_n, lam_p)));
    axpy(out.tu, tg.tau, acc);
    // w-slot: lam_p + tau*( div(g(u) grad lam_u) + div(d(u) grad lam_p) );
    // both divergence forms are self-adjoint at fixed coefficient.
    ScalarField accp = div_coeff_grad(apply_fn(coef.g, u_n), lam_u);
    axpy(accp, 1.0, div_coeff_grad(apply_fn(coef.d, u_n), lam_p));
    axpy(out.tp, tg.tau, accp);
    // h-slot
    for (double& x : out.th.v) x *= tg.tau;
    return out;
}

AdjointTrajectory solve_adjoint_discrete(const StateTrajectory& traj, const CostParams& params,
                                         const CoefficientSet& coef, const TimeGrid& tg) {
    validate(params);
    require(traj.levels() == tg.N + 1,
            "solve_adjoint_discrete: trajectory must have N+1 levels");
    require(same_grid(traj.u[0].grid, params.target_u.grid),
            "solve_adjoint_discrete: targets use a different grid");
    const Grid2D& g = traj.u[0].grid;
    AdjointTrajectory adj;
    adj.lam_u.assign(static_cast<size_t>(tg.N) + 1, ScalarField(g));
    adj.lam_p.assign(static_cast<size_t>(tg.N) + 1, ScalarField(g));
    for (int m = tg.N; m >= 1; --m) {
        StepTranspose t = transposed_step_apply(traj.u[m], traj.p[m], adj.lam_u[m],
                                                adj.lam_p[m], coef, tg);
        axpy(t.tu, -tg.tau, sub(traj.u[m], params.target_u));
        axpy(t.tp, -tg.tau, sub(traj.p[m], params.target_p));
        require_numeric(all_finite(t.tu) && all_finite(t.tp),
                        "solve_adjoint_discrete: nonfinite multiplier at level " +
                            std::to_string(m - 1));
        adj.lam_u[m - 1] = std::move(t.tu);
        adj.lam_p[m - 1] = std::move(t.tp);
    }
    return adj;
}

ControlTrajectory gradient_wrt_control(const ControlTrajectory& controls,
                                       const AdjointTrajectory& adj, const CostParams& params,
                                       const TimeGrid& tg) {
    require(adj.levels() == tg.N + 1, "gradient_wrt_control: adjoint must have N+1 levels");
    ControlTrajectory grad = cost_control_partial(controls, params, tg);
    for (int n = 0; n < tg.N; ++n) axpy(grad.f[n], -tg.tau, adj.lam_p[n]);
    return grad;
}

LinearOperator aggregate_operator(const ScalarField& ub, const ScalarField& pb,
                                  const CoefficientSet& coef) {
    const Grid2D g = ub.grid;
    const ScalarField phid = apply_fn(coef.dphi, ub);
    const ScalarField phidd = apply_fn(coef.d2phi, ub);
    const ScalarField gd = apply_fn(coef.dg, ub);
    const ScalarField dval = apply_fn(coef.d, ub);
    const ScalarField dder = apply_fn(coef.dd, ub);
    const ScalarField gval = apply_fn(coef.g, ub);
    LinearOperator op;
    op.dim = 2 * static_cast<size_t>(g.size());
    op.apply = [=](const std::vector<double>& x) {
        ScalarField e1(g), p1(g);
        unpack_pair(x, e1, p1);
        ScalarField re = e1;
        axpy(re, 1.0, div_coeff_grad(phid, e1));
        axpy(re, -1.0, product(dder, dot_grad(pb, p1)));
        axpy(re, -1.0, product(phidd, dot_grad(ub, e1)));
        axpy(re, -1.0, product(gd, dot_grad(pb, e1)));
        ScalarField rp = p1;
        axpy(rp, 1.0, div_coeff_grad(dval, p1));
        axpy(rp, 1.0, div_coeff_grad(gval, e1));
        return pack_pair(re, rp);
    };
    return op;
}

AggregateAdjointResult solve_adjoint_aggregate(const StateTrajectory& traj,
                                               const CostParams& params,
                                               const CoefficientSet& coef, const TimeGrid& tg,
                                               double tol, int max_iter,
                                               AggregateStateMode mode) {
    validate(params);
    require(traj.levels() == tg.N + 1, "solve_adjoint_aggregate: trajectory must have N+1 levels");
    const Grid2D& g = traj.u[0].grid;

    ScalarField ub(g), pb(g);
    if (mode == AggregateStateMode::terminal) {
        ub = traj.u[tg.N];
        pb = traj.p[tg.N];
    } else {
        for (int n = 1; n <= tg.N; ++n) {
            axpy(ub, 1.0 / tg.N, traj.u[n]);
            axpy(pb, 1.0 / tg.N, traj.p[n]);
        }
    }

    ScalarField rhs_u(g), rhs_p(g);
    for (int n = 1; n <= tg.N; ++n) {
        axpy(rhs_u, tg.tau, sub(traj.u[n], params.target_u));
        axpy(rhs_p, tg.tau, sub(traj.p[n], params.target_p));
    }

    const LinearOperator op = aggregate_operator(ub, pb, coef);
    const LinearSolveResult sol = solve_linear(op, pack_pair(rhs_u, rhs_p), tol, max_iter);

    AggregateAdjointResult out;
    out.adj.e1 = ScalarField(g);
    out.adj.p1 = ScalarField(g);
    unpack_pair(sol.x, out.adj.e1, out.adj.p1);
    out.converged = sol.converged;
    out.iterations = sol.iterations;
    out.residual = sol.residual;
    return out;
}

ScalarField control_stationarity_field(const ControlTrajectory& controls,
                                       const CostParams& params, const TimeGrid& tg) {
    validate(params);
    require(controls.levels() == tg.N, "control_stationarity_field: controls must have N levels");
    const Grid2D& g = controls.f[0].grid;
    const double expo = 2.0 * params.q0 - 2.0;
    const double scale = params.q0 * params.beta1 * tg.tau;
    ScalarField out(g);
    for (const auto& level : controls.f)
        for (size_t k = 0; k < out.v.size(); ++k)
            out.v[k] += scale * std::pow(std::abs(level.v[k]), expo) * level.v[k];
    return out;
}

double kkt_residual(const ControlTrajectory& controls, const AggregateAdjoint& agg,
                    const CostParams& params, const TimeGrid& tg) {
    return norm_l2(sub(control_stationarity_field(controls, params, tg), agg.p1));
}

std::vector<double> pack_pair(const ScalarField& a, const ScalarField& b) {
    std::vector<double> x;
    x.reserve(a.size() + b.size());
    x.insert(x.end(), a.v.begin(), a.v.end());
    x.insert(x.end(), b.v.begin(), b.v.end());
    return x;
}

void unpack_pair(const std::vector<double>& x, ScalarField& a, ScalarField& b) {
    require(x.size() == a.size() + b.size(), "unpack_pair: dimension mismatch");
    std::copy(x.begin(), x.begin() + static_cast<long>(a.size()), a.v.begin());
    std::copy(x.begin() + static_cast<long>(a.size()), x.end(), b.v.begin());
}

}  // namespace deadoil
