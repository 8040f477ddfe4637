#include "deadoil/state.hpp"

#include <cmath>
#include <sstream>

namespace deadoil {

TimeGrid build_time_grid(double T, int N) {
    require(T > 0, "build_time_grid: T must be positive");
    require(N >= 1, "build_time_grid: N must be >= 1");
    return TimeGrid{T, N, T / N};
}

ControlTrajectory zero_controls(const Grid2D& g, int N) {
    ControlTrajectory c;
    c.f.assign(static_cast<size_t>(N), ScalarField(g));
    return c;
}

ScalarField shifted_phi(const CoefficientSet& coef, const ScalarField& u) {
    const double phi0 = coef.phi(0.0);
    ScalarField out = u;
    for (double& x : out.v) x = coef.phi(x) - phi0;
    return out;
}

// Spatial right-hand sides of the two equations at one level.
static ScalarField rhs_u(const ScalarField& u, const ScalarField& p, const CoefficientSet& coef) {
    ScalarField r = laplacian(shifted_phi(coef, u));
    axpy(r, 1.0, div_coeff_grad(apply_fn(coef.g, u), p));
    return r;
}

static ScalarField rhs_p(const ScalarField& u, const ScalarField& p, const CoefficientSet& coef) {
    return div_coeff_grad(apply_fn(coef.d, u), p);
}

StepResidual residual_F(const ScalarField& u_n, const ScalarField& u_next,
                        const ScalarField& p_n, const ScalarField& p_next,
                        const ScalarField& f_n, const CoefficientSet& coef,
                        const TimeGrid& tg) {
    require(same_grid(u_n.grid, u_next.grid) && same_grid(u_n.grid, p_n.grid) &&
                same_grid(u_n.grid, p_next.grid) && same_grid(u_n.grid, f_n.grid),
            "residual_F: fields use different grids");
    const double itau = 1.0 / tg.tau;
    StepResidual res{sub(u_next, u_n), sub(p_next, p_n)};
    for (double& x : res.row1.v) x *= itau;
    for (double& x : res.row2.v) x *= itau;
    axpy(res.row1, -1.0, rhs_u(u_n, p_n, coef));
    axpy(res.row2, -1.0, rhs_p(u_n, p_n, coef));
    axpy(res.row2, -1.0, f_n);
    return res;
}

void step_forward(const ScalarField& u_n, const ScalarField& p_n, const ScalarField& f_n,
                  const CoefficientSet& coef, const TimeGrid& tg, ScalarField& u_next,
                  ScalarField& p_next) {
    require(same_grid(u_n.grid, p_n.grid) && same_grid(u_n.grid, f_n.grid),
            "step_forward: fields use different grids");
    u_next = u_n;
    axpy(u_next, tg.tau, rhs_u(u_n, p_n, coef));
    p_next = p_n;
    axpy(p_next, tg.tau, rhs_p(u_n, p_n, coef));
    axpy(p_next, tg.tau, f_n);
    if (!all_finite(u_next) || !all_finite(p_next)) {
        std::ostringstream msg;
        msg << "step_forward: nonfinite state produced; tau = " << tg.tau
            << " against the diffusion step bound tau_max = "
            << stability_bound(u_n.grid, coef, 0.0) << " (p_scale = 0)";
        throw NumericError(msg.str());
    }
}

StateTrajectory solve_forward(const ScalarField& u0, const ScalarField& p0,
                              const ControlTrajectory& controls, const CoefficientSet& coef,
                              const TimeGrid& tg) {
    return solve_forward_forced(u0, p0, controls, coef, tg, nullptr, nullptr);
}

StateTrajectory solve_forward_forced(const ScalarField& u0, const ScalarField& p0,
                                     const ControlTrajectory& controls,
                                     const CoefficientSet& coef, const TimeGrid& tg,
                                     const StepForcing& forcing_u, const StepForcing& forcing_p) {
    require(controls.levels() == tg.N,
            "solve_forward: control trajectory must have N = " + std::to_string(tg.N) +
                " levels, got " + std::to_string(controls.levels()));
    require(same_grid(u0.grid, p0.grid), "solve_forward: initial fields use different grids");
    StateTrajectory traj;
    traj.u.reserve(tg.N + 1);
    traj.p.reserve(tg.N + 1);
    traj.u.push_back(u0);
    traj.p.push_back(p0);
    for (int n = 0; n < tg.N; ++n) {
        require(same_grid(controls.f[n].grid, u0.grid),
                "solve_forward: control level " + std::to_string(n) + " uses a different grid");
        ScalarField un, pn;
        try {
            step_forward(traj.u.back(), traj.p.back(), controls.f[n], coef, tg, un, pn);
        } catch (const NumericError& err) {
            throw NumericError(std::string(err.what()) + " at step " + std::to_string(n));
        }
        if (forcing_u) axpy(un, tg.tau, forcing_u(n));
        if (forcing_p) axpy(pn, tg.tau, forcing_p(n));
        traj.u.push_back(std::move(un));
        traj.p.push_back(std::move(pn));
    }
    return traj;
}

// Tangent pieces of the two spatial right-hand sides along (e, w):
//   d rhs_u = lap(phi'(u) e) + div((g'(u) e) grad p) + div(g(u) grad w)
//   d rhs_p = div((d'(u) e) grad p) + div(d(u) grad w)
static void tangent_rhs(const ScalarField& u, const ScalarField& p, const ScalarField& e,
                        const ScalarField& w, const CoefficientSet& coef, ScalarField& tu,
                        ScalarField& tp) {
    tu = laplacian(product(apply_fn(coef.dphi, u), e));
    axpy(tu, 1.0, div_coeff_grad(product(apply_fn(coef.dg, u), e), p));
    axpy(tu, 1.0, div_coeff_grad(apply_fn(coef.g, u), w));
    tp = div_coeff_grad(product(apply_fn(coef.dd, u), e), p);
    axpy(tp, 1.0, div_coeff_grad(apply_fn(coef.d, u), w));
}

GateauxResult gateaux_apply(const ScalarField& u_n, const ScalarField& p_n,
                            const ScalarField& f_n, const GateauxDirection& dir,
                            const CoefficientSet& coef) {
    require(same_grid(u_n.grid, p_n.grid) && same_grid(u_n.grid, f_n.grid) &&
                same_grid(u_n.grid, dir.e.grid) && same_grid(u_n.grid, dir.w.grid) &&
                same_grid(u_n.grid, dir.h.grid),
            "gateaux_apply: fields use different grids");
    ScalarField tu, tp;
    tangent_rhs(u_n, p_n, dir.e, dir.w, coef, tu, tp);
    GateauxResult out{dir.e, dir.w};
    axpy(out.xi1, -1.0, tu);
    axpy(out.xi3, -1.0, tp);
    axpy(out.xi3, -1.0, dir.h);
    return out;
}

StepTangent linearized_step_apply(const ScalarField& u_n, const ScalarField& p_n,
                                  const GateauxDirection& dir, const CoefficientSet& coef,
                                  const TimeGrid& tg) {
    ScalarField tu, tp;
    tangent_rhs(u_n, p_n, dir.e, dir.w, coef, tu, tp);
    StepTangent out{dir.e, dir.w};
    axpy(out.du, tg.tau, tu);
    axpy(out.dp, tg.tau, tp);
    axpy(out.dp, tg.tau, dir.h);
    return out;
}

double stability_bound(const Grid2D& g, const CoefficientSet& coef, double p_scale) {
    require(p_scale >= 0, "stability_bound: p_scale must be >= 0");
    const double diffusion = coef.c3 * (2.0 / (g.hx * g.hx) + 2.0 / (g.hy * g.hy));
    const double advection = coef.c2 * p_scale * (1.0 / g.hx + 1.0 / g.hy);
    return 0.5 / (diffusion + advection);
}

}  // namespace deadoil
