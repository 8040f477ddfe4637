#include "deadoil/objective.hpp"

#include <cmath>

namespace deadoil {

void validate(const CostParams& params) {
    require(params.beta1 > 0, "cost: beta1 must be positive");
    require(params.beta2 == 0, "cost: beta2 is fixed to 0 in this build");
    require(params.q0 >= 1.0,
            "cost: q0 must satisfy q0 > 1 (q0 = 1 is accepted as the quadratic limit)");
    require(same_grid(params.target_u.grid, params.target_p.grid),
            "cost: target fields use different grids");
}

double evaluate_cost(const StateTrajectory& traj, const ControlTrajectory& controls,
                     const CostParams& params, const TimeGrid& tg) {
    validate(params);
    require(traj.levels() == tg.N + 1,
            "evaluate_cost: trajectory must have N+1 levels, got " +
                std::to_string(traj.levels()));
    require(controls.levels() == tg.N,
            "evaluate_cost: controls must have N levels, got " +
                std::to_string(controls.levels()));
    double s = 0;
    for (int n = 1; n <= tg.N; ++n) {
        s += integrate_power(sub(traj.u[n], params.target_u), 2.0);
        s += integrate_power(sub(traj.p[n], params.target_p), 2.0);
        s += params.beta1 * integrate_power(controls.f[n - 1], 2.0 * params.q0);
    }
    const double J = 0.5 * tg.tau * s;
    require_numeric(finite(J), "evaluate_cost: nonfinite cost value");
    return J;
}

ControlTrajectory cost_control_partial(const ControlTrajectory& controls,
                                       const CostParams& params, const TimeGrid& tg) {
    validate(params);
    require(controls.levels() == tg.N,
            "cost_control_partial: controls must have N levels, got " +
                std::to_string(controls.levels()));
    const double expo = 2.0 * params.q0 - 2.0;
    const double scale = tg.tau * params.q0 * params.beta1;
    ControlTrajectory out = controls;
    for (auto& level : out.f)
        for (double& x : level.v) x = scale * std::pow(std::abs(x), expo) * x;
    return out;
}

}  // namespace deadoil
