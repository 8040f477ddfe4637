// Discrete tracking cost
//   J = (tau/2) * sum_{n=1..N} ( ||u^n - U||_2^2 + ||p^n - P||_2^2
//                                + beta1*||f^{n-1}||_{2q0}^{2q0} )
// with fixed target fields U, P. The control sampled alongside level-n
// states is the one applied on the step into level n (stored index n-1).
#pragma once

#include "deadoil/grid.hpp"
#include "deadoil/state.hpp"

namespace deadoil {

struct CostParams {
    double beta1 = 0;  // > 0
    double beta2 = 0;  // kept for completeness; fixed 0 in this build
    double q0 = 0;     // >= 1; the model's strict range is q0 > 1, q0 = 1 is
                       // accepted as the quadratic limit
    ScalarField target_u, target_p;
};

void validate(const CostParams& params);

double evaluate_cost(const StateTrajectory& traj, const ControlTrajectory& controls,
                     const CostParams& params, const TimeGrid& tg);

// Partial derivative of J with respect to the control, level by level:
// per node tau * q0 * beta1 * |f|^(2q0-2) * f (a representer in the
// quadrature-weighted inner product, like every gradient here).
ControlTrajectory cost_control_partial(const ControlTrajectory& controls,
                                       const CostParams& params, const TimeGrid& tg);

}  // namespace deadoil
