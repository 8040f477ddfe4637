// Steepest descent on the reduced functional f -> J(solve_forward(f), f)
// with Armijo backtracking and a Barzilai-Borwein trial step, logging the
// aggregate stationarity residual alongside the iteration.
#pragma once

#include <string>

#include "deadoil/adjoint.hpp"

namespace deadoil {

struct OptimizerOpts {
    double grad_tol = 1e-2;  // stop at ||grad|| <= grad_tol * max(1, ||grad_0||)
    int max_iter = 200;
    double armijo_c = 1e-4;  // sufficient-decrease constant, in (0, 1)
    double shrink = 0.5;     // backtracking factor, in (0, 1)
    // aggregate stationarity solve feeding the kkt column of the log
    double kkt_tol = 1e-10;
    int kkt_max_iter = 500;
    AggregateStateMode kkt_mode = AggregateStateMode::terminal;
};

void validate(const OptimizerOpts& opts);

enum class OptimizerStatus { converged, iteration_cap, line_search_failure };

const char* to_string(OptimizerStatus s);

// Histories share length; entry k describes iterate k, entry 0 the initial
// point (step_size and shrinks 0 there). J_history is nonincreasing by the
// Armijo acceptance rule.
struct OptimizationResult {
    ControlTrajectory best_control;
    StateTrajectory best_state;
    std::vector<double> J_history;
    std::vector<double> grad_norm_history;
    std::vector<double> kkt_history;
    std::vector<double> step_history;
    std::vector<int> shrink_history;
    OptimizerStatus status = OptimizerStatus::iteration_cap;

    std::string log_csv() const;  // iter,J,grad_norm,kkt_residual,step_size,shrinks
};

OptimizationResult minimize(const ScalarField& u0, const ScalarField& p0,
                            const ControlTrajectory& initial, const CostParams& params,
                            const CoefficientSet& coef, const TimeGrid& tg,
                            const OptimizerOpts& opts);

}  // namespace deadoil
