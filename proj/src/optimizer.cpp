#include "deadoil/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "deadoil/field_io.hpp"

namespace deadoil {

namespace {

constexpr int kMaxShrinks = 60;
constexpr double kStepFloor = 1e-8, kStepCeil = 1e8;

double dot(const ControlTrajectory& a, const ControlTrajectory& b) {
    double s = 0;
    for (int n = 0; n < a.levels(); ++n) s += inner(a.f[n], b.f[n]);
    return s;
}

ControlTrajectory displaced(const ControlTrajectory& f, double alpha,
                            const ControlTrajectory& dir) {
    ControlTrajectory out = f;
    for (int n = 0; n < out.levels(); ++n) axpy(out.f[n], -alpha, dir.f[n]);
    return out;
}

}  // namespace

void validate(const OptimizerOpts& opts) {
    require(opts.grad_tol > 0, "optimizer: grad_tol must be positive");
    require(opts.max_iter >= 0, "optimizer: max_iter must be nonnegative");
    require(opts.armijo_c > 0 && opts.armijo_c < 1, "optimizer: armijo_c must lie in (0, 1)");
    require(opts.shrink > 0 && opts.shrink < 1, "optimizer: shrink must lie in (0, 1)");
    require(opts.kkt_tol > 0 && opts.kkt_max_iter >= 1,
            "optimizer: stationarity solve settings must be positive");
}

const char* to_string(OptimizerStatus s) {
    switch (s) {
        case OptimizerStatus::converged: return "converged";
        case OptimizerStatus::iteration_cap: return "iteration-cap";
        case OptimizerStatus::line_search_failure: return "line-search-failure";
    }
    return "unknown";
}

OptimizationResult minimize(const ScalarField& u0, const ScalarField& p0,
                            const ControlTrajectory& initial, const CostParams& params,
                            const CoefficientSet& coef, const TimeGrid& tg,
                            const OptimizerOpts& opts) {
    validate(opts);
    validate(params);

    OptimizationResult res;
    res.best_control = initial;
    res.best_state = solve_forward(u0, p0, res.best_control, coef, tg);
    double J = evaluate_cost(res.best_state, res.best_control, params, tg);

    AdjointTrajectory adj = solve_adjoint_discrete(res.best_state, params, coef, tg);
    ControlTrajectory grad = gradient_wrt_control(res.best_control, adj, params, tg);
    double gnorm = std::sqrt(dot(grad, grad));
    const double stop_below = opts.grad_tol * std::max(1.0, gnorm);

    auto record = [&](double step, int shrinks) {
        const AggregateAdjointResult agg =
            solve_adjoint_aggregate(res.best_state, params, coef, tg, opts.kkt_tol,
                                    opts.kkt_max_iter, opts.kkt_mode);
        res.J_history.push_back(J);
        res.grad_norm_history.push_back(gnorm);
        res.kkt_history.push_back(kkt_residual(res.best_control, agg.adj, params, tg));
        res.step_history.push_back(step);
        res.shrink_history.push_back(shrinks);
    };
    record(0.0, 0);

    if (gnorm <= stop_below) {
        res.status = OptimizerStatus::converged;
        return res;
    }

    double prev_alpha = 1.0;
    ControlTrajectory prev_control, prev_grad;
    res.status = OptimizerStatus::iteration_cap;

    for (int k = 1; k <= opts.max_iter; ++k) {
        double alpha = 1.0;
        if (k > 1) {
            // BB1 from the last accepted pair; fall back to growing the
            // previous step when the curvature pairing is not positive.
            ControlTrajectory df = res.best_control, dy = grad;
            for (int n = 0; n < df.levels(); ++n) {
                axpy(df.f[n], -1.0, prev_control.f[n]);
                axpy(dy.f[n], -1.0, prev_grad.f[n]);
            }
            const double denom = dot(df, dy);
            alpha = denom > 0 ? dot(df, df) / denom : prev_alpha * 2.0;
            alpha = std::clamp(alpha, kStepFloor, kStepCeil);
        }

        bool accepted = false;
        int shrinks = 0;
        ControlTrajectory trial;
        StateTrajectory trial_state;
        double trial_J = 0;
        while (true) {
            trial = displaced(res.best_control, alpha, grad);
            trial_state = solve_forward(u0, p0, trial, coef, tg);
            trial_J = evaluate_cost(trial_state, trial, params, tg);
            if (trial_J <= J - opts.armijo_c * alpha * gnorm * gnorm) {
                accepted = true;
                break;
            }
            if (shrinks >= kMaxShrinks) break;
            alpha *= opts.shrink;
            ++shrinks;
        }
        if (!accepted) {
            res.status = OptimizerStatus::line_search_failure;
            break;
        }

        prev_control = std::move(res.best_control);
        prev_grad = std::move(grad);
        prev_alpha = alpha;
        res.best_control = std::move(trial);
        res.best_state = std::move(trial_state);
        J = trial_J;

        adj = solve_adjoint_discrete(res.best_state, params, coef, tg);
        grad = gradient_wrt_control(res.best_control, adj, params, tg);
        gnorm = std::sqrt(dot(grad, grad));
        record(alpha, shrinks);

        if (gnorm <= stop_below) {
            res.status = OptimizerStatus::converged;
            break;
        }
    }
    return res;
}

std::string OptimizationResult::log_csv() const {
    std::ostringstream out;
    out << "iter,J,grad_norm,kkt_residual,step_size,shrinks\n";
    for (size_t i = 0; i < J_history.size(); ++i) {
        out << i << ',' << format_double(J_history[i]) << ','
            << format_double(grad_norm_history[i]) << ',' << format_double(kkt_history[i]) << ','
            << format_double(step_history[i]) << ',' << shrink_history[i] << '\n';
    }
    return out.str();
}

}  // namespace deadoil
