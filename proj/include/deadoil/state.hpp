// Explicit time stepping for the coupled saturation-pressure system
//   du/dt = lap(phi(u)) + div(g(u) grad p)
//   dp/dt = div(d(u) grad p) + f
// on zero-Dirichlet interior fields, plus the residual form of one step and
// the exact directional (Gateaux) derivative of its stationary part.
#pragma once

#include <optional>
#include <vector>

#include "deadoil/coefficients.hpp"
#include "deadoil/grid.hpp"

namespace deadoil {

struct TimeGrid {
    double T = 0;
    int N = 0;
    double tau = 0;  // T/N
};

TimeGrid build_time_grid(double T, int N);

// Levels n = 0..N of both state variables.
struct StateTrajectory {
    std::vector<ScalarField> u, p;
    int levels() const { return static_cast<int>(u.size()); }
};

// f[n] drives the step from level n to n+1, n = 0..N-1. In the cost this is
// the f^{n} sampled alongside level-n+1 states.
struct ControlTrajectory {
    std::vector<ScalarField> f;
    int levels() const { return static_cast<int>(f.size()); }
};

ControlTrajectory zero_controls(const Grid2D& g, int N);

// One direction (e, w, h) for directional derivatives: state perturbations
// e, w and control perturbation h.
struct GateauxDirection {
    ScalarField e, w, h;
};

// The nodal field phi(u) - phi(0). Subtracting phi(0) makes the implied zero
// boundary of the storage equal the true boundary data phi(u|boundary), so
// the plain 5-point Laplacian of this field is the correct discretization of
// lap(phi(u)).
ScalarField shifted_phi(const CoefficientSet& coef, const ScalarField& u);

// Residual rows of one explicit step:
//   row1 = (u_next - u_n)/tau - lap(phi(u_n)) - div(g(u_n) grad p_n)
//   row2 = (p_next - p_n)/tau - div(d(u_n) grad p_n) - f_n
// Zero boundary traces are enforced structurally by the field storage.
struct StepResidual {
    ScalarField row1, row2;
};

StepResidual residual_F(const ScalarField& u_n, const ScalarField& u_next,
                        const ScalarField& p_n, const ScalarField& p_next,
                        const ScalarField& f_n, const CoefficientSet& coef,
                        const TimeGrid& tg);

// One explicit step. Throws NumericError when the result is nonfinite; the
// message cites the step-size bound.
void step_forward(const ScalarField& u_n, const ScalarField& p_n, const ScalarField& f_n,
                  const CoefficientSet& coef, const TimeGrid& tg, ScalarField& u_next,
                  ScalarField& p_next);

StateTrajectory solve_forward(const ScalarField& u0, const ScalarField& p0,
                              const ControlTrajectory& controls, const CoefficientSet& coef,
                              const TimeGrid& tg);

// Same scheme with extra per-step forcing in both equations (used by the
// manufactured-solution studies). forcing_u/forcing_p receive the level
// index n and return the fields added inside step n.
using StepForcing = std::function<ScalarField(int)>;
StateTrajectory solve_forward_forced(const ScalarField& u0, const ScalarField& p0,
                                     const ControlTrajectory& controls,
                                     const CoefficientSet& coef, const TimeGrid& tg,
                                     const StepForcing& forcing_u, const StepForcing& forcing_p);

// Directional derivative of the stationary residual part, in the form
//   xi1 = e - lap(phi'(u_n) e) - div((g'(u_n) e) grad p_n) - div(g(u_n) grad w)
//   xi3 = w - div((d'(u_n) e) grad p_n) - div(d(u_n) grad w) - h
// The two printed phi-fluxes div(phi'(u) grad e) + div(phi''(u) e grad u)
// combine into lap(phi'(u) e) exactly under the discrete product rule for
// arithmetic face averages; that combined form is the exact tangent of the
// discrete residual, which the finite-difference oracle checks.
struct GateauxResult {
    ScalarField xi1, xi3;
};

GateauxResult gateaux_apply(const ScalarField& u_n, const ScalarField& p_n,
                            const ScalarField& f_n, const GateauxDirection& dir,
                            const CoefficientSet& coef);

// Exact tangent map of one explicit step applied to (e, w, h):
//   du' = e + tau*(lap(phi'(u)e) + div((g'(u)e) grad p) + div(g(u) grad w))
//   dp' = w + tau*(div((d'(u)e) grad p) + div(d(u) grad w) + h)
struct StepTangent {
    ScalarField du, dp;
};

StepTangent linearized_step_apply(const ScalarField& u_n, const ScalarField& p_n,
                                  const GateauxDirection& dir, const CoefficientSet& coef,
                                  const TimeGrid& tg);

// Conservative explicit step-size bound
//   tau_max = 0.5 / (c3*(2/hx^2 + 2/hy^2) + c2*p_scale*(1/hx + 1/hy)).
double stability_bound(const Grid2D& g, const CoefficientSet& coef, double p_scale);

}  // namespace deadoil
