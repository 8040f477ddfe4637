// Independent comparators: central finite differences for directional
// derivatives, a residual-based oracle for the Gateaux operator, and
// manufactured-solution convergence studies.
#pragma once

#include <functional>
#include <random>

#include "deadoil/state.hpp"

namespace deadoil {

// Deterministic smooth test field: the first three sine modes per axis with
// coefficients drawn uniformly from [-1, 1].
ScalarField smooth_random_field(const Grid2D& g, std::mt19937_64& rng);

// Central difference (E(at + s*dir) - E(at - s*dir)) / (2s) of a scalar
// functional of the control trajectory.
double fd_directional(const std::function<double(const ControlTrajectory&)>& evaluate,
                      const ControlTrajectory& at, const ControlTrajectory& dir, double s);

// Central difference of the stationary part of residual_F along (e, w, h),
// with the time-difference rows frozen to the bare direction fields the
// printed derivative carries. Matches gateaux_apply up to O(s^2).
GateauxResult fd_gateaux(const ScalarField& u_n, const ScalarField& p_n, const ScalarField& f_n,
                         const GateauxDirection& dir, const CoefficientSet& coef,
                         const TimeGrid& tg, double s);

// An exact space-time pair with enough analytic structure to build
// manufactured forcings: value, time derivative, gradient, Laplacian,
// all at (x, y, t). Must vanish on the domain boundary.
struct ManufacturedField {
    std::function<double(double, double, double)> value;
    std::function<double(double, double, double)> dt;
    std::function<double(double, double, double)> dx;
    std::function<double(double, double, double)> dy;
    std::function<double(double, double, double)> lap;
};

// amplitude * sin(pi x/lx) * sin(pi y/ly) * exp(-rate*t)
ManufacturedField sine_decay_field(double lx, double ly, double amplitude, double rate);

// amplitude * sin^2(pi x/lx) * sin^2(pi y/ly) * exp(-rate*t). Vanishing
// normal derivative on the boundary, so the first-ring coefficient
// extrapolation of div_coeff_grad costs no solution-level order; preferred
// for convergence studies in the max norm.
ManufacturedField sine_squared_field(double lx, double ly, double amplitude, double rate);

struct MmsRow {
    double hx = 0, tau = 0, err_u = 0, err_p = 0;
};

struct MmsReport {
    std::vector<MmsRow> spatial, temporal;
    std::vector<double> order_u_spatial, order_p_spatial;  // log2 error ratios
    std::vector<double> order_u_temporal, order_p_temporal;
    std::string to_csv() const;
};

// Spatial sweep: grids with tau tied to h^2, forcing from the fully
// analytic residual of the exact pair; expected second order. Temporal
// sweep: fixed grid, tau halving, forcing from the analytic time derivative
// minus the scheme's own spatial operators applied to the exact nodal
// values, so only the first-order time error remains. Errors are max norms
// at t = T.
MmsReport mms_study(const ManufacturedField& exact_u, const ManufacturedField& exact_p,
                    const CoefficientSet& coef, const std::vector<int>& spatial_nx,
                    double spatial_T, int coarsest_N, int temporal_nx, double temporal_T,
                    const std::vector<int>& temporal_N, double domain_lx, double domain_ly);

}  // namespace deadoil
