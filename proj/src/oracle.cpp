#include "deadoil/oracle.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "deadoil/field_io.hpp"

namespace deadoil {

ScalarField smooth_random_field(const Grid2D& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    ScalarField out(g);
    for (int kx = 1; kx <= 3; ++kx) {
        for (int ky = 1; ky <= 3; ++ky) {
            const double c = coef(rng);
            for (int jj = 0; jj < g.my(); ++jj) {
                for (int ii = 0; ii < g.mx(); ++ii) {
                    out.at(ii, jj) += c * std::sin(kx * std::numbers::pi * g.x(ii) / g.lx) *
                                      std::sin(ky * std::numbers::pi * g.y(jj) / g.ly);
                }
            }
        }
    }
    return out;
}

double fd_directional(const std::function<double(const ControlTrajectory&)>& evaluate,
                      const ControlTrajectory& at, const ControlTrajectory& dir, double s) {
    require(s > 0, "fd_directional: step must be positive");
    require(at.levels() == dir.levels(), "fd_directional: direction level count mismatch");
    ControlTrajectory plus = at, minus = at;
    for (int n = 0; n < at.levels(); ++n) {
        axpy(plus.f[n], s, dir.f[n]);
        axpy(minus.f[n], -s, dir.f[n]);
    }
    const double jp = evaluate(plus), jm = evaluate(minus);
    require_numeric(finite(jp) && finite(jm), "fd_directional: nonfinite functional value");
    return (jp - jm) / (2.0 * s);
}

GateauxResult fd_gateaux(const ScalarField& u_n, const ScalarField& p_n, const ScalarField& f_n,
                         const GateauxDirection& dir, const CoefficientSet& coef,
                         const TimeGrid& tg, double s) {
    require(s > 0, "fd_gateaux: step must be positive");
    auto at = [&](double sign) {
        ScalarField u = u_n, p = p_n, f = f_n;
        axpy(u, sign * s, dir.e);
        axpy(p, sign * s, dir.w);
        axpy(f, sign * s, dir.h);
        // u_next, p_next frozen at the base point; the time rows then
        // contribute the exactly linear terms -e/tau, -w/tau to the
        // difference quotient, replaced below by the bare e, w the printed
        // derivative carries.
        return residual_F(u, u_n, p, p_n, f, coef, tg);
    };
    const StepResidual plus = at(+1.0), minus = at(-1.0);
    const double i2s = 1.0 / (2.0 * s);
    GateauxResult out{sub(plus.row1, minus.row1), sub(plus.row2, minus.row2)};
    for (double& x : out.xi1.v) x *= i2s;
    for (double& x : out.xi3.v) x *= i2s;
    axpy(out.xi1, 1.0 / tg.tau, dir.e);
    axpy(out.xi1, 1.0, dir.e);
    axpy(out.xi3, 1.0 / tg.tau, dir.w);
    axpy(out.xi3, 1.0, dir.w);
    return out;
}

ManufacturedField sine_decay_field(double lx, double ly, double amplitude, double rate) {
    const double kx = std::numbers::pi / lx, ky = std::numbers::pi / ly;
    ManufacturedField f;
    f.value = [=](double x, double y, double t) {
        return amplitude * std::sin(kx * x) * std::sin(ky * y) * std::exp(-rate * t);
    };
    f.dt = [=](double x, double y, double t) {
        return -rate * amplitude * std::sin(kx * x) * std::sin(ky * y) * std::exp(-rate * t);
    };
    f.dx = [=](double x, double y, double t) {
        return amplitude * kx * std::cos(kx * x) * std::sin(ky * y) * std::exp(-rate * t);
    };
    f.dy = [=](double x, double y, double t) {
        return amplitude * ky * std::sin(kx * x) * std::cos(ky * y) * std::exp(-rate * t);
    };
    f.lap = [=](double x, double y, double t) {
        return -(kx * kx + ky * ky) * amplitude * std::sin(kx * x) * std::sin(ky * y) *
               std::exp(-rate * t);
    };
    return f;
}

ManufacturedField sine_squared_field(double lx, double ly, double amplitude, double rate) {
    const double kx = std::numbers::pi / lx, ky = std::numbers::pi / ly;
    ManufacturedField f;
    f.value = [=](double x, double y, double t) {
        const double sx = std::sin(kx * x), sy = std::sin(ky * y);
        return amplitude * sx * sx * sy * sy * std::exp(-rate * t);
    };
    f.dt = [=](double x, double y, double t) {
        const double sx = std::sin(kx * x), sy = std::sin(ky * y);
        return -rate * amplitude * sx * sx * sy * sy * std::exp(-rate * t);
    };
    f.dx = [=](double x, double y, double t) {
        const double sy = std::sin(ky * y);
        return amplitude * kx * std::sin(2.0 * kx * x) * sy * sy * std::exp(-rate * t);
    };
    f.dy = [=](double x, double y, double t) {
        const double sx = std::sin(kx * x);
        return amplitude * ky * sx * sx * std::sin(2.0 * ky * y) * std::exp(-rate * t);
    };
    f.lap = [=](double x, double y, double t) {
        const double sx = std::sin(kx * x), sy = std::sin(ky * y);
        return 2.0 * amplitude *
               (kx * kx * std::cos(2.0 * kx * x) * sy * sy +
                ky * ky * sx * sx * std::cos(2.0 * ky * y)) *
               std::exp(-rate * t);
    };
    return f;
}

namespace {

// Analytic residual of the exact pair under the continuous operators:
//   Fu = du/dt - lap(phi(u)) - div(g(u) grad p)
//      = du/dt - phi''(u)|grad u|^2 - phi'(u) lap u
//        - g'(u) grad u . grad p - g(u) lap p
//   Fp = dp/dt - d'(u) grad u . grad p - d(u) lap p
struct AnalyticForcing {
    const ManufacturedField& eu;
    const ManufacturedField& ep;
    const CoefficientSet& coef;

    double fu(double x, double y, double t) const {
        const double u = eu.value(x, y, t);
        const double ux = eu.dx(x, y, t), uy = eu.dy(x, y, t), ul = eu.lap(x, y, t);
        const double px = ep.dx(x, y, t), py = ep.dy(x, y, t), pl = ep.lap(x, y, t);
        return eu.dt(x, y, t) - coef.d2phi(u) * (ux * ux + uy * uy) - coef.dphi(u) * ul -
               coef.dg(u) * (ux * px + uy * py) - coef.g(u) * pl;
    }
    double fp(double x, double y, double t) const {
        const double u = eu.value(x, y, t);
        const double ux = eu.dx(x, y, t), uy = eu.dy(x, y, t);
        const double px = ep.dx(x, y, t), py = ep.dy(x, y, t), pl = ep.lap(x, y, t);
        return ep.dt(x, y, t) - coef.dd(u) * (ux * px + uy * py) - coef.d(u) * pl;
    }
};

ScalarField sample_at_time(const Grid2D& g, const ManufacturedField& f, double t) {
    return sample_field(g, [&](double x, double y) { return f.value(x, y, t); });
}

// One sweep instance: integrate to T with the given forcing mode, return
// max-norm errors against the exact pair at t = T.
enum class ForcingMode { analytic, semidiscrete };

MmsRow run_case(const ManufacturedField& eu, const ManufacturedField& ep,
                const CoefficientSet& coef, const Grid2D& g, const TimeGrid& tg,
                ForcingMode mode) {
    const AnalyticForcing an{eu, ep, coef};
    StepForcing forcing_u, forcing_p;
    if (mode == ForcingMode::analytic) {
        forcing_u = [&](int n) {
            const double t = n * tg.tau;
            return sample_field(g, [&](double x, double y) { return an.fu(x, y, t); });
        };
        forcing_p = [&](int n) {
            const double t = n * tg.tau;
            return sample_field(g, [&](double x, double y) { return an.fp(x, y, t); });
        };
    } else {
        // Cancel the spatial truncation: subtract the scheme's own operators
        // applied to the exact nodal values, keep the analytic d/dt.
        forcing_u = [&](int n) {
            const double t = n * tg.tau;
            const ScalarField ue = sample_at_time(g, eu, t);
            const ScalarField pe = sample_at_time(g, ep, t);
            ScalarField out = sample_field(g, [&](double x, double y) { return eu.dt(x, y, t); });
            axpy(out, -1.0, laplacian(shifted_phi(coef, ue)));
            axpy(out, -1.0, div_coeff_grad(apply_fn(coef.g, ue), pe));
            return out;
        };
        forcing_p = [&](int n) {
            const double t = n * tg.tau;
            const ScalarField ue = sample_at_time(g, eu, t);
            const ScalarField pe = sample_at_time(g, ep, t);
            ScalarField out = sample_field(g, [&](double x, double y) { return ep.dt(x, y, t); });
            axpy(out, -1.0, div_coeff_grad(apply_fn(coef.d, ue), pe));
            return out;
        };
    }
    const ScalarField u0 = sample_at_time(g, eu, 0.0);
    const ScalarField p0 = sample_at_time(g, ep, 0.0);
    const StateTrajectory traj = solve_forward_forced(u0, p0, zero_controls(g, tg.N), coef, tg,
                                                      forcing_u, forcing_p);
    MmsRow row;
    row.hx = g.hx;
    row.tau = tg.tau;
    row.err_u = norm_max(sub(traj.u[tg.N], sample_at_time(g, eu, tg.T)));
    row.err_p = norm_max(sub(traj.p[tg.N], sample_at_time(g, ep, tg.T)));
    return row;
}

std::vector<double> orders(const std::vector<MmsRow>& rows, bool for_u) {
    std::vector<double> out;
    for (size_t i = 1; i < rows.size(); ++i) {
        const double e0 = for_u ? rows[i - 1].err_u : rows[i - 1].err_p;
        const double e1 = for_u ? rows[i].err_u : rows[i].err_p;
        out.push_back(std::log2(e0 / e1));
    }
    return out;
}

}  // namespace

MmsReport mms_study(const ManufacturedField& exact_u, const ManufacturedField& exact_p,
                    const CoefficientSet& coef, const std::vector<int>& spatial_nx,
                    double spatial_T, int coarsest_N, int temporal_nx, double temporal_T,
                    const std::vector<int>& temporal_N, double domain_lx, double domain_ly) {
    require(spatial_nx.size() >= 2 && temporal_N.size() >= 2,
            "mms_study: need at least two refinements per sweep");
    MmsReport rep;
    for (size_t i = 0; i < spatial_nx.size(); ++i) {
        const Grid2D g = build_grid(spatial_nx[i], spatial_nx[i], domain_lx, domain_ly);
        // tau tied to h^2 through the refinement ratio against the coarsest
        const double ratio = static_cast<double>(spatial_nx[i]) / spatial_nx[0];
        const int N = static_cast<int>(std::lround(coarsest_N * ratio * ratio));
        rep.spatial.push_back(run_case(exact_u, exact_p, coef, g, build_time_grid(spatial_T, N),
                                       ForcingMode::analytic));
    }
    for (int N : temporal_N) {
        const Grid2D g = build_grid(temporal_nx, temporal_nx, domain_lx, domain_ly);
        rep.temporal.push_back(run_case(exact_u, exact_p, coef, g, build_time_grid(temporal_T, N),
                                        ForcingMode::semidiscrete));
    }
    rep.order_u_spatial = orders(rep.spatial, true);
    rep.order_p_spatial = orders(rep.spatial, false);
    rep.order_u_temporal = orders(rep.temporal, true);
    rep.order_p_temporal = orders(rep.temporal, false);
    return rep;
}

std::string MmsReport::to_csv() const {
    std::ostringstream out;
    out << "hx,tau,err_u,err_p,order_u,order_p\n";
    auto block = [&](const char* label, const std::vector<MmsRow>& rows,
                     const std::vector<double>& ou, const std::vector<double>& op) {
        out << "# " << label << "\n";
        for (size_t i = 0; i < rows.size(); ++i) {
            out << format_double(rows[i].hx) << ',' << format_double(rows[i].tau) << ','
                << format_double(rows[i].err_u) << ',' << format_double(rows[i].err_p) << ',';
            if (i > 0)
                out << format_double(ou[i - 1]) << ',' << format_double(op[i - 1]);
            else
                out << ',';
            out << '\n';
        }
    };
    block("spatial sweep", spatial, order_u_spatial, order_p_spatial);
    block("temporal sweep", temporal, order_u_temporal, order_p_temporal);
    return out.str();
}

}  // namespace deadoil
