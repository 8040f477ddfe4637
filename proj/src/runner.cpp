#include "deadoil/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "deadoil/field_io.hpp"
#include "deadoil/oracle.hpp"

namespace deadoil {

namespace {

namespace fs = std::filesystem;

std::string level_name(const char* stem, int n) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s_%04d.csv", stem, n);
    return buf;
}

struct ArtifactWriter {
    fs::path dir;
    std::vector<std::string> names;

    void field(const std::string& name, const ScalarField& f) {
        write_field_csv((dir / name).string(), f);
        names.push_back(name);
    }
    void text(const std::string& name, const std::string& body) {
        std::ofstream out(dir / name, std::ios::binary);
        out << body;
        require(out.good(), "cannot write artifact: " + (dir / name).string());
        names.push_back(name);
    }
};

void write_manifest(const ArtifactWriter& w, const ScenarioConfig& cfg,
                    const std::string& subcommand) {
    std::ostringstream body;
    body << "subcommand = " << subcommand << "\n";
    for (const auto& [key, value] : manifest_entries(cfg))
        body << "config " << key << " = " << value << "\n";
    std::vector<std::string> sorted = w.names;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& name : sorted)
        body << "artifact " << name << " " << hex64(fnv1a64_file((w.dir / name).string()))
             << "\n";
    std::ofstream out(w.dir / "manifest", std::ios::binary);
    out << body.str();
    require(out.good(), "cannot write manifest in " + w.dir.string());
}

void warn_stability(const Scenario& s, std::ostream& diag) {
    const double bound = stability_bound(s.grid, s.coef, 0.0);
    if (s.tg.tau > bound) {
        diag << "warning: tau = " << format_double(s.tg.tau)
             << " exceeds the explicit step bound " << format_double(bound)
             << "; expect instability\n";
    }
}

double control_dot(const ControlTrajectory& a, const ControlTrajectory& b) {
    double sum = 0;
    for (int n = 0; n < a.levels(); ++n) sum += inner(a.f[n], b.f[n]);
    return sum;
}

void run_forward(const ScenarioConfig& cfg, const Scenario& s, ArtifactWriter& w,
                 std::ostream& diag) {
    warn_stability(s, diag);
    const StateTrajectory traj = solve_forward(s.u0, s.p0, s.control0, s.coef, s.tg);
    for (int n = 0; n <= s.tg.N; ++n) {
        if (n % cfg.stride != 0) continue;
        w.field(level_name("u", n), traj.u[n]);
        w.field(level_name("p", n), traj.p[n]);
    }
}

void run_adjoint(const ScenarioConfig& cfg, const Scenario& s, ArtifactWriter& w,
                 std::ostream& diag) {
    warn_stability(s, diag);
    const StateTrajectory traj = solve_forward(s.u0, s.p0, s.control0, s.coef, s.tg);
    const AdjointTrajectory adj = solve_adjoint_discrete(traj, s.cost, s.coef, s.tg);
    const ControlTrajectory grad = gradient_wrt_control(s.control0, adj, s.cost, s.tg);
    const AggregateAdjointResult agg = solve_adjoint_aggregate(
        traj, s.cost, s.coef, s.tg, cfg.adj_tol, cfg.adj_max_iter, s.agg_mode);

    for (int n = 0; n <= s.tg.N; ++n) {
        if (n % cfg.stride != 0) continue;
        w.field(level_name("lamu", n), adj.lam_u[n]);
        w.field(level_name("lamp", n), adj.lam_p[n]);
    }
    for (int n = 0; n < s.tg.N; ++n) {
        if (n % cfg.stride != 0) continue;
        w.field(level_name("grad", n), grad.f[n]);
    }
    w.field("e1.csv", agg.adj.e1);
    w.field("p1.csv", agg.adj.p1);

    const double J = evaluate_cost(traj, s.control0, s.cost, s.tg);
    std::ostringstream report;
    report << "J = " << format_double(J) << "\n"
           << "grad_norm = " << format_double(std::sqrt(control_dot(grad, grad))) << "\n"
           << "kkt_residual = " << format_double(kkt_residual(s.control0, agg.adj, s.cost, s.tg))
           << "\n"
           << "aggregate_state = " << cfg.aggregate_state << "\n"
           << "aggregate_converged = " << (agg.converged ? "yes" : "no") << "\n"
           << "aggregate_iterations = " << agg.iterations << "\n"
           << "aggregate_residual = " << format_double(agg.residual) << "\n";
    w.text("kkt.txt", report.str());
    if (!agg.converged) {
        diag << "warning: aggregate stationarity solve did not converge (residual "
             << format_double(agg.residual) << " after " << agg.iterations << " iterations)\n";
    }
}

std::string run_gradcheck(const ScenarioConfig& cfg, const Scenario& s, ArtifactWriter& w) {
    const StateTrajectory traj = solve_forward(s.u0, s.p0, s.control0, s.coef, s.tg);
    const AdjointTrajectory adj = solve_adjoint_discrete(traj, s.cost, s.coef, s.tg);
    const ControlTrajectory grad = gradient_wrt_control(s.control0, adj, s.cost, s.tg);
    const auto evaluate = [&](const ControlTrajectory& f) {
        return evaluate_cost(solve_forward(s.u0, s.p0, f, s.coef, s.tg), f, s.cost, s.tg);
    };

    std::mt19937_64 rng(cfg.gc_seed);
    std::ostringstream csv;
    csv << "direction,fd_value,adjoint_value,rel_error\n";
    double worst = 0;
    for (int d = 0; d < cfg.gc_directions; ++d) {
        ControlTrajectory dir;
        for (int n = 0; n < s.tg.N; ++n) dir.f.push_back(smooth_random_field(s.grid, rng));
        const double fd = fd_directional(evaluate, s.control0, dir, cfg.gc_step);
        const double ad = control_dot(grad, dir);
        const double rel =
            std::fabs(fd - ad) / std::max({std::fabs(fd), std::fabs(ad), 1e-14});
        worst = std::max(worst, rel);
        csv << d << ',' << format_double(fd) << ',' << format_double(ad) << ','
            << format_double(rel) << '\n';
    }
    w.text("gradcheck.csv", csv.str());
    if (worst > cfg.gc_tol) {
        return "gradient check failed: max relative error " + format_double(worst) +
               " exceeds tol " + format_double(cfg.gc_tol);
    }
    return {};
}

void run_optimize(const ScenarioConfig& cfg, const Scenario& s, ArtifactWriter& w,
                  std::ostream& diag) {
    warn_stability(s, diag);
    const OptimizationResult res =
        minimize(s.u0, s.p0, s.control0, s.cost, s.coef, s.tg, cfg.opt);
    w.text("convergence.csv", res.log_csv());
    for (int n = 0; n < s.tg.N; ++n) w.field(level_name("f", n), res.best_control.f[n]);

    const size_t last = res.J_history.size() - 1;
    std::ostringstream report;
    report << "status = " << to_string(res.status) << "\n"
           << "iterations = " << last << "\n"
           << "final_J = " << format_double(res.J_history[last]) << "\n"
           << "final_grad_norm = " << format_double(res.grad_norm_history[last]) << "\n"
           << "final_kkt_residual = " << format_double(res.kkt_history[last]) << "\n";
    w.text("optimize_report.txt", report.str());
    diag << "optimize: " << to_string(res.status) << " after " << last << " iterations, J = "
         << format_double(res.J_history[last]) << "\n";
}

// Fixed manufactured-solution sweeps on the unit square with the scenario's
// coefficients. The coarsest step counts back off until the explicit bound
// holds; refinements keep tau proportional to h^2 (spatial) or halve tau at
// fixed grid (temporal).
MmsReport canonical_mms(const CoefficientSet& coef) {
    const ManufacturedField exact_u = sine_squared_field(1.0, 1.0, 0.5, 1.0);
    const ManufacturedField exact_p = sine_squared_field(1.0, 1.0, 0.5, 1.0);
    const double T_spatial = 0.05;
    int N0 = 128;
    while (T_spatial / N0 > 0.8 * stability_bound(build_grid(16, 16, 1, 1), coef, 1.0)) N0 *= 2;
    double T_temporal = 0.02;
    while (T_temporal / 256 > 0.8 * stability_bound(build_grid(32, 32, 1, 1), coef, 1.0))
        T_temporal /= 2;
    return mms_study(exact_u, exact_p, coef, {16, 32, 64}, T_spatial, N0, 32, T_temporal,
                     {256, 512, 1024}, 1.0, 1.0);
}

std::string run_verify(const ScenarioConfig& cfg, const Scenario& s, ArtifactWriter& w) {
    const HypothesisReport hyp = verify_hypotheses(s.coef, cfg.vr_min, cfg.vr_max,
                                                   cfg.vr_samples);
    w.text("hypotheses.txt", hyp.to_text());
    const MmsReport mms = canonical_mms(s.coef);
    w.text("mms.csv", mms.to_csv());

    std::string failure;
    if (!hyp.all_pass) failure = "coefficient hypothesis checks failed (see hypotheses.txt)";
    const double osu = mms.order_u_spatial.back(), osp = mms.order_p_spatial.back();
    const double otu = mms.order_u_temporal.back(), otp = mms.order_p_temporal.back();
    const bool spatial_ok = std::fabs(osu - 2.0) <= 0.2 && std::fabs(osp - 2.0) <= 0.2;
    const bool temporal_ok = std::fabs(otu - 1.0) <= 0.2 && std::fabs(otp - 1.0) <= 0.2;
    if (!spatial_ok || !temporal_ok) {
        if (!failure.empty()) failure += "; ";
        failure += "convergence orders out of band (spatial u/p " + format_double(osu) + "/" +
                   format_double(osp) + " want 2.0 +- 0.2, temporal u/p " + format_double(otu) +
                   "/" + format_double(otp) + " want 1.0 +- 0.2)";
    }
    return failure;
}

}  // namespace

int run_scenario(const std::string& config_path, const std::string& subcommand,
                 const RunOverrides& overrides, std::ostream& diag) {
    try {
        ScenarioConfig cfg = parse_config(config_path);
        if (overrides.out_dir) cfg.out_dir = *overrides.out_dir;
        if (overrides.stride) cfg.stride = *overrides.stride;
        require(cfg.stride >= 1, "stride must be >= 1");
        if (overrides.seed) cfg.gc_seed = *overrides.seed;

        const Scenario s = build_scenario(cfg);
        fs::create_directories(cfg.out_dir);
        ArtifactWriter w{fs::path(cfg.out_dir), {}};

        std::string failure;
        if (subcommand == "forward") {
            run_forward(cfg, s, w, diag);
        } else if (subcommand == "adjoint") {
            run_adjoint(cfg, s, w, diag);
        } else if (subcommand == "gradcheck") {
            failure = run_gradcheck(cfg, s, w);
        } else if (subcommand == "optimize") {
            run_optimize(cfg, s, w, diag);
        } else if (subcommand == "verify") {
            failure = run_verify(cfg, s, w);
        } else {
            throw ConfigError("unknown subcommand: " + subcommand);
        }
        write_manifest(w, cfg, subcommand);
        if (!failure.empty()) throw VerificationError(failure);
        return kExitOk;
    } catch (const ConfigError& e) {
        diag << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const VerificationError& e) {
        diag << "error: " << e.what() << "\n";
        return kExitVerification;
    } catch (const NumericError& e) {
        diag << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        diag << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

}  // namespace deadoil
