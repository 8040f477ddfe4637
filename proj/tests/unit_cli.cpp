#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "deadoil/config.hpp"
#include "deadoil/field_io.hpp"
#include "deadoil/runner.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace deadoil;
using testutil::rel_err;
using testutil::thrown_message;

namespace fs = std::filesystem;

namespace {

std::string minimal_text() {
    return "[grid]\n"
           "nx = 16\n"
           "ny = 16\n"
           "lx = 4\n"
           "ly = 4\n"
           "[time]\n"
           "T = 0.05\n"
           "N = 8\n";
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream body;
    body << in.rdbuf();
    return body.str();
}

// Fresh scratch directory under the system temp root.
fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("deadoil_unit_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
    const fs::path p = dir / "scenario.cfg";
    std::ofstream out(p, std::ios::binary);
    out << text;
    REQUIRE(out.good());
    return p;
}

// Small stable scenario used by the subcommand tests: tau = 0.0025 sits
// under the diffusion bound 0.5/128 = 0.0039 for the default family on the
// unit square with h = 1/8.
std::string small_scenario_text() {
    return "[grid]\n"
           "nx = 8\n"
           "ny = 8\n"
           "lx = 1\n"
           "ly = 1\n"
           "[time]\n"
           "T = 0.01\n"
           "N = 4\n"
           "[state]\n"
           "init_u = sines:0.2\n"
           "init_p = sines:0.1:2:1\n";
}

}  // namespace

TEST_CASE("config parser fills documented defaults") {
    const ScenarioConfig cfg = parse_config_text(minimal_text(), "cfg");
    CHECK(cfg.nx == 16);
    CHECK(cfg.ny == 16);
    CHECK(cfg.lx == 4.0);
    CHECK(cfg.ly == 4.0);
    CHECK(cfg.T == 0.05);
    CHECK(cfg.N == 8);
    CHECK(cfg.init_u == "constant:0");
    CHECK(cfg.init_p == "constant:0");
    CHECK(cfg.coef_family == "default");
    CHECK(cfg.coef_table.empty());
    CHECK(cfg.c1 == 1.0);
    CHECK(cfg.c2 == 2.0);
    CHECK(cfg.beta1 == 1e-2);
    CHECK(cfg.q0 == 2.0);
    CHECK(cfg.target_u == "constant:0");
    CHECK(cfg.control_init == "zero");
    CHECK(cfg.opt.grad_tol == 1e-2);
    CHECK(cfg.opt.max_iter == 200);
    CHECK(cfg.opt.armijo_c == 1e-4);
    CHECK(cfg.opt.shrink == 0.5);
    CHECK(cfg.out_dir == "out");
    CHECK(cfg.stride == 1);
    CHECK(cfg.gc_directions == 10);
    CHECK(cfg.gc_step == 1e-5);
    CHECK(cfg.gc_tol == 1e-6);
    CHECK(cfg.gc_seed == 12345);
    CHECK(cfg.aggregate_state == "terminal");
    CHECK(cfg.adj_tol == 1e-10);
    CHECK(cfg.adj_max_iter == 500);
    CHECK(cfg.vr_min == -10.0);
    CHECK(cfg.vr_max == 10.0);
    CHECK(cfg.vr_samples == 1000);
    CHECK(cfg.opt.kkt_tol == 1e-10);
    CHECK(cfg.opt.kkt_max_iter == 500);
    CHECK(cfg.opt.kkt_mode == AggregateStateMode::terminal);
}

TEST_CASE("config parser accepts every section and override") {
    const std::string text = minimal_text() +
                             "[state]\n"
                             "init_u = sines:0.5:2:3\n"
                             "init_p = constant:1.5\n"
                             "[coefficients]\n"
                             "family = default\n"
                             "c1 = 0.5\n"
                             "c2 = 3\n"
                             "[cost]\n"
                             "beta1 = 0.25\n"
                             "q0 = 1.5\n"
                             "target_u = sines:1\n"
                             "[control]\n"
                             "init = constant:0.1\n"
                             "[optimizer]\n"
                             "grad_tol = 1e-4\n"
                             "max_iter = 50\n"
                             "armijo_c = 1e-3\n"
                             "shrink = 0.25\n"
                             "[output]\n"
                             "dir = runs/demo\n"
                             "stride = 2\n"
                             "[gradcheck]\n"
                             "directions = 3\n"
                             "step = 1e-6\n"
                             "tol = 1e-5\n"
                             "seed = 99\n"
                             "[adjoint]\n"
                             "aggregate_state = time-average\n"
                             "tol = 1e-8\n"
                             "max_iter = 40\n"
                             "[verify]\n"
                             "r_min = -2\n"
                             "r_max = 2\n"
                             "samples = 11\n";
    const ScenarioConfig cfg = parse_config_text(text, "cfg");
    CHECK(cfg.init_u == "sines:0.5:2:3");
    CHECK(cfg.init_p == "constant:1.5");
    CHECK(cfg.c1 == 0.5);
    CHECK(cfg.c2 == 3.0);
    CHECK(cfg.beta1 == 0.25);
    CHECK(cfg.q0 == 1.5);
    CHECK(cfg.target_u == "sines:1");
    CHECK(cfg.control_init == "constant:0.1");
    CHECK(cfg.opt.grad_tol == 1e-4);
    CHECK(cfg.opt.max_iter == 50);
    CHECK(cfg.opt.armijo_c == 1e-3);
    CHECK(cfg.opt.shrink == 0.25);
    CHECK(cfg.out_dir == "runs/demo");
    CHECK(cfg.stride == 2);
    CHECK(cfg.gc_directions == 3);
    CHECK(cfg.gc_step == 1e-6);
    CHECK(cfg.gc_tol == 1e-5);
    CHECK(cfg.gc_seed == 99);
    CHECK(cfg.aggregate_state == "time-average");
    CHECK(cfg.adj_tol == 1e-8);
    CHECK(cfg.adj_max_iter == 40);
    CHECK(cfg.vr_min == -2.0);
    CHECK(cfg.vr_max == 2.0);
    CHECK(cfg.vr_samples == 11);
    CHECK(cfg.opt.kkt_mode == AggregateStateMode::time_average);
    CHECK(cfg.opt.kkt_tol == 1e-8);
    CHECK(cfg.opt.kkt_max_iter == 40);
}

TEST_CASE("config parse errors name file, line, and offending token") {
    const auto parse = [](const std::string& text) {
        return thrown_message([&] { parse_config_text(text, "cfg"); });
    };
    CHECK(parse("[grid]\nfoo = 1\n") == "cfg:2: unknown key 'foo' in [grid]");
    CHECK(parse("[grud]\n") == "cfg:1: unknown section [grud]");
    CHECK(parse("[grid]\n[grid]\n") == "cfg:2: duplicate section [grid]");
    CHECK(parse("[grid]\nnx = 4\nnx = 5\n") == "cfg:3: duplicate key 'nx'");
    CHECK(parse("[grid]\nnx 4\n") == "cfg:2: expected 'key = value'");
    CHECK(parse("nx = 4\n") == "cfg:1: key 'nx' outside any section");
    CHECK(parse("[grid]\nnx =\n") == "cfg:2: empty key or value");
    // Comments and blank lines still advance the reported line number.
    CHECK(parse("# header comment\n\n[grid]\nbad = 1\n") ==
          "cfg:4: unknown key 'bad' in [grid]");
}

TEST_CASE("config parser reports missing required keys") {
    const std::string no_N = "[grid]\nnx = 16\nny = 16\nlx = 4\nly = 4\n[time]\nT = 0.05\n";
    CHECK(thrown_message([&] { parse_config_text(no_N, "cfg"); }) ==
          "cfg: missing required key time.N");
    CHECK(thrown_message([&] { parse_config_text("[time]\nT = 1\nN = 4\n", "cfg"); }) ==
          "cfg: missing required key grid.nx");
}

TEST_CASE("config parser rejects malformed numbers and ranges") {
    const auto parse = [](const std::string& text) {
        return thrown_message([&] { parse_config_text(text, "cfg"); });
    };
    CHECK(parse("[grid]\nnx = four\nny = 16\nlx = 4\nly = 4\n[time]\nT = 1\nN = 4\n")
              .find("not an integer: 'four'") != std::string::npos);
    CHECK(parse("[grid]\nnx = 16\nny = 16\nlx = abc\nly = 4\n[time]\nT = 1\nN = 4\n")
              .find("not a number: 'abc'") != std::string::npos);
    CHECK(parse(minimal_text() + "[output]\nstride = 0\n") ==
          "cfg: output.stride must be >= 1");
    CHECK(parse(minimal_text() + "[gradcheck]\nseed = -1\n")
              .find("must be nonnegative") != std::string::npos);
    CHECK(parse(minimal_text() + "[gradcheck]\nstep = 0\n") ==
          "cfg: [gradcheck] directions >= 1, step > 0, tol > 0 required");
    CHECK(parse(minimal_text() + "[adjoint]\naggregate_state = final\n") ==
          "cfg: [adjoint] aggregate_state must be 'terminal' or 'time-average'");
    CHECK(parse(minimal_text() + "[verify]\nsamples = 1\n") ==
          "cfg: [verify] r_min < r_max and samples >= 2 required");
}

TEST_CASE("config parser enforces the coefficient source rules") {
    const auto parse = [](const std::string& text) {
        return thrown_message([&] { parse_config_text(text, "cfg"); });
    };
    CHECK(parse(minimal_text() + "[coefficients]\nfamily = default\ntable = t.csv\n") ==
          "cfg: [coefficients] family and table are mutually exclusive");
    CHECK(parse(minimal_text() + "[coefficients]\nfamily = default\nc3 = 1\n") ==
          "cfg: [coefficients] c3 is derived for builtin families");
    CHECK(parse(minimal_text() + "[coefficients]\ntable = /no/such/table.csv\n"
                                 "c1 = 1\nc2 = 2\nc3 = 1\n") ==
          "cfg: coefficient table not found: /no/such/table.csv");
}

TEST_CASE("field and control spec diagnostics carry the config location") {
    const auto parse = [](const std::string& text) {
        return thrown_message([&] { parse_config_text(text, "cfg"); });
    };
    CHECK(parse(minimal_text() + "[state]\ninit_u = constant\n") ==
          "cfg: state.init_u: expected constant:<value>");
    CHECK(parse(minimal_text() + "[state]\ninit_p = sines:1:2\n") ==
          "cfg: state.init_p: expected sines:<amp> or sines:<amp>:<kx>:<ky>");
    CHECK(parse(minimal_text() + "[cost]\ntarget_u = sines:1:0:1\n") ==
          "cfg: cost.target_u: mode numbers must be >= 1");
    CHECK(parse(minimal_text() + "[cost]\ntarget_p = file:/no/such.csv\n") ==
          "cfg: cost.target_p: file not found: /no/such.csv");
    CHECK(parse(minimal_text() + "[state]\ninit_u = blob:3\n") ==
          "cfg: state.init_u: unknown field spec 'blob:3' (want constant:, sines:, or file:)");
    CHECK(parse(minimal_text() + "[control]\ninit = ramp\n") ==
          "cfg: control.init: unknown control spec 'ramp' (want zero, constant:, or file:)");
    CHECK(parse(minimal_text() + "[control]\ninit = file:/no/such_dir\n") ==
          "cfg: control.init: directory not found: /no/such_dir");
}

TEST_CASE("resolve_field_spec produces constants, sine modes, and file reads") {
    const Grid2D g = build_grid(4, 4, 1.0, 1.0);

    const ScalarField c = resolve_field_spec("constant:2.5", g, "t");
    for (double v : c.v) CHECK(v == 2.5);

    const ScalarField s = resolve_field_spec("sines:0.5:2:3", g, "t");
    const ScalarField want = sample_field(g, [&](double x, double y) {
        return 0.5 * std::sin(2 * std::numbers::pi * x) * std::sin(3 * std::numbers::pi * y);
    });
    CHECK(norm_max(sub(s, want)) == 0.0);

    // Bare sines:<amp> defaults to the fundamental mode.
    const ScalarField s11 = resolve_field_spec("sines:1", g, "t");
    const ScalarField want11 = sample_field(g, [&](double x, double y) {
        return std::sin(std::numbers::pi * x) * std::sin(std::numbers::pi * y);
    });
    CHECK(norm_max(sub(s11, want11)) == 0.0);

    const fs::path dir = scratch_dir("field_spec");
    write_field_csv((dir / "f.csv").string(), want);
    const ScalarField back = resolve_field_spec("file:" + (dir / "f.csv").string(), g, "t");
    CHECK(norm_max(sub(back, want)) == 0.0);
}

TEST_CASE("resolve_control_spec produces zero, constant, and file trajectories") {
    const Grid2D g = build_grid(4, 4, 1.0, 1.0);

    const ControlTrajectory z = resolve_control_spec("zero", g, 3, "t");
    CHECK(z.levels() == 3);
    for (const auto& f : z.f) CHECK(norm_max(f) == 0.0);

    const ControlTrajectory c = resolve_control_spec("constant:1.5", g, 2, "t");
    CHECK(c.levels() == 2);
    for (const auto& f : c.f) CHECK(norm_max(sub(f, ScalarField(g, 1.5))) == 0.0);

    const fs::path dir = scratch_dir("control_spec");
    write_field_csv((dir / "f_0000.csv").string(), ScalarField(g, 0.25));
    write_field_csv((dir / "f_0001.csv").string(), ScalarField(g, 0.75));
    const ControlTrajectory file = resolve_control_spec("file:" + dir.string(), g, 2, "t");
    CHECK(file.f[0].v[0] == 0.25);
    CHECK(file.f[1].v[0] == 0.75);

    const std::string msg =
        thrown_message([&] { resolve_control_spec("file:" + dir.string(), g, 3, "t"); });
    CHECK(msg.find("control level file not found") != std::string::npos);
    CHECK(msg.find("f_0002.csv") != std::string::npos);
}

TEST_CASE("build_scenario rejects cost parameters outside the admissible range") {
    const ScenarioConfig cfg = parse_config_text(minimal_text() + "[cost]\nq0 = 0.5\n", "cfg");
    CHECK(thrown_message([&] { build_scenario(cfg); }).find("q0 > 1") != std::string::npos);
}

TEST_CASE("manifest entries omit the output directory but keep everything else") {
    ScenarioConfig a = parse_config_text(minimal_text(), "cfg");
    ScenarioConfig b = a;
    a.out_dir = "runs/first";
    b.out_dir = "runs/second";
    const auto ma = manifest_entries(a);
    const auto mb = manifest_entries(b);
    CHECK(ma == mb);
    CHECK(ma.count("output.dir") == 0);
    CHECK(ma.at("output.stride") == "1");
    CHECK(ma.at("grid.nx") == "16");
    CHECK(ma.at("coefficients.family") == "default");
    CHECK(ma.count("coefficients.table") == 0);
}

TEST_CASE("forward run writes strided levels and a checksum manifest") {
    const fs::path dir = scratch_dir("forward");
    const fs::path out = dir / "out";
    const fs::path cfg = write_config(
        dir, minimal_text() + "[state]\ninit_p = sines:1\n[output]\ndir = " + out.string() +
                 "\nstride = 3\n");

    std::ostringstream diag;
    CHECK(run_scenario(cfg.string(), "forward", {}, diag) == kExitOk);
    CHECK(diag.str().empty());

    for (const char* name : {"u_0000.csv", "u_0003.csv", "u_0006.csv", "p_0000.csv",
                             "p_0003.csv", "p_0006.csv", "manifest"}) {
        CHECK(fs::exists(out / name));
    }
    CHECK(!fs::exists(out / "u_0001.csv"));
    CHECK(!fs::exists(out / "u_0008.csv"));

    const std::string manifest = slurp(out / "manifest");
    CHECK(manifest.rfind("subcommand = forward\n", 0) == 0);
    CHECK(manifest.find("config grid.nx = 16\n") != std::string::npos);
    CHECK(manifest.find("config output.stride = 3\n") != std::string::npos);
    CHECK(manifest.find("output.dir") == std::string::npos);

    // The artifact line is the FNV-1a checksum of the file on disk.
    const std::string want_line =
        "artifact u_0000.csv " + hex64(fnv1a64_file((out / "u_0000.csv").string())) + "\n";
    CHECK(manifest.find(want_line) != std::string::npos);
}

TEST_CASE("stride override propagates into artifacts and the manifest") {
    const fs::path dir = scratch_dir("stride_override");
    const fs::path cfg =
        write_config(dir, minimal_text() + "[output]\ndir = " + (dir / "a").string() + "\n");

    RunOverrides ov;
    ov.out_dir = (dir / "b").string();
    ov.stride = 4;
    std::ostringstream diag;
    CHECK(run_scenario(cfg.string(), "forward", ov, diag) == kExitOk);
    CHECK(!fs::exists(dir / "a"));
    CHECK(fs::exists(dir / "b" / "u_0004.csv"));
    CHECK(!fs::exists(dir / "b" / "u_0001.csv"));
    CHECK(slurp(dir / "b" / "manifest").find("config output.stride = 4\n") !=
          std::string::npos);
}

TEST_CASE("adjoint run writes multipliers, gradient levels, and the kkt report") {
    const fs::path dir = scratch_dir("adjoint");
    const fs::path out = dir / "out";
    const fs::path cfg = write_config(
        dir, small_scenario_text() + "[output]\ndir = " + out.string() + "\nstride = 2\n");

    std::ostringstream diag;
    CHECK(run_scenario(cfg.string(), "adjoint", {}, diag) == kExitOk);

    for (const char* name : {"lamu_0000.csv", "lamu_0002.csv", "lamu_0004.csv",
                             "lamp_0000.csv", "grad_0000.csv", "grad_0002.csv", "e1.csv",
                             "p1.csv", "kkt.txt", "manifest"}) {
        CHECK(fs::exists(out / name));
    }
    CHECK(!fs::exists(out / "grad_0004.csv"));

    const std::string kkt = slurp(out / "kkt.txt");
    for (const char* line : {"J = ", "grad_norm = ", "kkt_residual = ",
                             "aggregate_state = terminal", "aggregate_converged = yes",
                             "aggregate_iterations = ", "aggregate_residual = "}) {
        CHECK(kkt.find(line) != std::string::npos);
    }
    CHECK(diag.str().find("did not converge") == std::string::npos);
}

TEST_CASE("gradcheck run passes at the default tolerance and writes its table") {
    const fs::path dir = scratch_dir("gradcheck");
    const fs::path out = dir / "out";
    const fs::path cfg = write_config(
        dir, small_scenario_text() + "[gradcheck]\ndirections = 3\n[output]\ndir = " +
                 out.string() + "\n");

    std::ostringstream diag;
    CHECK(run_scenario(cfg.string(), "gradcheck", {}, diag) == kExitOk);
    const std::string csv = slurp(out / "gradcheck.csv");
    CHECK(csv.rfind("direction,fd_value,adjoint_value,rel_error\n", 0) == 0);
    CHECK(csv.find("\n0,") != std::string::npos);
    CHECK(csv.find("\n2,") != std::string::npos);
}

TEST_CASE("gradcheck failure exits with the verification code but keeps artifacts") {
    const fs::path dir = scratch_dir("gradcheck_fail");
    const fs::path out = dir / "out";
    const fs::path cfg = write_config(
        dir, small_scenario_text() + "[gradcheck]\ndirections = 2\ntol = 1e-16\n" +
                 "[output]\ndir = " + out.string() + "\n");

    std::ostringstream diag;
    CHECK(run_scenario(cfg.string(), "gradcheck", {}, diag) == kExitVerification);
    CHECK(diag.str().find("error: gradient check failed") != std::string::npos);
    CHECK(fs::exists(out / "gradcheck.csv"));
    CHECK(fs::exists(out / "manifest"));
}

TEST_CASE("optimize reruns produce byte-identical manifests and logs") {
    const fs::path dir = scratch_dir("optimize");
    const fs::path cfg = write_config(
        dir, small_scenario_text() + "[cost]\ntarget_u = sines:0.3\n" +
                 "[optimizer]\nmax_iter = 5\ngrad_tol = 1e-12\n" + "[output]\ndir = " +
                 (dir / "a").string() + "\n");

    std::ostringstream diag_a, diag_b;
    CHECK(run_scenario(cfg.string(), "optimize", {}, diag_a) == kExitOk);
    RunOverrides ov;
    ov.out_dir = (dir / "b").string();
    CHECK(run_scenario(cfg.string(), "optimize", ov, diag_b) == kExitOk);

    CHECK(slurp(dir / "a" / "manifest") == slurp(dir / "b" / "manifest"));
    CHECK(slurp(dir / "a" / "convergence.csv") == slurp(dir / "b" / "convergence.csv"));
    CHECK(fs::exists(dir / "a" / "f_0000.csv"));
    CHECK(fs::exists(dir / "a" / "f_0003.csv"));

    const std::string report = slurp(dir / "a" / "optimize_report.txt");
    CHECK(report.rfind("status = ", 0) == 0);
    CHECK(report.find("final_J = ") != std::string::npos);
    CHECK(diag_a.str().find("optimize: ") != std::string::npos);
}

TEST_CASE("config and dispatch failures map to the config exit code") {
    const fs::path dir = scratch_dir("errors");
    const fs::path bad_cost =
        write_config(dir, minimal_text() + "[cost]\nq0 = 0.5\n[output]\ndir = " +
                              (dir / "out").string() + "\n");

    std::ostringstream diag;
    CHECK(run_scenario(bad_cost.string(), "forward", {}, diag) == kExitConfig);
    CHECK(diag.str().find("error: ") != std::string::npos);
    CHECK(diag.str().find("q0 > 1") != std::string::npos);

    std::ostringstream diag2;
    const fs::path ok = write_config(dir, minimal_text() + "[output]\ndir = " +
                                              (dir / "out2").string() + "\n");
    CHECK(run_scenario(ok.string(), "frobnicate", {}, diag2) == kExitConfig);
    CHECK(diag2.str().find("unknown subcommand: frobnicate") != std::string::npos);

    std::ostringstream diag3;
    CHECK(run_scenario((dir / "missing.cfg").string(), "forward", {}, diag3) == kExitConfig);
    CHECK(diag3.str().find("cannot open config") != std::string::npos);
}

TEST_CASE("an unstable step size warns and exits with the numeric code") {
    const fs::path dir = scratch_dir("unstable");
    const fs::path cfg = write_config(dir,
                                      "[grid]\n"
                                      "nx = 32\nny = 32\nlx = 1\nly = 1\n"
                                      "[time]\n"
                                      "T = 24\nN = 120\n"
                                      "[state]\n"
                                      "init_p = sines:1\n"
                                      "[output]\n"
                                      "dir = " +
                                          (dir / "out").string() + "\n");

    std::ostringstream diag;
    CHECK(run_scenario(cfg.string(), "forward", {}, diag) == kExitNumeric);
    CHECK(diag.str().find("warning: tau = ") != std::string::npos);
    CHECK(diag.str().find("expect instability") != std::string::npos);
    CHECK(diag.str().find("error: ") != std::string::npos);
    CHECK(diag.str().find("at step") != std::string::npos);
}

TEST_CASE("verify run writes hypothesis and convergence reports") {
    const fs::path dir = scratch_dir("verify");
    const fs::path out = dir / "out";
    const fs::path cfg = write_config(
        dir, minimal_text() + "[verify]\nsamples = 200\n[output]\ndir = " + out.string() + "\n");

    std::ostringstream diag;
    CHECK(run_scenario(cfg.string(), "verify", {}, diag) == kExitOk);
    const std::string hyp = slurp(out / "hypotheses.txt");
    CHECK(hyp.find("all hypothesis checks passed") != std::string::npos);
    const std::string mms = slurp(out / "mms.csv");
    CHECK(mms.find("# spatial sweep") != std::string::npos);
    CHECK(mms.find("# temporal sweep") != std::string::npos);
}
