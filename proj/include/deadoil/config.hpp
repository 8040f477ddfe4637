// Scenario configuration: strict sectioned key = value files, resolution of
// field/control specs into runtime objects, and the manifest key dump.
//
// Sections and keys (defaults in parentheses, * = required):
//   [grid]         nx*, ny*, lx*, ly*
//   [time]         T*, N*
//   [state]        init_u, init_p          field spec ("constant:0")
//   [coefficients] family ("default") | table, c1 (1), c2 (2), c3 (table only)
//   [cost]         beta1 (1e-2), q0 (2), target_u, target_p ("constant:0")
//   [control]      init ("zero")
//   [optimizer]    grad_tol (1e-2), max_iter (200), armijo_c (1e-4), shrink (0.5)
//   [output]       dir ("out"), stride (1)
//   [gradcheck]    directions (10), step (1e-5), tol (1e-6), seed (12345)
//   [adjoint]      aggregate_state ("terminal"), tol (1e-10), max_iter (500)
//   [verify]       r_min (-10), r_max (10), samples (1000)
//
// Field spec grammar:   constant:<v> | sines:<amp>[:<kx>:<ky>] | file:<path>
// Control spec grammar: zero | constant:<v> | file:<dir with f_%04d.csv>
#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "deadoil/adjoint.hpp"
#include "deadoil/optimizer.hpp"

namespace deadoil {

struct ScenarioConfig {
    int nx = 0, ny = 0;
    double lx = 0, ly = 0;
    double T = 0;
    int N = 0;

    std::string init_u = "constant:0", init_p = "constant:0";

    std::string coef_family = "default";  // empty when a table is given
    std::string coef_table;               // empty when a family is named
    double c1 = 1, c2 = 2, c3 = 0;        // c3 only meaningful for tables

    double beta1 = 1e-2, q0 = 2;
    std::string target_u = "constant:0", target_p = "constant:0";

    std::string control_init = "zero";

    OptimizerOpts opt;  // kkt_* filled from [adjoint]

    std::string out_dir = "out";
    int stride = 1;

    int gc_directions = 10;
    double gc_step = 1e-5, gc_tol = 1e-6;
    uint64_t gc_seed = 12345;

    std::string aggregate_state = "terminal";
    double adj_tol = 1e-10;
    int adj_max_iter = 500;

    double vr_min = -10, vr_max = 10;
    int vr_samples = 1000;
};

// Strict parse: unknown sections or keys, duplicates, malformed numbers, and
// missing required keys are ConfigErrors naming the file, line, and key.
// Referenced files (tables, field files, control directories) must exist.
ScenarioConfig parse_config(const std::string& path);
ScenarioConfig parse_config_text(const std::string& text, const std::string& origin);

ScalarField resolve_field_spec(const std::string& spec, const Grid2D& g,
                               const std::string& where);
ControlTrajectory resolve_control_spec(const std::string& spec, const Grid2D& g, int N,
                                       const std::string& where);

// Fully resolved runtime objects for one scenario.
struct Scenario {
    Grid2D grid;
    TimeGrid tg;
    CoefficientSet coef;
    CostParams cost;
    ScalarField u0, p0;
    ControlTrajectory control0;
    AggregateStateMode agg_mode = AggregateStateMode::terminal;
};

Scenario build_scenario(const ScenarioConfig& cfg);

// Canonical "section.key -> value" view of the resolved config for the run
// manifest. Deliberately excludes output.dir so runs into different
// directories stay byte-comparable.
std::map<std::string, std::string> manifest_entries(const ScenarioConfig& cfg);

}  // namespace deadoil
