#include <iostream>
#include <string>
#include <utility>

#include "CLI11.hpp"
#include "deadoil/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Adjoint-based optimal control of a coupled saturation-pressure system"};
    app.require_subcommand(1);

    const std::pair<const char*, const char*> commands[] = {
        {"forward", "integrate the state system and save field snapshots"},
        {"adjoint", "compute multipliers, the control gradient, and the stationarity report"},
        {"gradcheck", "compare the adjoint gradient against finite differences"},
        {"optimize", "run the descent loop and save the best control"},
        {"verify", "check coefficient hypotheses and scheme convergence orders"},
    };

    std::string config_path, chosen;
    deadoil::RunOverrides overrides;
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "scenario config file")->required();
        sub->add_option("--out", overrides.out_dir, "output directory (overrides [output] dir)");
        sub->add_option("--stride", overrides.stride, "save stride (overrides [output] stride)");
        sub->add_option("--seed", overrides.seed, "rng seed (overrides [gradcheck] seed)");
        sub->callback([&chosen, name = std::string(name)] { chosen = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : deadoil::kExitConfig;
    }
    return deadoil::run_scenario(config_path, chosen, overrides, std::cerr);
}
