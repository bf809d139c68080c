// Scenario runner: regenerates figure datasets as plain-text artifacts.
//
//   bohmflow run fig3 --out data/fig3
//   bohmflow --preset fig1 --dt 5e-4 --grid 401
//   bohmflow --config my.cfg
//
// Exit codes: 0 success, 2 configuration error, 3 numerical error, 4 I/O error.

#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bohm/errors.hpp"
#include "bohm/scenario.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;
constexpr int kIoError = 4;

std::filesystem::path default_out(const std::string& preset)
{
    if (const char* env = std::getenv("BOHMFLOW_OUT_DIR"); env != nullptr && *env != '\0') {
        return std::filesystem::path(env) / preset;
    }
    return std::filesystem::path("bohmflow-out") / preset;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bohmian trajectory scenarios for two-slit and bipartite Gaussian states"};
    app.set_version_flag("--version", std::string(bohm::kToolVersion));

    std::optional<std::string> out, preset, dt, t_end, grid, threads;
    std::optional<std::filesystem::path> config_file;

    app.add_option("--out", out, "Output directory (default $BOHMFLOW_OUT_DIR/<preset> or bohmflow-out/<preset>)");
    app.add_option("--dt", dt, "Integrator time step");
    app.add_option("--t-end", t_end, "Final integration time");
    app.add_option("--grid", grid, "Minimum samples per spatial axis");
    app.add_option("--preset", preset, "Scenario name");
    app.add_option("--config", config_file, "Flat key = value configuration file");
    app.add_option("--threads", threads, "Worker threads for trajectory ensembles (0 = all cores)");

    CLI::App* run = app.add_subcommand("run", "Run a named preset");
    std::optional<std::string> run_preset;
    run->add_option("preset", run_preset, "Scenario name");
    run->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    try {
        std::map<std::string, std::string> overrides;
        auto flag = [&](const char* key, const std::optional<std::string>& value) {
            if (value) {
                overrides[key] = *value;
            }
        };
        flag("preset", run_preset);
        flag("preset", preset);
        flag("dt", dt);
        flag("t_end", t_end);
        flag("grid", grid);
        flag("threads", threads);
        flag("out", out);

        bohm::ScenarioConfig cfg = bohm::resolve_config(config_file, overrides);
        if (cfg.out.empty()) {
            cfg.out = default_out(cfg.preset);
        }

        const bohm::RunManifest manifest = bohm::run_scenario(cfg);
        std::cout << cfg.preset << ": " << manifest.artifacts.size() << " artifacts in " << cfg.out.string() << "\n";
        return 0;
    } catch (const bohm::InvalidArgument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kConfigError;
    } catch (const bohm::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kIoError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
}
