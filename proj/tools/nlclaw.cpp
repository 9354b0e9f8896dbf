#include "nlclaw/cli.hpp"
#include "nlclaw/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    namespace cli = nlclaw::cli;

    CLI::App app{"Coefficient-freezing solver for the nonlocal conservation law "
                 "w_t + (f'(int w) g(w))_x = 0"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string experiment;
    bool quiet = false;
    auto* run = app.add_subcommand("run", "run the experiment described by a JSON config");
    run->add_option("--config", config_path, "scenario config (JSON)")->required();
    run->add_option("--out", out_dir, "output directory (overrides the config)");
    run->add_option("--experiment", experiment, "solve | stability | refine | regions");
    run->add_flag("--quiet", quiet, "suppress progress output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kExitConfig;
    }

    try {
        cli::RunConfig config = cli::load_config(config_path);
        if (!out_dir.empty()) {
            config.outputs.out_dir = out_dir;
        }
        if (!experiment.empty()) {
            config.experiment = cli::parse_experiment(experiment);
        }
        return cli::run(config, std::cout, quiet);
    } catch (const nlclaw::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kExitConfig;
    }
}
