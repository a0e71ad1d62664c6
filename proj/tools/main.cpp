#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "abk/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Bayesian inference and simulation for the 1967 Abakaliki smallpox outbreak"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    app.add_option("-c,--config", config_path, "JSON config file with flat keys");
    app.add_option("--set", overrides, "override a config key, e.g. --set mcmc.iterations=1000");

    auto* validate = app.add_subcommand("validate", "load and cross-check all inputs");
    auto* mcmc = app.add_subcommand("mcmc", "run the data-augmentation sampler");
    auto* simulate = app.add_subcommand("simulate", "forward-simulate outbreaks");
    auto* analyze = app.add_subcommand("analyze", "posterior post-processing and model checks");
    auto* sensitivity = app.add_subcommand("sensitivity", "re-run inference over stage-duration settings");
    auto* report = app.add_subcommand("report", "bundle summary tables into a report");
    for (auto* sub : {validate, mcmc, simulate, analyze, sensitivity, report}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    abk::RunConfig cfg;
    try {
        cfg = abk::load_run_config(config_path, overrides);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (validate->parsed()) return abk::cmd_validate(cfg, std::cout);
        if (mcmc->parsed()) return abk::cmd_mcmc(cfg, std::cout);
        if (simulate->parsed()) return abk::cmd_simulate(cfg, std::cout);
        if (analyze->parsed()) return abk::cmd_analyze(cfg, std::cout);
        if (sensitivity->parsed()) return abk::cmd_sensitivity(cfg, std::cout);
        if (report->parsed()) return abk::cmd_report(cfg, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
