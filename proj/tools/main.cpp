// ambimerton: robust consumption/portfolio policies under drift,
// volatility and interest-rate ambiguity, with PDE and Monte Carlo
// verification subcommands.
#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ambimerton/cli.hpp"

namespace cli = ambimerton::cli;

int main(int argc, char** argv) {
    CLI::App app{"Robust Merton policies under parameter ambiguity"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    cli::OutputOptions options;
    std::uint64_t seed_value = 0;

    app.add_option("--config", config_path, "Path to the JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("--out", options.out_path, "Output file path (default: stdout)");
    app.add_option("--format", options.format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "svg"}))
        ->capture_default_str();
    auto* seed_opt = app.add_option("--seed", seed_value, "Override the Monte Carlo seed");
    app.add_option("--threads", options.threads,
                   "Worker threads (fallback: AMBIMERTON_THREADS, else 1)");
    app.add_flag("--reproducible", options.reproducible,
                 "Suppress timestamps so identical runs emit identical bytes");

    auto* policy = app.add_subcommand("policy", "Regimes, worst-case parameters and policy");
    auto* regions = app.add_subcommand("regions", "Regime map along a parameter sweep");
    auto* verify = app.add_subcommand("verify", "PDE solver vs closed form");
    auto* minimax = app.add_subcommand("minimax", "Brute-force minimax saddle report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::kExitValidation;
    }
    if (seed_opt->count() > 0) options.seed = seed_value;

    try {
        const cli::RunConfig config = cli::load_config(config_path);
        if (policy->parsed()) return cli::cmd_policy(config, options, std::cout);
        if (regions->parsed()) return cli::cmd_regions(config, options, std::cout);
        if (verify->parsed()) return cli::cmd_verify(config, options, std::cout);
        if (minimax->parsed()) return cli::cmd_minimax(config, options, std::cout);
        std::cerr << "error: no subcommand selected\n";
        return cli::kExitValidation;
    } catch (const ambimerton::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return cli::kExitValidation;
    } catch (const cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return cli::kExitValidation;
    } catch (const ambimerton::BudgetExceeded& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return cli::kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return cli::kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return cli::kExitNumeric;
    }
}
