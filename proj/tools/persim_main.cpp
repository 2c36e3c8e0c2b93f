// Command-line front end: one subcommand per pipeline stage plus `run` (all
// stages) and `validate` (catalog-check an external persona file).
//
// Exit codes: 0 success, 2 configuration error, 3 transport error,
// 4 data error, 1 anything else (including `validate` finding invalid rows).

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "persim/error.hpp"
#include "persim/orchestrator.hpp"
#include "persim/version.hpp"

namespace {

int dispatch(const std::string &command, const std::string &config_path,
             const std::string &personas_path) {
    if (command == "validate") {
        const std::size_t invalid = persim::cmd_validate(personas_path, std::cout);
        std::cout << "total invalid: " << invalid << "\n";
        return invalid == 0 ? 0 : 1;
    }
    const persim::RunContext ctx = persim::load_run_context(config_path);
    if (command == "sample") {
        persim::cmd_sample(ctx);
    } else if (command == "generate") {
        persim::cmd_generate(ctx);
    } else if (command == "simulate") {
        persim::cmd_simulate(ctx);
    } else if (command == "evaluate") {
        persim::cmd_evaluate(ctx);
    } else if (command == "report") {
        persim::cmd_report(ctx);
    } else if (command == "run") {
        persim::cmd_run(ctx);
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"synthetic-persona opinion survey harness"};
    app.set_version_flag("--version", persim::kVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::string personas_path;
    std::string command;

    const auto add_stage = [&](const std::string &name, const std::string &description) {
        CLI::App *sub = app.add_subcommand(name, description);
        sub->add_option("-c,--config", config_path, "run configuration JSON")
            ->required()
            ->check(CLI::ExistingFile);
        sub->callback([&command, name] { command = name; });
        return sub;
    };

    add_stage("sample", "sample meta personas from the census joint table");
    add_stage("generate", "generate richer persona tiers via the configured backends");
    add_stage("simulate", "run the opinion survey over every persona population");
    add_stage("evaluate", "aggregate answers and score alignment against ground truth");
    add_stage("report", "export election, cross-simulation, topic, and text reports");
    add_stage("run", "run all pipeline stages in order");

    CLI::App *validate = app.add_subcommand("validate", "catalog-check a persona JSONL file");
    validate->add_option("personas", personas_path, "persona JSONL file")
        ->required()
        ->check(CLI::ExistingFile);
    validate->callback([&command] { command = "validate"; });

    CLI11_PARSE(app, argc, argv);

    try {
        return dispatch(command, config_path, personas_path);
    } catch (const persim::ConfigError &err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    } catch (const persim::TransportError &err) {
        std::cerr << "transport error: " << err.what() << "\n";
        return 3;
    } catch (const persim::DataError &err) {
        std::cerr << "data error: " << err.what() << "\n";
        return 4;
    } catch (const std::exception &err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
}
