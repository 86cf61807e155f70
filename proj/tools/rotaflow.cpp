#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rotaflow/artifacts.hpp"
#include "rotaflow/cell_problem.hpp"
#include "rotaflow/config.hpp"
#include "rotaflow/spectral_solver.hpp"
#include "rotaflow/verify.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_runtime = 1;
constexpr int exit_config = 2;
constexpr int exit_verification = 3;

void print_checks(const rotaflow::RunOutcome& outcome) {
    for (const auto& c : outcome.checks) {
        std::printf("%-4s %-18s %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
    }
}

int run_with_config(const std::string& path, bool cell, const std::string& out_override) {
    rotaflow::RunConfig cfg;
    try {
        cfg = rotaflow::load_config(path);
    } catch (const rotaflow::ConfigError& e) {
        std::fprintf(stderr, "config error: %s: %s\n", path.c_str(), e.what());
        return exit_config;
    }
    if (!out_override.empty()) cfg.out_dir = out_override;

    rotaflow::RunOutcome outcome;
    try {
        outcome = cell ? rotaflow::run_cell(cfg) : rotaflow::run_evolve(cfg);
    } catch (const rotaflow::SolverError& e) {
        std::fprintf(stderr, "solver aborted at step %zu: %s\n", e.step(), e.what());
        return exit_runtime;
    } catch (const rotaflow::NewtonStagnation& e) {
        std::fprintf(stderr, "cell solve failed: %s\n", e.what());
        return exit_runtime;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_config;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_runtime;
    }

    try {
        rotaflow::write_artifacts(cfg.out_dir, outcome.files);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_runtime;
    }
    std::printf("wrote %zu files to %s (config %s)\n", outcome.files.size(), cfg.out_dir.c_str(), cfg.hash().c_str());
    print_checks(outcome);
    return outcome.passed() ? exit_ok : exit_verification;
}

int run_verify(const std::string& suite, const std::string& summary) {
    rotaflow::SuiteResult result;
    try {
        result = rotaflow::run_suite(suite);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return exit_config;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "verification aborted: %s\n", e.what());
        return exit_runtime;
    }
    std::fputs(rotaflow::summary_table(result).c_str(), stdout);
    if (!summary.empty()) {
        std::ofstream os(summary, std::ios::binary | std::ios::trunc);
        os << rotaflow::summary_json(result);
        if (!os) {
            std::fprintf(stderr, "error: cannot write %s\n", summary.c_str());
            return exit_runtime;
        }
    }
    return result.passed() ? exit_ok : exit_verification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rotaflow: polar-split geometric flow simulator and verification suite"};
    app.require_subcommand(1);

    std::string evolve_config;
    std::string evolve_out;
    auto* evolve = app.add_subcommand("evolve", "Run an evolution and write CSV/SVG artifacts");
    evolve->add_option("config", evolve_config, "Configuration file")->required();
    evolve->add_option("--out", evolve_out, "Override output.dir");

    std::string suite;
    std::string summary;
    auto* verify = app.add_subcommand("verify", "Run an acceptance suite");
    verify->add_option("suite", suite, "heat | conservation | contraction | duhamel | geometry | cell | all")->required();
    verify->add_option("--summary", summary, "Write a JSON summary to this file");

    std::string cell_config;
    std::string cell_out;
    auto* cell = app.add_subcommand("cell", "Solve the cell problem for each cell.p");
    cell->add_option("config", cell_config, "Configuration file")->required();
    cell->add_option("--out", cell_out, "Override output.dir");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    if (*evolve) return run_with_config(evolve_config, false, evolve_out);
    if (*cell) return run_with_config(cell_config, true, cell_out);
    return run_verify(suite, summary);
}
