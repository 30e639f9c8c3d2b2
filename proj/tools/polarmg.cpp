// Command-line front end: solve, order-study, and bench subcommands sharing
// one flat configuration vocabulary (every config-file key doubles as a
// long option of the same name).

#include <array>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "polarmg/runner.hpp"

namespace {

constexpr std::array kConfigKeys = {
    "verbose",
    "paraview",
    "maxOpenMPThreads",
    "stencilDistributionMethod",
    "cacheProfileCoefficients",
    "cacheDomainGeometry",
    "DirBC_Interior",
    "R0",
    "Rmax",
    "nr_exp",
    "ntheta_exp",
    "anisotropic_factor",
    "divideBy2",
    "FMG",
    "FMG_iterations",
    "FMG_cycle",
    "extrapolation",
    "maxLevels",
    "preSmoothingSteps",
    "postSmoothingSteps",
    "multigridCycle",
    "residualNormType",
    "maxIterations",
    "absoluteTolerance",
    "relativeTolerance",
    "geometry",
    "alpha_jump",
    "kappa_eps",
    "delta_e",
    "problem",
    "alpha_coeff",
    "beta_coeff",
};

struct SubcommandState {
    CLI::App* app = nullptr;
    std::string config_file;
    std::string output_dir;
    bool dump_grid = false;
    std::array<std::string, kConfigKeys.size()> values;
};

void add_common_options(SubcommandState& s) {
    s.app->add_option("--config", s.config_file,
                      "Configuration file (flat key=value lines)")
        ->check(CLI::ExistingFile);
    s.app->add_option("--output-dir", s.output_dir,
                      "Directory for result files");
    for (std::size_t i = 0; i < kConfigKeys.size(); ++i)
        s.app->add_option(std::string("--") + kConfigKeys[i], s.values[i],
                          "Configuration key (overrides --config)");
}

/// Builds RunOptions from the parsed flags; returns false on a bad value
/// (message already printed).
bool collect(const SubcommandState& s, polarmg::RunOptions& out) {
    try {
        if (!s.config_file.empty())
            polarmg::apply_config_file(out.config, s.config_file);
        for (std::size_t i = 0; i < kConfigKeys.size(); ++i)
            if (s.app->count(std::string("--") + kConfigKeys[i]) > 0)
                out.config.set(kConfigKeys[i], s.values[i]);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return false;
    }
    out.output_dir = s.output_dir;
    out.dump_grid = s.dump_grid;
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Matrix-free geometric multigrid solver for -div(alpha grad u) + "
        "beta u = f on curvilinear disk domains"};
    app.require_subcommand(1);

    SubcommandState solve;
    solve.app = app.add_subcommand("solve", "Run one solve");
    add_common_options(solve);
    solve.app->add_flag("--dump-grid", solve.dump_grid,
                        "Also write the grid nodes as CSV");

    SubcommandState order;
    int refinements = 2;
    order.app = app.add_subcommand(
        "order-study", "Discretization-error orders over refinements");
    add_common_options(order);
    order.app->add_option("--refinements", refinements,
                          "Number of extra refinement levels");

    SubcommandState bench;
    int repetitions = 20;
    bench.app = app.add_subcommand(
        "bench", "Time the operator and smoother on the configured grid");
    add_common_options(bench);
    bench.app->add_option("--repetitions", repetitions,
                          "Timing repetitions");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : polarmg::kExitConfigError;
    }

    polarmg::RunOptions options;
    if (solve.app->parsed()) {
        if (!collect(solve, options)) return polarmg::kExitConfigError;
        return polarmg::run_solve(options);
    }
    if (order.app->parsed()) {
        if (!collect(order, options)) return polarmg::kExitConfigError;
        return polarmg::run_order_study(options, refinements);
    }
    if (!collect(bench, options)) return polarmg::kExitConfigError;
    return polarmg::run_bench(options, repetitions);
}
