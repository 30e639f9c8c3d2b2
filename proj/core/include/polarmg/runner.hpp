#pragma once

#include <string>

#include "polarmg/config.hpp"

namespace polarmg {

/// Inputs of one command invocation.
struct RunOptions {
    SolverConfig config;
    std::string output_dir;  // empty: no files written
    bool dump_grid = false;
};

/// Exit codes shared by all commands.
inline constexpr int kExitConverged = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitNotConverged = 2;

/// Runs one solve, prints a compact report, and optionally writes
/// summary.txt, history.csv, config.txt, solution.vtk (paraview=1), and
/// grid.csv into the output directory.
int run_solve(const RunOptions& options);

/// Solves on `refinements + 1` successively refined grids (divideBy2
/// increments), prints discretization errors with observed orders, and
/// writes orders.csv when an output directory is given.
int run_order_study(const RunOptions& options, int refinements);

/// Times the operator application and one smoothing step on the configured
/// finest grid and prints per-node cost together with the kernel operation
/// counts and tracked memory per node.
int run_bench(const RunOptions& options, int repetitions);

}  // namespace polarmg
