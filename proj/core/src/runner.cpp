#include "polarmg/runner.hpp"

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <vector>

#include "polarmg/multigrid.hpp"
#include "polarmg/reporting.hpp"

namespace polarmg {

namespace {

std::unique_ptr<MultigridSolver> make_solver(const SolverConfig& config) {
    config.validate();
    PolarGrid grid = build_grid(config.grid_params());
    return std::make_unique<MultigridSolver>(
        config.make_geometry(), config.make_problem_case(), std::move(grid),
        config.multigrid_settings());
}

void ensure_dir(const std::string& dir) {
    if (!dir.empty()) std::filesystem::create_directories(dir);
}

std::string join(const std::string& dir, const char* name) {
    return (std::filesystem::path(dir) / name).string();
}

}  // namespace

int run_solve(const RunOptions& options) {
    MemoryTracker::instance().reset();
    std::unique_ptr<MultigridSolver> solver;
    try {
        solver = make_solver(options.config);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return kExitConfigError;
    }

    ConvergenceReport report;
    try {
        report = solver->solve();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return kExitConfigError;
    }

    const PolarGrid& g = solver->grid(0);
    std::printf("grid: %d x %d nodes on %d levels\n", g.n_r(), g.n_theta(),
                solver->num_levels());
    std::printf("%s after %d cycles (%d fine cycles total)\n",
                report.converged ? "converged" : "NOT converged",
                report.iterations, report.fine_cycles_total);
    std::printf("residual %.6e -> %.6e  (mean reduction %.4f)\n",
                report.residual_norms.front(), report.residual_norms.back(),
                report.reduction_factor_mean);
    if (report.exact_error_weighted >= 0.0)
        std::printf("exact error: weighted-l2 %.6e, infinity %.6e\n",
                    report.exact_error_weighted, report.exact_error_infinity);
    std::printf("time: setup %.3fs solve %.3fs\n", report.setup_seconds,
                report.solve_seconds);

    try {
        if (!options.output_dir.empty()) {
            ensure_dir(options.output_dir);
            write_summary(join(options.output_dir, "summary.txt"),
                          options.config, report);
            write_history_csv(join(options.output_dir, "history.csv"),
                              report);
            std::ofstream cfg(join(options.output_dir, "config.txt"));
            cfg << options.config.serialize();
            if (options.config.paraview)
                write_vtk(join(options.output_dir, "solution.vtk"),
                          solver->grid(0), solver->geometry(),
                          solver->problem(), solver->solution());
            if (options.dump_grid)
                write_grid_csv(join(options.output_dir, "grid.csv"),
                               solver->grid(0), solver->geometry());
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "output error: %s\n", e.what());
        return kExitConfigError;
    }

    return report.converged ? kExitConverged : kExitNotConverged;
}

int run_order_study(const RunOptions& options, int refinements) {
    if (refinements < 0) {
        std::fprintf(stderr,
                     "configuration error: refinements must be >= 0\n");
        return kExitConfigError;
    }
    struct Row {
        int n_r, n_theta;
        double err_w, err_inf;
    };
    std::vector<Row> rows;
    bool all_converged = true;
    for (int i = 0; i <= refinements; ++i) {
        SolverConfig config = options.config;
        config.divide_by_2 += i;
        std::unique_ptr<MultigridSolver> solver;
        try {
            solver = make_solver(config);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "configuration error: %s\n", e.what());
            return kExitConfigError;
        }
        ConvergenceReport report;
        try {
            report = solver->solve();
        } catch (const std::exception& e) {
            std::fprintf(stderr, "solver error: %s\n", e.what());
            return kExitConfigError;
        }
        if (report.exact_error_weighted < 0.0) {
            std::fprintf(stderr,
                         "configuration error: order study requires a "
                         "manufactured solution (problem=Polar)\n");
            return kExitConfigError;
        }
        all_converged = all_converged && report.converged;
        const PolarGrid& g = solver->grid(0);
        rows.push_back({g.n_r(), g.n_theta(), report.exact_error_weighted,
                        report.exact_error_infinity});
        if (i == 0) {
            std::printf("%9s %9s %14s %14s %8s %8s\n", "n_r", "n_theta",
                        "err_w", "err_inf", "ord_w", "ord_inf");
            std::printf("%9d %9d %14.6e %14.6e %8s %8s\n", g.n_r(),
                        g.n_theta(), report.exact_error_weighted,
                        report.exact_error_infinity, "-", "-");
        } else {
            const Row& prev = rows[rows.size() - 2];
            std::printf("%9d %9d %14.6e %14.6e %8.3f %8.3f\n", g.n_r(),
                        g.n_theta(), report.exact_error_weighted,
                        report.exact_error_infinity,
                        std::log2(prev.err_w / report.exact_error_weighted),
                        std::log2(prev.err_inf /
                                  report.exact_error_infinity));
        }
    }

    if (!options.output_dir.empty()) {
        ensure_dir(options.output_dir);
        std::ofstream out(join(options.output_dir, "orders.csv"));
        out.precision(17);
        out << "n_r,n_theta,err_weighted,err_infinity,order_weighted,"
               "order_infinity\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            out << rows[i].n_r << ',' << rows[i].n_theta << ','
                << rows[i].err_w << ',' << rows[i].err_inf << ',';
            if (i == 0)
                out << "nan,nan\n";
            else
                out << std::log2(rows[i - 1].err_w / rows[i].err_w) << ','
                    << std::log2(rows[i - 1].err_inf / rows[i].err_inf)
                    << '\n';
        }
    }
    return all_converged ? kExitConverged : kExitNotConverged;
}

int run_bench(const RunOptions& options, int repetitions) {
    if (repetitions < 1) repetitions = 1;
    MemoryTracker::instance().reset();
    std::unique_ptr<MultigridSolver> solver;
    try {
        solver = make_solver(options.config);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return kExitConfigError;
    }

    const PolarGrid& g = solver->grid(0);
    const DiscreteOperator& op = solver->op(0);
    const int n = g.num_nodes();
    std::vector<double> u(n), y(n), f(n, 0.0);
    std::mt19937 rng(20240611u);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double& v : u) v = dist(rng);

    const StencilMode mode = options.config.stencil_mode;
    op.apply(mode, u.data(), y.data());  // warm-up
    double t0 = omp_get_wtime();
    for (int r = 0; r < repetitions; ++r) op.apply(mode, u.data(), y.data());
    const double apply_ns = (omp_get_wtime() - t0) * 1e9 / repetitions / n;
    std::printf("nodes=%d levels=%d mode=%s\n", n, solver->num_levels(),
                to_string(mode).c_str());
    std::printf("apply_ns_per_node=%.2f\n", apply_ns);

    if (solver->num_levels() > 1) {
        const Smoother& smoother = solver->smoother(0);
        std::vector<LineWorkspace> ws(omp_get_max_threads());
        for (LineWorkspace& w : ws)
            w.resize(static_cast<std::size_t>(
                std::max(g.n_theta(), g.n_r())));
        FlopCounters flops;
        smoother.smooth(u.data(), f.data(), ws, &flops);  // warm-up
        t0 = omp_get_wtime();
        for (int r = 0; r < repetitions; ++r)
            smoother.smooth(u.data(), f.data(), ws, &flops);
        const double smooth_ns =
            (omp_get_wtime() - t0) * 1e9 / repetitions / n;
        std::printf("smooth_ns_per_node=%.2f\n", smooth_ns);
        std::printf("smooth_flops: tridiag_solve=%llu cyclic_solve=%llu "
                    "sparse_solve=%llu\n",
                    static_cast<unsigned long long>(flops.tridiag_solve),
                    static_cast<unsigned long long>(flops.cyclic_solve),
                    static_cast<unsigned long long>(flops.sparse_solve));
    }

    const auto live = MemoryTracker::instance().live_snapshot();
    std::printf("memory_total_doubles_per_node=%.3f\n",
                static_cast<double>(
                    MemoryTracker::instance().total_live_bytes()) /
                    (8.0 * n));
    for (const auto& [tag, bytes] : live)
        std::printf("memory[%s]=%zu\n", tag.c_str(), bytes);
    return kExitConverged;
}

}  // namespace polarmg
