#include "polarmg/reporting.hpp"

#include <fstream>
#include <stdexcept>

namespace polarmg {

namespace {

std::ofstream open_or_throw(const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open output file '" + path + "'");
    out.precision(17);
    return out;
}

}  // namespace

void write_summary(const std::string& path, const SolverConfig& config,
                   const ConvergenceReport& report) {
    std::ofstream out = open_or_throw(path);
    out << "converged=" << (report.converged ? 1 : 0) << '\n';
    out << "iterations=" << report.iterations << '\n';
    out << "fine_cycles_total=" << report.fine_cycles_total << '\n';
    out << "residual_initial=" << report.residual_norms.front() << '\n';
    out << "residual_final=" << report.residual_norms.back() << '\n';
    out << "reduction_factor_mean=" << report.reduction_factor_mean << '\n';
    out << "exact_error_weighted=" << report.exact_error_weighted << '\n';
    out << "exact_error_infinity=" << report.exact_error_infinity << '\n';
    out << "setup_seconds=" << report.setup_seconds << '\n';
    out << "solve_seconds=" << report.solve_seconds << '\n';
    out << "flops_tridiag_factor=" << report.flops.tridiag_factor << '\n';
    out << "flops_tridiag_solve=" << report.flops.tridiag_solve << '\n';
    out << "flops_cyclic_solve=" << report.flops.cyclic_solve << '\n';
    out << "flops_sparse_factor=" << report.flops.sparse_factor << '\n';
    out << "flops_sparse_solve=" << report.flops.sparse_solve << '\n';
    out << "memory_peak_bytes=" << report.peak_bytes << '\n';
    for (const auto& [tag, bytes] : report.memory_at_peak)
        out << "memory[" << tag << "]=" << bytes << '\n';
    out << "# configuration\n";
    out << config.serialize();
}

void write_history_csv(const std::string& path,
                       const ConvergenceReport& report) {
    std::ofstream out = open_or_throw(path);
    out << "cycle,residual,reduction\n";
    for (std::size_t i = 0; i < report.residual_norms.size(); ++i) {
        out << i << ',' << report.residual_norms[i] << ',';
        if (i == 0 || report.residual_norms[i - 1] == 0.0)
            out << "nan";
        else
            out << report.residual_norms[i] / report.residual_norms[i - 1];
        out << '\n';
    }
}

void write_vtk(const std::string& path, const PolarGrid& grid,
               const GeometryMap& geometry, const ProblemCase& problem,
               const std::vector<double>& u) {
    std::ofstream out = open_or_throw(path);
    const int n_r = grid.n_r();
    const int n_theta = grid.n_theta();
    const int nt_closed = n_theta + 1;
    const long npoints = static_cast<long>(n_r) * nt_closed;

    out << "# vtk DataFile Version 3.0\n";
    out << "polarmg solution\n";
    out << "ASCII\n";
    out << "DATASET STRUCTURED_GRID\n";
    out << "DIMENSIONS " << nt_closed << ' ' << n_r << " 1\n";
    out << "POINTS " << npoints << " double\n";
    for (int s = 0; s < n_r; ++s) {
        for (int t = 0; t < nt_closed; ++t) {
            double x, y;
            geometry.map(grid.radius(s), grid.angle(t % n_theta), x, y);
            out << x << ' ' << y << " 0\n";
        }
    }
    out << "POINT_DATA " << npoints << '\n';
    out << "SCALARS u double 1\nLOOKUP_TABLE default\n";
    for (int s = 0; s < n_r; ++s)
        for (int t = 0; t < nt_closed; ++t)
            out << u[grid.index(s, t % n_theta)] << '\n';
    if (problem.has_solution()) {
        out << "SCALARS u_exact double 1\nLOOKUP_TABLE default\n";
        for (int s = 0; s < n_r; ++s)
            for (int t = 0; t < nt_closed; ++t)
                out << problem.exact_u(grid.radius(s),
                                       grid.angle(t % n_theta))
                    << '\n';
        out << "SCALARS error double 1\nLOOKUP_TABLE default\n";
        for (int s = 0; s < n_r; ++s)
            for (int t = 0; t < nt_closed; ++t)
                out << u[grid.index(s, t % n_theta)] -
                           problem.exact_u(grid.radius(s),
                                           grid.angle(t % n_theta))
                    << '\n';
    }
}

void write_grid_csv(const std::string& path, const PolarGrid& grid,
                    const GeometryMap& geometry) {
    std::ofstream out = open_or_throw(path);
    out << "ring,angle,r,theta,x,y\n";
    for (int s = 0; s < grid.n_r(); ++s) {
        for (int t = 0; t < grid.n_theta(); ++t) {
            double x, y;
            geometry.map(grid.radius(s), grid.angle(t), x, y);
            out << s << ',' << t << ',' << grid.radius(s) << ','
                << grid.angle(t) << ',' << x << ',' << y << '\n';
        }
    }
}

}  // namespace polarmg
