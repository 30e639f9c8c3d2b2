#pragma once

#include <string>
#include <vector>

#include "polarmg/config.hpp"
#include "polarmg/multigrid.hpp"

namespace polarmg {

/// Solver outcome as key=value lines for easy parsing and diffing.
void write_summary(const std::string& path, const SolverConfig& config,
                   const ConvergenceReport& report);

/// Residual history as CSV with header "cycle,residual,reduction"; one row
/// per recorded norm (iterations + 1 rows).
void write_history_csv(const std::string& path,
                       const ConvergenceReport& report);

/// Solution on the physical domain as a legacy-format ASCII VTK structured
/// grid; the angular direction repeats the first spoke to close the annulus.
/// Includes exact solution and error fields when the problem provides them.
void write_vtk(const std::string& path, const PolarGrid& grid,
               const GeometryMap& geometry, const ProblemCase& problem,
               const std::vector<double>& u);

/// Grid nodes as CSV: ring,angle,r,theta,x,y.
void write_grid_csv(const std::string& path, const PolarGrid& grid,
                    const GeometryMap& geometry);

}  // namespace polarmg
