#pragma once

#include <optional>
#include <string>

#include "polarmg/geometry.hpp"
#include "polarmg/multigrid.hpp"
#include "polarmg/polar_grid.hpp"
#include "polarmg/problem.hpp"
#include "polarmg/stencil.hpp"

namespace polarmg {

/**
 * \brief Complete run configuration: flat key=value file format, identical
 * command-line flag names, frozen defaults.
 *
 * Two values resolve their defaults from context when left unset: R0 (1e-5 *
 * Rmax across the origin, 1e-2 * Rmax with an interior Dirichlet boundary)
 * and delta_e (0.2 for Shafranov, 1.4 for Czarny, 0 for CirclePolar).
 * validate() checks ranges and rejects option combinations this solver does
 * not implement, naming the offending key.
 */
struct SolverConfig {
    int verbose = 0;                                  // verbose
    bool paraview = false;                            // paraview
    int max_threads = 0;                              // maxOpenMPThreads
    StencilMode stencil_mode = StencilMode::Take;     // stencilDistributionMethod
    bool cache_profile = true;                        // cacheProfileCoefficients
    bool cache_geometry = false;                      // cacheDomainGeometry
    bool dirbc_interior = false;                      // DirBC_Interior
    std::optional<double> r0;                         // R0
    double rmax = 1.3;                                // Rmax
    int nr_exp = 6;                                   // nr_exp
    int ntheta_exp = 6;                               // ntheta_exp
    int anisotropic_factor = 0;                       // anisotropic_factor
    int divide_by_2 = 0;                              // divideBy2
    bool fmg = false;                                 // FMG
    int fmg_iterations = 2;                           // FMG_iterations
    CycleType fmg_cycle = CycleType::F;               // FMG_cycle
    int extrapolation = 0;                            // extrapolation
    int max_levels = 0;                               // maxLevels
    int pre_smoothing = 1;                            // preSmoothingSteps
    int post_smoothing = 1;                           // postSmoothingSteps
    CycleType cycle = CycleType::V;                   // multigridCycle
    ResidualNormType norm_type =
        ResidualNormType::WeightedL2;                 // residualNormType
    int max_iterations = 150;                         // maxIterations
    double absolute_tolerance = -1.0;                 // absoluteTolerance
    double relative_tolerance = 1e-8;                 // relativeTolerance
    GeometryKind geometry = GeometryKind::Czarny;     // geometry
    double alpha_jump = 0.7;                          // alpha_jump
    double kappa_eps = 0.3;                           // kappa_eps
    std::optional<double> delta_e;                    // delta_e
    ProblemKind problem = ProblemKind::PolarOscillation;  // problem
    AlphaCoeff alpha_coeff = AlphaCoeff::Zoni;        // alpha_coeff
    BetaCoeff beta_coeff = BetaCoeff::InverseAlpha;   // beta_coeff

    /// Applies one key=value pair; throws std::invalid_argument naming the
    /// key on unknown keys or unparsable values.
    void set(const std::string& key, const std::string& value);

    /// Range and support checks; throws std::invalid_argument naming the key.
    void validate() const;

    double resolved_r0() const;
    double resolved_delta_e() const;
    BoundaryMode boundary_mode() const {
        return parse_boundary_mode(dirbc_interior);
    }

    GridBuildParams grid_params() const;
    MultigridSettings multigrid_settings() const;
    GeometryMap make_geometry() const;
    ProblemCase make_problem_case() const;

    /// All keys as key=value lines (resolved values); parsing the output
    /// reproduces the configuration exactly.
    std::string serialize() const;
};

/// Parses a flat key=value file ('#' comments and blank lines allowed);
/// throws std::invalid_argument with the line number on malformed input.
SolverConfig load_config_file(const std::string& path);

/// Applies key=value pairs from the file on top of an existing configuration.
void apply_config_file(SolverConfig& config, const std::string& path);

}  // namespace polarmg
