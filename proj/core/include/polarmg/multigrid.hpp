#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "polarmg/geometry.hpp"
#include "polarmg/interpolation.hpp"
#include "polarmg/level_cache.hpp"
#include "polarmg/polar_grid.hpp"
#include "polarmg/problem.hpp"
#include "polarmg/smoother.hpp"
#include "polarmg/stencil.hpp"

namespace polarmg {

enum class CycleType { V, W, F };
enum class ResidualNormType { WeightedL2, Euclidean, Infinity };

CycleType parse_cycle_type(const std::string& name);
ResidualNormType parse_residual_norm_type(const std::string& name);
std::string to_string(CycleType c);
std::string to_string(ResidualNormType n);

/// Norm of v[0..n): weighted-l2 is sqrt((1/n) sum v_i^2), so a constant
/// vector has norm |c| and all three norms agree for n = 1.
double compute_norm(ResidualNormType type, const double* v, std::size_t n);

/// Iteration controls of the multigrid solver (grid and problem data travel
/// separately).
struct MultigridSettings {
    StencilMode stencil_mode = StencilMode::Take;
    BoundaryMode boundary_mode = BoundaryMode::AcrossOrigin;
    bool cache_profile = true;
    bool cache_geometry = false;  // forced on in Take mode
    int max_levels = 0;           // 0 = coarsen as far as possible
    int pre_smoothing = 1;
    int post_smoothing = 1;
    CycleType cycle = CycleType::V;
    bool extrapolation = false;
    bool fmg = false;
    int fmg_iterations = 2;
    CycleType fmg_cycle = CycleType::F;
    ResidualNormType norm_type = ResidualNormType::WeightedL2;
    int max_iterations = 150;
    double absolute_tolerance = -1.0;  // <= 0 disables the check
    double relative_tolerance = 1e-8;  // <= 0 disables the check
    int max_threads = 0;               // 0 = runtime default
    bool verbose = false;
};

/// Outcome of a solve: residual history, work and memory accounting, and
/// discretization errors against the manufactured solution when one exists.
struct ConvergenceReport {
    bool converged = false;
    int iterations = 0;        // multigrid cycles after initialization
    int fine_cycles_total = 0; // iterations plus full-multigrid start cycles
    std::vector<double> residual_norms;  // size iterations + 1
    double reduction_factor_mean = 0.0;  // geometric mean per cycle
    double exact_error_weighted = -1.0;  // scaled l2 error, -1 if unknown
    double exact_error_infinity = -1.0;
    double setup_seconds = 0.0;
    double solve_seconds = 0.0;
    FlopCounters flops;
    std::size_t peak_bytes = 0;
    std::map<std::string, std::size_t> memory_at_peak;
};

/**
 * \brief Geometric multigrid solver on a hierarchy of polar grids.
 *
 * The hierarchy drops every second ring and spoke until the grid no longer
 * coarsens (or max_levels is reached); every level carries its own cache,
 * matrix-free operator, and zebra line smoother, and the coarsest system is
 * factored directly. Cycles are V, W (two successive coarse cycles), or F
 * (coarse F followed by coarse V); full multigrid walks the hierarchy from
 * the coarsest level upward before iterating on the finest grid.
 *
 * With extrapolation enabled the finest level iterates on the implicitly
 * extrapolated operator M = (4 A_h - Inj^T A_2h Inj) / 3 with right-hand
 * side (4 b_h - Inj^T b_2h) / 3, which lifts the scheme to fourth order for
 * smooth solutions; coarse levels are unchanged, and the finest smoother
 * switches to its extrapolated sweeps.
 */
class MultigridSolver {
  public:
    MultigridSolver(GeometryMap geometry, ProblemCase problem,
                    PolarGrid fine_grid, MultigridSettings settings);
    ~MultigridSolver();

    MultigridSolver(const MultigridSolver&) = delete;
    MultigridSolver& operator=(const MultigridSolver&) = delete;

    /// Assembles the right-hand side, initializes (zero guess or full
    /// multigrid), and iterates until a tolerance or max_iterations hits.
    ConvergenceReport solve();

    int num_levels() const { return static_cast<int>(levels_.size()); }
    const PolarGrid& grid(int level = 0) const {
        return *levels_[level].grid;
    }
    const DiscreteOperator& op(int level = 0) const {
        return *levels_[level].op;
    }
    const Smoother& smoother(int level = 0) const {
        return *levels_[level].smoother;
    }
    const MultigridSettings& settings() const { return settings_; }
    const ProblemCase& problem() const { return problem_; }
    const GeometryMap& geometry() const { return geometry_; }

    /// Finest-level solution vector (valid after solve()).
    const std::vector<double>& solution() const { return levels_[0].u.raw(); }

    /// Scaled l2 and infinity norm of u - u_exact on the finest grid.
    std::pair<double, double> exact_errors() const;

  private:
    struct Level {
        std::unique_ptr<PolarGrid> grid;
        std::unique_ptr<LevelCache> cache;
        std::unique_ptr<DiscreteOperator> op;
        std::unique_ptr<Smoother> smoother;       // absent on the coarsest
        std::unique_ptr<SparseDirectFactor> direct;  // coarsest only
        TrackedVector u, f, res;
    };

    void build_hierarchy(PolarGrid fine_grid);
    void set_dirichlet_rows(int level, double* u) const;
    void mask_dirichlet_rows(int level, double* v) const;
    void assemble_level_rhs(int level);
    void build_extrapolated_rhs();  // f0 <- (4 b0 - Inj^T b1) / 3
    void smooth_level(int level, int steps);
    void coarse_solve(int level);
    void cycle(int level, CycleType type);
    void finest_cycle();
    void extrapolated_residual(double* out);
    void fmg_initialize();
    double residual_norm();
    double vector_norm(const double* v, int n) const;

    GeometryMap geometry_;
    ProblemCase problem_;
    MultigridSettings settings_;
    std::vector<Level> levels_;
    std::vector<LineWorkspace> workspaces_;
    FlopCounters flops_;
    double setup_seconds_ = 0.0;
    int fmg_cycles_run_ = 0;
};

}  // namespace polarmg
