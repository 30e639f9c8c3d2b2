#include "polarmg/multigrid.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace polarmg {

CycleType parse_cycle_type(const std::string& name) {
    if (name == "V") return CycleType::V;
    if (name == "W") return CycleType::W;
    if (name == "F") return CycleType::F;
    throw std::invalid_argument("unknown cycle type '" + name +
                                "' (expected V, W, or F)");
}

ResidualNormType parse_residual_norm_type(const std::string& name) {
    if (name == "weighted-l2") return ResidualNormType::WeightedL2;
    if (name == "euclidean") return ResidualNormType::Euclidean;
    if (name == "infinity") return ResidualNormType::Infinity;
    throw std::invalid_argument("unknown residualNormType '" + name +
                                "' (expected weighted-l2, euclidean, or "
                                "infinity)");
}

std::string to_string(CycleType c) {
    switch (c) {
        case CycleType::V: return "V";
        case CycleType::W: return "W";
        case CycleType::F: return "F";
    }
    return "?";
}

std::string to_string(ResidualNormType n) {
    switch (n) {
        case ResidualNormType::WeightedL2: return "weighted-l2";
        case ResidualNormType::Euclidean: return "euclidean";
        case ResidualNormType::Infinity: return "infinity";
    }
    return "?";
}

double compute_norm(ResidualNormType type, const double* v, std::size_t n) {
    if (type == ResidualNormType::Infinity) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(v[i]));
        return m;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += v[i] * v[i];
    if (type == ResidualNormType::WeightedL2)
        return std::sqrt(acc / static_cast<double>(n));
    return std::sqrt(acc);
}

MultigridSolver::MultigridSolver(GeometryMap geometry, ProblemCase problem,
                                 PolarGrid fine_grid,
                                 MultigridSettings settings)
    : geometry_(geometry),
      problem_(std::move(problem)),
      settings_(settings) {
    const double t0 = omp_get_wtime();
    if (settings_.max_threads > 0)
        omp_set_num_threads(settings_.max_threads);
    build_hierarchy(std::move(fine_grid));
    if (settings_.extrapolation && num_levels() < 2)
        throw std::invalid_argument(
            "extrapolation requires at least two grid levels");
    workspaces_.resize(omp_get_max_threads());
    const std::size_t scratch = static_cast<std::size_t>(
        std::max(grid(0).n_theta(), grid(0).n_r()));
    for (LineWorkspace& w : workspaces_) w.resize(scratch);
    setup_seconds_ = omp_get_wtime() - t0;
}

void MultigridSolver::build_hierarchy(PolarGrid fine_grid) {
    std::vector<PolarGrid> grids;
    grids.push_back(std::move(fine_grid));
    while ((settings_.max_levels == 0 ||
            static_cast<int>(grids.size()) < settings_.max_levels) &&
           can_coarsen(grids.back()))
        grids.push_back(coarsen(grids.back()));

    // Take mode rebuilds rows on every application, which is only viable
    // with the geometry coefficients cached.
    const bool cache_geometry = settings_.cache_geometry ||
                                settings_.stencil_mode == StencilMode::Take;

    const int L = static_cast<int>(grids.size());
    levels_.resize(L);
    for (int i = 0; i < L; ++i) {
        Level& lv = levels_[i];
        const std::string tag = "level" + std::to_string(i);
        lv.grid = std::make_unique<PolarGrid>(std::move(grids[i]));
        lv.cache = std::make_unique<LevelCache>(
            *lv.grid, geometry_, problem_, settings_.cache_profile,
            cache_geometry, tag);
        lv.op = std::make_unique<DiscreteOperator>(*lv.grid, *lv.cache,
                                                   settings_.boundary_mode);
        const std::size_t n = lv.grid->num_nodes();
        lv.u = TrackedVector(tag + "/vectors", n);
        lv.f = TrackedVector(tag + "/vectors", n);
        lv.res = TrackedVector(tag + "/vectors", n);
        if (i + 1 < L) {
            lv.smoother = std::make_unique<Smoother>(
                *lv.op, settings_.stencil_mode, tag);
        } else {
            std::vector<int> nodes(lv.grid->num_nodes());
            std::iota(nodes.begin(), nodes.end(), 0);
            std::vector<SparseDirectFactor::Triplet> triplets;
            for (const CooEntry& e : lv.op->assemble_coo(nodes))
                triplets.push_back({e.row, e.col, e.value});
            lv.direct = std::make_unique<SparseDirectFactor>(
                static_cast<int>(nodes.size()), triplets);
            MemoryTracker::instance().add(tag + "/direct",
                                          lv.direct->bytes());
        }
    }
}

MultigridSolver::~MultigridSolver() {
    for (int i = 0; i < num_levels(); ++i)
        if (levels_[i].direct)
            MemoryTracker::instance().remove(
                "level" + std::to_string(i) + "/direct",
                levels_[i].direct->bytes());
}

void MultigridSolver::set_dirichlet_rows(int level, double* u) const {
    const Level& lv = levels_[level];
    const PolarGrid& g = *lv.grid;
    const int N = g.n_r() - 1;
    for (int t = 0; t < g.n_theta(); ++t)
        u[g.index(N, t)] = problem_.dirichlet_u(g.radius(N), g.angle(t));
    if (settings_.boundary_mode == BoundaryMode::InteriorDirichlet)
        for (int t = 0; t < g.n_theta(); ++t)
            u[g.index(0, t)] =
                problem_.dirichlet_u(g.radius(0), g.angle(t));
}

void MultigridSolver::mask_dirichlet_rows(int level, double* v) const {
    const Level& lv = levels_[level];
    const PolarGrid& g = *lv.grid;
    const int N = g.n_r() - 1;
    for (int t = 0; t < g.n_theta(); ++t) v[g.index(N, t)] = 0.0;
    if (settings_.boundary_mode == BoundaryMode::InteriorDirichlet)
        for (int t = 0; t < g.n_theta(); ++t) v[g.index(0, t)] = 0.0;
}

void MultigridSolver::assemble_level_rhs(int level) {
    levels_[level].op->assemble_rhs(levels_[level].f.data());
}

void MultigridSolver::build_extrapolated_rhs() {
    Level& l0 = levels_[0];
    Level& l1 = levels_[1];
    const int n0 = l0.grid->num_nodes();
    const int n1 = l1.grid->num_nodes();
    for (int p = 0; p < n0; ++p) l0.f[p] *= 4.0 / 3.0;
    for (int p = 0; p < n1; ++p) l1.res[p] = -l1.f[p] / 3.0;
    inject_transpose_add(*l0.grid, *l1.grid, l1.res.data(), l0.f.data());
    set_dirichlet_rows(0, l0.f.data());
}

void MultigridSolver::smooth_level(int level, int steps) {
    Level& lv = levels_[level];
    const bool extrapolated = level == 0 && settings_.extrapolation;
    for (int i = 0; i < steps; ++i) {
        if (extrapolated)
            lv.smoother->smooth_extrapolated(lv.u.data(), lv.f.data(),
                                             workspaces_, &flops_);
        else
            lv.smoother->smooth(lv.u.data(), lv.f.data(), workspaces_,
                                &flops_);
    }
}

void MultigridSolver::coarse_solve(int level) {
    Level& lv = levels_[level];
    std::copy(lv.f.raw().begin(), lv.f.raw().end(), lv.u.raw().begin());
    lv.direct->solve(lv.u.data(), nullptr, &flops_.sparse_solve);
}

void MultigridSolver::cycle(int level, CycleType type) {
    Level& lv = levels_[level];
    if (level == num_levels() - 1) {
        coarse_solve(level);
        return;
    }
    Level& lc = levels_[level + 1];
    smooth_level(level, settings_.pre_smoothing);
    if (level == 0 && settings_.extrapolation)
        extrapolated_residual(lv.res.data());
    else
        lv.op->residual(settings_.stencil_mode, lv.u.data(), lv.f.data(),
                        lv.res.data());
    restrict_transpose(*lv.grid, *lc.grid, lv.res.data(), lc.f.data());
    mask_dirichlet_rows(level + 1, lc.f.data());
    std::fill(lc.u.raw().begin(), lc.u.raw().end(), 0.0);
    switch (type) {
        case CycleType::V:
            cycle(level + 1, CycleType::V);
            break;
        case CycleType::W:
            cycle(level + 1, CycleType::W);
            cycle(level + 1, CycleType::W);
            break;
        case CycleType::F:
            cycle(level + 1, CycleType::F);
            cycle(level + 1, CycleType::V);
            break;
    }
    prolongate_add(*lv.grid, *lc.grid, lc.u.data(), lv.u.data());
    smooth_level(level, settings_.post_smoothing);
}

void MultigridSolver::finest_cycle() { cycle(0, settings_.cycle); }

void MultigridSolver::extrapolated_residual(double* out) {
    Level& l0 = levels_[0];
    Level& l1 = levels_[1];
    const PolarGrid& g0 = *l0.grid;
    const int n0 = g0.num_nodes();
    const int n1 = l1.grid->num_nodes();
    l0.op->apply(settings_.stencil_mode, l0.u.data(), out);
    inject(g0, *l1.grid, l0.u.data(), l1.u.data());
    l1.op->apply(settings_.stencil_mode, l1.u.data(), l1.res.data());
    for (int p = 0; p < n0; ++p)
        out[p] = l0.f[p] - (4.0 / 3.0) * out[p];
    for (int p = 0; p < n1; ++p) l1.res[p] *= 1.0 / 3.0;
    inject_transpose_add(g0, *l1.grid, l1.res.data(), out);
    const int N = g0.n_r() - 1;
    for (int t = 0; t < g0.n_theta(); ++t) {
        const int p = g0.index(N, t);
        out[p] = l0.f[p] - l0.u[p];
    }
    if (settings_.boundary_mode == BoundaryMode::InteriorDirichlet) {
        for (int t = 0; t < g0.n_theta(); ++t) {
            const int p = g0.index(0, t);
            out[p] = l0.f[p] - l0.u[p];
        }
    }
}

void MultigridSolver::fmg_initialize() {
    const int L = num_levels();
    assemble_level_rhs(L - 1);
    coarse_solve(L - 1);
    for (int lf = L - 2; lf >= 0; --lf) {
        prolongate(*levels_[lf].grid, *levels_[lf + 1].grid,
                   levels_[lf + 1].u.data(), levels_[lf].u.data());
        set_dirichlet_rows(lf, levels_[lf].u.data());
        assemble_level_rhs(lf);
        if (lf == 0 && settings_.extrapolation) build_extrapolated_rhs();
        for (int c = 0; c < settings_.fmg_iterations; ++c) {
            cycle(lf, settings_.fmg_cycle);
            if (lf == 0) ++fmg_cycles_run_;
        }
    }
}

double MultigridSolver::residual_norm() {
    Level& l0 = levels_[0];
    if (settings_.extrapolation)
        extrapolated_residual(l0.res.data());
    else
        l0.op->residual(settings_.stencil_mode, l0.u.data(), l0.f.data(),
                        l0.res.data());
    return vector_norm(l0.res.data(), l0.grid->num_nodes());
}

double MultigridSolver::vector_norm(const double* v, int n) const {
    return compute_norm(settings_.norm_type, v, static_cast<std::size_t>(n));
}

std::pair<double, double> MultigridSolver::exact_errors() const {
    if (!problem_.has_solution()) return {-1.0, -1.0};
    const Level& l0 = levels_[0];
    const PolarGrid& g = *l0.grid;
    double acc = 0.0;
    double inf = 0.0;
    for (int s = 0; s < g.n_r(); ++s) {
        for (int t = 0; t < g.n_theta(); ++t) {
            const double e = l0.u[g.index(s, t)] -
                             problem_.exact_u(g.radius(s), g.angle(t));
            acc += e * e;
            inf = std::max(inf, std::abs(e));
        }
    }
    return {std::sqrt(acc / g.num_nodes()), inf};
}

ConvergenceReport MultigridSolver::solve() {
    ConvergenceReport rep;
    const double t0 = omp_get_wtime();
    if (settings_.max_threads > 0)
        omp_set_num_threads(settings_.max_threads);
    flops_ = FlopCounters{};
    fmg_cycles_run_ = 0;

    if (settings_.fmg) {
        fmg_initialize();
    } else {
        Level& l0 = levels_[0];
        assemble_level_rhs(0);
        if (settings_.extrapolation) {
            assemble_level_rhs(1);
            build_extrapolated_rhs();
        }
        std::fill(l0.u.raw().begin(), l0.u.raw().end(), 0.0);
        set_dirichlet_rows(0, l0.u.data());
    }

    const double abs_tol = settings_.absolute_tolerance;
    const double rel_tol = settings_.relative_tolerance;
    const double r0 = residual_norm();
    rep.residual_norms.push_back(r0);
    rep.converged = r0 == 0.0 || (abs_tol > 0.0 && r0 <= abs_tol);
    if (settings_.verbose)
        std::printf("cycle %3d  residual %.6e\n", 0, r0);

    int it = 0;
    while (!rep.converged && it < settings_.max_iterations) {
        finest_cycle();
        ++it;
        const double r = residual_norm();
        rep.residual_norms.push_back(r);
        if (settings_.verbose)
            std::printf("cycle %3d  residual %.6e  reduction %.4f\n", it, r,
                        rep.residual_norms[it - 1] > 0.0
                            ? r / rep.residual_norms[it - 1]
                            : 0.0);
        rep.converged = (abs_tol > 0.0 && r <= abs_tol) ||
                        (rel_tol > 0.0 && r <= rel_tol * r0);
    }

    rep.iterations = it;
    rep.fine_cycles_total = it + fmg_cycles_run_;
    const double r_end = rep.residual_norms.back();
    if (it > 0 && r0 > 0.0 && r_end > 0.0)
        rep.reduction_factor_mean = std::pow(r_end / r0, 1.0 / it);
    const auto [ew, ei] = exact_errors();
    rep.exact_error_weighted = ew;
    rep.exact_error_infinity = ei;
    rep.setup_seconds = setup_seconds_;
    rep.solve_seconds = omp_get_wtime() - t0;
    rep.flops = flops_;
    rep.flops.sparse_factor += levels_.back().direct->factor_ops();
    rep.peak_bytes = MemoryTracker::instance().peak_bytes();
    rep.memory_at_peak = MemoryTracker::instance().peak_snapshot();
    return rep;
}

}  // namespace polarmg
