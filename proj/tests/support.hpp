#pragma once

// Shared fixtures and dense oracles for the unit tests. Everything here is
// deliberately independent of the library's own row-building and solve code
// paths: dense matrices are accumulated from individual stencil rows, linear
// systems are solved by a plain LU with partial pivoting plus one step of
// iterative refinement, and norms are recomputed locally.

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "polarmg/level_cache.hpp"
#include "polarmg/multigrid.hpp"
#include "polarmg/smoother.hpp"
#include "polarmg/stencil.hpp"

namespace testsup {

using namespace polarmg;

// ---------------------------------------------------------------------------
// Problem builders

/// u = r^2: radial polynomial whose right-hand side reduces to the classical
/// polar Laplacian, f = -Delta u = -4, for the identity polar mapping.
class RadialSquare final : public ManufacturedSolution {
  public:
    double u(double r, double) const override { return r * r; }
    double u_r(double r, double) const override { return 2.0 * r; }
    double u_theta(double, double) const override { return 0.0; }
};

inline GeometryMap make_map(GeometryKind kind) {
    switch (kind) {
        case GeometryKind::Shafranov:
            return GeometryMap(kind, 0.3, 0.2);
        case GeometryKind::Czarny:
            return GeometryMap(kind, 0.3, 1.4);
        default:
            return GeometryMap(kind, 0.0, 0.0);
    }
}

/// Full verification problem: Zoni profile, beta = 1/alpha, polar solution.
inline ProblemCase polar_case(double rmax) {
    return make_problem(ProblemKind::PolarOscillation, AlphaCoeff::Zoni,
                        BetaCoeff::InverseAlpha, rmax);
}

/// alpha = 1, beta = 0, no manufactured solution (homogeneous Dirichlet).
inline ProblemCase plain_case(double rmax) {
    return make_problem(ProblemKind::None, AlphaCoeff::Poisson,
                        BetaCoeff::Zero, rmax);
}

/// alpha = 1, beta = 0, u = r^2 (closed-form right-hand side -4).
inline ProblemCase rsquare_case(double rmax) {
    return ProblemCase(AlphaCoeff::Poisson, BetaCoeff::Zero,
                       std::make_shared<RadialSquare>(), rmax);
}

// ---------------------------------------------------------------------------
// Operator fixture

/// Owns grid, geometry, problem, cache, and operator together so the cache's
/// internal pointers stay valid. Not movable for the same reason.
struct OperatorFixture {
    PolarGrid grid;
    GeometryMap geom;
    ProblemCase problem;
    LevelCache cache;
    DiscreteOperator op;

    OperatorFixture(PolarGrid g, GeometryMap gm, ProblemCase pc,
                    BoundaryMode boundary, bool cache_profile = true,
                    bool cache_geometry = true)
        : grid(std::move(g)),
          geom(gm),
          problem(std::move(pc)),
          cache(grid, geom, problem, cache_profile, cache_geometry,
                "test/cache"),
          op(grid, cache, boundary) {}

    OperatorFixture(const OperatorFixture&) = delete;
    OperatorFixture& operator=(const OperatorFixture&) = delete;
};

// ---------------------------------------------------------------------------
// Dense oracles

/// Dense n x n matrix accumulated row by row from the stencil.
inline std::vector<double> dense_operator(const OperatorFixture& fx,
                                          bool raw = false) {
    const int n = fx.grid.num_nodes();
    std::vector<double> A(static_cast<std::size_t>(n) * n, 0.0);
    StencilRow row;
    for (int s = 0; s < fx.grid.n_r(); ++s) {
        for (int t = 0; t < fx.grid.n_theta(); ++t) {
            if (raw)
                fx.op.row_raw(s, t, row);
            else
                fx.op.row(s, t, row);
            const int p = fx.grid.index(s, t);
            for (int i = 0; i < row.count; ++i)
                A[static_cast<std::size_t>(p) * n + row.cols[i]] +=
                    row.vals[i];
        }
    }
    return A;
}

inline void dense_apply(const std::vector<double>& A,
                        const std::vector<double>& u, std::vector<double>& y) {
    const int n = static_cast<int>(u.size());
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        const double* rowp = A.data() + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) acc += rowp[j] * u[j];
        y[i] = acc;
    }
}

namespace detail {

inline void lu_factor(std::vector<double>& A, std::vector<int>& piv, int n) {
    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = std::abs(A[static_cast<std::size_t>(k) * n + k]);
        for (int i = k + 1; i < n; ++i) {
            const double v = std::abs(A[static_cast<std::size_t>(i) * n + k]);
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (best == 0.0) throw std::runtime_error("dense_solve: singular");
        piv[k] = p;
        if (p != k)
            for (int j = 0; j < n; ++j)
                std::swap(A[static_cast<std::size_t>(k) * n + j],
                          A[static_cast<std::size_t>(p) * n + j]);
        const double pivot = A[static_cast<std::size_t>(k) * n + k];
        for (int i = k + 1; i < n; ++i) {
            const double m = A[static_cast<std::size_t>(i) * n + k] / pivot;
            A[static_cast<std::size_t>(i) * n + k] = m;
            for (int j = k + 1; j < n; ++j)
                A[static_cast<std::size_t>(i) * n + j] -=
                    m * A[static_cast<std::size_t>(k) * n + j];
        }
    }
}

inline void lu_solve(const std::vector<double>& LU,
                     const std::vector<int>& piv, std::vector<double>& x,
                     int n) {
    for (int k = 0; k < n; ++k) {
        if (piv[k] != k) std::swap(x[k], x[piv[k]]);
        for (int i = k + 1; i < n; ++i)
            x[i] -= LU[static_cast<std::size_t>(i) * n + k] * x[k];
    }
    for (int i = n - 1; i >= 0; --i) {
        double acc = x[i];
        for (int j = i + 1; j < n; ++j)
            acc -= LU[static_cast<std::size_t>(i) * n + j] * x[j];
        x[i] = acc / LU[static_cast<std::size_t>(i) * n + i];
    }
}

}  // namespace detail

/// LU solve with partial pivoting and one iterative-refinement step.
inline std::vector<double> dense_solve(const std::vector<double>& A,
                                       const std::vector<double>& b) {
    const int n = static_cast<int>(b.size());
    std::vector<double> LU = A;
    std::vector<int> piv(n);
    detail::lu_factor(LU, piv, n);
    std::vector<double> x = b;
    detail::lu_solve(LU, piv, x, n);
    std::vector<double> r(n);
    dense_apply(A, x, r);
    for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
    detail::lu_solve(LU, piv, r, n);
    for (int i = 0; i < n; ++i) x[i] += r[i];
    return x;
}

// ---------------------------------------------------------------------------
// Vectors and norms

inline std::vector<double> random_vector(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = dist(rng);
    return v;
}

inline double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double max_abs_diff(const std::vector<double>& a,
                           const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double matrix_inf_norm(const std::vector<double>& A, int n) {
    double m = 0.0;
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j)
            s += std::abs(A[static_cast<std::size_t>(i) * n + j]);
        m = std::max(m, s);
    }
    return m;
}

inline bool bitwise_equal(const std::vector<double>& a,
                          const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i] || std::signbit(a[i]) != std::signbit(b[i]))
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// Smoother helpers

/// Smooth O(1) nodal field used to manufacture consistent right-hand sides.
inline std::vector<double> smooth_field(const PolarGrid& g) {
    std::vector<double> u(g.num_nodes());
    for (int s = 0; s < g.n_r(); ++s)
        for (int t = 0; t < g.n_theta(); ++t)
            u[g.index(s, t)] = std::sin(2.0 * g.radius(s)) +
                               std::cos(g.angle(t)) +
                               0.25 * g.radius(s) * std::sin(g.angle(t));
    return u;
}

inline std::vector<LineWorkspace> make_workspaces(const PolarGrid& g,
                                                  int count = 0) {
    if (count <= 0) count = std::max(8, omp_get_max_threads());
    std::vector<LineWorkspace> ws(static_cast<std::size_t>(count));
    for (LineWorkspace& w : ws)
        w.resize(static_cast<std::size_t>(std::max(g.n_r(), g.n_theta())));
    return ws;
}

/// True when the message of `fn`'s exception contains `needle`.
template <typename Fn>
inline bool throws_with(Fn&& fn, const std::string& needle) {
    try {
        fn();
    } catch (const std::exception& e) {
        return std::string(e.what()).find(needle) != std::string::npos;
    }
    return false;
}

}  // namespace testsup
