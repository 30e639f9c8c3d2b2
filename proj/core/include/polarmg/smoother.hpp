#pragma once

#include <memory>
#include <string>
#include <vector>

#include "polarmg/diagnostics.hpp"
#include "polarmg/line_algebra.hpp"
#include "polarmg/stencil.hpp"

namespace polarmg {

/// Per-thread scratch of the line smoother: two buffers sized to the longest
/// line on any level (cyclic-solve work vector and coefficient stash).
struct LineWorkspace {
    TrackedVector a{"global/workspace"};
    TrackedVector b{"global/workspace"};
    void resize(std::size_t n) {
        a.resize(n);
        b.resize(n);
    }
};

/**
 * \brief Combined circle/radial zebra line smoother of one level.
 *
 * Rings 0..split-1 are solved as circle (angular) lines, rings split..n_r-1
 * as radial lines (spokes), where split comes from the grid's switching rule.
 * One smoothing step runs four colored sweeps in a fixed order: black circle
 * rings (even s), white circle rings, black spokes (even t), white spokes.
 * Within a sweep every line solve is independent; the right-hand side is
 * written into u in place and only off-line unknowns of frozen colors are
 * read, so results are independent of the thread count.
 *
 * The across-origin innermost ring couples antipodal unknowns and is solved
 * by a symmetric envelope factorization in an antipodal-interleaved order;
 * every other circle line uses the cyclic Cholesky kernel, spokes use the
 * tridiagonal Cholesky kernel (outer Dirichlet rows ride along as identity
 * rows). Dirichlet circle rings become identity lines.
 */
class Smoother {
  public:
    Smoother(const DiscreteOperator& op, StencilMode mode,
             const std::string& tag_prefix);
    ~Smoother();

    Smoother(const Smoother&) = delete;
    Smoother& operator=(const Smoother&) = delete;

    /// One smoothing step (all four sweeps) on u with right-hand side f.
    void smooth(double* u, const double* f,
                std::vector<LineWorkspace>& workspaces,
                FlopCounters* flops) const;

    /// One smoothing step of the extrapolated (combined fine/coarse) system
    /// with modified right-hand side fhat: full line solves on odd rings and
    /// odd spokes, diagonal updates at the remaining fine-only nodes, joint
    /// 2x2 solves for antipodal pairs on the across-origin ring.
    void smooth_extrapolated(double* u, const double* fhat,
                             std::vector<LineWorkspace>& workspaces,
                             FlopCounters* flops) const;

    int split() const { return split_; }
    int circle_line_count() const { return split_; }
    int radial_line_count() const {
        return split_ < grid_->n_r() ? grid_->n_theta() : 0;
    }
    StencilMode mode() const { return mode_; }
    /// Bytes held by all line factorizations.
    std::size_t bytes() const { return bytes_; }

  private:
    void sweep_circle(int parity, double* u, const double* f,
                      std::vector<LineWorkspace>& ws, FlopCounters* flops,
                      bool extrapolated) const;
    void sweep_radial(int parity, double* u, const double* f,
                      std::vector<LineWorkspace>& ws, FlopCounters* flops,
                      bool extrapolated) const;
    void give_rhs_circle(int parity, double* u, const double* f) const;
    void give_rhs_radial(int parity, double* u, const double* f) const;
    void take_rhs_circle(int s, double* u, const double* f,
                         bool extrapolated) const;
    void take_rhs_radial(int t, double* u, const double* f,
                         bool extrapolated) const;
    void solve_circle(int s, double* u, LineWorkspace& ws,
                      FlopCounters* flops) const;
    void extrapolated_pointwise(double* u, const double* fhat) const;
    void extrapolated_origin_pairs(double* u, const double* fhat) const;

    const DiscreteOperator* op_;
    const PolarGrid* grid_;
    StencilMode mode_;
    int split_;
    std::string tag_;
    std::size_t bytes_ = 0;
    std::vector<CyclicTridiagFactor> circle_factors_;  // index s < split
    std::unique_ptr<SparseDirectFactor> origin_factor_;  // across-origin ring
    std::vector<TridiagFactor> radial_factors_;  // index t, empty when
                                                 // split == n_r
};

}  // namespace polarmg
