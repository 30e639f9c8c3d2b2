#pragma once

#include <string>

#include "polarmg/diagnostics.hpp"
#include "polarmg/geometry.hpp"
#include "polarmg/polar_grid.hpp"
#include "polarmg/problem.hpp"

namespace polarmg {

/// Operator coefficients at one node.
struct NodeCoeffs {
    double arr;
    double art;
    double att;
    double det_abs;
};

/**
 * \brief Per-level cached tables: sin/cos over the angles (always cached),
 * profile values alpha/beta per radius (optional), and the transformation
 * coefficient arrays arr/art/att/detDF per node (optional; mandatory for the
 * Take stencil mode).
 *
 * Cached values are produced by exactly the code paths used for on-the-fly
 * evaluation, so toggling a cache never changes results (bitwise).
 */
class LevelCache {
  public:
    LevelCache(const PolarGrid& grid, const GeometryMap& geom,
               const ProblemCase& problem, bool cache_profile,
               bool cache_geometry, const std::string& tag_prefix);

    double sin_theta(int t) const { return sin_[t]; }
    double cos_theta(int t) const { return cos_[t]; }

    double alpha(int s) const {
        return profile_cached_ ? alpha_[s] : problem_->alpha(grid_->radius(s));
    }
    double beta(int s) const {
        return profile_cached_ ? beta_[s] : problem_->beta(grid_->radius(s));
    }

    NodeCoeffs coeffs(int s, int t) const {
        if (geometry_cached_) {
            const int idx = s * grid_->n_theta() + t;
            return NodeCoeffs{arr_[idx], art_[idx], att_[idx], det_[idx]};
        }
        return compute_coeffs(s, t);
    }

    bool profile_cached() const { return profile_cached_; }
    bool geometry_cached() const { return geometry_cached_; }
    const PolarGrid& grid() const { return *grid_; }
    const GeometryMap& geometry() const { return *geom_; }
    const ProblemCase& problem() const { return *problem_; }

  private:
    NodeCoeffs compute_coeffs(int s, int t) const;

    const PolarGrid* grid_;
    const GeometryMap* geom_;
    const ProblemCase* problem_;
    bool profile_cached_;
    bool geometry_cached_;
    TrackedVector sin_, cos_;
    TrackedVector alpha_, beta_;
    TrackedVector arr_, art_, att_, det_;
};

}  // namespace polarmg
