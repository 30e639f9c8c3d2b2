#include "polarmg/level_cache.hpp"

#include <cmath>

namespace polarmg {

LevelCache::LevelCache(const PolarGrid& grid, const GeometryMap& geom,
                       const ProblemCase& problem, bool cache_profile,
                       bool cache_geometry, const std::string& tag_prefix)
    : grid_(&grid),
      geom_(&geom),
      problem_(&problem),
      profile_cached_(cache_profile),
      geometry_cached_(cache_geometry),
      sin_(tag_prefix + "/cache/trig"),
      cos_(tag_prefix + "/cache/trig"),
      alpha_(tag_prefix + "/cache/profile"),
      beta_(tag_prefix + "/cache/profile"),
      arr_(tag_prefix + "/cache/geometry"),
      art_(tag_prefix + "/cache/geometry"),
      att_(tag_prefix + "/cache/geometry"),
      det_(tag_prefix + "/cache/geometry") {
    const int ntheta = grid.n_theta();
    const int nr = grid.n_r();

    sin_.resize(ntheta);
    cos_.resize(ntheta);
    for (int t = 0; t < ntheta; ++t) {
        sin_[t] = std::sin(grid.angle(t));
        cos_[t] = std::cos(grid.angle(t));
    }

    if (profile_cached_) {
        alpha_.resize(nr);
        beta_.resize(nr);
        for (int s = 0; s < nr; ++s) {
            alpha_[s] = problem.alpha(grid.radius(s));
            beta_[s] = problem.beta(grid.radius(s));
        }
    }

    if (geometry_cached_) {
        arr_.resize(static_cast<std::size_t>(nr) * ntheta);
        art_.resize(static_cast<std::size_t>(nr) * ntheta);
        att_.resize(static_cast<std::size_t>(nr) * ntheta);
        det_.resize(static_cast<std::size_t>(nr) * ntheta);
        for (int s = 0; s < nr; ++s) {
            for (int t = 0; t < ntheta; ++t) {
                const NodeCoeffs c = compute_coeffs(s, t);
                const std::size_t idx =
                    static_cast<std::size_t>(s) * ntheta + t;
                arr_[idx] = c.arr;
                art_[idx] = c.art;
                att_[idx] = c.att;
                det_[idx] = c.det_abs;
            }
        }
    }
}

NodeCoeffs LevelCache::compute_coeffs(int s, int t) const {
    const double r = grid_->radius(s);
    const double a = alpha(s);
    const TransformCoefficients tc =
        geom_->transform_coefficients(a, r, sin_[t], cos_[t]);
    return NodeCoeffs{tc.arr, tc.art, tc.att, tc.det_abs};
}

}  // namespace polarmg
