#pragma once

#include <utility>
#include <vector>

namespace polarmg {

/**
 * \brief Node numbering aligned with the combined circle/radial smoother.
 *
 * Rings 0..split-1 (the circle-smoothed region) are numbered ring by ring,
 * angle-major within a ring. Rings split..n_r-1 (the radial region) are
 * numbered spoke by spoke, radius-major within a spoke. Both smoother line
 * types therefore own contiguous index ranges. The struct is intentionally
 * free of grid invariants so demo layouts (even n_r) can be exercised too.
 */
struct NodeIndexing {
    int n_r = 0;
    int n_theta = 0;
    int split = 0;  // first ring handled by the radial smoother

    int size() const { return n_r * n_theta; }

    int index(int s, int t) const {
        if (s < split) return s * n_theta + t;
        return split * n_theta + t * (n_r - split) + (s - split);
    }

    /// Inverse of index(): flat index -> (ring, angle).
    std::pair<int, int> node(int idx) const {
        const int circle_nodes = split * n_theta;
        if (idx < circle_nodes) return {idx / n_theta, idx % n_theta};
        const int z = idx - circle_nodes;
        const int len = n_r - split;
        return {split + z % len, z / len};
    }
};

/**
 * \brief First ring index treated by the radial smoother.
 *
 * Ring i is circle-smoothed while r_i * k <= h_i and radial-smoothed once
 * r_i * k > h_i, where k is the (uniform) angular spacing and h_i the local
 * radial spacing. The switch is monotone: the first crossing decides, all
 * outer rings are radial. Returns n_r when every ring stays circle-smoothed.
 */
int compute_smoother_split(const std::vector<double>& radii,
                           const std::vector<double>& radial_spacings,
                           double angular_spacing);

/**
 * \brief Nonuniform tensor-product polar grid (generalized radii x angles).
 *
 * Invariants enforced at construction:
 *  - radii strictly increasing and positive (r_0 = R0 > 0, last = Rmax);
 *  - angles strictly increasing in [0, 2pi) with theta_0 = 0;
 *  - n_r odd, n_theta even;
 *  - spacing pairing: h_{2i} = h_{2i+1} and k_{2j} = k_{2j+1} (relative
 *    tolerance 1e-12 to absorb construction roundoff);
 *  - angular spacings (with wraparound) sum to 2pi within 1e-14.
 *
 * Immutable after construction; safe to share across threads.
 */
class PolarGrid {
  public:
    PolarGrid(std::vector<double> radii, std::vector<double> angles);

    /// Uniform grid with n_r radii on [R0, Rmax] and n_theta equal angles.
    static PolarGrid uniform(double R0, double Rmax, int n_r, int n_theta);

    int n_r() const { return static_cast<int>(radii_.size()); }
    int n_theta() const { return static_cast<int>(angles_.size()); }
    int num_nodes() const { return n_r() * n_theta(); }

    double radius(int i) const { return radii_[i]; }
    double angle(int j) const { return angles_[j]; }
    /// h_i = r_{i+1} - r_i, i in [0, n_r-2].
    double radial_spacing(int i) const { return radial_spacings_[i]; }
    /// k_j = theta_{j+1} - theta_j with wraparound k_{n_theta-1} = 2pi - theta_{n_theta-1}.
    double angular_spacing(int j) const { return angular_spacings_[j]; }

    const std::vector<double>& radii() const { return radii_; }
    const std::vector<double>& angles() const { return angles_; }
    const std::vector<double>& radial_spacings() const { return radial_spacings_; }
    const std::vector<double>& angular_spacings() const { return angular_spacings_; }

    double inner_radius() const { return radii_.front(); }
    double outer_radius() const { return radii_.back(); }

    bool angles_uniform() const { return angles_uniform_; }
    /// Uniform angular spacing; throws if the angles are not uniform.
    double uniform_angular_spacing() const;

    /// First radial-smoother ring (clamped to >= 1 so ring 0 is always a
    /// circle line); throws for non-uniform angles (no switching rule).
    int smoother_split() const;

    const NodeIndexing& numbering() const { return numbering_; }
    int index(int s, int t) const { return numbering_.index(s, t); }
    /// Wraps an angular index into [0, n_theta).
    int wrap_theta(int t) const {
        const int n = n_theta();
        t %= n;
        return t < 0 ? t + n : t;
    }

  private:
    std::vector<double> radii_;
    std::vector<double> angles_;
    std::vector<double> radial_spacings_;
    std::vector<double> angular_spacings_;
    bool angles_uniform_ = false;
    int split_ = -1;  // -1: undefined (non-uniform angles)
    NodeIndexing numbering_;

    void validate() const;
};

/// Grid parameters of the configuration (see cli_runner for the key names).
struct GridBuildParams {
    double R0 = 0.0;    // inner generalized radius, must be > 0
    double Rmax = 1.3;  // outer generalized radius
    int nr_exp = 6;     // n_r = 2^nr_exp + 1
    int ntheta_exp = 6; // n_theta = 2^ntheta_exp
    int anisotropic_factor = 0;
    int divide_by_2 = 0;
};

/// Builds the configured grid: uniform base, anisotropic halving rounds
/// inside [0.6, 0.8]*Rmax, then divide_by_2 global refinements.
PolarGrid build_grid(const GridBuildParams& params);

/// True when every-second-node coarsening yields a valid grid:
/// (n_r+1)/2 odd and >= 5, n_theta/2 even and >= 4, coarse pairing intact.
bool can_coarsen(const PolarGrid& grid);

/// Keeps radii 0,2,4,... and every second angle; throws "cannot coarsen"
/// when can_coarsen() is false.
PolarGrid coarsen(const PolarGrid& grid);

/// Splits every radial and angular spacing in two (one divideBy2 step).
PolarGrid refine_global(const PolarGrid& grid);

}  // namespace polarmg
