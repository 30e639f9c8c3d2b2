#include "polarmg/polar_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace polarmg {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Pairing comparisons tolerate construction roundoff of midpoint/linspace
// arithmetic; 1e-12 relative is far above 1-ulp noise and far below any
// genuine spacing mismatch.
bool spacings_paired(const std::vector<double>& spacing) {
    if (spacing.empty()) return true;
    const double scale =
        *std::max_element(spacing.begin(), spacing.end());
    for (std::size_t i = 0; i + 1 < spacing.size(); i += 2) {
        if (std::abs(spacing[i] - spacing[i + 1]) > 1e-12 * scale) return false;
    }
    return true;
}

}  // namespace

int compute_smoother_split(const std::vector<double>& radii,
                           const std::vector<double>& radial_spacings,
                           double angular_spacing) {
    const int n_r = static_cast<int>(radii.size());
    for (int i = 0; i < n_r; ++i) {
        const double h =
            radial_spacings[std::min<std::size_t>(i, radial_spacings.size() - 1)];
        if (radii[i] * angular_spacing > h) return i;
    }
    return n_r;
}

PolarGrid::PolarGrid(std::vector<double> radii, std::vector<double> angles)
    : radii_(std::move(radii)), angles_(std::move(angles)) {
    radial_spacings_.resize(radii_.size() > 1 ? radii_.size() - 1 : 0);
    for (std::size_t i = 0; i + 1 < radii_.size(); ++i)
        radial_spacings_[i] = radii_[i + 1] - radii_[i];
    angular_spacings_.resize(angles_.size());
    for (std::size_t j = 0; j + 1 < angles_.size(); ++j)
        angular_spacings_[j] = angles_[j + 1] - angles_[j];
    if (!angles_.empty()) angular_spacings_.back() = kTwoPi - angles_.back();

    validate();

    angles_uniform_ = true;
    const double k0 = angular_spacings_.front();
    for (double k : angular_spacings_) {
        if (std::abs(k - k0) > 1e-12 * k0) {
            angles_uniform_ = false;
            break;
        }
    }
    if (angles_uniform_) {
        split_ = compute_smoother_split(radii_, radial_spacings_, k0);
        split_ = std::clamp(split_, 1, n_r());
    }
    numbering_ = NodeIndexing{n_r(), n_theta(), split_ >= 0 ? split_ : n_r()};
}

void PolarGrid::validate() const {
    if (radii_.size() < 3 || angles_.size() < 2)
        throw std::invalid_argument("grid too small: need at least 3 radii and 2 angles");
    if (radii_.front() <= 0.0)
        throw std::invalid_argument(
            "invertible mapping requires r_1 > 0 (inner radius must be positive)");
    for (std::size_t i = 0; i + 1 < radii_.size(); ++i)
        if (radii_[i + 1] <= radii_[i])
            throw std::invalid_argument("radii must be strictly increasing");
    if (angles_.front() != 0.0)
        throw std::invalid_argument("angles must start at 0");
    for (std::size_t j = 0; j + 1 < angles_.size(); ++j)
        if (angles_[j + 1] <= angles_[j])
            throw std::invalid_argument("angles must be strictly increasing");
    if (angles_.back() >= kTwoPi)
        throw std::invalid_argument("angles must lie in [0, 2pi)");
    if (radii_.size() % 2 != 1)
        throw std::invalid_argument("n_r must be odd (pairing constraint)");
    if (angles_.size() % 2 != 0)
        throw std::invalid_argument("n_theta must be even (pairing constraint)");
    if (!spacings_paired(radial_spacings_))
        throw std::invalid_argument("radial spacings violate the pairing constraint");
    if (!spacings_paired(angular_spacings_))
        throw std::invalid_argument("angular spacings violate the pairing constraint");
    double sum = 0.0;
    for (double k : angular_spacings_) sum += k;
    if (std::abs(sum - kTwoPi) > 1e-14 * kTwoPi)
        throw std::invalid_argument("angular spacings must sum to 2pi");
}

PolarGrid PolarGrid::uniform(double R0, double Rmax, int n_r, int n_theta) {
    if (R0 <= 0.0)
        throw std::invalid_argument(
            "invertible mapping requires r_1 > 0 (inner radius must be positive)");
    if (Rmax <= R0) throw std::invalid_argument("Rmax must exceed R0");
    if (n_r < 3 || n_theta < 2) throw std::invalid_argument("grid too small");
    std::vector<double> radii(n_r);
    const double h = (Rmax - R0) / (n_r - 1);
    for (int i = 0; i < n_r; ++i) radii[i] = R0 + i * h;
    radii.back() = Rmax;
    std::vector<double> angles(n_theta);
    const double k = kTwoPi / n_theta;
    for (int j = 0; j < n_theta; ++j) angles[j] = j * k;
    return PolarGrid(std::move(radii), std::move(angles));
}

double PolarGrid::uniform_angular_spacing() const {
    if (!angles_uniform_)
        throw std::runtime_error(
            "grid has non-uniform angular spacing; a more general switching "
            "condition or overlapping smoothers would be needed");
    return angular_spacings_.front();
}

int PolarGrid::smoother_split() const {
    if (split_ < 0)
        throw std::runtime_error(
            "smoother split undefined: non-uniform angular spacing; a more "
            "general switching condition or overlapping smoothers would be needed");
    return split_;
}

PolarGrid build_grid(const GridBuildParams& params) {
    if (params.R0 <= 0.0)
        throw std::invalid_argument(
            "invertible mapping requires r_1 > 0 (set R0 > 0)");
    if (params.Rmax <= params.R0)
        throw std::invalid_argument("Rmax must exceed R0");
    if (params.nr_exp < 2 || params.nr_exp > 24)
        throw std::invalid_argument("nr_exp out of range [2, 24]");
    if (params.ntheta_exp < 2 || params.ntheta_exp > 24)
        throw std::invalid_argument("ntheta_exp out of range [2, 24]");
    if (params.anisotropic_factor < 0)
        throw std::invalid_argument("anisotropic_factor must be >= 0");
    if (params.divide_by_2 < 0)
        throw std::invalid_argument("divideBy2 must be >= 0");

    const int n_r = (1 << params.nr_exp) + 1;
    const int n_theta = 1 << params.ntheta_exp;
    PolarGrid grid = PolarGrid::uniform(params.R0, params.Rmax, n_r, n_theta);

    // Each anisotropic round halves the spacing of every radial spacing pair
    // that lies fully inside [0.6, 0.8]*Rmax (near the profile's rapid decay),
    // inserting the two midpoints so the pairing constraint is preserved.
    const double window_lo = 0.6 * params.Rmax;
    const double window_hi = 0.8 * params.Rmax;
    for (int round = 0; round < params.anisotropic_factor; ++round) {
        const std::vector<double>& r = grid.radii();
        std::vector<double> refined;
        refined.reserve(r.size() * 2);
        for (std::size_t p = 0; 2 * p + 2 < r.size(); ++p) {
            const double left = r[2 * p];
            const double mid = r[2 * p + 1];
            const double right = r[2 * p + 2];
            refined.push_back(left);
            if (left >= window_lo && right <= window_hi) {
                refined.push_back(0.5 * (left + mid));
                refined.push_back(mid);
                refined.push_back(0.5 * (mid + right));
            } else {
                refined.push_back(mid);
            }
        }
        refined.push_back(r.back());
        grid = PolarGrid(std::move(refined), grid.angles());
    }

    for (int d = 0; d < params.divide_by_2; ++d) grid = refine_global(grid);
    return grid;
}

bool can_coarsen(const PolarGrid& grid) {
    const int n_r = grid.n_r();
    const int n_theta = grid.n_theta();
    const int coarse_nr = (n_r + 1) / 2;
    const int coarse_ntheta = n_theta / 2;
    if (coarse_nr % 2 != 1 || coarse_ntheta % 2 != 0) return false;
    if (coarse_nr < 5 || coarse_ntheta < 4) return false;
    // The coarse grid must itself satisfy the pairing constraint; anisotropic
    // refinements need not align with coarse pairs.
    std::vector<double> coarse_h(coarse_nr - 1);
    for (int m = 0; m + 1 < coarse_nr; ++m)
        coarse_h[m] = grid.radius(2 * m + 2) - grid.radius(2 * m);
    const double scale = *std::max_element(coarse_h.begin(), coarse_h.end());
    for (std::size_t i = 0; i + 1 < coarse_h.size(); i += 2)
        if (std::abs(coarse_h[i] - coarse_h[i + 1]) > 1e-12 * scale) return false;
    return true;
}

PolarGrid coarsen(const PolarGrid& grid) {
    if (!can_coarsen(grid)) throw std::runtime_error("cannot coarsen this grid");
    std::vector<double> radii;
    radii.reserve((grid.n_r() + 1) / 2);
    for (int i = 0; i < grid.n_r(); i += 2) radii.push_back(grid.radius(i));
    std::vector<double> angles;
    angles.reserve(grid.n_theta() / 2);
    for (int j = 0; j < grid.n_theta(); j += 2) angles.push_back(grid.angle(j));
    return PolarGrid(std::move(radii), std::move(angles));
}

PolarGrid refine_global(const PolarGrid& grid) {
    std::vector<double> radii;
    radii.reserve(2 * grid.n_r() - 1);
    for (int i = 0; i + 1 < grid.n_r(); ++i) {
        radii.push_back(grid.radius(i));
        radii.push_back(0.5 * (grid.radius(i) + grid.radius(i + 1)));
    }
    radii.push_back(grid.outer_radius());
    std::vector<double> angles;
    angles.reserve(2 * grid.n_theta());
    for (int j = 0; j < grid.n_theta(); ++j) {
        angles.push_back(grid.angle(j));
        const double next = j + 1 < grid.n_theta() ? grid.angle(j + 1) : kTwoPi;
        angles.push_back(0.5 * (grid.angle(j) + next));
    }
    return PolarGrid(std::move(radii), std::move(angles));
}

}  // namespace polarmg
