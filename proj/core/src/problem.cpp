#include "polarmg/problem.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace polarmg {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

AlphaCoeff parse_alpha_coeff(const std::string& name) {
    if (name == "Poisson") return AlphaCoeff::Poisson;
    if (name == "Zoni") return AlphaCoeff::Zoni;
    if (name == "Sonnendrucker")
        throw std::invalid_argument(
            "alpha_coeff 'Sonnendrucker' is not supported by this solver");
    throw std::invalid_argument("unknown alpha_coeff '" + name + "'");
}

BetaCoeff parse_beta_coeff(const std::string& name) {
    if (name == "Zero") return BetaCoeff::Zero;
    if (name == "InverseAlpha") return BetaCoeff::InverseAlpha;
    throw std::invalid_argument("unknown beta_coeff '" + name + "'");
}

ProblemKind parse_problem_kind(const std::string& name) {
    if (name == "None") return ProblemKind::None;
    if (name == "Polar" || name == "PolarOscillation")
        return ProblemKind::PolarOscillation;
    if (name == "Cartesian" || name == "Multi-scale" || name == "MultiScale")
        throw std::invalid_argument("problem '" + name +
                                    "' is not supported by this solver");
    throw std::invalid_argument("unknown problem '" + name + "'");
}

std::string to_string(AlphaCoeff a) {
    return a == AlphaCoeff::Poisson ? "Poisson" : "Zoni";
}
std::string to_string(BetaCoeff b) {
    return b == BetaCoeff::Zero ? "Zero" : "InverseAlpha";
}
std::string to_string(ProblemKind p) {
    return p == ProblemKind::None ? "None" : "Polar";
}

double PolarOscillation::u(double r, double theta) const {
    const double rho = r / rmax_;
    const double a = rho * rho * rho;
    const double omr = 1.0 - rho;
    const double b = omr * omr * omr;
    return 0.4096 * (a * a) * (b * b) * std::cos(11.0 * theta);
}

double PolarOscillation::u_r(double r, double theta) const {
    const double rho = r / rmax_;
    const double rho5 = rho * rho * rho * rho * rho;
    const double omr = 1.0 - rho;
    const double omr5 = omr * omr * omr * omr * omr;
    return 0.4096 * 6.0 * rho5 * omr5 * (1.0 - 2.0 * rho) *
           std::cos(11.0 * theta) / rmax_;
}

double PolarOscillation::u_theta(double r, double theta) const {
    const double rho = r / rmax_;
    const double a = rho * rho * rho;
    const double omr = 1.0 - rho;
    const double b = omr * omr * omr;
    return -11.0 * 0.4096 * (a * a) * (b * b) * std::sin(11.0 * theta);
}

ProblemCase::ProblemCase(AlphaCoeff alpha_coeff, BetaCoeff beta_coeff,
                         std::shared_ptr<const ManufacturedSolution> solution,
                         double rmax, double alpha_jump, double delta_r)
    : alpha_coeff_(alpha_coeff),
      beta_coeff_(beta_coeff),
      solution_(std::move(solution)),
      rmax_(rmax),
      alpha_jump_(alpha_jump),
      delta_r_(delta_r) {
    if (rmax_ <= 0.0) throw std::invalid_argument("Rmax must be positive");
    if (delta_r_ <= 0.0) throw std::invalid_argument("delta_r must be positive");
}

double ProblemCase::alpha(double r) const {
    if (alpha_coeff_ == AlphaCoeff::Poisson) return 1.0;
    return std::exp(-std::tanh((r / rmax_ - alpha_jump_) / delta_r_));
}

double ProblemCase::beta(double r) const {
    if (beta_coeff_ == BetaCoeff::Zero) return 0.0;
    return 1.0 / alpha(r);
}

const ManufacturedSolution& ProblemCase::solution() const {
    if (!solution_)
        throw std::runtime_error("problem case has no manufactured solution");
    return *solution_;
}

double ProblemCase::exact_u(double r, double theta) const {
    return solution().u(r, theta);
}

double ProblemCase::dirichlet_u(double r, double theta) const {
    return solution_ ? solution_->u(r, theta) : 0.0;
}

namespace {

/// Fourth-order central difference of g at x with step e.
template <class G>
double diff4(const G& g, double x, double e) {
    return (g(x - 2.0 * e) - 8.0 * g(x - e) + 8.0 * g(x + e) - g(x + 2.0 * e)) /
           (12.0 * e);
}

}  // namespace

double ProblemCase::rhs_f(const GeometryMap& geom, double r,
                          double theta) const {
    if (!solution_) return 0.0;
    if (r <= 0.0) throw std::invalid_argument("rhs_f requires r > 0");
    const ManufacturedSolution& sol = *solution_;

    // Flux components in logical coordinates, as functions of (r, theta).
    const auto flux_r = [&](double rr, double tt) {
        const TransformCoefficients tc = geom.transform_coefficients(alpha(rr), rr, tt);
        return 2.0 * tc.arr * sol.u_r(rr, tt) + tc.art * sol.u_theta(rr, tt);
    };
    const auto flux_theta = [&](double rr, double tt) {
        const TransformCoefficients tc = geom.transform_coefficients(alpha(rr), rr, tt);
        return tc.art * sol.u_r(rr, tt) + 2.0 * tc.att * sol.u_theta(rr, tt);
    };

    const double er = std::min(1e-4 * rmax_, r / 3.0);
    const double et = 1e-4 * kTwoPi;
    const double det_abs = std::abs(geom.jacobian(r, theta).det);
    const double bu = beta(r) * sol.u(r, theta);

    const auto f_at_step = [&](double scale) {
        const double d_r =
            diff4([&](double rr) { return flux_r(rr, theta); }, r, er * scale);
        const double d_t =
            diff4([&](double tt) { return flux_theta(r, tt); }, theta, et * scale);
        return (-d_r - d_t) / det_abs + bu;
    };

    const double f_full = f_at_step(1.0);
    const double f_half = f_at_step(0.5);
    if (std::abs(f_full - f_half) > 1e-7)
        throw std::runtime_error(
            "rhs_f lost accuracy: Richardson step-halving check disagrees by "
            "more than 1e-7");
    return (16.0 * f_half - f_full) / 15.0;
}

ProblemCase make_problem(ProblemKind kind, AlphaCoeff alpha, BetaCoeff beta,
                         double rmax, double alpha_jump) {
    std::shared_ptr<const ManufacturedSolution> sol;
    if (kind == ProblemKind::PolarOscillation)
        sol = std::make_shared<PolarOscillation>(rmax);
    return ProblemCase(alpha, beta, std::move(sol), rmax, alpha_jump);
}

}  // namespace polarmg
