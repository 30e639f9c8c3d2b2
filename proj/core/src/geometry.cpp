#include "polarmg/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace polarmg {

GeometryMap::GeometryMap(GeometryKind kind, double kappa_eps, double delta_e,
                         double x0, double y0)
    : kind_(kind), kappa_eps_(kappa_eps), delta_e_(delta_e), x0_(x0), y0_(y0) {
    if (kind_ == GeometryKind::Czarny) {
        const double eps = kappa_eps_;
        if (eps <= 0.0 || eps >= 2.0)
            throw std::invalid_argument("Czarny requires 0 < epsilon < 2");
        xi_ = 1.0 / std::sqrt(1.0 - eps * eps / 4.0);
    } else {
        xi_ = 1.0;
    }
}

void GeometryMap::map(double r, double theta, double& x, double& y) const {
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    switch (kind_) {
        case GeometryKind::CirclePolar:
            x = x0_ + r * c;
            y = y0_ + r * s;
            return;
        case GeometryKind::Shafranov: {
            const double kappa = kappa_eps_;
            const double delta = delta_e_;
            x = x0_ + (1.0 - kappa) * r * c - delta * r * r;
            y = y0_ + (1.0 + kappa) * r * s;
            return;
        }
        case GeometryKind::Czarny: {
            const double eps = kappa_eps_;
            const double e = delta_e_;
            const double root = std::sqrt(1.0 + eps * (eps + 2.0 * r * c));
            x = x0_ + (1.0 - root) / eps;
            y = y0_ + e * xi_ * r * s / (2.0 - root);
            return;
        }
    }
    throw std::logic_error("unreachable geometry kind");
}

Jacobian GeometryMap::jacobian(double r, double theta) const {
    return jacobian(r, std::sin(theta), std::cos(theta));
}

Jacobian GeometryMap::jacobian(double r, double sin_theta,
                               double cos_theta) const {
    Jacobian J{};
    const double s = sin_theta;
    const double c = cos_theta;
    switch (kind_) {
        case GeometryKind::CirclePolar:
            J.x_r = c;
            J.x_theta = -r * s;
            J.y_r = s;
            J.y_theta = r * c;
            break;
        case GeometryKind::Shafranov: {
            const double kappa = kappa_eps_;
            const double delta = delta_e_;
            J.x_r = (1.0 - kappa) * c - 2.0 * delta * r;
            J.x_theta = -(1.0 - kappa) * r * s;
            J.y_r = (1.0 + kappa) * s;
            J.y_theta = (1.0 + kappa) * r * c;
            break;
        }
        case GeometryKind::Czarny: {
            const double eps = kappa_eps_;
            const double e = delta_e_;
            const double root = std::sqrt(1.0 + eps * (eps + 2.0 * r * c));
            const double denom = 2.0 - root;
            J.x_r = -c / root;
            J.x_theta = r * s / root;
            J.y_r = e * xi_ * s * (denom + r * eps * c / root) / (denom * denom);
            J.y_theta =
                e * xi_ * r * (c * denom - eps * r * s * s / root) / (denom * denom);
            break;
        }
    }
    J.det = J.x_r * J.y_theta - J.x_theta * J.y_r;
    if (std::abs(J.det) < 1e-14)
        throw std::runtime_error("singular Jacobian: mapping degenerate at queried point");
    return J;
}

TransformCoefficients GeometryMap::transform_coefficients(double alpha, double r,
                                                          double theta) const {
    return transform_coefficients(alpha, r, std::sin(theta), std::cos(theta));
}

TransformCoefficients GeometryMap::transform_coefficients(
    double alpha, double r, double sin_theta, double cos_theta) const {
    const Jacobian J = jacobian(r, sin_theta, cos_theta);
    const double det_abs = std::abs(J.det);
    // (1/2) alpha DF^{-1} DF^{-T} |det DF| via the 2x2 cofactor inverse.
    TransformCoefficients tc{};
    tc.arr = 0.5 * alpha * (J.x_theta * J.x_theta + J.y_theta * J.y_theta) / det_abs;
    tc.att = 0.5 * alpha * (J.x_r * J.x_r + J.y_r * J.y_r) / det_abs;
    tc.art = -alpha * (J.x_r * J.x_theta + J.y_r * J.y_theta) / det_abs;
    tc.det_abs = det_abs;
    return tc;
}

GeometryKind parse_geometry_kind(const std::string& name) {
    if (name == "CirclePolar") return GeometryKind::CirclePolar;
    if (name == "Shafranov") return GeometryKind::Shafranov;
    if (name == "Czarny") return GeometryKind::Czarny;
    if (name == "Culham")
        throw std::invalid_argument(
            "geometry 'Culham' is not supported by this solver");
    throw std::invalid_argument("unknown geometry '" + name + "'");
}

std::string to_string(GeometryKind kind) {
    switch (kind) {
        case GeometryKind::CirclePolar: return "CirclePolar";
        case GeometryKind::Shafranov: return "Shafranov";
        case GeometryKind::Czarny: return "Czarny";
    }
    return "?";
}

}  // namespace polarmg
