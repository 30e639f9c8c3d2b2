#pragma once

#include <string>

namespace polarmg {

enum class GeometryKind {
    CirclePolar,  // identity polar mapping, closed-form coefficients
    Shafranov,    // deformed ellipse with elongation and shift
    Czarny,       // D-shaped cross section with triangularity
};

/// Jacobian of the mapping F(r, theta) -> (x, y) and its determinant.
struct Jacobian {
    double x_r, x_theta;
    double y_r, y_theta;
    double det;  // x_r*y_theta - x_theta*y_r
};

/// Transformation coefficients of the logical-coordinate operator: the
/// quadratic form matrix reads [[arr, art/2], [art/2, att]], i.e. art is
/// twice the off-diagonal entry of (1/2) * alpha * DF^{-1} DF^{-T} |det DF|.
struct TransformCoefficients {
    double arr;
    double art;
    double att;
    double det_abs;  // |det DF|
};

/**
 * \brief Curvilinear disk mapping: CirclePolar, Shafranov, or Czarny.
 *
 * Pure functions of immutable parameters; callable concurrently.
 */
class GeometryMap {
  public:
    /// kappa_eps maps to kappa (Shafranov) or epsilon (Czarny); delta_e maps
    /// to delta (Shafranov) or e (Czarny). CirclePolar ignores both.
    GeometryMap(GeometryKind kind, double kappa_eps, double delta_e,
                double x0 = 0.0, double y0 = 0.0);

    GeometryKind kind() const { return kind_; }
    double x0() const { return x0_; }
    double y0() const { return y0_; }
    /// Shafranov elongation kappa / Czarny inverse aspect ratio epsilon.
    double kappa_eps() const { return kappa_eps_; }
    /// Shafranov shift delta / Czarny ellipticity e.
    double delta_e() const { return delta_e_; }
    /// Czarny xi = 1/sqrt(1 - epsilon^2/4); 1 for the other mappings.
    double xi() const { return xi_; }

    /// F(r, theta) in physical coordinates.
    void map(double r, double theta, double& x, double& y) const;

    /// Analytic Jacobian; throws when |det DF| < 1e-14 (degenerate point).
    Jacobian jacobian(double r, double theta) const;
    /// Same, with sin/cos supplied by the caller (cache-friendly hot path).
    Jacobian jacobian(double r, double sin_theta, double cos_theta) const;

    /// Coefficients of the anisotropic operator for profile value alpha.
    TransformCoefficients transform_coefficients(double alpha, double r,
                                                 double theta) const;
    TransformCoefficients transform_coefficients(double alpha, double r,
                                                 double sin_theta,
                                                 double cos_theta) const;

  private:
    GeometryKind kind_;
    double kappa_eps_;
    double delta_e_;
    double x0_;
    double y0_;
    double xi_;
};

GeometryKind parse_geometry_kind(const std::string& name);
std::string to_string(GeometryKind kind);

}  // namespace polarmg
