#pragma once

#include <memory>
#include <string>

#include "polarmg/geometry.hpp"

namespace polarmg {

enum class AlphaCoeff { Poisson, Zoni };
enum class BetaCoeff { Zero, InverseAlpha };
enum class ProblemKind { None, PolarOscillation };

AlphaCoeff parse_alpha_coeff(const std::string& name);
BetaCoeff parse_beta_coeff(const std::string& name);
ProblemKind parse_problem_kind(const std::string& name);
std::string to_string(AlphaCoeff a);
std::string to_string(BetaCoeff b);
std::string to_string(ProblemKind p);

/// Exact solution with analytic first derivatives in logical coordinates.
class ManufacturedSolution {
  public:
    virtual ~ManufacturedSolution() = default;
    virtual double u(double r, double theta) const = 0;
    virtual double u_r(double r, double theta) const = 0;
    virtual double u_theta(double r, double theta) const = 0;
};

/// u = 0.4096 (r/Rmax)^6 (1 - r/Rmax)^6 cos(11 theta): oscillations aligned
/// with the polar grid, vanishing at r = 0 and r = Rmax.
class PolarOscillation final : public ManufacturedSolution {
  public:
    explicit PolarOscillation(double rmax) : rmax_(rmax) {}
    double u(double r, double theta) const override;
    double u_r(double r, double theta) const override;
    double u_theta(double r, double theta) const override;

  private:
    double rmax_;
};

/**
 * \brief Density profiles, Dirichlet data, and the manufactured right-hand
 * side f of a verification run. Pure, reentrant evaluations.
 */
class ProblemCase {
  public:
    ProblemCase(AlphaCoeff alpha_coeff, BetaCoeff beta_coeff,
                std::shared_ptr<const ManufacturedSolution> solution,
                double rmax, double alpha_jump = 0.7, double delta_r = 0.05);

    double rmax() const { return rmax_; }
    double alpha_jump() const { return alpha_jump_; }
    double delta_r() const { return delta_r_; }
    AlphaCoeff alpha_coeff() const { return alpha_coeff_; }
    BetaCoeff beta_coeff() const { return beta_coeff_; }

    /// alpha(r) = exp[-tanh((r/Rmax - alpha_jump)/delta_r)] (Zoni) or 1.
    double alpha(double r) const;
    /// beta(r) = 0 or 1/alpha(r).
    double beta(double r) const;

    bool has_solution() const { return solution_ != nullptr; }
    const ManufacturedSolution& solution() const;
    double exact_u(double r, double theta) const;
    /// Dirichlet value: exact solution when present, else 0.
    double dirichlet_u(double r, double theta) const;

    /**
     * Right-hand side f = [-d_r(2 arr u_r + art u_theta)
     *                      - d_theta(art u_r + 2 att u_theta)] / |det DF|
     *                    + beta u,
     * with analytic inner derivatives and fourth-order central differences
     * for the outer derivatives (relative step 1e-4, radial step clamped to
     * r/3 near the axis). A Richardson step-halving check guards accuracy;
     * disagreement above 1e-7 raises an error, otherwise the extrapolated
     * value (16 f_{e/2} - f_e)/15 is returned. Returns beta*u contributions
     * only through the exact solution; 0 when no solution is configured.
     */
    double rhs_f(const GeometryMap& geom, double r, double theta) const;

  private:
    AlphaCoeff alpha_coeff_;
    BetaCoeff beta_coeff_;
    std::shared_ptr<const ManufacturedSolution> solution_;
    double rmax_;
    double alpha_jump_;
    double delta_r_;
};

/// Assembles the configured problem (Rmax from the grid parameters).
ProblemCase make_problem(ProblemKind kind, AlphaCoeff alpha, BetaCoeff beta,
                         double rmax, double alpha_jump = 0.7);

}  // namespace polarmg
