#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "polarmg/problem.hpp"
#include "support.hpp"

using namespace polarmg;
using testsup::make_map;
using testsup::throws_with;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRmax = 1.3;

/// Independent right-hand-side oracle: sixth-order central differences of
/// the flux components, evaluated at two step sizes (the halved step is the
/// reference). The analytic inner derivatives come from the solution object.
double rhs_oracle(const ProblemCase& prob, const GeometryMap& geom, double r,
                  double theta, double step) {
    const ManufacturedSolution& sol = prob.solution();
    auto g1 = [&](double rr, double th) {
        const TransformCoefficients c =
            geom.transform_coefficients(prob.alpha(rr), rr, th);
        return 2.0 * c.arr * sol.u_r(rr, th) + c.art * sol.u_theta(rr, th);
    };
    auto g2 = [&](double rr, double th) {
        const TransformCoefficients c =
            geom.transform_coefficients(prob.alpha(rr), rr, th);
        return c.art * sol.u_r(rr, th) + 2.0 * c.att * sol.u_theta(rr, th);
    };
    auto d6 = [](auto f, double x, double h) {
        return (-f(x - 3.0 * h) + 9.0 * f(x - 2.0 * h) - 45.0 * f(x - h) +
                45.0 * f(x + h) - 9.0 * f(x + 2.0 * h) + f(x + 3.0 * h)) /
               (60.0 * h);
    };
    const double dg1 =
        d6([&](double rr) { return g1(rr, theta); }, r, step);
    const double dg2 =
        d6([&](double th) { return g2(r, th); }, theta, step);
    const double det = geom.jacobian(r, theta).det;
    return (-dg1 - dg2) / std::abs(det) + prob.beta(r) * sol.u(r, theta);
}

}  // namespace

TEST_CASE("Zoni profile values and the inverse-beta identity") {
    const ProblemCase prob = testsup::polar_case(kRmax);
    SUBCASE("alpha = 1 at the jump radius r_p * Rmax") {
        CHECK(std::abs(prob.alpha(0.7 * kRmax) - 1.0) <= 1e-13);
        CHECK(std::abs(prob.beta(0.7 * kRmax) - 1.0) <= 1e-13);
    }
    SUBCASE("alpha(0) is e to six digits") {
        CHECK(std::abs(prob.alpha(0.0) - 2.7182818284552863) <= 1e-12);
        CHECK(std::abs(prob.alpha(0.0) - std::numbers::e) <= 1e-5);
    }
    SUBCASE("beta is the pointwise reciprocal of alpha") {
        for (int i = 0; i <= 40; ++i) {
            const double r = kRmax * i / 40.0;
            CHECK(std::abs(prob.alpha(r) * prob.beta(r) - 1.0) <= 1e-15);
        }
    }
    SUBCASE("Poisson profile is constant one, Zero beta vanishes") {
        const ProblemCase plain = testsup::plain_case(kRmax);
        for (double r : {0.0, 0.3, 0.91, kRmax}) {
            CHECK(plain.alpha(r) == 1.0);
            CHECK(plain.beta(r) == 0.0);
        }
    }
}

TEST_CASE("polar oscillation solution values and derivatives") {
    const PolarOscillation sol(kRmax);
    SUBCASE("vanishes at the axis and the outer boundary") {
        for (double theta : {0.0, 0.5, 4.0}) {
            CHECK(sol.u(0.0, theta) == 0.0);
            CHECK(sol.u(kRmax, theta) == 0.0);
        }
    }
    SUBCASE("midpoint value 0.4096 * 2^-12 = 1e-4") {
        CHECK(std::abs(sol.u(kRmax / 2.0, 0.0) - 1.0e-4) <= 1e-18);
    }
    SUBCASE("half-period of cos(11 theta) flips the sign") {
        for (double theta : {0.2, 1.7, 3.9}) {
            const double a = sol.u(0.8, theta);
            const double b = sol.u(0.8, theta + kPi / 11.0);
            CHECK(std::abs(a + b) <= 1e-15 + 1e-12 * std::abs(a));
        }
    }
    SUBCASE("analytic derivatives match central differences") {
        const double step = 1e-6;
        for (int i = 1; i <= 10; ++i)
            for (int j = 0; j < 7; ++j) {
                const double r = kRmax * i / 11.0;
                const double theta = 2.0 * kPi * j / 7.0;
                const double fd_r =
                    (sol.u(r + step, theta) - sol.u(r - step, theta)) /
                    (2.0 * step);
                const double fd_t =
                    (sol.u(r, theta + step) - sol.u(r, theta - step)) /
                    (2.0 * step);
                CHECK(std::abs(sol.u_r(r, theta) - fd_r) <= 1e-8);
                CHECK(std::abs(sol.u_theta(r, theta) - fd_t) <= 1e-8);
            }
    }
}

TEST_CASE("right-hand side f") {
    SUBCASE("u = r^2 on the identity polar mapping gives f = -4") {
        const ProblemCase prob = testsup::rsquare_case(kRmax);
        const GeometryMap geom = make_map(GeometryKind::CirclePolar);
        // Interior nodes of a 17x16 uniform grid.
        const PolarGrid g = PolarGrid::uniform(0.013, kRmax, 17, 16);
        for (int s = 1; s + 1 < g.n_r(); ++s)
            for (int t = 0; t < g.n_theta(); ++t)
                CHECK(std::abs(prob.rhs_f(geom, g.radius(s), g.angle(t)) -
                               (-4.0)) <= 1e-8);
    }
    SUBCASE("no manufactured solution means f = 0") {
        const ProblemCase plain = testsup::plain_case(kRmax);
        const GeometryMap geom = make_map(GeometryKind::Czarny);
        CHECK(plain.rhs_f(geom, 0.5, 1.0) == 0.0);
    }
    SUBCASE("Shafranov + Zoni + polar solution against the 6th-order oracle") {
        const ProblemCase prob = testsup::polar_case(kRmax);
        const GeometryMap geom = make_map(GeometryKind::Shafranov);
        const double f = prob.rhs_f(geom, 0.65, 1.0);
        const double oracle = rhs_oracle(prob, geom, 0.65, 1.0, 5e-4);
        const double oracle_check = rhs_oracle(prob, geom, 0.65, 1.0, 1e-3);
        CHECK(std::abs(oracle - oracle_check) <= 1e-8);  // step-halving guard
        CHECK(std::abs(f - oracle) <= 1e-8);
    }
    SUBCASE("Czarny sample against the oracle as well") {
        const ProblemCase prob = testsup::polar_case(kRmax);
        const GeometryMap geom = make_map(GeometryKind::Czarny);
        const double f = prob.rhs_f(geom, 0.9, 2.2);
        const double oracle = rhs_oracle(prob, geom, 0.9, 2.2, 5e-4);
        CHECK(std::abs(f - oracle) <= 1e-8);
    }
    SUBCASE("r <= 0 is rejected") {
        const ProblemCase prob = testsup::polar_case(kRmax);
        const GeometryMap geom = make_map(GeometryKind::CirclePolar);
        CHECK(throws_with([&] { prob.rhs_f(geom, 0.0, 1.0); },
                          "rhs_f requires r > 0"));
    }
}

TEST_CASE("Dirichlet data follows the manufactured solution") {
    const ProblemCase prob = testsup::polar_case(kRmax);
    for (double theta : {0.0, 1.0, 3.5}) {
        CHECK(prob.dirichlet_u(kRmax, theta) == 0.0);
        CHECK(prob.dirichlet_u(0.013, theta) ==
              prob.exact_u(0.013, theta));
    }
    const ProblemCase plain = testsup::plain_case(kRmax);
    CHECK_FALSE(plain.has_solution());
    CHECK(plain.dirichlet_u(kRmax, 0.7) == 0.0);
}

TEST_CASE("problem vocabulary parses and prints consistently") {
    CHECK(parse_problem_kind("Polar") == ProblemKind::PolarOscillation);
    CHECK(parse_problem_kind("PolarOscillation") ==
          ProblemKind::PolarOscillation);
    CHECK(parse_problem_kind("None") == ProblemKind::None);
    CHECK(parse_problem_kind(to_string(ProblemKind::PolarOscillation)) ==
          ProblemKind::PolarOscillation);
    CHECK(parse_problem_kind(to_string(ProblemKind::None)) ==
          ProblemKind::None);
    CHECK(throws_with([] { parse_problem_kind("Cartesian"); },
                      "not supported by this solver"));
    CHECK(throws_with([] { parse_problem_kind("Multi-scale"); },
                      "not supported by this solver"));
    CHECK(throws_with([] { parse_problem_kind("Nonsense"); },
                      "unknown problem"));
    CHECK(parse_alpha_coeff("Poisson") == AlphaCoeff::Poisson);
    CHECK(parse_alpha_coeff("Zoni") == AlphaCoeff::Zoni);
    CHECK(throws_with([] { parse_alpha_coeff("Sonnendrucker"); },
                      "not supported by this solver"));
    CHECK(parse_beta_coeff("Zero") == BetaCoeff::Zero);
    CHECK(parse_beta_coeff("InverseAlpha") == BetaCoeff::InverseAlpha);
    CHECK(throws_with([] { parse_beta_coeff("One"); },
                      "unknown beta_coeff"));

    const ProblemCase prob = make_problem(ProblemKind::PolarOscillation,
                                          AlphaCoeff::Zoni,
                                          BetaCoeff::InverseAlpha, kRmax);
    CHECK(prob.has_solution());
    CHECK(prob.alpha_coeff() == AlphaCoeff::Zoni);
    CHECK(prob.beta_coeff() == BetaCoeff::InverseAlpha);
    CHECK(prob.rmax() == kRmax);
    CHECK(prob.alpha_jump() == 0.7);
    CHECK(prob.delta_r() == 0.05);
}
