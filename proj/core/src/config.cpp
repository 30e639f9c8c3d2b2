#include "polarmg/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace polarmg {

namespace {

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& expected) {
    throw std::invalid_argument("invalid value '" + value + "' for key '" +
                                key + "' (expected " + expected + ")");
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        bad_value(key, value, "an integer");
    }
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        bad_value(key, value, "a number");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "0" || value == "false") return false;
    if (value == "1" || value == "true") return true;
    bad_value(key, value, "0/1 or true/false");
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

void SolverConfig::set(const std::string& key, const std::string& value) {
    if (key == "verbose") {
        verbose = parse_int(key, value);
    } else if (key == "paraview") {
        paraview = parse_bool(key, value);
    } else if (key == "maxOpenMPThreads") {
        max_threads = parse_int(key, value);
    } else if (key == "stencilDistributionMethod") {
        stencil_mode = parse_stencil_mode(value);
    } else if (key == "cacheProfileCoefficients") {
        cache_profile = parse_bool(key, value);
    } else if (key == "cacheDomainGeometry") {
        cache_geometry = parse_bool(key, value);
    } else if (key == "DirBC_Interior") {
        dirbc_interior = parse_bool(key, value);
    } else if (key == "R0") {
        r0 = parse_double(key, value);
    } else if (key == "Rmax") {
        rmax = parse_double(key, value);
    } else if (key == "nr_exp") {
        nr_exp = parse_int(key, value);
    } else if (key == "ntheta_exp") {
        ntheta_exp = parse_int(key, value);
    } else if (key == "anisotropic_factor") {
        anisotropic_factor = parse_int(key, value);
    } else if (key == "divideBy2") {
        divide_by_2 = parse_int(key, value);
    } else if (key == "FMG") {
        fmg = parse_bool(key, value);
    } else if (key == "FMG_iterations") {
        fmg_iterations = parse_int(key, value);
    } else if (key == "FMG_cycle") {
        fmg_cycle = parse_cycle_type(value);
    } else if (key == "extrapolation") {
        extrapolation = parse_int(key, value);
    } else if (key == "maxLevels") {
        max_levels = parse_int(key, value);
    } else if (key == "preSmoothingSteps") {
        pre_smoothing = parse_int(key, value);
    } else if (key == "postSmoothingSteps") {
        post_smoothing = parse_int(key, value);
    } else if (key == "multigridCycle") {
        cycle = parse_cycle_type(value);
    } else if (key == "residualNormType") {
        norm_type = parse_residual_norm_type(value);
    } else if (key == "maxIterations") {
        max_iterations = parse_int(key, value);
    } else if (key == "absoluteTolerance") {
        absolute_tolerance = parse_double(key, value);
    } else if (key == "relativeTolerance") {
        relative_tolerance = parse_double(key, value);
    } else if (key == "geometry") {
        geometry = parse_geometry_kind(value);
    } else if (key == "alpha_jump") {
        alpha_jump = parse_double(key, value);
    } else if (key == "kappa_eps") {
        kappa_eps = parse_double(key, value);
    } else if (key == "delta_e") {
        delta_e = parse_double(key, value);
    } else if (key == "problem") {
        problem = parse_problem_kind(value);
    } else if (key == "alpha_coeff") {
        alpha_coeff = parse_alpha_coeff(value);
    } else if (key == "beta_coeff") {
        beta_coeff = parse_beta_coeff(value);
    } else {
        throw std::invalid_argument("unknown configuration key '" + key +
                                    "'");
    }
}

double SolverConfig::resolved_r0() const {
    if (r0) return *r0;
    return (dirbc_interior ? 1e-2 : 1e-5) * rmax;
}

double SolverConfig::resolved_delta_e() const {
    if (delta_e) return *delta_e;
    switch (geometry) {
        case GeometryKind::Shafranov: return 0.2;
        case GeometryKind::Czarny: return 1.4;
        case GeometryKind::CirclePolar: return 0.0;
    }
    return 0.0;
}

void SolverConfig::validate() const {
    if (extrapolation != 0 && extrapolation != 1)
        throw std::invalid_argument(
            "extrapolation=" + std::to_string(extrapolation) +
            " is not supported by this solver (use 0 or 1)");
    if (rmax <= 0.0)
        throw std::invalid_argument("Rmax must be positive");
    const double r = resolved_r0();
    if (r <= 0.0 || r >= rmax)
        throw std::invalid_argument("R0 must lie in (0, Rmax)");
    if (nr_exp < 2)
        throw std::invalid_argument("nr_exp must be at least 2");
    if (ntheta_exp < 2)
        throw std::invalid_argument("ntheta_exp must be at least 2");
    if (anisotropic_factor < 0)
        throw std::invalid_argument("anisotropic_factor must be >= 0");
    if (divide_by_2 < 0)
        throw std::invalid_argument("divideBy2 must be >= 0");
    if (max_levels < 0)
        throw std::invalid_argument("maxLevels must be >= 0");
    if (pre_smoothing < 0 || post_smoothing < 0)
        throw std::invalid_argument(
            "preSmoothingSteps/postSmoothingSteps must be >= 0");
    if (max_iterations < 0)
        throw std::invalid_argument("maxIterations must be >= 0");
    if (fmg_iterations < 1)
        throw std::invalid_argument("FMG_iterations must be >= 1");
    if (max_threads < 0)
        throw std::invalid_argument("maxOpenMPThreads must be >= 0");
    if (extrapolation == 1 && max_levels == 1)
        throw std::invalid_argument(
            "extrapolation requires at least two levels (maxLevels=1 given)");
    make_geometry();  // surfaces kappa_eps/delta_e range errors
}

GridBuildParams SolverConfig::grid_params() const {
    GridBuildParams p;
    p.R0 = resolved_r0();
    p.Rmax = rmax;
    p.nr_exp = nr_exp;
    p.ntheta_exp = ntheta_exp;
    p.anisotropic_factor = anisotropic_factor;
    p.divide_by_2 = divide_by_2;
    return p;
}

MultigridSettings SolverConfig::multigrid_settings() const {
    MultigridSettings s;
    s.stencil_mode = stencil_mode;
    s.boundary_mode = boundary_mode();
    s.cache_profile = cache_profile;
    s.cache_geometry = cache_geometry;
    s.max_levels = max_levels;
    s.pre_smoothing = pre_smoothing;
    s.post_smoothing = post_smoothing;
    s.cycle = cycle;
    s.extrapolation = extrapolation == 1;
    s.fmg = fmg;
    s.fmg_iterations = fmg_iterations;
    s.fmg_cycle = fmg_cycle;
    s.norm_type = norm_type;
    s.max_iterations = max_iterations;
    s.absolute_tolerance = absolute_tolerance;
    s.relative_tolerance = relative_tolerance;
    s.max_threads = max_threads;
    s.verbose = verbose > 0;
    return s;
}

GeometryMap SolverConfig::make_geometry() const {
    return GeometryMap(geometry, kappa_eps, resolved_delta_e());
}

ProblemCase SolverConfig::make_problem_case() const {
    return make_problem(problem, alpha_coeff, beta_coeff, rmax, alpha_jump);
}

std::string SolverConfig::serialize() const {
    std::ostringstream out;
    out << "verbose=" << verbose << '\n';
    out << "paraview=" << (paraview ? 1 : 0) << '\n';
    out << "maxOpenMPThreads=" << max_threads << '\n';
    out << "stencilDistributionMethod=" << to_string(stencil_mode) << '\n';
    out << "cacheProfileCoefficients=" << (cache_profile ? 1 : 0) << '\n';
    out << "cacheDomainGeometry=" << (cache_geometry ? 1 : 0) << '\n';
    out << "DirBC_Interior=" << (dirbc_interior ? 1 : 0) << '\n';
    out << "R0=" << format_double(resolved_r0()) << '\n';
    out << "Rmax=" << format_double(rmax) << '\n';
    out << "nr_exp=" << nr_exp << '\n';
    out << "ntheta_exp=" << ntheta_exp << '\n';
    out << "anisotropic_factor=" << anisotropic_factor << '\n';
    out << "divideBy2=" << divide_by_2 << '\n';
    out << "FMG=" << (fmg ? 1 : 0) << '\n';
    out << "FMG_iterations=" << fmg_iterations << '\n';
    out << "FMG_cycle=" << to_string(fmg_cycle) << '\n';
    out << "extrapolation=" << extrapolation << '\n';
    out << "maxLevels=" << max_levels << '\n';
    out << "preSmoothingSteps=" << pre_smoothing << '\n';
    out << "postSmoothingSteps=" << post_smoothing << '\n';
    out << "multigridCycle=" << to_string(cycle) << '\n';
    out << "residualNormType=" << to_string(norm_type) << '\n';
    out << "maxIterations=" << max_iterations << '\n';
    out << "absoluteTolerance=" << format_double(absolute_tolerance) << '\n';
    out << "relativeTolerance=" << format_double(relative_tolerance) << '\n';
    out << "geometry=" << to_string(geometry) << '\n';
    out << "alpha_jump=" << format_double(alpha_jump) << '\n';
    out << "kappa_eps=" << format_double(kappa_eps) << '\n';
    out << "delta_e=" << format_double(resolved_delta_e()) << '\n';
    out << "problem=" << to_string(problem) << '\n';
    out << "alpha_coeff=" << to_string(alpha_coeff) << '\n';
    out << "beta_coeff=" << to_string(beta_coeff) << '\n';
    return out.str();
}

void apply_config_file(SolverConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(
                path + ":" + std::to_string(lineno) +
                ": expected key=value, got '" + stripped + "'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": empty key");
        try {
            config.set(key, value);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(path + ":" +
                                        std::to_string(lineno) + ": " +
                                        e.what());
        }
    }
}

SolverConfig load_config_file(const std::string& path) {
    SolverConfig config;
    apply_config_file(config, path);
    return config;
}

}  // namespace polarmg
