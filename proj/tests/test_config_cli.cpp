#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "polarmg/config.hpp"
#include "polarmg/runner.hpp"
#include "support.hpp"

using namespace polarmg;
using testsup::throws_with;

namespace {

struct CliResult {
    int status = -1;
    std::string output;  // stdout and stderr combined
};

CliResult run_cli(const std::string& args) {
    const std::string cmd =
        std::string(POLARMG_CLI_PATH) + " " + args + " 2>&1";
    CliResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[512];
    while (std::fgets(buf, sizeof(buf), pipe) != nullptr) res.output += buf;
    const int rc = pclose(pipe);
    res.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return res;
}

/// Fresh scratch directory under the system temp location.
std::string make_temp_dir() {
    std::string tmpl = "/tmp/polarmg_test_XXXXXX";
    char* dir = mkdtemp(tmpl.data());
    REQUIRE(dir != nullptr);
    return std::string(dir);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    REQUIRE(out.good());
    out << content;
}

bool file_exists(const std::string& path) {
    std::ifstream in(path);
    return in.good();
}

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

int parse_cycles(const std::string& output) {
    const std::size_t pos = output.find("after ");
    REQUIRE(pos != std::string::npos);
    return std::atoi(output.c_str() + pos + 6);
}

}  // namespace

TEST_CASE("configuration defaults and resolved values") {
    SolverConfig cfg;
    CHECK(cfg.rmax == 1.3);
    CHECK(cfg.nr_exp == 6);
    CHECK(cfg.ntheta_exp == 6);
    CHECK(cfg.geometry == GeometryKind::Czarny);
    CHECK(cfg.problem == ProblemKind::PolarOscillation);
    CHECK(cfg.alpha_coeff == AlphaCoeff::Zoni);
    CHECK(cfg.beta_coeff == BetaCoeff::InverseAlpha);
    CHECK(cfg.cycle == CycleType::V);
    CHECK(cfg.stencil_mode == StencilMode::Take);
    CHECK(cfg.relative_tolerance == 1e-8);
    CHECK(cfg.max_iterations == 150);
    CHECK_FALSE(cfg.r0.has_value());
    CHECK_FALSE(cfg.delta_e.has_value());

    // R0 resolves against the boundary mode, delta_e against the geometry.
    CHECK(cfg.resolved_r0() == 1e-5 * 1.3);
    cfg.dirbc_interior = true;
    CHECK(cfg.resolved_r0() == 1e-2 * 1.3);
    CHECK(cfg.boundary_mode() == BoundaryMode::InteriorDirichlet);
    cfg.r0 = 0.25;
    CHECK(cfg.resolved_r0() == 0.25);

    CHECK(cfg.resolved_delta_e() == 1.4);
    cfg.geometry = GeometryKind::Shafranov;
    CHECK(cfg.resolved_delta_e() == 0.2);
    cfg.geometry = GeometryKind::CirclePolar;
    CHECK(cfg.resolved_delta_e() == 0.0);
    cfg.delta_e = 0.33;
    CHECK(cfg.resolved_delta_e() == 0.33);

    cfg = SolverConfig{};
    cfg.validate();  // the defaults are a valid configuration
}

TEST_CASE("set() parses every option vocabulary and names bad input") {
    SolverConfig cfg;
    cfg.set("verbose", "2");
    CHECK(cfg.verbose == 2);
    cfg.set("paraview", "true");
    CHECK(cfg.paraview);
    cfg.set("paraview", "0");
    CHECK_FALSE(cfg.paraview);
    cfg.set("maxOpenMPThreads", "4");
    CHECK(cfg.max_threads == 4);
    cfg.set("stencilDistributionMethod", "Give");
    CHECK(cfg.stencil_mode == StencilMode::Give);
    cfg.set("R0", "1e-4");
    CHECK(cfg.resolved_r0() == 1e-4);
    cfg.set("Rmax", "2.6");
    CHECK(cfg.rmax == 2.6);
    cfg.set("multigridCycle", "W");
    CHECK(cfg.cycle == CycleType::W);
    cfg.set("FMG_cycle", "V");
    CHECK(cfg.fmg_cycle == CycleType::V);
    cfg.set("residualNormType", "infinity");
    CHECK(cfg.norm_type == ResidualNormType::Infinity);
    cfg.set("geometry", "Shafranov");
    CHECK(cfg.geometry == GeometryKind::Shafranov);
    cfg.set("problem", "Polar");
    CHECK(cfg.problem == ProblemKind::PolarOscillation);
    cfg.set("problem", "None");
    CHECK(cfg.problem == ProblemKind::None);
    cfg.set("alpha_coeff", "Poisson");
    CHECK(cfg.alpha_coeff == AlphaCoeff::Poisson);
    cfg.set("beta_coeff", "Zero");
    CHECK(cfg.beta_coeff == BetaCoeff::Zero);

    CHECK(throws_with([&] { cfg.set("nr_exp", "abc"); },
                      "invalid value 'abc' for key 'nr_exp' (expected an "
                      "integer)"));
    CHECK(throws_with([&] { cfg.set("Rmax", "12x"); },
                      "invalid value '12x' for key 'Rmax' (expected a "
                      "number)"));
    CHECK(throws_with([&] { cfg.set("paraview", "yes"); },
                      "expected 0/1 or true/false"));
    CHECK(throws_with([&] { cfg.set("frobnicate", "1"); },
                      "unknown configuration key 'frobnicate'"));
    CHECK(throws_with([&] { cfg.set("geometry", "Culham"); },
                      "geometry 'Culham' is not supported by this solver"));
    CHECK(throws_with([&] { cfg.set("problem", "Cartesian"); },
                      "problem 'Cartesian' is not supported by this solver"));
    CHECK(throws_with([&] { cfg.set("alpha_coeff", "Sonnendrucker"); },
                      "alpha_coeff 'Sonnendrucker' is not supported"));
    CHECK(throws_with([&] { cfg.set("multigridCycle", "Q"); },
                      "unknown cycle type 'Q'"));
}

TEST_CASE("validate() rejects out-of-range and unsupported combinations") {
    auto reject = [](const char* key, const char* value,
                     const std::string& needle) {
        SolverConfig cfg;
        cfg.set(key, value);
        return throws_with([&] { cfg.validate(); }, needle);
    };
    CHECK(reject("extrapolation", "2",
                 "extrapolation=2 is not supported by this solver (use 0 or "
                 "1)"));
    CHECK(reject("Rmax", "-1", "Rmax must be positive"));
    CHECK(reject("R0", "2.0", "R0 must lie in (0, Rmax)"));
    CHECK(reject("R0", "0", "R0 must lie in (0, Rmax)"));
    CHECK(reject("nr_exp", "1", "nr_exp must be at least 2"));
    CHECK(reject("ntheta_exp", "0", "ntheta_exp must be at least 2"));
    CHECK(reject("anisotropic_factor", "-1",
                 "anisotropic_factor must be >= 0"));
    CHECK(reject("divideBy2", "-1", "divideBy2 must be >= 0"));
    CHECK(reject("maxLevels", "-2", "maxLevels must be >= 0"));
    CHECK(reject("preSmoothingSteps", "-1",
                 "preSmoothingSteps/postSmoothingSteps must be >= 0"));
    CHECK(reject("maxIterations", "-1", "maxIterations must be >= 0"));
    CHECK(reject("FMG_iterations", "0", "FMG_iterations must be >= 1"));
    CHECK(reject("maxOpenMPThreads", "-1", "maxOpenMPThreads must be >= 0"));
    CHECK(reject("kappa_eps", "2.5", "Czarny requires 0 < epsilon < 2"));

    SolverConfig cfg;
    cfg.set("extrapolation", "1");
    cfg.set("maxLevels", "1");
    CHECK(throws_with([&] { cfg.validate(); },
                      "extrapolation requires at least two levels "
                      "(maxLevels=1 given)"));
    cfg.set("maxLevels", "2");
    cfg.validate();
}

TEST_CASE("serialize() round-trips and resolves the contextual defaults") {
    SolverConfig cfg;
    cfg.set("nr_exp", "4");
    cfg.set("geometry", "Shafranov");
    cfg.set("stencilDistributionMethod", "Give");
    cfg.set("relativeTolerance", "1e-11");
    const std::string text = cfg.serialize();
    CHECK(count_lines(text) == 32);  // one line per configuration key
    CHECK(text.find("nr_exp=4\n") != std::string::npos);
    CHECK(text.find("geometry=Shafranov\n") != std::string::npos);
    CHECK(text.find("stencilDistributionMethod=Give\n") != std::string::npos);
    CHECK(text.find("delta_e=0.2") != std::string::npos);  // resolved

    SolverConfig twice;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t eq = line.find('=');
        REQUIRE(eq != std::string::npos);
        twice.set(line.substr(0, eq), line.substr(eq + 1));
    }
    CHECK(twice.serialize() == text);
}

TEST_CASE("settings and grid parameters are drawn from the configuration") {
    SolverConfig cfg;
    cfg.set("preSmoothingSteps", "2");
    cfg.set("postSmoothingSteps", "3");
    cfg.set("multigridCycle", "F");
    cfg.set("maxIterations", "42");
    cfg.set("FMG", "1");
    cfg.set("divideBy2", "2");
    const MultigridSettings s = cfg.multigrid_settings();
    CHECK(s.pre_smoothing == 2);
    CHECK(s.post_smoothing == 3);
    CHECK(s.cycle == CycleType::F);
    CHECK(s.max_iterations == 42);
    CHECK(s.fmg);
    CHECK(s.boundary_mode == BoundaryMode::AcrossOrigin);
    const GridBuildParams p = cfg.grid_params();
    CHECK(p.nr_exp == 6);
    CHECK(p.divide_by_2 == 2);
    CHECK(p.R0 == 1e-5 * 1.3);
    CHECK(p.Rmax == 1.3);
}

TEST_CASE("config files: comments, overrides, and located errors") {
    const std::string dir = make_temp_dir();
    SUBCASE("well-formed file with comments and blanks") {
        const std::string path = dir + "/good.cfg";
        write_file(path,
                   "# sample configuration\n"
                   "  nr_exp = 4\n"
                   "\n"
                   "Rmax=2.6\n");
        const SolverConfig cfg = load_config_file(path);
        CHECK(cfg.nr_exp == 4);
        CHECK(cfg.rmax == 2.6);
        CHECK(cfg.resolved_r0() == 1e-5 * 2.6);

        SolverConfig base;
        base.set("ntheta_exp", "5");
        apply_config_file(base, path);
        CHECK(base.ntheta_exp == 5);  // untouched by the file
        CHECK(base.nr_exp == 4);
    }
    SUBCASE("missing file") {
        CHECK(throws_with([&] { load_config_file(dir + "/absent.cfg"); },
                          "cannot open config file"));
    }
    SUBCASE("malformed lines carry path and line number") {
        const std::string no_eq = dir + "/noeq.cfg";
        write_file(no_eq, "foo\n");
        CHECK(throws_with([&] { load_config_file(no_eq); },
                          no_eq + ":1: expected key=value, got 'foo'"));

        const std::string empty_key = dir + "/emptykey.cfg";
        write_file(empty_key, "=3\n");
        CHECK(throws_with([&] { load_config_file(empty_key); },
                          empty_key + ":1: empty key"));

        const std::string bad_value = dir + "/badvalue.cfg";
        write_file(bad_value, "# header\nnr_exp=x\n");
        CHECK(throws_with([&] { load_config_file(bad_value); },
                          bad_value + ":2: invalid value 'x' for key "
                                      "'nr_exp'"));
    }
}

TEST_CASE("command line: help, argument errors, and exit codes") {
    CHECK(run_cli("--help").status == 0);
    CHECK(run_cli("solve --help").status == 0);

    const CliResult none = run_cli("");
    CHECK(none.status == kExitConfigError);

    CHECK(run_cli("solve --frobnicate 1").status == kExitConfigError);

    const CliResult bad = run_cli("solve --nr_exp abc");
    CHECK(bad.status == kExitConfigError);
    CHECK(bad.output.find("nr_exp") != std::string::npos);

    const CliResult culham = run_cli("solve --geometry Culham");
    CHECK(culham.status == kExitConfigError);
    CHECK(culham.output.find("configuration error:") != std::string::npos);
    CHECK(culham.output.find("Culham") != std::string::npos);

    CHECK(run_cli("solve --config /nonexistent/path.cfg").status ==
          kExitConfigError);
}

TEST_CASE("command line: solve writes reports and honors tolerances") {
    const std::string dir = make_temp_dir();
    SUBCASE("default small solve converges and writes the report files") {
        const CliResult res = run_cli(
            "solve --nr_exp 3 --ntheta_exp 3 --output-dir " + dir + "/out");
        CHECK(res.status == kExitConverged);
        CHECK(res.output.find("grid: 9 x 8 nodes") != std::string::npos);
        CHECK(res.output.find("converged after") != std::string::npos);
        CHECK(res.output.find("exact error: weighted-l2") !=
              std::string::npos);

        const std::string history = read_file(dir + "/out/history.csv");
        CHECK(history.rfind("cycle,residual,reduction\n", 0) == 0);
        CHECK(count_lines(history) == parse_cycles(res.output) + 2);
        CHECK(file_exists(dir + "/out/summary.txt"));
        const std::string conf = read_file(dir + "/out/config.txt");
        CHECK(conf.find("nr_exp=3\n") != std::string::npos);
        CHECK_FALSE(file_exists(dir + "/out/solution.vtk"));
        CHECK_FALSE(file_exists(dir + "/out/grid.csv"));
    }
    SUBCASE("an exhausted cycle budget exits with the not-converged code") {
        const CliResult res = run_cli(
            "solve --nr_exp 3 --ntheta_exp 3 --maxIterations 1 "
            "--relativeTolerance 1e-13");
        CHECK(res.status == kExitNotConverged);
        CHECK(res.output.find("NOT converged after 1 cycles") !=
              std::string::npos);
    }
    SUBCASE("paraview and grid dumps are opt-in") {
        const CliResult res = run_cli(
            "solve --nr_exp 3 --ntheta_exp 3 --paraview 1 --dump-grid "
            "--output-dir " +
            dir + "/dumps");
        CHECK(res.status == kExitConverged);
        const std::string vtk = read_file(dir + "/dumps/solution.vtk");
        CHECK(vtk.rfind("# vtk DataFile", 0) == 0);
        const std::string grid = read_file(dir + "/dumps/grid.csv");
        CHECK(grid.rfind("ring,angle,r,theta,x,y\n", 0) == 0);
        CHECK(count_lines(grid) == 9 * 8 + 1);
    }
    SUBCASE("verbosity does not change the computation") {
        const std::string quiet = dir + "/quiet";
        const std::string loud = dir + "/loud";
        const CliResult a = run_cli(
            "solve --nr_exp 3 --ntheta_exp 3 --verbose 0 --output-dir " +
            quiet);
        const CliResult b = run_cli(
            "solve --nr_exp 3 --ntheta_exp 3 --verbose 2 --output-dir " +
            loud);
        CHECK(a.status == 0);
        CHECK(b.status == 0);
        CHECK(read_file(quiet + "/history.csv") ==
              read_file(loud + "/history.csv"));
    }
    SUBCASE("flags override the configuration file") {
        const std::string path = dir + "/base.cfg";
        write_file(path, "nr_exp=4\nntheta_exp=4\n");
        const CliResult res =
            run_cli("solve --config " + path + " --nr_exp 3");
        CHECK(res.status == kExitConverged);
        CHECK(res.output.find("grid: 9 x 16 nodes") != std::string::npos);
    }
}

TEST_CASE("command line: order study") {
    const std::string dir = make_temp_dir();
    SUBCASE("a single grid prints the error row without orders") {
        const CliResult res = run_cli(
            "order-study --refinements 0 --nr_exp 3 --ntheta_exp 3 "
            "--output-dir " +
            dir + "/study");
        CHECK(res.status == 0);
        CHECK(res.output.find("n_r") != std::string::npos);
        CHECK(res.output.find("       -") != std::string::npos);
        const std::string csv = read_file(dir + "/study/orders.csv");
        CHECK(csv.rfind("n_r,n_theta,err_weighted,err_infinity,"
                        "order_weighted,order_infinity\n",
                        0) == 0);
        CHECK(count_lines(csv) == 2);
        CHECK(csv.find("nan,nan") != std::string::npos);
    }
    SUBCASE("one refinement reports observed orders") {
        const CliResult res =
            run_cli("order-study --refinements 1 --nr_exp 3 --ntheta_exp 4");
        CHECK(res.status == 0);
        CHECK(res.output.find("9") != std::string::npos);
        CHECK(res.output.find("17") != std::string::npos);
    }
    SUBCASE("an unmanufactured problem cannot measure errors") {
        const CliResult res =
            run_cli("order-study --refinements 0 --problem None");
        CHECK(res.status == kExitConfigError);
        CHECK(res.output.find(
                  "order study requires a manufactured solution") !=
              std::string::npos);
    }
}

TEST_CASE("command line: bench smoke test") {
    const CliResult res =
        run_cli("bench --nr_exp 3 --ntheta_exp 3 --repetitions 2");
    CHECK(res.status == 0);
    CHECK(res.output.find("nodes=72 levels=") != std::string::npos);
    CHECK(res.output.find("apply_ns_per_node=") != std::string::npos);
    CHECK(res.output.find("smooth_ns_per_node=") != std::string::npos);
    CHECK(res.output.find("smooth_flops: tridiag_solve=") !=
          std::string::npos);
    CHECK(res.output.find("memory_total_doubles_per_node=") !=
          std::string::npos);
}
