#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>

#include "rotaflow/artifacts.hpp"
#include "rotaflow/config.hpp"
#include "rotaflow/verify.hpp"

using namespace rotaflow;
namespace fs = std::filesystem;

namespace {

const char* ellipse_cfg = R"(# ellipse relaxing under Burgers flux
grid.m = 1
grid.lengths = [1.0]
grid.resolution = [128]
flux.kind = burgers
solver.dt = 1e-3
solver.t_end = 1.5
output.record_every = 50
output.svg_frames = 4
initial.preset = ellipse
initial.params = [2, 1]
check.sphere_tol = 3e-6
)";

const char* heat_cfg = R"(grid.m = 1
grid.resolution = 128
flux.kind = zero
solver.dt = 1e-4
solver.t_end = 0.05
output.record_every = 25
initial.preset = perturbed_sphere
initial.params = 0, 1
initial.modes = 1
run.mode = scalar
check.decay_tol = 0.01
)";

const char* cell_cfg = R"(grid.m = 1
grid.resolution = 128
flux.kind = constant
flux.coeffs = 1
flux.mod_offset = 0
flux.mod_modes = 1
flux.mod_sin = 1
cell.p = [-0.5, 0, 0.5, 1]
)";

std::size_t error_line(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return 0;
}

const Artifact* find(const RunOutcome& out, const std::string& path) {
    for (const auto& a : out.files) {
        if (a.path == path) return &a;
    }
    return nullptr;
}

std::string column_row(const std::string& content) {
    std::istringstream in(content);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') return line;
    }
    return "";
}

}  // namespace

TEST_CASE("parse a full configuration") {
    const auto cfg = parse_config(ellipse_cfg);
    CHECK(cfg.m == 1);
    CHECK(cfg.resolution == std::vector<std::size_t>{128});
    CHECK(cfg.flux_kind == "burgers");
    CHECK(cfg.dt == 1e-3);
    CHECK(cfg.ambient_dim() == 2);
    CHECK(cfg.params == std::vector<double>{2.0, 1.0});
    CHECK(build_grid(cfg).size() == 128);
    CHECK(std::holds_alternative<EllipsePreset>(build_preset(cfg)));
    CHECK(build_solve_config(cfg).t_end == 1.5);

    const auto cell = parse_config(cell_cfg);
    const auto spec = build_flux(cell);
    CHECK(spec.is_modulated());
    CHECK(cell.cell_p.size() == 4);
}

TEST_CASE("configuration errors carry line numbers") {
    CHECK(error_line("grid.m = 1\nbogus.key = 3\n") == 2);
    CHECK(error_line("grid.m = 1\n\n# comment\njust words\n") == 4);
    CHECK(error_line("solver.dt = 1e-3\nsolver.dt = 2e-3\n") == 2);
    CHECK(error_line("solver.dt = fast\n") == 1);
    CHECK(error_line("solver.dt =\n") == 1);
    CHECK(error_line("grid.lengths = [1.0\n") == 1);
    CHECK(error_line("grid.m = 1\ngrid.resolution = [7]\n") == 1);
    CHECK(error_line("seed = 3\nflux.kind = sideways\n") == 2);
    CHECK(error_line("solver.dealias = maybe\n") == 1);
    CHECK(error_line("output.record_every = 0\n") == 1);
    CHECK(error_line("initial.preset = perturbed_sphere\ninitial.params = [1, 2]\ninitial.modes = 1\n") == 1);
    CHECK_THROWS_AS(load_config("/nonexistent/rotaflow.cfg"), ConfigError);
}

TEST_CASE("canonical form and hash") {
    const auto a = parse_config(ellipse_cfg);
    const auto b = parse_config(std::string("\n\n") + ellipse_cfg + "   # trailing\n");
    CHECK(a.canonical() == b.canonical());
    CHECK(a.hash() == b.hash());
    CHECK(a.hash().size() == 16);
    auto c = a;
    c.dt = 2e-3;
    CHECK(c.hash() != a.hash());
    CHECK(a.canonical().find("solver.dt = 0.001\n") != std::string::npos);
}

TEST_CASE("ellipse run reaches the circle and renders frames") {
    const auto cfg = parse_config(ellipse_cfg);
    const auto out = run_evolve(cfg);
    CHECK(out.passed());
    for (const auto& c : out.checks) CHECK_MESSAGE(c.passed, c.name << ": " << c.detail);
    for (const char* f : {"diagnostics.csv", "trajectory.csv", "final_snapshot.csv", "mode_decay.csv"}) {
        const auto* a = find(out, f);
        REQUIRE(a != nullptr);
        CHECK(a->content.rfind("# rotaflow ", 0) == 0);
        CHECK(a->content.find("# config_hash " + cfg.hash()) != std::string::npos);
    }
    CHECK(column_row(find(out, "diagnostics.csv")->content) == "t,mean,sup,min,l1,sphere_dev,amp_mode1,amp_mode2,amp_mode3,amp_mode4");
    CHECK(column_row(find(out, "final_snapshot.csv")->content) == "theta1,r,P1,P2,x1,x2");
    const auto* frame = find(out, "frames/frame_0000.svg");
    REQUIRE(frame != nullptr);
    CHECK(frame->content.find("<svg") != std::string::npos);
    CHECK(find(out, "frames/frame_0003.svg") != nullptr);
}

TEST_CASE("zero-flux single mode decays at 4 pi^2") {
    const auto out = run_evolve(parse_config(heat_cfg));
    CHECK(out.passed());
    const auto* decay = find(out, "mode_decay.csv");
    REQUIRE(decay != nullptr);
    std::istringstream in(decay->content);
    std::string line;
    bool found = false;
    while (std::getline(in, line)) {
        if (line.rfind("1,", 0) == 0) {
            found = true;
            std::stringstream row(line.substr(line.find(',') + 1));
            std::string fitted;
            std::getline(row, fitted, ',');
            CHECK(std::abs(std::stod(fitted) / (4 * std::numbers::pi * std::numbers::pi) - 1.0) < 0.01);
        }
    }
    CHECK(found);
    CHECK(find(out, "frames/frame_0000.svg") == nullptr);
}

TEST_CASE("identical configurations give byte-identical artifacts") {
    const auto cfg = parse_config(heat_cfg);
    const auto a = run_evolve(cfg);
    const auto b = run_evolve(cfg);
    REQUIRE(a.files.size() == b.files.size());
    for (std::size_t k = 0; k < a.files.size(); ++k) {
        CHECK(a.files[k].path == b.files[k].path);
        CHECK(a.files[k].content == b.files[k].content);
    }
}

TEST_CASE("cell run solves every mean and checks monotonicity") {
    const auto out = run_cell(parse_config(cell_cfg));
    CHECK(out.passed());
    for (const auto& c : out.checks) CHECK_MESSAGE(c.passed, c.name << ": " << c.detail);
    REQUIRE(find(out, "cell_solution.csv") != nullptr);
    CHECK(column_row(find(out, "cell_solution.csv")->content) == "theta1,v1,v2,v3,v4");
    CHECK(find(out, "cell_monotonicity.csv") != nullptr);
}

TEST_CASE("write_artifacts creates nested directories") {
    const fs::path dir = fs::temp_directory_path() / "rotaflow_artifact_test";
    fs::remove_all(dir);
    write_artifacts(dir, {{"a.csv", "x\n1\n"}, {"frames/b.svg", "<svg/>"}});
    std::ifstream in(dir / "frames" / "b.svg");
    std::string s;
    std::getline(in, s);
    CHECK(s == "<svg/>");
    CHECK(fs::file_size(dir / "a.csv") == 4);
    fs::remove_all(dir);
}

TEST_CASE("svg rendering") {
    const std::vector<double> square = {1, 0, 0, 1, -1, 0, 0, -1};
    const auto svg = render_svg(square, 1.0, 0.5);
    CHECK(svg.find("<?xml") != std::string::npos);
    CHECK(svg.find("circle") != std::string::npos);
    CHECK(svg.find("polygon") != std::string::npos);
}

TEST_CASE("verification suites") {
    const auto& names = suite_names();
    CHECK(names.size() == 7);
    CHECK_THROWS_AS(run_suite("nonsense"), std::invalid_argument);
    const auto heat = run_suite("heat");
    CHECK(heat.passed());
    const auto j = nlohmann::json::parse(summary_json(heat));
    CHECK(j["suite"] == "heat");
    CHECK(j["passed"] == true);
    CHECK(j["checks"].size() == heat.checks.size());
    CHECK(summary_table(heat).find("PASS") != std::string::npos);
}
