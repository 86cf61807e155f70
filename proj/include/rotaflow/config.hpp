#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rotaflow/flux.hpp"
#include "rotaflow/geometry_io.hpp"
#include "rotaflow/grid.hpp"
#include "rotaflow/spectral_solver.hpp"

namespace rotaflow {

/// Malformed configuration; line() is 1-based, 0 when the problem is not tied to a line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, std::size_t line)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Flat `section.key = value` run description. Lists are comma separated, optionally in [].
struct RunConfig {
    std::size_t m = 1;
    std::vector<double> lengths{1.0};
    std::vector<std::size_t> resolution{128};
    /// Ambient dimension; 0 means m + 1.
    std::size_t d = 0;

    std::string flux_kind = "zero";  // zero | constant | burgers | poly
    std::vector<double> flux_coeffs;
    /// Modulation a(theta) = offset + sum cos/sin terms, applied to every component.
    std::optional<double> mod_offset;
    std::vector<int> mod_modes;  // flattened m-tuples
    std::vector<double> mod_cos;
    std::vector<double> mod_sin;

    double dt = 1e-4;
    double t_end = 0.05;
    bool dealias = true;

    std::string out_dir = "out";
    std::size_t record_every = 10;
    bool svg = true;
    std::size_t svg_frames = 20;
    std::size_t track_modes = 4;

    std::string preset = "perturbed_sphere";  // ellipse | perturbed_sphere | trig_random
    std::vector<double> params;
    std::vector<int> preset_modes;  // flattened m-tuples
    std::string run_mode = "geometric";  // geometric | scalar
    std::uint64_t seed = 0;

    double sphere_tol = 0.0;  // 0 disables the check
    double decay_tol = 0.0;

    std::vector<double> cell_p{1.0};

    std::size_t ambient_dim() const { return d == 0 ? m + 1 : d; }
    /// Sorted key = value listing of every setting, defaults included. output.dir is left out:
    /// where a run is written does not change what it computes.
    std::string canonical() const;
    /// FNV-1a 64 of canonical(), as 16 hex digits.
    std::string hash() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

PeriodicGrid build_grid(const RunConfig& cfg);
FluxSpec build_flux(const RunConfig& cfg);
InitialPreset build_preset(const RunConfig& cfg);
SolveConfig build_solve_config(const RunConfig& cfg);

}  // namespace rotaflow
