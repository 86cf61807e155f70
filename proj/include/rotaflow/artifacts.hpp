#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rotaflow/config.hpp"

namespace rotaflow {

/// One output file, path relative to the run's output directory.
struct Artifact {
    std::string path;
    std::string content;
};

struct CheckLine {
    std::string name;
    bool passed = true;
    std::string detail;
};

struct RunOutcome {
    std::vector<Artifact> files;
    std::vector<CheckLine> checks;
    bool passed() const;
};

/// Runs the configured evolution and renders every artifact in memory. Nothing touches
/// the file system, so a failure leaves no partial output behind.
RunOutcome run_evolve(const RunConfig& cfg);

/// Solves the cell problem for each cell.p and checks monotonicity between consecutive means.
RunOutcome run_cell(const RunConfig& cfg);

/// Creates `dir` (and subdirectories) and writes the files.
void write_artifacts(const std::filesystem::path& dir, const std::vector<Artifact>& files);

/// Closed polyline of the points (m = 1, d = 2) with the reference circle of radius r_bar.
std::string render_svg(const std::vector<double>& xy, double r_bar, double t);

}  // namespace rotaflow
