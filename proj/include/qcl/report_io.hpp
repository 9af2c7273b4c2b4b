#pragma once

#include "qcl/grape.hpp"
#include "qcl/topology.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>

namespace qcl {

using json = nlohmann::json;

// -- matrix <-> JSON (nested arrays of [re, im] pairs) -----------------------

json mat_to_json(const Mat& m);
Mat mat_from_json(const json& j);

// -- structured results ------------------------------------------------------

json grid_to_json(const LandscapeGrid& grid, const json& config);
json critical_report_to_json(const CriticalReport& report);
std::string critical_report_table(const CriticalReport& report);
json flow_results_to_json(const std::vector<FlowResult>& flows, std::uint64_t seed);
json ruggedness_to_json(const RuggednessSummary& summary);
json closure_to_json(const LieClosureResult& closure);
json grape_outcome_to_json(const GrapeOutcome& o, int run_index);
json trap_statistics_to_json(const TrapStatistics& st);

// -- files --------------------------------------------------------------------

/// Landscape CSV, exact column order "beta,J" (SU(2) class scans),
/// "theta1,theta2,J" (SU(3)) or "theta,phi,J" (reduced Euler scans).
void write_grid_csv(const std::filesystem::path& path, const LandscapeGrid& grid);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const json& j);

/// Outcomes as JSON lines, one object per run.
void write_grape_jsonl(const std::filesystem::path& path, const std::vector<GrapeOutcome>& outcomes);

// -- problem files -------------------------------------------------------------

struct ExperimentSpec {
    int starts = 50;
    int steps = 64;
    double dt = 0.0;  // derived from t_f when absent
    double t_f = 0.0; // heuristic filled in when both absent
    double amp_init_range = 1.0;
    double amp_bound = 0.0;
    double grad_tol = 1e-7;
    int max_iterations = 5000;
    std::uint64_t seed = 1;
};

struct Problem {
    ControlSystem system;
    std::optional<Mat> target;
    ExperimentSpec experiment;
    json raw;
};

/// JSON problem format shared by `controllability` and `grape`:
/// { "dim": N, "h0": [[..]], "controls": [ [[..]], ... ],
///   "target": [[..]] (optional), "experiment": { ... } (optional) }
Problem parse_problem_file(const std::filesystem::path& path);

GrapeConfig grape_config_from(const ExperimentSpec& exp, const ControlSystem& sys);

// -- SVG -----------------------------------------------------------------------

struct SvgSeries {
    std::string name;
    const std::vector<double>* x = nullptr;
    const std::vector<double>* y = nullptr;
};

void svg_line_chart(const std::filesystem::path& path, const std::vector<SvgSeries>& series,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::string& title);

/// Heatmap over grid values (2-D grids only); cells above `max_cells` per
/// axis are average-pooled before rendering.
void svg_heatmap(const std::filesystem::path& path, const LandscapeGrid& grid,
                 const std::string& title, int max_cells = 160);

} // namespace qcl
