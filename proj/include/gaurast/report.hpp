#pragma once

#include <string>
#include <vector>

#include "gaurast/scene_io.hpp"

namespace gaurast {

struct BaselineRecord {
    std::string scene;
    double baseline_ms = 0.0;
    double gaurast_ms = 0.0;
};

// Published per-scene rasterization runtimes with and without the enhanced
// rasterizer, NeRF-360 scenes (milliseconds).
const std::vector<BaselineRecord>& reference_runtime_table();

struct SpeedupRow {
    std::string scene;
    double baseline_ms = 0.0;
    double gaurast_ms = 0.0;
    double speedup = 0.0;
};

struct SpeedupReport {
    std::vector<SpeedupRow> rows;
    double arithmetic_mean = 0.0;
    double geometric_mean = 0.0;
};

// Per-scene speedup = baseline/gaurast, plus both means. Throws on an empty
// input or a non-positive denominator.
SpeedupReport speedup_table(const std::vector<BaselineRecord>& records);

struct CompareRow {
    std::string scene;
    double speedup = 0.0;       // baseline runtime / run runtime
    double energy_ratio = 0.0;  // baseline energy / run energy
    double fps = 0.0;
    bool missing_in_run = false;
    bool missing_in_baseline = false;
};

// Joins a simulation stats CSV against a baseline CSV on the scene column.
// Missing keys produce warning rows, never silent drops. Throws on a schema
// mismatch, naming the missing column.
std::vector<CompareRow> compare_runs(const CsvTable& run, const CsvTable& baseline);

std::string render_speedup_text(const SpeedupReport& report);
std::vector<std::vector<std::string>> speedup_csv_rows(const SpeedupReport& report);
extern const std::vector<std::string> kSpeedupCsvHeader;

}  // namespace gaurast
