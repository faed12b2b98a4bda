#pragma once

#include <string>
#include <vector>

namespace gaurast {

// Two-resource frame pipeline: programmable cores run Stages 1-2 while the
// rasterizer runs Stage 3 of the previous frame, one frame in flight each.
struct StageTimes {
    double t12_seconds = 0.0;  // preprocess + sort per frame
    double t3_seconds = 0.0;   // rasterization per frame
};

// 1 / max(t12, t3). Throws std::invalid_argument when both stages are zero.
double steady_state_fps(const StageTimes& st);

// Total time for n frames through the two-stage pipeline:
// t12 + n*max(t12,t3) when t3 >= t12, else n*t12 + t3.
double makespan(const StageTimes& st, uint64_t n_frames);

struct EndToEndRow {
    std::string scene;
    double t12_ms = 0.0;
    double t3_ms = 0.0;
    double fps = 0.0;
    double t12_pct = 0.0;       // share of the sequential frame time
    double t3_pct = 0.0;
    double stage3_speedup = 0.0;    // baseline_t3 / t3
    double end_to_end_speedup = 0.0;  // (t12 + baseline_t3) / (t12 + t3)
};

struct SceneStageInput {
    std::string scene;
    double t3_seconds = 0.0;           // simulated Stage 3 time
    double baseline_t3_seconds = 0.0;  // configured baseline Stage 3 time
};

// Per-scene FPS, runtime breakdown and speedup rows; empty input -> empty report.
std::vector<EndToEndRow> end_to_end_report(const std::vector<SceneStageInput>& scenes,
                                           double t12_seconds);

std::vector<std::string> end_to_end_csv_row(const EndToEndRow& row);
extern const std::vector<std::string> kEndToEndCsvHeader;

}  // namespace gaurast
