#include "gaurast/pipeline_sched.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace gaurast {

double steady_state_fps(const StageTimes& st) {
    double period = std::max(st.t12_seconds, st.t3_seconds);
    if (!(period > 0.0))
        throw std::invalid_argument("steady_state_fps: both stage times are zero");
    return 1.0 / period;
}

double makespan(const StageTimes& st, uint64_t n_frames) {
    if (n_frames < 1) throw std::invalid_argument("makespan: n_frames must be >= 1");
    // Two-stage pipeline, one frame in flight per resource.
    if (st.t3_seconds >= st.t12_seconds)
        return st.t12_seconds + double(n_frames) * st.t3_seconds;
    return double(n_frames) * st.t12_seconds + st.t3_seconds;
}

std::vector<EndToEndRow> end_to_end_report(const std::vector<SceneStageInput>& scenes,
                                           double t12_seconds) {
    std::vector<EndToEndRow> out;
    for (const auto& s : scenes) {
        EndToEndRow row;
        row.scene = s.scene;
        row.t12_ms = t12_seconds * 1e3;
        row.t3_ms = s.t3_seconds * 1e3;
        row.fps = steady_state_fps({t12_seconds, s.t3_seconds});
        double total = t12_seconds + s.t3_seconds;
        row.t12_pct = total > 0.0 ? 100.0 * t12_seconds / total : 0.0;
        row.t3_pct = total > 0.0 ? 100.0 * s.t3_seconds / total : 0.0;
        row.stage3_speedup = s.t3_seconds > 0.0 ? s.baseline_t3_seconds / s.t3_seconds : 0.0;
        double base_total = t12_seconds + s.baseline_t3_seconds;
        row.end_to_end_speedup = total > 0.0 ? base_total / total : 0.0;
        out.push_back(row);
    }
    return out;
}

const std::vector<std::string> kEndToEndCsvHeader = {
    "scene", "t12_ms", "t3_ms", "fps", "t12_pct", "t3_pct", "stage3_speedup",
    "end_to_end_speedup"};

std::vector<std::string> end_to_end_csv_row(const EndToEndRow& row) {
    char buf[64];
    std::vector<std::string> cells;
    cells.push_back(row.scene);
    for (double v : {row.t12_ms, row.t3_ms, row.fps, row.t12_pct, row.t3_pct,
                     row.stage3_speedup, row.end_to_end_speedup}) {
        std::snprintf(buf, sizeof buf, "%.9g", v);
        cells.push_back(buf);
    }
    return cells;
}

}  // namespace gaurast
