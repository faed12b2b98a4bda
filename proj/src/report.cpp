#include "gaurast/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <unordered_map>

namespace gaurast {

const std::vector<BaselineRecord>& reference_runtime_table() {
    static const std::vector<BaselineRecord> table = {
        {"Bicycle", 321.0, 15.0}, {"Stump", 149.0, 6.0},   {"Garden", 232.0, 9.6},
        {"Room", 236.0, 10.5},    {"Counter", 216.0, 9.8}, {"Kitchen", 269.0, 12.2},
        {"Bonsai", 147.0, 5.5},
    };
    return table;
}

SpeedupReport speedup_table(const std::vector<BaselineRecord>& records) {
    if (records.empty()) throw std::invalid_argument("speedup_table: empty record list");
    SpeedupReport report;
    double sum = 0.0, log_sum = 0.0;
    for (const auto& r : records) {
        if (!(r.gaurast_ms > 0.0) || !(r.baseline_ms > 0.0))
            throw std::invalid_argument("speedup_table: non-positive runtime for scene '" +
                                        r.scene + "'");
        double s = r.baseline_ms / r.gaurast_ms;
        report.rows.push_back({r.scene, r.baseline_ms, r.gaurast_ms, s});
        sum += s;
        log_sum += std::log(s);
    }
    report.arithmetic_mean = sum / double(records.size());
    report.geometric_mean = std::exp(log_sum / double(records.size()));
    return report;
}

namespace {

size_t find_column(const CsvTable& t, const std::string& name, const std::string& which) {
    auto it = std::find(t.header.begin(), t.header.end(), name);
    if (it == t.header.end())
        throw std::invalid_argument("compare_runs: " + which + " CSV is missing column '" +
                                    name + "'");
    return size_t(it - t.header.begin());
}

double cell_to_double(const std::string& s) {
    try {
        return std::stod(s);
    } catch (const std::exception&) {
        throw std::invalid_argument("compare_runs: non-numeric cell '" + s + "'");
    }
}

}  // namespace

std::vector<CompareRow> compare_runs(const CsvTable& run, const CsvTable& baseline) {
    size_t r_scene = find_column(run, "scene", "run");
    size_t r_runtime = find_column(run, "runtime_ms", "run");
    size_t r_energy = find_column(run, "energy_mj", "run");
    size_t b_scene = find_column(baseline, "scene", "baseline");
    size_t b_runtime = find_column(baseline, "runtime_ms", "baseline");
    size_t b_energy = find_column(baseline, "energy_mj", "baseline");

    std::unordered_map<std::string, const std::vector<std::string>*> base_by_scene;
    for (const auto& row : baseline.rows) base_by_scene[row[b_scene]] = &row;

    std::vector<CompareRow> out;
    std::unordered_map<std::string, bool> seen;
    for (const auto& row : run.rows) {
        CompareRow cr;
        cr.scene = row[r_scene];
        seen[cr.scene] = true;
        double runtime_ms = cell_to_double(row[r_runtime]);
        double energy_mj = cell_to_double(row[r_energy]);
        cr.fps = runtime_ms > 0.0 ? 1e3 / runtime_ms : 0.0;
        auto it = base_by_scene.find(cr.scene);
        if (it == base_by_scene.end()) {
            cr.missing_in_baseline = true;
        } else {
            double base_runtime = cell_to_double((*it->second)[b_runtime]);
            double base_energy = cell_to_double((*it->second)[b_energy]);
            cr.speedup = runtime_ms > 0.0 ? base_runtime / runtime_ms : 0.0;
            cr.energy_ratio = energy_mj > 0.0 ? base_energy / energy_mj : 0.0;
        }
        out.push_back(cr);
    }
    // Baseline scenes absent from the run are reported, never dropped.
    for (const auto& row : baseline.rows) {
        if (!seen.count(row[b_scene])) {
            CompareRow cr;
            cr.scene = row[b_scene];
            cr.missing_in_run = true;
            out.push_back(cr);
        }
    }
    return out;
}

std::string render_speedup_text(const SpeedupReport& report) {
    char buf[128];
    std::string out = "scene        baseline_ms  gaurast_ms  speedup\n";
    for (const auto& r : report.rows) {
        std::snprintf(buf, sizeof buf, "%-12s %11.1f %11.1f %7.1fx\n", r.scene.c_str(),
                      r.baseline_ms, r.gaurast_ms, r.speedup);
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "arithmetic mean speedup: %.1fx\n", report.arithmetic_mean);
    out += buf;
    std::snprintf(buf, sizeof buf, "geometric mean speedup:  %.1fx\n", report.geometric_mean);
    out += buf;
    return out;
}

const std::vector<std::string> kSpeedupCsvHeader = {"scene", "baseline_ms", "gaurast_ms",
                                                    "speedup"};

std::vector<std::vector<std::string>> speedup_csv_rows(const SpeedupReport& report) {
    std::vector<std::vector<std::string>> rows;
    char buf[64];
    for (const auto& r : report.rows) {
        std::vector<std::string> cells{r.scene};
        for (double v : {r.baseline_ms, r.gaurast_ms, r.speedup}) {
            std::snprintf(buf, sizeof buf, "%.9g", v);
            cells.push_back(buf);
        }
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace gaurast
