#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gaurast/arch_sim.hpp"
#include "gaurast/pipeline_sched.hpp"
#include "gaurast/preprocess.hpp"
#include "gaurast/raster_ref.hpp"
#include "gaurast/report.hpp"
#include "gaurast/scene_io.hpp"
#include "gaurast/sorter.hpp"

namespace {

constexpr int kExitInputError = 2;
constexpr int kExitVerifyError = 3;

using namespace gaurast;

struct RunConfig {
    std::string scene;
    std::string camera;
    std::string mode = "gaussian";
    std::string sim_mode = "dense";
    std::string image;
    std::string csv;
    std::string counts;
    std::string fragments;
    std::string baseline;
    std::string scene_name = "scene";
    std::string trace;
    int sh_degree = 3;
    int threads = 1;
    bool verify = false;
    bool paper_table = false;
    RasterizerConfig arch;
};

void add_arch_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--pes", cfg.arch.pes_per_module, "PEs per rasterizer module");
    cmd->add_option("--modules", cfg.arch.num_modules, "Number of rasterizer modules");
    cmd->add_option("--clock", cfg.arch.clock_hz, "Clock frequency in Hz");
    cmd->add_option("--power", cfg.arch.module_power_watts, "Active power per module in watts");
    cmd->add_option("--latency", cfg.arch.pipeline_latency_cycles, "PE pipeline latency in cycles");
    cmd->add_option("--load-rate", cfg.arch.buffer_load_rate, "Tile buffer fill rate, primitives/cycle");
    cmd->add_option("--idle-fraction", cfg.arch.idle_power_fraction, "Idle power as a fraction of active");
    cmd->add_option("--tile-size", cfg.arch.tile_size, "Tile edge length in pixels");
}

void write_fragment_dump(const std::string& path, const Framebuffer& fb) {
    std::vector<std::vector<std::string>> rows;
    char buf[64];
    for (int y = 0; y < fb.height; ++y)
        for (int x = 0; x < fb.width; ++x) {
            size_t pix = fb.idx(x, y);
            if (fb.prim_id[pix] < 0) continue;
            std::vector<std::string> cells{std::to_string(x), std::to_string(y)};
            for (float v : {fb.u_weight[pix], fb.v_weight[pix], fb.depth_at(x, y)}) {
                std::snprintf(buf, sizeof buf, "%.9g", double(v));
                cells.push_back(buf);
            }
            cells.push_back(std::to_string(fb.prim_id[pix]));
            rows.push_back(cells);
        }
    write_csv(path, {"x", "y", "u", "v", "depth", "prim_id"}, rows);
}

int cmd_render(RunConfig& cfg) {
    Camera cam = load_camera_json(cfg.camera);
    if (cfg.mode == "gaussian") {
        auto gaussians = load_gaussian_ply(cfg.scene);
        auto splats = preprocess_scene(gaussians, cam, cfg.arch.tile_size, cfg.sh_degree,
                                       nullptr, cfg.threads);
        int tiles_x = (cam.width + cfg.arch.tile_size - 1) / cfg.arch.tile_size;
        auto sorted = sort_and_range(build_keys(splats, tiles_x));
        Framebuffer fb = render_gaussians_reference(splats, sorted, cam, cfg.arch.tile_size);
        if (!cfg.image.empty()) write_image(cfg.image, fb);
        if (!cfg.counts.empty()) write_counts(cfg.counts, fb);
    } else if (cfg.mode == "triangle") {
        auto scene = load_triangle_obj(cfg.scene);
        Framebuffer fb = triangle_raster_reference(scene, cam);
        if (!cfg.image.empty()) {
            auto tris = setup_triangles(scene, cam);
            resolve_triangle_colors(fb, tris);
            write_image(cfg.image, fb);
        }
        if (!cfg.fragments.empty()) write_fragment_dump(cfg.fragments, fb);
    } else {
        std::cerr << "render: unknown mode '" << cfg.mode << "'\n";
        return kExitInputError;
    }
    return 0;
}

int verify_gaussian(const Framebuffer& got, const Framebuffer& want) {
    for (int y = 0; y < want.height; ++y)
        for (int x = 0; x < want.width; ++x) {
            size_t pix = want.idx(x, y);
            const Vec3f& a = got.color[pix];
            const Vec3f& b = want.color[pix];
            if (a.x != b.x || a.y != b.y || a.z != b.z ||
                got.transmittance[pix] != want.transmittance[pix]) {
                std::cerr << "verification failed: first differing pixel (" << x << ", " << y
                          << "): got (" << a.x << ", " << a.y << ", " << a.z << "), expected ("
                          << b.x << ", " << b.y << ", " << b.z << ")\n";
                return kExitVerifyError;
            }
        }
    return 0;
}

int verify_triangle(const Framebuffer& got, const Framebuffer& want) {
    for (int y = 0; y < want.height; ++y)
        for (int x = 0; x < want.width; ++x) {
            size_t pix = want.idx(x, y);
            if (got.prim_id[pix] != want.prim_id[pix] ||
                got.inv_depth[pix] != want.inv_depth[pix] ||
                got.u_weight[pix] != want.u_weight[pix] ||
                got.v_weight[pix] != want.v_weight[pix]) {
                std::cerr << "verification failed: first differing pixel (" << x << ", " << y
                          << "): got id " << got.prim_id[pix] << ", expected "
                          << want.prim_id[pix] << "\n";
                return kExitVerifyError;
            }
        }
    return 0;
}

int cmd_simulate(RunConfig& cfg) {
    Camera cam = load_camera_json(cfg.camera);
    cfg.arch.validate();
    std::printf("gaurast simulate: %d PEs x %d modules @ %g GHz, %.2f W/module, tile %d\n",
                cfg.arch.pes_per_module, cfg.arch.num_modules, cfg.arch.clock_hz / 1e9,
                cfg.arch.module_power_watts, cfg.arch.tile_size);

    SimMode sim_mode;
    if (cfg.sim_mode == "dense") {
        sim_mode = SimMode::Dense;
    } else if (cfg.sim_mode == "measured") {
        sim_mode = SimMode::Measured;
    } else {
        std::cerr << "simulate: unknown sim mode '" << cfg.sim_mode << "'\n";
        return kExitInputError;
    }

    std::vector<TileWorkload> workloads;
    int verify_status = 0;
    if (cfg.mode == "gaussian") {
        auto gaussians = load_gaussian_ply(cfg.scene);
        auto splats = preprocess_scene(gaussians, cam, cfg.arch.tile_size, cfg.sh_degree,
                                       nullptr, cfg.threads);
        int tiles_x = (cam.width + cfg.arch.tile_size - 1) / cfg.arch.tile_size;
        auto sorted = sort_and_range(build_keys(splats, tiles_x));

        std::vector<uint32_t> counts;
        if (sim_mode == SimMode::Measured) {
            if (!cfg.counts.empty()) {
                int w = 0, h = 0;
                counts = read_counts(cfg.counts, &w, &h);
                if (w != cam.width || h != cam.height) {
                    std::cerr << "simulate: counts buffer is " << w << "x" << h
                              << " but the camera is " << cam.width << "x" << cam.height << "\n";
                    return kExitInputError;
                }
            } else {
                counts = render_gaussians_reference(splats, sorted, cam, cfg.arch.tile_size)
                             .effective_count;
            }
        }
        workloads = build_workloads(sorted, cam.width, cam.height, cfg.arch.tile_size,
                                    sim_mode == SimMode::Measured ? &counts : nullptr);
        if (cfg.verify) {
            Framebuffer want = render_gaussians_reference(splats, sorted, cam, cfg.arch.tile_size);
            Framebuffer got = simulate_functional(splats, sorted, cam, cfg.arch);
            verify_status = verify_gaussian(got, want);
            if (!cfg.image.empty() && verify_status == 0) write_image(cfg.image, got);
        }
    } else if (cfg.mode == "triangle") {
        auto scene = load_triangle_obj(cfg.scene);
        auto tris = setup_triangles(scene, cam);
        // Dense triangle workloads: one pair per (triangle, covered tile).
        int tiles_x = (cam.width + cfg.arch.tile_size - 1) / cfg.arch.tile_size;
        std::vector<SortKeyPair> pairs;
        for (uint32_t ti = 0; ti < tris.size(); ++ti) {
            const auto& t = tris[ti];
            int px0 = std::max(0, int(std::floor(std::min({t.x0, t.x1, t.x2}))));
            int px1 = std::min(cam.width - 1, int(std::ceil(std::max({t.x0, t.x1, t.x2}))));
            int py0 = std::max(0, int(std::floor(std::min({t.y0, t.y1, t.y2}))));
            int py1 = std::min(cam.height - 1, int(std::ceil(std::max({t.y0, t.y1, t.y2}))));
            if (px0 > px1 || py0 > py1) continue;
            for (int ty = py0 / cfg.arch.tile_size; ty <= py1 / cfg.arch.tile_size; ++ty)
                for (int tx = px0 / cfg.arch.tile_size; tx <= px1 / cfg.arch.tile_size; ++tx)
                    pairs.push_back({(uint64_t(uint32_t(ty) * tiles_x + tx) << 32) | ti, ti});
        }
        SortedTiles binned = sort_and_range(std::move(pairs));
        workloads = build_workloads(binned, cam.width, cam.height, cfg.arch.tile_size, nullptr);
        if (cfg.verify) {
            Framebuffer want = triangle_raster_reference(scene, cam);
            Framebuffer got = simulate_functional_triangles(scene, cam, cfg.arch);
            verify_status = verify_triangle(got, want);
        }
    } else {
        std::cerr << "simulate: unknown mode '" << cfg.mode << "'\n";
        return kExitInputError;
    }
    if (verify_status != 0) return verify_status;

    std::vector<TileTrace> trace;
    SimStats stats = simulate_render(workloads, cfg.arch, sim_mode,
                                     cfg.trace.empty() ? nullptr : &trace);
    auto row = stats_csv_row(cfg.scene_name, cfg.sim_mode, stats);
    if (!cfg.csv.empty()) {
        write_csv(cfg.csv, kStatsCsvHeader, {row});
    }
    std::printf("tiles=%llu cycles=%llu runtime_ms=%s energy_mj=%s utilization=%s\n",
                (unsigned long long)stats.tiles_processed,
                (unsigned long long)stats.total_cycles, row[3].c_str(), row[4].c_str(),
                row[5].c_str());
    if (!cfg.trace.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& t : trace)
            rows.push_back({std::to_string(t.tile_id), std::to_string(t.module),
                            std::to_string(t.start_cycle), std::to_string(t.compute_cycles),
                            std::to_string(t.exposed_load_cycles)});
        write_csv(cfg.trace, {"tile_id", "module", "start_cycle", "compute_cycles",
                              "exposed_load_cycles"},
                  rows);
    }
    return 0;
}

int cmd_report(RunConfig& cfg) {
    if (cfg.paper_table) {
        SpeedupReport report = speedup_table(reference_runtime_table());
        std::fputs(render_speedup_text(report).c_str(), stdout);
        if (!cfg.csv.empty()) write_csv(cfg.csv, kSpeedupCsvHeader, speedup_csv_rows(report));
        return 0;
    }
    if (cfg.scene.empty() || cfg.baseline.empty()) {
        std::cerr << "report: needs --paper-table, or a run CSV (--scene) and --baseline CSV\n";
        return kExitInputError;
    }
    CsvTable run = read_csv(cfg.scene);
    CsvTable baseline = read_csv(cfg.baseline);
    if (run.rows.empty()) {
        std::cerr << "report: run CSV '" << cfg.scene << "' has no data rows\n";
        return kExitInputError;
    }
    auto rows = compare_runs(run, baseline);
    std::printf("%-16s %10s %12s %10s %s\n", "scene", "speedup", "energy_ratio", "fps", "note");
    for (const auto& r : rows) {
        const char* note = r.missing_in_run ? "missing in run"
                           : r.missing_in_baseline ? "missing in baseline"
                                                   : "";
        std::printf("%-16s %10.3f %12.3f %10.2f %s\n", r.scene.c_str(), r.speedup,
                    r.energy_ratio, r.fps, note);
    }
    return 0;
}

int cmd_fps(double t12_ms, double t3_ms, uint64_t frames) {
    StageTimes st{t12_ms * 1e-3, t3_ms * 1e-3};
    double fps = steady_state_fps(st);
    std::printf("steady_state_fps=%.9g\n", fps);
    if (frames > 0)
        std::printf("makespan_ms(n=%llu)=%.9g\n", (unsigned long long)frames,
                    makespan(st, frames) * 1e3);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dual-mode splat/triangle software rasterizer and cycle model"};
    app.require_subcommand(1);

    RunConfig cfg;
    double t12_ms = 0.0, t3_ms = 0.0;
    uint64_t frames = 0;

    auto* render = app.add_subcommand("render", "Render a scene with the scalar reference path");
    render->add_option("--scene", cfg.scene, "Scene file (.ply or .obj)")->required();
    render->add_option("--camera", cfg.camera, "Camera JSON")->required();
    render->add_option("--mode", cfg.mode, "gaussian|triangle");
    render->add_option("--sh-degree", cfg.sh_degree, "Spherical harmonics degree, 0..3");
    render->add_option("--threads", cfg.threads, "Worker threads (never changes output)");
    render->add_option("--image", cfg.image, "Output PPM path");
    render->add_option("--counts", cfg.counts, "Output effective-count buffer path");
    render->add_option("--fragments", cfg.fragments, "Triangle mode: fragment CSV dump");
    add_arch_flags(render, cfg);

    auto* simulate = app.add_subcommand("simulate", "Run the cycle model");
    simulate->add_option("--scene", cfg.scene, "Scene file (.ply or .obj)")->required();
    simulate->add_option("--camera", cfg.camera, "Camera JSON")->required();
    simulate->add_option("--mode", cfg.mode, "gaussian|triangle");
    simulate->add_option("--sim-mode", cfg.sim_mode, "dense|measured");
    simulate->add_option("--sh-degree", cfg.sh_degree, "Spherical harmonics degree, 0..3");
    simulate->add_option("--threads", cfg.threads, "Worker threads (never changes output)");
    simulate->add_option("--counts", cfg.counts, "Effective-count buffer from a render run");
    simulate->add_option("--csv", cfg.csv, "Stats CSV output path");
    simulate->add_option("--image", cfg.image, "With --verify: write the functional-path image");
    simulate->add_option("--scene-name", cfg.scene_name, "Scene label for the CSV row");
    simulate->add_option("--trace", cfg.trace, "Per-tile trace CSV output path");
    simulate->add_flag("--verify", cfg.verify, "Check the PE path against the reference image");
    add_arch_flags(simulate, cfg);

    auto* report = app.add_subcommand("report", "Speedup and energy reports");
    report->add_flag("--paper-table", cfg.paper_table, "Use the embedded reference runtime table");
    report->add_option("--scene", cfg.scene, "Run stats CSV");
    report->add_option("--baseline", cfg.baseline, "Baseline stats CSV");
    report->add_option("--csv", cfg.csv, "Report CSV output path");

    auto* fps = app.add_subcommand("fps", "Pipelined frame-rate model");
    fps->add_option("--t12-ms", t12_ms, "Stages 1-2 time per frame, ms")->required();
    fps->add_option("--t3-ms", t3_ms, "Stage 3 time per frame, ms")->required();
    fps->add_option("--frames", frames, "Also print the n-frame makespan");

    CLI11_PARSE(app, argc, argv);

    try {
        if (render->parsed()) return cmd_render(cfg);
        if (simulate->parsed()) return cmd_simulate(cfg);
        if (report->parsed()) return cmd_report(cfg);
        if (fps->parsed()) return cmd_fps(t12_ms, t3_ms, frames);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return 0;
}
