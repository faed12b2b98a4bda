#include "gaurast/arch_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "gaurast/constants.hpp"
#include "gaurast/raster_ref.hpp"

namespace gaurast {

void RasterizerConfig::validate() const {
    if (pes_per_module < 1 || num_modules < 1 || pipeline_latency_cycles < 0 ||
        buffer_load_rate < 1 || tile_size < 1 || !(clock_hz > 0.0) ||
        !(module_power_watts > 0.0) || idle_power_fraction < 0.0)
        throw std::invalid_argument("RasterizerConfig: all parameters must be positive");
}

uint64_t simulate_tile(const TileWorkload& w, const RasterizerConfig& cfg, SimMode mode) {
    const uint64_t pes = uint64_t(cfg.pes_per_module);
    const uint64_t passes = (w.pixel_count + pes - 1) / pes;
    uint64_t cycles = 0;
    if (mode == SimMode::Dense || w.effective_counts.empty()) {
        cycles = passes * w.splat_count;
    } else {
        // Lockstep PEs: each pass costs the largest effective count among
        // the pixels it covers.
        for (uint64_t p = 0; p < passes; ++p) {
            uint32_t pass_max = 0;
            uint64_t lo = p * pes;
            uint64_t hi = std::min<uint64_t>(lo + pes, w.effective_counts.size());
            for (uint64_t i = lo; i < hi; ++i) pass_max = std::max(pass_max, w.effective_counts[i]);
            cycles += pass_max;
        }
    }
    return cycles + uint64_t(cfg.pipeline_latency_cycles);
}

uint64_t tile_load_cycles(const TileWorkload& w, const RasterizerConfig& cfg) {
    const uint64_t rate = uint64_t(cfg.buffer_load_rate);
    return (w.splat_count + rate - 1) / rate;
}

SimStats simulate_render(const std::vector<TileWorkload>& workloads, const RasterizerConfig& cfg,
                         SimMode mode, std::vector<TileTrace>* trace) {
    cfg.validate();
    const int m = cfg.num_modules;
    std::vector<uint64_t> free_at(size_t(m), 0);
    std::vector<uint64_t> prev_compute(size_t(m), 0);
    std::vector<bool> has_prev(size_t(m), false);

    SimStats stats;
    stats.module_busy_cycles.assign(size_t(m), 0);

    for (const auto& w : workloads) {
        int best = 0;
        for (int i = 1; i < m; ++i)
            if (free_at[size_t(i)] < free_at[size_t(best)]) best = i;

        uint64_t compute = simulate_tile(w, cfg, mode);
        uint64_t load = tile_load_cycles(w, cfg);
        // Ping-pong buffers hide the load behind the previous tile's compute;
        // the first tile's fill overlaps frame setup.
        uint64_t exposed =
            has_prev[size_t(best)] ? (load > prev_compute[size_t(best)] ? load - prev_compute[size_t(best)] : 0)
                                   : 0;
        if (trace)
            trace->push_back({w.tile_id, best, free_at[size_t(best)] + exposed, compute, exposed});
        free_at[size_t(best)] += exposed + compute;
        stats.module_busy_cycles[size_t(best)] += compute;
        prev_compute[size_t(best)] = compute;
        has_prev[size_t(best)] = true;
        ++stats.tiles_processed;
    }

    stats.total_cycles = 0;
    for (uint64_t f : free_at) stats.total_cycles = std::max(stats.total_cycles, f);
    stats.runtime_seconds = double(stats.total_cycles) / cfg.clock_hz;
    uint64_t busy_sum = 0;
    for (uint64_t b : stats.module_busy_cycles) busy_sum += b;
    stats.pe_utilization = stats.total_cycles
                               ? double(busy_sum) / (double(stats.total_cycles) * double(m))
                               : 0.0;
    stats.energy_joules = energy_estimate(stats, cfg);
    return stats;
}

double energy_estimate(const SimStats& stats, const RasterizerConfig& cfg) {
    double energy = 0.0;
    for (uint64_t busy : stats.module_busy_cycles) {
        double busy_s = double(busy) / cfg.clock_hz;
        double idle_s = double(stats.total_cycles - busy) / cfg.clock_hz;
        energy += busy_s * cfg.module_power_watts +
                  idle_s * cfg.module_power_watts * cfg.idle_power_fraction;
    }
    return energy;
}

std::vector<TileWorkload> build_workloads(const SortedTiles& sorted, int width, int height,
                                          int tile_size, const std::vector<uint32_t>* counts) {
    int tiles_x = (width + tile_size - 1) / tile_size;
    std::vector<uint32_t> tile_ids;
    tile_ids.reserve(sorted.ranges.size());
    for (const auto& [id, range] : sorted.ranges) tile_ids.push_back(id);
    std::sort(tile_ids.begin(), tile_ids.end());

    std::vector<TileWorkload> out;
    out.reserve(tile_ids.size());
    for (uint32_t id : tile_ids) {
        const TileRange& range = sorted.ranges.at(id);
        int tx = int(id % uint32_t(tiles_x));
        int ty = int(id / uint32_t(tiles_x));
        int x0 = tx * tile_size, y0 = ty * tile_size;
        int x1 = std::min(width, x0 + tile_size);
        int y1 = std::min(height, y0 + tile_size);
        TileWorkload w;
        w.tile_id = id;
        w.pixel_count = uint32_t((x1 - x0) * (y1 - y0));
        w.splat_count = range.end - range.begin;
        if (counts) {
            w.effective_counts.reserve(w.pixel_count);
            for (int y = y0; y < y1; ++y)
                for (int x = x0; x < x1; ++x)
                    w.effective_counts.push_back((*counts)[size_t(y) * width + x]);
        }
        out.push_back(std::move(w));
    }
    return out;
}

Framebuffer simulate_functional(const std::vector<Splat2D>& splats, const SortedTiles& sorted,
                                const Camera& cam, const RasterizerConfig& cfg) {
    cfg.validate();
    Framebuffer fb(cam.width, cam.height);
    int tile_size = cfg.tile_size;
    int tiles_x = (cam.width + tile_size - 1) / tile_size;

    std::vector<uint32_t> tile_ids;
    tile_ids.reserve(sorted.ranges.size());
    for (const auto& [id, range] : sorted.ranges) tile_ids.push_back(id);
    std::sort(tile_ids.begin(), tile_ids.end());

    for (uint32_t id : tile_ids) {
        const TileRange& range = sorted.ranges.at(id);
        int tx = int(id % uint32_t(tiles_x));
        int ty = int(id / uint32_t(tiles_x));
        int x0 = tx * tile_size, y0 = ty * tile_size;
        int x1 = std::min(cam.width, x0 + tile_size);
        int y1 = std::min(cam.height, y0 + tile_size);
        // Pixels stream through the PE block in row-major pass order; each
        // pixel's accumulator chain is strictly sequential.
        for (int y = y0; y < y1; ++y) {
            for (int x = x0; x < x1; ++x) {
                size_t pix = fb.idx(x, y);
                PixelCoord pc = PixelCoord::center(x, y);
                Vec3f acc = fb.color[pix];
                float t = fb.transmittance[pix];
                for (uint32_t i = range.begin; i < range.end; ++i) {
                    const Splat2D& s = splats[sorted.pairs[i].splat_index];
                    PEJob job = make_gaussian_job(s, pc, acc, t);
                    PEResult res = pe_execute(job);
                    if (!res.skipped) {
                        acc = {res.out[0], res.out[1], res.out[2]};
                        t = res.aux;
                        ++fb.effective_count[pix];
                    }
                    if (res.terminated) {
                        fb.terminated[pix] = 1;
                        break;
                    }
                }
                fb.color[pix] = acc;
                fb.transmittance[pix] = t;
            }
        }
    }
    return fb;
}

Framebuffer simulate_functional_triangles(const TriangleScene& scene, const Camera& cam,
                                          const RasterizerConfig& cfg) {
    cfg.validate();
    Framebuffer fb(cam.width, cam.height);
    auto tris = setup_triangles(scene, cam);
    int tile_size = cfg.tile_size;
    int tiles_x = (cam.width + tile_size - 1) / tile_size;
    int tiles_y = (cam.height + tile_size - 1) / tile_size;

    // Bin triangles to tiles by clamped pixel bounding box, keeping index order.
    std::vector<std::vector<uint32_t>> bins(size_t(tiles_x) * tiles_y);
    for (uint32_t ti = 0; ti < tris.size(); ++ti) {
        const auto& t = tris[ti];
        float min_x = std::min({t.x0, t.x1, t.x2});
        float max_x = std::max({t.x0, t.x1, t.x2});
        float min_y = std::min({t.y0, t.y1, t.y2});
        float max_y = std::max({t.y0, t.y1, t.y2});
        int px0 = std::max(0, int(std::floor(min_x)));
        int px1 = std::min(cam.width - 1, int(std::ceil(max_x)));
        int py0 = std::max(0, int(std::floor(min_y)));
        int py1 = std::min(cam.height - 1, int(std::ceil(max_y)));
        if (px0 > px1 || py0 > py1) continue;
        for (int ty = py0 / tile_size; ty <= py1 / tile_size; ++ty)
            for (int tx = px0 / tile_size; tx <= px1 / tile_size; ++tx)
                bins[size_t(ty) * tiles_x + tx].push_back(ti);
    }

    for (int ty = 0; ty < tiles_y; ++ty) {
        for (int tx = 0; tx < tiles_x; ++tx) {
            const auto& bin = bins[size_t(ty) * tiles_x + tx];
            if (bin.empty()) continue;
            int x0 = tx * tile_size, y0 = ty * tile_size;
            int x1 = std::min(cam.width, x0 + tile_size);
            int y1 = std::min(cam.height, y0 + tile_size);
            for (int y = y0; y < y1; ++y) {
                for (int x = x0; x < x1; ++x) {
                    size_t pix = fb.idx(x, y);
                    PixelCoord pc = PixelCoord::center(x, y);
                    for (uint32_t ti : bin) {
                        PEJob job = make_triangle_job(tris[ti], pc, fb.u_weight[pix],
                                                      fb.v_weight[pix], fb.inv_depth[pix],
                                                      fb.prim_id[pix]);
                        PEResult res = pe_execute(job);
                        if (!res.skipped) {
                            fb.u_weight[pix] = res.out[0];
                            fb.v_weight[pix] = res.out[1];
                            fb.inv_depth[pix] = res.out[2];
                            fb.prim_id[pix] = res.aux_id;
                        }
                    }
                }
            }
        }
    }
    return fb;
}

const std::vector<std::string> kStatsCsvHeader = {"scene",      "mode",      "cycles",
                                                  "runtime_ms", "energy_mj", "utilization"};

std::vector<std::string> stats_csv_row(const std::string& scene, const std::string& mode,
                                       const SimStats& stats) {
    char buf[64];
    std::vector<std::string> row;
    row.push_back(scene);
    row.push_back(mode);
    row.push_back(std::to_string(stats.total_cycles));
    std::snprintf(buf, sizeof buf, "%.9g", stats.runtime_seconds * 1e3);
    row.push_back(buf);
    std::snprintf(buf, sizeof buf, "%.9g", stats.energy_joules * 1e3);
    row.push_back(buf);
    std::snprintf(buf, sizeof buf, "%.9g", stats.pe_utilization);
    row.push_back(buf);
    return row;
}

}  // namespace gaurast
