#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gaurast/framebuffer.hpp"
#include "gaurast/pe_model.hpp"
#include "gaurast/preprocess.hpp"
#include "gaurast/sorter.hpp"

namespace gaurast {

// Architecture parameters. Defaults reproduce the scaled-up configuration:
// 15 modules of 16 PEs (300 PEs total) at 1 GHz, 1.7 W per module.
struct RasterizerConfig {
    int pes_per_module = 16;
    int num_modules = 15;
    double clock_hz = 1e9;
    int pipeline_latency_cycles = 4;  // one per PE subtask stage
    int buffer_load_rate = 16;        // primitives per cycle into a tile buffer
    double module_power_watts = 1.7;
    double idle_power_fraction = 0.1;
    int tile_size = 16;

    void validate() const;
};

enum class SimMode { Dense, Measured };

// Per-tile cost carrier between the renderer and the simulator.
struct TileWorkload {
    uint32_t tile_id = 0;
    uint32_t pixel_count = 0;
    uint32_t splat_count = 0;
    // Measured mode: effective splat count per pixel, in the tile's
    // row-major pixel order. Empty in dense mode.
    std::vector<uint32_t> effective_counts;
};

struct SimStats {
    uint64_t total_cycles = 0;
    double runtime_seconds = 0.0;
    double energy_joules = 0.0;
    std::vector<uint64_t> module_busy_cycles;
    double pe_utilization = 0.0;
    uint64_t tiles_processed = 0;
};

// Optional per-tile trace row for debugging.
struct TileTrace {
    uint32_t tile_id = 0;
    int module = 0;
    uint64_t start_cycle = 0;
    uint64_t compute_cycles = 0;
    uint64_t exposed_load_cycles = 0;
};

// Compute cycles for one tile: ceil(pixels/PEs) lockstep passes over the
// splat stream plus the pipeline latency. Measured mode charges each pass
// the maximum effective count among its pixels.
uint64_t simulate_tile(const TileWorkload& w, const RasterizerConfig& cfg, SimMode mode);

// Cycles to fill a tile buffer; overlapped with the previous tile's compute.
uint64_t tile_load_cycles(const TileWorkload& w, const RasterizerConfig& cfg);

// Greedy dispatch of tiles to modules (next free module takes the next tile,
// ties by module index). Deterministic for a fixed workload order.
SimStats simulate_render(const std::vector<TileWorkload>& workloads,
                         const RasterizerConfig& cfg, SimMode mode,
                         std::vector<TileTrace>* trace = nullptr);

// energy = sum over modules of busy_s * P + idle_s * P * idle_fraction.
double energy_estimate(const SimStats& stats, const RasterizerConfig& cfg);

// Builds per-tile workloads from sorter output (Gaussian mode). Measured
// mode reads per-pixel effective counts from `counts` (row-major, full image).
std::vector<TileWorkload> build_workloads(const SortedTiles& sorted, int width, int height,
                                          int tile_size,
                                          const std::vector<uint32_t>* counts = nullptr);

// Functional mode: drives pe_execute under the simulated tile/pass schedule.
// Output is bit-identical to render_gaussians_reference.
Framebuffer simulate_functional(const std::vector<Splat2D>& splats, const SortedTiles& sorted,
                                const Camera& cam, const RasterizerConfig& cfg);

// Triangle counterpart: bit-identical to triangle_raster_reference.
Framebuffer simulate_functional_triangles(const TriangleScene& scene, const Camera& cam,
                                          const RasterizerConfig& cfg);

// CSV row (scene, mode, cycles, runtime_ms, energy_mj, utilization).
std::vector<std::string> stats_csv_row(const std::string& scene, const std::string& mode,
                                       const SimStats& stats);
extern const std::vector<std::string> kStatsCsvHeader;

}  // namespace gaurast
