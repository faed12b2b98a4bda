#pragma once

#include <array>
#include <cstdint>

#include "gaurast/raster_ref.hpp"
#include "gaurast/types.hpp"

namespace gaurast {

enum class PEMode { Gaussian, Triangle };

// One primitive-pixel evaluation. The primitive payload is exactly nine
// floating values in both modes:
//   Gaussian: conic a, b, c, opacity, mean x, mean y, color r, g, b
//   Triangle: three vertices as (x, y, inverse depth)
struct PEJob {
    PEMode mode = PEMode::Gaussian;
    std::array<float, 9> primitive{};
    PixelCoord pixel;
    // Pixel accumulator flowing through the PE (the tile buffer owns it).
    // Gaussian: state[0..2] = C rgb, state[3] = T.
    // Triangle: state[0] = u, state[1] = v, state[2] = inv depth; aux_id = prim id.
    std::array<float, 4> state{};
    int32_t aux_id = -1;
    int32_t prim_id = -1;  // triangle mode: id of the streamed primitive
};

struct PEResult {
    std::array<float, 3> out{};   // Gaussian: accumulated color. Triangle: u, v, inv depth.
    float aux = 0.f;              // Gaussian: updated transmittance
    int32_t aux_id = -1;          // Triangle: winning primitive id
    bool skipped = false;         // no arithmetic effect on the accumulator
    bool terminated = false;      // Gaussian: transmittance dropped below 1/255
};

// Per-unit-kind use counters, indexed by subtask (1..4 -> 0..3).
struct ResourceCounters {
    std::array<uint32_t, 4> adds{};
    std::array<uint32_t, 4> muls{};
    std::array<uint32_t, 4> divs{};
    std::array<uint32_t, 4> exps{};

    uint32_t total_divs() const { return divs[0] + divs[1] + divs[2] + divs[3]; }
    uint32_t total_exps() const { return exps[0] + exps[1] + exps[2] + exps[3]; }
};

// Fixed per-PE hardware inventory: the shared pool plus mode-dedicated units.
struct ResourceInventory {
    static constexpr int shared_adders = 9;
    static constexpr int shared_multipliers = 9;
    static constexpr int gaussian_adders = 2;
    static constexpr int gaussian_multipliers = 1;
    static constexpr int gaussian_exp_units = 1;
    static constexpr int triangle_dividers = 1;

    static int adders(PEMode m) { return shared_adders + (m == PEMode::Gaussian ? gaussian_adders : 0); }
    static int multipliers(PEMode m) { return shared_multipliers + (m == PEMode::Gaussian ? gaussian_multipliers : 0); }
    static int exp_units(PEMode m) { return m == PEMode::Gaussian ? gaussian_exp_units : 0; }
    static int dividers(PEMode m) { return m == PEMode::Triangle ? triangle_dividers : 0; }
};

struct SubtaskOps {
    int add = 0, mul = 0, div = 0, exp = 0;
};

// Static per-subtask operator tally of a full (non-skipping) evaluation.
std::array<SubtaskOps, 4> pe_op_tally(PEMode mode);

// Executes one job through the four subtask stages. Bit-identical to the
// raster_ref scalar path in both modes. `counters`, when given, records the
// units actually exercised (mismatched-mode units are input-gated and never
// counted).
PEResult pe_execute(const PEJob& job, ResourceCounters* counters = nullptr);

// Convenience constructors for the two payload layouts.
PEJob make_gaussian_job(const Splat2D& s, const PixelCoord& p,
                        const Vec3f& color_acc, float transmittance);
PEJob make_triangle_job(const ScreenTriangle& t, const PixelCoord& p,
                        float u, float v, float inv_depth, int32_t stored_id);

}  // namespace gaurast
