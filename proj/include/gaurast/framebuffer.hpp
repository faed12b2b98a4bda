#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "gaurast/types.hpp"

namespace gaurast {

// Per-pixel accumulation state for both rasterization modes.
//
// Gaussian mode uses (color, transmittance, terminated). Triangle mode keeps
// the winning fragment as (inv_depth, u, v, prim_id); depths are compared in
// inverse-depth space (larger inv_depth = closer) so the per-primitive update
// needs no division. depth_at() resolves camera-space depth on read.
struct Framebuffer {
    int width = 0, height = 0;

    std::vector<Vec3f> color;
    std::vector<float> transmittance;
    std::vector<uint8_t> terminated;
    std::vector<uint32_t> effective_count;  // splats actually blended per pixel

    std::vector<float> inv_depth;  // 0 == empty (depth +inf)
    std::vector<float> u_weight;
    std::vector<float> v_weight;
    std::vector<int32_t> prim_id;  // -1 == no fragment

    Framebuffer() = default;
    Framebuffer(int w, int h)
        : width(w),
          height(h),
          color(size_t(w) * h),
          transmittance(size_t(w) * h, 1.f),
          terminated(size_t(w) * h, 0),
          effective_count(size_t(w) * h, 0),
          inv_depth(size_t(w) * h, 0.f),
          u_weight(size_t(w) * h, 0.f),
          v_weight(size_t(w) * h, 0.f),
          prim_id(size_t(w) * h, -1) {}

    size_t idx(int x, int y) const { return size_t(y) * width + x; }

    float depth_at(int x, int y) const {
        float iz = inv_depth[idx(x, y)];
        return iz > 0.f ? 1.f / iz : std::numeric_limits<float>::infinity();
    }
};

}  // namespace gaurast
