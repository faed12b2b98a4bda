#include "gaurast/raster_ref.hpp"

#include <algorithm>
#include <cmath>

#include "gaurast/constants.hpp"

namespace gaurast {

float gaussian_alpha(const PixelCoord& p, const Splat2D& s) {
    float dx = p.x - s.mean.x;
    float dy = p.y - s.mean.y;
    float power = -0.5f * (s.conic_a * (dx * dx) + s.conic_c * (dy * dy)) -
                  s.conic_b * (dx * dy);
    if (power > 0.f) power = 0.f;  // numeric noise
    float alpha = s.opacity * std::exp(power);
    if (alpha > kAlphaClamp) alpha = kAlphaClamp;
    return alpha;
}

void blend_pixel(Framebuffer& fb, size_t pix, float alpha, const Vec3f& c) {
    float t = fb.transmittance[pix];
    float w = t * alpha;
    Vec3f& acc = fb.color[pix];
    acc.x += w * c.x;
    acc.y += w * c.y;
    acc.z += w * c.z;
    t = t * (1.f - alpha);
    fb.transmittance[pix] = t;
    if (t < kTransmittanceMin) fb.terminated[pix] = 1;
}

Framebuffer render_gaussians_reference(const std::vector<Splat2D>& splats,
                                       const SortedTiles& sorted, const Camera& cam,
                                       int tile_size) {
    Framebuffer fb(cam.width, cam.height);
    int tiles_x = (cam.width + tile_size - 1) / tile_size;

    for (const auto& [tile_id, range] : sorted.ranges) {
        int tx = int(tile_id % uint32_t(tiles_x));
        int ty = int(tile_id / uint32_t(tiles_x));
        int x0 = tx * tile_size, y0 = ty * tile_size;
        int x1 = std::min(cam.width, x0 + tile_size);
        int y1 = std::min(cam.height, y0 + tile_size);
        for (int y = y0; y < y1; ++y) {
            for (int x = x0; x < x1; ++x) {
                size_t pix = fb.idx(x, y);
                PixelCoord pc = PixelCoord::center(x, y);
                for (uint32_t i = range.begin; i < range.end; ++i) {
                    if (fb.terminated[pix]) break;
                    const Splat2D& s = splats[sorted.pairs[i].splat_index];
                    float alpha = gaussian_alpha(pc, s);
                    if (alpha < kAlphaSkip) continue;
                    blend_pixel(fb, pix, alpha, s.color);
                    ++fb.effective_count[pix];
                }
            }
        }
    }
    return fb;
}

namespace {

// Accept a zero edge value only on top or left edges so shared edges are
// rasterized exactly once.
bool edge_top_left(float ex, float ey) { return (ey == 0.f && ex > 0.f) || ey < 0.f; }

}  // namespace

bool triangle_pixel_eval(const PixelCoord& p, const ScreenTriangle& t, float* w0, float* u,
                         float* v, float* inv_z) {
    // Subtask 1: coordinate shift.
    float d0x = p.x - t.x0;
    float d0y = p.y - t.y0;
    float d2x = p.x - t.x2;
    float d2y = p.y - t.y2;
    float bx = t.x1 - t.x0;
    float by = t.y1 - t.y0;
    float cx = t.x0 - t.x2;
    float cy = t.y0 - t.y2;

    // Subtask 2: intersection detection.
    float e2 = bx * d0y - by * d0x;
    float e1 = cx * d2y - cy * d2x;
    float area = by * cx - bx * cy;
    float e0 = area - e1 - e2;
    float e0x = -(bx + cx);  // edge v1->v2 delta, for the fill rule
    float e0y = -(by + cy);
    bool in0 = e0 > 0.f || (e0 == 0.f && edge_top_left(e0x, e0y));
    bool in1 = e1 > 0.f || (e1 == 0.f && edge_top_left(cx, cy));
    bool in2 = e2 > 0.f || (e2 == 0.f && edge_top_left(bx, by));
    if (!(in0 && in1 && in2)) return false;
    float inv_area = 1.f / area;

    // Subtask 3: UV weights and perspective-correct inverse depth.
    *w0 = e0 * inv_area;
    *u = e1 * inv_area;
    *v = e2 * inv_area;
    *inv_z = (*w0 * t.iz0 + *u * t.iz1) + *v * t.iz2;
    return true;
}

std::vector<ScreenTriangle> setup_triangles(const TriangleScene& scene, const Camera& cam,
                                            size_t* degenerate, size_t* depth_rejected) {
    std::vector<ScreenTriangle> out;
    out.reserve(scene.triangles.size());
    for (size_t i = 0; i < scene.triangles.size(); ++i) {
        const auto& tri = scene.triangles[i];
        float sx[3], sy[3], iz[3];
        bool rejected = false;
        for (int k = 0; k < 3; ++k) {
            Vec3f pc = cam.to_camera(scene.vertices[tri[k]]);
            if (pc.z < cam.near_plane || pc.z > cam.far_plane) {
                rejected = true;  // whole-primitive rejection
                break;
            }
            sx[k] = cam.fx * pc.x / pc.z + cam.cx;
            sy[k] = cam.fy * pc.y / pc.z + cam.cy;
            iz[k] = 1.f / pc.z;
        }
        if (rejected) {
            if (depth_rejected) ++*depth_rejected;
            continue;
        }
        int i0 = 0, i1 = 1, i2 = 2;
        float area = (sy[1] - sy[0]) * (sx[0] - sx[2]) - (sx[1] - sx[0]) * (sy[0] - sy[2]);
        if (area == 0.f || !std::isfinite(area)) {
            if (degenerate) ++*degenerate;
            continue;
        }
        if (area < 0.f) std::swap(i1, i2);  // normalize winding
        ScreenTriangle st;
        st.x0 = sx[i0];
        st.y0 = sy[i0];
        st.iz0 = iz[i0];
        st.x1 = sx[i1];
        st.y1 = sy[i1];
        st.iz1 = iz[i1];
        st.x2 = sx[i2];
        st.y2 = sy[i2];
        st.iz2 = iz[i2];
        st.id = int32_t(i);
        st.c0 = scene.vertex_colors[tri[i0]];
        st.c1 = scene.vertex_colors[tri[i1]];
        st.c2 = scene.vertex_colors[tri[i2]];
        out.push_back(st);
    }
    return out;
}

Framebuffer triangle_raster_reference(const TriangleScene& scene, const Camera& cam,
                                      size_t* degenerate) {
    Framebuffer fb(cam.width, cam.height);
    auto tris = setup_triangles(scene, cam, degenerate, nullptr);
    for (const auto& t : tris) {
        float min_x = std::min({t.x0, t.x1, t.x2});
        float max_x = std::max({t.x0, t.x1, t.x2});
        float min_y = std::min({t.y0, t.y1, t.y2});
        float max_y = std::max({t.y0, t.y1, t.y2});
        int px0 = std::max(0, int(std::floor(min_x)));
        int px1 = std::min(cam.width - 1, int(std::ceil(max_x)));
        int py0 = std::max(0, int(std::floor(min_y)));
        int py1 = std::min(cam.height - 1, int(std::ceil(max_y)));
        for (int y = py0; y <= py1; ++y) {
            for (int x = px0; x <= px1; ++x) {
                PixelCoord pc = PixelCoord::center(x, y);
                float w0, u, v, rz;
                if (!triangle_pixel_eval(pc, t, &w0, &u, &v, &rz)) continue;
                size_t pix = fb.idx(x, y);
                // Subtask 4: min-depth hold (strictly smaller depth wins;
                // larger inverse depth means closer).
                if (rz > fb.inv_depth[pix]) {
                    fb.inv_depth[pix] = rz;
                    fb.u_weight[pix] = u;
                    fb.v_weight[pix] = v;
                    fb.prim_id[pix] = t.id;
                }
            }
        }
    }
    return fb;
}

void resolve_triangle_colors(Framebuffer& fb, const std::vector<ScreenTriangle>& tris) {
    std::vector<const ScreenTriangle*> by_id;
    for (const auto& t : tris) {
        if (size_t(t.id) >= by_id.size()) by_id.resize(size_t(t.id) + 1, nullptr);
        by_id[size_t(t.id)] = &t;
    }
    for (size_t pix = 0; pix < fb.color.size(); ++pix) {
        int32_t id = fb.prim_id[pix];
        if (id < 0 || !by_id[size_t(id)]) continue;
        const ScreenTriangle& t = *by_id[size_t(id)];
        float u = fb.u_weight[pix], v = fb.v_weight[pix];
        float w0 = 1.f - u - v;
        fb.color[pix] = t.c0 * w0 + t.c1 * u + t.c2 * v;
    }
}

}  // namespace gaurast
