#pragma once

#include <vector>

#include "gaurast/framebuffer.hpp"
#include "gaurast/preprocess.hpp"
#include "gaurast/sorter.hpp"
#include "gaurast/types.hpp"

namespace gaurast {

// Pixel-center coordinates (integer pixel + 0.5 convention).
struct PixelCoord {
    float x = 0.f, y = 0.f;
    static PixelCoord center(int px, int py) {
        return {float(px) + 0.5f, float(py) + 0.5f};
    }
};

// A triangle after vertex processing: screen-space positions plus per-vertex
// inverse camera depth. Winding is normalized so the signed area is positive.
struct ScreenTriangle {
    float x0, y0, iz0;
    float x1, y1, iz1;
    float x2, y2, iz2;
    int32_t id = -1;
    Vec3f c0, c1, c2;  // vertex colors, only used by the optional resolve
};

// alpha = o * exp(-1/2 (P-mu)^T Sigma^-1 (P-mu)), clamped to kAlphaClamp.
// Positive exponents from numeric noise are treated as zero.
float gaussian_alpha(const PixelCoord& p, const Splat2D& s);

// Front-to-back accumulation of one contribution:
// C += T*alpha*c, T *= (1-alpha), terminate when T drops below 1/255.
void blend_pixel(Framebuffer& fb, size_t pix, float alpha, const Vec3f& c);

// Step 3 scalar reference: per pixel, walks the tile's sorted splats
// front to back until termination. Fills color, transmittance and the
// per-pixel effective splat counts.
Framebuffer render_gaussians_reference(const std::vector<Splat2D>& splats,
                                       const SortedTiles& sorted, const Camera& cam,
                                       int tile_size);

// Per-pixel edge-function evaluation against one screen triangle.
// Returns false when the pixel is outside (top-left fill rule).
// On success fills barycentric (w0,u,v) and interpolated inverse depth.
bool triangle_pixel_eval(const PixelCoord& p, const ScreenTriangle& t,
                         float* w0, float* u, float* v, float* inv_z);

// Projects scene vertices; degenerate (zero-area) triangles are skipped
// and counted, triangles with any vertex outside [near,far] are rejected.
std::vector<ScreenTriangle> setup_triangles(const TriangleScene& scene, const Camera& cam,
                                            size_t* degenerate = nullptr,
                                            size_t* depth_rejected = nullptr);

// Scalar triangle reference: per pixel keeps the fragment with the
// strictly smallest depth; output is (u, v, depth, prim id) per pixel.
Framebuffer triangle_raster_reference(const TriangleScene& scene, const Camera& cam,
                                      size_t* degenerate = nullptr);

// Optional visualization resolve: vertex colors weighted by barycentrics.
void resolve_triangle_colors(Framebuffer& fb, const std::vector<ScreenTriangle>& tris);

}  // namespace gaurast
