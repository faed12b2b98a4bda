#pragma once

#include <optional>
#include <vector>

#include "gaurast/types.hpp"

namespace gaurast {

// A 3D Gaussian after projection to screen space.
struct Splat2D {
    Vec2f mean;                      // pixels
    float conic_a = 0.f;             // unique entries of the inverse 2x2 covariance
    float conic_b = 0.f;
    float conic_c = 0.f;
    float opacity = 0.f;
    Vec3f color;
    float depth = 0.f;               // camera-space z
    float cov_xx = 0.f, cov_yy = 0.f;  // 2D covariance diagonal (for binning)
    int tile_min_x = 0, tile_min_y = 0;  // inclusive tile rectangle
    int tile_max_x = 0, tile_max_y = 0;
};

struct CullStats {
    size_t depth_culled = 0;
    size_t offscreen_culled = 0;
    size_t degenerate_culled = 0;
    size_t total() const { return depth_culled + offscreen_culled + degenerate_culled; }
};

// Sigma_3D = R * S * S^T * R^T with S = diag(scale).
Mat3f compute_cov3d(const Gaussian3D& g);

// Real spherical harmonics up to degree 3, 3DGS convention:
// basis dot coefficients, plus 0.5, clamped at 0 from below.
Vec3f evaluate_sh(const Gaussian3D& g, const Vec3f& view_dir, int degree);

// Projects one Gaussian; returns nullopt when culled (depth outside
// [near,far], mean more than 3 sigma outside the image, or degenerate
// 2D covariance after the 0.3 low-pass). Tile rectangle is not set here.
std::optional<Splat2D> project_gaussian(const Gaussian3D& g, const Camera& cam,
                                        int sh_degree, CullStats* stats = nullptr);

// Tile rectangle covering the axis-aligned 3-sigma box of the splat,
// clamped to the image; false when the intersection is empty.
bool tile_bin(Splat2D& s, int tile_size, int width, int height);

// Full Step 1: project, color, cull and bin every Gaussian. Output order
// follows input order; `threads` only affects scheduling, never results.
std::vector<Splat2D> preprocess_scene(const std::vector<Gaussian3D>& gaussians,
                                      const Camera& cam, int tile_size, int sh_degree,
                                      CullStats* stats = nullptr, int threads = 1);

}  // namespace gaurast
