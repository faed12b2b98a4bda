#include "gaurast/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "gaurast/constants.hpp"

namespace gaurast {

namespace {

// Real SH basis constants, 3DGS convention.
constexpr float kSH0 = 0.28209479177387814f;
constexpr float kSH1 = 0.4886025119029199f;
constexpr float kSH2[5] = {1.0925484305920792f, -1.0925484305920792f, 0.31539156525252005f,
                           -1.0925484305920792f, 0.5462742152960396f};
constexpr float kSH3[7] = {-0.5900435899266435f, 2.890611442640554f,  -0.4570457994644658f,
                           0.3731763325901154f,  -0.4570457994644658f, 1.445305721320277f,
                           -0.5900435899266435f};

}  // namespace

Mat3f compute_cov3d(const Gaussian3D& g) {
    Mat3f r = quat_to_mat(g.rotation[0], g.rotation[1], g.rotation[2], g.rotation[3]);
    Mat3f m = r;  // M = R * S
    for (int row = 0; row < 3; ++row) {
        m(row, 0) *= g.scale.x;
        m(row, 1) *= g.scale.y;
        m(row, 2) *= g.scale.z;
    }
    return m * m.transposed();
}

Vec3f evaluate_sh(const Gaussian3D& g, const Vec3f& dir, int degree) {
    Vec3f c = g.sh[0] * kSH0;
    if (degree >= 1) {
        float x = dir.x, y = dir.y, z = dir.z;
        c = c + g.sh[1] * (-kSH1 * y) + g.sh[2] * (kSH1 * z) + g.sh[3] * (-kSH1 * x);
        if (degree >= 2) {
            float xx = x * x, yy = y * y, zz = z * z;
            float xy = x * y, yz = y * z, xz = x * z;
            c = c + g.sh[4] * (kSH2[0] * xy) + g.sh[5] * (kSH2[1] * yz) +
                g.sh[6] * (kSH2[2] * (2.f * zz - xx - yy)) + g.sh[7] * (kSH2[3] * xz) +
                g.sh[8] * (kSH2[4] * (xx - yy));
            if (degree >= 3) {
                c = c + g.sh[9] * (kSH3[0] * y * (3.f * xx - yy)) + g.sh[10] * (kSH3[1] * xy * z) +
                    g.sh[11] * (kSH3[2] * y * (4.f * zz - xx - yy)) +
                    g.sh[12] * (kSH3[3] * z * (2.f * zz - 3.f * xx - 3.f * yy)) +
                    g.sh[13] * (kSH3[4] * x * (4.f * zz - xx - yy)) +
                    g.sh[14] * (kSH3[5] * z * (xx - yy)) + g.sh[15] * (kSH3[6] * x * (xx - yy));
            }
        }
    }
    c = c + Vec3f{0.5f, 0.5f, 0.5f};
    return {std::max(0.f, c.x), std::max(0.f, c.y), std::max(0.f, c.z)};
}

std::optional<Splat2D> project_gaussian(const Gaussian3D& g, const Camera& cam, int sh_degree,
                                        CullStats* stats) {
    Vec3f t = cam.to_camera(g.position);
    if (t.z < cam.near_plane || t.z > cam.far_plane) {
        if (stats) ++stats->depth_culled;
        return std::nullopt;
    }

    Splat2D s;
    s.depth = t.z;
    s.mean = {cam.fx * t.x / t.z + cam.cx, cam.fy * t.y / t.z + cam.cy};

    // 2D covariance = J W Sigma W^T J^T + low-pass, with J the local affine
    // Jacobian of the pinhole map at the camera-space mean.
    Mat3f cov3d = compute_cov3d(g);
    Mat3f w = cam.rotation();
    float inv_z = 1.f / t.z;
    float jj[2][3] = {{cam.fx * inv_z, 0.f, -cam.fx * t.x * inv_z * inv_z},
                      {0.f, cam.fy * inv_z, -cam.fy * t.y * inv_z * inv_z}};
    Mat3f vw = cov3d * w.transposed();  // Sigma W^T
    Mat3f wvw = w * vw;                 // W Sigma W^T
    float jw[2][3];
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 3; ++c)
            jw[r][c] = jj[r][0] * wvw(0, c) + jj[r][1] * wvw(1, c) + jj[r][2] * wvw(2, c);
    float cxx = jw[0][0] * jj[0][0] + jw[0][1] * jj[0][1] + jw[0][2] * jj[0][2] + kCovLowPass;
    float cxy = jw[0][0] * jj[1][0] + jw[0][1] * jj[1][1] + jw[0][2] * jj[1][2];
    float cyy = jw[1][0] * jj[1][0] + jw[1][1] * jj[1][1] + jw[1][2] * jj[1][2] + kCovLowPass;

    float det = cxx * cyy - cxy * cxy;
    if (!(det > 0.f) || !std::isfinite(det)) {
        if (stats) ++stats->degenerate_culled;
        return std::nullopt;
    }
    float inv_det = 1.f / det;
    s.conic_a = cyy * inv_det;
    s.conic_b = -cxy * inv_det;
    s.conic_c = cxx * inv_det;
    s.cov_xx = cxx;
    s.cov_yy = cyy;
    s.opacity = g.opacity;

    // Cull when the mean lies more than 3 sigma outside the image.
    float rx = kBinSigma * std::sqrt(cxx);
    float ry = kBinSigma * std::sqrt(cyy);
    if (s.mean.x + rx < 0.f || s.mean.x - rx > float(cam.width) || s.mean.y + ry < 0.f ||
        s.mean.y - ry > float(cam.height)) {
        if (stats) ++stats->offscreen_culled;
        return std::nullopt;
    }

    Vec3f view_dir = (g.position - cam.position_world()).normalized();
    s.color = evaluate_sh(g, view_dir, sh_degree);
    return s;
}

bool tile_bin(Splat2D& s, int tile_size, int width, int height) {
    float rx = kBinSigma * std::sqrt(s.cov_xx);
    float ry = kBinSigma * std::sqrt(s.cov_yy);
    int tiles_x = (width + tile_size - 1) / tile_size;
    int tiles_y = (height + tile_size - 1) / tile_size;
    int min_x = int(std::floor((s.mean.x - rx) / float(tile_size)));
    int max_x = int(std::floor((s.mean.x + rx) / float(tile_size)));
    int min_y = int(std::floor((s.mean.y - ry) / float(tile_size)));
    int max_y = int(std::floor((s.mean.y + ry) / float(tile_size)));
    if (max_x < 0 || min_x >= tiles_x || max_y < 0 || min_y >= tiles_y) return false;
    s.tile_min_x = std::max(0, min_x);
    s.tile_max_x = std::min(tiles_x - 1, max_x);
    s.tile_min_y = std::max(0, min_y);
    s.tile_max_y = std::min(tiles_y - 1, max_y);
    return true;
}

std::vector<Splat2D> preprocess_scene(const std::vector<Gaussian3D>& gaussians,
                                      const Camera& cam, int tile_size, int sh_degree,
                                      CullStats* stats, int threads) {
    const size_t n = gaussians.size();
    std::vector<std::optional<Splat2D>> projected(n);
    std::vector<CullStats> local(std::max(1, threads));

    auto worker = [&](size_t lo, size_t hi, CullStats* cs) {
        for (size_t i = lo; i < hi; ++i) {
            auto s = project_gaussian(gaussians[i], cam, sh_degree, cs);
            if (s && tile_bin(*s, tile_size, cam.width, cam.height)) {
                projected[i] = *s;
            } else if (s) {
                ++cs->offscreen_culled;
            }
        }
    };

    if (threads <= 1 || n < 256) {
        worker(0, n, &local[0]);
    } else {
        std::vector<std::thread> pool;
        size_t chunk = (n + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            size_t lo = std::min(n, size_t(t) * chunk);
            size_t hi = std::min(n, lo + chunk);
            if (lo < hi) pool.emplace_back(worker, lo, hi, &local[t]);
        }
        for (auto& th : pool) th.join();
    }

    if (stats) {
        for (const auto& cs : local) {
            stats->depth_culled += cs.depth_culled;
            stats->offscreen_culled += cs.offscreen_culled;
            stats->degenerate_culled += cs.degenerate_culled;
        }
    }

    // Compact in input order regardless of the execution schedule.
    std::vector<Splat2D> out;
    out.reserve(n);
    for (auto& p : projected)
        if (p) out.push_back(*p);
    return out;
}

}  // namespace gaurast
