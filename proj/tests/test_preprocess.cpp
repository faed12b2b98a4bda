#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gaurast/constants.hpp"
#include "gaurast/preprocess.hpp"
#include "gaurast/raster_ref.hpp"
#include "test_util.hpp"

using namespace gaurast;

namespace {

Gaussian3D plain_gaussian(Vec3f pos, Vec3f scale, std::array<float, 4> quat, float opacity) {
    Gaussian3D g;
    g.position = pos;
    g.scale = scale;
    g.rotation = quat;
    g.opacity = opacity;
    g.sh[0] = {1.f, 1.f, 1.f};
    return g;
}

}  // namespace

TEST_CASE("compute_cov3d basics") {
    auto g = plain_gaussian({0, 0, 0}, {1, 1, 1}, {1, 0, 0, 0}, 1.f);
    Mat3f c = compute_cov3d(g);
    for (int r = 0; r < 3; ++r)
        for (int k = 0; k < 3; ++k) CHECK(c(r, k) == doctest::Approx(r == k ? 1.0 : 0.0).epsilon(1e-6));

    g.scale = {2, 1, 1};
    c = compute_cov3d(g);
    CHECK(c(0, 0) == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(c(1, 1) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(c(2, 2) == doctest::Approx(1.0).epsilon(1e-6));

    // 90 degrees about z moves the long axis from x to y.
    float s = std::sqrt(0.5f);
    g.rotation = {s, 0.f, 0.f, s};
    Mat3f rot = compute_cov3d(g);
    // Oracle: compose R*S*S^T*R^T numerically in double.
    double r90[3][3] = {{0, -1, 0}, {1, 0, 0}, {0, 0, 1}};
    double sigma[3][3] = {{4, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    double tmp[3][3] = {}, expect[3][3] = {};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) tmp[i][j] += r90[i][k] * sigma[k][j];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) expect[i][j] += tmp[i][k] * r90[j][k];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(rot(i, j) == doctest::Approx(expect[i][j]).epsilon(1e-5));
    CHECK(rot(1, 1) == doctest::Approx(4.0).epsilon(1e-5));
}

TEST_CASE("project_gaussian pinhole mean and depth") {
    Camera cam = testutil::identity_camera(100, 100, 100.f);
    cam.cx = cam.cy = 50.f;
    auto g = plain_gaussian({0, 0, 2}, {0.01f, 0.01f, 0.01f}, {1, 0, 0, 0}, 0.5f);
    auto s = project_gaussian(g, cam, 0);
    REQUIRE(s.has_value());
    CHECK(s->mean.x == doctest::Approx(50.0));
    CHECK(s->mean.y == doctest::Approx(50.0));
    CHECK(s->depth == doctest::Approx(2.0));
}

TEST_CASE("project_gaussian culls by depth") {
    Camera cam = testutil::identity_camera(64, 64, 64.f);
    auto g = plain_gaussian({0, 0, cam.near_plane / 2.f}, {0.01f, 0.01f, 0.01f}, {1, 0, 0, 0}, 0.5f);
    CullStats stats;
    CHECK(!project_gaussian(g, cam, 0, &stats).has_value());
    CHECK(stats.depth_culled == 1);
    g.position.z = cam.far_plane * 2.f;
    CHECK(!project_gaussian(g, cam, 0, &stats).has_value());
    CHECK(stats.depth_culled == 2);
}

TEST_CASE("isotropic 2D covariance matches the closed form") {
    Camera cam = testutil::identity_camera(200, 200, 150.f);
    float s = 0.1f, z = 4.f;
    auto g = plain_gaussian({0, 0, z}, {s, s, s}, {1, 0, 0, 0}, 0.5f);
    auto sp = project_gaussian(g, cam, 0);
    REQUIRE(sp.has_value());
    double expect = double(cam.fx) * s / z;
    expect = expect * expect + 0.3;
    CHECK(sp->cov_xx == doctest::Approx(expect).epsilon(1e-4));
    CHECK(sp->cov_yy == doctest::Approx(expect).epsilon(1e-4));
    // conic is the inverse of the 2x2 covariance
    CHECK(sp->conic_a == doctest::Approx(1.0 / expect).epsilon(1e-4));
    CHECK(std::fabs(sp->conic_b) < 1e-5f);
}

TEST_CASE("conic -> covariance -> conic reproduces within 1e-5") {
    Camera cam = testutil::identity_camera(256, 256, 300.f);
    auto gaussians = testutil::random_gaussians(200, 21);
    auto splats = preprocess_scene(gaussians, cam, 16, 3);
    REQUIRE(!splats.empty());
    for (const auto& s : splats) {
        // Invariant: positive definite conic.
        CHECK(s.conic_a > 0.f);
        CHECK(s.conic_c > 0.f);
        CHECK(s.conic_a * s.conic_c - s.conic_b * s.conic_b > 0.f);
        double det = double(s.conic_a) * s.conic_c - double(s.conic_b) * s.conic_b;
        double cov_xx = s.conic_c / det, cov_yy = s.conic_a / det, cov_xy = -s.conic_b / det;
        double det2 = cov_xx * cov_yy - cov_xy * cov_xy;
        CHECK(cov_yy / det2 == doctest::Approx(s.conic_a).epsilon(1e-5));
        CHECK(cov_xx / det2 == doctest::Approx(s.conic_c).epsilon(1e-5));
        CHECK(-cov_xy / det2 == doctest::Approx(s.conic_b).epsilon(1e-5));
    }
}

TEST_CASE("evaluate_sh degree 0") {
    Gaussian3D g;
    g.sh[0] = {0, 0, 0};
    Vec3f c = evaluate_sh(g, {0, 0, 1}, 0);
    CHECK(c.x == doctest::Approx(0.5));
    CHECK(c.y == doctest::Approx(0.5));
    CHECK(c.z == doctest::Approx(0.5));

    g.sh[0] = {1, 1, 1};
    c = evaluate_sh(g, {0, 0, 1}, 0);
    CHECK(c.x == doctest::Approx(0.5 + 0.2820948).epsilon(1e-6));
}

TEST_CASE("evaluate_sh degree 0 is view independent") {
    std::mt19937 rng(3);
    std::normal_distribution<float> n(0.f, 1.f);
    Gaussian3D g;
    g.sh[0] = {0.3f, -0.2f, 0.7f};
    for (int k = 1; k < 16; ++k) g.sh[k] = {n(rng), n(rng), n(rng)};
    Vec3f ref = evaluate_sh(g, {0, 0, 1}, 0);
    for (int i = 0; i < 100; ++i) {
        Vec3f d = Vec3f{n(rng), n(rng), n(rng)}.normalized();
        Vec3f c = evaluate_sh(g, d, 0);
        CHECK(c.x == ref.x);
        CHECK(c.y == ref.y);
        CHECK(c.z == ref.z);
    }
}

TEST_CASE("evaluate_sh degree 1 follows the matching direction component") {
    Gaussian3D g;
    g.sh[0] = {0, 0, 0};
    g.sh[2] = {1.f, 0.f, 0.f};  // the z-aligned band-1 coefficient, red channel
    constexpr double kSH1 = 0.4886025119029199;
    Vec3f up = evaluate_sh(g, {0, 0, 1}, 1);
    CHECK(up.x == doctest::Approx(0.5 + kSH1).epsilon(1e-6));
    Vec3f down = evaluate_sh(g, {0, 0, -1}, 1);
    CHECK(down.x == doctest::Approx(std::max(0.0, 0.5 - kSH1)).epsilon(1e-5));
    Vec3f side = evaluate_sh(g, {1, 0, 0}, 1);
    CHECK(side.x == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("tile_bin arithmetic") {
    Splat2D s;
    s.mean = {100.f, 100.f};
    float sigma = 10.f / 3.f;  // 3-sigma extent of 10 px per axis
    s.cov_xx = s.cov_yy = sigma * sigma;
    REQUIRE(tile_bin(s, 16, 256, 256));
    CHECK(s.tile_min_x == 5);
    CHECK(s.tile_max_x == 6);
    CHECK(s.tile_min_y == 5);
    CHECK(s.tile_max_y == 6);

    // Fully left of the image.
    Splat2D off = s;
    off.mean = {-100.f, 100.f};
    CHECK(!tile_bin(off, 16, 256, 256));

    // 1x1 image: single tile.
    Splat2D tiny = s;
    tiny.mean = {0.5f, 0.5f};
    REQUIRE(tile_bin(tiny, 16, 1, 1));
    CHECK(tiny.tile_min_x == 0);
    CHECK(tiny.tile_max_x == 0);
    CHECK(tiny.tile_max_y == 0);
}

TEST_CASE("culling is conservative on a small image") {
    Camera cam = testutil::identity_camera(32, 32, 40.f);
    auto gaussians = testutil::random_gaussians(300, 33, 6.f);  // many land off screen
    CullStats stats;
    auto splats = preprocess_scene(gaussians, cam, 16, 3, &stats);
    REQUIRE(stats.total() > 0);

    // Re-project culled Gaussians through a camera so wide it never culls on
    // screen bounds, then check no pixel of the real image sees them.
    Camera wide = cam;
    wide.width = 16384;
    wide.height = 16384;
    size_t checked = 0;
    for (const auto& g : gaussians) {
        auto s = project_gaussian(g, cam, 3);
        bool kept = false;
        if (s.has_value()) {
            Splat2D binned = *s;
            kept = tile_bin(binned, 16, cam.width, cam.height);
        }
        if (kept) continue;
        auto ws = project_gaussian(g, wide, 3);
        if (!ws.has_value()) continue;  // depth or degeneracy cull, off frustum
        ++checked;
        for (int y = 0; y < cam.height; ++y)
            for (int x = 0; x < cam.width; ++x) {
                float alpha = gaussian_alpha(PixelCoord::center(x, y), *ws);
                CHECK(alpha < 1.0f / 255.0f);
            }
    }
    CHECK(checked > 0);
}

TEST_CASE("preprocess output order is input order and thread-invariant") {
    Camera cam = testutil::identity_camera(128, 128, 150.f);
    auto gaussians = testutil::random_gaussians(2000, 5);
    auto seq = preprocess_scene(gaussians, cam, 16, 3, nullptr, 1);
    auto par = preprocess_scene(gaussians, cam, 16, 3, nullptr, 4);
    REQUIRE(seq.size() == par.size());
    for (size_t i = 0; i < seq.size(); ++i) {
        CHECK(testutil::same_bits(seq[i].mean.x, par[i].mean.x));
        CHECK(testutil::same_bits(seq[i].conic_a, par[i].conic_a));
        CHECK(testutil::same_bits(seq[i].color.x, par[i].color.x));
        CHECK(testutil::same_bits(seq[i].depth, par[i].depth));
    }
    // Depths follow input order of the surviving subset.
    size_t j = 0;
    for (const auto& g : gaussians) {
        auto s = project_gaussian(g, cam, 3);
        if (!s) continue;
        Splat2D b = *s;
        if (!tile_bin(b, 16, cam.width, cam.height)) continue;
        REQUIRE(j < seq.size());
        CHECK(seq[j].depth == s->depth);
        ++j;
    }
    CHECK(j == seq.size());
}
