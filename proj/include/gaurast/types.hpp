#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gaurast {

struct Vec2f {
    float x = 0.f, y = 0.f;
};

struct Vec3f {
    float x = 0.f, y = 0.f, z = 0.f;

    Vec3f operator+(const Vec3f& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3f operator-(const Vec3f& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3f operator*(float s) const { return {x * s, y * s, z * s}; }
    float dot(const Vec3f& o) const { return x * o.x + y * o.y + z * o.z; }
    float norm() const { return std::sqrt(dot(*this)); }
    Vec3f normalized() const {
        float n = norm();
        return n > 0.f ? Vec3f{x / n, y / n, z / n} : Vec3f{0.f, 0.f, 0.f};
    }
};

// Row-major 3x3.
struct Mat3f {
    std::array<float, 9> m{};

    float& operator()(int r, int c) { return m[r * 3 + c]; }
    float operator()(int r, int c) const { return m[r * 3 + c]; }

    static Mat3f identity() {
        Mat3f out;
        out(0, 0) = out(1, 1) = out(2, 2) = 1.f;
        return out;
    }

    Mat3f operator*(const Mat3f& o) const {
        Mat3f out;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                float s = 0.f;
                for (int k = 0; k < 3; ++k) s += (*this)(r, k) * o(k, c);
                out(r, c) = s;
            }
        return out;
    }

    Vec3f operator*(const Vec3f& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }

    Mat3f transposed() const {
        Mat3f out;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) out(r, c) = (*this)(c, r);
        return out;
    }
};

// Unit quaternion (w, x, y, z) to rotation matrix.
Mat3f quat_to_mat(float w, float x, float y, float z);

// One scene primitive as loaded: activations already applied
// (scale = exp(raw), opacity = logistic(raw), quaternion normalized).
struct Gaussian3D {
    Vec3f position;
    Vec3f scale;                       // strictly positive
    std::array<float, 4> rotation{};   // unit quaternion (w, x, y, z)
    float opacity = 0.f;               // in [0, 1]
    std::array<Vec3f, 16> sh{};        // degree 0..3 RGB coefficient triplets
};

struct TriangleScene {
    std::vector<Vec3f> vertices;
    std::vector<Vec3f> vertex_colors;              // RGB in [0, 1], parallel to vertices
    std::vector<std::array<uint32_t, 3>> triangles;
};

struct Camera {
    int width = 0, height = 0;
    float fx = 0.f, fy = 0.f, cx = 0.f, cy = 0.f;
    std::array<float, 16> world_to_camera{};  // 4x4 rigid transform, row-major
    float near_plane = 0.f, far_plane = 0.f;

    Mat3f rotation() const {
        Mat3f r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r(i, j) = world_to_camera[i * 4 + j];
        return r;
    }
    Vec3f translation() const {
        return {world_to_camera[3], world_to_camera[7], world_to_camera[11]};
    }
    Vec3f to_camera(const Vec3f& p) const { return rotation() * p + translation(); }
    // Camera center in world coordinates: -R^T t.
    Vec3f position_world() const {
        Vec3f t = translation();
        Vec3f r = rotation().transposed() * t;
        return {-r.x, -r.y, -r.z};
    }
};

// Thrown by loaders on malformed input.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown when loaded data violates a documented invariant.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace gaurast
