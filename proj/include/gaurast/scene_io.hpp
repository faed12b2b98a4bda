#pragma once

#include <string>
#include <vector>

#include "gaurast/framebuffer.hpp"
#include "gaurast/types.hpp"

namespace gaurast {

// Binary little-endian PLY with the standard pre-trained splat layout:
// x,y,z, f_dc_0..2, f_rest_0..44, opacity, scale_0..2, rot_0..3.
// Activations are applied at load (exp on scale, logistic on opacity,
// quaternion normalization). ASCII PLY is rejected.
std::vector<Gaussian3D> load_gaussian_ply(const std::string& path);
void write_gaussian_ply(const std::string& path, const std::vector<Gaussian3D>& gaussians);

// Wavefront-style `v`/`f` records, optional per-vertex RGB after coordinates.
// Faces with more than 3 vertices are fan-triangulated.
TriangleScene load_triangle_obj(const std::string& path);
void write_triangle_obj(const std::string& path, const TriangleScene& scene);

// JSON with keys: width, height, fx, fy, cx, cy,
// world_to_camera (16 numbers, row-major), near, far.
Camera load_camera_json(const std::string& path);
void write_camera_json(const std::string& path, const Camera& cam);

// Binary PPM (P6), 8-bit, color clamped to [0,1] then rounded half-up.
void write_image(const std::string& path, const Framebuffer& fb);

// Value clamped to [0,1], rounded half-up to 0..255.
uint8_t quantize_channel(float v);

// CSV with a header row, comma separated, '.' decimal point.
void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};
CsvTable read_csv(const std::string& path);

// Flat binary per-pixel effective-count buffer:
// width, height as uint32, then row-major uint32 counts.
void write_counts(const std::string& path, const Framebuffer& fb);
std::vector<uint32_t> read_counts(const std::string& path, int* width, int* height);

}  // namespace gaurast
