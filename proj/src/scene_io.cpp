#include "gaurast/scene_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace gaurast {

namespace {

// The 59 float properties of the pre-trained splat layout, in file order.
const std::vector<std::string>& required_ply_properties() {
    static const std::vector<std::string> props = [] {
        std::vector<std::string> p = {"x", "y", "z"};
        for (int i = 0; i < 3; ++i) p.push_back("f_dc_" + std::to_string(i));
        for (int i = 0; i < 45; ++i) p.push_back("f_rest_" + std::to_string(i));
        p.push_back("opacity");
        for (int i = 0; i < 3; ++i) p.push_back("scale_" + std::to_string(i));
        for (int i = 0; i < 4; ++i) p.push_back("rot_" + std::to_string(i));
        return p;
    }();
    return props;
}

// Double intermediates so that load -> write -> load is bit-stable.
float logistic(float x) { return float(1.0 / (1.0 + std::exp(-double(x)))); }
float logit(float y) { return float(std::log(double(y) / (1.0 - double(y)))); }
float exp_activation(float x) { return float(std::exp(double(x))); }
float log_activation(float x) { return float(std::log(double(x))); }

[[noreturn]] void parse_fail(const std::string& path, const std::string& what, size_t offset) {
    throw ParseError(path + ": " + what + " (byte offset " + std::to_string(offset) + ")");
}

}  // namespace

std::vector<Gaussian3D> load_gaussian_ply(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");

    // Header is line oriented ASCII terminated by end_header.
    std::string line;
    size_t offset = 0;
    auto next_line = [&]() {
        if (!std::getline(in, line)) parse_fail(path, "unexpected end of header", offset);
        offset += line.size() + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
    };

    next_line();
    if (line != "ply") parse_fail(path, "not a PLY file (missing 'ply' magic)", 0);

    size_t vertex_count = 0;
    bool format_seen = false;
    std::vector<std::string> properties;
    while (true) {
        next_line();
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        if (tok == "comment") continue;
        if (tok == "format") {
            std::string fmt;
            ls >> fmt;
            if (fmt == "ascii")
                throw ParseError(path + ": ASCII PLY is not supported, expected binary_little_endian");
            if (fmt != "binary_little_endian")
                parse_fail(path, "unsupported format '" + fmt + "'", offset);
            format_seen = true;
        } else if (tok == "element") {
            std::string name;
            ls >> name >> vertex_count;
            if (name != "vertex") parse_fail(path, "unsupported element '" + name + "'", offset);
        } else if (tok == "property") {
            std::string type, name;
            ls >> type >> name;
            if (type != "float" && type != "float32")
                parse_fail(path, "property '" + name + "' has non-float type '" + type + "'", offset);
            properties.push_back(name);
        } else if (tok == "end_header") {
            break;
        } else {
            parse_fail(path, "malformed header line '" + line + "'", offset);
        }
    }
    if (!format_seen) parse_fail(path, "missing format line", offset);

    std::unordered_map<std::string, size_t> prop_index;
    for (size_t i = 0; i < properties.size(); ++i) prop_index[properties[i]] = i;
    std::vector<size_t> field_at;  // required property -> record slot
    for (const auto& name : required_ply_properties()) {
        auto it = prop_index.find(name);
        if (it == prop_index.end())
            throw ParseError(path + ": missing required property '" + name + "'");
        field_at.push_back(it->second);
    }

    const size_t stride = properties.size();
    std::vector<float> record(stride);
    std::vector<Gaussian3D> out;
    out.reserve(vertex_count);
    for (size_t i = 0; i < vertex_count; ++i) {
        in.read(reinterpret_cast<char*>(record.data()),
                std::streamsize(stride * sizeof(float)));
        if (!in)
            parse_fail(path, "truncated payload at element " + std::to_string(i),
                       offset + i * stride * sizeof(float));

        auto f = [&](size_t k) { return record[field_at[k]]; };
        Gaussian3D g;
        g.position = {f(0), f(1), f(2)};
        g.sh[0] = {f(3), f(4), f(5)};
        // f_rest is channel major: 15 red, then 15 green, then 15 blue.
        for (int k = 0; k < 15; ++k) {
            g.sh[k + 1] = {f(6 + k), f(6 + 15 + k), f(6 + 30 + k)};
        }
        g.opacity = logistic(f(51));
        g.scale = {exp_activation(f(52)), exp_activation(f(53)), exp_activation(f(54))};
        float qw = f(55), qx = f(56), qy = f(57), qz = f(58);
        double qn = std::sqrt(double(qw) * qw + double(qx) * qx + double(qy) * qy +
                              double(qz) * qz);
        if (!(qn > 0.0) || !std::isfinite(qn))
            throw ValidationError(path + ": element " + std::to_string(i) +
                                  " has a zero or non-finite quaternion");
        // Already-unit quaternions are kept bit-identical.
        if (std::fabs(qn - 1.0) <= 1e-6) {
            g.rotation = {qw, qx, qy, qz};
        } else {
            g.rotation = {float(qw / qn), float(qx / qn), float(qy / qn), float(qz / qn)};
        }
        if (!std::isfinite(g.scale.x) || !std::isfinite(g.scale.y) || !std::isfinite(g.scale.z) ||
            !(g.scale.x > 0.f && g.scale.y > 0.f && g.scale.z > 0.f))
            throw ValidationError(path + ": element " + std::to_string(i) +
                                  " has a non-positive or non-finite scale");
        out.push_back(g);
    }
    return out;
}

void write_gaussian_ply(const std::string& path, const std::vector<Gaussian3D>& gaussians) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << "ply\nformat binary_little_endian 1.0\n";
    out << "element vertex " << gaussians.size() << "\n";
    for (const auto& name : required_ply_properties()) out << "property float " << name << "\n";
    out << "end_header\n";
    for (const auto& g : gaussians) {
        std::vector<float> rec;
        rec.reserve(59);
        rec.insert(rec.end(), {g.position.x, g.position.y, g.position.z});
        rec.insert(rec.end(), {g.sh[0].x, g.sh[0].y, g.sh[0].z});
        for (int k = 0; k < 15; ++k) rec.push_back(g.sh[k + 1].x);
        for (int k = 0; k < 15; ++k) rec.push_back(g.sh[k + 1].y);
        for (int k = 0; k < 15; ++k) rec.push_back(g.sh[k + 1].z);
        rec.push_back(logit(g.opacity));
        rec.insert(rec.end(), {log_activation(g.scale.x), log_activation(g.scale.y),
                               log_activation(g.scale.z)});
        rec.insert(rec.end(), {g.rotation[0], g.rotation[1], g.rotation[2], g.rotation[3]});
        out.write(reinterpret_cast<const char*>(rec.data()),
                  std::streamsize(rec.size() * sizeof(float)));
    }
}

TriangleScene load_triangle_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");

    TriangleScene scene;
    std::string line;
    size_t line_no = 0;
    auto fail = [&](const std::string& what) {
        throw ParseError(path + ":" + std::to_string(line_no) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok[0] == '#') continue;
        if (tok == "v") {
            float x, y, z;
            if (!(ls >> x >> y >> z)) fail("non-numeric token in vertex record");
            Vec3f color{1.f, 1.f, 1.f};
            float r;
            if (ls >> r) {
                float g, b;
                if (!(ls >> g >> b)) fail("vertex color needs three components");
                color = {r, g, b};
            }
            scene.vertices.push_back({x, y, z});
            scene.vertex_colors.push_back(color);
        } else if (tok == "f") {
            std::vector<uint32_t> idx;
            std::string ref;
            while (ls >> ref) {
                // Accept v, v/vt, v//vn forms; only the vertex index is used.
                size_t slash = ref.find('/');
                std::string head = slash == std::string::npos ? ref : ref.substr(0, slash);
                long v = 0;
                try {
                    size_t pos = 0;
                    v = std::stol(head, &pos);
                    if (pos != head.size()) fail("non-numeric token '" + ref + "' in face record");
                } catch (const std::exception&) {
                    fail("non-numeric token '" + ref + "' in face record");
                }
                long n = long(scene.vertices.size());
                if (v < 0) v = n + v + 1;  // negative indices are relative
                if (v < 1 || v > n) fail("vertex index " + head + " out of range");
                idx.push_back(uint32_t(v - 1));
            }
            if (idx.size() < 3) fail("face with fewer than 3 vertices");
            for (size_t k = 1; k + 1 < idx.size(); ++k)
                scene.triangles.push_back({idx[0], idx[k], idx[k + 1]});
        }
        // Other record types (vn, vt, o, g, s, usemtl, ...) are ignored.
    }
    return scene;
}

void write_triangle_obj(const std::string& path, const TriangleScene& scene) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    char buf[256];
    for (size_t i = 0; i < scene.vertices.size(); ++i) {
        const Vec3f& v = scene.vertices[i];
        const Vec3f& c = scene.vertex_colors[i];
        std::snprintf(buf, sizeof buf, "v %.9g %.9g %.9g %.9g %.9g %.9g\n",
                      double(v.x), double(v.y), double(v.z),
                      double(c.x), double(c.y), double(c.z));
        out << buf;
    }
    for (const auto& t : scene.triangles)
        out << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
}

namespace {

double require_number(const nlohmann::json& j, const std::string& key) {
    if (!j.contains(key)) throw ValidationError("camera JSON: missing field '" + key + "'");
    if (!j[key].is_number()) throw ValidationError("camera JSON: field '" + key + "' is not a number");
    double v = j[key].get<double>();
    if (!std::isfinite(v)) throw ValidationError("camera JSON: field '" + key + "' is not finite");
    return v;
}

}  // namespace

Camera load_camera_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }

    Camera cam;
    cam.width = int(require_number(j, "width"));
    cam.height = int(require_number(j, "height"));
    cam.fx = float(require_number(j, "fx"));
    cam.fy = float(require_number(j, "fy"));
    cam.cx = float(require_number(j, "cx"));
    cam.cy = float(require_number(j, "cy"));
    cam.near_plane = float(require_number(j, "near"));
    cam.far_plane = float(require_number(j, "far"));
    if (!j.contains("world_to_camera"))
        throw ValidationError("camera JSON: missing field 'world_to_camera'");
    const auto& m = j["world_to_camera"];
    if (!m.is_array() || m.size() != 16)
        throw ValidationError("camera JSON: field 'world_to_camera' must hold 16 numbers");
    for (int i = 0; i < 16; ++i) {
        if (!m[i].is_number() || !std::isfinite(m[i].get<double>()))
            throw ValidationError("camera JSON: field 'world_to_camera' has a non-finite entry");
        cam.world_to_camera[i] = float(m[i].get<double>());
    }

    if (cam.width < 1 || cam.height < 1)
        throw ValidationError("camera JSON: field 'width'/'height' must be >= 1");
    if (!(cam.near_plane > 0.f) || !(cam.far_plane > cam.near_plane))
        throw ValidationError("camera JSON: field 'near'/'far' must satisfy 0 < near < far");

    // Rotation block orthonormal within 1e-5.
    Mat3f r = cam.rotation();
    Mat3f rrt = r * r.transposed();
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) {
            float expect = i == k ? 1.f : 0.f;
            if (std::fabs(rrt(i, k) - expect) > 1e-5f)
                throw ValidationError("camera JSON: field 'world_to_camera' rotation block is not orthonormal");
        }
    return cam;
}

void write_camera_json(const std::string& path, const Camera& cam) {
    nlohmann::json j;
    j["width"] = cam.width;
    j["height"] = cam.height;
    j["fx"] = cam.fx;
    j["fy"] = cam.fy;
    j["cx"] = cam.cx;
    j["cy"] = cam.cy;
    j["near"] = cam.near_plane;
    j["far"] = cam.far_plane;
    j["world_to_camera"] = cam.world_to_camera;
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << j.dump(2) << "\n";
}

uint8_t quantize_channel(float v) {
    float c = std::min(1.f, std::max(0.f, v));
    return uint8_t(std::floor(c * 255.f + 0.5f));
}

void write_image(const std::string& path, const Framebuffer& fb) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << "P6 " << fb.width << " " << fb.height << " 255\n";
    std::vector<uint8_t> row(size_t(fb.width) * 3);
    for (int y = 0; y < fb.height; ++y) {
        for (int x = 0; x < fb.width; ++x) {
            const Vec3f& c = fb.color[fb.idx(x, y)];
            row[size_t(x) * 3 + 0] = quantize_channel(c.x);
            row[size_t(x) * 3 + 1] = quantize_channel(c.y);
            row[size_t(x) * 3 + 2] = quantize_channel(c.z);
        }
        out.write(reinterpret_cast<const char*>(row.data()), std::streamsize(row.size()));
    }
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    auto emit = [&](const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) out << ",";
            out << cells[i];
        }
        out << "\n";
    };
    emit(header);
    for (const auto& r : rows) emit(r);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    CsvTable table;
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::string cur;
        for (char ch : s) {
            if (ch == ',') {
                cells.push_back(cur);
                cur.clear();
            } else if (ch != '\r') {
                cur += ch;
            }
        }
        cells.push_back(cur);
        return cells;
    };
    if (std::getline(in, line)) table.header = split(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        table.rows.push_back(split(line));
    }
    return table;
}

void write_counts(const std::string& path, const Framebuffer& fb) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    uint32_t wh[2] = {uint32_t(fb.width), uint32_t(fb.height)};
    out.write(reinterpret_cast<const char*>(wh), sizeof wh);
    out.write(reinterpret_cast<const char*>(fb.effective_count.data()),
              std::streamsize(fb.effective_count.size() * sizeof(uint32_t)));
}

std::vector<uint32_t> read_counts(const std::string& path, int* width, int* height) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    uint32_t wh[2];
    in.read(reinterpret_cast<char*>(wh), sizeof wh);
    if (!in) throw ParseError(path + ": truncated counts header");
    std::vector<uint32_t> counts(size_t(wh[0]) * wh[1]);
    in.read(reinterpret_cast<char*>(counts.data()),
            std::streamsize(counts.size() * sizeof(uint32_t)));
    if (!in) throw ParseError(path + ": truncated counts payload");
    *width = int(wh[0]);
    *height = int(wh[1]);
    return counts;
}

}  // namespace gaurast
