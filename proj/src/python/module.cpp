#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gaurast/arch_sim.hpp"
#include "gaurast/pipeline_sched.hpp"
#include "gaurast/preprocess.hpp"
#include "gaurast/raster_ref.hpp"
#include "gaurast/report.hpp"
#include "gaurast/scene_io.hpp"
#include "gaurast/sorter.hpp"

namespace py = pybind11;
using namespace gaurast;

namespace {

py::array_t<float> image_array(const Framebuffer& fb) {
    py::array_t<float> out({fb.height, fb.width, 3});
    auto r = out.mutable_unchecked<3>();
    for (int y = 0; y < fb.height; ++y)
        for (int x = 0; x < fb.width; ++x) {
            const Vec3f& c = fb.color[fb.idx(x, y)];
            r(y, x, 0) = c.x;
            r(y, x, 1) = c.y;
            r(y, x, 2) = c.z;
        }
    return out;
}

struct RenderOutput {
    py::array_t<float> image;
    py::array_t<uint32_t> effective_counts;
};

RenderOutput render_gaussian_scene(const std::string& scene_path, const std::string& camera_path,
                                   int tile_size, int sh_degree) {
    auto gaussians = load_gaussian_ply(scene_path);
    Camera cam = load_camera_json(camera_path);
    auto splats = preprocess_scene(gaussians, cam, tile_size, sh_degree);
    int tiles_x = (cam.width + tile_size - 1) / tile_size;
    auto sorted = sort_and_range(build_keys(splats, tiles_x));
    Framebuffer fb = render_gaussians_reference(splats, sorted, cam, tile_size);

    RenderOutput out;
    out.image = image_array(fb);
    out.effective_counts = py::array_t<uint32_t>({fb.height, fb.width});
    auto c = out.effective_counts.mutable_unchecked<2>();
    for (int y = 0; y < fb.height; ++y)
        for (int x = 0; x < fb.width; ++x) c(y, x) = fb.effective_count[fb.idx(x, y)];
    return out;
}

py::dict stats_dict(const SimStats& stats) {
    py::dict d;
    d["total_cycles"] = stats.total_cycles;
    d["runtime_seconds"] = stats.runtime_seconds;
    d["energy_joules"] = stats.energy_joules;
    d["pe_utilization"] = stats.pe_utilization;
    d["tiles_processed"] = stats.tiles_processed;
    d["module_busy_cycles"] = stats.module_busy_cycles;
    return d;
}

py::dict simulate_scene(const std::string& scene_path, const std::string& camera_path,
                        const RasterizerConfig& cfg, const std::string& sim_mode, int sh_degree) {
    auto gaussians = load_gaussian_ply(scene_path);
    Camera cam = load_camera_json(camera_path);
    auto splats = preprocess_scene(gaussians, cam, cfg.tile_size, sh_degree);
    int tiles_x = (cam.width + cfg.tile_size - 1) / cfg.tile_size;
    auto sorted = sort_and_range(build_keys(splats, tiles_x));

    SimMode mode = sim_mode == "measured" ? SimMode::Measured : SimMode::Dense;
    std::vector<uint32_t> counts;
    if (mode == SimMode::Measured)
        counts = render_gaussians_reference(splats, sorted, cam, cfg.tile_size).effective_count;
    auto workloads = build_workloads(sorted, cam.width, cam.height, cfg.tile_size,
                                     mode == SimMode::Measured ? &counts : nullptr);
    return stats_dict(simulate_render(workloads, cfg, mode));
}

}  // namespace

PYBIND11_MODULE(_gaurast, m) {
    m.doc() = "Dual-mode splat/triangle rasterizer reference and cycle model";

    py::class_<RasterizerConfig>(m, "RasterizerConfig")
        .def(py::init<>())
        .def_readwrite("pes_per_module", &RasterizerConfig::pes_per_module)
        .def_readwrite("num_modules", &RasterizerConfig::num_modules)
        .def_readwrite("clock_hz", &RasterizerConfig::clock_hz)
        .def_readwrite("pipeline_latency_cycles", &RasterizerConfig::pipeline_latency_cycles)
        .def_readwrite("buffer_load_rate", &RasterizerConfig::buffer_load_rate)
        .def_readwrite("module_power_watts", &RasterizerConfig::module_power_watts)
        .def_readwrite("idle_power_fraction", &RasterizerConfig::idle_power_fraction)
        .def_readwrite("tile_size", &RasterizerConfig::tile_size);

    py::class_<RenderOutput>(m, "RenderOutput")
        .def_readonly("image", &RenderOutput::image)
        .def_readonly("effective_counts", &RenderOutput::effective_counts);

    m.def("render_gaussian_scene", &render_gaussian_scene, py::arg("scene_path"),
          py::arg("camera_path"), py::arg("tile_size") = 16, py::arg("sh_degree") = 3,
          "Render a splat scene with the scalar reference path; returns image and counts.");

    m.def("simulate_scene", &simulate_scene, py::arg("scene_path"), py::arg("camera_path"),
          py::arg("config") = RasterizerConfig{}, py::arg("sim_mode") = "dense",
          py::arg("sh_degree") = 3, "Run the cycle model on a splat scene.");

    m.def(
        "speedup_table",
        [](py::object records) {
            SpeedupReport rep;
            if (records.is_none()) {
                rep = speedup_table(reference_runtime_table());
            } else {
                std::vector<BaselineRecord> recs;
                for (auto item : records) {
                    auto t = item.cast<py::tuple>();
                    recs.push_back({t[0].cast<std::string>(), t[1].cast<double>(),
                                    t[2].cast<double>()});
                }
                rep = speedup_table(recs);
            }
            py::dict d;
            py::list rows;
            for (const auto& r : rep.rows)
                rows.append(py::make_tuple(r.scene, r.baseline_ms, r.gaurast_ms, r.speedup));
            d["rows"] = rows;
            d["arithmetic_mean"] = rep.arithmetic_mean;
            d["geometric_mean"] = rep.geometric_mean;
            return d;
        },
        py::arg("records") = py::none(),
        "Per-scene speedups plus means; defaults to the embedded reference table.");

    m.def(
        "steady_state_fps",
        [](double t12_seconds, double t3_seconds) {
            return steady_state_fps({t12_seconds, t3_seconds});
        },
        py::arg("t12_seconds"), py::arg("t3_seconds"));

    m.def(
        "makespan",
        [](double t12_seconds, double t3_seconds, uint64_t n_frames) {
            return makespan({t12_seconds, t3_seconds}, n_frames);
        },
        py::arg("t12_seconds"), py::arg("t3_seconds"), py::arg("n_frames"));

    m.attr("__version__") = "1.0.0";
}
