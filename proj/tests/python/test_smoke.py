"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import gaurast


def test_version():
    assert gaurast.__version__ == "1.0.0"


def test_speedup_table_embedded():
    report = gaurast.speedup_table()
    assert len(report["rows"]) == 7
    assert round(report["arithmetic_mean"], 1) == 23.4
    scenes = [row[0] for row in report["rows"]]
    assert scenes[0] == "Bicycle" and scenes[-1] == "Bonsai"


def test_speedup_table_custom():
    report = gaurast.speedup_table([("toy", 100.0, 4.0)])
    assert report["rows"][0][3] == pytest.approx(25.0)


def test_fps_and_makespan():
    assert gaurast.steady_state_fps(0.010, 0.025) == pytest.approx(40.0)
    assert gaurast.makespan(0.010, 0.025, 100) == pytest.approx(2.510)
    with pytest.raises(ValueError):
        gaurast.steady_state_fps(0.0, 0.0)


def test_render_and_simulate(tmp_path):
    # Two constant-color splats straddling the image center.
    import struct

    n = 2
    header = (
        "ply\nformat binary_little_endian 1.0\n"
        f"element vertex {n}\n"
        + "".join(
            f"property float {p}\n"
            for p in ["x", "y", "z", "f_dc_0", "f_dc_1", "f_dc_2"]
            + [f"f_rest_{i}" for i in range(45)]
            + ["opacity", "scale_0", "scale_1", "scale_2", "rot_0", "rot_1", "rot_2", "rot_3"]
        )
        + "end_header\n"
    )
    scene = tmp_path / "scene.ply"
    with open(scene, "wb") as f:
        f.write(header.encode())
        for gx in (-0.3, 0.3):
            row = [gx, 0.0, 4.0, 1.0, 0.5, 0.25] + [0.0] * 45
            row += [2.0]  # opacity logit -> ~0.88
            row += [math.log(0.05)] * 3  # scale
            row += [1.0, 0.0, 0.0, 0.0]  # identity rotation
            f.write(struct.pack("<59f", *row))

    camera = tmp_path / "cam.json"
    camera.write_text(
        '{"width": 64, "height": 48, "fx": 60, "fy": 60, "cx": 32, "cy": 24,'
        ' "near": 0.1, "far": 100,'
        ' "world_to_camera": [1,0,0,0, 0,1,0,0, 0,0,1,0, 0,0,0,1]}'
    )

    out = gaurast.render_gaussian_scene(str(scene), str(camera))
    img = np.asarray(out.image)
    counts = np.asarray(out.effective_counts)
    assert img.shape == (48, 64, 3)
    assert counts.shape == (48, 64)
    assert img.min() >= 0.0 and np.isfinite(img).all()
    assert counts.sum() > 0  # the splats actually hit pixels
    assert img.max() > 0.0

    cfg = gaurast.RasterizerConfig()
    stats = gaurast.simulate_scene(str(scene), str(camera), cfg, "dense")
    assert stats["total_cycles"] > 0
    assert stats["tiles_processed"] > 0
    assert stats["energy_joules"] > 0.0

    measured = gaurast.simulate_scene(str(scene), str(camera), cfg, "measured")
    assert measured["total_cycles"] <= stats["total_cycles"]
