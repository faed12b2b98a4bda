"""Dual-mode splat/triangle rasterizer reference and cycle model."""

from ._gaurast import (
    RasterizerConfig,
    RenderOutput,
    __version__,
    makespan,
    render_gaussian_scene,
    simulate_scene,
    speedup_table,
    steady_state_fps,
)

__all__ = [
    "RasterizerConfig",
    "RenderOutput",
    "__version__",
    "makespan",
    "render_gaussian_scene",
    "simulate_scene",
    "speedup_table",
    "steady_state_fps",
]
