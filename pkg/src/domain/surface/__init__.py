# -*- coding: utf-8 -*-
"""
곡면 도메인 - 메쉬, 생성기, 경로, 펼치기, 직선 추적
"""
from src.domain.surface.generators import SurfaceGeneratorFactory, generate_surface
from src.domain.surface.mesh import IntrinsicMesh, build_mesh
from src.domain.surface.paths import (
    constant_path,
    make_path,
    midpoint_split,
    path_length,
    point_at,
    rebase_loop,
    resample_positions,
    sample_points,
    split_at,
    subpath,
)
from src.domain.surface.tracing import end_direction, trace_straight
from src.domain.surface.unfolding import path_strip, straighten, straighten_strip

__all__ = [
    # 메쉬
    "IntrinsicMesh",
    "build_mesh",
    # 생성기
    "SurfaceGeneratorFactory",
    "generate_surface",
    # 경로
    "constant_path",
    "make_path",
    "midpoint_split",
    "path_length",
    "point_at",
    "rebase_loop",
    "resample_positions",
    "sample_points",
    "split_at",
    "subpath",
    # 펼치기/추적
    "path_strip",
    "straighten",
    "straighten_strip",
    "trace_straight",
    "end_direction",
]
