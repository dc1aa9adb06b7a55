# -*- coding: utf-8 -*-
"""
핵심 모델
"""
from .geometry import (
    GeodesicPath,
    Homotopy,
    PathKind,
    ShortenMode,
    SurfacePoint,
    concatenate_all,
)
from .surface_spec import DEFAULT_RESOLUTION, KIND_ALIASES, SurfaceSpec

__all__ = [
    # 곡면 위 기하
    "SurfacePoint",
    "GeodesicPath",
    "Homotopy",
    "PathKind",
    "ShortenMode",
    "concatenate_all",
    # 곡면 사양
    "SurfaceSpec",
    "KIND_ALIASES",
    "DEFAULT_RESOLUTION",
]
