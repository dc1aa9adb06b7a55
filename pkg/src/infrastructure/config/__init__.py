# -*- coding: utf-8 -*-
"""
설정과 로깅
"""
from src.infrastructure.config.settings import (
    CONFIG_ENV_VAR,
    CutLocusSettings,
    EnumerateSettings,
    GeodesicSettings,
    MetricSettings,
    PerformanceSettings,
    ShortenSettings,
    SurfaceSettings,
    Tolerances,
    WeaveSettings,
    get_settings,
    load_config,
    load_settings,
    set_settings,
)

__all__ = [
    "CONFIG_ENV_VAR",
    "CutLocusSettings",
    "EnumerateSettings",
    "GeodesicSettings",
    "MetricSettings",
    "PerformanceSettings",
    "ShortenSettings",
    "SurfaceSettings",
    "Tolerances",
    "WeaveSettings",
    "get_settings",
    "load_config",
    "load_settings",
    "set_settings",
]
