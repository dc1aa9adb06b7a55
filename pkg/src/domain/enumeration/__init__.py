# -*- coding: utf-8 -*-
"""
열거 도메인 - 측지선 k 개 열거, 두 번째 측지선, 루프 기저 파이프라인, 오라클, 상한 검증
"""
from src.domain.enumeration.analytic import (
    analytic_geodesics,
    analytic_geodesics_for,
    sphere_lengths,
    torus_lengths,
)
from src.domain.enumeration.pipelines import (
    dedupe,
    enumerate_geodesics,
    homotopy_index,
    pi1_pipeline,
    second_geodesic,
    short_generators,
    surface_id,
)
from src.domain.enumeration.report import SCHEMA_VERSION, BoundCheck, EnumerationReport, Route
from src.domain.enumeration.verify import BOUND_NAMES, VerdictTable, verify_bounds
from src.domain.metric.frechet import frechet_distance

__all__ = [
    # 보고서
    "SCHEMA_VERSION",
    "BoundCheck",
    "EnumerationReport",
    "Route",
    # 파이프라인
    "dedupe",
    "enumerate_geodesics",
    "homotopy_index",
    "pi1_pipeline",
    "second_geodesic",
    "short_generators",
    "surface_id",
    # 오라클
    "analytic_geodesics",
    "analytic_geodesics_for",
    "sphere_lengths",
    "torus_lengths",
    # 검증
    "BOUND_NAMES",
    "VerdictTable",
    "verify_bounds",
    "frechet_distance",
]
