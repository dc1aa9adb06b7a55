# -*- coding: utf-8 -*-
"""
거리 도메인 - 거리장, 최단 경로, 지름, 가장 먼 점, 경로 사이 거리
"""
from src.domain.metric.distance import (
    DistanceField,
    clear_cache,
    configure_cache,
    diameter,
    distance_field,
    farthest_point,
    point_distance,
    shortest_path,
)
from src.domain.metric.frechet import dedupe_paths, frechet_distance, homotopy_gaps, same_path
from src.domain.metric.graph import SteinerGraph, build_steiner_graph

__all__ = [
    "DistanceField",
    "SteinerGraph",
    "build_steiner_graph",
    "clear_cache",
    "configure_cache",
    "diameter",
    "distance_field",
    "farthest_point",
    "dedupe_paths",
    "frechet_distance",
    "homotopy_gaps",
    "point_distance",
    "same_path",
    "shortest_path",
]
