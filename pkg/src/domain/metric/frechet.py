# -*- coding: utf-8 -*-
"""
호 길이로 정렬한 경로 사이 거리 (측지선 구별 기준)
"""
import math
from typing import List, Optional, Sequence

import numpy as np

from src.core.models.geometry import GeodesicPath, Homotopy
from src.domain.metric.distance import point_distance
from src.domain.surface.mesh import IntrinsicMesh
from src.domain.surface.paths import sample_points

# 비교 표본 개수 범위
MIN_SAMPLES = 16
MAX_SAMPLES = 256


def sample_count(mesh: IntrinsicMesh, *paths: GeodesicPath) -> int:
    """가장 긴 경로를 h 간격 이하로 나누는 표본 수"""
    longest = max((p.length for p in paths), default=0.0)
    wanted = int(math.ceil(longest / mesh.max_edge_length)) + 1
    return int(min(max(wanted, MIN_SAMPLES), MAX_SAMPLES))


def _pointwise(mesh: IntrinsicMesh, a: GeodesicPath, b: GeodesicPath, count: int) -> np.ndarray:
    """같은 호 길이 비율의 점 쌍 거리 (행: a 의 순환 이동량)"""
    pa = sample_points(mesh, a, count)
    pb = sample_points(mesh, b, count)
    xa = mesh.positions_of(pa)
    xb = mesh.positions_of(pb)
    if xa is not None and xb is not None:
        return mesh.ambient_distances(xa, xb)
    # 위치 정보가 없는 메쉬는 내재 거리로 비교
    return np.array([point_distance(mesh, p, q) for p, q in zip(pa, pb)])


def frechet_distance(
    mesh: IntrinsicMesh,
    a: GeodesicPath,
    b: GeodesicPath,
    samples: Optional[int] = None,
    cyclic: bool = False,
) -> float:
    """
    호 길이 정렬 후 대응점 거리의 최댓값

    Args:
        mesh: 메쉬
        a: 경로
        b: 경로
        samples: 표본 수 (없으면 길이 기준)
        cyclic: 닫힌 경로의 기준점 이동과 방향 반전까지 허용하면 True

    Returns:
        거리 상한 (임베딩 또는 토러스 uv 기준)
    """
    count = samples or sample_count(mesh, a, b)
    if not cyclic:
        return float(_pointwise(mesh, a, b, count).max())

    pa = sample_points(mesh, a, count)[:-1]
    pb = sample_points(mesh, b, count)[:-1]
    xa = mesh.positions_of(pa)
    xb = mesh.positions_of(pb)
    if xa is None or xb is None:
        return frechet_distance(mesh, a, b, count, cyclic=False)
    best = math.inf
    for candidate in (xb, xb[::-1]):
        for shift in range(len(candidate)):
            rolled = np.roll(candidate, shift, axis=0)
            best = min(best, float(mesh.ambient_distances(xa, rolled).max()))
    return best


def homotopy_gaps(mesh: IntrinsicMesh, homotopy: Homotopy, samples: Optional[int] = None) -> List[float]:
    """연속한 프레임 사이의 정렬 거리"""
    return homotopy.gaps(lambda a, b: frechet_distance(mesh, a, b, samples))


def path_order_key(path: GeodesicPath) -> tuple:
    """길이 순, 같으면 처음 갈라지는 점의 사전순"""
    return (round(path.length, 12), [p.key() for p in path.points])


def same_path(
    mesh: IntrinsicMesh,
    a: GeodesicPath,
    b: GeodesicPath,
    radius: float,
    cyclic: bool = False,
) -> bool:
    """
    두 경로가 정렬 거리 radius 이내인지

    기준점을 공유하는 두 루프는 한쪽을 거꾸로 돌려도 같은 루프로 본다.
    """
    if frechet_distance(mesh, a, b, cyclic=cyclic) <= radius:
        return True
    if cyclic or not (a.is_loop and b.is_loop):
        return False
    return frechet_distance(mesh, a, b.reverse()) <= radius


def dedupe_paths(
    mesh: IntrinsicMesh,
    paths: Sequence[GeodesicPath],
    radius: float,
    cyclic: bool = False,
) -> List[GeodesicPath]:
    """
    정렬 거리 radius 이하인 경로들을 하나로 묶기

    짧은 경로부터 대표로 삼으므로 각 묶음의 대표는 가장 짧은 경로다.

    Args:
        mesh: 메쉬
        paths: 같은 끝점을 공유하는 경로들
        radius: 같은 경로로 보는 거리
        cyclic: 자유 루프 비교 여부

    Returns:
        길이 순 대표 목록
    """
    kept: List[GeodesicPath] = []
    for path in sorted(paths, key=path_order_key):
        if not any(same_path(mesh, path, other, radius, cyclic) for other in kept):
            kept.append(path)
    return kept
