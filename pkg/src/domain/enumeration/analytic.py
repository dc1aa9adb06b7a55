# -*- coding: utf-8 -*-
"""
닫힌 형태 측지선 길이 (오라클)

둥근 구면과 평평한 토러스에서는 두 점 사이 측지선 길이 목록을 식으로 구할 수 있다.
열거 결과는 이 목록과 비교해 검증한다.
"""
import heapq
import logging
import math
from typing import Iterator, List, Optional, Sequence

import numpy as np

from src.core.exceptions import InvalidSurfacePoint, UnsupportedKind
from src.core.models.geometry import SurfacePoint
from src.core.models.surface_spec import KIND_ALIASES
from src.domain.surface.mesh import IntrinsicMesh

logger = logging.getLogger(__name__)

ANALYTIC_KINDS = ("round_sphere", "flat_torus")


def _sphere_stream(start: float, step: float) -> Iterator[float]:
    value = start
    while True:
        yield value
        value += step


def sphere_lengths(k: int, theta: float, r: float = 1.0) -> List[float]:
    """
    각거리 θ 인 두 점을 잇는 대원 호 길이 (짧은 순 k 개)

    한 방향으로 rθ + 2πrj, 반대 방향으로 r(2π-θ) + 2πrj 이다.
    """
    if not 0.0 <= theta <= math.pi + 1e-12:
        raise ValueError(f"theta must lie in [0, pi], got {theta}")
    if r <= 0:
        raise ValueError(f"radius must be positive, got {r}")
    turn = 2.0 * math.pi * r
    merged = heapq.merge(_sphere_stream(r * theta, turn), _sphere_stream(r * (2.0 * math.pi - theta), turn))
    return [float(next(merged)) for _ in range(k)]


def torus_lengths(k: int, delta: Sequence[float], a: float = 1.0, b: float = 1.0) -> List[float]:
    """변위 Δ 에 격자 벡터를 더한 길이 (짧은 순 k 개)"""
    if a <= 0 or b <= 0:
        raise ValueError(f"torus periods must be positive, got ({a}, {b})")
    dx, dy = float(delta[0]), float(delta[1])
    reach = k + 2
    shifts = np.arange(-reach, reach + 1)
    i, j = np.meshgrid(shifts, shifts, indexing="ij")
    norms = np.hypot(dx + i.ravel() * a, dy + j.ravel() * b)
    return [float(v) for v in np.sort(norms)[:k]]


def analytic_geodesics(
    kind: str,
    k: int,
    theta: Optional[float] = None,
    delta: Optional[Sequence[float]] = None,
    r: float = 1.0,
    a: float = 1.0,
    b: float = 1.0,
) -> List[float]:
    """
    닫힌 형태 측지선 길이 목록

    Args:
        kind: round_sphere (또는 sphere) / flat_torus (또는 torus)
        k: 개수
        theta: 구면 위 각거리 (라디안)
        delta: 토러스 위 변위 (u, v)
        r: 구 반지름
        a: 토러스 u 주기
        b: 토러스 v 주기

    Returns:
        짧은 순 길이 k 개

    Raises:
        UnsupportedKind: 닫힌 형태가 없는 종류
        ValueError: 필요한 파라미터 누락
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    name = KIND_ALIASES.get(kind, kind)
    if name == "round_sphere":
        if theta is None:
            raise ValueError("round_sphere needs the angular separation theta")
        return sphere_lengths(k, theta, r)
    if name == "flat_torus":
        if delta is None:
            raise ValueError("flat_torus needs the displacement delta")
        return torus_lengths(k, delta, a, b)
    raise UnsupportedKind(f"No closed form for surface kind: {kind}", kind=kind)


def analytic_geodesics_for(mesh: IntrinsicMesh, x: SurfacePoint, y: SurfacePoint, k: int) -> List[float]:
    """
    생성기 메타데이터로 닫힌 형태를 골라 길이 목록 구하기

    Raises:
        UnsupportedKind: 메쉬 종류에 닫힌 형태가 없을 때
        InvalidSurfacePoint: 위치 좌표가 없을 때
    """
    if mesh.kind not in ANALYTIC_KINDS:
        raise UnsupportedKind(f"No closed form for surface kind: {mesh.kind}", kind=mesh.kind)
    px, py = mesh.position_of(x), mesh.position_of(y)
    if px is None or py is None:
        raise InvalidSurfacePoint("Mesh carries no positions for the analytic oracle")

    if mesh.kind == "round_sphere":
        r = float(mesh.params.get("r", 1.0))
        cosine = float(px @ py) / max(float(np.linalg.norm(px) * np.linalg.norm(py)), 1e-300)
        theta = math.acos(min(max(cosine, -1.0), 1.0))
        logger.debug(f"sphere oracle: theta={theta:.6g}, r={r}")
        return analytic_geodesics("round_sphere", k, theta=theta, r=r)

    a = float(mesh.params.get("a", 1.0))
    b = float(mesh.params.get("b", 1.0))
    period = np.array([a, b])
    delta = py - px
    delta = delta - period * np.round(delta / period)
    logger.debug(f"torus oracle: delta={tuple(delta)}, periods=({a}, {b})")
    return analytic_geodesics("flat_torus", k, delta=delta, a=a, b=b)
