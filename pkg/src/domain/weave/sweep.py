# -*- coding: utf-8 -*-
"""
Sweep-out (자오선 가족), 사상 차수, min-max 추출
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.core.exceptions import DegreeAmbiguous, ExtractionIncomplete
from src.core.models.geometry import GeodesicPath, PathKind, ShortenMode, SurfacePoint
from src.domain.metric.distance import diameter, farthest_point, shortest_path
from src.domain.metric.frechet import dedupe_paths, frechet_distance
from src.domain.shorten.birkhoff import shorten_to_critical
from src.domain.shorten.certify import is_geodesic, tighten
from src.domain.surface.mesh import IntrinsicMesh
from src.domain.surface.paths import constant_path, resample_positions
from src.domain.surface.tracing import trace_straight
from src.domain.weave.digon import cone_at, departure_direction
from src.infrastructure.config.settings import GeodesicSettings, get_settings

logger = logging.getLogger(__name__)

# tail 방향 자오선 쌍 후보의 Birkhoff 단계 하한
MIN_BIRKHOFF_STEPS = 8


@dataclass
class SweepOut:
    """
    x 에서 z 로 가는 자오선 가족

    마지막 자오선은 첫 자오선과 같아 구면을 닫는다. L 은 자오선 길이의 최댓값이다.
    """
    meridians: List[GeodesicPath]
    x: SurfacePoint
    z: SurfacePoint
    degree: Optional[int] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.meridians) < 2:
            raise ValueError("sweep-out needs at least two meridians")

    @property
    def L(self) -> float:
        return max(m.length for m in self.meridians)

    @property
    def member_count(self) -> int:
        return len(self.meridians)

    @property
    def family(self) -> List[GeodesicPath]:
        """닫는 자오선을 뺀 서로 다른 자오선들"""
        if self.meridians[-1] is self.meridians[0]:
            return self.meridians[:-1]
        return list(self.meridians)

    def gaps(self, mesh: IntrinsicMesh) -> List[float]:
        """이웃 자오선 사이 정렬 거리"""
        return [
            frechet_distance(mesh, a, b) for a, b in zip(self.meridians[:-1], self.meridians[1:])
        ]

    def check(self, mesh: IntrinsicMesh, settings: Optional[GeodesicSettings] = None) -> Dict[str, Any]:
        """끝점 공유, 닫힘, 이웃 간격 점검"""
        tolerances = (settings or get_settings()).resolve(mesh)
        radius = 2.0 * tolerances.h
        shared = all(
            frechet_distance(mesh, constant_path(m.start), constant_path(self.x)) <= radius
            and frechet_distance(mesh, constant_path(m.end), constant_path(self.z)) <= radius
            for m in self.meridians
        )
        gaps = self.gaps(mesh)
        closing = frechet_distance(mesh, self.meridians[0], self.meridians[-1])
        return {
            "shared_endpoints": bool(shared),
            "closed": bool(closing <= tolerances.spacing),
            "max_gap": max(gaps) if gaps else 0.0,
            "gaps_within_spacing": bool(all(g <= tolerances.spacing for g in gaps)),
        }

    def to_dict(self) -> Dict[str, Any]:
        return {
            "x": self.x.to_dict(),
            "z": self.z.to_dict(),
            "L": self.L,
            "degree": self.degree,
            "members": self.member_count,
            "metadata": dict(self.metadata),
            "meridians": [m.to_dict() for m in self.meridians],
        }


def trace_from(mesh: IntrinsicMesh, x: SurfacePoint, theta: float, length: float) -> GeodesicPath:
    """
    departure_direction 과 같은 기준의 출발 각도 theta 로 곧게 추적

    꼭짓점 출발은 one-ring 첫 코너의 첫 변에서 잰 누적 각도, 그 밖에서는 x.face 배치 각도다.
    """
    vertex = mesh.point_vertex(x)
    if vertex is None:
        return trace_straight(mesh, x, theta, length)
    start = mesh.vertex_point(vertex)
    coords = mesh.face_coords[start.face]
    corner = start.corner
    edge = coords[(corner + 1) % 3] - coords[corner]
    ray = trace_straight(mesh, start, math.atan2(edge[1], edge[0]) + theta, length)
    ray.points[0] = x
    return ray


def _meridian(
    mesh: IntrinsicMesh,
    x: SurfacePoint,
    z: SurfacePoint,
    theta: float,
    reach: float,
    settings: GeodesicSettings,
) -> GeodesicPath:
    """출발 각도 theta 로 reach 만큼 곧게 뻗고 z 까지 최단 경로로 닫은 자오선"""
    ray = trace_from(mesh, x, theta, reach)
    if mesh.same_location(ray.end, z):
        meridian = ray
    else:
        meridian = ray.concatenate(shortest_path(mesh, ray.end, z, settings=settings))
    meridian.metadata["theta"] = theta
    return meridian


def standard_sweep(
    mesh: IntrinsicMesh,
    x: SurfacePoint,
    z: Optional[SurfacePoint] = None,
    members: Optional[int] = None,
    reverse: bool = False,
    settings: Optional[GeodesicSettings] = None,
) -> SweepOut:
    """
    x 에서 곧게 뻗은 자오선 부채꼴을 z 에서 닫은 표준 가족

    Args:
        mesh: 메쉬
        x: 출발 극
        z: 도착 극 (없으면 x 에서 가장 먼 꼭짓점)
        members: 서로 다른 자오선 수 (없으면 설정값)
        reverse: True 이면 방향을 시계 방향으로 (차수 -1)
        settings: 설정

    Returns:
        SweepOut (members + 1 개 자오선, 마지막은 첫 자오선)
    """
    settings = settings or get_settings()
    members = members or settings.weave.sweep_members
    vertex = mesh.point_vertex(x)
    if vertex is not None:
        x = mesh.vertex_point(vertex)
    z = z or farthest_point(mesh, x, settings=settings)
    reach = shortest_path(mesh, x, z, settings=settings).length
    cone = cone_at(mesh, x)

    meridians: List[GeodesicPath] = []
    for j in range(members):
        theta = cone * j / members
        if reverse:
            theta = (cone - theta) % cone
        meridians.append(_meridian(mesh, x, z, theta, reach, settings))
    meridians.append(meridians[0])
    sweep = SweepOut(
        meridians=meridians, x=x, z=z,
        metadata={"kind": "standard", "reverse": reverse, "reach": reach},
    )
    logger.debug(f"standard sweep: {members} meridians, L={sweep.L:.4g}")
    return sweep


def _grid(mesh: IntrinsicMesh, sweep: SweepOut, tolerances) -> np.ndarray:
    """(자오선, 호 길이 표본, 3) 위치 격자"""
    count = int(min(max(math.ceil(sweep.L / tolerances.h) + 1, 16), 256))
    rows = []
    for meridian in sweep.meridians:
        rows.append(resample_positions(mesh, meridian, count))
    return np.stack(rows)


def _triangles(grid: np.ndarray) -> np.ndarray:
    """매개변수 격자를 (T, 3, dim) 삼각형으로 (방향: 호 길이 × 가족 매개변수)"""
    p00 = grid[:-1, :-1]
    p01 = grid[:-1, 1:]
    p10 = grid[1:, :-1]
    p11 = grid[1:, 1:]
    first = np.stack([p00, p01, p10], axis=2).reshape(-1, 3, grid.shape[-1])
    second = np.stack([p10, p01, p11], axis=2).reshape(-1, 3, grid.shape[-1])
    return np.concatenate([first, second])


def _signed_preimages(triangles: np.ndarray, q: np.ndarray, normal: np.ndarray, radius: float) -> int:
    """q 를 덮는 상 삼각형의 방향 부호 합"""
    near = np.all(np.linalg.norm(triangles - q, axis=2) <= radius, axis=1)
    local = triangles[near] - q
    if local.size == 0:
        return 0
    e1 = np.cross(normal, [1.0, 0.0, 0.0])
    if np.linalg.norm(e1) < 1e-6:
        e1 = np.cross(normal, [0.0, 1.0, 0.0])
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(normal, e1)
    a = np.stack([local @ e1, local @ e2], axis=-1)

    def cross2(u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]

    orientation = cross2(a[:, 1] - a[:, 0], a[:, 2] - a[:, 0])
    w0 = cross2(a[:, 1], a[:, 2])
    w1 = cross2(a[:, 2], a[:, 0])
    w2 = cross2(a[:, 0], a[:, 1])
    sign = np.sign(orientation)
    inside = (np.abs(orientation) > 1e-14) & (w0 * sign > 0) & (w1 * sign > 0) & (w2 * sign > 0)
    return int(sign[inside].sum())


def sweep_out_degree(
    mesh: IntrinsicMesh,
    sweep: SweepOut,
    samples: Optional[int] = None,
    settings: Optional[GeodesicSettings] = None,
) -> int:
    """
    자오선 가족이 만드는 구면 → 곡면 사상의 차수

    표본 면 중심마다 그 점을 덮는 상 삼각형의 방향 부호를 더하고, 모든 표본이
    같은 값이어야 한다.

    Args:
        mesh: 임베딩이 있는 메쉬
        sweep: 자오선 가족
        samples: 표본 면 수 (없으면 설정값, 최소 20)
        settings: 설정

    Returns:
        차수 (sweep.degree 에도 기록)

    Raises:
        DegreeAmbiguous: 표본들의 값이 다르거나 위치 정보가 없음
    """
    settings = settings or get_settings()
    tolerances = settings.resolve(mesh)
    samples = max(samples or settings.weave.degree_samples, 20)
    if mesh.embedding is None:
        raise DegreeAmbiguous("Degree counting needs an embedded mesh", partial=None)
    grid = _grid(mesh, sweep, tolerances)
    triangles = _triangles(grid)
    steps = np.concatenate(
        [
            np.linalg.norm(np.diff(grid, axis=0), axis=-1).ravel(),
            np.linalg.norm(np.diff(grid, axis=1), axis=-1).ravel(),
        ]
    )
    radius = 2.0 * float(steps.max()) + tolerances.h

    embedding = mesh.embedding
    poles = np.array([mesh.position_of(sweep.x), mesh.position_of(sweep.z)])
    centroids = embedding[mesh.faces].mean(axis=1)
    away = mesh.ambient_distances(centroids[:, None, :], poles[None, :, :]).min(axis=1) > radius
    candidates = np.flatnonzero(away)
    if candidates.size == 0:
        candidates = np.arange(mesh.face_count)
    chosen = candidates[np.linspace(0, candidates.size - 1, min(samples, candidates.size)).astype(int)]

    counts: Dict[int, int] = {}
    for face in chosen.tolist():
        p0, p1, p2 = embedding[mesh.faces[face]]
        normal = np.cross(p1 - p0, p2 - p0)
        normal /= np.linalg.norm(normal)
        counts[face] = _signed_preimages(triangles, centroids[face], normal, radius)
    values = set(counts.values())
    if len(values) != 1:
        logger.warning(f"degree samples disagree: {sorted(values)}")
        raise DegreeAmbiguous(
            f"Degree samples disagree: {sorted(values)}", partial=counts, values=sorted(values)
        )
    degree = values.pop()
    sweep.degree = degree
    logger.debug(f"sweep-out degree {degree} over {len(counts)} samples")
    return degree


@dataclass
class ExtractionResult:
    """minmax_extract 결과"""
    geodesics: List[GeodesicPath]
    k: int
    bound: float
    flagged: bool = False
    flag: Optional[str] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def lengths(self) -> List[float]:
        return [g.length for g in self.geodesics]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "bound": self.bound,
            "flagged": self.flagged,
            "flag": self.flag,
            "lengths": self.lengths,
            "geodesics": [g.to_dict() for g in self.geodesics],
        }


def _power(loop: GeodesicPath, r: int, tail: GeodesicPath, kind: PathKind) -> GeodesicPath:
    """loop^r * tail"""
    result = tail
    for _ in range(r):
        result = loop.concatenate(result)
    result.kind = kind
    return result


def _loop_pairs(
    mesh: IntrinsicMesh,
    sweep: SweepOut,
    tail: GeodesicPath,
    settings: GeodesicSettings,
) -> List[Tuple[str, GeodesicPath, GeodesicPath]]:
    """
    (출처, γ_j, γ_{j+half}) 자오선 쌍 목록

    가족의 모든 매개변수 j 를 쓰고, tail 이 있으면 tail 출발 방향과 그 반대 방향으로
    새로 추적한 자오선 쌍 두 개를 더한다 (루프가 tail 과 곧게 이어지는 쪽과 되돌아가는 쪽).
    """
    family = sweep.family
    half = len(family) // 2
    pairs = [("family", family[j], family[(j + half) % len(family)]) for j in range(len(family))]
    if tail.is_constant:
        return pairs
    reach = sweep.metadata.get("reach") or shortest_path(mesh, sweep.x, sweep.z, settings=settings).length
    # tail.start 면 배치 기준 각도이므로 같은 점 표현으로 추적
    x = tail.start
    theta = departure_direction(mesh, tail)
    cone = cone_at(mesh, x)
    ahead = _meridian(mesh, x, sweep.z, theta, reach, settings)
    behind = _meridian(mesh, x, sweep.z, theta + cone / 2.0, reach, settings)
    pairs.append(("aligned", ahead, behind))
    pairs.append(("aligned", behind, ahead))
    return pairs


def _settle(
    mesh: IntrinsicMesh,
    candidate: GeodesicPath,
    mode: ShortenMode,
    strict_tol: float,
    steps: Optional[int],
    settings: GeodesicSettings,
) -> GeodesicPath:
    """
    후보를 면 띠 안에서 곧게 펴기

    steps 가 있고 곧게 편 결과가 strict_tol 을 넘게 꺾이면 Birkhoff 단계를 steps 번까지만
    돌린 뒤 다시 편다. 단계 수를 제한해 안장 근처의 후보가 최솟값으로 미끄러지지 않게 한다.
    """
    path, certificate = tighten(mesh, candidate, theta_tol=strict_tol, settings=settings)
    if certificate or steps is None:
        return path
    result = shorten_to_critical(mesh, candidate, mode=mode, max_iter=steps, settings=settings)
    if result.path.is_constant:
        return result.path
    settled, _ = tighten(mesh, result.path, theta_tol=strict_tol, settings=settings)
    settled.kind = candidate.kind
    return settled


def minmax_extract(
    mesh: IntrinsicMesh,
    sweep: SweepOut,
    k: int,
    y: Optional[SurfacePoint] = None,
    d: Optional[float] = None,
    settings: Optional[GeodesicSettings] = None,
    strict: bool = False,
) -> ExtractionResult:
    """
    자오선 쌍 루프 r 번 (r < k) 과 x → y 최소 꼬리를 이은 후보들을 가족 매개변수를 따라
    줄여 서로 다른 측지선 k 개 이상 찾기

    가족의 모든 j 에 대해 (γ_j · γ_{j+half}⁻¹)^r · tail 을 만들고 tail 방향에 맞춘 자오선 쌍도
    더한다. 후보는 면 띠 안에서 곧게 펴고 (맞춘 쌍은 제한된 Birkhoff 단계 포함) 꺾임
    인증을 거친 뒤 중복을 제거한다. 좁은 꺾임 허용치 (minmax_angle_factor·h) 를 통과한 것을
    먼저 쓰고, 모자라면 일반 허용치 θ_tol 을 통과한 것으로 채운다.

    Args:
        mesh: 메쉬
        sweep: 차수가 0 이 아닌 가족 (극 x 에서 출발)
        k: 필요한 개수
        y: 도착점 (없으면 x, 기준 루프 모드)
        d: 지름 (없으면 계산)
        settings: 설정
        strict: True 이면 부족할 때 예외

    Returns:
        ExtractionResult (길이 ≤ 2(k-1)L + d, x = y 이면 ≤ 2(k-1)L)

    Raises:
        ValueError: k < 1
        ExtractionIncomplete: strict 이고 k 개 미만
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    settings = settings or get_settings()
    tolerances = settings.resolve(mesh)
    x = sweep.x
    y = y or x
    same = mesh.same_location(x, y)
    kind = PathKind.LOOP if same else PathKind.OPEN
    mode = ShortenMode.BASED_LOOP if same else ShortenMode.FIXED_ENDPOINTS
    if d is None:
        d = diameter(mesh, settings=settings)[0]
    bound = 2.0 * (k - 1) * sweep.L + (0.0 if same else d)
    limit = bound + tolerances.slack
    strict_tol = min(tolerances.theta_tol, settings.weave.minmax_angle_factor * tolerances.h)

    tail = constant_path(x, kind) if same else shortest_path(mesh, x, y, settings=settings)
    pairs = _loop_pairs(mesh, sweep, tail, settings)
    primary: List[GeodesicPath] = []
    fallback: List[GeodesicPath] = []
    levels: Dict[int, float] = {}
    tried = 0
    for source, first, second in pairs:
        loop = first.concatenate(second.reverse(), kind=PathKind.LOOP)
        for r in range(1, k):
            candidate = _power(loop, r, tail, kind)
            tried += 1
            steps = None
            if source == "aligned":
                steps = settings.weave.minmax_birkhoff_steps or max(
                    int(math.ceil(candidate.length / tolerances.spacing)), MIN_BIRKHOFF_STEPS
                )
            path = _settle(mesh, candidate, mode, strict_tol, steps, settings)
            if source == "family":
                levels[r] = max(levels.get(r, 0.0), path.length)
            if path.is_constant or path.length > limit:
                continue
            if is_geodesic(mesh, path, theta_tol=strict_tol):
                primary.append(path)
            elif is_geodesic(mesh, path, theta_tol=tolerances.theta_tol):
                fallback.append(path)

    distinct = dedupe_paths(mesh, [tail] + primary, tolerances.dedupe_radius)
    if len(distinct) < k and fallback:
        logger.debug(f"min-max: {len(distinct)} tight results, adding {len(fallback)} looser ones")
        distinct = dedupe_paths(mesh, [tail] + primary + fallback, tolerances.dedupe_radius)
    extraction = ExtractionResult(
        geodesics=distinct, k=k, bound=bound,
        metadata={
            "candidates": tried, "L": sweep.L, "d": d, "levels": levels,
            "tight": len(primary), "loose": len(fallback),
        },
    )
    logger.info(f"min-max extraction: {len(distinct)} distinct from {tried} candidates")
    if len(distinct) < k:
        extraction.flagged = True
        extraction.flag = "ExtractionIncomplete"
        logger.warning(f"min-max extraction found {len(distinct)} < {k} geodesics")
        if strict:
            raise ExtractionIncomplete(
                f"Found {len(distinct)} of {k} geodesics", partial=extraction
            )
    return extraction
