# -*- coding: utf-8 -*-
"""
Digon 분해

x 에서 z 까지의 최소 측지선들을 x 에서의 출발 방향 순으로 늘어놓으면 이웃한 두
측지선이 digon 영역 하나를 둘러싼다. 면 분할은 측지선이 지나는 면을 경계로 두고
나머지 면을 쌍대 그래프 성분별로 칠한 뒤, 경계 면은 선분의 왼쪽/오른쪽으로 나눈다.
"""
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np

from src.core.exceptions import InvalidSurfacePoint, SingleGeodesic, UnsupportedTopology
from src.core.models.geometry import GeodesicPath, SurfacePoint
from src.domain.cutlocus.minimizing import digon_loop, minimizing_geodesics
from src.domain.surface.mesh import IntrinsicMesh
from src.domain.surface.topology import dual_graph
from src.domain.surface.unfolding import unfold_strip
from src.infrastructure.config.settings import GeodesicSettings, get_settings

logger = logging.getLogger(__name__)


def _cross(a: np.ndarray, b: np.ndarray) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


def departure_direction(mesh: IntrinsicMesh, path: GeodesicPath) -> float:
    """
    경로가 시작점을 떠나는 방향 각도

    꼭짓점에서는 one-ring 누적 각도 [0, Θ), 그 밖에서는 start.face 배치 기준 각도
    [0, 2π) 이다. 같은 시작점의 경로들은 이 값으로 반시계 순서를 비교할 수 있다.
    """
    start = path.start
    for j, face in enumerate(path.faces):
        target = path.points[j + 1]
        if mesh.same_location(start, target):
            continue
        vertex = mesh.point_vertex(start)
        if vertex is not None:
            return mesh.departure_angle(vertex, face, mesh.local_position(target, face))
        if face == start.face:
            delta = mesh.local_position(target, face) - mesh.local_position(start, face)
        else:
            strip = unfold_strip(mesh, [start.face, face])
            delta = strip.position(mesh, target, 1) - strip.position(mesh, start, 0)
        return math.atan2(delta[1], delta[0]) % (2.0 * math.pi)
    return 0.0


def cone_at(mesh: IntrinsicMesh, point: SurfacePoint) -> float:
    """점에서의 전체 각 (꼭짓점이면 원뿔각, 아니면 2π)"""
    vertex = mesh.point_vertex(point)
    return 2.0 * math.pi if vertex is None else float(mesh.cone_angles[vertex])


def angle_tolerance(mesh: IntrinsicMesh, settings: GeodesicSettings) -> float:
    """'π 이하' 판정 허용치: factor·h / r_min (r_min = 1/√K_max, 하한 θ_tol)"""
    tolerances = settings.resolve(mesh)
    inverse_radius = math.sqrt(max(mesh.max_curvature, 0.0))
    return max(settings.weave.angle_tol_factor * tolerances.h * inverse_radius, tolerances.theta_tol)


@dataclass
class Digon:
    """
    공통 끝점 (x, z) 를 가진 두 측지선이 둘러싼 영역

    angle_x 는 x 에서 side_a 에서 side_b 로 반시계로 잰 각, angle_z 는 z 에서 잰 각이다.
    """
    side_a: GeodesicPath
    side_b: GeodesicPath
    angle_x: float
    angle_z: float
    domain: FrozenSet[int]
    fat: bool = False
    index: int = 0

    def __post_init__(self):
        if self.angle_x < 0 or self.angle_z < 0:
            raise ValueError("digon angles must be non-negative")

    @property
    def x(self) -> SurfacePoint:
        return self.side_a.start

    @property
    def z(self) -> SurfacePoint:
        return self.side_a.end

    @property
    def length(self) -> float:
        """두 변 중 긴 쪽 길이 (contract_digon 의 l)"""
        return max(self.side_a.length, self.side_b.length)

    @property
    def boundary(self) -> GeodesicPath:
        """x 기준 경계 루프 side_a * side_b⁻¹"""
        return digon_loop(self.side_a, self.side_b)

    @property
    def is_degenerate(self) -> bool:
        return self.side_a is self.side_b

    def to_dict(self) -> Dict[str, Any]:
        return {
            "index": self.index,
            "angle_x": self.angle_x,
            "angle_z": self.angle_z,
            "fat": self.fat,
            "domain_faces": sorted(self.domain),
            "side_a": self.side_a.to_dict(),
            "side_b": self.side_b.to_dict(),
        }


@dataclass
class DigonDecomposition:
    """digon_decomposition 결과"""
    x: SurfacePoint
    z: SurfacePoint
    geodesics: List[GeodesicPath]
    digons: List[Digon]
    berger_flag: bool
    angle_tol: float
    flagged: bool = False
    flag: Optional[str] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def fat_digons(self) -> List[Digon]:
        return [d for d in self.digons if d.fat]

    def covers(self, face_count: int) -> bool:
        """면 집합들이 서로소이고 합이 전체인지"""
        seen: Set[int] = set()
        for digon in self.digons:
            if seen & digon.domain:
                return False
            seen |= digon.domain
        return len(seen) == face_count

    def to_dict(self) -> Dict[str, Any]:
        return {
            "x": self.x.to_dict(),
            "z": self.z.to_dict(),
            "berger_flag": self.berger_flag,
            "angle_tol": self.angle_tol,
            "flagged": self.flagged,
            "flag": self.flag,
            "digons": [d.to_dict() for d in self.digons],
        }


def _segments(mesh: IntrinsicMesh, path: GeodesicPath) -> Iterable[Tuple[int, np.ndarray, np.ndarray]]:
    for j, face in enumerate(path.faces):
        a, b = path.points[j], path.points[j + 1]
        if mesh.same_location(a, b):
            continue
        yield face, mesh.local_position(a, face), mesh.local_position(b, face)


def partition_faces(
    mesh: IntrinsicMesh,
    geodesics: Sequence[GeodesicPath],
    faces: Optional[Iterable[int]] = None,
) -> List[Set[int]]:
    """
    반시계 순서의 측지선들로 면 집합을 나누기

    i 번째 집합은 측지선 i 의 왼쪽, 측지선 i+1 의 오른쪽 영역이다.

    Args:
        mesh: 메쉬
        geodesics: 같은 두 끝점을 잇는 측지선들 (출발 방향 반시계 순)
        faces: 나눌 면 부분집합 (없으면 전체)

    Returns:
        측지선 개수만큼의 서로소 면 집합 (합은 faces 전체)
    """
    allowed = set(range(mesh.face_count)) if faces is None else {int(f) for f in faces}
    k = len(geodesics)
    if k <= 1:
        return [set(allowed)]

    records: Dict[int, List[Tuple[int, np.ndarray, np.ndarray]]] = {}
    for i, path in enumerate(geodesics):
        for face, pa, pb in _segments(mesh, path):
            if face in allowed:
                records.setdefault(face, []).append((i, pa, pb))

    def side_label(face: int, point: np.ndarray) -> int:
        i, pa, pb = records[face][0]
        return i if _cross(pb - pa, point - pa) >= 0.0 else (i - 1) % k

    coords = mesh.face_coords
    seeds: Dict[int, Counter] = {}
    for face, hits in records.items():
        if len({i for i, _, _ in hits}) > 1:
            continue
        for s in range(3):
            g = int(mesh.gluing[face, s, 0])
            if g in records or g not in allowed:
                continue
            mid = (coords[face, s] + coords[face, (s + 1) % 3]) / 2.0
            seeds.setdefault(g, Counter())[side_label(face, mid)] += 1

    labels: Dict[int, int] = {}
    free = dual_graph(mesh, allowed - set(records))
    for component in nx.connected_components(free):
        votes: Counter = Counter()
        for face in component:
            votes.update(seeds.get(face, Counter()))
        if votes:
            label = min(votes, key=lambda lab: (-votes[lab], lab))
        else:
            logger.debug(f"digon partition: component of {len(component)} faces has no seed")
            label = 0
        for face in component:
            labels[face] = label
    for face in records:
        labels[face] = side_label(face, coords[face].mean(axis=0))

    parts: List[Set[int]] = [set() for _ in range(k)]
    for face, label in labels.items():
        parts[label].add(face)
    return parts


def build_digons(
    mesh: IntrinsicMesh,
    geodesics: Sequence[GeodesicPath],
    angle_tol: float,
    faces: Optional[Iterable[int]] = None,
) -> List[Digon]:
    """
    공통 끝점 측지선들을 출발 방향 순으로 정렬해 이웃 쌍마다 Digon 만들기

    Args:
        mesh: 메쉬
        geodesics: x → z 측지선 (2개 이상이면 digon 이 개수만큼)
        angle_tol: fat 판정 허용치
        faces: 나눌 면 부분집합
    """
    x, z = geodesics[0].start, geodesics[0].end
    ordered = sorted(geodesics, key=lambda g: (departure_direction(mesh, g), g.length))
    theta = [departure_direction(mesh, g) for g in ordered]
    phi = [departure_direction(mesh, g.reverse()) for g in ordered]
    cone_x, cone_z = cone_at(mesh, x), cone_at(mesh, z)
    parts = partition_faces(mesh, ordered, faces)
    k = len(ordered)
    digons = []
    for i in range(k):
        j = (i + 1) % k
        if k == 1:
            angle_x, angle_z = cone_x, cone_z
        else:
            angle_x = (theta[j] - theta[i]) % cone_x
            angle_z = (phi[i] - phi[j]) % cone_z
        digons.append(
            Digon(
                side_a=ordered[i],
                side_b=ordered[j],
                angle_x=float(angle_x),
                angle_z=float(angle_z),
                domain=frozenset(parts[i]),
                fat=bool(angle_z > math.pi + angle_tol),
                index=i,
            )
        )
    return digons


def digon_decomposition(
    mesh: IntrinsicMesh,
    x: SurfacePoint,
    z: SurfacePoint,
    settings: Optional[GeodesicSettings] = None,
    strict: bool = False,
) -> DigonDecomposition:
    """
    x, z 사이 최소 측지선으로 구면을 digon 영역들로 나누기

    Args:
        mesh: 구면형 메쉬 (χ = 2)
        x: 한 끝점
        z: 다른 끝점 (보통 x 에서 가장 먼 점)
        settings: 설정
        strict: True 이면 측지선이 하나뿐일 때 예외

    Returns:
        DigonDecomposition (berger_flag: 모든 각이 π + 허용치 이하)

    Raises:
        UnsupportedTopology: χ ≠ 2
        InvalidSurfacePoint: x 와 z 가 같은 위치
        SingleGeodesic: strict 이고 최소 측지선이 하나뿐
    """
    settings = settings or get_settings()
    if not mesh.is_sphere:
        raise UnsupportedTopology(
            f"Digon decomposition needs a sphere, got chi={mesh.euler_characteristic}",
            euler_characteristic=mesh.euler_characteristic,
        )
    if mesh.same_location(x, z):
        raise InvalidSurfacePoint("Digon decomposition needs two distinct points")

    tol = angle_tolerance(mesh, settings)
    geodesics = minimizing_geodesics(mesh, x, z, settings=settings)
    digons = build_digons(mesh, geodesics, tol)
    berger = all(d.angle_x <= math.pi + tol and d.angle_z <= math.pi + tol for d in digons)
    result = DigonDecomposition(
        x=x, z=z, geodesics=[d.side_a for d in digons], digons=digons,
        berger_flag=berger, angle_tol=tol,
    )
    logger.info(
        f"Digon decomposition: {len(digons)} digons, {len(result.fat_digons)} fat, berger={berger}"
    )
    if len(geodesics) == 1:
        result.flagged = True
        result.flag = "SingleGeodesic"
        logger.warning("Only one minimizing geodesic found; single digon covers the sphere")
        if strict:
            raise SingleGeodesic("Only one minimizing geodesic between x and z", partial=result)
    return result
