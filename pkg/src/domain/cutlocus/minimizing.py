# -*- coding: utf-8 -*-
"""
최소 측지선 모음과 절단 궤적 위 미끄러뜨리기
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Set, Tuple

import networkx as nx

from src.core.exceptions import NotOnCutLocus
from src.core.models.geometry import GeodesicPath, Homotopy, PathKind, ShortenMode, SurfacePoint
from src.domain.cutlocus.graph import CutLocusGraph
from src.domain.metric.distance import shortest_path
from src.domain.metric.frechet import dedupe_paths, frechet_distance
from src.domain.shorten.certify import is_geodesic
from src.domain.surface.mesh import IntrinsicMesh
from src.domain.surface.paths import constant_path
from src.domain.surface.unfolding import straighten
from src.infrastructure.config.settings import GeodesicSettings, get_settings

logger = logging.getLogger(__name__)

# 경유 꼭짓점 최대 개수
MAX_WAYPOINTS = 32


def _waypoints(mesh: IntrinsicMesh, p: SurfacePoint, rings: int = 2) -> List[int]:
    """p 를 둘러싼 꼭짓점 고리 (rings 단계 이웃)"""
    seeds: Set[int] = set()
    for face in mesh.faces_containing(p):
        seeds.update(int(v) for v in mesh.faces[face])
    frontier = set(seeds)
    seen = set(seeds)
    for _ in range(rings - 1):
        nxt: Set[int] = set()
        for v in frontier:
            nxt.update(int(w) for w in mesh.edge_graph.neighbors(v))
        frontier = nxt - seen
        seen |= nxt
    ring = sorted(frontier or seen)
    if len(ring) > MAX_WAYPOINTS:
        stride = len(ring) / MAX_WAYPOINTS
        ring = [ring[int(i * stride)] for i in range(MAX_WAYPOINTS)]
    return ring


def _via(
    mesh: IntrinsicMesh, x: SurfacePoint, p: SurfacePoint, w: int, settings: GeodesicSettings
) -> Optional[GeodesicPath]:
    """x → w → p 를 이은 뒤 곧게 편 후보"""
    anchor = mesh.vertex_point(w)
    if mesh.same_location(anchor, x) or mesh.same_location(anchor, p):
        return None
    head = shortest_path(mesh, x, anchor, settings=settings)
    tail = shortest_path(mesh, p, anchor, settings=settings).reverse()
    if head.is_constant or tail.is_constant:
        return None
    joined = head.concatenate(tail, kind=PathKind.OPEN)
    return straighten(mesh, joined)


def minimizing_geodesics(
    mesh: IntrinsicMesh,
    x: SurfacePoint,
    p: SurfacePoint,
    eps: Optional[float] = None,
    settings: Optional[GeodesicSettings] = None,
) -> List[GeodesicPath]:
    """
    x 에서 p 까지 거의 최소인 서로 다른 측지선들

    p 주위 고리의 꼭짓점마다 x → w → p 경로를 곧게 펴 후보로 삼고, 측지선 인증을
    통과하며 길이가 (1 + eps)·dist 이하인 것만 남겨 정렬 거리로 묶는다.

    Args:
        mesh: 메쉬
        x: 출발점
        p: 도착점
        eps: 상대 허용치 (없으면 설정값, 해상도 하한 c·h/dist 적용)
        settings: 설정

    Returns:
        길이 순 측지선 목록 (최소 1개)
    """
    settings = settings or get_settings()
    tolerances = settings.resolve(mesh)
    if mesh.same_location(x, p):
        return [constant_path(x)]

    direct = shortest_path(mesh, x, p, settings=settings)
    candidates = [direct]
    for w in _waypoints(mesh, p):
        path = _via(mesh, x, p, w, settings)
        if path is not None:
            candidates.append(path)

    dist = min(c.length for c in candidates)
    eps = tolerances.eps if eps is None else float(eps)
    if dist > 0:
        eps = max(eps, tolerances.resolution_constant * tolerances.h / dist)
    limit = (1.0 + eps) * dist

    accepted = []
    for path in candidates:
        if path.length > limit:
            continue
        if not is_geodesic(mesh, path, theta_tol=tolerances.theta_tol):
            continue
        accepted.append(path)
    if not accepted:
        shortest = min(candidates, key=lambda c: c.length)
        is_geodesic(mesh, shortest, theta_tol=tolerances.theta_tol)
        accepted = [shortest]

    result = dedupe_paths(mesh, accepted, tolerances.dedupe_radius)
    logger.debug(
        f"minimizing geodesics: {len(candidates)} candidates, {len(accepted)} within "
        f"(1+{eps:.3g})·{dist:.4g}, {len(result)} distinct"
    )
    return result


def multiplicity_agreement(
    graph: CutLocusGraph,
    settings: Optional[GeodesicSettings] = None,
    nodes: Optional[List[int]] = None,
) -> Tuple[float, List[int]]:
    """
    뼈대 노드의 중복도 표시와 최소 측지선 개수 비교

    Returns:
        (일치 비율, 불일치 노드 목록) - 불일치는 경고로 기록
    """
    settings = settings or get_settings()
    checked = [n for n in (nodes if nodes is not None else graph.vertices) if graph.multiplicity(n)]
    if not checked:
        return 1.0, []
    mismatched = []
    for node in checked:
        found = minimizing_geodesics(graph.mesh, graph.source, graph.point(node), settings=settings)
        if len(found) != graph.multiplicity(node):
            mismatched.append(node)
    if mismatched:
        logger.warning(f"multiplicity label mismatch at {len(mismatched)}/{len(checked)} nodes")
    return 1.0 - len(mismatched) / len(checked), mismatched


@dataclass
class SlideResult:
    """절단 궤적 꼭짓점까지 미끄러뜨린 결과"""
    node: int
    point: SurfacePoint
    homotopy: Homotopy
    route: List[int]
    sides: Tuple[GeodesicPath, GeodesicPath]
    geodesics: List[GeodesicPath] = field(default_factory=list)

    @property
    def is_identity(self) -> bool:
        return len(self.route) == 1

    @property
    def multiplicity(self) -> int:
        return len(self.geodesics)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "node": self.node,
            "point": self.point.to_dict(),
            "route": list(self.route),
            "multiplicity": self.multiplicity,
            "homotopy": self.homotopy.to_dict(),
        }


def _match_pair(
    mesh: IntrinsicMesh,
    geodesics: List[GeodesicPath],
    previous: Optional[Tuple[GeodesicPath, GeodesicPath]],
) -> Tuple[GeodesicPath, GeodesicPath]:
    """이전 두 변에 가장 가까운 두 측지선 (처음이면 가장 짧은 둘)"""
    if len(geodesics) == 1:
        return geodesics[0], geodesics[0]
    if previous is None:
        return geodesics[0], geodesics[1]
    prev_a, prev_b = previous
    best_a = min(range(len(geodesics)), key=lambda i: frechet_distance(mesh, geodesics[i], prev_a))
    rest = [i for i in range(len(geodesics)) if i != best_a]
    best_b = min(rest, key=lambda i: frechet_distance(mesh, geodesics[i], prev_b))
    return geodesics[best_a], geodesics[best_b]


def digon_loop(side_a: GeodesicPath, side_b: GeodesicPath) -> GeodesicPath:
    """두 변으로 닫은 루프 side_a * side_b⁻¹ (x 기준)"""
    if side_a.is_constant and side_b.is_constant:
        return constant_path(side_a.start, kind=PathKind.LOOP)
    return side_a.concatenate(side_b.reverse(), kind=PathKind.LOOP)


def slide_to_vertex(
    graph: CutLocusGraph,
    start: SurfacePoint,
    settings: Optional[GeodesicSettings] = None,
) -> SlideResult:
    """
    절단 궤적 변 위의 점을 가장 가까운 꼭짓점(차수 ≠ 2)까지 미끄러뜨리기

    경로의 세밀 노드마다 최소 측지선 두 개를 이전 변과 정렬 거리로 맞춰 고르고,
    그 digon 루프들을 호모토피 프레임으로 삼는다.

    Args:
        graph: 절단 궤적 그래프
        start: 시작점 (그래프에서 2h 이내)
        settings: 설정

    Returns:
        SlideResult

    Raises:
        NotOnCutLocus: 시작점이 그래프에서 너무 멂
    """
    settings = settings or get_settings()
    mesh = graph.mesh
    tolerances = settings.resolve(mesh)
    if graph.is_empty:
        raise NotOnCutLocus("Cut locus graph is empty", distance=None)
    origin, gap = graph.nearest(start)
    if gap > tolerances.slide_radius:
        raise NotOnCutLocus(
            f"Point is {gap:.4g} from the cut locus (radius {tolerances.slide_radius:.4g})",
            distance=gap,
        )

    fine = graph.fine
    if fine.degree[origin] != 2:
        route = [origin]
    else:
        lengths, paths = nx.single_source_dijkstra(fine, origin, weight="length")
        targets = [n for n in lengths if fine.degree[n] != 2]
        if targets:
            target = min(targets, key=lambda n: (lengths[n], n))
            route = paths[target]
        else:
            # 갈림 없는 순환: 가장 먼 노드를 꼭짓점으로 봄
            target = graph.vertices[0] if graph.vertices else origin
            route = nx.shortest_path(fine, origin, target, weight="length")

    frames: List[GeodesicPath] = []
    previous: Optional[Tuple[GeodesicPath, GeodesicPath]] = None
    geodesics: List[GeodesicPath] = []
    distances: List[float] = []
    for node in route:
        geodesics = minimizing_geodesics(mesh, graph.source, graph.point(node), settings=settings)
        distances.append(geodesics[0].length)
        previous = _match_pair(mesh, geodesics, previous)
        frames.append(digon_loop(*previous))

    budget = 2.0 * (1.0 + tolerances.eps) * max(distances) + tolerances.slack
    homotopy = Homotopy(frames=frames, mode=ShortenMode.BASED_LOOP, budget=budget)
    homotopy.metadata["route"] = list(route)
    if not homotopy.within_budget:
        logger.warning(
            f"slide digon length {homotopy.max_length:.4g} exceeds budget {budget:.4g}"
        )
    node = route[-1]
    multiplicity = graph.multiplicity(node)
    if multiplicity is not None and multiplicity > 1 and len(geodesics) != multiplicity:
        logger.warning(
            f"cut locus node {node}: label {multiplicity} vs {len(geodesics)} minimizing geodesics"
        )
    logger.debug(f"slide from node {origin} to {node} over {len(route)} nodes")
    return SlideResult(
        node=node,
        point=graph.point(node),
        homotopy=homotopy,
        route=list(route),
        sides=previous,  # type: ignore[arg-type]
        geodesics=geodesics,
    )
