# -*- coding: utf-8 -*-
"""
거리장, 최단 경로, 지름, 가장 먼 점
"""
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np
from cachetools import LRUCache
from scipy.sparse.csgraph import dijkstra
from tqdm import tqdm

from src.core.models.geometry import GeodesicPath, PathKind, SurfacePoint
from src.domain.metric.graph import DomainKey, SteinerGraph, build_steiner_graph, domain_key
from src.domain.surface.mesh import IntrinsicMesh
from src.domain.surface.paths import constant_path, make_path
from src.domain.surface.unfolding import straighten
from src.infrastructure.config.settings import GeodesicSettings, get_settings

logger = logging.getLogger(__name__)

_FIELD_CACHE: LRUCache = LRUCache(maxsize=64)
_FIELD_LOCK = threading.Lock()


@dataclass
class DistanceField:
    """
    출발점에서의 거리장

    distance 는 꼭짓점별 거리, predecessor 는 그래프 노드 기준 직전 노드
    (출발 노드면 -9999) 이다. resolution_error 는 과대 추정 상한 c·h.
    """
    source: SurfacePoint
    distance: np.ndarray
    predecessor: np.ndarray
    resolution_error: float
    node_distance: np.ndarray = field(repr=False)
    graph: SteinerGraph = field(repr=False)
    source_node: int = -1

    @property
    def mesh(self) -> IntrinsicMesh:
        return self.graph.mesh

    @property
    def domain(self) -> DomainKey:
        return self.graph.domain

    def vertex_distance(self, vertex: int) -> float:
        return float(self.distance[vertex])

    def _best_node(self, point: SurfacePoint) -> Tuple[float, int]:
        nodes, weights = self.graph.attach(point)
        totals = self.node_distance[nodes] + weights
        best = int(np.argmin(totals))
        return float(totals[best]), int(nodes[best])

    def distance_at(self, point: SurfacePoint) -> float:
        """임의 점까지의 거리"""
        mesh = self.mesh
        vertex = mesh.point_vertex(point)
        if vertex is not None:
            value = float(self.distance[vertex])
        else:
            value = self._best_node(point)[0]
        face = mesh.common_face(self.source, point)
        if face is not None:
            value = min(value, mesh.segment_length(self.source, point, face))
        return value

    def node_chain(self, point: SurfacePoint) -> List[int]:
        """점에서 출발점까지 그래프 노드 사슬 (출발 쪽부터)"""
        vertex = self.mesh.point_vertex(point)
        node = vertex if vertex is not None else self._best_node(point)[1]
        chain = [node]
        guard = self.predecessor.size + 1
        while node != self.source_node and self.predecessor[node] >= 0:
            node = int(self.predecessor[node])
            chain.append(node)
            guard -= 1
            if guard < 0:
                raise RuntimeError("predecessor chain does not terminate")
        chain.reverse()
        return chain

    def reachable(self) -> np.ndarray:
        """도달 가능한 꼭짓점 마스크"""
        return np.isfinite(self.distance)

    def to_dict(self) -> Dict[str, Any]:
        """꼭짓점 번호를 키로 하는 JSON 호환 딕셔너리"""
        return {
            "source": self.source.to_dict(),
            "resolution_error": self.resolution_error,
            "distance": {
                str(v): float(d) for v, d in enumerate(self.distance) if np.isfinite(d)
            },
        }


def _field_key(mesh: IntrinsicMesh, source: SurfacePoint, domain: DomainKey, k: int) -> tuple:
    return (mesh.fingerprint, source.key(), domain, k)


def configure_cache(size: int) -> None:
    """거리장 캐시 크기 변경"""
    global _FIELD_CACHE
    with _FIELD_LOCK:
        _FIELD_CACHE = LRUCache(maxsize=max(int(size), 1))


def clear_cache() -> None:
    """거리장 캐시 비우기"""
    with _FIELD_LOCK:
        _FIELD_CACHE.clear()


def distance_field(
    mesh: IntrinsicMesh,
    source: SurfacePoint,
    domain: Optional[Iterable[int]] = None,
    settings: Optional[GeodesicSettings] = None,
) -> DistanceField:
    """
    Steiner 그래프 위 다익스트라로 꼭짓점별 거리 계산

    Args:
        mesh: 메쉬
        source: 출발점
        domain: 면 부분집합 (없으면 전체 곡면)
        settings: 설정 (없으면 전역 설정)

    Returns:
        DistanceField (도메인 밖 꼭짓점은 inf)

    Raises:
        EmptyDomain: 도메인이 비었거나 출발점을 포함하지 않을 때
    """
    settings = settings or get_settings()
    mesh.check_point(source)
    key_domain = domain_key(domain)
    k = settings.metric.steiner_points
    key = _field_key(mesh, source, key_domain, k)
    with _FIELD_LOCK:
        cached = _FIELD_CACHE.get(key)
    if cached is not None and cached.mesh is mesh:
        return cached

    graph = build_steiner_graph(mesh, k, key_domain)
    matrix, source_node = graph.with_source(source)
    node_distance, predecessor = dijkstra(
        matrix, directed=False, indices=source_node, return_predecessors=True
    )
    result = DistanceField(
        source=source,
        distance=node_distance[: mesh.vertex_count].copy(),
        predecessor=predecessor,
        resolution_error=settings.metric.resolution_constant * mesh.max_edge_length,
        node_distance=node_distance,
        graph=graph,
        source_node=int(source_node),
    )
    with _FIELD_LOCK:
        _FIELD_CACHE[key] = result
    return result


def point_distance(
    mesh: IntrinsicMesh,
    a: SurfacePoint,
    b: SurfacePoint,
    settings: Optional[GeodesicSettings] = None,
) -> float:
    """두 점 사이 거리"""
    return distance_field(mesh, a, settings=settings).distance_at(b)


def shortest_path(
    mesh: IntrinsicMesh,
    a: SurfacePoint,
    b: SurfacePoint,
    domain: Optional[Iterable[int]] = None,
    settings: Optional[GeodesicSettings] = None,
) -> GeodesicPath:
    """
    최단 경로 - 그래프 직전 노드 사슬을 곧게 편 결과

    Args:
        mesh: 메쉬
        a: 시작점
        b: 끝점
        domain: 면 부분집합
        settings: 설정

    Returns:
        a→b GeodesicPath (metadata["graph_length"] 에 그래프 거리)
    """
    if mesh.same_location(a, b):
        return constant_path(a) if a == b else make_path(mesh, [a, b])
    field_a = distance_field(mesh, a, domain=domain, settings=settings)
    chain = field_a.node_chain(b)
    points = [a]
    for node in chain:
        if node == field_a.source_node:
            continue
        points.append(field_a.graph.node_point(node))
    points.append(b)

    # 같은 위치의 연속 점 제거 (꼭짓점 출발/도착)
    compact = [points[0]]
    for p in points[1:-1]:
        if not mesh.same_location(compact[-1], p):
            compact.append(p)
    if mesh.same_location(compact[-1], points[-1]) and len(compact) > 1:
        compact[-1] = points[-1]
    else:
        compact.append(points[-1])

    rough = make_path(mesh, compact)
    path = straighten(mesh, rough)
    direct_face = mesh.common_face(a, b)
    if direct_face is not None:
        direct = make_path(mesh, [a, b], [direct_face])
        if direct.length < path.length:
            direct.straightness_defect = 0.0
            path = direct
    path.kind = PathKind.OPEN
    path.metadata["graph_length"] = field_a.distance_at(b)
    return path


def farthest_point(
    mesh: IntrinsicMesh,
    x: SurfacePoint,
    domain: Optional[Iterable[int]] = None,
    settings: Optional[GeodesicSettings] = None,
) -> SurfacePoint:
    """거리가 가장 큰 꼭짓점 (같으면 작은 번호)"""
    field_x = distance_field(mesh, x, domain=domain, settings=settings)
    distances = np.where(np.isfinite(field_x.distance), field_x.distance, -np.inf)
    return mesh.vertex_point(int(np.argmax(distances)))


def _eccentricity(
    mesh: IntrinsicMesh, vertex: int, settings: GeodesicSettings
) -> Tuple[int, np.ndarray]:
    return vertex, distance_field(mesh, mesh.vertex_point(vertex), settings=settings).distance


def _exhaustive_diameter(
    mesh: IntrinsicMesh, settings: GeodesicSettings
) -> Tuple[float, Tuple[int, int]]:
    graph = build_steiner_graph(mesh, settings.metric.steiner_points)
    best = (-1.0, (0, 0))
    chunk = 64
    starts = range(0, mesh.vertex_count, chunk)
    for start in tqdm(starts, disable=not settings.performance.show_progress, desc="diameter"):
        rows = np.arange(start, min(start + chunk, mesh.vertex_count))
        block = dijkstra(graph.matrix, directed=False, indices=rows)[:, : mesh.vertex_count]
        for row, distances in zip(rows, block):
            j = int(np.argmax(distances))
            if distances[j] > best[0] + 1e-15:
                best = (float(distances[j]), (int(min(row, j)), int(max(row, j))))
    return best


def diameter(
    mesh: IntrinsicMesh,
    exhaustive: bool = False,
    settings: Optional[GeodesicSettings] = None,
) -> Tuple[float, Tuple[int, int]]:
    """
    꼭짓점 쌍 거리의 최댓값

    경계 이심률 가지치기로 필요한 출발점만 계산하며 후보들은 스레드 풀에서
    병렬로 처리한다. exhaustive=True 이면 모든 꼭짓점에서 계산한다.

    Args:
        mesh: 메쉬
        exhaustive: 전수 계산 여부
        settings: 설정

    Returns:
        (지름, (꼭짓점, 꼭짓점))
    """
    settings = settings or get_settings()
    if exhaustive:
        return _exhaustive_diameter(mesh, settings)

    n = mesh.vertex_count
    lower = np.zeros(n)
    upper = np.full(n, np.inf)
    candidates = np.ones(n, dtype=bool)
    best = (-1.0, (0, 0))
    workers = settings.performance.max_workers
    pick_high = True
    seed = 0
    progress = tqdm(total=n, disable=not settings.performance.show_progress, desc="diameter")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        batch = [seed]
        while batch:
            for vertex, distances in pool.map(lambda v: _eccentricity(mesh, v, settings), batch):
                ecc = float(distances.max())
                far = int(np.argmax(distances))
                if ecc > best[0] + 1e-15:
                    best = (ecc, (min(vertex, far), max(vertex, far)))
                lower = np.maximum(lower, np.maximum(ecc - distances, distances))
                upper = np.minimum(upper, ecc + distances)
                candidates[vertex] = False
                progress.update(1)
            candidates &= upper > best[0] + 1e-12
            remaining = np.flatnonzero(candidates)
            if remaining.size == 0:
                break
            batch = []
            for _ in range(min(workers, remaining.size)):
                pool_vals = remaining[~np.isin(remaining, batch)]
                if pool_vals.size == 0:
                    break
                if pick_high:
                    choice = pool_vals[np.argmax(upper[pool_vals])]
                else:
                    choice = pool_vals[np.argmin(lower[pool_vals])]
                batch.append(int(choice))
                pick_high = not pick_high
    progress.close()
    logger.info(f"Diameter {best[0]:.6g} between vertices {best[1]}")
    return best
