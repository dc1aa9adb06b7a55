# -*- coding: utf-8 -*-
"""
Steiner 점 그래프 - 면 경계 노드를 면 안에서 모두 잇는 희소 그래프
"""
import logging
import threading
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

import numpy as np
from cachetools import LRUCache
from scipy.sparse import coo_matrix, csr_matrix

from src.core.exceptions import EmptyDomain
from src.core.models.geometry import SurfacePoint
from src.domain.surface.mesh import IntrinsicMesh

logger = logging.getLogger(__name__)

DomainKey = Optional[FrozenSet[int]]

_GRAPH_CACHE: LRUCache = LRUCache(maxsize=16)
_GRAPH_LOCK = threading.Lock()


@dataclass
class SteinerGraph:
    """
    면마다 코너 3개와 변당 k 개의 Steiner 점을 노드로 두는 그래프

    노드 0..V-1 은 메쉬 꼭짓점, V + e·k + i 는 변 e 의 i 번째 내부 점이다.
    마지막 노드 번호(node_count)는 출발점 연결용으로 비워 둔다.
    """
    mesh: IntrinsicMesh
    steiner_points: int
    face_nodes: np.ndarray
    face_node_positions: np.ndarray
    matrix: csr_matrix
    domain: DomainKey

    @property
    def node_count(self) -> int:
        return self.mesh.vertex_count + self.mesh.edge_count * self.steiner_points

    @property
    def source_node(self) -> int:
        return self.node_count

    def node_point(self, node: int) -> SurfacePoint:
        """노드 번호를 곡면 위의 점으로"""
        mesh = self.mesh
        if node < mesh.vertex_count:
            return mesh.vertex_point(node)
        e, i = divmod(node - mesh.vertex_count, self.steiner_points)
        t = (i + 1) / (self.steiner_points + 1)
        f, s = mesh.edge_side[e]
        bary = [0.0, 0.0, 0.0]
        if mesh.faces[f, s] == mesh.edges[e, 0]:
            bary[s], bary[(s + 1) % 3] = 1.0 - t, t
        else:
            bary[s], bary[(s + 1) % 3] = t, 1.0 - t
        return SurfacePoint(int(f), tuple(bary))

    def attach(self, point: SurfacePoint) -> Tuple[np.ndarray, np.ndarray]:
        """
        점을 포함하는 면들의 경계 노드와 면 안 거리

        Returns:
            (노드 번호 배열, 거리 배열)
        """
        nodes: List[np.ndarray] = []
        weights: List[np.ndarray] = []
        for face in self.mesh.faces_containing(point):
            if self.domain is not None and face not in self.domain:
                continue
            local = self.mesh.local_position(point, face)
            nodes.append(self.face_nodes[face])
            weights.append(np.linalg.norm(self.face_node_positions[face] - local, axis=1))
        if not nodes:
            raise EmptyDomain("Point does not lie in the graph domain")
        all_nodes = np.concatenate(nodes)
        all_weights = np.concatenate(weights)
        order = np.lexsort((all_weights, all_nodes))
        all_nodes, all_weights = all_nodes[order], all_weights[order]
        keep = np.concatenate([[True], all_nodes[1:] != all_nodes[:-1]])
        return all_nodes[keep], all_weights[keep]

    def with_source(self, point: SurfacePoint) -> Tuple[csr_matrix, Optional[int]]:
        """
        출발점을 붙인 그래프

        Returns:
            (행렬, 출발 노드) - 점이 꼭짓점이면 원래 행렬과 꼭짓점 노드
        """
        vertex = self.mesh.point_vertex(point)
        if vertex is not None:
            return self.matrix, vertex
        nodes, weights = self.attach(point)
        size = self.node_count + 1
        extra = coo_matrix(
            (np.maximum(weights, 1e-300), (nodes, np.full(nodes.size, self.source_node))),
            shape=(size, size),
        ).tocsr()
        return (self.matrix + extra).tocsr(), self.source_node


def _face_layout(mesh: IntrinsicMesh, k: int) -> Tuple[np.ndarray, np.ndarray]:
    """면마다 경계 노드 번호와 면 배치 좌표"""
    n_faces = mesh.face_count
    per_face = 3 + 3 * k
    nodes = np.empty((n_faces, per_face), dtype=np.int64)
    positions = np.empty((n_faces, per_face, 2))
    coords = mesh.face_coords
    nodes[:, :3] = mesh.faces
    positions[:, :3] = coords
    steps = (np.arange(k) + 1) / (k + 1)
    for s in range(3):
        edge = mesh.face_edges[:, s]
        forward = mesh.faces[:, s] == mesh.edges[edge, 0]
        a = coords[:, s]
        b = coords[:, (s + 1) % 3]
        for i, t in enumerate(steps):
            column = 3 + s * k + i
            index = np.where(forward, i, k - 1 - i)
            nodes[:, column] = mesh.vertex_count + edge * k + index
            positions[:, column] = a + t * (b - a)
    return nodes, positions


def build_steiner_graph(
    mesh: IntrinsicMesh, steiner_points: int = 3, domain: DomainKey = None
) -> SteinerGraph:
    """
    Steiner 그래프 생성 (메쉬 지문 기준 캐시)

    Args:
        mesh: 메쉬
        steiner_points: 변당 내부 점 개수
        domain: 면 부분집합 (None 이면 전체)

    Raises:
        EmptyDomain: 빈 면 부분집합
    """
    if domain is not None and not domain:
        raise EmptyDomain("Domain face subset is empty")
    key = (mesh.fingerprint, steiner_points, domain)
    with _GRAPH_LOCK:
        cached = _GRAPH_CACHE.get(key)
    if cached is not None and cached.mesh is mesh:
        return cached

    k = int(steiner_points)
    nodes, positions = _face_layout(mesh, k)
    faces = np.arange(mesh.face_count) if domain is None else np.array(sorted(domain))
    per_face = nodes.shape[1]
    ii, jj = np.triu_indices(per_face, k=1)
    sub_nodes = nodes[faces]
    sub_pos = positions[faces]
    a = sub_nodes[:, ii].ravel()
    b = sub_nodes[:, jj].ravel()
    w = np.linalg.norm(sub_pos[:, ii] - sub_pos[:, jj], axis=2).ravel()

    lo, hi = np.minimum(a, b), np.maximum(a, b)
    valid = lo != hi
    lo, hi, w = lo[valid], hi[valid], w[valid]
    order = np.lexsort((w, hi, lo))
    lo, hi, w = lo[order], hi[order], w[order]
    first = np.concatenate([[True], (lo[1:] != lo[:-1]) | (hi[1:] != hi[:-1])])
    lo, hi, w = lo[first], hi[first], np.maximum(w[first], 1e-300)

    size = mesh.vertex_count + mesh.edge_count * k + 1
    matrix = coo_matrix((w, (lo, hi)), shape=(size, size)).tocsr()
    graph = SteinerGraph(
        mesh=mesh,
        steiner_points=k,
        face_nodes=nodes,
        face_node_positions=positions,
        matrix=matrix,
        domain=domain,
    )
    logger.debug(f"Steiner graph nodes={size} edges={w.size} domain={'all' if domain is None else len(domain)}")
    with _GRAPH_LOCK:
        _GRAPH_CACHE[key] = graph
    return graph


def domain_key(domain: Optional[object]) -> DomainKey:
    """면 부분집합을 캐시 키로"""
    if domain is None:
        return None
    return frozenset(int(f) for f in domain)  # type: ignore[union-attr]


def clear_graph_cache() -> None:
    """그래프 캐시 비우기"""
    with _GRAPH_LOCK:
        _GRAPH_CACHE.clear()


def graph_cache_info() -> Dict[str, int]:
    """캐시 상태"""
    with _GRAPH_LOCK:
        return {"size": len(_GRAPH_CACHE), "maxsize": int(_GRAPH_CACHE.maxsize)}
