# -*- coding: utf-8 -*-
"""
조합 위상 도우미 - 쌍대 그래프, tree-cotree 호몰로지 생성원, 변 루프
"""
import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Set

import networkx as nx
import numpy as np

from src.core.models.geometry import GeodesicPath, PathKind
from src.domain.surface.mesh import IntrinsicMesh
from src.domain.surface.paths import make_path

logger = logging.getLogger(__name__)


@dataclass
class EdgeLoop:
    """메쉬 변을 따라 닫힌 꼭짓점 순환 (vertices[0] == vertices[-1])"""
    vertices: List[int]
    edges: Set[int]

    @property
    def size(self) -> int:
        return len(self.edges)


def dual_graph(mesh: IntrinsicMesh, faces: Optional[Iterable[int]] = None) -> nx.Graph:
    """
    면을 노드로, 공유 변을 간선으로 하는 그래프

    간선 속성 edge 에 메쉬 변 번호를 둔다.
    """
    allowed = None if faces is None else set(int(f) for f in faces)
    graph = nx.Graph()
    graph.add_nodes_from(range(mesh.face_count) if allowed is None else sorted(allowed))
    for f in graph.nodes:
        for s in range(3):
            g = int(mesh.gluing[f, s, 0])
            if allowed is not None and g not in allowed:
                continue
            if f < g:
                graph.add_edge(f, g, edge=int(mesh.face_edges[f, s]))
    return graph


def is_edge_connected(mesh: IntrinsicMesh, faces: Iterable[int]) -> bool:
    """면 부분집합이 변으로 연결되어 있는지"""
    graph = dual_graph(mesh, faces)
    return graph.number_of_nodes() > 0 and nx.is_connected(graph)


def edge_between(mesh: IntrinsicMesh, a: int, b: int) -> Optional[int]:
    """두 꼭짓점을 잇는 변 번호"""
    lo, hi = min(a, b), max(a, b)
    hits = np.flatnonzero((mesh.edges[:, 0] == lo) & (mesh.edges[:, 1] == hi))
    return int(hits[0]) if hits.size else None


def tree_cotree_generators(mesh: IntrinsicMesh, root: int = 0) -> List[EdgeLoop]:
    """
    1차 호몰로지 생성원 2g 개

    변 그래프의 최단 경로 나무 T, T 에 속하지 않는 변으로 만든 쌍대 신장 나무 C 를
    구한 뒤 남은 변마다 T 경로로 닫은 루프를 만든다.

    Args:
        mesh: 메쉬
        root: 나무 뿌리 꼭짓점

    Returns:
        EdgeLoop 목록 (구면이면 빈 목록)
    """
    edge_index = {
        (int(a), int(b)): e for e, (a, b) in enumerate(mesh.edges)
    }
    _, paths = nx.single_source_dijkstra(mesh.edge_graph, root)
    tree = nx.Graph()
    tree.add_nodes_from(range(mesh.vertex_count))
    tree_edges: Set[int] = set()
    for vertex, route in paths.items():
        if len(route) >= 2:
            a, b = route[-2], route[-1]
            tree.add_edge(a, b)
            tree_edges.add(edge_index[(min(a, b), max(a, b))])

    dual = nx.Graph()
    dual.add_nodes_from(range(mesh.face_count))
    for f in range(mesh.face_count):
        for s in range(3):
            e = int(mesh.face_edges[f, s])
            g = int(mesh.gluing[f, s, 0])
            if e not in tree_edges and f < g:
                dual.add_edge(f, g, edge=e, weight=-float(mesh.edge_lengths[e]))
    cotree = nx.minimum_spanning_tree(dual)
    cotree_edges = {data["edge"] for _, _, data in cotree.edges(data=True)}

    loops: List[EdgeLoop] = []
    for e in range(mesh.edge_count):
        if e in tree_edges or e in cotree_edges:
            continue
        a, b = int(mesh.edges[e, 0]), int(mesh.edges[e, 1])
        route = nx.shortest_path(tree, b, a)
        vertices = [a] + route
        edges = {e} | {
            edge_index[(min(u, v), max(u, v))] for u, v in zip(route[:-1], route[1:])
        }
        loops.append(EdgeLoop(vertices=vertices, edges=edges))
    expected = 2 - mesh.euler_characteristic
    if len(loops) != expected:
        logger.warning(f"tree-cotree produced {len(loops)} generators, expected {expected}")
    return loops


def edge_loop_path(mesh: IntrinsicMesh, vertices: Sequence[int], kind: PathKind = PathKind.LOOP) -> GeodesicPath:
    """꼭짓점 순서대로 변을 따라가는 경로"""
    points = [mesh.vertex_point(int(v)) for v in vertices]
    return make_path(mesh, points, kind=kind)


def crossing_parity(crossed_edges: Iterable[int], loops: Sequence[EdgeLoop]) -> np.ndarray:
    """쌍대 순환이 가로지른 변 집합과 각 생성원의 교차 수 (mod 2)"""
    crossed = list(crossed_edges)
    return np.array(
        [sum(1 for e in crossed if e in loop.edges) % 2 for loop in loops], dtype=np.int64
    )
