# -*- coding: utf-8 -*-
"""
절단 궤적 추출

거리장의 면별 기울기를 이웃 면끼리 펼쳐 비교해, 기울기 방향과 가상 출발점 위치가
함께 크게 어긋나는 변을 절단 궤적이 지나는 변으로 본다. 표시된 변의 중점들을
면 안에서 이어 세밀 그래프를 만들고, 신장 나무에 호몰로지적으로 독립인 순환만
더한 뒤 짧은 가지를 잘라낸다.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Set, Tuple

import networkx as nx
import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra

from src.core.models.geometry import SurfacePoint
from src.domain.metric.distance import DistanceField, distance_field
from src.domain.metric.graph import DomainKey, domain_key
from src.domain.surface.mesh import IntrinsicMesh
from src.domain.surface.topology import crossing_parity, tree_cotree_generators
from src.infrastructure.config.settings import GeodesicSettings, Tolerances, get_settings

logger = logging.getLogger(__name__)


def _edge_order(edge: Tuple[int, int, Dict[str, Any]]) -> Tuple[int, int, int]:
    a, b, data = edge
    return (min(a, b), max(a, b), len(data["polyline"]))


@dataclass
class CutLocusGraph:
    """
    출발점의 절단 궤적 그래프

    fine 은 메쉬 변 중점을 노드로 하는 세밀 그래프(노드 속성 point, distance),
    skeleton 은 차수가 2 가 아닌 노드와 그 사이 다각선(polyline)의 다중 그래프다.
    """
    source: SurfacePoint
    mesh: IntrinsicMesh = field(repr=False)
    fine: nx.Graph = field(repr=False)
    skeleton: nx.MultiGraph = field(repr=False)
    domain: DomainKey = None
    fallback: bool = False
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def betti_number(self) -> int:
        """1차 베티 수 (E - V + 연결 성분 수)"""
        g = self.fine
        if g.number_of_nodes() == 0:
            return 0
        return g.number_of_edges() - g.number_of_nodes() + nx.number_connected_components(g)

    @property
    def is_tree(self) -> bool:
        return self.fine.number_of_nodes() > 0 and nx.is_tree(self.fine)

    @property
    def is_empty(self) -> bool:
        return self.fine.number_of_nodes() == 0

    @property
    def vertices(self) -> List[int]:
        """뼈대 노드 (차수 ≠ 2)"""
        return sorted(self.skeleton.nodes)

    def point(self, node: int) -> SurfacePoint:
        return self.fine.nodes[node]["point"]

    def multiplicity(self, node: int) -> Optional[int]:
        return self.fine.nodes[node].get("multiplicity")

    def degree(self, node: int) -> int:
        return int(self.fine.degree[node])

    def polylines(self) -> List[List[SurfacePoint]]:
        """뼈대 간선마다 점 목록"""
        return [
            [self.point(n) for n in data["polyline"]]
            for _, _, data in sorted(self.skeleton.edges(data=True), key=_edge_order)
        ]

    def nearest(self, point: SurfacePoint) -> Tuple[int, float]:
        """
        점에서 가장 가까운 세밀 노드

        Returns:
            (노드, 거리) - 위치 정보가 없으면 거리장으로 비교
        """
        nodes = sorted(self.fine.nodes)
        target = self.mesh.position_of(point)
        positions = self.mesh.positions_of([self.point(n) for n in nodes])
        if target is not None and positions is not None:
            distances = self.mesh.ambient_distances(positions, target[None, :])
        else:
            field_p = distance_field(self.mesh, point)
            distances = np.array([field_p.distance_at(self.point(n)) for n in nodes])
        best = int(np.argmin(distances))
        return nodes[best], float(distances[best])

    def to_dict(self) -> Dict[str, Any]:
        """JSON 호환 딕셔너리 (노드, 다각선 간선, 중복도)"""
        nodes = [
            {
                "id": int(n),
                "point": self.point(n).to_dict(),
                "degree": self.degree(n),
                "multiplicity": self.multiplicity(n),
                "distance": float(self.fine.nodes[n].get("distance", math.nan)),
            }
            for n in self.vertices
        ]
        edges = []
        for a, b, data in sorted(self.skeleton.edges(data=True), key=_edge_order):
            edges.append(
                {
                    "a": int(a),
                    "b": int(b),
                    "length": float(data["length"]),
                    "polyline": [self.point(n).to_dict() for n in data["polyline"]],
                }
            )
        return {
            "source": self.source.to_dict(),
            "betti_number": self.betti_number,
            "fallback": self.fallback,
            "domain_faces": None if self.domain is None else sorted(self.domain),
            "nodes": nodes,
            "edges": edges,
        }


# ----------------------------------------------------------------------
# 변별 어긋남 측정
# ----------------------------------------------------------------------


def _rotation(angle: np.ndarray) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.stack([np.stack([c, -s], axis=-1), np.stack([s, c], axis=-1)], axis=-2)


def edge_disagreement(mesh: IntrinsicMesh, distance: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    변 양쪽 면의 기울기 방향 차이와 가상 출발점 사이 거리

    Args:
        mesh: 메쉬
        distance: 꼭짓점별 거리 (도메인 밖은 inf)

    Returns:
        (각도 차 배열, 가상 출발점 거리 배열) - 길이 E, 계산 불가한 변은 nan
    """
    coords = mesh.face_coords
    d = distance[mesh.faces]
    e1 = coords[:, 1] - coords[:, 0]
    e2 = coords[:, 2] - coords[:, 0]
    r0 = d[:, 1] - d[:, 0]
    r1 = d[:, 2] - d[:, 0]
    det = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
    with np.errstate(invalid="ignore", divide="ignore"):
        grad = np.stack(
            [(e2[:, 1] * r0 - e1[:, 1] * r1) / det, (-e2[:, 0] * r0 + e1[:, 0] * r1) / det],
            axis=1,
        )
        norm = np.linalg.norm(grad, axis=1, keepdims=True)
        unit = grad / norm
    centroid = coords.mean(axis=1)
    image = centroid - d.mean(axis=1, keepdims=True) * unit

    f = mesh.edge_side[:, 0]
    s = mesh.edge_side[:, 1]
    g = mesh.gluing[f, s, 0]
    s2 = mesh.gluing[f, s, 1]
    a_f = coords[f, s]
    b_f = coords[f, (s + 1) % 3]
    b_g = coords[g, s2]
    a_g = coords[g, (s2 + 1) % 3]
    vf = a_f - b_f
    vg = a_g - b_g
    rot = np.arctan2(vf[:, 1], vf[:, 0]) - np.arctan2(vg[:, 1], vg[:, 0])
    matrix = _rotation(rot)
    unit_g = np.einsum("eij,ej->ei", matrix, unit[g])
    image_g = b_f + np.einsum("eij,ej->ei", matrix, image[g] - b_g)
    with np.errstate(invalid="ignore"):
        angle = np.arccos(np.clip(np.sum(unit[f] * unit_g, axis=1), -1.0, 1.0))
        gap = np.linalg.norm(image[f] - image_g, axis=1)
    return angle, gap


def _midpoint(mesh: IntrinsicMesh, edge: int) -> SurfacePoint:
    f, s = mesh.edge_side[edge]
    bary = [0.0, 0.0, 0.0]
    bary[s] = 0.5
    bary[(s + 1) % 3] = 0.5
    return SurfacePoint(int(f), tuple(bary))


def _midpoint_graph(
    mesh: IntrinsicMesh, faces: np.ndarray
) -> Tuple[coo_matrix, Dict[Tuple[int, int], int], Dict[Tuple[int, int], float]]:
    """모든 변 중점을 면 안에서 잇는 그래프"""
    coords = mesh.face_coords
    rows, cols, weights = [], [], []
    face_of: Dict[Tuple[int, int], int] = {}
    length_of: Dict[Tuple[int, int], float] = {}
    for f in faces.tolist():
        mids = [(coords[f, s] + coords[f, (s + 1) % 3]) / 2.0 for s in range(3)]
        for s, t in ((0, 1), (1, 2), (2, 0)):
            a, b = int(mesh.face_edges[f, s]), int(mesh.face_edges[f, t])
            key = (min(a, b), max(a, b))
            w = float(np.linalg.norm(mids[s] - mids[t]))
            if key not in face_of or w < length_of[key]:
                face_of[key] = f
                length_of[key] = w
    for (a, b), w in length_of.items():
        rows.append(a)
        cols.append(b)
        weights.append(max(w, 1e-300))
    n = mesh.edge_count
    matrix = coo_matrix((weights, (rows, cols)), shape=(n, n))
    return matrix, face_of, length_of


def _fan_link(
    mesh: IntrinsicMesh, vertex: int, a: int, b: int, members: Set[int]
) -> Optional[Tuple[Dict[int, int], Tuple[int, ...]]]:
    """
    꼭짓점 v 를 지나는 두 변을 부채꼴 짧은 쪽으로 잇기

    Returns:
        (끝 노드별 인접 면, 가로지른 바퀴살 변) 또는 도메인 밖이면 None
    """
    ring = mesh.one_ring(vertex)
    spokes = [int(mesh.face_edges[f, (c + 2) % 3]) for f, c in ring]
    if a not in spokes or b not in spokes:
        return None
    n = len(ring)
    i, j = spokes.index(a), spokes.index(b)
    forward = (j - i) % n
    if forward <= n - forward:
        fan = [ring[(i + 1 + k) % n][0] for k in range(forward)]
        crossed = tuple(spokes[(i + 1 + k) % n] for k in range(forward - 1))
        first, last = a, b
    else:
        fan = [ring[(j + 1 + k) % n][0] for k in range(n - forward)]
        crossed = tuple(spokes[(j + 1 + k) % n] for k in range(n - forward - 1))
        first, last = b, a
    if any(f not in members for f in fan):
        return None
    return {first: fan[0], last: fan[-1]}, crossed


def _fine_graph(mesh: IntrinsicMesh, faces: np.ndarray, flagged_edges: Set[int]) -> nx.Graph:
    """
    표시된 변의 중점을 노드로 하는 그래프

    같은 면의 두 변은 면 안에서, 면을 공유하지 않고 꼭짓점만 공유하는 두 변은
    꼭짓점 주위 부채꼴을 따라 잇는다. 간선 속성 near 는 끝 노드마다 간선이 들어가는 면,
    crossed 는 부채꼴이 가로지른 변이다.
    """
    coords = mesh.face_coords
    members = set(faces.tolist())
    graph = nx.Graph()
    for e in sorted(flagged_edges):
        graph.add_node(e, point=_midpoint(mesh, e))
    for face in faces.tolist():
        sides = [s for s in range(3) if int(mesh.face_edges[face, s]) in flagged_edges]
        for i in range(len(sides)):
            for j in range(i + 1, len(sides)):
                s, t = sides[i], sides[j]
                a, b = int(mesh.face_edges[face, s]), int(mesh.face_edges[face, t])
                mid_s = (coords[face, s] + coords[face, (s + 1) % 3]) / 2.0
                mid_t = (coords[face, t] + coords[face, (t + 1) % 3]) / 2.0
                w = float(np.linalg.norm(mid_s - mid_t))
                if not graph.has_edge(a, b) or w < graph.edges[a, b]["length"]:
                    graph.add_edge(a, b, length=w, near={a: face, b: face}, crossed=())

    by_vertex: Dict[int, List[int]] = {}
    for e in flagged_edges:
        for v in mesh.edges[e].tolist():
            by_vertex.setdefault(int(v), []).append(e)
    for vertex, incident in sorted(by_vertex.items()):
        incident.sort()
        for i in range(len(incident)):
            for j in range(i + 1, len(incident)):
                a, b = incident[i], incident[j]
                if graph.has_edge(a, b):
                    continue
                link = _fan_link(mesh, vertex, a, b, members)
                if link is None:
                    continue
                near, crossed = link
                w = 0.5 * float(mesh.edge_lengths[a] + mesh.edge_lengths[b])
                graph.add_edge(a, b, length=w, near=near, crossed=crossed)
    return graph


def _component_length(graph: nx.Graph, nodes: Iterable[int]) -> float:
    return float(sum(d["length"] for _, _, d in graph.subgraph(nodes).edges(data=True)))


def _join_components(
    graph: nx.Graph,
    mesh: IntrinsicMesh,
    faces: np.ndarray,
    tolerances: Tolerances,
) -> None:
    """작은 잡음 성분을 버리고 남은 성분들을 중점 그래프 최단 경로로 잇기"""
    components = sorted(nx.connected_components(graph), key=lambda c: -_component_length(graph, c))
    if len(components) <= 1:
        return
    for comp in components[1:]:
        if _component_length(graph, comp) < tolerances.spur_length:
            graph.remove_nodes_from(comp)
    components = sorted(nx.connected_components(graph), key=lambda c: -_component_length(graph, c))
    if len(components) <= 1:
        return

    matrix, face_of, length_of = _midpoint_graph(mesh, faces)
    csr = matrix.tocsr()
    membership = {n: i for i, comp in enumerate(components) for n in comp}
    main = set(components[0])
    while True:
        others = [n for n in graph.nodes if n not in main]
        if not others:
            break
        dist, pred = dijkstra(
            csr, directed=False, indices=sorted(main), min_only=True, return_predecessors=True
        )
        target = min(others, key=lambda n: (dist[n], n))
        if not np.isfinite(dist[target]):
            logger.debug("cut locus component unreachable inside domain, dropped")
            graph.remove_nodes_from([n for n in others if membership.get(n) == membership.get(target)])
            continue
        node = target
        while node not in main:
            prev = int(pred[node])
            key = (min(prev, node), max(prev, node))
            for endpoint in (prev, node):
                if endpoint not in graph:
                    graph.add_node(endpoint, point=_midpoint(mesh, endpoint))
            face = face_of[key]
            graph.add_edge(prev, node, length=length_of[key], near={prev: face, node: face}, crossed=())
            node = prev
        main = set(nx.node_connected_component(graph, target))


def _cycle_class(graph: nx.Graph, cycle: List[int], loops) -> np.ndarray:
    """순환이 가로지르는 변의 생성원 교차 패리티"""
    crossed: List[int] = []
    n = len(cycle)
    for i, node in enumerate(cycle):
        arriving = graph.edges[cycle[i - 1], node]
        leaving = graph.edges[node, cycle[(i + 1) % n]]
        if arriving["near"][node] != leaving["near"][node]:
            crossed.append(node)
        crossed.extend(leaving["crossed"])
    return crossing_parity(crossed, loops)


def _independent_cycles(
    graph: nx.Graph, tree: nx.Graph, loops, wanted: int
) -> List[Tuple[int, int]]:
    """신장 나무에 더할 호몰로지적으로 독립인 비나무 간선"""
    if wanted <= 0:
        return []
    candidates = []
    for u, v, data in graph.edges(data=True):
        if tree.has_edge(u, v):
            continue
        route = nx.shortest_path(tree, v, u, weight="length")
        length = nx.path_weight(tree, route, weight="length") + data["length"]
        candidates.append((length, u, v, route))
    candidates.sort(key=lambda c: (c[0], min(c[1], c[2]), max(c[1], c[2])))

    basis: Dict[int, int] = {}
    chosen: List[Tuple[int, int]] = []
    for _, u, v, route in candidates:
        vector = _cycle_class(graph, route, loops)
        bits = int("".join(str(int(b)) for b in vector) or "0", 2)
        # GF(2) 소거
        while bits:
            top = bits.bit_length() - 1
            if top not in basis:
                basis[top] = bits
                chosen.append((u, v))
                break
            bits ^= basis[top]
        if len(chosen) >= wanted:
            break
    return chosen


def _prune_spurs(graph: nx.Graph, spur_length: float) -> None:
    """갈림 노드에서 끝나는 짧은 가지 제거"""
    changed = True
    while changed:
        changed = False
        for leaf in [n for n in graph.nodes if graph.degree[n] == 1]:
            if leaf not in graph or graph.degree[leaf] != 1:
                continue
            branch = [leaf]
            length = 0.0
            prev, node = None, leaf
            while True:
                nxt = [m for m in graph.neighbors(node) if m != prev]
                if not nxt:
                    node = None
                    break
                length += graph.edges[node, nxt[0]]["length"]
                prev, node = node, nxt[0]
                if graph.degree[node] != 2:
                    break
                branch.append(node)
            if node is None or graph.degree[node] < 3:
                continue
            if length < spur_length:
                graph.remove_nodes_from(branch)
                changed = True


def _collapse_short(graph: nx.Graph, spur_length: float) -> None:
    """갈림 없는 짧은 나무는 가장 먼 노드 하나로"""
    if graph.number_of_nodes() <= 1 or not nx.is_tree(graph):
        return
    if any(graph.degree[n] >= 3 for n in graph.nodes):
        return
    total = _component_length(graph, graph.nodes)
    if total >= spur_length:
        return
    keep = max(graph.nodes, key=lambda n: (graph.nodes[n]["distance"], -n))
    graph.remove_nodes_from([n for n in list(graph.nodes) if n != keep])


def _skeleton(graph: nx.Graph) -> nx.Graph:
    """차수 ≠ 2 노드와 그 사이 다각선"""
    skeleton = nx.MultiGraph()
    anchors = {n for n in graph.nodes if graph.degree[n] != 2}
    for component in nx.connected_components(graph):
        if not anchors & component:
            anchors.add(max(component, key=lambda n: (graph.nodes[n]["distance"], -n)))
    for n in anchors:
        skeleton.add_node(n)
    seen: Set[Tuple[int, int]] = set()
    for start in sorted(anchors):
        for first in sorted(graph.neighbors(start)):
            if (min(start, first), max(start, first)) in seen:
                continue
            polyline = [start]
            length = 0.0
            prev, node = start, first
            while True:
                seen.add((min(prev, node), max(prev, node)))
                length += graph.edges[prev, node]["length"]
                polyline.append(node)
                if node in anchors:
                    break
                prev, node = node, next(m for m in graph.neighbors(node) if m != prev)
            skeleton.add_edge(start, node, polyline=polyline, length=length)
    return skeleton


def _label_multiplicity(graph: nx.Graph) -> None:
    for n in graph.nodes:
        degree = graph.degree[n]
        graph.nodes[n]["multiplicity"] = None if degree == 0 else (1 if degree == 1 else degree)


def _fallback(
    mesh: IntrinsicMesh, source: SurfacePoint, field_x: DistanceField, domain: DomainKey
) -> CutLocusGraph:
    distances = np.where(np.isfinite(field_x.distance), field_x.distance, -np.inf)
    vertex = int(np.argmax(distances))
    node = mesh.edge_count + vertex
    fine = nx.Graph()
    fine.add_node(node, point=mesh.vertex_point(vertex), distance=float(distances[vertex]), multiplicity=None)
    skeleton = nx.MultiGraph()
    skeleton.add_node(node)
    logger.warning(f"No cut locus edges detected, falling back to farthest vertex {vertex}")
    return CutLocusGraph(source, mesh, fine, skeleton, domain, fallback=True)


def cut_locus(
    mesh: IntrinsicMesh,
    x: SurfacePoint,
    domain: Optional[Iterable[int]] = None,
    settings: Optional[GeodesicSettings] = None,
) -> CutLocusGraph:
    """
    출발점 x 의 절단 궤적 그래프

    Args:
        mesh: 메쉬
        x: 출발점
        domain: 면 부분집합 (변으로 연결되어 있어야 함)
        settings: 설정

    Returns:
        CutLocusGraph (검출된 변이 없으면 가장 먼 꼭짓점 하나, fallback=True)

    Raises:
        EmptyDomain: 빈 면 부분집합
    """
    settings = settings or get_settings()
    tolerances = settings.resolve(mesh)
    key = domain_key(domain)
    field_x = distance_field(mesh, x, domain=key, settings=settings)
    distance = field_x.distance

    angle, gap = edge_disagreement(mesh, distance)
    ends = distance[mesh.edges]
    f = mesh.edge_side[:, 0]
    g = mesh.gluing[f, mesh.edge_side[:, 1], 0]
    inside = np.ones(mesh.edge_count, dtype=bool)
    if key is not None:
        members = np.zeros(mesh.face_count, dtype=bool)
        members[list(key)] = True
        inside = members[f] & members[g]
    flagged = (
        inside
        & np.isfinite(angle)
        & (ends.min(axis=1) >= tolerances.locality_radius)
        & (angle > tolerances.splitting_angle)
        & (gap > tolerances.splitting_threshold)
    )
    flagged_edges = set(np.flatnonzero(flagged).tolist())
    logger.debug(f"cut locus: {len(flagged_edges)} flagged edges")
    if not flagged_edges:
        return _fallback(mesh, x, field_x, key)

    faces = np.arange(mesh.face_count) if key is None else np.array(sorted(key))
    graph = _fine_graph(mesh, faces, flagged_edges)
    _join_components(graph, mesh, faces, tolerances)
    for n in graph.nodes:
        a, b = mesh.edges[n]
        graph.nodes[n]["distance"] = float((distance[a] + distance[b]) / 2.0)

    tree = nx.minimum_spanning_tree(graph, weight="length")
    wanted = 2 - mesh.euler_characteristic if key is None else 0
    loops = tree_cotree_generators(mesh) if wanted > 0 else []
    extra = _independent_cycles(graph, tree, loops, wanted)
    for u, v in extra:
        tree.add_edge(u, v, **graph.edges[u, v])
    for n in tree.nodes:
        tree.nodes[n].update(graph.nodes[n])

    _prune_spurs(tree, tolerances.spur_length)
    _collapse_short(tree, tolerances.spur_length)
    _label_multiplicity(tree)
    skeleton = _skeleton(tree)
    result = CutLocusGraph(x, mesh, tree, skeleton, key)
    result.metadata.update(
        {"flagged_edges": len(flagged_edges), "cycles_added": len(extra), "betti_target": wanted}
    )
    logger.info(
        f"Cut locus: {tree.number_of_nodes()} fine nodes, {skeleton.number_of_nodes()} skeleton "
        f"nodes, betti {result.betti_number}"
    )
    return result
