# -*- coding: utf-8 -*-
"""
내재 삼각분할 메쉬 - 변 길이가 기하의 기준이고 임베딩은 장식이다
"""
import hashlib
import logging
import math
from functools import cached_property
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from src.core.exceptions import (
    DegenerateFace,
    InvalidSurfacePoint,
    NonManifoldEdge,
    NonOrientable,
    UnsupportedTopology,
)
from src.core.models.geometry import BARYCENTRIC_TOLERANCE, SurfacePoint

logger = logging.getLogger(__name__)

# 삼각 부등식 상대 여유
TRIANGLE_MARGIN = 1e-9
# 같은 변을 공유하는 두 면이 보고한 길이의 허용 상대 차이
LENGTH_AGREEMENT = 1e-9

Corner = Tuple[int, int]


def place_third(p: np.ndarray, q: np.ndarray, rp: float, rq: float) -> np.ndarray:
    """
    p→q 의 왼쪽에 |c-p| = rp, |c-q| = rq 인 점 c 배치

    Args:
        p: 시작점 (2D)
        q: 끝점 (2D)
        rp: p 까지의 거리
        rq: q 까지의 거리

    Returns:
        세 번째 점 좌표
    """
    d_vec = q - p
    d = float(math.hypot(d_vec[0], d_vec[1]))
    e = d_vec / d
    x = (rp * rp - rq * rq + d * d) / (2.0 * d)
    y = math.sqrt(max(rp * rp - x * x, 0.0))
    n = np.array([-e[1], e[0]])
    return p + x * e + y * n


def barycentric_2d(corners: np.ndarray, point: np.ndarray) -> np.ndarray:
    """2D 삼각형에서의 무게중심 좌표"""
    a, b, c = corners
    v0 = b - a
    v1 = c - a
    v2 = point - a
    den = v0[0] * v1[1] - v1[0] * v0[1]
    w1 = (v2[0] * v1[1] - v1[0] * v2[1]) / den
    w2 = (v0[0] * v2[1] - v2[0] * v0[1]) / den
    return np.array([1.0 - w1 - w2, w1, w2])


def _cross2(a: np.ndarray, b: np.ndarray) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


class IntrinsicMesh:
    """
    닫힌 향 붙은 삼각분할 곡면

    면의 변 s 는 코너 s 에서 코너 s+1 로 향하며 길이는 face_lengths[f, s] 이다.
    gluing[f, s] 는 변 (f, s) 와 붙어 있는 다른 면의 변 (g, s') 이다.
    생성 후에는 배열이 읽기 전용이며 모든 파생량은 지연 계산된다.
    """

    def __init__(
        self,
        faces: np.ndarray,
        face_lengths: np.ndarray,
        embedding: Optional[np.ndarray] = None,
        uv: Optional[np.ndarray] = None,
        periods: Optional[Tuple[float, float]] = None,
        kind: str = "custom",
        params: Optional[Dict[str, float]] = None,
    ):
        faces = np.asarray(faces, dtype=np.int64)
        face_lengths = np.asarray(face_lengths, dtype=np.float64)
        if faces.ndim != 2 or faces.shape[1] != 3 or faces.shape[0] == 0:
            raise ValueError("faces must be a non-empty (F, 3) array")
        if face_lengths.shape != faces.shape:
            raise ValueError("face_lengths must match the faces array shape")

        self.kind = kind
        self.params: Dict[str, float] = dict(params or {})
        self.periods = None if periods is None else (float(periods[0]), float(periods[1]))

        self._validate_vertex_ids(faces)
        edges, face_edges, gluing = self._build_connectivity(faces)
        edge_lengths = self._reconcile_lengths(faces, face_lengths, face_edges, edges)

        self.faces = faces
        self.edges = edges
        self.face_edges = face_edges
        self.gluing = gluing
        self.edge_lengths = edge_lengths
        self.face_lengths = edge_lengths[face_edges]
        self.embedding = None if embedding is None else np.asarray(embedding, dtype=np.float64)
        self.uv = None if uv is None else np.asarray(uv, dtype=np.float64)

        for array in (self.faces, self.edges, self.face_edges, self.gluing,
                      self.edge_lengths, self.face_lengths):
            array.setflags(write=False)
        if self.embedding is not None:
            self.embedding.setflags(write=False)
        if self.uv is not None:
            self.uv.setflags(write=False)

        self._check_triangles()
        self._check_topology()
        self._one_rings: Dict[int, List[Corner]] = {}
        logger.debug(
            f"Built mesh kind={kind} V={self.vertex_count} E={self.edge_count} "
            f"F={self.face_count} chi={self.euler_characteristic} h={self.max_edge_length:.4g}"
        )

    # ------------------------------------------------------------------
    # 검증
    # ------------------------------------------------------------------

    @staticmethod
    def _validate_vertex_ids(faces: np.ndarray) -> None:
        if faces.min() < 0:
            raise ValueError("vertex ids must be non-negative")
        used = np.unique(faces)
        if used.size != faces.max() + 1:
            raise ValueError("vertex ids must be dense (0..V-1 all referenced)")
        repeated = (faces[:, 0] == faces[:, 1]) | (faces[:, 1] == faces[:, 2]) | (
            faces[:, 2] == faces[:, 0]
        )
        if repeated.any():
            f = int(np.flatnonzero(repeated)[0])
            raise DegenerateFace(f"Face {f} repeats a vertex: {faces[f].tolist()}", face=f)

    @staticmethod
    def _build_connectivity(faces: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        n_faces = faces.shape[0]
        tail = faces.reshape(-1)
        head = np.roll(faces, -1, axis=1).reshape(-1)
        keys = np.stack([np.minimum(tail, head), np.maximum(tail, head)], axis=1)
        edges, inverse, counts = np.unique(keys, axis=0, return_inverse=True, return_counts=True)
        inverse = inverse.reshape(-1)

        bad = np.flatnonzero(counts != 2)
        if bad.size:
            e = int(bad[0])
            raise NonManifoldEdge(
                f"Edge {tuple(edges[e].tolist())} is shared by {int(counts[e])} faces",
                edge=tuple(edges[e].tolist()),
                face_count=int(counts[e]),
            )

        # 두 반변의 방향이 같으면 방향 불일치
        directed = np.stack([tail, head], axis=1)
        _, directed_counts = np.unique(directed, axis=0, return_counts=True)
        if (directed_counts > 1).any():
            order = np.lexsort((head, tail))
            dup = directed[order]
            same = np.flatnonzero((dup[1:] == dup[:-1]).all(axis=1))
            edge = tuple(sorted(dup[same[0]].tolist()))
            raise NonOrientable(f"Edge {edge} is traversed twice in the same direction", edge=edge)

        order = np.argsort(inverse, kind="stable").reshape(-1, 2)
        first, second = order[:, 0], order[:, 1]
        gluing = np.empty((n_faces, 3, 2), dtype=np.int64)
        gluing[first // 3, first % 3, 0] = second // 3
        gluing[first // 3, first % 3, 1] = second % 3
        gluing[second // 3, second % 3, 0] = first // 3
        gluing[second // 3, second % 3, 1] = first % 3
        return edges, inverse.reshape(n_faces, 3), gluing

    @staticmethod
    def _reconcile_lengths(
        faces: np.ndarray, face_lengths: np.ndarray, face_edges: np.ndarray, edges: np.ndarray
    ) -> np.ndarray:
        if not np.isfinite(face_lengths).all() or (face_lengths <= 0).any():
            f = int(np.flatnonzero(~(face_lengths > 0).all(axis=1))[0])
            raise DegenerateFace(f"Face {f} has a non-positive edge length", face=f)
        flat_edges = face_edges.reshape(-1)
        flat_lengths = face_lengths.reshape(-1)
        sums = np.bincount(flat_edges, weights=flat_lengths, minlength=edges.shape[0])
        lengths = sums / 2.0
        spread = np.abs(flat_lengths - lengths[flat_edges])
        if (spread > LENGTH_AGREEMENT * lengths[flat_edges]).any():
            k = int(np.argmax(spread))
            raise ValueError(
                f"Edge {tuple(edges[flat_edges[k]].tolist())} has inconsistent lengths across faces"
            )
        return lengths

    def _check_triangles(self) -> None:
        l = self.face_lengths
        perimeter = l.sum(axis=1)
        for s in range(3):
            a, b, c = l[:, s], l[:, (s + 1) % 3], l[:, (s + 2) % 3]
            slack = a + b - c
            bad = np.flatnonzero(slack <= TRIANGLE_MARGIN * perimeter)
            if bad.size:
                f = int(bad[0])
                raise DegenerateFace(
                    f"Face {f} violates the strict triangle inequality: {l[f].tolist()}", face=f
                )

    def _check_topology(self) -> None:
        n = self.face_count
        rows = np.repeat(np.arange(n), 3)
        cols = self.gluing[:, :, 0].reshape(-1)
        adjacency = coo_matrix((np.ones(rows.size), (rows, cols)), shape=(n, n))
        n_components, _ = connected_components(adjacency, directed=False)
        if n_components != 1:
            raise UnsupportedTopology(f"Mesh has {n_components} connected components")
        chi = self.euler_characteristic
        if chi != 2 and (chi > 0 or chi % 2 != 0):
            raise UnsupportedTopology(
                f"Euler characteristic {chi} is not supported", euler_characteristic=chi
            )

    # ------------------------------------------------------------------
    # 조합 정보
    # ------------------------------------------------------------------

    @property
    def vertex_count(self) -> int:
        return int(self.faces.max()) + 1

    @property
    def face_count(self) -> int:
        return int(self.faces.shape[0])

    @property
    def edge_count(self) -> int:
        return int(self.edges.shape[0])

    @property
    def euler_characteristic(self) -> int:
        return self.vertex_count - self.edge_count + self.face_count

    @property
    def genus(self) -> int:
        return (2 - self.euler_characteristic) // 2

    @property
    def is_sphere(self) -> bool:
        return self.euler_characteristic == 2

    @cached_property
    def fingerprint(self) -> str:
        """메쉬 식별 해시"""
        digest = hashlib.sha1()
        digest.update(self.faces.tobytes())
        digest.update(np.round(self.edge_lengths, 12).tobytes())
        return digest.hexdigest()

    @cached_property
    def vertex_corner(self) -> np.ndarray:
        """꼭짓점마다 하나의 (면, 코너)"""
        flat = self.faces.reshape(-1)
        corner = np.full((self.vertex_count, 2), -1, dtype=np.int64)
        order = np.arange(flat.size)[::-1]
        corner[flat[order], 0] = order // 3
        corner[flat[order], 1] = order % 3
        return corner

    @cached_property
    def edge_side(self) -> np.ndarray:
        """변마다 하나의 (면, 변 번호)"""
        flat = self.face_edges.reshape(-1)
        result = np.empty((self.edge_count, 2), dtype=np.int64)
        order = np.arange(flat.size)[::-1]
        result[flat[order], 0] = order // 3
        result[flat[order], 1] = order % 3
        return result

    def other_side(self, face: int, side: int) -> Tuple[int, int]:
        """붙어 있는 반대편 (면, 변)"""
        g, s = self.gluing[face, side]
        return int(g), int(s)

    def ccw_corner(self, face: int, corner: int) -> Corner:
        """꼭짓점 주위 반시계 방향 다음 코너"""
        g, s = self.other_side(face, (corner + 2) % 3)
        return g, s

    def cw_corner(self, face: int, corner: int) -> Corner:
        """꼭짓점 주위 시계 방향 다음 코너"""
        g, s = self.other_side(face, corner)
        return g, (s + 1) % 3

    def one_ring(self, vertex: int) -> List[Corner]:
        """꼭짓점 주위의 코너를 반시계 방향 순서로"""
        ring = self._one_rings.get(vertex)
        if ring is not None:
            return ring
        start = (int(self.vertex_corner[vertex, 0]), int(self.vertex_corner[vertex, 1]))
        ring = [start]
        current = self.ccw_corner(*start)
        while current != start:
            ring.append(current)
            current = self.ccw_corner(*current)
            if len(ring) > self.face_count:
                raise NonOrientable(f"One-ring of vertex {vertex} does not close")
        self._one_rings[vertex] = ring
        return ring

    def corner_of(self, face: int, vertex: int) -> int:
        """면에서 꼭짓점의 코너 번호"""
        hits = np.flatnonzero(self.faces[face] == vertex)
        if hits.size == 0:
            raise InvalidSurfacePoint(f"Vertex {vertex} is not a corner of face {face}")
        return int(hits[0])

    def side_between(self, face: int, other: int) -> Optional[int]:
        """face 에서 other 와 붙어 있는 변 번호"""
        for s in range(3):
            if int(self.gluing[face, s, 0]) == other:
                return s
        return None

    @cached_property
    def edge_graph(self) -> nx.Graph:
        """메쉬 변 그래프 (가중치 = 변 길이)"""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.vertex_count))
        graph.add_weighted_edges_from(
            (int(a), int(b), float(w)) for (a, b), w in zip(self.edges, self.edge_lengths)
        )
        return graph

    # ------------------------------------------------------------------
    # 기하량
    # ------------------------------------------------------------------

    @cached_property
    def max_edge_length(self) -> float:
        """해상도 h"""
        return float(self.edge_lengths.max())

    @property
    def h(self) -> float:
        return self.max_edge_length

    @cached_property
    def corner_angles(self) -> np.ndarray:
        """(F, 3) 코너 각 - 코너 c 는 변 c 와 변 c+2 사이"""
        l = self.face_lengths
        angles = np.empty_like(l)
        for c in range(3):
            a = l[:, c]
            b = l[:, (c + 2) % 3]
            opposite = l[:, (c + 1) % 3]
            cos = (a * a + b * b - opposite * opposite) / (2.0 * a * b)
            angles[:, c] = np.arccos(np.clip(cos, -1.0, 1.0))
        return angles

    @cached_property
    def cone_angles(self) -> np.ndarray:
        """꼭짓점 원뿔각"""
        return np.bincount(
            self.faces.reshape(-1),
            weights=self.corner_angles.reshape(-1),
            minlength=self.vertex_count,
        )

    @cached_property
    def angle_defects(self) -> np.ndarray:
        """각 결손 2π - Θ(v)"""
        return 2.0 * np.pi - self.cone_angles

    @property
    def gauss_bonnet_residual(self) -> float:
        """|Σ 결손 - 2πχ|"""
        return float(abs(self.angle_defects.sum() - 2.0 * np.pi * self.euler_characteristic))

    @cached_property
    def face_areas(self) -> np.ndarray:
        """면 넓이 (수치적으로 안정한 헤론 공식)"""
        l = np.sort(self.face_lengths, axis=1)[:, ::-1]
        a, b, c = l[:, 0], l[:, 1], l[:, 2]
        product = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c))
        return 0.25 * np.sqrt(np.maximum(product, 0.0))

    @property
    def area(self) -> float:
        return float(self.face_areas.sum())

    @cached_property
    def vertex_areas(self) -> np.ndarray:
        """꼭짓점 중심 넓이 (인접 면 넓이의 1/3 합)"""
        return np.bincount(
            self.faces.reshape(-1),
            weights=np.repeat(self.face_areas / 3.0, 3),
            minlength=self.vertex_count,
        )

    @cached_property
    def max_curvature(self) -> float:
        """가우스 곡률 최댓값 추정 (각 결손 / 꼭짓점 넓이)"""
        return float(max((self.angle_defects / self.vertex_areas).max(), 0.0))

    @cached_property
    def face_coords(self) -> np.ndarray:
        """(F, 3, 2) 각 면의 표준 평면 배치 - 코너 0 원점, 코너 1 은 +x 축"""
        l = self.face_lengths
        coords = np.zeros((self.face_count, 3, 2))
        coords[:, 1, 0] = l[:, 0]
        x = (l[:, 2] ** 2 - l[:, 1] ** 2 + l[:, 0] ** 2) / (2.0 * l[:, 0])
        coords[:, 2, 0] = x
        coords[:, 2, 1] = np.sqrt(np.maximum(l[:, 2] ** 2 - x ** 2, 0.0))
        return coords

    # ------------------------------------------------------------------
    # 점 연산
    # ------------------------------------------------------------------

    def vertex_point(self, vertex: int) -> SurfacePoint:
        """꼭짓점 위의 점"""
        if not 0 <= vertex < self.vertex_count:
            raise InvalidSurfacePoint(f"Vertex {vertex} out of range")
        f, c = self.vertex_corner[vertex]
        bary = [0.0, 0.0, 0.0]
        bary[int(c)] = 1.0
        return SurfacePoint(int(f), tuple(bary))

    def check_point(self, point: SurfacePoint) -> SurfacePoint:
        """면 번호 범위 검사"""
        if not 0 <= point.face < self.face_count:
            raise InvalidSurfacePoint(f"Face {point.face} out of range for mesh with {self.face_count} faces")
        return point

    def point_vertex(self, point: SurfacePoint) -> Optional[int]:
        """꼭짓점 위의 점이면 꼭짓점 번호"""
        corner = point.corner
        return None if corner is None else int(self.faces[point.face, corner])

    def point_side(self, point: SurfacePoint) -> Optional[int]:
        """변 내부의 점이면 해당 변 번호 (면 기준)"""
        support = point.support
        if len(support) != 2:
            return None
        a, b = support
        return a if (a + 1) % 3 == b else b

    def faces_containing(self, point: SurfacePoint) -> List[int]:
        """점을 포함하는 모든 면"""
        vertex = self.point_vertex(point)
        if vertex is not None:
            return [f for f, _ in self.one_ring(vertex)]
        side = self.point_side(point)
        if side is not None:
            return [point.face, self.other_side(point.face, side)[0]]
        return [point.face]

    def express_in(self, point: SurfacePoint, face: int) -> np.ndarray:
        """
        점을 다른 면의 무게중심 좌표로 표현

        Args:
            point: 곡면 위의 점
            face: 대상 면 (점을 포함해야 함)

        Returns:
            길이 3 배열

        Raises:
            InvalidSurfacePoint: 대상 면이 점을 포함하지 않을 때
        """
        if point.face == face:
            return np.asarray(point.barycentric)
        result = np.zeros(3)
        target = self.faces[face]
        for corner in point.support:
            vertex = self.faces[point.face, corner]
            hits = np.flatnonzero(target == vertex)
            if hits.size == 0:
                raise InvalidSurfacePoint(
                    f"Point in face {point.face} does not lie on face {face}"
                )
            result[hits[0]] = point.barycentric[corner]
        return result

    def in_face(self, point: SurfacePoint, face: int) -> SurfacePoint:
        """다른 면 기준의 같은 점"""
        if point.face == face:
            return point
        return SurfacePoint(face, tuple(self.express_in(point, face)))

    def local_position(self, point: SurfacePoint, face: Optional[int] = None) -> np.ndarray:
        """면 표준 배치에서의 2D 좌표"""
        face = point.face if face is None else face
        return self.express_in(point, face) @ self.face_coords[face]

    def point_from_local(self, face: int, position: np.ndarray) -> SurfacePoint:
        """면 표준 배치 좌표에서 점 생성 (경계 밖 작은 오차는 잘라냄)"""
        bary = barycentric_2d(self.face_coords[face], np.asarray(position, dtype=float))
        bary = np.maximum(bary, 0.0)
        return SurfacePoint(face, tuple(bary / bary.sum()))

    def common_face(self, a: SurfacePoint, b: SurfacePoint) -> Optional[int]:
        """두 점을 모두 포함하는 면 (가장 작은 번호)"""
        candidates = set(self.faces_containing(a)) & set(self.faces_containing(b))
        return min(candidates) if candidates else None

    def segment_length(self, a: SurfacePoint, b: SurfacePoint, face: int) -> float:
        """면 안의 두 점 사이 거리"""
        delta = self.local_position(a, face) - self.local_position(b, face)
        return float(math.hypot(delta[0], delta[1]))

    def same_location(self, a: SurfacePoint, b: SurfacePoint, tol: Optional[float] = None) -> bool:
        """같은 위치인지 검사"""
        tol = 1e-9 * self.max_edge_length if tol is None else tol
        face = self.common_face(a, b)
        if face is None:
            return False
        return self.segment_length(a, b, face) <= tol

    # ------------------------------------------------------------------
    # 임베딩/매개변수 좌표
    # ------------------------------------------------------------------

    def face_uv(self, face: int) -> np.ndarray:
        """주기 경계를 풀어 놓은 면의 uv 코너 좌표"""
        if self.uv is None or self.periods is None:
            raise InvalidSurfacePoint("Mesh has no periodic uv coordinates")
        corners = self.uv[self.faces[face]].copy()
        period = np.asarray(self.periods)
        for c in (1, 2):
            delta = corners[c] - corners[0]
            corners[c] -= period * np.round(delta / period)
        return corners

    def position_of(self, point: SurfacePoint) -> Optional[np.ndarray]:
        """임베딩 xyz 또는 주기 uv 좌표 (없으면 None)"""
        bary = np.asarray(point.barycentric)
        if self.embedding is not None:
            return bary @ self.embedding[self.faces[point.face]]
        if self.uv is not None and self.periods is not None:
            uv = bary @ self.face_uv(point.face)
            return np.mod(uv, np.asarray(self.periods))
        return None

    def positions_of(self, points: Sequence[SurfacePoint]) -> Optional[np.ndarray]:
        """여러 점의 위치 (N, dim)"""
        if not points:
            return None
        if self.embedding is None and (self.uv is None or self.periods is None):
            return None
        return np.array([self.position_of(p) for p in points])

    def ambient_distances(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """위치 배열 사이의 거리 (토러스는 최소 이미지)"""
        delta = np.asarray(a) - np.asarray(b)
        if self.embedding is None and self.periods is not None:
            period = np.asarray(self.periods)
            delta = delta - period * np.round(delta / period)
        return np.linalg.norm(delta, axis=-1)

    @cached_property
    def _vertex_tree(self) -> cKDTree:
        if self.embedding is None:
            raise InvalidSurfacePoint("Mesh has no embedding to locate points in")
        return cKDTree(self.embedding)

    def locate_xyz(self, xyz: Sequence[float]) -> SurfacePoint:
        """
        3D 위치에 가장 가까운 곡면 위의 점

        가장 가까운 꼭짓점을 찾은 뒤 인접 면 평면에 투영한다.
        """
        target = np.asarray(xyz, dtype=float)
        _, vertex = self._vertex_tree.query(target)
        best: Optional[Tuple[float, SurfacePoint]] = None
        for face, _ in self.one_ring(int(vertex)):
            p0, p1, p2 = self.embedding[self.faces[face]]
            e1, e2 = p1 - p0, p2 - p0
            gram = np.array([[e1 @ e1, e1 @ e2], [e1 @ e2, e2 @ e2]])
            rhs = np.array([(target - p0) @ e1, (target - p0) @ e2])
            w1, w2 = np.linalg.solve(gram, rhs)
            bary = np.maximum(np.array([1.0 - w1 - w2, w1, w2]), 0.0)
            bary /= bary.sum()
            residual = float(np.linalg.norm(bary @ self.embedding[self.faces[face]] - target))
            if best is None or residual < best[0] - 1e-15:
                best = (residual, SurfacePoint(face, tuple(bary)))
        assert best is not None
        return best[1]

    def locate_uv(self, uv: Sequence[float]) -> SurfacePoint:
        """주기 uv 좌표의 점"""
        if self.uv is None or self.periods is None:
            raise InvalidSurfacePoint("Mesh has no periodic uv coordinates")
        period = np.asarray(self.periods)
        target = np.mod(np.asarray(uv, dtype=float), period)
        corners = self.uv[self.faces]
        base = corners[:, 0:1, :]
        unwrapped = base + (corners - base) - period * np.round((corners - base) / period)
        for shift in ((0, 0), (-1, 0), (0, -1), (-1, -1), (1, 0), (0, 1), (1, 1), (1, -1), (-1, 1)):
            point = target + np.asarray(shift) * period
            a = unwrapped[:, 0, :]
            v0 = unwrapped[:, 1, :] - a
            v1 = unwrapped[:, 2, :] - a
            v2 = point - a
            den = v0[:, 0] * v1[:, 1] - v1[:, 0] * v0[:, 1]
            w1 = (v2[:, 0] * v1[:, 1] - v1[:, 0] * v2[:, 1]) / den
            w2 = (v0[:, 0] * v2[:, 1] - v2[:, 0] * v0[:, 1]) / den
            w0 = 1.0 - w1 - w2
            inside = np.flatnonzero((w0 >= -1e-12) & (w1 >= -1e-12) & (w2 >= -1e-12))
            if inside.size:
                f = int(inside[0])
                bary = np.maximum(np.array([w0[f], w1[f], w2[f]]), 0.0)
                return SurfacePoint(f, tuple(bary / bary.sum()))
        raise InvalidSurfacePoint(f"uv point {tuple(uv)} is not covered by the mesh")

    def direction_from_uv(self, face: int, direction: Sequence[float]) -> float:
        """uv 방향 벡터를 면 배치 각도로 변환"""
        corners = self.face_uv(face)
        axis = corners[1] - corners[0]
        return float(math.atan2(direction[1], direction[0]) - math.atan2(axis[1], axis[0]))

    def direction_from_vector(self, face: int, vector: Sequence[float]) -> float:
        """3D 접벡터를 면 배치 각도로 변환"""
        if self.embedding is None:
            raise InvalidSurfacePoint("Mesh has no embedding")
        p0, p1, p2 = self.embedding[self.faces[face]]
        e1 = (p1 - p0) / np.linalg.norm(p1 - p0)
        normal = np.cross(p1 - p0, p2 - p0)
        normal /= np.linalg.norm(normal)
        e2 = np.cross(normal, e1)
        v = np.asarray(vector, dtype=float)
        return float(math.atan2(v @ e2, v @ e1))

    def departure_angle(self, vertex: int, face: int, target: np.ndarray) -> float:
        """
        꼭짓점에서 출발하는 방향의 누적 각도 (one-ring 기준 반시계)

        Args:
            vertex: 기준 꼭짓점
            face: 방향이 놓인 면
            target: 그 면 배치에서 방향 위의 한 점

        Returns:
            [0, Θ(v)) 범위의 각도
        """
        total = 0.0
        for f, c in self.one_ring(vertex):
            if f == face and self.faces[f, c] == vertex:
                coords = self.face_coords[f]
                origin = coords[c]
                first = coords[(c + 1) % 3] - origin
                ray = np.asarray(target) - origin
                angle = math.atan2(_cross2(first, ray), float(first @ ray))
                return total + min(max(angle, 0.0), float(self.corner_angles[f, c]))
            total += float(self.corner_angles[f, c])
        raise InvalidSurfacePoint(f"Face {face} is not incident to vertex {vertex}")

    def describe(self) -> Dict[str, Any]:
        """요약 통계"""
        return {
            "kind": self.kind,
            "params": dict(self.params),
            "vertices": self.vertex_count,
            "edges": self.edge_count,
            "faces": self.face_count,
            "euler_characteristic": self.euler_characteristic,
            "max_edge_length": self.max_edge_length,
            "area": self.area,
            "gauss_bonnet_residual": self.gauss_bonnet_residual,
        }


EdgeLengthSource = Union[Mapping[Tuple[int, int], float], np.ndarray, Sequence[Sequence[float]]]


def build_mesh(
    faces: Sequence[Sequence[int]],
    edge_lengths: Optional[EdgeLengthSource] = None,
    embedding: Optional[Sequence[Sequence[float]]] = None,
    **metadata: Any,
) -> IntrinsicMesh:
    """
    면 목록과 계량 정보로 검증된 메쉬 생성

    Args:
        faces: 꼭짓점 번호 삼중쌍 목록
        edge_lengths: {(i, j): 길이} 표 또는 (F, 3) 면-변 길이 배열
        embedding: 꼭짓점별 3D 위치 (edge_lengths 가 없으면 현 길이 사용)
        **metadata: kind, params, uv, periods

    Returns:
        IntrinsicMesh

    Raises:
        NonManifoldEdge: 변이 두 면이 아닌 곳에 속할 때
        DegenerateFace: 삼각 부등식 위반
        NonOrientable: 방향 불일치
    """
    face_array = np.asarray(faces, dtype=np.int64)
    if face_array.ndim != 2 or face_array.shape[0] == 0 or face_array.shape[1] != 3:
        raise ValueError("faces must be a non-empty list of vertex triples")

    tail = face_array
    head = np.roll(face_array, -1, axis=1)
    if edge_lengths is None:
        if embedding is None:
            raise ValueError("either edge_lengths or embedding is required")
        positions = np.asarray(embedding, dtype=np.float64)
        face_lengths = np.linalg.norm(positions[head] - positions[tail], axis=2)
    elif isinstance(edge_lengths, Mapping):
        table = {(min(a, b), max(a, b)): float(v) for (a, b), v in edge_lengths.items()}
        try:
            face_lengths = np.array(
                [[table[(min(a, b), max(a, b))] for a, b in zip(t, hd)]
                 for t, hd in zip(tail.tolist(), head.tolist())]
            )
        except KeyError as e:
            raise ValueError(f"Missing edge length for edge {e.args[0]}")
    else:
        face_lengths = np.asarray(edge_lengths, dtype=np.float64)

    return IntrinsicMesh(
        face_array,
        face_lengths,
        embedding=None if embedding is None else np.asarray(embedding, dtype=np.float64),
        uv=metadata.get("uv"),
        periods=metadata.get("periods"),
        kind=metadata.get("kind", "custom"),
        params=metadata.get("params"),
    )
