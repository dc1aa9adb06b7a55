# -*- coding: utf-8 -*-
"""
면 펼치기에 의한 직선(측지선) 추적
"""
import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from src.core.exceptions import InvalidSurfacePoint, VertexHit
from src.core.models.geometry import GeodesicPath, PathKind, SurfacePoint
from src.domain.surface.mesh import IntrinsicMesh, barycentric_2d

logger = logging.getLogger(__name__)

# 꼭짓점 적중 판정 (h 배수)
VERTEX_HIT_TOL = 1e-9
# 꼭짓점을 피해 옆으로 옮기는 거리 (h 배수)
VERTEX_NUDGE = 1e-7


def _cross(a: np.ndarray, b: np.ndarray) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


def _rotate(v: np.ndarray, angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([c * v[0] - s * v[1], s * v[0] + c * v[1]])


def _heading(v: np.ndarray) -> float:
    return float(math.atan2(v[1], v[0]))


def cross_edge(
    mesh: IntrinsicMesh, face: int, side: int, u: float, direction: np.ndarray
) -> Tuple[int, int, np.ndarray, np.ndarray]:
    """
    면의 변 위 점(매개변수 u)에서 이웃 면으로 넘어가기

    Args:
        face: 현재 면
        side: 넘어가는 변 번호
        u: 코너 side 에서 side+1 방향 매개변수
        direction: 현재 면 배치에서의 방향

    Returns:
        (이웃 면, 이웃 면의 변 번호, 이웃 면 배치에서의 위치, 방향)
    """
    g, s2 = mesh.other_side(face, side)
    coords_f = mesh.face_coords[face]
    coords_g = mesh.face_coords[g]
    bary = np.zeros(3)
    bary[s2] = u
    bary[(s2 + 1) % 3] = 1.0 - u
    position = bary @ coords_g
    edge_f = coords_f[(side + 1) % 3] - coords_f[side]
    edge_g = coords_g[s2] - coords_g[(s2 + 1) % 3]
    rotated = _rotate(direction, _heading(edge_g) - _heading(edge_f))
    return g, s2, position, rotated


def _vertex_start(
    mesh: IntrinsicMesh, point: SurfacePoint, heading: float
) -> Tuple[int, np.ndarray, np.ndarray]:
    """꼭짓점 출발: 방향을 포함하는 쐐기 면 선택"""
    corner = point.corner
    assert corner is not None
    face = point.face
    vertex = int(mesh.faces[face, corner])
    coords = mesh.face_coords[face]
    first_edge = coords[(corner + 1) % 3] - coords[corner]
    phi = (heading - _heading(first_edge)) % (2.0 * math.pi)

    ring = mesh.one_ring(vertex)
    offset = ring.index((face, corner))
    ring = ring[offset:] + ring[:offset]
    cone = float(mesh.cone_angles[vertex])
    phi = phi % cone if phi >= cone else phi
    accumulated = 0.0
    for g, c in ring:
        wedge = float(mesh.corner_angles[g, c])
        if phi < accumulated + wedge or (g, c) == ring[-1]:
            local = min(phi - accumulated, wedge)
            coords_g = mesh.face_coords[g]
            edge = coords_g[(c + 1) % 3] - coords_g[c]
            angle = _heading(edge) + local
            return g, coords_g[c].copy(), np.array([math.cos(angle), math.sin(angle)])
        accumulated += wedge
    raise InvalidSurfacePoint(f"Could not resolve a departure wedge at vertex {vertex}")


def _exit(
    coords: np.ndarray, position: np.ndarray, direction: np.ndarray, entry: Optional[int]
) -> Optional[Tuple[int, float, float]]:
    """광선이 면을 빠져나가는 (변, 거리, 변 매개변수)"""
    best: Optional[Tuple[int, float, float]] = None
    for s in range(3):
        if s == entry:
            continue
        a = coords[s]
        b = coords[(s + 1) % 3]
        edge = b - a
        den = _cross(direction, edge)
        if den <= 1e-300:
            # 평행하거나 면 안쪽으로 들어오는 변
            continue
        t = _cross(a - position, edge) / den
        u = _cross(a - position, direction) / den
        if t < -1e-12 or u < -1e-9 or u > 1.0 + 1e-9:
            continue
        t = max(t, 0.0)
        if best is None or t < best[1]:
            best = (s, t, min(max(u, 0.0), 1.0))
    return best


def trace_straight(
    mesh: IntrinsicMesh,
    start: SurfacePoint,
    direction: float,
    length: float,
    strict: bool = False,
) -> GeodesicPath:
    """
    시작점에서 주어진 방향으로 곧게 length 만큼 추적

    Args:
        mesh: 메쉬
        start: 시작점
        direction: start.face 배치 기준 방향 각도 (라디안)
        length: 추적 길이
        strict: True 이면 꼭짓점 적중 시 VertexHit

    Returns:
        GeodesicPath (metadata["end_heading"] 은 끝 면 배치 기준 방향)

    Raises:
        ValueError: 음수 길이
        VertexHit: strict 모드에서 꼭짓점 적중
    """
    if length < 0:
        raise ValueError("trace length must be non-negative")
    mesh.check_point(start)
    if length == 0:
        return GeodesicPath(
            points=[start], faces=[], kind=PathKind.OPEN, length=0.0,
            straightness_defect=0.0, metadata={"end_heading": direction},
        )

    h = mesh.max_edge_length
    entry: Optional[int] = None
    if start.corner is not None:
        face, position, heading_vec = _vertex_start(mesh, start, direction)
    else:
        face = start.face
        position = mesh.local_position(start)
        heading_vec = np.array([math.cos(direction), math.sin(direction)])
        side = mesh.point_side(start)
        if side is not None:
            coords = mesh.face_coords[face]
            edge = coords[(side + 1) % 3] - coords[side]
            if _cross(edge, heading_vec) < 0.0:
                # 변 바깥쪽을 향하면 이웃 면에서 출발
                u = float(start.barycentric[(side + 1) % 3])
                face, entry, position, heading_vec = cross_edge(mesh, face, side, u, heading_vec)
            else:
                entry = side

    points: List[SurfacePoint] = [start]
    faces: List[int] = []
    remaining = float(length)
    max_steps = 64 * mesh.face_count + int(64 * length / max(mesh.edge_lengths.min(), 1e-12))
    for _ in range(max_steps):
        coords = mesh.face_coords[face]
        hit = _exit(coords, position, heading_vec, entry)
        if hit is None or hit[1] >= remaining:
            end = position + remaining * heading_vec
            bary = np.maximum(barycentric_2d(coords, end), 0.0)
            points.append(SurfacePoint(face, tuple(bary / bary.sum())))
            faces.append(face)
            break

        side, _, u = hit
        edge_length = float(mesh.face_lengths[face, side])
        if min(u, 1.0 - u) * edge_length <= VERTEX_HIT_TOL * h:
            vertex = int(mesh.faces[face, side if u < 0.5 else (side + 1) % 3])
            if strict:
                raise VertexHit(f"Trace hit vertex {vertex}", vertex=vertex)
            nudge = VERTEX_NUDGE * h / edge_length
            u = min(max(u, nudge), 1.0 - nudge)
            logger.debug(f"Trace nudged past vertex {vertex}")

        exit_point = coords[side] + u * (coords[(side + 1) % 3] - coords[side])
        remaining -= float(np.linalg.norm(exit_point - position))
        bary = [0.0, 0.0, 0.0]
        bary[side] = 1.0 - u
        bary[(side + 1) % 3] = u
        points.append(SurfacePoint(face, tuple(bary)))
        faces.append(face)
        face, entry, position, heading_vec = cross_edge(mesh, face, side, u, heading_vec)
        if remaining <= 0.0:
            points[-1] = mesh.in_face(points[-1], face)
            break
    else:
        raise RuntimeError(f"trace did not finish within {max_steps} face crossings")

    path = GeodesicPath(
        points=points, faces=faces, kind=PathKind.OPEN, length=float(length),
        straightness_defect=0.0,
    )
    path.metadata["end_heading"] = _heading(heading_vec)
    path.metadata["end_face"] = face
    return path


def end_direction(path: GeodesicPath) -> Tuple[int, float]:
    """추적 경로 끝의 (면, 방향 각도) - 이어서 추적할 때 사용"""
    face = path.metadata.get("end_face", path.end_face)
    return int(face), float(path.metadata.get("end_heading", 0.0))
