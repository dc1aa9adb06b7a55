# -*- coding: utf-8 -*-
"""
측지선 인증 - 펼친 내부 각이 π 에서 벗어난 정도
"""
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.core.models.geometry import GeodesicPath, SurfacePoint
from src.domain.surface.mesh import IntrinsicMesh
from src.domain.surface.unfolding import straighten, unfold_strip
from src.infrastructure.config.settings import GeodesicSettings, get_settings


@dataclass
class GeodesicCertificate:
    """인증 결과"""
    passed: bool
    max_defect: float
    worst_index: Optional[int] = None
    theta_tol: float = 0.0

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "max_defect": self.max_defect,
            "worst_index": self.worst_index,
            "theta_tol": self.theta_tol,
        }


def _compact(mesh: IntrinsicMesh, path: GeodesicPath) -> Tuple[List[SurfacePoint], List[int]]:
    """길이 0 선분 제거"""
    tol = 1e-12 * mesh.max_edge_length
    points = [path.points[0]]
    faces: List[int] = []
    for j, face in enumerate(path.faces):
        q = path.points[j + 1]
        if mesh.segment_length(points[-1], q, face) <= tol:
            if j == len(path.faces) - 1 and faces:
                points[-1] = q
            continue
        points.append(q)
        faces.append(face)
    return points, faces


def _turn(a: np.ndarray, b: np.ndarray) -> float:
    cross = float(a[0] * b[1] - a[1] * b[0])
    return abs(math.atan2(cross, float(a @ b)))


def corner_defect(
    mesh: IntrinsicMesh,
    before: SurfacePoint,
    at: SurfacePoint,
    after: SurfacePoint,
    face_in: int,
    face_out: int,
) -> float:
    """
    before→at (face_in), at→after (face_out) 두 선분이 이루는 꺾임

    꼭짓점에서는 양쪽 각 중 작은 것이 π 에 못 미치는 정도,
    그 외에는 펼친 평면에서의 방향 변화량이다.
    """
    vertex = mesh.point_vertex(at)
    if vertex is not None:
        theta_in = mesh.departure_angle(vertex, face_in, mesh.local_position(before, face_in))
        theta_out = mesh.departure_angle(vertex, face_out, mesh.local_position(after, face_out))
        cone = float(mesh.cone_angles[vertex])
        alpha = (theta_out - theta_in) % cone
        beta = cone - alpha
        return max(0.0, math.pi - min(alpha, beta))

    if face_in == face_out:
        p0 = mesh.local_position(before, face_in)
        p1 = mesh.local_position(at, face_in)
        p2 = mesh.local_position(after, face_in)
    else:
        strip = unfold_strip(mesh, [face_in, face_out])
        p0 = strip.position(mesh, before, 0)
        p1 = strip.position(mesh, at, 0)
        p2 = strip.position(mesh, after, 1)
    return _turn(p1 - p0, p2 - p1)


def straightness_defects(mesh: IntrinsicMesh, path: GeodesicPath, based: bool = True) -> List[float]:
    """내부 점마다 꺾임 (닫힌 루프이고 based=False 이면 기준점 포함)"""
    points, faces = _compact(mesh, path)
    defects = [
        corner_defect(mesh, points[j - 1], points[j], points[j + 1], faces[j - 1], faces[j])
        for j in range(1, len(points) - 1)
    ]
    if path.is_loop and not based and len(faces) >= 2:
        defects.append(
            corner_defect(mesh, points[-2], points[0], points[1], faces[-1], faces[0])
        )
    return defects


def is_geodesic(
    mesh: IntrinsicMesh,
    path: GeodesicPath,
    theta_tol: Optional[float] = None,
    based: bool = True,
    settings: Optional[GeodesicSettings] = None,
) -> GeodesicCertificate:
    """
    경로가 측지선인지 인증

    Args:
        mesh: 메쉬
        path: 경로
        theta_tol: 허용 꺾임 (없으면 설정의 10h)
        based: 루프일 때 기준점 꺾임을 허용하면 True
        settings: 설정

    Returns:
        GeodesicCertificate (path.straightness_defect 도 갱신됨)
    """
    if theta_tol is None:
        theta_tol = (settings or get_settings()).resolve(mesh).theta_tol
    defects = straightness_defects(mesh, path, based=based) if path.faces else []
    if defects:
        worst = int(np.argmax(defects))
        max_defect = float(defects[worst])
    else:
        worst, max_defect = None, 0.0
    path.straightness_defect = max_defect
    return GeodesicCertificate(
        passed=max_defect <= theta_tol,
        max_defect=max_defect,
        worst_index=None if worst is None else worst + 1,
        theta_tol=float(theta_tol),
    )


def tighten(
    mesh: IntrinsicMesh,
    path: GeodesicPath,
    theta_tol: Optional[float] = None,
    settings: Optional[GeodesicSettings] = None,
) -> Tuple[GeodesicPath, GeodesicCertificate]:
    """곧게 편 뒤 인증"""
    result = straighten(mesh, path)
    return result, is_geodesic(mesh, result, theta_tol=theta_tol, settings=settings)
