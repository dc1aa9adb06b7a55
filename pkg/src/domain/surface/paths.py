# -*- coding: utf-8 -*-
"""
곡면 위 꺾은선 경로 도우미
"""
import bisect
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.core.exceptions import InvalidSurfacePoint
from src.core.models.geometry import GeodesicPath, PathKind, SurfacePoint
from src.domain.surface.mesh import IntrinsicMesh


def segment_lengths(mesh: IntrinsicMesh, path: GeodesicPath) -> np.ndarray:
    """각 선분의 길이"""
    return np.array(
        [
            mesh.segment_length(path.points[j], path.points[j + 1], face)
            for j, face in enumerate(path.faces)
        ]
    )


def path_length(mesh: IntrinsicMesh, path: GeodesicPath) -> float:
    """펼친 선분 길이의 합"""
    return float(segment_lengths(mesh, path).sum()) if path.faces else 0.0


def make_path(
    mesh: IntrinsicMesh,
    points: Sequence[SurfacePoint],
    faces: Optional[Sequence[int]] = None,
    kind: PathKind = PathKind.OPEN,
) -> GeodesicPath:
    """
    점 목록으로 경로 생성 (선분 면은 주어지지 않으면 공통 면으로 결정)

    Raises:
        InvalidSurfacePoint: 이웃한 두 점이 공통 면에 없을 때
    """
    points = [mesh.check_point(p) for p in points]
    if faces is None:
        chosen: List[int] = []
        for a, b in zip(points[:-1], points[1:]):
            face = mesh.common_face(a, b)
            if face is None:
                raise InvalidSurfacePoint(
                    f"Consecutive points in faces {a.face} and {b.face} share no face"
                )
            chosen.append(face)
        faces = chosen
    path = GeodesicPath(points=list(points), faces=list(faces), kind=kind)
    path.length = path_length(mesh, path)
    return path


def constant_path(point: SurfacePoint, kind: PathKind = PathKind.OPEN) -> GeodesicPath:
    """길이 0 의 점 경로"""
    return GeodesicPath(points=[point], faces=[], kind=kind, length=0.0, straightness_defect=0.0)


def _cumulative(mesh: IntrinsicMesh, path: GeodesicPath) -> np.ndarray:
    return np.concatenate([[0.0], np.cumsum(segment_lengths(mesh, path))])


def point_at(mesh: IntrinsicMesh, path: GeodesicPath, s: float) -> Tuple[SurfacePoint, int]:
    """
    호 길이 s 위치의 점

    Returns:
        (점, 점이 놓인 선분 번호)
    """
    if not path.faces:
        return path.start, 0
    return _point_at(mesh, path, _cumulative(mesh, path), s)


def _point_at(
    mesh: IntrinsicMesh, path: GeodesicPath, cumulative: np.ndarray, s: float
) -> Tuple[SurfacePoint, int]:
    total = cumulative[-1]
    s = min(max(s, 0.0), total)
    if s <= 0.0:
        return path.start, 0
    if s >= total:
        return path.end, len(path.faces) - 1
    j = min(bisect.bisect_right(cumulative, s) - 1, len(path.faces) - 1)
    seg = cumulative[j + 1] - cumulative[j]
    t = 0.0 if seg <= 0 else (s - cumulative[j]) / seg
    face = path.faces[j]
    a = mesh.express_in(path.points[j], face)
    b = mesh.express_in(path.points[j + 1], face)
    return SurfacePoint(face, tuple((1.0 - t) * a + t * b)), j


def subpath(mesh: IntrinsicMesh, path: GeodesicPath, s0: float, s1: float) -> GeodesicPath:
    """호 길이 구간 [s0, s1] 의 부분 경로"""
    if s1 < s0:
        raise ValueError("subpath needs s0 <= s1")
    if not path.faces:
        return constant_path(path.start)
    return _subpath(mesh, path, _cumulative(mesh, path), s0, s1)


def _subpath(
    mesh: IntrinsicMesh, path: GeodesicPath, cumulative: np.ndarray, s0: float, s1: float
) -> GeodesicPath:
    start, j0 = _point_at(mesh, path, cumulative, s0)
    end, j1 = _point_at(mesh, path, cumulative, s1)
    if j0 == j1:
        points = [start, end]
        faces = [path.faces[j0]]
    else:
        points = [start] + list(path.points[j0 + 1 : j1 + 1]) + [end]
        faces = list(path.faces[j0 : j1 + 1])
    result = GeodesicPath(points=points, faces=faces, kind=PathKind.OPEN)
    result.length = max(float(min(s1, cumulative[-1]) - max(s0, 0.0)), 0.0)
    return result


def midpoint_split(mesh: IntrinsicMesh, path: GeodesicPath) -> Tuple[GeodesicPath, GeodesicPath]:
    """길이 절반에서 두 경로로 나누기"""
    half = path.length / 2.0
    return subpath(mesh, path, 0.0, half), subpath(mesh, path, half, path.length)


def split_at(mesh: IntrinsicMesh, path: GeodesicPath, stations: Sequence[float]) -> List[GeodesicPath]:
    """
    오름차순 호 길이 지점들에서 경로를 나눈 조각들

    첫 조각은 path.start 에서, 마지막 조각은 path.end 에서 끝난다.
    """
    if not path.faces:
        return [constant_path(path.start)]
    cumulative = _cumulative(mesh, path)
    bounds = [0.0] + [float(s) for s in stations] + [float(cumulative[-1])]
    pieces = [_subpath(mesh, path, cumulative, a, b) for a, b in zip(bounds[:-1], bounds[1:])]
    # 조각 경계는 같은 점 객체를 공유
    for left, right in zip(pieces[:-1], pieces[1:]):
        right.points[0] = left.points[-1]
    return pieces


def rebase_loop(mesh: IntrinsicMesh, loop: GeodesicPath, s: float) -> GeodesicPath:
    """닫힌 경로의 기준점을 호 길이 s 위치로 옮기기"""
    if not loop.faces or s <= 0.0 or s >= loop.length:
        return loop
    tail, head = split_at(mesh, loop, [s])
    if tail.is_constant or head.is_constant:
        return loop
    return head.concatenate(tail, kind=PathKind.LOOP)


def sample_points(mesh: IntrinsicMesh, path: GeodesicPath, count: int) -> List[SurfacePoint]:
    """호 길이로 균등한 count 개의 점 (양 끝 포함)"""
    if count < 2 or not path.faces:
        return [path.start] * max(count, 1)
    cumulative = _cumulative(mesh, path)
    return [
        _point_at(mesh, path, cumulative, float(s))[0]
        for s in np.linspace(0.0, cumulative[-1], count)
    ]


def resample_positions(mesh: IntrinsicMesh, path: GeodesicPath, count: int) -> Optional[np.ndarray]:
    """호 길이 균등 표본의 위치 배열 (위치 정보가 없으면 None)"""
    return mesh.positions_of(sample_points(mesh, path, count))
