# -*- coding: utf-8 -*-
"""
면 띠 펼치기와 깔때기 알고리즘 기반 경로 곧게 펴기

경로가 지나는 면들을 평면에 차례로 펼친 뒤 띠 안의 최단 꺾은선을 구한다.
꺾인 꼭짓점에서 반대편 각이 π 보다 작으면 반대편으로 돌려 다시 펼친다.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.core.exceptions import InvalidSurfacePoint
from src.core.models.geometry import GeodesicPath, PathKind, SurfacePoint
from src.domain.surface.mesh import IntrinsicMesh, place_third

logger = logging.getLogger(__name__)

# 꼭짓점 반대편 돌리기 최대 횟수
DEFAULT_MAX_REROUTES = 256
# 돌리기 판정 각도 여유
REROUTE_ANGLE_TOL = 1e-9


def _cross(a: np.ndarray, b: np.ndarray) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


def _angle_between(a: np.ndarray, b: np.ndarray) -> float:
    return float(math.atan2(abs(_cross(a, b)), float(a @ b)))


# ----------------------------------------------------------------------
# 면 띠
# ----------------------------------------------------------------------


def fan_between(mesh: IntrinsicMesh, vertex: int, first: int, last: int, ccw: bool) -> List[int]:
    """
    꼭짓점 주위로 first 에서 last 까지 도는 면 목록 (양 끝 제외)

    Args:
        vertex: 중심 꼭짓점
        first: 시작 면
        last: 끝 면
        ccw: 반시계 방향이면 True
    """
    ring = [f for f, _ in mesh.one_ring(vertex)]
    if first not in ring or last not in ring:
        raise InvalidSurfacePoint(f"Faces {first}, {last} are not both incident to vertex {vertex}")
    if first == last:
        return []
    n = len(ring)
    i = ring.index(first)
    step = 1 if ccw else -1
    result = []
    for _ in range(n):
        i = (i + step) % n
        if ring[i] == last:
            return result
        result.append(ring[i])
    return result


def shortest_fan(mesh: IntrinsicMesh, vertex: int, first: int, last: int) -> List[int]:
    """두 방향 중 면 수가 적은 쪽 (같으면 반시계)"""
    ccw = fan_between(mesh, vertex, first, last, True)
    cw = fan_between(mesh, vertex, first, last, False)
    return ccw if len(ccw) <= len(cw) else cw


def clean_strip(faces: Sequence[int]) -> List[int]:
    """연속 중복 면과 f→g→f 되돌아감 제거 (첫 면은 유지)"""
    stack: List[int] = []
    for f in faces:
        if stack and stack[-1] == f:
            continue
        if len(stack) >= 2 and stack[-2] == f:
            stack.pop()
            continue
        stack.append(f)
    return stack


def path_strip(mesh: IntrinsicMesh, path: GeodesicPath) -> List[int]:
    """
    경로 선분 면들로부터 변을 공유하는 면 띠 구성

    꼭짓점만 공유하는 두 면 사이는 그 꼭짓점 주위의 짧은 쪽 부채꼴로 채운다.

    Raises:
        InvalidSurfacePoint: 이웃 선분 면이 아무것도 공유하지 않을 때
    """
    if not path.faces:
        return [path.start.face]
    strip = [path.faces[0]]
    for j in range(1, len(path.faces)):
        prev, nxt = strip[-1], path.faces[j]
        if prev == nxt:
            continue
        if mesh.side_between(prev, nxt) is not None:
            strip.append(nxt)
            continue
        vertex = mesh.point_vertex(path.points[j])
        if vertex is None or vertex not in mesh.faces[prev] or vertex not in mesh.faces[nxt]:
            shared = set(mesh.faces[prev].tolist()) & set(mesh.faces[nxt].tolist())
            if not shared:
                raise InvalidSurfacePoint(
                    f"Path segment faces {prev} and {nxt} are not adjacent"
                )
            vertex = min(shared)
        strip.extend(shortest_fan(mesh, vertex, prev, nxt))
        strip.append(nxt)
    return clean_strip(strip)


@dataclass
class UnfoldedStrip:
    """
    평면에 펼친 면 띠

    portal j (1..K) 는 strip[j-1] 과 strip[j] 사이의 변이며
    left 는 진행 방향 왼쪽 끝(변 s 의 코너 s+1), right 는 코너 s 이다.
    """
    faces: List[int]
    coords: np.ndarray
    sides: List[int] = field(default_factory=list)
    left: List[np.ndarray] = field(default_factory=list)
    right: List[np.ndarray] = field(default_factory=list)
    left_vertex: List[int] = field(default_factory=list)
    right_vertex: List[int] = field(default_factory=list)

    @property
    def portal_count(self) -> int:
        return len(self.sides)

    def position(self, mesh: IntrinsicMesh, point: SurfacePoint, index: int) -> np.ndarray:
        """띠 index 번째 면 배치에서 점의 위치"""
        return mesh.express_in(point, self.faces[index]) @ self.coords[index]


def unfold_strip(mesh: IntrinsicMesh, faces: Sequence[int]) -> UnfoldedStrip:
    """
    면 띠를 첫 면의 표준 배치에서 시작해 차례로 펼치기

    Raises:
        InvalidSurfacePoint: 이웃한 두 면이 변을 공유하지 않을 때
    """
    faces = list(faces)
    coords = np.zeros((len(faces), 3, 2))
    coords[0] = mesh.face_coords[faces[0]]
    strip = UnfoldedStrip(faces=faces, coords=coords)
    for i in range(1, len(faces)):
        f, g = faces[i - 1], faces[i]
        s = mesh.side_between(f, g)
        if s is None:
            raise InvalidSurfacePoint(f"Strip faces {f} and {g} do not share an edge")
        _, s2 = mesh.other_side(f, s)
        a = coords[i - 1][s]
        b = coords[i - 1][(s + 1) % 3]
        l = mesh.face_lengths[g]
        coords[i][s2] = b
        coords[i][(s2 + 1) % 3] = a
        coords[i][(s2 + 2) % 3] = place_third(b, a, l[(s2 + 2) % 3], l[(s2 + 1) % 3])
        strip.sides.append(s)
        strip.left.append(b)
        strip.right.append(a)
        strip.left_vertex.append(int(mesh.faces[f, (s + 1) % 3]))
        strip.right_vertex.append(int(mesh.faces[f, s]))
    return strip


# ----------------------------------------------------------------------
# 깔때기
# ----------------------------------------------------------------------


def funnel(
    left: Sequence[np.ndarray], right: Sequence[np.ndarray], scale: float
) -> List[Tuple[int, int]]:
    """
    단순 깔때기 알고리즘

    Args:
        left: 포털 왼쪽 끝 (시작점과 끝점 포털 포함)
        right: 포털 오른쪽 끝
        scale: 길이 척도 (동일점 판정용)

    Returns:
        꺾은선 꼭짓점 목록 [(포털 번호, 쪽)], 쪽은 +1 왼쪽, -1 오른쪽, 0 시작/끝
    """
    eps = (1e-12 * scale) ** 2
    n = len(left)

    def same(p: np.ndarray, q: np.ndarray) -> bool:
        d = p - q
        return float(d @ d) <= eps

    apex = left[0]
    apex_index = 0
    lp, rp = left[0], right[0]
    left_index = right_index = 0
    result: List[Tuple[int, int]] = [(0, 0)]
    i = 1
    guard = 0
    while i < n:
        guard += 1
        if guard > 4 * n * n + 16:
            raise RuntimeError("funnel did not terminate")
        l, r = left[i], right[i]

        # 오른쪽 경계 좁히기
        if _cross(rp - apex, r - apex) >= 0.0:
            if same(apex, rp) or _cross(lp - apex, r - apex) < 0.0:
                rp, right_index = r, i
            else:
                apex, apex_index = lp, left_index
                result.append((apex_index, 1))
                lp = rp = apex
                left_index = right_index = apex_index
                i = apex_index + 1
                continue

        # 왼쪽 경계 좁히기
        if _cross(lp - apex, l - apex) <= 0.0:
            if same(apex, lp) or _cross(rp - apex, l - apex) > 0.0:
                lp, left_index = l, i
            else:
                apex, apex_index = rp, right_index
                result.append((apex_index, -1))
                lp = rp = apex
                left_index = right_index = apex_index
                i = apex_index + 1
                continue
        i += 1

    result.append((n - 1, 0))
    return result


# ----------------------------------------------------------------------
# 곧게 펴기
# ----------------------------------------------------------------------


@dataclass
class _Crossing:
    position: np.ndarray
    t: float
    vertex: Optional[int]


@dataclass
class _ApexRun:
    vertex: int
    first: int
    last: int
    alpha: float
    cone: float

    @property
    def beta(self) -> float:
        return self.cone - self.alpha

    @property
    def defect(self) -> float:
        return max(0.0, math.pi - min(self.alpha, self.beta))


@dataclass
class StraightenResult:
    """곧게 펴기 결과와 진단값"""
    path: GeodesicPath
    reroutes: int
    defect: float
    converged: bool


def _portal_crossings(
    mesh: IntrinsicMesh,
    strip: UnfoldedStrip,
    start: np.ndarray,
    end: np.ndarray,
    corners: List[Tuple[int, int]],
) -> List[_Crossing]:
    """각 포털과 꺾은선의 교차점 (포털 번호 1..K)"""
    left = [start] + strip.left + [end]
    right = [start] + strip.right + [end]
    left_vertex = [-1] + strip.left_vertex + [-1]
    right_vertex = [-1] + strip.right_vertex + [-1]
    tol = 1e-9 * mesh.max_edge_length

    def corner_position(index: int, side: int) -> np.ndarray:
        return left[index] if side >= 0 else right[index]

    def corner_vertex(index: int, side: int) -> Optional[int]:
        if side == 0:
            return None
        return left_vertex[index] if side > 0 else right_vertex[index]

    crossings: List[_Crossing] = []
    piece = 0
    for j in range(1, strip.portal_count + 1):
        while corners[piece + 1][0] < j:
            piece += 1
        a_index, a_side = corners[piece]
        b_index, b_side = corners[piece + 1]
        a = corner_position(a_index, a_side)
        b = corner_position(b_index, b_side)
        lp, rp = left[j], right[j]

        snapped: Optional[_Crossing] = None
        for vertex, pos in ((corner_vertex(a_index, a_side), a), (corner_vertex(b_index, b_side), b)):
            if vertex is None:
                continue
            if left_vertex[j] == vertex and np.linalg.norm(lp - pos) <= tol:
                snapped = _Crossing(lp, 1.0, vertex)
            elif right_vertex[j] == vertex and np.linalg.norm(rp - pos) <= tol:
                snapped = _Crossing(rp, 0.0, vertex)
            if snapped is not None:
                break
        if snapped is not None:
            crossings.append(snapped)
            continue

        d = b - a
        den = _cross(d, lp - rp)
        if abs(den) <= 1e-300:
            t = 0.5
        else:
            t = -_cross(d, rp - a) / den
        t = min(max(t, 0.0), 1.0)
        vertex = None
        if t == 0.0:
            vertex = right_vertex[j]
        elif t == 1.0:
            vertex = left_vertex[j]
        crossings.append(_Crossing(rp + t * (lp - rp), t, vertex))
    return crossings


def _apex_runs(
    mesh: IntrinsicMesh,
    strip: UnfoldedStrip,
    start: np.ndarray,
    end: np.ndarray,
    crossings: List[_Crossing],
) -> List[_ApexRun]:
    """꼭짓점에 붙은 연속 포털 구간과 띠 쪽 각도"""
    runs: List[_ApexRun] = []
    tol = 1e-9 * mesh.max_edge_length
    k = len(crossings)
    j = 0
    while j < k:
        vertex = crossings[j].vertex
        if vertex is None:
            j += 1
            continue
        first = j
        while j + 1 < k and crossings[j + 1].vertex == vertex:
            j += 1
        last = j
        j += 1

        v = crossings[first].position
        u = start if first == 0 else crossings[first - 1].position
        w = end if last == k - 1 else crossings[last + 1].position
        if np.linalg.norm(u - v) <= tol or np.linalg.norm(w - v) <= tol:
            continue

        # 포털 번호 p (1 기반) 는 strip[p-1] 과 strip[p] 사이
        p_first, p_last = first + 1, last + 1
        other_first = (
            strip.right[p_first - 1] if crossings[first].t == 1.0 else strip.left[p_first - 1]
        )
        other_last = (
            strip.right[p_last - 1] if crossings[last].t == 1.0 else strip.left[p_last - 1]
        )
        alpha = _angle_between(u - v, other_first - v)
        for m in range(p_first, p_last):
            face = strip.faces[m]
            alpha += float(mesh.corner_angles[face, mesh.corner_of(face, vertex)])
        alpha += _angle_between(other_last - v, w - v)
        runs.append(
            _ApexRun(vertex, p_first, p_last, alpha, float(mesh.cone_angles[vertex]))
        )
    return runs


def _reroute(mesh: IntrinsicMesh, faces: List[int], runs: List[_ApexRun]) -> List[int]:
    """반대편 각이 π 보다 작은 꼭짓점 구간을 반대 방향 부채꼴로 교체"""
    result = list(faces)
    for run in sorted(runs, key=lambda r: r.first, reverse=True):
        before = faces[run.first - 1]
        after = faces[run.last]
        ring = [f for f, _ in mesh.one_ring(run.vertex)]
        position = ring.index(before)
        ccw = ring[(position + 1) % len(ring)] == faces[run.first]
        replacement = fan_between(mesh, run.vertex, before, after, not ccw)
        result[run.first : run.last] = replacement
    return clean_strip(result)


def _trim_ends(
    mesh: IntrinsicMesh, faces: List[int], start: SurfacePoint, end: SurfacePoint
) -> List[int]:
    """끝점이 놓인 포털 너머의 군더더기 면 제거"""
    faces = list(faces)
    while len(faces) > 1 and faces[1] in mesh.faces_containing(start):
        faces.pop(0)
    while len(faces) > 1 and faces[-2] in mesh.faces_containing(end):
        faces.pop()
    return faces


def _assemble(
    mesh: IntrinsicMesh,
    strip: UnfoldedStrip,
    start: SurfacePoint,
    end: SurfacePoint,
    crossings: List[_Crossing],
    kind: PathKind,
) -> GeodesicPath:
    """교차점들로 경로 구성 (길이 0 선분 병합)"""
    tol = 1e-12 * mesh.max_edge_length
    raw_points: List[SurfacePoint] = [start]
    raw_positions: List[np.ndarray] = []
    for j, crossing in enumerate(crossings, start=1):
        face = strip.faces[j - 1]
        s = strip.sides[j - 1]
        bary = [0.0, 0.0, 0.0]
        bary[s] = 1.0 - crossing.t
        bary[(s + 1) % 3] = crossing.t
        raw_points.append(SurfacePoint(face, tuple(bary)))
        raw_positions.append(crossing.position)
    raw_points.append(end)

    start_pos = strip.position(mesh, start, 0)
    end_pos = strip.position(mesh, end, len(strip.faces) - 1)
    positions = [start_pos] + raw_positions + [end_pos]

    points = [start]
    faces: List[int] = []
    last_position = start_pos
    length = 0.0
    for j in range(len(strip.faces)):
        q = raw_points[j + 1]
        q_pos = positions[j + 1]
        step = float(np.linalg.norm(q_pos - last_position))
        if step <= tol:
            if j == len(strip.faces) - 1 and faces:
                points[-1] = q
            continue
        points.append(q)
        faces.append(strip.faces[j])
        length += step
        last_position = q_pos

    if not faces:
        if start == end:
            return GeodesicPath(points=[start], faces=[], kind=kind, length=0.0)
        return GeodesicPath(points=[start, end], faces=[strip.faces[0]], kind=kind, length=0.0)
    return GeodesicPath(points=points, faces=faces, kind=kind, length=length)


def straighten_strip(
    mesh: IntrinsicMesh,
    faces: Sequence[int],
    start: SurfacePoint,
    end: SurfacePoint,
    kind: PathKind = PathKind.OPEN,
    max_reroutes: int = DEFAULT_MAX_REROUTES,
) -> StraightenResult:
    """
    면 띠 안에서 start→end 최단 꺾은선을 구하고 필요하면 꼭짓점을 돌아간다

    Args:
        faces: start 를 포함하는 면에서 end 를 포함하는 면까지의 띠
        start: 시작점
        end: 끝점
        kind: 결과 경로 종류
        max_reroutes: 돌리기 반복 한도

    Returns:
        StraightenResult
    """
    faces = clean_strip(faces)
    reroutes = 0
    while True:
        faces = _trim_ends(mesh, faces, start, end)
        strip = unfold_strip(mesh, faces)
        start_pos = strip.position(mesh, start, 0)
        end_pos = strip.position(mesh, end, len(faces) - 1)
        left = [start_pos] + strip.left + [end_pos]
        right = [start_pos] + strip.right + [end_pos]
        corners = funnel(left, right, mesh.max_edge_length)
        crossings = _portal_crossings(mesh, strip, start_pos, end_pos, corners)
        runs = _apex_runs(mesh, strip, start_pos, end_pos, crossings)
        flips = [
            run for run in runs
            if run.alpha > math.pi - REROUTE_ANGLE_TOL and run.beta < math.pi - REROUTE_ANGLE_TOL
        ]
        if not flips or reroutes >= max_reroutes:
            break
        faces = _reroute(mesh, faces, flips)
        reroutes += 1

    path = _assemble(mesh, strip, start, end, crossings, kind)
    defect = max((run.defect for run in runs), default=0.0)
    path.straightness_defect = defect
    path.metadata["reroutes"] = reroutes
    converged = not flips
    if not converged:
        logger.debug(f"straighten stopped after {reroutes} reroutes with {len(flips)} pending")
    return StraightenResult(path=path, reroutes=reroutes, defect=defect, converged=converged)


def straighten(
    mesh: IntrinsicMesh,
    path: GeodesicPath,
    max_reroutes: int = DEFAULT_MAX_REROUTES,
) -> GeodesicPath:
    """
    양 끝을 고정한 채 경로를 국소 최단 경로로 곧게 펴기

    경로가 지나는 면 띠를 펼쳐 깔때기 알고리즘으로 최단 꺾은선을 구하고,
    꺾인 꼭짓점의 반대편 각이 π 보다 작으면 반대편으로 돌려 반복한다.

    Args:
        mesh: 메쉬
        path: 입력 경로
        max_reroutes: 꼭짓점 돌리기 반복 한도

    Returns:
        같은 끝점을 가진 곧은 경로 (straightness_defect 는 내부 꼭짓점 기준)
    """
    if not path.faces:
        return GeodesicPath(
            points=[path.start], faces=[], kind=path.kind, length=0.0, straightness_defect=0.0
        )
    strip = path_strip(mesh, path)
    return straighten_strip(mesh, strip, path.start, path.end, path.kind, max_reroutes).path
