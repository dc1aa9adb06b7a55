"""
경로 도우미, 직선 추적, 곧게 펴기, 조합 위상 테스트
"""
import math

import numpy as np
import pytest

from src.core.exceptions import InvalidSurfacePoint
from src.core.models import GeodesicPath, PathKind, SurfacePoint
from src.domain.surface import (
    constant_path,
    end_direction,
    make_path,
    midpoint_split,
    path_length,
    point_at,
    rebase_loop,
    sample_points,
    split_at,
    straighten,
    subpath,
    trace_straight,
)
from src.domain.surface.topology import (
    crossing_parity,
    dual_graph,
    edge_between,
    edge_loop_path,
    is_edge_connected,
    tree_cotree_generators,
)

START_UV = (0.512, 0.0137)


def _uv(mesh, point):
    return mesh.position_of(point)


def _trace_uv(mesh, direction, length):
    start = mesh.locate_uv(START_UV)
    angle = mesh.direction_from_uv(start.face, direction)
    return trace_straight(mesh, start, angle, length)


class TestMakePath:
    """make_path 테스트"""

    def test_edge_path_length(self, octahedron):
        """변을 따라가는 경로 길이"""
        points = [octahedron.vertex_point(v) for v in (0, 2, 1)]
        path = make_path(octahedron, points)
        assert path.length == pytest.approx(2 * math.sqrt(2.0))
        assert path_length(octahedron, path) == pytest.approx(path.length)
        assert len(path.faces) == 2

    def test_points_without_common_face(self, octahedron):
        """공통 면이 없는 이웃 점"""
        with pytest.raises(InvalidSurfacePoint, match="share no face"):
            make_path(octahedron, [octahedron.vertex_point(4), octahedron.vertex_point(5)])

    def test_constant_path(self, octahedron):
        """상수 경로"""
        path = constant_path(octahedron.vertex_point(0), PathKind.LOOP)
        assert path.is_constant
        assert path.is_loop
        assert path.straightness_defect == 0.0


class TestTraceStraight:
    """직선 추적 테스트"""

    def test_closed_horizontal_line(self, flat_torus):
        """길이 a 만큼 가로로 가면 제자리"""
        path = _trace_uv(flat_torus, (1.0, 0.0), 1.0)
        assert path.length == 1.0
        assert path.straightness_defect == 0.0
        assert len(path.faces) > 20
        gap = flat_torus.ambient_distances(_uv(flat_torus, path.end), np.array(START_UV))
        assert gap < 1e-9

    def test_oblique_line(self, flat_torus):
        """3-4-5 방향 추적"""
        path = _trace_uv(flat_torus, (3.0, 4.0), 0.3)
        assert np.allclose(_uv(flat_torus, path.end), [0.692, 0.2537], atol=1e-9)
        assert path_length(flat_torus, path) == pytest.approx(0.3)

    def test_zero_and_negative_length(self, flat_torus):
        """길이 0 과 음수"""
        start = flat_torus.locate_uv(START_UV)
        assert trace_straight(flat_torus, start, 0.3, 0.0).is_constant
        with pytest.raises(ValueError):
            trace_straight(flat_torus, start, 0.3, -1.0)

    def test_end_direction_continues_trace(self, flat_torus):
        """끝 방향으로 이어 추적하면 한 직선"""
        first = _trace_uv(flat_torus, (3.0, 4.0), 0.1)
        face, heading = end_direction(first)
        end = flat_torus.in_face(first.end, face)
        second = trace_straight(flat_torus, end, heading, 0.2)
        assert np.allclose(_uv(flat_torus, second.end), [0.692, 0.2537], atol=1e-9)


class TestPathHelpers:
    """호 길이 도우미 테스트"""

    @pytest.fixture
    def line(self, flat_torus):
        return _trace_uv(flat_torus, (1.0, 0.0), 0.4)

    def test_point_at(self, flat_torus, line):
        """호 길이 위치의 점"""
        point, _ = point_at(flat_torus, line, 0.1)
        assert np.allclose(_uv(flat_torus, point), [0.612, 0.0137])
        start, index = point_at(flat_torus, line, -1.0)
        assert start == line.start and index == 0

    def test_subpath_and_midpoint(self, flat_torus, line):
        """부분 경로"""
        part = subpath(flat_torus, line, 0.1, 0.3)
        assert part.length == pytest.approx(0.2)
        assert path_length(flat_torus, part) == pytest.approx(0.2)
        left, right = midpoint_split(flat_torus, line)
        assert left.length == pytest.approx(0.2)
        assert flat_torus.same_location(left.end, right.start)
        with pytest.raises(ValueError):
            subpath(flat_torus, line, 0.3, 0.1)

    def test_split_at(self, flat_torus, line):
        """여러 지점에서 나누기"""
        pieces = split_at(flat_torus, line, [0.1, 0.25])
        assert [p.length for p in pieces] == pytest.approx([0.1, 0.15, 0.15])
        assert pieces[1].start is pieces[0].end

    def test_sample_points(self, flat_torus, line):
        """균등 표본"""
        samples = sample_points(flat_torus, line, 5)
        us = [_uv(flat_torus, p)[0] for p in samples]
        assert us == pytest.approx([0.512, 0.612, 0.712, 0.812, 0.912])

    def test_rebase_loop(self, flat_torus):
        """루프 기준점 옮기기"""
        traced = _trace_uv(flat_torus, (1.0, 0.0), 1.0)
        loop = GeodesicPath(traced.points, traced.faces, PathKind.LOOP, traced.length)
        moved = rebase_loop(flat_torus, loop, 0.25)
        assert moved.is_loop
        assert moved.length == pytest.approx(1.0)
        assert np.allclose(_uv(flat_torus, moved.start), [0.762, 0.0137])
        assert rebase_loop(flat_torus, loop, 0.0) is loop


class TestStraighten:
    """곧게 펴기 테스트"""

    def test_corner_becomes_diagonal(self, flat_torus):
        """ㄱ 자 변 경로는 칸 대각선으로"""
        points = [flat_torus.vertex_point(v) for v in (0, 20, 21)]
        bent = make_path(flat_torus, points)
        assert bent.length == pytest.approx(0.1)
        straight = straighten(flat_torus, bent)
        assert straight.length == pytest.approx(0.05 * math.sqrt(2.0))
        assert flat_torus.same_location(straight.start, bent.start)
        assert flat_torus.same_location(straight.end, bent.end)

    def test_straight_path_is_unchanged(self, flat_torus):
        """이미 곧은 경로"""
        line = _trace_uv(flat_torus, (3.0, 4.0), 0.3)
        assert straighten(flat_torus, line).length == pytest.approx(0.3)


class TestTopology:
    """조합 위상 테스트"""

    def test_dual_graph(self, octahedron):
        """쌍대 그래프"""
        graph = dual_graph(octahedron)
        assert graph.number_of_nodes() == 8
        assert graph.number_of_edges() == 12
        assert is_edge_connected(octahedron, range(8))
        assert not is_edge_connected(octahedron, [0, 6])
        assert not is_edge_connected(octahedron, [])

    def test_edge_between(self, flat_torus):
        """두 꼭짓점 사이 변"""
        assert edge_between(flat_torus, 0, 20) is not None
        assert edge_between(flat_torus, 21, 0) is not None
        assert edge_between(flat_torus, 0, 62) is None

    def test_sphere_has_no_generators(self, sphere_coarse):
        """구면은 생성원 없음"""
        assert tree_cotree_generators(sphere_coarse) == []

    def test_torus_generators(self, flat_torus):
        """토러스 생성원 2 개, 모두 비가축"""
        loops = tree_cotree_generators(flat_torus)
        assert len(loops) == 2
        for loop in loops:
            assert loop.vertices[0] == loop.vertices[-1]
            path = edge_loop_path(flat_torus, loop.vertices)
            assert path.is_loop
            assert path.length >= 1.0 - 1e-9
        parity = crossing_parity(loops[0].edges, loops)
        assert parity[0] == loops[0].size % 2
