"""
경로 사이 정렬 거리와 중복 제거 테스트
"""
import math

import pytest

from src.core.models import GeodesicPath, PathKind
from src.domain.metric import dedupe_paths, frechet_distance, same_path
from src.domain.metric.frechet import path_order_key, sample_count
from src.domain.surface import trace_straight
from src.domain.weave import trace_from
from src.infrastructure.config import GeodesicSettings


def _horizontal(mesh, v, length=0.5, u=0.112):
    start = mesh.locate_uv((u, v))
    return trace_straight(mesh, start, mesh.direction_from_uv(start.face, (1.0, 0.0)), length)


def _loop(mesh, v, u=0.112):
    line = _horizontal(mesh, v, length=1.0, u=u)
    return GeodesicPath(line.points, line.faces, PathKind.LOOP, line.length)


class TestFrechetDistance:
    """정렬 거리 테스트"""

    def test_identical(self, flat_torus):
        """같은 경로는 거리 0"""
        line = _horizontal(flat_torus, 0.2137)
        assert frechet_distance(flat_torus, line, line) == pytest.approx(0.0, abs=1e-12)

    def test_parallel_offset(self, flat_torus):
        """평행 이동한 경로"""
        a = _horizontal(flat_torus, 0.2137)
        b = _horizontal(flat_torus, 0.3137)
        assert frechet_distance(flat_torus, a, b) == pytest.approx(0.1)

    def test_reversed_open_path_is_far(self, flat_torus):
        """열린 경로는 방향이 다르면 다름"""
        a = _horizontal(flat_torus, 0.2137)
        assert frechet_distance(flat_torus, a, a.reverse()) == pytest.approx(0.5)

    def test_cyclic_ignores_base_and_direction(self, flat_torus):
        """닫힌 경로는 기준점과 방향 무시"""
        a = _horizontal(flat_torus, 0.2137, length=1.0)
        b = _horizontal(flat_torus, 0.2137, length=1.0, u=0.612)
        loop_a = GeodesicPath(a.points, a.faces, PathKind.LOOP, a.length)
        loop_b = GeodesicPath(b.points, b.faces, PathKind.LOOP, b.length).reverse()
        assert frechet_distance(flat_torus, loop_a, loop_b, cyclic=True) < flat_torus.h

    def test_sample_count(self, flat_torus):
        """표본 수는 h 간격 기준"""
        line = _horizontal(flat_torus, 0.2137)
        assert sample_count(flat_torus, line) >= int(0.5 / flat_torus.h) + 1


class TestSamePath:
    """같은 경로 판정 테스트"""

    def test_based_loop_and_its_reverse(self, flat_torus):
        """기준점을 공유하는 루프는 거꾸로 돌아도 같음"""
        loop = _loop(flat_torus, 0.2137)
        assert frechet_distance(flat_torus, loop, loop.reverse()) > 0.1
        assert same_path(flat_torus, loop, loop.reverse(), radius=0.01)

    def test_open_path_direction_matters(self, flat_torus):
        """열린 경로는 방향이 다르면 다른 경로"""
        line = _horizontal(flat_torus, 0.2137)
        assert not same_path(flat_torus, line, line.reverse(), radius=0.01)

    def test_parallel_loops_differ(self, flat_torus):
        """평행한 다른 루프는 반전해도 다름"""
        a = _loop(flat_torus, 0.2137)
        b = _loop(flat_torus, 0.4137)
        assert not same_path(flat_torus, a, b.reverse(), radius=0.01)


class TestDedupePaths:
    """중복 제거 테스트"""

    def test_groups_close_paths(self, flat_torus):
        """가까운 경로는 짧은 것 하나만"""
        a = _horizontal(flat_torus, 0.2137)
        near = _horizontal(flat_torus, 0.2147, length=0.501)
        far = _horizontal(flat_torus, 0.4137)
        kept = dedupe_paths(flat_torus, [near, far, a], radius=0.01)
        assert len(kept) == 2
        assert kept[0].length == pytest.approx(0.5)

    def test_order_key(self, flat_torus):
        """길이 순 정렬 키"""
        short = _horizontal(flat_torus, 0.2137, length=0.2)
        long = _horizontal(flat_torus, 0.2137, length=0.3)
        assert sorted([long, short], key=path_order_key)[0] is short

    def test_reversed_loop_counted_once(self, flat_torus):
        """같은 루프를 거꾸로 돈 것은 하나로 묶음"""
        loop = _loop(flat_torus, 0.2137)
        other = _loop(flat_torus, 0.4137)
        kept = dedupe_paths(flat_torus, [loop.reverse(), other, loop], radius=0.01)
        assert len(kept) == 2

    @pytest.mark.slow
    def test_sphere_great_circle_reversed(self, sphere_fine):
        """구면에서 같은 대원을 반대로 도는 기준 루프는 하나"""
        north = sphere_fine.locate_xyz([0.0, 0.0, 1.0])
        meridian = trace_from(sphere_fine, north, 0.0, 2.0 * math.pi)
        loop = GeodesicPath(meridian.points, meridian.faces, PathKind.LOOP, meridian.length)
        radius = GeodesicSettings().resolve(sphere_fine).dedupe_radius
        assert len(dedupe_paths(sphere_fine, [loop, loop.reverse()], radius)) == 1
