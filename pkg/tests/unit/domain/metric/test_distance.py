"""
거리장, 최단 경로, 지름 테스트
"""
import math

import numpy as np
import pytest

from src.core.exceptions import EmptyDomain
from src.domain.metric import (
    build_steiner_graph,
    diameter,
    distance_field,
    farthest_point,
    point_distance,
    shortest_path,
)
from src.domain.shorten import is_geodesic


class TestDistanceField:
    """거리장 테스트"""

    def test_source_is_zero(self, flat_torus):
        """출발점 거리 0"""
        field = distance_field(flat_torus, flat_torus.vertex_point(0))
        assert field.vertex_distance(0) == 0.0
        assert field.reachable().all()
        assert field.resolution_error == pytest.approx(flat_torus.h)

    def test_grid_distance_is_exact(self, flat_torus):
        """격자 방향 거리는 정확"""
        d = point_distance(flat_torus, flat_torus.vertex_point(0), flat_torus.vertex_point(200))
        assert d == pytest.approx(0.5)

    def test_overestimate_is_bounded(self, flat_torus):
        """그래프 거리는 참 거리 이상, c·h 이내"""
        a = flat_torus.locate_uv((0.112, 0.137))
        b = flat_torus.locate_uv((0.412, 0.537))
        d = point_distance(flat_torus, a, b)
        assert 0.5 - 1e-9 <= d <= 0.5 + flat_torus.h

    def test_cache_returns_same_field(self, flat_torus):
        """같은 출발점은 캐시"""
        x = flat_torus.vertex_point(3)
        assert distance_field(flat_torus, x) is distance_field(flat_torus, x)

    def test_domain_restriction(self, flat_torus):
        """면 부분집합 밖은 inf"""
        x = flat_torus.vertex_point(0)
        domain = sorted({f for f, _ in flat_torus.one_ring(0)})
        field = distance_field(flat_torus, x, domain=domain)
        assert np.isinf(field.distance).sum() > 0
        assert np.isfinite(field.vertex_distance(0))

    def test_empty_domain(self, flat_torus):
        """빈 도메인 또는 출발점을 포함하지 않는 도메인"""
        x = flat_torus.vertex_point(0)
        with pytest.raises(EmptyDomain):
            distance_field(flat_torus, x, domain=[])
        far = sorted({f for f, _ in flat_torus.one_ring(210)})
        with pytest.raises(EmptyDomain):
            distance_field(flat_torus, flat_torus.locate_uv((0.112, 0.137)), domain=far)

    def test_to_dict(self, octahedron):
        """JSON 딕셔너리"""
        data = distance_field(octahedron, octahedron.vertex_point(4)).to_dict()
        assert set(data["distance"]) == {str(v) for v in range(6)}
        assert data["distance"]["4"] == 0.0


class TestSteinerGraph:
    """Steiner 그래프 테스트"""

    def test_node_points_lie_on_edges(self, octahedron):
        """Steiner 노드는 변 위의 점"""
        graph = build_steiner_graph(octahedron, 3)
        assert graph.node_count == 6 + 12 * 3
        for node in range(6, graph.node_count):
            point = graph.node_point(node)
            assert len(point.support) == 2


class TestShortestPath:
    """최단 경로 테스트"""

    def test_straight_on_flat_torus(self, flat_torus):
        """평탄 토러스 최단 경로는 직선"""
        a = flat_torus.locate_uv((0.112, 0.137))
        b = flat_torus.locate_uv((0.412, 0.537))
        path = shortest_path(flat_torus, a, b)
        assert path.length == pytest.approx(0.5, abs=1e-6)
        assert path.metadata["graph_length"] >= path.length - 1e-9
        assert is_geodesic(flat_torus, path, based=False)

    def test_wraps_around(self, flat_torus):
        """주기 경계를 넘는 최단 경로"""
        a = flat_torus.locate_uv((0.912, 0.5137))
        b = flat_torus.locate_uv((0.112, 0.5137))
        assert shortest_path(flat_torus, a, b).length == pytest.approx(0.2, abs=1e-6)

    def test_same_point(self, flat_torus):
        """같은 점"""
        x = flat_torus.vertex_point(5)
        assert shortest_path(flat_torus, x, x).is_constant

    def test_sphere_antipodes(self, sphere_fine):
        """구면 대척점 거리 ≈ π"""
        north = sphere_fine.locate_xyz([0.0, 0.0, 1.0])
        south = sphere_fine.locate_xyz([0.0, 0.0, -1.0])
        path = shortest_path(sphere_fine, north, south)
        assert path.length == pytest.approx(math.pi, abs=0.05)


class TestDiameter:
    """지름 테스트"""

    def test_flat_torus(self, flat_torus):
        """단위 토러스 지름 √2/2"""
        d, (i, j) = diameter(flat_torus)
        assert math.sqrt(0.5) - 1e-9 <= d <= math.sqrt(0.5) + flat_torus.h
        assert i < j

    def test_pruned_matches_exhaustive(self, flat_torus):
        """가지치기 결과와 전수 계산 일치"""
        d_pruned, _ = diameter(flat_torus)
        d_full, _ = diameter(flat_torus, exhaustive=True)
        assert d_pruned == pytest.approx(d_full)

    def test_round_sphere(self, sphere_coarse):
        """구면 지름 ≈ π"""
        d, _ = diameter(sphere_coarse)
        assert d == pytest.approx(math.pi, abs=0.15)

    def test_farthest_point(self, flat_torus):
        """원점에서 가장 먼 점은 (0.5, 0.5) 근처"""
        far = farthest_point(flat_torus, flat_torus.vertex_point(0))
        gap = flat_torus.ambient_distances(flat_torus.position_of(far), np.array([0.5, 0.5]))
        assert gap <= flat_torus.h
