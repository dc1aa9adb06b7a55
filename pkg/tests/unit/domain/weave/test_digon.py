"""
Digon 분해 테스트
"""
import math

import pytest

from src.core.exceptions import InvalidSurfacePoint, UnsupportedTopology
from src.domain.surface import constant_path
from src.domain.weave import Digon, departure_direction, digon_decomposition
from src.infrastructure.config import GeodesicSettings


@pytest.fixture(scope="module")
def poles_decomposition(sphere_fine):
    north = sphere_fine.locate_xyz([0.0, 0.0, 1.0])
    south = sphere_fine.locate_xyz([0.0, 0.0, -1.0])
    return digon_decomposition(sphere_fine, north, south, settings=GeodesicSettings())


class TestDigonDecomposition:
    """Digon 분해 테스트"""

    def test_poles_give_several_digons(self, sphere_fine, poles_decomposition):
        """대척점 사이 최소 측지선이 여럿이므로 digon 이 셋 이상"""
        assert len(poles_decomposition.digons) >= 3
        assert not poles_decomposition.flagged
        for g in poles_decomposition.geodesics:
            assert g.length == pytest.approx(math.pi, rel=0.02)

    def test_domains_partition_faces(self, sphere_fine, poles_decomposition):
        """digon 영역은 서로소이고 모든 면을 덮음"""
        assert poles_decomposition.covers(sphere_fine.face_count)

    def test_angles_close_the_cone(self, poles_decomposition):
        """x 에서의 각을 모두 더하면 한 바퀴"""
        total = sum(d.angle_x for d in poles_decomposition.digons)
        assert total == pytest.approx(2 * math.pi, rel=0.05)
        assert poles_decomposition.berger_flag

    def test_sides_sorted_counterclockwise(self, sphere_fine, poles_decomposition):
        """이웃 digon 은 변을 공유"""
        digons = poles_decomposition.digons
        for a, b in zip(digons, digons[1:] + digons[:1]):
            assert a.side_b is b.side_a
        directions = [departure_direction(sphere_fine, d.side_a) for d in digons]
        assert len(set(round(t, 6) for t in directions)) == len(digons)

    def test_to_dict(self, poles_decomposition):
        """직렬화 필드"""
        data = poles_decomposition.to_dict()
        assert set(data) >= {"x", "z", "berger_flag", "angle_tol", "digons"}
        assert len(data["digons"]) == len(poles_decomposition.digons)

    def test_torus_unsupported(self, flat_torus):
        """구면이 아니면 거부"""
        with pytest.raises(UnsupportedTopology) as exc_info:
            digon_decomposition(flat_torus, flat_torus.vertex_point(0), flat_torus.vertex_point(210))
        assert exc_info.value.euler_characteristic == 0

    def test_same_point_rejected(self, sphere_coarse):
        """같은 두 점은 거부"""
        x = sphere_coarse.vertex_point(0)
        with pytest.raises(InvalidSurfacePoint):
            digon_decomposition(sphere_coarse, x, x)


class TestDigon:
    """Digon 모델 테스트"""

    def test_negative_angle(self, sphere_coarse):
        """음수 각 거부"""
        side = constant_path(sphere_coarse.vertex_point(0))
        with pytest.raises(ValueError, match="non-negative"):
            Digon(side_a=side, side_b=side, angle_x=-0.1, angle_z=0.0, domain=frozenset())

    def test_degenerate(self, sphere_coarse):
        """같은 변 두 개는 퇴화 digon"""
        side = constant_path(sphere_coarse.vertex_point(0))
        digon = Digon(side_a=side, side_b=side, angle_x=0.0, angle_z=0.0, domain=frozenset())
        assert digon.is_degenerate
        assert digon.length == 0.0
