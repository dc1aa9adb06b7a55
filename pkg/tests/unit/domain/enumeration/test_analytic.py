"""
닫힌 형태 측지선 길이 테스트
"""
import math

import pytest

from src.core.exceptions import UnsupportedKind
from src.domain.enumeration import analytic_geodesics, analytic_geodesics_for, sphere_lengths, torus_lengths


class TestSphereLengths:
    """구면 오라클 테스트"""

    def test_quarter_separation(self):
        """θ = π/2, k = 4"""
        lengths = analytic_geodesics("round_sphere", 4, theta=math.pi / 2)
        assert lengths == pytest.approx([math.pi / 2, 3 * math.pi / 2, 5 * math.pi / 2, 7 * math.pi / 2])

    def test_same_point(self):
        """θ = 0 이면 상수 루프와 대원 두 방향"""
        assert sphere_lengths(3, 0.0) == pytest.approx([0.0, 2 * math.pi, 2 * math.pi])

    def test_radius_scales(self):
        """반지름 배율"""
        assert sphere_lengths(2, math.pi / 2, r=2.0) == pytest.approx([math.pi, 3 * math.pi])

    @pytest.mark.parametrize("theta", [-0.1, 4.0])
    def test_bad_theta(self, theta):
        """범위 밖 각거리"""
        with pytest.raises(ValueError, match="theta"):
            sphere_lengths(2, theta)


class TestTorusLengths:
    """토러스 오라클 테스트"""

    def test_half_shift(self):
        """Δ = (0.5, 0), k = 3"""
        lengths = analytic_geodesics("flat_torus", 3, delta=(0.5, 0.0))
        assert lengths == pytest.approx([0.5, 0.5, math.sqrt(1.25)])

    def test_same_point(self):
        """Δ = 0 이면 상수 루프와 두 주기"""
        assert torus_lengths(3, (0.0, 0.0)) == pytest.approx([0.0, 1.0, 1.0])

    def test_bad_period(self):
        """양수가 아닌 주기"""
        with pytest.raises(ValueError, match="periods"):
            torus_lengths(2, (0.1, 0.1), a=0.0)


class TestAnalyticDispatch:
    """종류별 선택 테스트"""

    def test_aliases(self):
        """sphere / torus 별칭"""
        assert analytic_geodesics("sphere", 1, theta=1.0) == pytest.approx([1.0])
        assert analytic_geodesics("torus", 1, delta=(0.3, 0.4)) == pytest.approx([0.5])

    def test_missing_parameters(self):
        """필요한 파라미터 누락"""
        with pytest.raises(ValueError, match="theta"):
            analytic_geodesics("round_sphere", 2)
        with pytest.raises(ValueError, match="delta"):
            analytic_geodesics("flat_torus", 2)

    def test_unsupported_kind(self):
        """닫힌 형태가 없는 종류"""
        with pytest.raises(UnsupportedKind) as exc_info:
            analytic_geodesics("dumbbell", 2)
        assert exc_info.value.kind == "dumbbell"

    def test_from_mesh_torus(self, flat_torus):
        """토러스 메쉬 위치에서 Δ 계산"""
        lengths = analytic_geodesics_for(flat_torus, flat_torus.vertex_point(0), flat_torus.vertex_point(200), 3)
        assert lengths == pytest.approx([0.5, 0.5, math.sqrt(1.25)])

    def test_from_mesh_sphere(self, sphere_coarse):
        """구면 메쉬 위치에서 θ 계산"""
        north = sphere_coarse.locate_xyz([0.0, 0.0, 1.0])
        lengths = analytic_geodesics_for(sphere_coarse, north, north, 2)
        assert lengths == pytest.approx([0.0, 2 * math.pi], abs=1e-6)

    def test_from_mesh_unsupported(self, bumpy_sphere):
        """울퉁불퉁한 구면은 오라클 없음"""
        x = bumpy_sphere.vertex_point(0)
        with pytest.raises(UnsupportedKind):
            analytic_geodesics_for(bumpy_sphere, x, x, 2)
