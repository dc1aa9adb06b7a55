"""
열거 파이프라인 테스트
"""
import math

import pytest

from src.core.exceptions import InvalidSurfacePoint, UnsupportedTopology
from src.domain.enumeration import (
    Route,
    dedupe,
    enumerate_geodesics,
    homotopy_index,
    pi1_pipeline,
    short_generators,
    surface_id,
)
from src.domain.metric import shortest_path
from src.domain.surface import make_path
from src.domain.weave import FillingOutcome, FillingTree


class TestHelpers:
    """보조 함수 테스트"""

    def test_homotopy_index(self, sphere_coarse, flat_torus):
        """구면 q = 2, 토러스 q = 1"""
        assert homotopy_index(sphere_coarse) == 2
        assert homotopy_index(flat_torus) == 1

    def test_surface_id(self, flat_torus):
        """종류, 파라미터, 지문"""
        ident = surface_id(flat_torus)
        assert ident.startswith("flat_torus:a=1,b=1#")
        assert ident.endswith(flat_torus.fingerprint[:12])

    def test_dedupe_keeps_shortest(self, flat_torus):
        """같은 경로의 우회는 하나로"""
        straight = make_path(flat_torus, [flat_torus.vertex_point(v) for v in (0, 20, 40)])
        bent = make_path(flat_torus, [flat_torus.vertex_point(v) for v in (0, 1, 21, 41, 40)])
        kept = dedupe(flat_torus, [bent, straight])
        assert len(kept) == 1
        assert kept[0] is straight


class TestPi1Pipeline:
    """루프 기저 파이프라인 테스트"""

    @pytest.mark.slow
    def test_half_shift(self, flat_torus):
        """(0,0) → (0.5, 0): 0.5, 0.5, √1.25"""
        report = pi1_pipeline(flat_torus, flat_torus.vertex_point(0), flat_torus.vertex_point(200), k=3)
        assert report.route == Route.PI1
        assert report.complete
        assert report.lengths == pytest.approx([0.5, 0.5, math.sqrt(1.25)], abs=0.03)
        assert all(report.certified)
        assert report.bounds_passed
        assert report.q == 1

    @pytest.mark.slow
    def test_based_loops(self, flat_torus):
        """x = y: 상수 루프와 두 주기"""
        x = flat_torus.vertex_point(0)
        report = enumerate_geodesics(flat_torus, x, x, k=3)
        assert report.route == Route.PI1
        assert report.lengths == pytest.approx([0.0, 1.0, 1.0], abs=0.03)
        assert report.same_endpoints

    @pytest.mark.slow
    def test_short_generators(self, flat_torus):
        """두 주기 방향 생성원"""
        x = flat_torus.vertex_point(0)
        basis = short_generators(flat_torus, x, d=math.sqrt(0.5))
        assert len(basis) >= 2
        assert [g.length for g in basis[:2]] == pytest.approx([1.0, 1.0], abs=0.03)

    def test_sphere_rejected(self, sphere_coarse):
        """구면은 루프 기저 파이프라인 대상 아님"""
        x = sphere_coarse.vertex_point(0)
        with pytest.raises(UnsupportedTopology) as exc_info:
            pi1_pipeline(sphere_coarse, x)
        assert exc_info.value.euler_characteristic == 2

    def test_gamma_must_be_based(self, flat_torus):
        """gamma 는 x 기준 루프"""
        gamma = make_path(flat_torus, [flat_torus.vertex_point(v) for v in (1, 21, 41)])
        with pytest.raises(InvalidSurfacePoint, match="based at x"):
            pi1_pipeline(flat_torus, flat_torus.vertex_point(0), gamma=gamma, d=0.7)


class TestEnumerateGeodesics:
    """진입 함수 테스트"""

    def test_bad_k(self, flat_torus):
        """k < 1 거부"""
        with pytest.raises(ValueError, match="at least 1"):
            enumerate_geodesics(flat_torus, flat_torus.vertex_point(0), k=0)

    def test_filling_flag_reaches_report(self, sphere_coarse, mocker):
        """filling tree 의 플래그가 보고서까지 전달됨"""
        x, y = sphere_coarse.vertex_point(0), sphere_coarse.vertex_point(5)
        rho = shortest_path(sphere_coarse, x, y)
        outcome = FillingOutcome(
            kind="sweep", tree=FillingTree(), rho=rho, d=3.2, dist_xy=rho.length, k=1,
            flagged=True, flag="BoundViolated",
        )
        filling = mocker.patch("src.domain.enumeration.pipelines.run_filling_tree", return_value=outcome)
        report = enumerate_geodesics(sphere_coarse, x, y, k=1, d=3.2)
        assert filling.call_count == 1
        assert report.route == Route.FILLING_TREE
        assert report.flagged
        assert report.flag == "BoundViolated"
        assert report.metadata["filling"]["flag"] == "BoundViolated"
