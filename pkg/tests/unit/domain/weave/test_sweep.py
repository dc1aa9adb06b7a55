"""
Sweep-out 과 min-max 추출 테스트
"""
import math

import pytest

from src.core.exceptions import DegreeAmbiguous
from src.domain.metric import same_path
from src.domain.weave import SweepOut, minmax_extract, standard_sweep, sweep_out_degree, trace_from
from src.infrastructure.config import GeodesicSettings


@pytest.fixture(scope="module")
def north_sweep(sphere_coarse):
    north = sphere_coarse.locate_xyz([0.0, 0.0, 1.0])
    return standard_sweep(sphere_coarse, north, members=12, settings=GeodesicSettings())


class TestStandardSweep:
    """표준 자오선 가족 테스트"""

    def test_members_and_closure(self, north_sweep):
        """members + 1 개, 마지막은 첫 자오선"""
        assert north_sweep.member_count == 13
        assert north_sweep.meridians[-1] is north_sweep.meridians[0]
        assert len(north_sweep.family) == 12
        assert north_sweep.metadata["kind"] == "standard"

    def test_meridian_lengths(self, north_sweep):
        """자오선은 대략 반 원주"""
        assert north_sweep.L == pytest.approx(math.pi, rel=0.05)

    def test_check(self, sphere_coarse, north_sweep):
        """끝점 공유와 닫힘"""
        report = north_sweep.check(sphere_coarse)
        assert report["shared_endpoints"]
        assert report["closed"]
        assert report["max_gap"] == max(north_sweep.gaps(sphere_coarse))

    def test_trace_from_vertex(self, sphere_coarse, north_sweep):
        """꼭짓점 출발 추적은 시작점 유지"""
        ray = trace_from(sphere_coarse, north_sweep.x, 0.3, 0.5)
        assert ray.start == north_sweep.x
        assert ray.length == pytest.approx(0.5, rel=1e-6)

    def test_to_dict(self, north_sweep):
        """직렬화 필드"""
        data = north_sweep.to_dict()
        assert data["members"] == 13
        assert data["L"] == north_sweep.L
        assert len(data["meridians"]) == 13

    def test_too_few_meridians(self, north_sweep):
        """자오선 둘 미만 거부"""
        with pytest.raises(ValueError, match="at least two"):
            SweepOut(meridians=north_sweep.meridians[:1], x=north_sweep.x, z=north_sweep.z)


class TestSweepOutDegree:
    """차수 테스트"""

    def test_degree_is_unit(self, sphere_coarse, north_sweep):
        """표준 가족의 차수는 ±1"""
        degree = sweep_out_degree(sphere_coarse, north_sweep)
        assert abs(degree) == 1
        assert north_sweep.degree == degree

    def test_reverse_flips_sign(self, sphere_coarse, north_sweep):
        """방향을 뒤집으면 부호가 바뀜"""
        reverse = standard_sweep(sphere_coarse, north_sweep.x, members=12, reverse=True)
        assert sweep_out_degree(sphere_coarse, reverse) == -sweep_out_degree(sphere_coarse, north_sweep)

    def test_needs_embedding(self, flat_torus):
        """임베딩 없는 메쉬는 판정 불가"""
        sweep = standard_sweep(flat_torus, flat_torus.vertex_point(0), members=4)
        with pytest.raises(DegreeAmbiguous):
            sweep_out_degree(flat_torus, sweep)


class TestMinmaxExtract:
    """min-max 추출 테스트"""

    def test_based_loops_within_bound(self, sphere_coarse, north_sweep):
        """x = y 이면 길이 ≤ 2(k-1)L"""
        result = minmax_extract(sphere_coarse, north_sweep, k=2)
        slack = GeodesicSettings().resolve(sphere_coarse).slack
        assert result.bound == pytest.approx(2 * north_sweep.L)
        assert result.geodesics
        assert all(length <= result.bound + slack for length in result.lengths)
        assert result.to_dict()["k"] == 2

    def test_bad_k(self, sphere_coarse, north_sweep):
        """k < 1 거부"""
        with pytest.raises(ValueError, match="at least 1"):
            minmax_extract(sphere_coarse, north_sweep, k=0)


@pytest.mark.slow
class TestMinmaxOnFineSphere:
    """가는 구면에서 min-max 길이 준위 테스트"""

    @pytest.fixture(scope="class")
    def fine_sweep(self, sphere_fine):
        north = sphere_fine.locate_xyz([0.0, 0.0, 1.0])
        return standard_sweep(sphere_fine, north)

    def test_quarter_separation_levels(self, sphere_fine, fine_sweep):
        """θ = π/2, k = 3 → π/2, 3π/2, 5π/2"""
        equator = sphere_fine.locate_xyz([1.0, 0.0, 0.0])
        result = minmax_extract(sphere_fine, fine_sweep, k=3, y=equator)
        assert not result.flagged
        expected = [math.pi / 2, 3 * math.pi / 2, 5 * math.pi / 2]
        assert result.lengths[:3] == pytest.approx(expected, rel=0.05)
        slack = GeodesicSettings().resolve(sphere_fine).slack
        assert all(length <= result.bound + slack for length in result.lengths)

    def test_based_loops_are_distinct_circles(self, sphere_fine, fine_sweep):
        """x = y, k = 3 → 0, 2π, 2π 이고 두 대원은 서로 다름"""
        result = minmax_extract(sphere_fine, fine_sweep, k=3)
        assert not result.flagged
        assert result.lengths[:3] == pytest.approx([0.0, 2 * math.pi, 2 * math.pi], rel=0.05, abs=0.1)
        radius = GeodesicSettings().resolve(sphere_fine).dedupe_radius
        assert not same_path(sphere_fine, result.geodesics[1], result.geodesics[2], radius)

    def test_levels_recorded_per_power(self, sphere_fine, fine_sweep):
        """가족 후보의 r 별 최대 길이 기록"""
        equator = sphere_fine.locate_xyz([1.0, 0.0, 0.0])
        result = minmax_extract(sphere_fine, fine_sweep, k=3, y=equator)
        assert set(result.metadata["levels"]) == {1, 2}
        assert result.metadata["candidates"] >= 2 * len(fine_sweep.family)
