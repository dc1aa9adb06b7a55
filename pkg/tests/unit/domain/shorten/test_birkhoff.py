"""
Birkhoff 곡선 단축 테스트
"""
import math

import pytest

from src.core.exceptions import LocalityViolated, MaxIterExceeded
from src.core.models import ShortenMode
from src.domain.shorten import (
    DiscretizedCurve,
    GeodesicCertificate,
    ShortenStatus,
    birkhoff_step,
    resample,
    shorten_to_critical,
)
from src.domain.shorten import birkhoff
from src.domain.surface import make_path
from src.domain.surface.topology import edge_loop_path
from src.infrastructure.config import GeodesicSettings

# (0,0) 에서 (0.15, 0.15) 까지 계단 (꼭짓점 번호 = 20·i + j)
STAIRCASE = [0, 20, 21, 41, 42, 62, 63]
# 변 길이 0.3 인 정사각형 (축약 가능)
SQUARE = [20 * i for i in range(7)] + [120 + j for j in range(1, 7)] + \
    [20 * i + 6 for i in range(5, -1, -1)] + [j for j in range(5, -1, -1)]
# j = 0 가로 고리 (비가축)
HORIZONTAL = [20 * i for i in range(20)] + [0]


@pytest.fixture
def staircase(flat_torus):
    return make_path(flat_torus, [flat_torus.vertex_point(v) for v in STAIRCASE])


def _non_increasing(values, slack=1e-9):
    return all(b <= a + slack for a, b in zip(values, values[1:]))


class TestResample:
    """재표본 테스트"""

    def test_spacing(self, flat_torus, staircase):
        """간격 이하로 나눔, 끝점 유지"""
        curve = resample(flat_torus, staircase, 0.04)
        assert curve.segment_count == 8
        assert max(curve.gaps) <= 0.04 + 1e-12
        assert curve.samples[0] == staircase.start
        assert curve.length == pytest.approx(0.3)
        assert curve.mode == ShortenMode.FIXED_ENDPOINTS

    def test_free_loop_has_even_count(self, flat_torus):
        """자유 루프 표본 수는 짝수"""
        loop = edge_loop_path(flat_torus, HORIZONTAL)
        curve = resample(flat_torus, loop, 1.0 / 7, ShortenMode.FREE_LOOP)
        assert curve.segment_count % 2 == 0
        assert curve.is_loop

    def test_bad_spacing(self, flat_torus, staircase):
        """양수가 아닌 간격"""
        with pytest.raises(ValueError):
            resample(flat_torus, staircase, 0.0)

    def test_curve_validation(self, flat_torus):
        """표본과 선분 수 불일치"""
        with pytest.raises(ValueError):
            DiscretizedCurve(samples=[], segments=[])
        with pytest.raises(ValueError, match="segments"):
            DiscretizedCurve(samples=[flat_torus.vertex_point(0)] * 3, segments=[])


class TestBirkhoffStep:
    """단계 테스트"""

    def test_length_never_increases(self, flat_torus, staircase):
        """한 단계 후 길이는 늘지 않고 끝점 고정"""
        curve = resample(flat_torus, staircase, 0.05)
        step = birkhoff_step(flat_torus, curve)
        assert step.length <= curve.length + 1e-12
        assert step.samples[0] is curve.samples[0]
        assert step.samples[-1] is curve.samples[-1]

    def test_locality(self, flat_torus, staircase):
        """국소 반경보다 긴 간격은 거부"""
        curve = resample(flat_torus, staircase, 0.15)
        tolerances = GeodesicSettings().with_overrides(
            **{"shorten.locality_factor": 1.0, "shorten.spacing_factor": 0.5}
        ).resolve(flat_torus)
        with pytest.raises(LocalityViolated) as exc_info:
            birkhoff_step(flat_torus, curve, tolerances)
        assert exc_info.value.gap > exc_info.value.radius


class TestShortenToCritical:
    """수렴 테스트"""

    def test_staircase_becomes_straight(self, flat_torus, staircase):
        """계단은 대각선 측지선으로"""
        result = shorten_to_critical(flat_torus, staircase)
        assert result.status == ShortenStatus.CONVERGED_GEODESIC
        assert result.converged and not result.flagged
        assert result.path.length == pytest.approx(0.15 * math.sqrt(2.0), abs=1e-6)
        assert flat_torus.same_location(result.path.start, staircase.start)
        assert flat_torus.same_location(result.path.end, staircase.end)

    def test_homotopy_is_monotone_and_within_budget(self, flat_torus, staircase):
        """호모토피 프레임 길이는 감소하고 예산 이내"""
        result = shorten_to_critical(flat_torus, staircase)
        lengths = result.homotopy.lengths
        assert lengths[0] == pytest.approx(0.3)
        assert _non_increasing(lengths)
        assert result.homotopy.within_budget
        assert result.homotopy.max_length == pytest.approx(0.3)

    def test_contractible_loop_collapses(self, flat_torus):
        """축약 가능한 루프는 점으로"""
        loop = edge_loop_path(flat_torus, SQUARE)
        assert loop.length == pytest.approx(1.2)
        result = shorten_to_critical(flat_torus, loop, ShortenMode.BASED_LOOP)
        assert result.is_point
        assert result.path.is_constant
        assert _non_increasing(result.homotopy.lengths)

    def test_noncontractible_loop_stays(self, flat_torus):
        """비가축 고리는 길이 1 측지선으로 남음"""
        loop = edge_loop_path(flat_torus, HORIZONTAL)
        result = shorten_to_critical(flat_torus, loop, ShortenMode.FREE_LOOP)
        assert result.status == ShortenStatus.CONVERGED_GEODESIC
        assert result.path.length == pytest.approx(1.0, abs=1e-6)
        assert result.path.is_loop

    def test_max_iter(self, flat_torus, staircase):
        """반복 한도"""
        result = shorten_to_critical(flat_torus, staircase, max_iter=1, tol=1e-15)
        assert result.status == ShortenStatus.MAX_ITER
        assert result.flagged and result.flag == "MaxIterExceeded"
        assert result.iterations == 1
        with pytest.raises(MaxIterExceeded) as exc_info:
            shorten_to_critical(flat_torus, staircase, max_iter=1, tol=1e-15, strict=True)
        assert exc_info.value.partial.iterations == 1

    def test_bad_tol(self, flat_torus, staircase):
        """양수가 아닌 tol"""
        with pytest.raises(ValueError):
            shorten_to_critical(flat_torus, staircase, tol=0.0)

    def test_to_dict(self, flat_torus, staircase):
        """결과 딕셔너리"""
        data = shorten_to_critical(flat_torus, staircase).to_dict()
        assert data["status"] == "converged_geodesic"
        assert data["max_length"] == pytest.approx(0.3)

    def test_uncertified_curve_is_flagged(self, flat_torus, staircase, mocker):
        """길이는 멈췄지만 꺾임 인증에 실패하면 측지선으로 보고하지 않음"""
        failing = GeodesicCertificate(passed=False, max_defect=0.5, worst_index=1, theta_tol=0.1)
        certify = mocker.patch("src.domain.shorten.birkhoff.is_geodesic", return_value=failing)
        result = shorten_to_critical(flat_torus, staircase)
        assert certify.called
        assert result.status == ShortenStatus.MAX_ITER
        assert not result.converged
        assert result.flagged and result.flag == "Uncertified"
        assert result.metadata["max_defect"] == 0.5
        with pytest.raises(MaxIterExceeded, match="straightness") as exc_info:
            shorten_to_critical(flat_torus, staircase, strict=True)
        assert exc_info.value.partial.flag == "Uncertified"

    def test_certified_curve_keeps_status(self, flat_torus, staircase, mocker):
        """인증을 통과하면 상태와 플래그가 그대로"""
        spy = mocker.spy(birkhoff, "is_geodesic")
        result = shorten_to_critical(flat_torus, staircase)
        assert spy.call_count == 1
        assert result.status == ShortenStatus.CONVERGED_GEODESIC
        assert result.flag is None
