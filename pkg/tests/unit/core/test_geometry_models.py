"""
곡면 점, 경로, 호모토피 모델 테스트
"""
import math

import pytest

from src.core.models import (
    GeodesicPath,
    Homotopy,
    PathKind,
    ShortenMode,
    SurfacePoint,
    concatenate_all,
)


def _path(face_seq, length, kind=PathKind.OPEN):
    points = [SurfacePoint(f, (1.0, 0.0, 0.0)) for f in face_seq]
    return GeodesicPath(points=points, faces=list(face_seq[:-1]), kind=kind, length=length)


class TestSurfacePoint:
    """SurfacePoint 테스트"""

    def test_normalizes_barycentric(self):
        """무게중심 좌표 정규화"""
        p = SurfacePoint(3, (2.0, 1.0, 1.0))
        assert p.barycentric == pytest.approx((0.5, 0.25, 0.25))
        assert sum(p.barycentric) == pytest.approx(1.0)

    def test_clamps_tiny_negative(self):
        """아주 작은 음수는 0 으로 자름"""
        p = SurfacePoint(0, (1.0, -1e-13, 0.0))
        assert p.barycentric == (1.0, 0.0, 0.0)
        assert p.corner == 0

    def test_rejects_negative(self):
        """음수 좌표 거부"""
        with pytest.raises(ValueError, match="below zero"):
            SurfacePoint(0, (1.2, -0.2, 0.0))

    def test_rejects_bad_face_and_zero_sum(self):
        """음수 면 번호와 합 0 거부"""
        with pytest.raises(ValueError):
            SurfacePoint(-1, (1.0, 0.0, 0.0))
        with pytest.raises(ValueError, match="sum to zero"):
            SurfacePoint(0, (0.0, 0.0, 0.0))

    def test_support_and_corner(self):
        """변 위의 점과 꼭짓점 위의 점 구분"""
        on_side = SurfacePoint(1, (0.5, 0.5, 0.0))
        assert on_side.support == (0, 1)
        assert on_side.corner is None
        assert SurfacePoint(1, (0.0, 0.0, 1.0)).corner == 2

    def test_equality_and_hash(self):
        """같은 좌표는 같은 점"""
        a = SurfacePoint(4, (1.0, 1.0, 2.0))
        b = SurfacePoint(4, (0.25, 0.25, 0.5))
        assert a == b
        assert len({a, b}) == 1
        assert a.key() == b.key()

    def test_dict_round_trip(self):
        """딕셔너리 변환"""
        p = SurfacePoint(7, (0.2, 0.3, 0.5))
        data = p.to_dict()
        assert data["face"] == 7
        assert SurfacePoint.from_dict(data) == p


class TestGeodesicPath:
    """GeodesicPath 테스트"""

    def test_face_count_must_match(self):
        """선분 수와 면 수 일치 검사"""
        points = [SurfacePoint(0, (1, 0, 0)), SurfacePoint(0, (0, 1, 0))]
        with pytest.raises(ValueError, match="segment faces"):
            GeodesicPath(points=points, faces=[])

    def test_rejects_empty_and_negative_length(self):
        """빈 경로와 음수 길이 거부"""
        with pytest.raises(ValueError):
            GeodesicPath(points=[], faces=[])
        with pytest.raises(ValueError, match="non-negative"):
            _path([0, 0], -1.0)

    def test_constant_path(self):
        """점 하나짜리 경로"""
        path = GeodesicPath(points=[SurfacePoint(2, (1, 0, 0))], faces=[])
        assert path.is_constant
        assert path.start == path.end
        assert path.start_face == 2

    def test_reverse(self):
        """역방향 경로"""
        points = [SurfacePoint(0, (1, 0, 0)), SurfacePoint(0, (0, 1, 0)), SurfacePoint(1, (0, 0, 1))]
        path = GeodesicPath(points=points, faces=[0, 1], length=2.0, metadata={"x": 1})
        rev = path.reverse()
        assert rev.start == path.end
        assert rev.end == path.start
        assert rev.faces == [1, 0]
        assert rev.length == 2.0
        assert rev.metadata == {}

    def test_concatenate(self):
        """이어 붙이면 길이가 더해지고 OPEN 이 됨"""
        a = _path([0, 1], 1.0, kind=PathKind.LOOP)
        b = _path([1, 2, 3], 2.5)
        joined = a.concatenate(b)
        assert joined.length == pytest.approx(3.5)
        assert len(joined.points) == 4
        assert joined.faces == [0, 1, 2]
        assert joined.kind == PathKind.OPEN
        assert math.isnan(joined.straightness_defect)

    def test_concatenate_all(self):
        """여러 경로 이어 붙이기"""
        joined = concatenate_all([_path([0, 1], 1.0), _path([1, 2], 1.0), _path([2, 0], 1.0)],
                                 kind=PathKind.LOOP)
        assert joined.is_loop
        assert joined.length == pytest.approx(3.0)
        with pytest.raises(ValueError):
            concatenate_all([])

    def test_dict_round_trip(self):
        """딕셔너리 변환 (꺾임 값이 없으면 None)"""
        path = _path([0, 1, 2], 1.25)
        data = path.to_dict()
        assert data["straightness_defect"] is None
        assert data["points"][0] == [0, 1.0, 0.0, 0.0]
        restored = GeodesicPath.from_dict(data)
        assert restored.points == path.points
        assert restored.faces == path.faces
        assert restored.length == 1.25


class TestHomotopy:
    """Homotopy 테스트"""

    def test_max_length_matches_frames(self):
        """최대 길이는 프레임 길이의 최댓값"""
        h = Homotopy(frames=[_path([0, 1], 1.0), _path([0, 1], 3.0), _path([0, 1], 2.0)])
        assert h.max_length == 3.0
        assert h.lengths == [1.0, 3.0, 2.0]
        assert h.first.length == 1.0
        assert h.last.length == 2.0

    def test_budget(self):
        """예산 검사"""
        frames = [_path([0, 1], 1.0), _path([0, 1], 2.0)]
        assert Homotopy(frames=frames, budget=2.0).within_budget
        assert not Homotopy(frames=frames, budget=1.5).within_budget
        assert Homotopy(frames=frames).within_budget
        with pytest.raises(ValueError):
            Homotopy(frames=frames, budget=-1.0)
        with pytest.raises(ValueError):
            Homotopy(frames=[])

    def test_gaps_and_concat(self):
        """프레임 간격과 이어 붙이기"""
        a = Homotopy(frames=[_path([0, 1], 1.0), _path([0, 1], 2.0)], budget=2.0)
        b = Homotopy(frames=[_path([0, 1], 4.0)], budget=5.0, mode=ShortenMode.BASED_LOOP)
        gaps = a.gaps(lambda p, q: abs(p.length - q.length))
        assert gaps == [1.0]
        joined = a.concat(b)
        assert len(joined.frames) == 3
        assert joined.budget == 5.0
        assert joined.mode == ShortenMode.FIXED_ENDPOINTS

    def test_dict_round_trip(self):
        """딕셔너리 변환"""
        h = Homotopy(frames=[_path([0, 1], 1.0)], mode=ShortenMode.FREE_LOOP, budget=3.0)
        data = h.to_dict()
        assert data["max_length"] == 1.0
        restored = Homotopy.from_dict(data)
        assert restored.mode == ShortenMode.FREE_LOOP
        assert restored.budget == 3.0
