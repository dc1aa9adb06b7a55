"""
예외 계층 테스트
"""
import pytest

from src.core.exceptions import (
    BoundViolated,
    BudgetExceeded,
    DegenerateFace,
    EnumerationIncomplete,
    FlaggedResult,
    GeodesicsError,
    InputError,
    MeshFormatError,
    MeshValidationError,
    NonManifoldEdge,
    NotOnCutLocus,
    SchemaMismatch,
    UnsupportedTopology,
    VertexHit,
)


class TestExceptionHierarchy:
    """예외 분류 테스트"""

    def test_mesh_errors_are_input_errors(self):
        """메쉬 검증 오류는 입력 오류"""
        for cls in (NonManifoldEdge, DegenerateFace, UnsupportedTopology, MeshFormatError):
            assert issubclass(cls, MeshValidationError)
            assert issubclass(cls, InputError)

    def test_flagged_results_are_not_input_errors(self):
        """플래그 결과와 입력 오류는 별개"""
        assert issubclass(EnumerationIncomplete, FlaggedResult)
        assert not issubclass(EnumerationIncomplete, InputError)
        assert not issubclass(VertexHit, (InputError, FlaggedResult))
        assert issubclass(VertexHit, GeodesicsError)
        assert issubclass(BoundViolated, FlaggedResult)
        assert not issubclass(BoundViolated, InputError)

    def test_flagged_result_keeps_partial(self):
        """부분 결과 보관"""
        err = EnumerationIncomplete("found 2 of 3", partial=[1, 2], found=2)
        assert err.partial == [1, 2]
        assert err.details == {"found": 2}
        assert str(err) == "found 2 of 3"


class TestExceptionDetails:
    """진단 정보 테스트"""

    def test_to_dict(self):
        """진단 딕셔너리"""
        err = NonManifoldEdge("edge (1, 2) has 3 faces", edge=(1, 2), face_count=3)
        data = err.to_dict()
        assert data["error"] == "NonManifoldEdge"
        assert data["details"] == {"edge": [1, 2], "face_count": 3}

    def test_typed_attributes(self):
        """예외별 속성"""
        assert UnsupportedTopology("torus", euler_characteristic=0).euler_characteristic == 0
        assert NotOnCutLocus("far", distance=0.5).distance == 0.5
        mismatch = SchemaMismatch("bad", expected="1.0", found="0.9")
        assert (mismatch.expected, mismatch.found) == ("1.0", "0.9")
        budget = BudgetExceeded("over", frame_length=3.0, budget=2.0)
        assert budget.details == {"frame_length": 3.0, "budget": 2.0}

    def test_unknown_detail_values_become_strings(self):
        """JSON 으로 못 쓰는 값은 문자열로"""
        err = GeodesicsError("boom", where=object)
        assert isinstance(err.to_dict()["details"]["where"], str)

    def test_catch_as_base(self):
        """기반 클래스로 잡기"""
        with pytest.raises(GeodesicsError):
            raise MeshFormatError("cannot parse", path="bad.obj")
