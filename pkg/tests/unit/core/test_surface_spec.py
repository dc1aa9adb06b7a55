"""
곡면 생성 사양과 생성기 인터페이스 테스트
"""
import pytest

from src.core.exceptions import UnsupportedKind
from src.core.interfaces import ISurfaceGenerator
from src.core.models import DEFAULT_RESOLUTION, SurfaceSpec


class TestSurfaceSpec:
    """SurfaceSpec 테스트"""

    def test_parse(self):
        """cli 문자열 파싱"""
        spec = SurfaceSpec.parse("sphere:r=1,res=2000")
        assert spec.kind == "round_sphere"
        assert spec.params == {"r": 1.0}
        assert spec.resolution == 2000

    def test_parse_defaults(self):
        """파라미터 없이 종류만"""
        spec = SurfaceSpec.parse("torus")
        assert spec.kind == "flat_torus"
        assert spec.params == {}
        assert spec.resolution == DEFAULT_RESOLUTION

    def test_parse_errors(self):
        """형식 오류와 알 수 없는 종류"""
        with pytest.raises(ValueError, match="Malformed"):
            SurfaceSpec.parse("sphere:r")
        with pytest.raises(UnsupportedKind) as exc_info:
            SurfaceSpec.parse("klein_bottle:res=500")
        assert exc_info.value.kind == "klein_bottle"

    def test_dict_round_trip(self):
        """딕셔너리 변환"""
        spec = SurfaceSpec("bumpy", {"eps": 0.2}, 1000)
        assert spec.kind == "bumpy_sphere"
        assert SurfaceSpec.from_dict(spec.to_dict()) == spec


class TestSurfaceGeneratorInterface:
    """ISurfaceGenerator 인터페이스 테스트"""

    def test_cannot_instantiate(self):
        """추상 클래스는 생성 불가"""
        with pytest.raises(TypeError):
            ISurfaceGenerator()

    def test_describe(self):
        """기본 describe 구현"""

        class Dummy(ISurfaceGenerator):
            kind = "dummy"
            parameters = {"r": 2.0}

            def validate_parameters(self):
                pass

            def generate(self, resolution):
                return None

        assert Dummy().describe() == {"kind": "dummy", "params": {"r": 2.0}}
