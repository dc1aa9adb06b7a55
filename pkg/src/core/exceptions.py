# -*- coding: utf-8 -*-
"""
예외 계층 - 입력 오류, 플래그된 결과, 내부 계약 위반
"""
from typing import Any, Dict, Optional


class GeodesicsError(Exception):
    """모든 라이브러리 예외의 기반 클래스"""

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = details

    def to_dict(self) -> Dict[str, Any]:
        """진단 정보 딕셔너리"""
        return {
            "error": type(self).__name__,
            "message": self.message,
            "details": {k: _plain(v) for k, v in self.details.items()},
        }


def _plain(value: Any) -> Any:
    if isinstance(value, (int, float, str, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return str(value)


# ---------------------------------------------------------------------------
# 입력 오류 (cli 종료 코드 2)
# ---------------------------------------------------------------------------


class InputError(GeodesicsError):
    """잘못된 입력"""


class MeshValidationError(InputError):
    """메쉬 검증 실패"""


class NonManifoldEdge(MeshValidationError):
    """두 면이 아닌 수의 면이 공유하는 변"""

    def __init__(self, message: str, edge: Optional[tuple] = None, face_count: int = 0):
        super().__init__(message, edge=edge, face_count=face_count)
        self.edge = edge
        self.face_count = face_count


class DegenerateFace(MeshValidationError):
    """삼각 부등식을 만족하지 않는 면"""

    def __init__(self, message: str, face: Optional[int] = None):
        super().__init__(message, face=face)
        self.face = face


class NonOrientable(MeshValidationError):
    """방향이 일관되지 않은 면 배치"""

    def __init__(self, message: str, edge: Optional[tuple] = None):
        super().__init__(message, edge=edge)
        self.edge = edge


class UnsupportedTopology(MeshValidationError):
    """지원하지 않는 오일러 특성수 또는 연결되지 않은 메쉬"""

    def __init__(self, message: str, euler_characteristic: Optional[int] = None):
        super().__init__(message, euler_characteristic=euler_characteristic)
        self.euler_characteristic = euler_characteristic


class MeshFormatError(MeshValidationError):
    """메쉬 파일 파싱 실패"""

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(message, path=path)
        self.path = path


class InvalidSurfacePoint(InputError):
    """면 번호 또는 무게중심 좌표가 잘못된 점"""


class UnsupportedKind(InputError):
    """알 수 없는 곡면 종류"""

    def __init__(self, message: str, kind: Optional[str] = None):
        super().__init__(message, kind=kind)
        self.kind = kind


class ResolutionTooCoarse(InputError):
    """해상도가 최소 변 개수보다 작음"""

    def __init__(self, message: str, resolution: Optional[int] = None):
        super().__init__(message, resolution=resolution)
        self.resolution = resolution


class EmptyDomain(InputError):
    """빈 면 부분집합"""


class NotOnCutLocus(InputError):
    """절단 궤적 그래프에서 2h 이상 떨어진 시작점"""

    def __init__(self, message: str, distance: Optional[float] = None):
        super().__init__(message, distance=distance)
        self.distance = distance


class SchemaMismatch(InputError):
    """JSON 스키마 불일치"""

    def __init__(self, message: str, expected: Any = None, found: Any = None):
        super().__init__(message, expected=expected, found=found)
        self.expected = expected
        self.found = found


# ---------------------------------------------------------------------------
# 플래그된 결과 (cli 종료 코드 1) - partial 에 부분 결과 보관
# ---------------------------------------------------------------------------


class FlaggedResult(GeodesicsError):
    """불완전하지만 반환 가능한 결과"""

    def __init__(self, message: str, partial: Any = None, **details: Any):
        super().__init__(message, **details)
        self.partial = partial


class MaxIterExceeded(FlaggedResult):
    """반복 한도 초과"""


class SingleGeodesic(FlaggedResult):
    """최단 측지선이 하나만 발견됨"""


class DegreeAmbiguous(FlaggedResult):
    """표본 면마다 사상 차수가 다름"""


class ExtractionIncomplete(FlaggedResult):
    """min-max 추출 결과가 k 개 미만"""


class EnumerationIncomplete(FlaggedResult):
    """열거 결과가 k 개 미만"""


class NoShortGenerator(FlaggedResult):
    """2d 이하의 비가축 루프를 찾지 못함"""


class ResolutionStall(FlaggedResult):
    """해상도보다 큰 영역에서 절단 궤적이 비어 있음"""


class BoundViolated(FlaggedResult):
    """조립한 sweep-out 의 L 이 길이 상한을 넘음"""


# ---------------------------------------------------------------------------
# 실행 중 계약 위반
# ---------------------------------------------------------------------------


class VertexHit(GeodesicsError):
    """엄격 모드에서 직선 추적이 꼭짓점에 닿음"""

    def __init__(self, message: str, vertex: Optional[int] = None):
        super().__init__(message, vertex=vertex)
        self.vertex = vertex


class LocalityViolated(GeodesicsError):
    """표본 간격이 국소 반경을 초과"""

    def __init__(self, message: str, gap: float = 0.0, radius: float = 0.0):
        super().__init__(message, gap=gap, radius=radius)
        self.gap = gap
        self.radius = radius


class BudgetExceeded(GeodesicsError):
    """호모토피 프레임 길이가 예산을 초과 (내부 버그)"""

    def __init__(self, message: str, frame_length: float = 0.0, budget: float = 0.0):
        super().__init__(message, frame_length=frame_length, budget=budget)
        self.frame_length = frame_length
        self.budget = budget


class ObstructionMismatch(GeodesicsError):
    """두 루프의 방해 측지선이 서로 다름"""

    def __init__(self, message: str, frechet: float = 0.0):
        super().__init__(message, frechet=frechet)
        self.frechet = frechet
