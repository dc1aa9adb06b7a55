# -*- coding: utf-8 -*-
"""
곡면 위의 점, 경로, 호모토피 모델
"""
import enum
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

# 무게중심 좌표 허용 오차
BARYCENTRIC_TOLERANCE = 1e-12
# 이 값보다 더 음수이면 잘못된 좌표로 간주
BARYCENTRIC_REJECT = 1e-9


class PathKind(enum.Enum):
    """경로 종류"""
    OPEN = "open"
    LOOP = "loop"


class ShortenMode(enum.Enum):
    """곡선 단축 모드"""
    FIXED_ENDPOINTS = "fixed_endpoints"
    BASED_LOOP = "based_loop"
    FREE_LOOP = "free_loop"


@dataclass(frozen=True)
class SurfacePoint:
    """면 번호와 무게중심 좌표로 표현한 곡면 위의 점"""
    face: int
    barycentric: Tuple[float, float, float]

    def __post_init__(self):
        if self.face < 0:
            raise ValueError(f"face index must be non-negative, got {self.face}")

        coords = [float(c) for c in self.barycentric]
        if len(coords) != 3:
            raise ValueError("barycentric must have exactly three coordinates")
        if any(not math.isfinite(c) for c in coords):
            raise ValueError(f"barycentric coordinates must be finite: {coords}")
        if min(coords) < -BARYCENTRIC_REJECT:
            raise ValueError(f"barycentric coordinate below zero: {coords}")

        # 작은 음수는 잘라내고 다시 정규화
        clamped = [max(c, 0.0) for c in coords]
        total = sum(clamped)
        if total <= 0.0:
            raise ValueError("barycentric coordinates sum to zero")
        normalized = tuple(c / total for c in clamped)
        normalized = tuple(0.0 if c < BARYCENTRIC_TOLERANCE else c for c in normalized)
        total = sum(normalized)
        object.__setattr__(self, "face", int(self.face))
        object.__setattr__(self, "barycentric", tuple(c / total for c in normalized))

    @property
    def support(self) -> Tuple[int, ...]:
        """0 이 아닌 좌표의 모서리(코너) 번호"""
        return tuple(i for i, c in enumerate(self.barycentric) if c > BARYCENTRIC_TOLERANCE)

    @property
    def corner(self) -> Optional[int]:
        """꼭짓점 위의 점이면 해당 코너 번호"""
        support = self.support
        return support[0] if len(support) == 1 else None

    def key(self, digits: int = 12) -> Tuple[int, float, float, float]:
        """캐시 키"""
        b = self.barycentric
        return (self.face, round(b[0], digits), round(b[1], digits), round(b[2], digits))

    def to_dict(self) -> Dict[str, Any]:
        """딕셔너리 변환"""
        return {"face": self.face, "barycentric": list(self.barycentric)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SurfacePoint":
        """딕셔너리에서 생성"""
        return cls(face=int(data["face"]), barycentric=tuple(data["barycentric"]))


@dataclass
class GeodesicPath:
    """
    곡면 위의 꺾은선 경로

    segment j 는 faces[j] 면 안에 놓이며 points[j], points[j+1] 을 잇는다.
    점 하나로 이루어진 상수 경로는 faces 가 비어 있다.
    """
    points: List[SurfacePoint]
    faces: List[int]
    kind: PathKind = PathKind.OPEN
    length: float = 0.0
    straightness_defect: float = float("nan")
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not self.points:
            raise ValueError("path needs at least one point")
        if len(self.faces) != len(self.points) - 1:
            raise ValueError(
                f"path has {len(self.points)} points but {len(self.faces)} segment faces"
            )
        if self.length < 0:
            raise ValueError("path length must be non-negative")

    @property
    def start(self) -> SurfacePoint:
        return self.points[0]

    @property
    def end(self) -> SurfacePoint:
        return self.points[-1]

    @property
    def segment_count(self) -> int:
        return len(self.faces)

    @property
    def is_constant(self) -> bool:
        return self.segment_count == 0 or self.length <= 0.0

    @property
    def is_loop(self) -> bool:
        return self.kind == PathKind.LOOP

    @property
    def start_face(self) -> int:
        return self.faces[0] if self.faces else self.points[0].face

    @property
    def end_face(self) -> int:
        return self.faces[-1] if self.faces else self.points[-1].face

    def reverse(self) -> "GeodesicPath":
        """역방향 경로"""
        return GeodesicPath(
            points=list(reversed(self.points)),
            faces=list(reversed(self.faces)),
            kind=self.kind,
            length=self.length,
            straightness_defect=self.straightness_defect,
            metadata={},
        )

    def concatenate(self, other: "GeodesicPath", kind: Optional[PathKind] = None) -> "GeodesicPath":
        """
        경로 이어 붙이기

        Args:
            other: self 의 끝점에서 시작하는 경로
            kind: 결과 경로 종류 (None 이면 OPEN)

        Returns:
            이어 붙인 경로 (꺾임 인증은 초기화됨)
        """
        return GeodesicPath(
            points=list(self.points) + list(other.points[1:]),
            faces=list(self.faces) + list(other.faces),
            kind=kind or PathKind.OPEN,
            length=self.length + other.length,
        )

    def to_dict(self) -> Dict[str, Any]:
        """딕셔너리 변환"""
        return {
            "kind": self.kind.value,
            "length": self.length,
            "straightness_defect": (
                None if math.isnan(self.straightness_defect) else self.straightness_defect
            ),
            "faces": list(self.faces),
            "points": [[p.face, *p.barycentric] for p in self.points],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GeodesicPath":
        """딕셔너리에서 생성"""
        defect = data.get("straightness_defect")
        return cls(
            points=[SurfacePoint(int(row[0]), tuple(row[1:4])) for row in data["points"]],
            faces=[int(f) for f in data["faces"]],
            kind=PathKind(data.get("kind", "open")),
            length=float(data["length"]),
            straightness_defect=float("nan") if defect is None else float(defect),
        )


def concatenate_all(paths: Sequence[GeodesicPath], kind: Optional[PathKind] = None) -> GeodesicPath:
    """여러 경로를 순서대로 이어 붙이기"""
    if not paths:
        raise ValueError("nothing to concatenate")
    result = paths[0]
    for path in paths[1:]:
        result = result.concatenate(path)
    if kind is not None:
        result.kind = kind
    return result


@dataclass
class Homotopy:
    """
    경로(또는 루프)의 이산 호모토피

    max_length 는 항상 프레임 길이의 최댓값과 정확히 같다.
    """
    frames: List[GeodesicPath]
    mode: ShortenMode = ShortenMode.FIXED_ENDPOINTS
    budget: Optional[float] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not self.frames:
            raise ValueError("homotopy needs at least one frame")
        if self.budget is not None and self.budget < 0:
            raise ValueError("homotopy budget must be non-negative")

    @property
    def max_length(self) -> float:
        return max(frame.length for frame in self.frames)

    @property
    def lengths(self) -> List[float]:
        return [frame.length for frame in self.frames]

    @property
    def first(self) -> GeodesicPath:
        return self.frames[0]

    @property
    def last(self) -> GeodesicPath:
        return self.frames[-1]

    @property
    def within_budget(self) -> bool:
        return self.budget is None or self.max_length <= self.budget

    def gaps(self, distance: Callable[[GeodesicPath, GeodesicPath], float]) -> List[float]:
        """
        연속한 프레임 사이 거리 목록

        Args:
            distance: 두 경로 사이 거리 함수 (호 길이 정렬 비교)
        """
        return [distance(a, b) for a, b in zip(self.frames[:-1], self.frames[1:])]

    def concat(self, other: "Homotopy") -> "Homotopy":
        """두 호모토피를 이어 붙이기 (예산은 큰 쪽)"""
        budgets = [b for b in (self.budget, other.budget) if b is not None]
        return Homotopy(
            frames=list(self.frames) + list(other.frames),
            mode=self.mode,
            budget=max(budgets) if budgets else None,
        )

    def to_dict(self) -> Dict[str, Any]:
        """딕셔너리 변환"""
        return {
            "mode": self.mode.value,
            "budget": self.budget,
            "max_length": self.max_length,
            "frames": [frame.to_dict() for frame in self.frames],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Homotopy":
        """딕셔너리에서 생성"""
        return cls(
            frames=[GeodesicPath.from_dict(f) for f in data["frames"]],
            mode=ShortenMode(data.get("mode", "fixed_endpoints")),
            budget=data.get("budget"),
        )
