# -*- coding: utf-8 -*-
"""
열거 보고서 모델

EnumerationReport 는 cli 출력과 수용 테스트가 주고받는 단위다. JSON 필드 이름은
docs/SCHEMA.md 에 고정되어 있고 schema_version 으로 구분한다.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from src.core.exceptions import SchemaMismatch
from src.core.models.geometry import GeodesicPath, SurfacePoint

SCHEMA_VERSION = "1.0"


class Route:
    """보고서가 거친 파이프라인"""
    FILLING_TREE = "filling-tree"
    SWEEP_OUT = "sweep-out"
    PI1 = "pi1"


@dataclass
class BoundCheck:
    """
    부등식 하나의 판정

    value 는 검사 대상 값 (측지선 최대 길이 또는 sweep-out L), failures 는 경계를
    넘은 측지선 번호다. informational 이면 전체 판정에 넣지 않는다.
    """
    name: str
    bound: float
    value: float
    slack: float
    passed: bool
    informational: bool = False
    failures: List[int] = field(default_factory=list)
    message: str = ""

    @property
    def margin(self) -> float:
        """bound + slack - value (음수면 위반)"""
        return self.bound + self.slack - self.value

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "bound": self.bound,
            "value": self.value,
            "slack": self.slack,
            "passed": self.passed,
            "informational": self.informational,
            "failures": list(self.failures),
            "message": self.message,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BoundCheck":
        return cls(
            name=data["name"],
            bound=float(data["bound"]),
            value=float(data["value"]),
            slack=float(data["slack"]),
            passed=bool(data["passed"]),
            informational=bool(data.get("informational", False)),
            failures=[int(i) for i in data.get("failures", [])],
            message=data.get("message", ""),
        )


@dataclass
class EnumerationReport:
    """
    측지선 열거 결과

    geodesics 는 길이 순이고, provenance 와 certified 는 같은 번호의 측지선에 대한
    출처와 측지선 인증 결과다.
    """
    surface: str
    x: SurfacePoint
    y: SurfacePoint
    k: int
    geodesics: List[GeodesicPath]
    d: float
    q: int
    route: str
    chi: int
    h: float
    slack: float
    dist_xy: float
    provenance: List[str] = field(default_factory=list)
    certified: List[bool] = field(default_factory=list)
    bounds_checked: List[BoundCheck] = field(default_factory=list)
    sweep_L: Optional[float] = None
    lambda_: Optional[int] = None
    seed: Optional[int] = None
    flagged: bool = False
    flag: Optional[str] = None
    schema_version: str = SCHEMA_VERSION
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be at least 1, got {self.k}")
        if self.q not in (1, 2):
            raise ValueError(f"q must be 1 or 2, got {self.q}")
        if self.d < 0 or self.h <= 0:
            raise ValueError("diameter must be non-negative and h positive")
        if not self.provenance:
            self.provenance = ["unknown"] * len(self.geodesics)
        if len(self.provenance) != len(self.geodesics):
            raise ValueError("provenance must have one entry per geodesic")

    @property
    def lengths(self) -> List[float]:
        return [g.length for g in self.geodesics]

    @property
    def same_endpoints(self) -> bool:
        return self.x == self.y

    @property
    def complete(self) -> bool:
        return len(self.geodesics) >= self.k

    @property
    def bounds_passed(self) -> bool:
        return all(c.passed for c in self.bounds_checked if not c.informational)

    def to_dict(self) -> Dict[str, Any]:
        """JSON 직렬화용 딕셔너리"""
        return {
            "schema_version": self.schema_version,
            "surface": self.surface,
            "x": self.x.to_dict(),
            "y": self.y.to_dict(),
            "k": self.k,
            "d": self.d,
            "q": self.q,
            "route": self.route,
            "chi": self.chi,
            "h": self.h,
            "slack": self.slack,
            "dist_xy": self.dist_xy,
            "sweep_L": self.sweep_L,
            "lambda": self.lambda_,
            "seed": self.seed,
            "flagged": self.flagged,
            "flag": self.flag,
            "lengths": self.lengths,
            "provenance": list(self.provenance),
            "certified": list(self.certified),
            "bounds_checked": [c.to_dict() for c in self.bounds_checked],
            "geodesics": [g.to_dict() for g in self.geodesics],
            "metadata": dict(self.metadata),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "EnumerationReport":
        """
        딕셔너리에서 생성

        Raises:
            SchemaMismatch: schema_version 이 다르거나 필수 필드가 없을 때
        """
        version = data.get("schema_version")
        if version != SCHEMA_VERSION:
            raise SchemaMismatch(
                f"Report schema {version!r} is not {SCHEMA_VERSION!r}",
                expected=SCHEMA_VERSION, found=version,
            )
        try:
            return cls(
                surface=data["surface"],
                x=SurfacePoint.from_dict(data["x"]),
                y=SurfacePoint.from_dict(data["y"]),
                k=int(data["k"]),
                geodesics=[GeodesicPath.from_dict(g) for g in data["geodesics"]],
                d=float(data["d"]),
                q=int(data["q"]),
                route=data["route"],
                chi=int(data["chi"]),
                h=float(data["h"]),
                slack=float(data["slack"]),
                dist_xy=float(data["dist_xy"]),
                provenance=list(data.get("provenance", [])),
                certified=[bool(c) for c in data.get("certified", [])],
                bounds_checked=[BoundCheck.from_dict(c) for c in data.get("bounds_checked", [])],
                sweep_L=None if data.get("sweep_L") is None else float(data["sweep_L"]),
                lambda_=None if data.get("lambda") is None else int(data["lambda"]),
                seed=None if data.get("seed") is None else int(data["seed"]),
                flagged=bool(data.get("flagged", False)),
                flag=data.get("flag"),
                schema_version=version,
                metadata=dict(data.get("metadata", {})),
            )
        except (KeyError, TypeError) as e:
            raise SchemaMismatch(
                f"Report is missing or has a malformed field: {e}",
                expected=SCHEMA_VERSION, found=version,
            ) from e
