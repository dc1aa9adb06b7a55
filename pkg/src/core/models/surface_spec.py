# -*- coding: utf-8 -*-
"""
곡면 생성 사양 모델
"""
from dataclasses import dataclass, field
from typing import Any, Dict

from src.core.exceptions import UnsupportedKind

# cli 에서 쓰는 짧은 이름
KIND_ALIASES = {
    "sphere": "round_sphere",
    "round_sphere": "round_sphere",
    "ellipsoid": "ellipsoid",
    "bumpy": "bumpy_sphere",
    "bumpy_sphere": "bumpy_sphere",
    "dumbbell": "dumbbell",
    "torus": "flat_torus",
    "flat_torus": "flat_torus",
}

DEFAULT_RESOLUTION = 3000


@dataclass(frozen=True)
class SurfaceSpec:
    """생성기 이름, 기하 파라미터, 목표 변 개수"""
    kind: str
    params: Dict[str, float] = field(default_factory=dict)
    resolution: int = DEFAULT_RESOLUTION

    def __post_init__(self):
        kind = KIND_ALIASES.get(self.kind)
        if kind is None:
            raise UnsupportedKind(f"Unknown surface kind: {self.kind}", kind=self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "params", {k: float(v) for k, v in self.params.items()})

    @classmethod
    def parse(cls, text: str) -> "SurfaceSpec":
        """
        "sphere:r=1,res=2000" 형식 문자열 파싱

        Args:
            text: 종류와 key=value 목록

        Returns:
            SurfaceSpec

        Raises:
            UnsupportedKind: 종류를 알 수 없을 때
            ValueError: 파라미터 형식 오류
        """
        name, _, rest = text.strip().partition(":")
        params: Dict[str, float] = {}
        resolution = DEFAULT_RESOLUTION
        for item in filter(None, (part.strip() for part in rest.split(","))):
            key, sep, value = item.partition("=")
            if not sep:
                raise ValueError(f"Malformed surface parameter: {item}")
            if key.strip() in ("res", "resolution"):
                resolution = int(float(value))
            else:
                params[key.strip()] = float(value)
        return cls(kind=name.strip(), params=params, resolution=resolution)

    def to_dict(self) -> Dict[str, Any]:
        """딕셔너리 변환"""
        return {"kind": self.kind, "params": dict(self.params), "resolution": self.resolution}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SurfaceSpec":
        """딕셔너리에서 생성"""
        return cls(
            kind=data["kind"],
            params=dict(data.get("params", {})),
            resolution=int(data.get("resolution", DEFAULT_RESOLUTION)),
        )
