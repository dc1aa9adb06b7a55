# -*- coding: utf-8 -*-
"""
설정 로드 - config.yaml + 환경 변수 + .env
"""
import logging
import math
import os
import re
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import TYPE_CHECKING, Any, Dict, Optional, Union

import yaml
from dotenv import load_dotenv

if TYPE_CHECKING:
    from src.domain.surface.mesh import IntrinsicMesh

logger = logging.getLogger(__name__)

CONFIG_ENV_VAR = "GEODESICS_CONFIG"
PROJECT_ROOT = Path(__file__).resolve().parent.parent.parent.parent
DEFAULT_CONFIG_PATH = PROJECT_ROOT / "config" / "config.yaml"

_PLACEHOLDER = re.compile(r"\$\{([A-Za-z_][A-Za-z0-9_]*)(?::([^}]*))?\}")


def expand_placeholders(value: Any) -> Any:
    """
    ${NAME:default} 자리표시자를 환경 변수 값으로 치환

    문자열 전체가 하나의 자리표시자이면 YAML 스칼라로 다시 해석한다.
    """
    if isinstance(value, dict):
        return {k: expand_placeholders(v) for k, v in value.items()}
    if isinstance(value, list):
        return [expand_placeholders(v) for v in value]
    if not isinstance(value, str):
        return value

    def substitute(match: "re.Match[str]") -> str:
        return os.environ.get(match.group(1), match.group(2) or "")

    expanded = _PLACEHOLDER.sub(substitute, value)
    if expanded != value and _PLACEHOLDER.fullmatch(value):
        return yaml.safe_load(expanded) if expanded else None
    return expanded


def config_path(path: Optional[Union[str, Path]] = None) -> Path:
    """명시 경로 > GEODESICS_CONFIG > 기본 경로"""
    if path is not None:
        return Path(path)
    env_path = os.environ.get(CONFIG_ENV_VAR)
    return Path(env_path) if env_path else DEFAULT_CONFIG_PATH


def load_config(path: Optional[Union[str, Path]] = None) -> Dict[str, Any]:
    """
    설정 파일 로드

    Args:
        path: 설정 파일 경로 (없으면 환경 변수 또는 기본 경로)

    Returns:
        자리표시자가 치환된 설정 딕셔너리 (파일이 없으면 빈 딕셔너리)
    """
    load_dotenv()
    resolved = config_path(path)
    if not resolved.exists():
        if path is not None:
            raise FileNotFoundError(f"Config file not found: {resolved}")
        logger.warning(f"Config file {resolved} not found, using defaults")
        return {}
    with open(resolved, "r", encoding="utf-8") as f:
        raw = yaml.safe_load(f) or {}
    return expand_placeholders(raw)


def _check_positive(owner: object) -> None:
    for f in fields(owner):  # type: ignore[arg-type]
        value = getattr(owner, f.name)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            continue
        if not value > 0:
            raise ValueError(f"{type(owner).__name__}.{f.name} must be positive, got {value}")


def _section(cls: type, data: Optional[Dict[str, Any]]) -> Any:
    if not data:
        return cls()
    known = {f.name for f in fields(cls)}
    unknown = set(data) - known
    if unknown:
        logger.warning(f"Ignoring unknown {cls.__name__} keys: {sorted(unknown)}")
    return cls(**{k: v for k, v in data.items() if k in known})


@dataclass(frozen=True)
class SurfaceSettings:
    """곡면 생성 기본값"""
    default_resolution: int = 3000
    strict_trace: bool = False

    def __post_init__(self):
        _check_positive(self)


@dataclass(frozen=True)
class MetricSettings:
    """거리 계산 설정"""
    steiner_points: int = 3
    resolution_constant: float = 1.0
    path_slack: float = 0.02

    def __post_init__(self):
        _check_positive(self)


@dataclass(frozen=True)
class ShortenSettings:
    """Birkhoff 단축 설정 (길이는 h 배수)"""
    spacing_factor: float = 2.0
    locality_factor: float = 5.0
    collapse_factor: float = 2.0
    tol: float = 1e-6
    max_iter_factor: float = 10.0
    theta_tol_factor: float = 10.0
    theta_tol_floor: float = 1e-6

    def __post_init__(self):
        _check_positive(self)
        if self.spacing_factor > self.locality_factor:
            raise ValueError("shorten.spacing_factor must not exceed shorten.locality_factor")


@dataclass(frozen=True)
class CutLocusSettings:
    """절단 궤적 설정 (길이는 h 배수)"""
    splitting_factor: float = 2.0
    splitting_angle: float = 0.4
    spur_factor: float = 3.0
    eps: float = 0.03
    slide_radius_factor: float = 2.0

    def __post_init__(self):
        _check_positive(self)


@dataclass(frozen=True)
class WeaveSettings:
    """digon 캐스케이드와 sweep-out 설정"""
    angle_tol_factor: float = 10.0
    max_depth: int = 6
    sweep_members: int = 24
    minmax_birkhoff_steps: int = 0
    minmax_angle_factor: float = 1.0
    degree_samples: int = 20

    def __post_init__(self):
        if self.minmax_birkhoff_steps < 0:
            raise ValueError("weave.minmax_birkhoff_steps must be non-negative")
        positive = ("angle_tol_factor", "max_depth", "sweep_members", "minmax_angle_factor", "degree_samples")
        for name in positive:
            if not getattr(self, name) > 0:
                raise ValueError(f"weave.{name} must be positive")
        if self.degree_samples < 20:
            raise ValueError("weave.degree_samples must be at least 20")


@dataclass(frozen=True)
class EnumerateSettings:
    """열거 파이프라인 설정"""
    dedupe_factor: float = 5.0
    slack_factor: float = 10.0
    max_power: int = 4
    generator_seeds: int = 16

    def __post_init__(self):
        _check_positive(self)


@dataclass(frozen=True)
class PerformanceSettings:
    """병렬성, 캐시, 진행 표시"""
    max_workers: int = 4
    show_progress: bool = False
    distance_cache_size: int = 64

    def __post_init__(self):
        _check_positive(self)


@dataclass(frozen=True)
class Tolerances:
    """메쉬 해상도 h 로 환산한 절대 허용치"""
    h: float
    spacing: float
    locality_radius: float
    collapse_radius: float
    splitting_threshold: float
    splitting_angle: float
    spur_length: float
    slide_radius: float
    dedupe_radius: float
    slack: float
    theta_tol: float
    eps: float
    tol: float
    max_iter_factor: float
    resolution_constant: float
    path_slack: float

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class GeodesicSettings:
    """전체 설정 묶음"""
    surface: SurfaceSettings = field(default_factory=SurfaceSettings)
    metric: MetricSettings = field(default_factory=MetricSettings)
    shorten: ShortenSettings = field(default_factory=ShortenSettings)
    cutlocus: CutLocusSettings = field(default_factory=CutLocusSettings)
    weave: WeaveSettings = field(default_factory=WeaveSettings)
    enumerate: EnumerateSettings = field(default_factory=EnumerateSettings)
    performance: PerformanceSettings = field(default_factory=PerformanceSettings)

    @classmethod
    def from_dict(cls, config: Dict[str, Any]) -> "GeodesicSettings":
        """설정 딕셔너리에서 생성"""
        return cls(
            surface=_section(SurfaceSettings, config.get("surface")),
            metric=_section(MetricSettings, config.get("metric")),
            shorten=_section(ShortenSettings, config.get("shorten")),
            cutlocus=_section(CutLocusSettings, config.get("cutlocus")),
            weave=_section(WeaveSettings, config.get("weave")),
            enumerate=_section(EnumerateSettings, config.get("enumerate")),
            performance=_section(PerformanceSettings, config.get("performance")),
        )

    def with_overrides(self, **overrides: Any) -> "GeodesicSettings":
        """
        "section.key" 형식 키로 일부 값 교체

        Example:
            settings.with_overrides(**{"cutlocus.eps": 0.05})
        """
        sections: Dict[str, Dict[str, Any]] = {}
        for dotted, value in overrides.items():
            if value is None:
                continue
            section, _, key = dotted.partition(".")
            if not hasattr(self, section) or not key:
                raise ValueError(f"Unknown setting: {dotted}")
            sections.setdefault(section, {})[key] = value
        updated = self
        for section, values in sections.items():
            updated = replace(updated, **{section: replace(getattr(updated, section), **values)})
        return updated

    def resolve(self, mesh: "IntrinsicMesh") -> Tolerances:
        """메쉬 해상도 기준 절대 허용치"""
        return self.resolve_h(mesh.max_edge_length)

    def resolve_h(self, h: float) -> Tolerances:
        """해상도 h 기준 절대 허용치"""
        c = self.metric.resolution_constant
        theta_tol = max(self.shorten.theta_tol_factor * h, self.shorten.theta_tol_floor)
        return Tolerances(
            h=h,
            spacing=self.shorten.spacing_factor * h,
            locality_radius=self.shorten.locality_factor * h,
            collapse_radius=self.shorten.collapse_factor * h,
            splitting_threshold=self.cutlocus.splitting_factor * h,
            splitting_angle=self.cutlocus.splitting_angle,
            spur_length=self.cutlocus.spur_factor * h,
            slide_radius=self.cutlocus.slide_radius_factor * h,
            dedupe_radius=self.enumerate.dedupe_factor * h,
            slack=self.enumerate.slack_factor * c * h,
            theta_tol=min(theta_tol, math.pi / 2),
            eps=self.cutlocus.eps,
            tol=self.shorten.tol,
            max_iter_factor=self.shorten.max_iter_factor,
            resolution_constant=c,
            path_slack=self.metric.path_slack,
        )

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


_settings: Optional[GeodesicSettings] = None


def load_settings(path: Optional[Union[str, Path]] = None) -> GeodesicSettings:
    """설정 파일에서 GeodesicSettings 생성"""
    return GeodesicSettings.from_dict(load_config(path))


def get_settings() -> GeodesicSettings:
    """프로세스 전역 설정 (처음 호출 시 로드)"""
    global _settings
    if _settings is None:
        _settings = load_settings()
    return _settings


def set_settings(settings: Optional[GeodesicSettings]) -> None:
    """전역 설정 교체 (None 이면 다음 호출 때 다시 로드)"""
    global _settings
    _settings = settings
