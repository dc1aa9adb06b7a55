# -*- coding: utf-8 -*-
"""
이산 Birkhoff 곡선 단축

표본점을 짝수/홀수 번갈아 이웃 두 점 사이 국소 최단 호의 중점으로 옮긴다.
양 끝 고정 경로, 기준점 고정 루프, 자유 루프 세 가지 모드를 지원한다.
"""
import enum
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Union

from src.core.exceptions import LocalityViolated, MaxIterExceeded
from src.core.models.geometry import (
    GeodesicPath,
    Homotopy,
    PathKind,
    ShortenMode,
    SurfacePoint,
    concatenate_all,
)
from src.domain.shorten.certify import GeodesicCertificate, is_geodesic
from src.domain.surface.mesh import IntrinsicMesh
from src.domain.surface.paths import constant_path, midpoint_split, rebase_loop, split_at
from src.domain.surface.unfolding import straighten
from src.infrastructure.config.settings import GeodesicSettings, Tolerances, get_settings

logger = logging.getLogger(__name__)

# 한 단계에서 길이가 늘어나도 되는 한도
MONOTONE_SLACK = 1e-12
# 반복 한도 하한
MIN_ITERATIONS = 50


class ShortenStatus(enum.Enum):
    """단축 결과 상태"""
    CONVERGED_POINT = "converged_point"
    CONVERGED_GEODESIC = "converged_geodesic"
    MAX_ITER = "max_iter"


@dataclass
class DiscretizedCurve:
    """
    표본점과 이웃 표본 사이 국소 호로 이루어진 곡선

    segments[j] 는 samples[j] 에서 samples[j+1] 로 간다.
    루프 모드에서는 samples[-1] 이 samples[0] 과 같은 위치다.
    """
    samples: List[SurfacePoint]
    segments: List[GeodesicPath]
    mode: ShortenMode = ShortenMode.FIXED_ENDPOINTS
    spacing: float = 0.0

    def __post_init__(self):
        if not self.samples:
            raise ValueError("curve needs at least one sample")
        if len(self.segments) != max(len(self.samples) - 1, 0):
            raise ValueError(
                f"curve has {len(self.samples)} samples but {len(self.segments)} segments"
            )
        if self.spacing < 0:
            raise ValueError("spacing must be non-negative")

    @property
    def is_loop(self) -> bool:
        return self.mode != ShortenMode.FIXED_ENDPOINTS

    @property
    def segment_count(self) -> int:
        return len(self.segments)

    @property
    def length(self) -> float:
        return float(sum(seg.length for seg in self.segments))

    @property
    def gaps(self) -> List[float]:
        return [seg.length for seg in self.segments]

    def to_path(self) -> GeodesicPath:
        """이어 붙인 경로"""
        kind = PathKind.LOOP if self.is_loop else PathKind.OPEN
        if not self.segments:
            return constant_path(self.samples[0], kind)
        path = concatenate_all(self.segments, kind=kind)
        path.metadata["samples"] = len(self.samples)
        return path


@dataclass
class ShortenResult:
    """shorten_to_critical 결과"""
    status: ShortenStatus
    path: GeodesicPath
    homotopy: Homotopy
    iterations: int = 0
    flagged: bool = False
    flag: Optional[str] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def converged(self) -> bool:
        return self.status != ShortenStatus.MAX_ITER

    @property
    def is_point(self) -> bool:
        return self.status == ShortenStatus.CONVERGED_POINT

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status.value,
            "iterations": self.iterations,
            "flagged": self.flagged,
            "flag": self.flag,
            "path": self.path.to_dict(),
            "max_length": self.homotopy.max_length,
        }


def _mode_for(path: GeodesicPath, mode: Optional[ShortenMode]) -> ShortenMode:
    if mode is not None:
        return mode
    return ShortenMode.BASED_LOOP if path.is_loop else ShortenMode.FIXED_ENDPOINTS


def resample(
    mesh: IntrinsicMesh,
    path: GeodesicPath,
    spacing: float,
    mode: Optional[ShortenMode] = None,
) -> DiscretizedCurve:
    """
    호 길이 간격 spacing 이하로 표본 추출

    Args:
        mesh: 메쉬
        path: 입력 경로 (루프 모드이면 시작과 끝이 같은 위치)
        spacing: 최대 간격 h_c
        mode: 단축 모드 (없으면 경로 종류로 결정)

    Returns:
        DiscretizedCurve (양 끝 표본은 입력 끝점 그대로)
    """
    if spacing <= 0:
        raise ValueError(f"spacing must be positive, got {spacing}")
    mode = _mode_for(path, mode)
    if path.is_constant:
        return DiscretizedCurve([path.start], [], mode, spacing)

    n = max(int(math.ceil(path.length / spacing - 1e-12)), 2)
    if mode == ShortenMode.FREE_LOOP and n % 2:
        n += 1
    stations = [path.length * i / n for i in range(1, n)]
    segments = split_at(mesh, path, stations)
    samples = [segments[0].start] + [seg.end for seg in segments]
    return DiscretizedCurve(samples, segments, mode, spacing)


def _check_locality(curve: DiscretizedCurve, radius: float) -> None:
    for j, seg in enumerate(curve.segments):
        if seg.length > radius * (1.0 + 1e-9):
            raise LocalityViolated(
                f"Sample gap {seg.length:.6g} at segment {j} exceeds locality radius {radius:.6g}",
                gap=seg.length,
                radius=radius,
            )


def _relax(mesh: IntrinsicMesh, samples: List[SurfacePoint], segments: List[GeodesicPath], i: int) -> None:
    """표본 i 를 이웃 두 표본 사이 국소 최단 호의 중점으로"""
    n = len(segments)
    before, after = (i - 1) % n, i % n
    joined = segments[before].concatenate(segments[after])
    if joined.is_constant:
        return
    arc = straighten(mesh, joined)
    if arc.length > joined.length:
        return
    first, second = midpoint_split(mesh, arc)
    mid = first.end
    second.points[0] = mid
    segments[before] = first
    segments[after] = second
    samples[after] = mid
    if after == 0:
        samples[n] = mid


def birkhoff_step(
    mesh: IntrinsicMesh,
    curve: DiscretizedCurve,
    tolerances: Optional[Tolerances] = None,
) -> DiscretizedCurve:
    """
    Birkhoff 한 단계 - 홀수 표본, 이어서 짝수 표본을 국소 최단 호 중점으로 교체

    Args:
        mesh: 메쉬
        curve: 입력 곡선
        tolerances: 허용치 (없으면 전역 설정)

    Returns:
        새 곡선 (고정 표본은 같은 객체, 길이는 늘지 않음)

    Raises:
        LocalityViolated: 간격이 국소 반경을 넘을 때
    """
    tolerances = tolerances or get_settings().resolve(mesh)
    if curve.segment_count < 2:
        return curve
    _check_locality(curve, tolerances.locality_radius)

    samples = list(curve.samples)
    segments = list(curve.segments)
    n = len(segments)
    if curve.mode == ShortenMode.FREE_LOOP:
        phases = [range(1, n, 2), range(0, n, 2)]
    else:
        phases = [range(1, n, 2), range(2, n, 2)]
    for phase in phases:
        for i in phase:
            _relax(mesh, samples, segments, i)
    return DiscretizedCurve(samples, segments, curve.mode, curve.spacing)


def _collapsed(mesh: IntrinsicMesh, curve: DiscretizedCurve, radius: float) -> bool:
    """모든 표본이 한 점에서 radius 안에 있는지"""
    first, last = curve.samples[0], curve.samples[-1]
    closed = curve.is_loop or mesh.same_location(first, last)
    if not closed:
        return False
    # 닫힌 곡선의 모든 점은 기준점에서 길이 절반 이내
    return curve.length <= 2.0 * radius


def _polish(mesh: IntrinsicMesh, path: GeodesicPath, mode: ShortenMode) -> GeodesicPath:
    """수렴한 곡선을 한 번에 곧게 펴기 (자유 루프는 기준점을 옮겨 한 번 더)"""
    result = straighten(mesh, path)
    if mode == ShortenMode.FREE_LOOP and not result.is_constant:
        rebased = rebase_loop(mesh, result, result.length / 2.0)
        rebased.kind = PathKind.LOOP
        straightened = straighten(mesh, rebased)
        if straightened.length <= result.length:
            result = straightened
    result.kind = path.kind
    return result


def shorten_to_critical(
    mesh: IntrinsicMesh,
    curve: Union[DiscretizedCurve, GeodesicPath],
    mode: Optional[ShortenMode] = None,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    settings: Optional[GeodesicSettings] = None,
    strict: bool = False,
) -> ShortenResult:
    """
    Birkhoff 단계를 반복해 점 또는 측지선으로 수렴시키기

    Args:
        mesh: 메쉬
        curve: 곡선 또는 경로 (경로는 h_c 간격으로 재표본)
        mode: 단축 모드 (경로 입력일 때)
        tol: 단계당 상대 길이 감소 기준
        max_iter: 반복 한도 (없으면 10·n·(L/h_c))
        settings: 설정
        strict: True 이면 반복 한도 초과 시 예외

    Returns:
        ShortenResult (homotopy 는 입력에서 결과까지, 길이 예산은 입력 길이).
        길이가 멈췄어도 꺾임 인증을 통과하지 못하면 상태는 MAX_ITER, flag 는 Uncertified

    Raises:
        MaxIterExceeded: strict 이고 수렴하지 않았거나 꺾임 인증에 실패했을 때
    """
    settings = settings or get_settings()
    tolerances = settings.resolve(mesh)
    tol = tolerances.tol if tol is None else tol
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")

    if isinstance(curve, GeodesicPath):
        curve = resample(mesh, curve, tolerances.spacing, mode)
    start_path = curve.to_path()
    budget = start_path.length + 1e-9
    if max_iter is None:
        n = max(curve.segment_count, 1)
        max_iter = max(
            int(tolerances.max_iter_factor * n * max(start_path.length / tolerances.spacing, 1.0)),
            MIN_ITERATIONS,
        )

    frames = [start_path]
    status = ShortenStatus.MAX_ITER
    uncertified: Optional[GeodesicCertificate] = None
    iterations = 0
    current = curve
    while iterations < max_iter:
        if current.segment_count < 2 or _collapsed(mesh, current, tolerances.collapse_radius):
            status = ShortenStatus.CONVERGED_POINT
            break
        before = current.length
        current = birkhoff_step(mesh, current, tolerances)
        iterations += 1
        frames.append(current.to_path())
        after = current.length
        logger.debug(f"birkhoff step {iterations}: length {before:.9g} -> {after:.9g}")
        if before - after < tol * max(before, tolerances.h):
            status = ShortenStatus.CONVERGED_GEODESIC
            break
        # 줄어든 곡선은 표본 수도 줄여 간격을 h_c 근처로 유지
        wanted = max(int(math.ceil(after / tolerances.spacing)), 2)
        if current.segment_count > 2 * wanted + 2:
            current = resample(mesh, current.to_path(), tolerances.spacing, current.mode)

    if status == ShortenStatus.CONVERGED_POINT:
        base = current.samples[0]
        kind = PathKind.LOOP if current.is_loop else PathKind.OPEN
        point_path = constant_path(base, kind)
        if current.mode == ShortenMode.FIXED_ENDPOINTS and not mesh.same_location(base, current.samples[-1]):
            point_path = frames[-1]
        else:
            frames.append(point_path)
        result_path = point_path
    elif status == ShortenStatus.CONVERGED_GEODESIC:
        result_path = _polish(mesh, frames[-1], current.mode)
        if result_path.length <= tolerances.collapse_radius and current.is_loop:
            status = ShortenStatus.CONVERGED_POINT
            result_path = constant_path(current.samples[0], PathKind.LOOP)
        else:
            certificate = is_geodesic(
                mesh, result_path, theta_tol=tolerances.theta_tol,
                based=current.mode != ShortenMode.FREE_LOOP,
            )
            if not certificate:
                # 길이는 멈췄지만 꺾임이 남은 곡선은 측지선으로 보고하지 않음
                status = ShortenStatus.MAX_ITER
                uncertified = certificate
        frames.append(result_path)
    else:
        result_path = frames[-1]

    homotopy = Homotopy(frames=frames, mode=current.mode, budget=budget)
    result = ShortenResult(
        status=status,
        path=result_path,
        homotopy=homotopy,
        iterations=iterations,
        metadata={"spacing": tolerances.spacing, "start_length": start_path.length},
    )
    if uncertified is not None:
        result.flagged = True
        result.flag = "Uncertified"
        result.metadata["max_defect"] = uncertified.max_defect
        logger.warning(
            f"shortened curve stalled with a corner of {uncertified.max_defect:.4g} "
            f"> theta_tol {uncertified.theta_tol:.4g}"
        )
        if strict:
            raise MaxIterExceeded(
                f"Shortened curve fails the straightness certificate "
                f"({uncertified.max_defect:.4g} > {uncertified.theta_tol:.4g})",
                partial=result,
            )
    elif status == ShortenStatus.MAX_ITER:
        result.flagged = True
        result.flag = "MaxIterExceeded"
        logger.warning(f"Birkhoff shortening stopped after {iterations} iterations")
        if strict:
            raise MaxIterExceeded(
                f"Shortening did not converge in {max_iter} iterations", partial=result
            )
    return result
