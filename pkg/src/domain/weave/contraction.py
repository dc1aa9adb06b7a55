# -*- coding: utf-8 -*-
"""
Digon 수축과 가로막는 측지선

- contract_digon: 경계 루프를 기준점 고정으로 줄여 side_a → side_b 경로 호모토피를 만들거나,
  멈춘 자리의 비자명 측지 루프를 돌려준다.
- obstructing_geodesic: 루프 γ 와 측지선 ρ 에 대해 γ*ρ 를 끝점 고정으로 줄여
  ρ 로 돌아오면 상쇄, 아니면 가로막는 측지선 τ 를 돌려준다.
- connect_same_obstruction: 같은 τ 에서 멈춘 두 루프를 τ*ρ⁻¹ 을 거쳐 잇는다.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from src.core.exceptions import BudgetExceeded, ObstructionMismatch
from src.core.models.geometry import GeodesicPath, Homotopy, PathKind, ShortenMode
from src.domain.cutlocus.minimizing import digon_loop
from src.domain.metric.frechet import frechet_distance
from src.domain.shorten.birkhoff import ShortenResult, shorten_to_critical
from src.domain.surface.mesh import IntrinsicMesh
from src.domain.surface.paths import constant_path, sample_points, subpath
from src.domain.weave.digon import Digon
from src.infrastructure.config.settings import GeodesicSettings, get_settings

logger = logging.getLogger(__name__)

# 되접기 상쇄 프레임 수
CANCEL_FRAMES = 8


@dataclass
class ContractionResult:
    """
    contract_digon 결과

    homotopy 가 있으면 side_a → side_b 경로 호모토피, 없으면 obstruction 이 멈춘 측지 루프다.
    """
    digon: Digon
    budget: float
    homotopy: Optional[Homotopy] = None
    obstruction: Optional[GeodesicPath] = None
    loop_homotopy: Optional[Homotopy] = None
    inside_fraction: float = 1.0
    shorten: Optional[ShortenResult] = None

    @property
    def contracted(self) -> bool:
        return self.homotopy is not None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "contracted": self.contracted,
            "budget": self.budget,
            "max_length": None if self.homotopy is None else self.homotopy.max_length,
            "inside_fraction": self.inside_fraction,
            "obstruction": None if self.obstruction is None else self.obstruction.to_dict(),
        }


def inside_fraction(mesh: IntrinsicMesh, homotopy: Homotopy, domain: frozenset, samples: int = 16) -> float:
    """프레임 표본점 중 면 집합 안에 있는 비율"""
    total = inside = 0
    for frame in homotopy.frames:
        for point in sample_points(mesh, frame, samples):
            total += 1
            if any(f in domain for f in mesh.faces_containing(point)):
                inside += 1
    return inside / total if total else 1.0


def _audit(homotopy: Homotopy, limit: float, what: str) -> None:
    for j, frame in enumerate(homotopy.frames):
        if frame.length > limit:
            raise BudgetExceeded(
                f"{what}: frame {j} length {frame.length:.6g} exceeds {limit:.6g}",
                frame_length=frame.length,
                budget=limit,
            )


def retraction_frames(
    mesh: IntrinsicMesh, head: GeodesicPath, tail: GeodesicPath, spacing: float
) -> List[GeodesicPath]:
    """
    head 에서 head * tail⁻¹ * tail 까지 tail 끝에서 되접어 늘리는 경로들

    s 를 0 에서 |tail| 까지 spacing/4 이하 간격으로 늘리며 head * (tail 끝 s 구간)⁻¹ * (tail 끝 s 구간)
    을 만든다. head 는 포함하지 않고 마지막 프레임이 head * tail⁻¹ * tail 이다.
    """
    if tail.is_constant:
        return []
    steps = max(int(math.ceil(4.0 * tail.length / spacing)), 1)
    frames = []
    for j in range(1, steps + 1):
        s = tail.length * j / steps
        piece = subpath(mesh, tail, tail.length - s, tail.length)
        frames.append(head.concatenate(piece.reverse()).concatenate(piece))
    return frames


def loop_to_path_frames(
    mesh: IntrinsicMesh,
    side_a: GeodesicPath,
    side_b: GeodesicPath,
    loop_frames: List[GeodesicPath],
    spacing: float,
) -> List[GeodesicPath]:
    """
    경계 루프 side_a * side_b⁻¹ 을 상수 루프까지 줄인 프레임들을 side_a → side_b 경로 프레임으로

    side_a 에서 side_a * side_b⁻¹ * side_b 까지 되접기 프레임을 먼저 넣고, 루프 프레임 ℓ 마다
    ℓ * side_b 를 잇는다.
    """
    frames = [side_a] + retraction_frames(mesh, side_a, side_b, spacing)
    frames.extend(frame.concatenate(side_b) for frame in loop_frames)
    frames.append(side_b)
    return frames


def contract_digon(
    mesh: IntrinsicMesh,
    digon: Digon,
    budget: Optional[float] = None,
    settings: Optional[GeodesicSettings] = None,
) -> ContractionResult:
    """
    digon 수축

    경계 루프 side_a * side_b⁻¹ 을 x 고정으로 줄인다. 점으로 수렴하면 각 루프 프레임 ℓ 에
    side_b 를 이어 ℓ * side_b 경로들로 side_a → side_b 호모토피를 만든다 (길이 ≤ 2l + l).
    측지 루프에서 멈추면 그 루프 (길이 ≤ 2l) 를 돌려준다.

    Args:
        mesh: 메쉬
        digon: 수축할 digon
        budget: 변 길이 상한 l (없으면 긴 변 길이)
        settings: 설정

    Returns:
        ContractionResult

    Raises:
        BudgetExceeded: 프레임이 3l + 여유를 넘음 (내부 점검 실패)
    """
    settings = settings or get_settings()
    tolerances = settings.resolve(mesh)
    l = digon.length if budget is None else float(budget)
    limit = 3.0 * l + tolerances.slack

    if digon.is_degenerate or (
        frechet_distance(mesh, digon.side_a, digon.side_b) <= tolerances.dedupe_radius
    ):
        homotopy = Homotopy(frames=[digon.side_a], budget=limit)
        return ContractionResult(digon=digon, budget=limit, homotopy=homotopy)

    loop = digon.boundary
    shortened = shorten_to_critical(mesh, loop, mode=ShortenMode.BASED_LOOP, settings=settings)
    if shortened.is_point:
        frames = loop_to_path_frames(
            mesh, digon.side_a, digon.side_b, shortened.homotopy.frames, tolerances.spacing
        )
        homotopy = Homotopy(frames=frames, mode=ShortenMode.FIXED_ENDPOINTS, budget=limit)
        _audit(homotopy, limit, "digon contraction")
        share = inside_fraction(mesh, homotopy, digon.domain) if digon.domain else 1.0
        logger.debug(
            f"digon {digon.index} contracted in {shortened.iterations} steps, "
            f"max {homotopy.max_length:.4g} <= {limit:.4g}, inside {share:.2f}"
        )
        return ContractionResult(
            digon=digon, budget=limit, homotopy=homotopy, inside_fraction=share,
            loop_homotopy=shortened.homotopy, shorten=shortened,
        )

    obstruction = shortened.path
    obstruction.kind = PathKind.LOOP
    if obstruction.length > 2.0 * l + tolerances.slack:
        raise BudgetExceeded(
            f"obstructing loop length {obstruction.length:.6g} exceeds 2l",
            frame_length=obstruction.length,
            budget=2.0 * l,
        )
    logger.info(f"digon {digon.index} stalled at a geodesic loop of length {obstruction.length:.4g}")
    return ContractionResult(
        digon=digon, budget=limit, obstruction=obstruction,
        loop_homotopy=shortened.homotopy, shorten=shortened,
    )


@dataclass
class ObstructionResult:
    """obstructing_geodesic 결과 (cancelled 이면 γ 를 상수 루프까지 줄인 호모토피)"""
    cancelled: bool
    loop: GeodesicPath
    rho: GeodesicPath
    homotopy: Homotopy
    tau: Optional[GeodesicPath] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "cancelled": self.cancelled,
            "max_length": self.homotopy.max_length,
            "budget": self.homotopy.budget,
            "tau": None if self.tau is None else self.tau.to_dict(),
        }


def _close(frame: GeodesicPath, rho_back: GeodesicPath) -> GeodesicPath:
    """x → y 프레임을 ρ⁻¹ 로 닫은 루프"""
    if rho_back.is_constant:
        return GeodesicPath(
            points=list(frame.points), faces=list(frame.faces), kind=PathKind.LOOP, length=frame.length
        )
    return frame.concatenate(rho_back, kind=PathKind.LOOP)


def _cancel_over_itself(mesh: IntrinsicMesh, rho: GeodesicPath) -> List[GeodesicPath]:
    """ρ * ρ⁻¹ 을 자기 자신 위로 줄여 가는 루프들"""
    frames = []
    for j in range(CANCEL_FRAMES - 1, 0, -1):
        s = rho.length * j / CANCEL_FRAMES
        piece = subpath(mesh, rho, 0.0, s)
        frames.append(piece.concatenate(piece.reverse(), kind=PathKind.LOOP))
    frames.append(constant_path(rho.start, kind=PathKind.LOOP))
    return frames


def obstructing_geodesic(
    mesh: IntrinsicMesh,
    loop: GeodesicPath,
    rho: GeodesicPath,
    settings: Optional[GeodesicSettings] = None,
) -> ObstructionResult:
    """
    γ*ρ 를 끝점 고정으로 줄여 ρ 로 돌아오는지 확인

    Args:
        mesh: 메쉬
        loop: x 기준 루프 γ
        rho: 인증된 측지선 x → y
        settings: 설정

    Returns:
        ObstructionResult - 상쇄되면 γ → 상수 루프 호모토피 (길이 ≤ |γ| + 2|ρ|),
        아니면 τ ≠ ρ 와 γ → τ*ρ⁻¹ 호모토피
    """
    settings = settings or get_settings()
    tolerances = settings.resolve(mesh)
    budget = loop.length + 2.0 * rho.length + tolerances.slack
    if loop.is_constant:
        return ObstructionResult(
            cancelled=True, loop=loop, rho=rho,
            homotopy=Homotopy(frames=[loop], mode=ShortenMode.BASED_LOOP, budget=budget),
        )

    rho_back = rho.reverse()
    if rho.is_constant:
        shortened = shorten_to_critical(mesh, loop, mode=ShortenMode.BASED_LOOP, settings=settings)
    else:
        start = loop.concatenate(rho)
        shortened = shorten_to_critical(mesh, start, mode=ShortenMode.FIXED_ENDPOINTS, settings=settings)
    tau = shortened.path

    frames = [loop] + [_close(f, rho_back) for f in shortened.homotopy.frames]
    if rho.is_constant:
        returned = shortened.is_point
    else:
        returned = frechet_distance(mesh, tau, rho) <= tolerances.dedupe_radius
    if returned:
        if not rho.is_constant:
            frames.extend(_cancel_over_itself(mesh, rho))
        homotopy = Homotopy(frames=frames, mode=ShortenMode.BASED_LOOP, budget=budget)
        logger.debug(f"loop of length {loop.length:.4g} cancelled over rho ({rho.length:.4g})")
        return ObstructionResult(cancelled=True, loop=loop, rho=rho, homotopy=homotopy)

    tau.kind = PathKind.LOOP if rho.is_constant else PathKind.OPEN
    homotopy = Homotopy(frames=frames, mode=ShortenMode.BASED_LOOP, budget=budget)
    logger.info(f"obstructing geodesic of length {tau.length:.4g} (rho {rho.length:.4g})")
    return ObstructionResult(
        cancelled=False, loop=loop, rho=rho, homotopy=homotopy, tau=tau,
        metadata={"iterations": shortened.iterations},
    )


def connect_same_obstruction(
    mesh: IntrinsicMesh,
    first: GeodesicPath,
    second: GeodesicPath,
    rho: GeodesicPath,
    tau: Optional[GeodesicPath] = None,
    settings: Optional[GeodesicSettings] = None,
) -> Homotopy:
    """
    같은 가로막는 측지선에서 멈추는 두 루프를 τ*ρ⁻¹ 을 거쳐 잇기

    Args:
        mesh: 메쉬
        first: 루프 γ1
        second: 루프 γ2
        rho: 측지선 x → y
        tau: 기대하는 가로막는 측지선 (없으면 γ1 의 결과)
        settings: 설정

    Returns:
        γ1 → γ2 루프 호모토피 (길이 ≤ max(|γ1|, |γ2|) + 2·dist(x, y) + 여유)

    Raises:
        ObstructionMismatch: 두 루프의 가로막는 측지선이 다름
        BudgetExceeded: 이은 프레임이 길이 상한을 넘음 (내부 점검 실패)
    """
    settings = settings or get_settings()
    tolerances = settings.resolve(mesh)
    budget = max(first.length, second.length) + 2.0 * rho.length + tolerances.slack
    if first is second or (
        first.is_constant and second.is_constant
    ) or frechet_distance(mesh, first, second) <= tolerances.dedupe_radius:
        return Homotopy(frames=[first], mode=ShortenMode.BASED_LOOP, budget=budget)

    one = obstructing_geodesic(mesh, first, rho, settings)
    two = obstructing_geodesic(mesh, second, rho, settings)
    ends = [r.tau for r in (one, two)]
    if one.cancelled or two.cancelled:
        if one.cancelled and two.cancelled:
            frames = list(one.homotopy.frames) + list(reversed(two.homotopy.frames))
            homotopy = Homotopy(frames=frames, mode=ShortenMode.BASED_LOOP, budget=budget)
            _audit(homotopy, budget, "obstruction connection")
            return homotopy
        raise ObstructionMismatch("Only one of the loops cancels over rho", frechet=float("inf"))
    gap = frechet_distance(mesh, ends[0], ends[1])
    if gap > tolerances.dedupe_radius:
        raise ObstructionMismatch(f"Obstructions differ by {gap:.4g}", frechet=gap)
    if tau is not None:
        gap = frechet_distance(mesh, ends[0], tau)
        if gap > tolerances.dedupe_radius:
            raise ObstructionMismatch(f"Obstruction differs from tau by {gap:.4g}", frechet=gap)

    frames = list(one.homotopy.frames) + list(reversed(two.homotopy.frames))
    homotopy = Homotopy(frames=frames, mode=ShortenMode.BASED_LOOP, budget=budget)
    _audit(homotopy, budget, "obstruction connection")
    return homotopy
