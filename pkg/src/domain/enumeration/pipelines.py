# -*- coding: utf-8 -*-
"""
측지선 열거 파이프라인

구면형 (χ = 2) 메쉬는 filling tree 캐스케이드와 sweep-out min-max 추출을,
π₁ ≠ 0 (χ ≤ 0) 메쉬는 짧은 생성 루프로 만든 후보 목록을 거친다. 어느 경로든
결과는 같은 EnumerationReport 로 모이고 상한 검증을 반드시 거친다.
"""
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.core.exceptions import (
    EnumerationIncomplete,
    InvalidSurfacePoint,
    NoShortGenerator,
    UnsupportedTopology,
)
from src.core.models.geometry import GeodesicPath, PathKind, ShortenMode, SurfacePoint
from src.domain.enumeration.report import EnumerationReport, Route
from src.domain.enumeration.verify import verify_bounds
from src.domain.metric import dedupe_paths, diameter, distance_field, frechet_distance, shortest_path
from src.domain.shorten import is_geodesic, shorten_to_critical
from src.domain.surface.mesh import IntrinsicMesh
from src.domain.surface.paths import constant_path, midpoint_split, rebase_loop, sample_points
from src.domain.surface.topology import edge_loop_path, tree_cotree_generators
from src.domain.weave import minmax_extract, run_filling_tree
from src.infrastructure.config.settings import GeodesicSettings, get_settings

logger = logging.getLogger(__name__)

Tagged = List[Tuple[GeodesicPath, str]]

REBASE_SAMPLES = 32


def homotopy_index(mesh: IntrinsicMesh) -> int:
    """가장 작은 비자명 호모토피 군 차수 q (χ ≤ 0 이면 1, 구면이면 2)"""
    return 1 if mesh.euler_characteristic <= 0 else 2


def surface_id(mesh: IntrinsicMesh) -> str:
    """보고서에 기록하는 곡면 식별자"""
    params = ",".join(f"{key}={value:g}" for key, value in sorted(mesh.params.items()))
    return f"{mesh.kind}:{params}#{mesh.fingerprint[:12]}"


def dedupe(
    mesh: IntrinsicMesh,
    geodesics: Sequence[GeodesicPath],
    radius: Optional[float] = None,
    settings: Optional[GeodesicSettings] = None,
) -> List[GeodesicPath]:
    """
    끝점을 공유하는 측지선들을 Fréchet 거리로 묶어 대표만 남기기

    Args:
        mesh: 메쉬
        geodesics: 측지선 목록
        radius: 같은 측지선으로 볼 거리 (없으면 5h)
        settings: 설정

    Returns:
        길이 순 대표 목록 (묶음마다 가장 짧은 것)
    """
    if radius is None:
        radius = (settings or get_settings()).resolve(mesh).dedupe_radius
    return dedupe_paths(mesh, geodesics, radius)


def _distinct_tagged(mesh: IntrinsicMesh, tagged: Tagged, radius: float) -> Tagged:
    origin = {id(path): tag for path, tag in tagged}
    kept = dedupe_paths(mesh, [path for path, _ in tagged], radius)
    return [(path, origin[id(path)]) for path in kept]


def _certified(mesh: IntrinsicMesh, tagged: Tagged, theta_tol: float) -> Tagged:
    passed = []
    for path, tag in tagged:
        if is_geodesic(mesh, path, theta_tol=theta_tol, based=True):
            passed.append((path, tag))
        else:
            logger.debug(f"dropping uncertified {tag} candidate of length {path.length:.4g}")
    return passed


def _finish(
    mesh: IntrinsicMesh,
    x: SurfacePoint,
    y: SurfacePoint,
    k: int,
    tagged: Tagged,
    d: float,
    dist_xy: float,
    route: str,
    settings: GeodesicSettings,
    strict: bool,
    seed: Optional[int],
    sweep_L: Optional[float] = None,
    lambda_: Optional[int] = None,
    flag: Optional[str] = None,
    metadata: Optional[dict] = None,
) -> EnumerationReport:
    """후보 인증, 중복 제거, 상한 검증을 거쳐 보고서 만들기"""
    tolerances = settings.resolve(mesh)
    certified = _certified(mesh, tagged, tolerances.theta_tol)
    distinct = _distinct_tagged(mesh, certified, tolerances.dedupe_radius)
    chosen = distinct[:k]
    report = EnumerationReport(
        surface=surface_id(mesh),
        x=x,
        y=y,
        k=k,
        geodesics=[path for path, _ in chosen],
        d=d,
        q=homotopy_index(mesh),
        route=route,
        chi=mesh.euler_characteristic,
        h=tolerances.h,
        slack=tolerances.slack,
        dist_xy=dist_xy,
        provenance=[tag for _, tag in chosen],
        certified=[True] * len(chosen),
        sweep_L=sweep_L,
        lambda_=lambda_,
        seed=seed,
        metadata={
            **(metadata or {}),
            "candidates": len(tagged),
            "certified": len(certified),
            "distinct": len(distinct),
        },
    )
    table = verify_bounds(report)
    report.bounds_checked = table.checks
    if flag is not None:
        report.flagged, report.flag = True, flag
    if not table.passed and not report.flagged:
        report.flagged, report.flag = True, "BoundViolated"

    logger.info(
        f"Enumeration ({route}): {len(chosen)}/{k} geodesics, lengths "
        f"{[round(v, 4) for v in report.lengths]}, bounds passed={table.passed}"
    )
    if not report.complete:
        report.flagged, report.flag = True, "EnumerationIncomplete"
        logger.warning(f"Found only {len(chosen)} of {k} distinct geodesics")
        if strict:
            raise EnumerationIncomplete(
                f"Found {len(chosen)} of {k} distinct geodesics", partial=report, found=len(chosen)
            )
    return report


def _start(mesh: IntrinsicMesh, x: SurfacePoint, y: SurfacePoint, settings: GeodesicSettings) -> GeodesicPath:
    """최단 x → y (같은 점이면 상수 루프)"""
    if mesh.same_location(x, y):
        return constant_path(x, PathKind.LOOP)
    return shortest_path(mesh, x, y, settings=settings)


def enumerate_geodesics(
    mesh: IntrinsicMesh,
    x: SurfacePoint,
    y: Optional[SurfacePoint] = None,
    k: int = 2,
    settings: Optional[GeodesicSettings] = None,
    strict: bool = False,
    seed: Optional[int] = None,
    d: Optional[float] = None,
) -> EnumerationReport:
    """
    x 에서 y 까지 서로 다른 측지선 k 개 찾기

    Args:
        mesh: 메쉬 (χ = 2 또는 χ ≤ 0)
        x: 시작점
        y: 끝점 (없으면 x, 기준 루프)
        k: 필요한 개수
        settings: 설정
        strict: True 이면 k 개 미만일 때 예외
        seed: 보고서에 기록할 시드
        d: 지름 (없으면 계산)

    Returns:
        EnumerationReport (길이 순 k 개 이하, 상한 검증 포함)

    Raises:
        ValueError: k < 1
        UnsupportedTopology: χ 가 2 도 아니고 0 이하도 아닐 때
        EnumerationIncomplete: strict 이고 k 개 미만
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    settings = settings or get_settings()
    y = y or x
    chi = mesh.euler_characteristic
    if chi <= 0:
        return pi1_pipeline(mesh, x, y, k, settings=settings, strict=strict, seed=seed, d=d)
    if chi != 2:
        raise UnsupportedTopology(f"Cannot enumerate on a surface with chi={chi}", euler_characteristic=chi)
    mesh.check_point(x)
    mesh.check_point(y)

    if d is None:
        d = diameter(mesh, settings=settings)[0]
    same = mesh.same_location(x, y)
    outcome = run_filling_tree(mesh, x, y, k, settings=settings, d=d)
    rho = constant_path(x, PathKind.LOOP) if same else outcome.rho
    tagged: Tagged = [(rho, Route.FILLING_TREE)]
    for loop in outcome.loops:
        if same:
            loop.kind = PathKind.LOOP
        tagged.append((loop, Route.FILLING_TREE))

    metadata = {"filling": {"kind": outcome.kind, "lambda": outcome.lambda_, "flag": outcome.flag}}
    if outcome.metadata.get("bounds"):
        metadata["filling"]["bounds"] = outcome.metadata["bounds"]
    sweep_L = lambda_ = None
    route = Route.FILLING_TREE
    if outcome.sweep is not None:
        route = Route.SWEEP_OUT
        sweep_L, lambda_ = outcome.sweep.L, outcome.lambda_
        extraction = minmax_extract(mesh, outcome.sweep, k, y=y, d=d, settings=settings)
        tagged.extend((g, Route.SWEEP_OUT) for g in extraction.geodesics)
        metadata["extraction"] = {
            "bound": extraction.bound, "found": len(extraction.geodesics), "flag": extraction.flag,
        }
        metadata["sweep_degree"] = outcome.sweep.degree

    return _finish(
        mesh, x, y, k, tagged, d, outcome.dist_xy, route, settings, strict, seed,
        sweep_L=sweep_L, lambda_=lambda_, flag=outcome.flag, metadata=metadata,
    )


def second_geodesic(
    mesh: IntrinsicMesh,
    x: SurfacePoint,
    y: Optional[SurfacePoint] = None,
    settings: Optional[GeodesicSettings] = None,
    strict: bool = False,
    seed: Optional[int] = None,
    d: Optional[float] = None,
) -> EnumerationReport:
    """
    서로 다른 측지선 두 개 (길이 ≤ 2q·d)

    x = y 이면 두 번째는 x 에서 시작하는 비자명 측지 루프다. q 는 χ 로 정한다.
    """
    settings = settings or get_settings()
    y = y or x
    report = enumerate_geodesics(mesh, x, y, 2, settings=settings, strict=strict, seed=seed, d=d)
    report.metadata["bound_q"] = report.q
    if report.same_endpoints:
        threshold = settings.enumerate.slack_factor * report.h
        nontrivial = len(report.geodesics) >= 2 and report.geodesics[1].length > threshold
        report.metadata["nontrivial_loop"] = nontrivial
        if not nontrivial and not report.flagged:
            report.flagged, report.flag = True, "EnumerationIncomplete"
            logger.warning("no nontrivial geodesic loop found at the base point")
            if strict:
                raise EnumerationIncomplete("No nontrivial geodesic loop at the base point", partial=report)
    return report


def _rebase_at(
    mesh: IntrinsicMesh,
    loop: GeodesicPath,
    x: SurfacePoint,
    settings: GeodesicSettings,
) -> GeodesicPath:
    """자유 루프를 가장 가까운 점에서 x 로 이어 x 기준 루프로 만들기"""
    field = distance_field(mesh, x, settings=settings)
    stations = np.linspace(0.0, loop.length, REBASE_SAMPLES, endpoint=False)
    points = sample_points(mesh, loop, REBASE_SAMPLES + 1)[:-1]
    distances = [field.distance_at(p) for p in points]
    best = int(np.argmin(distances))
    based = rebase_loop(mesh, loop, float(stations[best]))
    if mesh.same_location(x, based.start):
        based.kind = PathKind.LOOP
        return based
    connector = shortest_path(mesh, x, based.start, settings=settings)
    return connector.concatenate(based).concatenate(connector.reverse(), kind=PathKind.LOOP)


def _same_generator(mesh: IntrinsicMesh, a: GeodesicPath, b: GeodesicPath, radius: float) -> bool:
    """부호만 다른 루프도 같은 생성원으로 보기"""
    return any(frechet_distance(mesh, g, b) <= radius for g in (a, a.reverse()))


def short_generators(
    mesh: IntrinsicMesh,
    x: SurfacePoint,
    d: float,
    settings: Optional[GeodesicSettings] = None,
) -> List[GeodesicPath]:
    """
    x 기준 비가축 루프 중 길이 2d 이하인 것들 (짧은 순)

    여러 뿌리에서 만든 tree-cotree 호몰로지 생성원을 자유 루프로 줄여 짧은 닫힌
    측지선을 찾고, x 로 옮겨 기준 루프로 다시 줄인다.
    """
    settings = settings or get_settings()
    tolerances = settings.resolve(mesh)
    count = min(settings.enumerate.generator_seeds, mesh.vertex_count)
    roots = sorted({int(v) for v in np.linspace(0, mesh.vertex_count - 1, count)})

    seen = set()
    seeds: List[GeodesicPath] = []
    for root in roots:
        for loop in tree_cotree_generators(mesh, root=root):
            signature = frozenset(loop.edges)
            if signature in seen:
                continue
            seen.add(signature)
            seeds.append(edge_loop_path(mesh, loop.vertices, kind=PathKind.LOOP))
    logger.debug(f"generator search: {len(seeds)} distinct seeds from {len(roots)} roots")

    closed: List[GeodesicPath] = []
    for seed in seeds:
        result = shorten_to_critical(mesh, seed, mode=ShortenMode.FREE_LOOP, settings=settings)
        if not result.is_point:
            closed.append(result.path)
    closed = dedupe_paths(mesh, closed, tolerances.dedupe_radius, cyclic=True)

    limit = 2.0 * d + tolerances.slack
    basis: List[GeodesicPath] = []
    for loop in closed:
        result = shorten_to_critical(
            mesh, _rebase_at(mesh, loop, x, settings), mode=ShortenMode.BASED_LOOP, settings=settings
        )
        if result.is_point or result.path.length > limit:
            continue
        gamma = result.path
        gamma.kind = PathKind.LOOP
        if any(_same_generator(mesh, gamma, other, tolerances.dedupe_radius) for other in basis):
            continue
        basis.append(gamma)
    basis.sort(key=lambda g: g.length)
    logger.info(f"generator search: {len(basis)} short loops at x (limit {limit:.4g})")
    return basis


def _candidates(
    mesh: IntrinsicMesh,
    gamma: GeodesicPath,
    y: SurfacePoint,
    tau: GeodesicPath,
    powers: int,
    kind: PathKind,
    settings: GeodesicSettings,
) -> List[GeodesicPath]:
    """τ, γ₁σ⁻¹, γ⁻¹τ, γγ₁σ⁻¹, γ⁻²τ, γ²γ₁σ⁻¹, ... (γ 와 γ⁻¹ 양쪽)"""
    found: List[GeodesicPath] = []
    for loop in (gamma, gamma.reverse()):
        first_half, _ = midpoint_split(mesh, loop)
        p = first_half.end
        sigma = constant_path(y) if mesh.same_location(y, p) else shortest_path(mesh, y, p, settings=settings)
        head = first_half.concatenate(sigma.reverse())
        inverse = loop.reverse()
        back, forth = tau, head
        found.append(head)
        for _ in range(powers):
            back = inverse.concatenate(back)
            forth = loop.concatenate(forth)
            found.extend((back, forth))
    for path in found:
        path.kind = kind
    return found


def pi1_pipeline(
    mesh: IntrinsicMesh,
    x: SurfacePoint,
    y: Optional[SurfacePoint] = None,
    k: int = 2,
    gamma: Optional[GeodesicPath] = None,
    settings: Optional[GeodesicSettings] = None,
    strict: bool = False,
    seed: Optional[int] = None,
    d: Optional[float] = None,
) -> EnumerationReport:
    """
    비가축 기준 루프로 만든 후보를 고정 끝점으로 줄여 측지선 k 개 찾기

    Args:
        mesh: χ ≤ 0 메쉬
        x: 시작점
        y: 끝점 (없으면 x)
        k: 필요한 개수
        gamma: x 기준 비가축 루프 (없으면 짧은 생성원 탐색)
        settings: 설정
        strict: True 이면 생성원이 없거나 k 개 미만일 때 예외
        seed: 보고서에 기록할 시드
        d: 지름 (없으면 계산)

    Returns:
        EnumerationReport (처음 k 개 길이 ≤ k·d)

    Raises:
        UnsupportedTopology: χ > 0
        InvalidSurfacePoint: gamma 가 x 기준 루프가 아닐 때
        NoShortGenerator: strict 이고 2d 이하 비가축 루프가 없을 때
        EnumerationIncomplete: strict 이고 k 개 미만
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    chi = mesh.euler_characteristic
    if chi > 0:
        raise UnsupportedTopology(
            f"Loop-basis pipeline needs a surface with chi <= 0, got {chi}", euler_characteristic=chi
        )
    settings = settings or get_settings()
    y = y or x
    mesh.check_point(x)
    mesh.check_point(y)
    if d is None:
        d = diameter(mesh, settings=settings)[0]
    same = mesh.same_location(x, y)
    kind = PathKind.LOOP if same else PathKind.OPEN
    mode = ShortenMode.BASED_LOOP if same else ShortenMode.FIXED_ENDPOINTS
    tau = _start(mesh, x, y, settings)

    if gamma is not None:
        if not (mesh.same_location(gamma.start, x) and mesh.same_location(gamma.end, x)):
            raise InvalidSurfacePoint("gamma must be a loop based at x")
        basis = [gamma]
    else:
        basis = short_generators(mesh, x, d, settings)

    tagged: Tagged = [(tau, Route.PI1)]
    flag = None
    if not basis:
        flag = "NoShortGenerator"
        logger.warning(f"no non-contractible loop of length <= 2d = {2 * d:.4g} found")
    powers = min(k, settings.enumerate.max_power)
    for loop in basis:
        for candidate in _candidates(mesh, loop, y, tau, powers, kind, settings):
            result = shorten_to_critical(mesh, candidate, mode=mode, settings=settings)
            path = constant_path(x, kind) if result.is_point and same else result.path
            if result.is_point and not same:
                continue
            path.kind = kind
            tagged.append((path, Route.PI1))

    report = _finish(
        mesh, x, y, k, tagged, d, tau.length, Route.PI1, settings, strict=False, seed=seed,
        flag=flag, metadata={"generators": [g.length for g in basis]},
    )
    if strict and flag == "NoShortGenerator":
        raise NoShortGenerator("No non-contractible loop of length <= 2d", partial=report)
    if strict and not report.complete:
        raise EnumerationIncomplete(
            f"Found {len(report.geodesics)} of {k} distinct geodesics", partial=report,
            found=len(report.geodesics),
        )
    return report
