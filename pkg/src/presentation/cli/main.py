# -*- coding: utf-8 -*-
"""
명령줄 인터페이스

    geodesics [--config PATH] [--seed N] [--set section.key=value ...] COMMAND ...

종료 코드: 0 성공, 1 플래그된 (불완전한) 결과, 2 입력 오류.
"""
import logging
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import click

from src.core.exceptions import (
    DegreeAmbiguous,
    FlaggedResult,
    GeodesicsError,
    InputError,
    InvalidSurfacePoint,
)
from src.core.models.geometry import SurfacePoint
from src.core.models.surface_spec import SurfaceSpec
from src.domain.cutlocus import cut_locus
from src.domain.enumeration import (
    BOUND_NAMES,
    EnumerationReport,
    enumerate_geodesics,
    second_geodesic,
    surface_id,
    verify_bounds,
)
from src.domain.metric import diameter, shortest_path
from src.domain.shorten import is_geodesic
from src.domain.surface import generate_surface
from src.domain.surface.mesh import IntrinsicMesh
from src.domain.weave import standard_sweep, sweep_out_degree
from src.infrastructure.config.logging_config import run_logger, setup_logging
from src.infrastructure.config.settings import GeodesicSettings, load_config, set_settings
from src.infrastructure.io import (
    dumps,
    load_report,
    make_document,
    read_document,
    read_mesh,
    report_document,
    write_document,
    write_mesh,
)
from src.presentation.cli.render import PROJECTIONS, render_svg

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FLAGGED = 1
EXIT_INPUT = 2


@dataclass
class RunConfig:
    """명령 하나의 실행 설정"""
    command: str = ""
    config_path: Optional[str] = None
    seed: Optional[int] = None
    overrides: Dict[str, float] = field(default_factory=dict)
    settings: GeodesicSettings = field(default_factory=GeodesicSettings)

    def __post_init__(self):
        for key, value in self.overrides.items():
            if not value > 0:
                raise ValueError(f"Tolerance override {key} must be positive, got {value}")


def _parse_override(text: str) -> Tuple[str, float]:
    key, sep, value = text.partition("=")
    if not sep or "." not in key:
        raise click.BadParameter(f"expected section.key=value, got {text!r}")
    try:
        return key.strip(), float(value)
    except ValueError:
        raise click.BadParameter(f"override value must be numeric, got {value!r}")


def parse_point(mesh: IntrinsicMesh, text: str) -> SurfacePoint:
    """
    점 표기 해석

    "12" 또는 "v:12" (꼭짓점), "xyz:1,0,0" (3D 위치), "uv:0.5,0" (토러스 좌표),
    "face:7:0.2,0.3,0.5" (면과 무게중심 좌표).

    Raises:
        InvalidSurfacePoint: 표기를 해석할 수 없을 때
    """
    text = text.strip()
    prefix, _, rest = text.partition(":")
    try:
        if not rest:
            return mesh.vertex_point(int(text))
        if prefix == "v":
            return mesh.vertex_point(int(rest))
        if prefix == "xyz":
            return mesh.locate_xyz([float(v) for v in rest.split(",")])
        if prefix == "uv":
            return mesh.locate_uv([float(v) for v in rest.split(",")])
        if prefix == "face":
            face, _, bary = rest.partition(":")
            return mesh.check_point(SurfacePoint(int(face), tuple(float(v) for v in bary.split(","))))
    except (ValueError, IndexError) as e:
        raise InvalidSurfacePoint(f"Cannot parse point {text!r}: {e}") from e
    raise InvalidSurfacePoint(f"Unknown point notation {text!r}")


def load_surface(surface: Optional[str], mesh_path: Optional[str], settings: GeodesicSettings) -> IntrinsicMesh:
    """--mesh 파일 또는 --surface 생성기 사양으로 메쉬 준비"""
    if mesh_path:
        return read_mesh(mesh_path)
    spec = SurfaceSpec.parse(surface or "sphere")
    if "res" not in (surface or "") and "resolution" not in (surface or ""):
        spec = SurfaceSpec(spec.kind, spec.params, settings.surface.default_resolution)
    return generate_surface(spec)


def surface_options(func):
    func = click.option("--mesh", "mesh_path", type=click.Path(), help="OBJ/PLY/JSON mesh file")(func)
    func = click.option("--surface", default=None, help='generator spec, e.g. "sphere:r=1,res=3000"')(func)
    return func


def _emit(document: Dict[str, Any], out: Optional[str]) -> None:
    if out:
        write_document(document, out)
    else:
        click.echo(dumps(document), nl=False)


def _finished(run_config: RunConfig, status: int, **numbers: Any) -> int:
    run_logger(run_config.command, run_config.seed).info(
        "command_finished", status=status, **numbers
    )
    return status


@click.group()
@click.option("--config", "config_path", type=click.Path(), default=None, help="config YAML (default: $GEODESICS_CONFIG)")
@click.option("--seed", type=int, default=0, show_default=True, help="seed recorded in every output")
@click.option("--set", "overrides", multiple=True, help="tolerance override section.key=value")
@click.option("--log-level", default=None, help="override the configured log level")
@click.pass_context
def main(ctx: click.Context, config_path: Optional[str], seed: int, overrides: Sequence[str], log_level: Optional[str]):
    """닫힌 삼각 곡면 위의 여러 측지선 계산"""
    config = load_config(config_path)
    setup_logging(config, level=log_level)
    parsed = dict(_parse_override(text) for text in overrides)
    settings = GeodesicSettings.from_dict(config).with_overrides(**parsed)
    set_settings(settings)
    ctx.obj = RunConfig(
        command=ctx.invoked_subcommand or "", config_path=config_path, seed=seed,
        overrides=parsed, settings=settings,
    )


@main.command()
@surface_options
@click.option("--out", required=True, type=click.Path(), help=".obj (embedded) or .json (intrinsic)")
@click.pass_obj
def gen(run_config: RunConfig, surface: Optional[str], mesh_path: Optional[str], out: str) -> int:
    """곡면 생성 후 파일로 저장"""
    mesh = load_surface(surface, mesh_path, run_config.settings)
    write_mesh(mesh, out)
    click.echo(dumps({**mesh.describe(), "surface": surface_id(mesh), "out": out}), nl=False)
    return _finished(run_config, EXIT_OK, faces=mesh.face_count, chi=mesh.euler_characteristic)


@main.command()
@surface_options
@click.option("--exhaustive", is_flag=True, help="all-pairs diameter")
@click.option("--out", type=click.Path(), default=None)
@click.pass_obj
def diam(run_config: RunConfig, surface, mesh_path, exhaustive: bool, out: Optional[str]) -> int:
    """지름"""
    mesh = load_surface(surface, mesh_path, run_config.settings)
    d, (i, j) = diameter(mesh, exhaustive=exhaustive, settings=run_config.settings)
    payload = {"surface": surface_id(mesh), "d": d, "pair": [i, j], "h": mesh.max_edge_length}
    _emit(make_document("diameter", payload, seed=run_config.seed), out)
    return _finished(run_config, EXIT_OK, d=d)


@main.command()
@surface_options
@click.option("--x", "x_text", required=True, help="start point")
@click.option("--y", "y_text", required=True, help="end point")
@click.option("--out", type=click.Path(), default=None)
@click.pass_obj
def path(run_config: RunConfig, surface, mesh_path, x_text: str, y_text: str, out: Optional[str]) -> int:
    """최단 경로와 측지선 인증"""
    mesh = load_surface(surface, mesh_path, run_config.settings)
    x, y = parse_point(mesh, x_text), parse_point(mesh, y_text)
    geodesic = shortest_path(mesh, x, y, settings=run_config.settings)
    certificate = is_geodesic(mesh, geodesic, settings=run_config.settings)
    payload = {
        "surface": surface_id(mesh),
        "x": x.to_dict(),
        "y": y.to_dict(),
        "length": geodesic.length,
        "certificate": certificate.to_dict(),
        "geodesics": [geodesic.to_dict()],
    }
    _emit(make_document("path", payload, seed=run_config.seed), out)
    return _finished(run_config, EXIT_OK, length=geodesic.length)


@main.command()
@surface_options
@click.option("--x", "x_text", default="0", show_default=True, help="source point")
@click.option("--out", type=click.Path(), default=None)
@click.pass_obj
def cutlocus(run_config: RunConfig, surface, mesh_path, x_text: str, out: Optional[str]) -> int:
    """절단 궤적 그래프"""
    mesh = load_surface(surface, mesh_path, run_config.settings)
    graph = cut_locus(mesh, parse_point(mesh, x_text), settings=run_config.settings)
    payload = {**graph.to_dict(), "surface": surface_id(mesh), "flagged": graph.fallback}
    _emit(make_document("cutlocus", payload, seed=run_config.seed), out)
    status = EXIT_FLAGGED if graph.fallback else EXIT_OK
    return _finished(run_config, status, betti=graph.betti_number, nodes=len(graph.vertices))


def _report_exit(run_config: RunConfig, report: EnumerationReport, out: Optional[str]) -> int:
    report.seed = run_config.seed
    _emit(report_document(report), out)
    status = EXIT_FLAGGED if report.flagged else EXIT_OK
    return _finished(
        run_config, status, k=report.k, found=len(report.geodesics), lengths=report.lengths, flag=report.flag
    )


@main.command(name="enumerate")
@surface_options
@click.option("--x", "x_text", default="0", show_default=True)
@click.option("--y", "y_text", default=None, help="end point (default: x)")
@click.option("--k", type=click.IntRange(min=1), default=2, show_default=True)
@click.option("--out", type=click.Path(), default=None)
@click.pass_obj
def enumerate_command(run_config: RunConfig, surface, mesh_path, x_text, y_text, k: int, out) -> int:
    """서로 다른 측지선 k 개"""
    mesh = load_surface(surface, mesh_path, run_config.settings)
    x = parse_point(mesh, x_text)
    y = parse_point(mesh, y_text) if y_text else x
    report = enumerate_geodesics(mesh, x, y, k, settings=run_config.settings, seed=run_config.seed)
    return _report_exit(run_config, report, out)


@main.command()
@surface_options
@click.option("--x", "x_text", default="0", show_default=True)
@click.option("--y", "y_text", default=None, help="end point (default: x)")
@click.option("--out", type=click.Path(), default=None)
@click.pass_obj
def second(run_config: RunConfig, surface, mesh_path, x_text, y_text, out) -> int:
    """두 번째 측지선 (x = y 이면 비자명 루프)"""
    mesh = load_surface(surface, mesh_path, run_config.settings)
    x = parse_point(mesh, x_text)
    y = parse_point(mesh, y_text) if y_text else x
    report = second_geodesic(mesh, x, y, settings=run_config.settings, seed=run_config.seed)
    return _report_exit(run_config, report, out)


@main.command()
@surface_options
@click.option("--x", "x_text", default="0", show_default=True, help="pole")
@click.option("--z", "z_text", default=None, help="opposite pole (default: farthest point)")
@click.option("--members", type=click.IntRange(min=4), default=None)
@click.option("--out", type=click.Path(), default=None)
@click.pass_obj
def sweepout(run_config: RunConfig, surface, mesh_path, x_text, z_text, members, out) -> int:
    """표준 자오선 sweep-out 과 사상 차수"""
    mesh = load_surface(surface, mesh_path, run_config.settings)
    x = parse_point(mesh, x_text)
    z = parse_point(mesh, z_text) if z_text else None
    sweep = standard_sweep(mesh, x, z, members=members, settings=run_config.settings)
    status = EXIT_OK
    try:
        sweep_out_degree(mesh, sweep, settings=run_config.settings)
    except DegreeAmbiguous as e:
        click.echo(f"warning: {e.message}", err=True)
        status = EXIT_FLAGGED
    payload = {**sweep.to_dict(), "surface": surface_id(mesh), "check": sweep.check(mesh, run_config.settings)}
    _emit(make_document("sweepout", payload, seed=run_config.seed), out)
    return _finished(run_config, status, L=sweep.L, degree=sweep.degree)


@main.command()
@click.option("--report", "report_path", required=True, type=click.Path())
@click.option("--check", "checks", multiple=True, type=click.Choice(BOUND_NAMES), help="only these bounds")
@click.option("--no-conjecture", is_flag=True, help="skip the informational k*d check")
@click.option("--out", type=click.Path(), default=None)
@click.pass_obj
def verify(run_config: RunConfig, report_path: str, checks: Sequence[str], no_conjecture: bool, out) -> int:
    """보고서의 길이 상한 판정표"""
    report = load_report(report_path)
    table = verify_bounds(report, conjecture_mode=not no_conjecture, only=checks or None)
    header = f"{'bound':<20} {'value':>12} {'limit':>12} {'margin':>10}  verdict"
    click.echo(header)
    for name, value, bound, margin, verdict in table.rows():
        click.echo(f"{name:<20} {value:>12} {bound:>12} {margin:>10}  {verdict}")
    if out:
        write_document(make_document("verdict", table.to_dict(), seed=report.seed), out)
    status = EXIT_OK if table.passed else EXIT_FLAGGED
    return _finished(run_config, status, checks=len(table.checks), failures=len(table.failures))


@main.command()
@surface_options
@click.option("--input", "input_path", required=True, type=click.Path(), help="enumeration/cutlocus/sweepout JSON")
@click.option("--projection", type=click.Choice(PROJECTIONS), default=None)
@click.option("--out", required=True, type=click.Path())
@click.pass_obj
def render(run_config: RunConfig, surface, mesh_path, input_path: str, projection: Optional[str], out: str) -> int:
    """문서를 SVG 로 그리기"""
    document = read_document(input_path)
    mesh = load_surface(surface, mesh_path, run_config.settings)
    render_svg(document, mesh, out, projection=projection)
    return _finished(run_config, EXIT_OK, out=out)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    cli 실행 후 종료 코드 반환

    Args:
        argv: 인자 목록 (없으면 sys.argv[1:])

    Returns:
        0 성공, 1 플래그된 결과, 2 입력 오류
    """
    args: List[str] = list(sys.argv[1:] if argv is None else argv)
    try:
        result = main.main(args=args, prog_name="geodesics", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("Aborted", err=True)
        return EXIT_FLAGGED
    except click.ClickException as e:
        e.show()
        return EXIT_INPUT
    except InputError as e:
        click.echo(f"error: {type(e).__name__}: {e.message}", err=True)
        return EXIT_INPUT
    except FlaggedResult as e:
        click.echo(f"flagged: {type(e).__name__}: {e.message}", err=True)
        return EXIT_FLAGGED
    except GeodesicsError as e:
        click.echo(f"error: {type(e).__name__}: {e.message}", err=True)
        return EXIT_FLAGGED
    except (OSError, ValueError) as e:
        click.echo(f"error: {e}", err=True)
        return EXIT_INPUT
    return int(result or EXIT_OK)


def entry() -> None:
    """console_scripts 진입점"""
    sys.exit(run())


if __name__ == "__main__":
    entry()
