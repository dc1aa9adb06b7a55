# -*- coding: utf-8 -*-
"""
SVG 렌더링

보고서, 절단 궤적, sweep-out 문서를 정적 SVG 로 그린다. 구면형 메쉬는 경도/위도
평면에, 토러스는 주기 uv 사각형에 펼친다. 같은 입력이면 같은 바이트가 나온다.
"""
import logging
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib import cm, colors  # noqa: E402

from src.core.exceptions import SchemaMismatch  # noqa: E402
from src.core.models.geometry import SurfacePoint  # noqa: E402
from src.domain.surface.mesh import IntrinsicMesh  # noqa: E402

logger = logging.getLogger(__name__)

SPHERICAL = "spherical"
PLANAR_TORUS = "planar-torus"
PROJECTIONS = (SPHERICAL, PLANAR_TORUS)

plt.rcParams["svg.hashsalt"] = "surface-geodesics"


def default_projection(mesh: IntrinsicMesh) -> str:
    return SPHERICAL if mesh.embedding is not None else PLANAR_TORUS


def _point(row: Union[Sequence[float], Dict[str, Any]]) -> SurfacePoint:
    if isinstance(row, dict):
        return SurfacePoint.from_dict(row)
    return SurfacePoint(int(row[0]), tuple(float(v) for v in row[1:4]))


def project(mesh: IntrinsicMesh, points: Iterable[SurfacePoint], projection: str) -> np.ndarray:
    """점들의 2D 투영 좌표 (N, 2)"""
    positions = mesh.positions_of(list(points))
    if positions is None:
        return np.zeros((0, 2))
    if projection == SPHERICAL:
        if positions.shape[1] != 3:
            raise ValueError("spherical projection needs an embedded mesh")
        centered = positions - np.asarray(mesh.embedding).mean(axis=0)
        radius = np.maximum(np.linalg.norm(centered, axis=1), 1e-300)
        lon = np.degrees(np.arctan2(centered[:, 1], centered[:, 0]))
        lat = np.degrees(np.arcsin(np.clip(centered[:, 2] / radius, -1.0, 1.0)))
        return np.column_stack([lon, lat])
    if positions.shape[1] != 2:
        raise ValueError("planar-torus projection needs periodic uv coordinates")
    return positions


def _pieces(xy: np.ndarray, jump: np.ndarray) -> List[np.ndarray]:
    """좌표 경계를 넘는 곳에서 다각선 자르기"""
    if len(xy) < 2:
        return [xy]
    wrap = np.any(np.abs(np.diff(xy, axis=0)) > jump, axis=1)
    cuts = np.flatnonzero(wrap) + 1
    return [piece for piece in np.split(xy, cuts) if len(piece)]


class SvgRenderer:
    """문서 종류별로 그리기"""

    def __init__(self, mesh: IntrinsicMesh, projection: Optional[str] = None):
        projection = projection or default_projection(mesh)
        if projection not in PROJECTIONS:
            raise ValueError(f"Unknown projection: {projection}")
        self.mesh = mesh
        self.projection = projection
        if projection == SPHERICAL:
            self._jump = np.array([180.0, 90.0])
            self._frame = (-180.0, 180.0, -90.0, 90.0)
        else:
            a, b = mesh.periods or (1.0, 1.0)
            self._jump = np.array([a / 2.0, b / 2.0])
            self._frame = (0.0, a, 0.0, b)
        self.figure, self.axes = plt.subplots(figsize=(8, 4.5) if projection == SPHERICAL else (6, 6))
        self._draw_surface()

    def _draw_surface(self) -> None:
        ax = self.axes
        x0, x1, y0, y1 = self._frame
        ax.set_xlim(x0, x1)
        ax.set_ylim(y0, y1)
        ax.set_aspect("equal")
        ax.plot([x0, x1, x1, x0, x0], [y0, y0, y1, y1, y0], color="0.6", linewidth=0.8)
        vertices = [self.mesh.vertex_point(v) for v in range(self.mesh.vertex_count)]
        xy = project(self.mesh, vertices, self.projection)
        if len(xy):
            ax.scatter(xy[:, 0], xy[:, 1], s=0.5, color="0.85", linewidths=0)

    def _polyline(self, points: Sequence[SurfacePoint], **style: Any) -> None:
        xy = project(self.mesh, points, self.projection)
        for piece in _pieces(xy, self._jump):
            self.axes.plot(piece[:, 0], piece[:, 1], **style)

    def _mark(self, point: SurfacePoint, **style: Any) -> None:
        xy = project(self.mesh, [point], self.projection)
        if len(xy):
            self.axes.scatter(xy[:, 0], xy[:, 1], zorder=5, **style)

    def draw_geodesics(self, document: Dict[str, Any]) -> None:
        """측지선을 길이 순 색상으로"""
        paths = document.get("geodesics", [])
        lengths = [float(g["length"]) for g in paths]
        if lengths:
            norm = colors.Normalize(vmin=min(lengths), vmax=max(max(lengths), min(lengths) + 1e-12))
            ramp = matplotlib.colormaps["viridis"]
            for path, length in zip(paths, lengths):
                points = [_point(row) for row in path["points"]]
                self._polyline(points, color=ramp(norm(length)), linewidth=1.4)
            self.figure.colorbar(cm.ScalarMappable(norm=norm, cmap=ramp), ax=self.axes, label="length")
        for key, color in (("x", "tab:red"), ("y", "tab:blue")):
            if key in document:
                self._mark(_point(document[key]), color=color, s=18)
        self.axes.set_title(f"{len(paths)} geodesics, k={document.get('k')}")

    def draw_cut_locus(self, document: Dict[str, Any]) -> None:
        """절단 궤적 그래프"""
        for edge in document.get("edges", []):
            points = [_point(p) for p in edge["polyline"]]
            self._polyline(points, color="black", linewidth=1.0)
        for node in document.get("nodes", []):
            size = 6 + 4 * int(node.get("degree", 1))
            self._mark(_point(node["point"]), color="tab:orange", s=size)
        self._mark(_point(document["source"]), color="tab:red", s=18)
        self.axes.set_title(f"cut locus, Betti number {document.get('betti_number')}")

    def draw_sweep(self, document: Dict[str, Any]) -> None:
        """자오선 부채꼴"""
        meridians = document.get("meridians", [])
        ramp = matplotlib.colormaps["twilight"]
        for i, meridian in enumerate(meridians):
            points = [_point(row) for row in meridian["points"]]
            self._polyline(points, color=ramp(i / max(len(meridians), 1)), linewidth=0.9)
        self._mark(_point(document["x"]), color="tab:red", s=18)
        self._mark(_point(document["z"]), color="tab:blue", s=18)
        self.axes.set_title(f"sweep-out, L={document.get('L', math.nan):.4g}, degree {document.get('degree')}")

    def save(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.figure.savefig(path, format="svg", metadata={"Date": None})
        plt.close(self.figure)
        return path


def render_svg(
    document: Dict[str, Any],
    mesh: IntrinsicMesh,
    path: Union[str, Path],
    projection: Optional[str] = None,
) -> Path:
    """
    문서를 SVG 파일로 그리기

    Args:
        document: read_document 로 읽은 문서 (enumeration / cutlocus / sweepout)
        mesh: 문서를 만든 메쉬
        path: SVG 경로
        projection: spherical 또는 planar-torus (없으면 메쉬에 맞춤)

    Raises:
        SchemaMismatch: 그릴 수 없는 문서 종류
    """
    doc_type = document.get("type")
    renderer = SvgRenderer(mesh, projection)
    try:
        if doc_type == "enumeration":
            renderer.draw_geodesics(document)
        elif doc_type == "cutlocus":
            renderer.draw_cut_locus(document)
        elif doc_type == "sweepout":
            renderer.draw_sweep(document)
        else:
            raise SchemaMismatch(
                f"Cannot render document type {doc_type!r}",
                expected=("enumeration", "cutlocus", "sweepout"), found=doc_type,
            )
    except (KeyError, TypeError, IndexError) as e:
        plt.close(renderer.figure)
        raise SchemaMismatch(f"Malformed {doc_type} document: {e}", found=doc_type) from e
    except SchemaMismatch:
        plt.close(renderer.figure)
        raise
    logger.info(f"Rendering {doc_type} with {renderer.projection} projection to {path}")
    return renderer.save(path)
