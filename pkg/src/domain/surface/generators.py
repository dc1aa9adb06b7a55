# -*- coding: utf-8 -*-
"""
시험용 곡면 생성기
"""
import logging
import math
from typing import Any, Dict, List, Optional, Type, Union

import numpy as np
import trimesh

from src.core.exceptions import ResolutionTooCoarse, UnsupportedKind
from src.core.interfaces.surface_generator import MIN_RESOLUTION, ISurfaceGenerator
from src.core.models.surface_spec import KIND_ALIASES, SurfaceSpec
from src.domain.surface.mesh import IntrinsicMesh, build_mesh

logger = logging.getLogger(__name__)


def icosphere_level(resolution: int) -> int:
    """변 개수가 resolution 이상이 되는 최소 세분 단계 (변 = 30·4^n)"""
    level = 0
    while 30 * 4 ** level < resolution:
        level += 1
    return level


def _unit_icosphere(resolution: int) -> trimesh.Trimesh:
    return trimesh.creation.icosphere(subdivisions=icosphere_level(resolution), radius=1.0)


def _check_resolution(resolution: int) -> None:
    if resolution < MIN_RESOLUTION:
        raise ResolutionTooCoarse(
            f"Resolution {resolution} is below the minimum of {MIN_RESOLUTION} edges",
            resolution=resolution,
        )


class BaseSurfaceGenerator(ISurfaceGenerator):
    """파라미터 보관과 검증 공통 구현"""

    name = "base"
    defaults: Dict[str, float] = {}

    def __init__(self, **params: float):
        unknown = set(params) - set(self.defaults)
        if unknown:
            raise ValueError(f"Unknown parameters for {self.name}: {sorted(unknown)}")
        self._params = {**self.defaults, **{k: float(v) for k, v in params.items()}}
        self.validate_parameters()

    @property
    def kind(self) -> str:
        return self.name

    @property
    def parameters(self) -> Dict[str, float]:
        return dict(self._params)

    def validate_parameters(self) -> None:
        for key, value in self._params.items():
            if not value > 0:
                raise ValueError(f"{self.name} parameter {key} must be positive, got {value}")

    def generate(self, resolution: int) -> IntrinsicMesh:
        _check_resolution(resolution)
        mesh = self._generate(resolution)
        logger.info(
            f"Generated {self.name} {self._params}: F={mesh.face_count} "
            f"E={mesh.edge_count} h={mesh.max_edge_length:.4g}"
        )
        return mesh

    def _generate(self, resolution: int) -> IntrinsicMesh:
        raise NotImplementedError


class RoundSphereGenerator(BaseSurfaceGenerator):
    """반지름 r 의 구 (정이십면체 세분)"""

    name = "round_sphere"
    defaults = {"r": 1.0}

    def _generate(self, resolution: int) -> IntrinsicMesh:
        sphere = _unit_icosphere(resolution)
        vertices = np.asarray(sphere.vertices) * self._params["r"]
        return build_mesh(sphere.faces, embedding=vertices, kind=self.name, params=self.parameters)


class EllipsoidGenerator(BaseSurfaceGenerator):
    """반축 a, b, c 의 타원체"""

    name = "ellipsoid"
    defaults = {"a": 1.0, "b": 1.0, "c": 1.5}

    def _generate(self, resolution: int) -> IntrinsicMesh:
        sphere = _unit_icosphere(resolution)
        scale = np.array([self._params["a"], self._params["b"], self._params["c"]])
        vertices = np.asarray(sphere.vertices) * scale
        return build_mesh(sphere.faces, embedding=vertices, kind=self.name, params=self.parameters)


class BumpySphereGenerator(BaseSurfaceGenerator):
    """
    등각 인자로 흔든 구

    변 길이 = 현 길이 · exp(ε(φ_i + φ_j)/2), φ = sin(fx)·sin(fy)·sin(fz).
    임베딩은 둥근 구 그대로 두며 그림용이다.
    """

    name = "bumpy_sphere"
    defaults = {"r": 1.0, "eps": 0.1, "freq": 3.0}

    def validate_parameters(self) -> None:
        if not self._params["r"] > 0 or not self._params["freq"] > 0:
            raise ValueError(f"{self.name} radius and frequency must be positive")
        if not self._params["eps"] >= 0:
            raise ValueError(f"{self.name} amplitude must be non-negative")

    def conformal_factor(self, unit_points: np.ndarray) -> np.ndarray:
        """단위 구 위 점에서의 log 등각 인자 φ"""
        f = self._params["freq"]
        return np.sin(f * unit_points[:, 0]) * np.sin(f * unit_points[:, 1]) * np.sin(
            f * unit_points[:, 2]
        )

    def _generate(self, resolution: int) -> IntrinsicMesh:
        sphere = _unit_icosphere(resolution)
        unit = np.asarray(sphere.vertices)
        faces = np.asarray(sphere.faces, dtype=np.int64)
        phi = self.conformal_factor(unit)
        vertices = unit * self._params["r"]
        head = np.roll(faces, -1, axis=1)
        chord = np.linalg.norm(vertices[head] - vertices[faces], axis=2)
        factor = np.exp(self._params["eps"] * (phi[faces] + phi[head]) / 2.0)
        return build_mesh(
            faces, edge_lengths=chord * factor, embedding=vertices,
            kind=self.name, params=self.parameters,
        )


class DumbbellGenerator(BaseSurfaceGenerator):
    """
    적도에 목이 있는 아령형 곡면

    반지름 프로필 R(θ) = r(1 - (1 - neck)·sin²θ), z 축으로 length 배 늘림.
    """

    name = "dumbbell"
    defaults = {"r": 1.0, "neck": 0.35, "length": 1.5}

    def validate_parameters(self) -> None:
        super().validate_parameters()
        if self._params["neck"] > 1.0:
            raise ValueError(f"{self.name} neck ratio must be in (0, 1]")

    def _generate(self, resolution: int) -> IntrinsicMesh:
        sphere = _unit_icosphere(resolution)
        unit = np.asarray(sphere.vertices)
        sin2 = 1.0 - np.clip(unit[:, 2], -1.0, 1.0) ** 2
        radius = self._params["r"] * (1.0 - (1.0 - self._params["neck"]) * sin2)
        vertices = unit * np.array([1.0, 1.0, self._params["length"]]) * radius[:, None]
        return build_mesh(sphere.faces, embedding=vertices, kind=self.name, params=self.parameters)


class FlatTorusGenerator(BaseSurfaceGenerator):
    """
    주기 (a, b) 의 평평한 토러스 (임베딩 없음, uv 좌표만)

    n×m 격자의 각 칸을 (v00, v10, v11), (v00, v11, v01) 두 삼각형으로 나눈다.
    """

    name = "flat_torus"
    defaults = {"a": 1.0, "b": 1.0}

    def grid_shape(self, resolution: int) -> tuple:
        """변 개수 3nm ≥ resolution 이고 n/m ≈ a/b 인 격자 크기"""
        a, b = self._params["a"], self._params["b"]
        cells = math.ceil(resolution / 3.0)
        n = max(3, math.ceil(math.sqrt(cells * a / b)))
        m = max(3, math.ceil(cells / n))
        return n, m

    def _generate(self, resolution: int) -> IntrinsicMesh:
        a, b = self._params["a"], self._params["b"]
        n, m = self.grid_shape(resolution)
        ii, jj = np.meshgrid(np.arange(n), np.arange(m), indexing="ij")
        ii, jj = ii.ravel(), jj.ravel()

        def vid(i: np.ndarray, j: np.ndarray) -> np.ndarray:
            return (i % n) * m + (j % m)

        v00, v10 = vid(ii, jj), vid(ii + 1, jj)
        v11, v01 = vid(ii + 1, jj + 1), vid(ii, jj + 1)
        faces = np.concatenate(
            [np.stack([v00, v10, v11], axis=1), np.stack([v00, v11, v01], axis=1)]
        )

        du, dv = a / n, b / m
        diagonal = math.hypot(du, dv)
        lower = np.tile([du, dv, diagonal], (n * m, 1))
        upper = np.tile([diagonal, du, dv], (n * m, 1))
        face_lengths = np.concatenate([lower, upper])

        uv = np.stack([ii * du, jj * dv], axis=1).astype(float)
        return build_mesh(
            faces, edge_lengths=face_lengths, uv=uv, periods=(a, b),
            kind=self.name, params=self.parameters,
        )


class SurfaceGeneratorFactory:
    """곡면 생성기 팩토리"""

    _registry: Dict[str, Type[BaseSurfaceGenerator]] = {
        "round_sphere": RoundSphereGenerator,
        "ellipsoid": EllipsoidGenerator,
        "bumpy_sphere": BumpySphereGenerator,
        "dumbbell": DumbbellGenerator,
        "flat_torus": FlatTorusGenerator,
    }

    @classmethod
    def create(cls, kind: str, **params: float) -> BaseSurfaceGenerator:
        """생성기 생성"""
        name = KIND_ALIASES.get(kind, kind)
        if name not in cls._registry:
            raise UnsupportedKind(f"Unknown surface kind: {kind}", kind=kind)
        return cls._registry[name](**params)

    @classmethod
    def register(cls, name: str, generator: Type[BaseSurfaceGenerator]) -> None:
        """생성기 등록"""
        cls._registry[name] = generator

    @classmethod
    def list_kinds(cls) -> List[str]:
        """사용 가능한 곡면 종류"""
        return list(cls._registry.keys())


def generate_surface(
    kind: Union[str, SurfaceSpec],
    resolution: Optional[int] = None,
    **params: Any,
) -> IntrinsicMesh:
    """
    이름 또는 SurfaceSpec 으로 곡면 생성

    Args:
        kind: 곡면 종류 또는 SurfaceSpec
        resolution: 목표 변 개수 (SurfaceSpec 이면 생략 가능)
        **params: 기하 파라미터

    Returns:
        검증된 IntrinsicMesh

    Raises:
        UnsupportedKind: 알 수 없는 종류
        ResolutionTooCoarse: resolution < 100
    """
    if isinstance(kind, SurfaceSpec):
        spec = kind
        params = {**spec.params, **params}
        resolution = spec.resolution if resolution is None else resolution
        kind = spec.kind
    if resolution is None:
        raise ValueError("resolution is required")
    generator = SurfaceGeneratorFactory.create(kind, **params)
    return generator.generate(int(resolution))
