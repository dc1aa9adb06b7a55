# -*- coding: utf-8 -*-
"""
메쉬 파일 입출력

OBJ/PLY/OFF 는 trimesh 로 읽고 쓴다. 임베딩이 없는 메쉬 (평평한 토러스 등) 는
면-변 길이를 그대로 담은 intrinsic JSON 으로 저장한다.
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np
import trimesh

from src.core.exceptions import MeshFormatError
from src.domain.surface.mesh import IntrinsicMesh, build_mesh

logger = logging.getLogger(__name__)

INTRINSIC_FORMAT = "intrinsic-mesh"
INTRINSIC_VERSION = "1.0"
TRIMESH_SUFFIXES = {".obj", ".ply", ".off", ".stl"}

PathLike = Union[str, Path]


def mesh_to_dict(mesh: IntrinsicMesh) -> Dict[str, Any]:
    """intrinsic JSON 딕셔너리"""
    data: Dict[str, Any] = {
        "format": INTRINSIC_FORMAT,
        "schema_version": INTRINSIC_VERSION,
        "kind": mesh.kind,
        "params": dict(mesh.params),
        "faces": mesh.faces.tolist(),
        "face_lengths": mesh.face_lengths.tolist(),
    }
    if mesh.embedding is not None:
        data["embedding"] = mesh.embedding.tolist()
    if mesh.uv is not None and mesh.periods is not None:
        data["uv"] = mesh.uv.tolist()
        data["periods"] = list(mesh.periods)
    return data


def mesh_from_dict(data: Dict[str, Any], source: str = "<dict>") -> IntrinsicMesh:
    """
    intrinsic JSON 딕셔너리에서 메쉬 생성

    Raises:
        MeshFormatError: 형식 표시나 필수 필드가 없을 때
    """
    if data.get("format") != INTRINSIC_FORMAT:
        raise MeshFormatError(f"Not an intrinsic mesh document: {source}", path=source)
    try:
        faces = data["faces"]
        lengths = data["face_lengths"]
    except KeyError as e:
        raise MeshFormatError(f"Intrinsic mesh {source} is missing field {e}", path=source) from e
    periods = data.get("periods")
    return build_mesh(
        faces,
        edge_lengths=np.asarray(lengths, dtype=np.float64),
        embedding=data.get("embedding"),
        uv=None if data.get("uv") is None else np.asarray(data["uv"], dtype=np.float64),
        periods=None if periods is None else tuple(periods),
        kind=data.get("kind", "custom"),
        params=data.get("params"),
    )


def read_mesh(path: PathLike) -> IntrinsicMesh:
    """
    파일에서 메쉬 읽기

    Args:
        path: .json (intrinsic) 또는 .obj/.ply/.off/.stl

    Returns:
        검증된 IntrinsicMesh

    Raises:
        MeshFormatError: 파일이 없거나 파싱할 수 없을 때
        NonManifoldEdge, DegenerateFace, NonOrientable, UnsupportedTopology: 검증 실패
    """
    path = Path(path)
    if not path.is_file():
        raise MeshFormatError(f"Mesh file not found: {path}", path=str(path))
    suffix = path.suffix.lower()

    if suffix == ".json":
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, ValueError) as e:
            raise MeshFormatError(f"Cannot parse intrinsic mesh {path}: {e}", path=str(path)) from e
        mesh = mesh_from_dict(data, source=str(path))
    elif suffix in TRIMESH_SUFFIXES:
        try:
            loaded = trimesh.load_mesh(str(path), process=False)
        except Exception as e:
            raise MeshFormatError(f"Cannot parse mesh {path}: {e}", path=str(path)) from e
        if not isinstance(loaded, trimesh.Trimesh) or len(loaded.faces) == 0:
            raise MeshFormatError(f"No triangle mesh found in {path}", path=str(path))
        try:
            mesh = build_mesh(
                np.asarray(loaded.faces), embedding=np.asarray(loaded.vertices),
                kind="custom", params={},
            )
        except (ValueError, IndexError) as e:
            raise MeshFormatError(f"Malformed mesh {path}: {e}", path=str(path)) from e
    else:
        raise MeshFormatError(f"Unsupported mesh format: {suffix}", path=str(path))

    logger.info(f"Loaded mesh {path}: V={mesh.vertex_count} F={mesh.face_count} chi={mesh.euler_characteristic}")
    return mesh


def write_intrinsic_json(mesh: IntrinsicMesh, path: PathLike) -> Path:
    """intrinsic JSON 저장"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(mesh_to_dict(mesh), indent=1), encoding="utf-8")
    logger.info(f"Wrote intrinsic mesh to {path}")
    return path


def write_obj(mesh: IntrinsicMesh, path: PathLike) -> Path:
    """
    임베딩 메쉬를 OBJ 로 저장

    Raises:
        MeshFormatError: 임베딩이 없을 때 (intrinsic JSON 을 써야 함)
    """
    path = Path(path)
    if mesh.embedding is None:
        raise MeshFormatError(
            "Mesh has no embedding; write it as intrinsic JSON instead", path=str(path)
        )
    path.parent.mkdir(parents=True, exist_ok=True)
    trimesh.Trimesh(vertices=mesh.embedding, faces=mesh.faces, process=False).export(str(path))
    logger.info(f"Wrote OBJ mesh to {path}")
    return path


def write_mesh(mesh: IntrinsicMesh, path: PathLike) -> Path:
    """확장자에 맞춰 저장 (.json 이 아니면 OBJ)"""
    if Path(path).suffix.lower() == ".json":
        return write_intrinsic_json(mesh, path)
    return write_obj(mesh, path)
