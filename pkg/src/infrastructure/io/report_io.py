# -*- coding: utf-8 -*-
"""
JSON 문서 입출력

cli 가 쓰는 모든 JSON 문서는 schema_version 과 type 필드를 가진다. 같은 입력과
설정이면 같은 바이트가 나오도록 키를 정렬해 기록한다.
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from src.core.exceptions import SchemaMismatch
from src.domain.enumeration.report import SCHEMA_VERSION, EnumerationReport

logger = logging.getLogger(__name__)

DOCUMENT_TYPES = ("enumeration", "cutlocus", "sweepout", "diameter", "path", "verdict")

PathLike = Union[str, Path]


def _default(value: Any) -> Any:
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    if hasattr(value, "to_dict"):
        return value.to_dict()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def dumps(data: Dict[str, Any]) -> str:
    """결정적 JSON 문자열"""
    return json.dumps(data, sort_keys=True, indent=2, default=_default) + "\n"


def make_document(doc_type: str, payload: Dict[str, Any], seed: Optional[int] = None) -> Dict[str, Any]:
    """schema_version, type, seed 를 붙인 문서"""
    if doc_type not in DOCUMENT_TYPES:
        raise ValueError(f"Unknown document type: {doc_type}")
    return {**payload, "schema_version": SCHEMA_VERSION, "type": doc_type, "seed": seed}


def write_document(document: Dict[str, Any], path: PathLike) -> Path:
    """문서를 파일에 기록"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(document), encoding="utf-8")
    logger.info(f"Wrote {document.get('type', 'document')} to {path}")
    return path


def read_document(path: PathLike, expected_type: Optional[str] = None) -> Dict[str, Any]:
    """
    문서 읽기와 스키마 확인

    Raises:
        SchemaMismatch: JSON 이 아니거나, 버전 또는 type 이 맞지 않을 때
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as e:
        raise SchemaMismatch(f"Cannot read JSON document {path}: {e}", expected=SCHEMA_VERSION) from e
    if not isinstance(data, dict):
        raise SchemaMismatch(f"{path} does not hold a JSON object", expected="object", found=type(data).__name__)
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaMismatch(
            f"{path} has schema version {version!r}, expected {SCHEMA_VERSION!r}",
            expected=SCHEMA_VERSION, found=version,
        )
    doc_type = data.get("type")
    if doc_type not in DOCUMENT_TYPES or (expected_type is not None and doc_type != expected_type):
        raise SchemaMismatch(
            f"{path} has document type {doc_type!r}",
            expected=expected_type or DOCUMENT_TYPES, found=doc_type,
        )
    return data


def report_document(report: EnumerationReport) -> Dict[str, Any]:
    """보고서 문서"""
    return make_document("enumeration", report.to_dict(), seed=report.seed)


def save_report(report: EnumerationReport, path: PathLike) -> Path:
    """보고서 저장"""
    return write_document(report_document(report), path)


def load_report(path: PathLike) -> EnumerationReport:
    """
    보고서 읽기

    Raises:
        SchemaMismatch: 보고서 문서가 아닐 때
    """
    return EnumerationReport.from_dict(read_document(path, expected_type="enumeration"))
