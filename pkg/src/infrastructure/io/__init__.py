# -*- coding: utf-8 -*-
"""
파일 입출력 - 메쉬 파일과 JSON 문서
"""
from src.infrastructure.io.mesh_io import (
    mesh_from_dict,
    mesh_to_dict,
    read_mesh,
    write_intrinsic_json,
    write_mesh,
    write_obj,
)
from src.infrastructure.io.report_io import (
    DOCUMENT_TYPES,
    dumps,
    load_report,
    make_document,
    read_document,
    report_document,
    save_report,
    write_document,
)

__all__ = [
    # 메쉬
    "mesh_from_dict",
    "mesh_to_dict",
    "read_mesh",
    "write_intrinsic_json",
    "write_mesh",
    "write_obj",
    # JSON 문서
    "DOCUMENT_TYPES",
    "dumps",
    "load_report",
    "make_document",
    "read_document",
    "report_document",
    "save_report",
    "write_document",
]
