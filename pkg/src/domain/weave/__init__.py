# -*- coding: utf-8 -*-
"""
Weave 도메인 - digon 분해와 수축, 가로막는 측지선, filling tree, sweep-out
"""
from src.domain.weave.contraction import (
    ContractionResult,
    ObstructionResult,
    connect_same_obstruction,
    contract_digon,
    loop_to_path_frames,
    obstructing_geodesic,
    retraction_frames,
)
from src.domain.weave.digon import (
    Digon,
    DigonDecomposition,
    build_digons,
    departure_direction,
    digon_decomposition,
    partition_faces,
)
from src.domain.weave.filling import (
    FillingOutcome,
    FillingTree,
    NodeStatus,
    assemble_sweep,
    run_filling_tree,
)
from src.domain.weave.sweep import (
    ExtractionResult,
    SweepOut,
    minmax_extract,
    standard_sweep,
    sweep_out_degree,
    trace_from,
)

__all__ = [
    # Digon
    "Digon",
    "DigonDecomposition",
    "build_digons",
    "departure_direction",
    "digon_decomposition",
    "partition_faces",
    # 수축
    "ContractionResult",
    "ObstructionResult",
    "connect_same_obstruction",
    "contract_digon",
    "loop_to_path_frames",
    "obstructing_geodesic",
    "retraction_frames",
    # Filling tree
    "FillingOutcome",
    "FillingTree",
    "NodeStatus",
    "assemble_sweep",
    "run_filling_tree",
    # Sweep-out
    "ExtractionResult",
    "SweepOut",
    "minmax_extract",
    "standard_sweep",
    "sweep_out_degree",
    "trace_from",
]
