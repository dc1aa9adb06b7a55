# -*- coding: utf-8 -*-
"""
절단 궤적 도메인 - 절단 궤적 그래프, 최소 측지선, 꼭짓점으로 미끄러뜨리기
"""
from src.domain.cutlocus.graph import CutLocusGraph, cut_locus, edge_disagreement
from src.domain.cutlocus.minimizing import (
    SlideResult,
    digon_loop,
    minimizing_geodesics,
    multiplicity_agreement,
    slide_to_vertex,
)

__all__ = [
    # 그래프
    "CutLocusGraph",
    "cut_locus",
    "edge_disagreement",
    # 최소 측지선
    "SlideResult",
    "digon_loop",
    "minimizing_geodesics",
    "multiplicity_agreement",
    "slide_to_vertex",
]
