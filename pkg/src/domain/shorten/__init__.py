# -*- coding: utf-8 -*-
"""
곡선 단축 도메인 - Birkhoff 단축과 측지선 인증
"""
from src.domain.shorten.birkhoff import (
    DiscretizedCurve,
    ShortenResult,
    ShortenStatus,
    birkhoff_step,
    resample,
    shorten_to_critical,
)
from src.domain.shorten.certify import (
    GeodesicCertificate,
    corner_defect,
    is_geodesic,
    straightness_defects,
    tighten,
)

__all__ = [
    # Birkhoff
    "DiscretizedCurve",
    "ShortenResult",
    "ShortenStatus",
    "birkhoff_step",
    "resample",
    "shorten_to_critical",
    # 인증
    "GeodesicCertificate",
    "corner_defect",
    "is_geodesic",
    "straightness_defects",
    "tighten",
]
