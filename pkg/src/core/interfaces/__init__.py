# -*- coding: utf-8 -*-
"""
핵심 인터페이스
"""
from .surface_generator import ISurfaceGenerator

__all__ = [
    # 곡면 생성
    "ISurfaceGenerator",
]
