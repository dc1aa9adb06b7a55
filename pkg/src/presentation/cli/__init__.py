# -*- coding: utf-8 -*-
"""
명령줄 인터페이스와 SVG 렌더링
"""
from src.presentation.cli.main import RunConfig, main, parse_point, run
from src.presentation.cli.render import SvgRenderer, render_svg

__all__ = [
    "RunConfig",
    "main",
    "parse_point",
    "run",
    "SvgRenderer",
    "render_svg",
]
