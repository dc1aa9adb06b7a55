# -*- coding: utf-8 -*-
"""
로깅 설정 모듈

stdout 은 JSON 문서 전용이므로 사람이 읽는 로그는 모두 stderr 나 파일로 보낸다.
명령 단위 이벤트(명령 종료, 플래그)는 structlog 로 남긴다.
"""
import logging
import logging.handlers
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import structlog
from pythonjsonlogger import jsonlogger

from src.infrastructure.config.settings import load_config

DEFAULT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
JSON_FORMAT = "%(asctime)s %(name)s %(levelname)s %(message)s"

# 메쉬 처리와 그림 라이브러리의 잡음
QUIET_LOGGERS = ("matplotlib", "trimesh", "PIL", "numba")


def resolve_level(name: Optional[str], default: str = "WARNING") -> int:
    """레벨 이름을 logging 상수로 (모르는 이름은 default)"""
    value = getattr(logging, str(name or default).upper(), None)
    return value if isinstance(value, int) else getattr(logging, default)


def _section(config: Dict[str, Any], *keys: str) -> Dict[str, Any]:
    for key in keys:
        config = config.get(key) or {}
    return config


def _console_handler(options: Dict[str, Any], level: int, formatter: logging.Formatter) -> logging.Handler:
    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(level)
    handler.setFormatter(formatter)
    return handler


def _file_handler(options: Dict[str, Any], formatter: logging.Formatter) -> logging.Handler:
    log_file = Path(options.get("path", "logs/geodesics.log"))
    log_file.parent.mkdir(parents=True, exist_ok=True)
    handler = logging.handlers.RotatingFileHandler(
        log_file,
        maxBytes=int(options.get("max_size_mb", 20)) * 1024 * 1024,
        backupCount=int(options.get("backup_count", 5)),
        encoding="utf-8",
    )
    handler.setLevel(resolve_level(options.get("level"), "INFO"))
    handler.setFormatter(formatter)
    return handler


def build_handlers(log_config: Dict[str, Any], level: int) -> List[logging.Handler]:
    """logging 섹션에서 핸들러 목록 생성"""
    handlers = _section(log_config, "handlers")
    structured = _section(handlers, "structured")
    if structured.get("enabled", False) and structured.get("format", "json") == "json":
        formatter: logging.Formatter = jsonlogger.JsonFormatter(fmt=JSON_FORMAT, datefmt="%Y-%m-%d %H:%M:%S")
    else:
        formatter = logging.Formatter(log_config.get("format", DEFAULT_FORMAT))

    built: List[logging.Handler] = []
    console = _section(handlers, "console")
    if console.get("enabled", True):
        built.append(_console_handler(console, level, formatter))
    file_options = _section(handlers, "file")
    if file_options.get("enabled", False):
        built.append(_file_handler(file_options, formatter))
    return built


def setup_logging(config: Optional[Dict[str, Any]] = None, level: Optional[str] = None) -> None:
    """
    루트 로거 설정

    Args:
        config: 설정 딕셔너리 (없으면 설정 파일에서 로드)
        level: 콘솔 레벨 강제 지정 (--log-level)
    """
    if config is None:
        config = load_config()
    log_config = _section(config, "logging")
    console_level = resolve_level(level or log_config.get("level"))

    root_logger = logging.getLogger()
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)
    for handler in build_handlers(log_config, console_level):
        root_logger.addHandler(handler)
    root_logger.setLevel(min([console_level] + [h.level for h in root_logger.handlers if h.level]))

    for name in QUIET_LOGGERS:
        logging.getLogger(name).setLevel(logging.WARNING)
    configure_events()


def configure_events() -> None:
    """명령 이벤트용 structlog 설정 (표준 logging 으로 전달)"""
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.processors.format_exc_info,
            structlog.processors.JSONRenderer(sort_keys=True),
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=False,
    )


def run_logger(command: str, seed: Optional[int] = None, **context: Any) -> Any:
    """명령 이름과 시드가 묶인 이벤트 로거"""
    return structlog.get_logger("geodesics.run").bind(command=command, seed=seed, **context)
