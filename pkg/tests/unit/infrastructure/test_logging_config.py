"""
로깅 설정 테스트
"""
import logging
import sys

import pytest
from pythonjsonlogger import jsonlogger

from src.infrastructure.config.logging_config import (
    QUIET_LOGGERS,
    build_handlers,
    resolve_level,
    run_logger,
    setup_logging,
)


@pytest.fixture
def restore_root():
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield root
    for handler in root.handlers[:]:
        root.removeHandler(handler)
        if handler not in handlers:
            handler.close()
    for handler in handlers:
        root.addHandler(handler)
    root.setLevel(level)


class TestResolveLevel:
    """레벨 이름 변환 테스트"""

    def test_names(self):
        """대소문자 무관"""
        assert resolve_level("debug") == logging.DEBUG
        assert resolve_level("ERROR") == logging.ERROR

    def test_unknown_falls_back(self):
        """모르는 이름과 None 은 기본값"""
        assert resolve_level("loud") == logging.WARNING
        assert resolve_level(None, "INFO") == logging.INFO


class TestSetupLogging:
    """루트 로거 설정 테스트"""

    def test_console_to_stderr(self, restore_root):
        """콘솔 핸들러 하나가 stderr 로, 레벨은 --log-level 우선"""
        setup_logging({"logging": {"level": "INFO"}}, level="DEBUG")
        assert restore_root.level == logging.DEBUG
        assert len(restore_root.handlers) == 1
        assert restore_root.handlers[0].stream is sys.stderr

    def test_file_handler(self, restore_root, temp_data_dir):
        """파일 핸들러가 추가되고 디렉터리가 생성됨"""
        log_file = temp_data_dir / "logs" / "run.log"
        config = {"logging": {"handlers": {"file": {"enabled": True, "path": str(log_file)}}}}
        setup_logging(config)
        assert log_file.parent.exists()
        assert len(restore_root.handlers) == 2
        # 파일 핸들러 INFO 가 루트 레벨을 끌어내림
        assert restore_root.level == logging.INFO

    def test_console_disabled(self, restore_root):
        """콘솔을 끄면 핸들러 없음"""
        setup_logging({"logging": {"handlers": {"console": {"enabled": False}}}})
        assert restore_root.handlers == []

    def test_quiet_loggers(self, restore_root):
        """메쉬/그림 라이브러리는 WARNING"""
        setup_logging({})
        for name in QUIET_LOGGERS:
            assert logging.getLogger(name).level == logging.WARNING


class TestBuildHandlers:
    """핸들러 생성 테스트"""

    def test_json_formatter(self):
        """structured 가 켜지면 JSON 포맷터"""
        config = {"handlers": {"structured": {"enabled": True, "format": "json"}}}
        handlers = build_handlers(config, logging.INFO)
        assert len(handlers) == 1
        assert isinstance(handlers[0].formatter, jsonlogger.JsonFormatter)

    def test_plain_formatter(self):
        """기본은 설정의 format 문자열"""
        handlers = build_handlers({"format": "%(message)s"}, logging.INFO)
        assert handlers[0].formatter._fmt == "%(message)s"


class TestRunLogger:
    """명령 이벤트 로거 테스트"""

    def test_binds_command_and_seed(self, restore_root, caplog):
        """command, seed 가 이벤트에 들어감"""
        setup_logging({"logging": {"level": "INFO"}})
        with caplog.at_level(logging.INFO, logger="geodesics.run"):
            run_logger("enumerate", 7, surface="sphere").info("command_finished", status=0)
        message = caplog.records[-1].getMessage()
        assert '"command": "enumerate"' in message
        assert '"seed": 7' in message
        assert '"status": 0' in message
