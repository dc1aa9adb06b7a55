# -*- coding: utf-8 -*-
"""
곡면 생성기 인터페이스
"""
from abc import ABC, abstractmethod
from typing import TYPE_CHECKING, Any, Dict

if TYPE_CHECKING:
    from src.domain.surface.mesh import IntrinsicMesh

# 생성 메쉬의 최소 변 개수
MIN_RESOLUTION = 100


class ISurfaceGenerator(ABC):
    """닫힌 곡면 메쉬 생성기"""

    @property
    @abstractmethod
    def kind(self) -> str:
        """생성기 이름"""
        pass

    @property
    @abstractmethod
    def parameters(self) -> Dict[str, float]:
        """기하 파라미터"""
        pass

    @abstractmethod
    def validate_parameters(self) -> None:
        """
        파라미터 검증

        Raises:
            ValueError: 양수가 아닌 기하 파라미터
        """
        pass

    @abstractmethod
    def generate(self, resolution: int) -> "IntrinsicMesh":
        """
        메쉬 생성

        Args:
            resolution: 목표 변 개수 (생성 결과는 이보다 크거나 같다)

        Returns:
            검증된 IntrinsicMesh
        """
        pass

    def describe(self) -> Dict[str, Any]:
        """메타데이터"""
        return {"kind": self.kind, "params": dict(self.parameters)}
