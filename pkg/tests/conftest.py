"""
pytest 전역 fixture 및 설정
"""
import os
import sys
from pathlib import Path

import numpy as np
import pytest

# 프로젝트 루트를 Python 경로에 추가
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

# 테스트 환경 설정
os.environ["TESTING"] = "true"
os.environ["LOG_LEVEL"] = "DEBUG"

from src.domain.metric import clear_cache  # noqa: E402
from src.domain.surface import build_mesh, generate_surface  # noqa: E402
from src.infrastructure.config import GeodesicSettings, set_settings  # noqa: E402


# 세션 단위 메쉬 (생성 비용이 크므로 재사용)
@pytest.fixture(scope="session")
def sphere_coarse():
    """단위 구면, 480 변 (icosphere level 2)"""
    return generate_surface("round_sphere", 480, r=1.0)


@pytest.fixture(scope="session")
def sphere_fine():
    """단위 구면, 1920 변 (icosphere level 3)"""
    return generate_surface("round_sphere", 1920, r=1.0)


@pytest.fixture(scope="session")
def sphere_dense():
    """단위 구면, 30720 변, 20480 면 (icosphere level 5)"""
    return generate_surface("round_sphere", 30720, r=1.0)


@pytest.fixture(scope="session")
def flat_torus():
    """1 x 1 평탄 토러스, 20 x 20 격자"""
    return generate_surface("flat_torus", 1200, a=1.0, b=1.0)


@pytest.fixture(scope="session")
def bumpy_sphere():
    """울퉁불퉁한 구면"""
    return generate_surface("bumpy_sphere", 1920, r=1.0, eps=0.1, freq=3)


@pytest.fixture(scope="session")
def octahedron():
    """임베딩이 있는 정팔면체"""
    vertices = np.array([
        [1.0, 0.0, 0.0], [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0], [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0], [0.0, 0.0, -1.0],
    ])
    faces = [
        [0, 2, 4], [2, 1, 4], [1, 3, 4], [3, 0, 4],
        [2, 0, 5], [1, 2, 5], [3, 1, 5], [0, 3, 5],
    ]
    return build_mesh(faces, embedding=vertices, kind="octahedron")


@pytest.fixture
def default_settings():
    """기본 설정"""
    return GeodesicSettings()


@pytest.fixture
def temp_data_dir(tmp_path):
    """임시 데이터 디렉토리"""
    data_dir = tmp_path / "test_data"
    data_dir.mkdir()
    return data_dir


@pytest.fixture(autouse=True)
def reset_singletons():
    """전역 설정과 거리 캐시 리셋"""
    # config.yaml 이나 GEODESICS_CONFIG 에 영향받지 않도록 기본값 고정
    set_settings(GeodesicSettings())
    yield
    set_settings(None)
    clear_cache()


# 마커별 설정
def pytest_configure(config):
    """pytest 설정"""
    config.addinivalue_line(
        "markers", "unit: 단위 테스트"
    )
    config.addinivalue_line(
        "markers", "integration: 통합 테스트"
    )
    config.addinivalue_line(
        "markers", "slow: 느린 테스트"
    )
