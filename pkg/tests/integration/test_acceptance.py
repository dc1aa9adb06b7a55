"""
해석해가 있는 곡면에서의 측지선 열거 통합 테스트
"""
import json
import math

import pytest

from src.domain.enumeration import (
    Route,
    analytic_geodesics_for,
    dedupe,
    enumerate_geodesics,
    second_geodesic,
    verify_bounds,
)
from src.domain.metric import diameter
from src.domain.shorten import is_geodesic
from src.presentation.cli import run

pytestmark = [pytest.mark.integration, pytest.mark.slow]


@pytest.fixture(scope="module")
def sphere_points(sphere_fine):
    north = sphere_fine.locate_xyz([0.0, 0.0, 1.0])
    equator = sphere_fine.locate_xyz([1.0, 0.0, 0.0])
    return north, equator


@pytest.fixture(scope="module")
def dense_points(sphere_dense):
    north = sphere_dense.locate_xyz([0.0, 0.0, 1.0])
    equator = sphere_dense.locate_xyz([1.0, 0.0, 0.0])
    return north, equator


def _matches_oracle(report, oracle, rel=0.05):
    assert len(report.lengths) == len(oracle)
    for found, expected in zip(report.lengths, oracle):
        tolerance = rel * 2 * math.pi if expected == 0 else 0.0
        assert found == pytest.approx(expected, rel=rel, abs=tolerance)


class TestSphereEnumeration:
    """둥근 구면 열거 테스트"""

    def test_quarter_separation_k4(self, sphere_dense, dense_points):
        """20k 면 구면, θ = π/2, k = 4 → π/2, 3π/2, 5π/2, 7π/2"""
        assert sphere_dense.face_count >= 20000
        north, equator = dense_points
        report = enumerate_geodesics(sphere_dense, north, equator, k=4)
        assert report.q == 2
        assert report.route in (Route.FILLING_TREE, Route.SWEEP_OUT)
        _matches_oracle(report, analytic_geodesics_for(sphere_dense, north, equator, 4))
        assert report.bounds_passed
        assert all(length <= 55 * report.d + report.slack for length in report.lengths)

    def test_based_loops_k3(self, sphere_fine, sphere_points):
        """x = y, k = 3 → 0, 2π, 2π"""
        north, _ = sphere_points
        report = enumerate_geodesics(sphere_fine, north, north, k=3)
        _matches_oracle(report, [0.0, 2 * math.pi, 2 * math.pi])
        assert verify_bounds(report).get("quadratic_based").passed

    def test_second_geodesic(self, sphere_fine, sphere_points):
        """두 번째 측지선 길이 ≤ 2q·d"""
        north, equator = sphere_points
        report = second_geodesic(sphere_fine, north, equator)
        _matches_oracle(report, [math.pi / 2, 3 * math.pi / 2])
        assert max(report.lengths) <= 4 * report.d + report.slack

    def test_report_geodesics_certified(self, sphere_fine, sphere_points):
        """보고된 측지선은 인증되고 중복 제거가 멱등"""
        north, equator = sphere_points
        report = enumerate_geodesics(sphere_fine, north, equator, k=2)
        for geodesic in report.geodesics:
            assert is_geodesic(sphere_fine, geodesic, based=True)
        assert len(dedupe(sphere_fine, report.geodesics)) == len(report.geodesics)


class TestBumpySphere:
    """닫힌 형태가 없는 구면 테스트"""

    def test_nontrivial_loop(self, bumpy_sphere):
        """x = y 이면 비자명 측지 루프 길이 ≤ 4d"""
        x = bumpy_sphere.vertex_point(0)
        d = diameter(bumpy_sphere)[0]
        report = second_geodesic(bumpy_sphere, x, x, d=d)
        assert report.metadata["nontrivial_loop"]
        assert report.lengths[1] <= 4 * d + report.slack


class TestTorusEnumeration:
    """평평한 토러스 열거 테스트"""

    def test_half_shift_k3(self, flat_torus):
        """(0,0) → (0.5,0), k = 3 → 0.5, 0.5, √1.25"""
        x, y = flat_torus.vertex_point(0), flat_torus.vertex_point(200)
        report = enumerate_geodesics(flat_torus, x, y, k=3)
        assert report.route == Route.PI1
        assert report.q == 1
        assert report.lengths == pytest.approx([0.5, 0.5, math.sqrt(1.25)], rel=0.02)
        assert verify_bounds(report).get("pi1_k_diam").passed

    def test_second_geodesic(self, flat_torus):
        """두 평행 이동 0.5, 0.5 ≤ √2"""
        x, y = flat_torus.vertex_point(0), flat_torus.vertex_point(200)
        report = second_geodesic(flat_torus, x, y)
        assert report.lengths == pytest.approx([0.5, 0.5], rel=0.02)
        assert max(report.lengths) <= 2 * report.d + report.slack


class TestCommandLine:
    """명령줄 종단 테스트"""

    def test_enumerate_torus(self, capsys, temp_data_dir):
        """enumerate 보고서 저장 후 verify"""
        config = temp_data_dir / "config.yaml"
        config.write_text("logging:\n  level: WARNING\n", encoding="utf-8")
        report_path = temp_data_dir / "report.json"
        status = run([
            "--config", str(config), "--seed", "1", "enumerate", "--surface", "torus:res=1200",
            "--x", "0", "--y", "uv:0.5,0", "--k", "3", "--out", str(report_path),
        ])
        assert status == 0
        document = json.loads(report_path.read_text())
        assert document["type"] == "enumeration"
        assert document["seed"] == 1
        assert document["lengths"] == pytest.approx([0.5, 0.5, math.sqrt(1.25)], rel=0.02)
        capsys.readouterr()
        assert run(["--config", str(config), "verify", "--report", str(report_path)]) == 0
