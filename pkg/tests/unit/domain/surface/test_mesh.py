"""
IntrinsicMesh 검증과 기하량 테스트
"""
import math

import numpy as np
import pytest

from src.core.exceptions import (
    DegenerateFace,
    InvalidSurfacePoint,
    NonManifoldEdge,
    NonOrientable,
    UnsupportedTopology,
)
from src.core.models import SurfacePoint
from src.domain.surface import build_mesh

TETRAHEDRON = [[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]]
OCTAHEDRON = [
    [0, 2, 4], [2, 1, 4], [1, 3, 4], [3, 0, 4],
    [2, 0, 5], [1, 2, 5], [3, 1, 5], [0, 3, 5],
]


def _unit_lengths(faces):
    return {(min(a, b), max(a, b)): 1.0 for f in faces for a, b in zip(f, f[1:] + f[:1])}


class TestMeshValidation:
    """입력 검증 테스트"""

    def test_tetrahedron(self):
        """정사면체 생성"""
        mesh = build_mesh(TETRAHEDRON, _unit_lengths(TETRAHEDRON))
        assert (mesh.vertex_count, mesh.edge_count, mesh.face_count) == (4, 6, 4)
        assert mesh.euler_characteristic == 2
        assert mesh.is_sphere
        assert mesh.kind == "custom"

    def test_non_manifold_edge(self):
        """세 면이 공유하는 변"""
        faces = OCTAHEDRON + [[0, 2, 1]]
        with pytest.raises(NonManifoldEdge) as exc_info:
            build_mesh(faces, _unit_lengths(faces))
        assert exc_info.value.face_count != 2

    def test_non_orientable(self):
        """한 면만 뒤집힌 팔면체"""
        faces = [list(f) for f in OCTAHEDRON]
        faces[0] = [0, 4, 2]
        with pytest.raises(NonOrientable):
            build_mesh(faces, _unit_lengths(faces))

    def test_triangle_inequality(self):
        """삼각 부등식 위반"""
        lengths = _unit_lengths(TETRAHEDRON)
        lengths[(0, 1)] = 3.0
        with pytest.raises(DegenerateFace, match="triangle inequality"):
            build_mesh(TETRAHEDRON, lengths)

    def test_repeated_vertex(self):
        """꼭짓점이 반복된 면"""
        faces = [list(f) for f in OCTAHEDRON]
        faces[0] = [0, 0, 4]
        with pytest.raises(DegenerateFace) as exc_info:
            build_mesh(faces, np.ones((8, 3)))
        assert exc_info.value.face == 0

    def test_non_positive_length(self):
        """0 길이 변"""
        lengths = _unit_lengths(TETRAHEDRON)
        lengths[(2, 3)] = 0.0
        with pytest.raises(DegenerateFace):
            build_mesh(TETRAHEDRON, lengths)

    def test_disconnected(self):
        """연결되지 않은 두 사면체"""
        faces = TETRAHEDRON + [[a + 4 for a in f] for f in TETRAHEDRON]
        with pytest.raises(UnsupportedTopology, match="connected components"):
            build_mesh(faces, _unit_lengths(faces))

    def test_inconsistent_face_lengths(self):
        """면마다 다른 변 길이"""
        face_lengths = np.ones((4, 3))
        face_lengths[0, 0] = 1.5
        with pytest.raises(ValueError, match="inconsistent"):
            build_mesh(TETRAHEDRON, face_lengths)

    def test_missing_metric(self):
        """길이도 임베딩도 없음"""
        with pytest.raises(ValueError):
            build_mesh(TETRAHEDRON)
        with pytest.raises(ValueError, match="Missing edge length"):
            build_mesh(TETRAHEDRON, {(0, 1): 1.0})

    def test_arrays_are_read_only(self, octahedron):
        """생성 후 배열은 읽기 전용"""
        with pytest.raises(ValueError):
            octahedron.edge_lengths[0] = 2.0


class TestMeshConnectivity:
    """연결 정보 테스트"""

    def test_gluing_is_involution(self, octahedron):
        """붙임은 대합"""
        for f in range(octahedron.face_count):
            for s in range(3):
                g, t = octahedron.other_side(f, s)
                assert octahedron.other_side(g, t) == (f, s)
                assert octahedron.face_edges[f, s] == octahedron.face_edges[g, t]

    def test_one_ring(self, octahedron):
        """팔면체 꼭짓점 주위 면 4 개"""
        for v in range(octahedron.vertex_count):
            ring = octahedron.one_ring(v)
            assert len(ring) == 4
            assert ring[0] == tuple(int(x) for x in octahedron.vertex_corner[v])
            for f, c in ring:
                assert octahedron.faces[f, c] == v

    def test_ccw_and_cw_are_inverse(self, sphere_coarse):
        """반시계 다음 코너의 시계 다음은 제자리"""
        for f in range(0, sphere_coarse.face_count, 17):
            for c in range(3):
                g, d = sphere_coarse.ccw_corner(f, c)
                assert sphere_coarse.cw_corner(g, d) == (f, c)

    def test_corner_and_side_lookup(self, octahedron):
        """코너 번호와 공유 변 찾기"""
        assert octahedron.corner_of(0, 4) == 2
        with pytest.raises(InvalidSurfacePoint):
            octahedron.corner_of(0, 5)
        g, _ = octahedron.other_side(0, 1)
        assert octahedron.side_between(0, g) == 1
        assert octahedron.side_between(0, 0) is None

    def test_edge_graph(self, octahedron):
        """변 그래프"""
        graph = octahedron.edge_graph
        assert graph.number_of_nodes() == 6
        assert graph.number_of_edges() == 12
        assert graph[0][2]["weight"] == pytest.approx(math.sqrt(2.0))


class TestMeshGeometry:
    """기하량 테스트"""

    def test_octahedron_angles(self, octahedron):
        """정삼각형 면의 각과 원뿔각"""
        assert np.allclose(octahedron.corner_angles, math.pi / 3)
        assert np.allclose(octahedron.cone_angles, 4 * math.pi / 3)
        assert np.allclose(octahedron.angle_defects, 2 * math.pi / 3)

    def test_gauss_bonnet(self, octahedron, sphere_fine, flat_torus):
        """결손 합은 2πχ"""
        for mesh in (octahedron, sphere_fine, flat_torus):
            assert mesh.gauss_bonnet_residual < 1e-9

    def test_area(self, octahedron):
        """팔면체 넓이 = 8 · (√3/4)·2"""
        assert octahedron.area == pytest.approx(8 * math.sqrt(3) / 4 * 2)
        assert octahedron.vertex_areas.sum() == pytest.approx(octahedron.area)

    def test_face_coords(self, octahedron):
        """표준 배치 - 코너 0 원점, 코너 1 은 +x 축"""
        coords = octahedron.face_coords
        assert np.allclose(coords[:, 0], 0.0)
        assert np.allclose(coords[:, 1, 1], 0.0)
        assert np.all(coords[:, 2, 1] > 0)
        side = np.linalg.norm(coords[:, 2] - coords[:, 1], axis=1)
        assert np.allclose(side, octahedron.face_lengths[:, 1])

    def test_h_and_fingerprint(self, octahedron):
        """해상도와 식별 해시"""
        assert octahedron.h == pytest.approx(math.sqrt(2.0))
        assert octahedron.max_edge_length == octahedron.h
        assert len(octahedron.fingerprint) == 40
        again = build_mesh(OCTAHEDRON, octahedron.face_lengths)
        assert again.fingerprint == octahedron.fingerprint

    def test_describe(self, octahedron):
        """요약 통계"""
        info = octahedron.describe()
        assert info["kind"] == "octahedron"
        assert info["euler_characteristic"] == 2
        assert info["faces"] == 8


class TestMeshPoints:
    """점 연산 테스트"""

    def test_vertex_point(self, octahedron):
        """꼭짓점 위의 점"""
        p = octahedron.vertex_point(4)
        assert octahedron.point_vertex(p) == 4
        assert len(octahedron.faces_containing(p)) == 4
        with pytest.raises(InvalidSurfacePoint):
            octahedron.vertex_point(6)

    def test_check_point(self, octahedron):
        """면 번호 범위"""
        with pytest.raises(InvalidSurfacePoint):
            octahedron.check_point(SurfacePoint(8, (1, 0, 0)))

    def test_side_point(self, octahedron):
        """변 위의 점은 두 면에 속함"""
        p = SurfacePoint(0, (0.5, 0.5, 0.0))
        assert octahedron.point_side(p) == 0
        faces = octahedron.faces_containing(p)
        assert len(faces) == 2
        other = octahedron.in_face(p, faces[1])
        assert octahedron.same_location(p, other)
        assert np.allclose(octahedron.position_of(other), [0.5, 0.5, 0.0])

    def test_express_in_wrong_face(self, octahedron):
        """점을 포함하지 않는 면"""
        with pytest.raises(InvalidSurfacePoint):
            octahedron.express_in(SurfacePoint(0, (1 / 3, 1 / 3, 1 / 3)), 6)

    def test_segment_length(self, octahedron):
        """면 안 거리"""
        a = SurfacePoint(0, (1, 0, 0))
        b = SurfacePoint(0, (0, 1, 0))
        assert octahedron.segment_length(a, b, 0) == pytest.approx(math.sqrt(2.0))
        assert octahedron.common_face(a, b) == 0

    def test_locate_xyz(self, octahedron):
        """3D 위치로 점 찾기"""
        p = octahedron.locate_xyz([0.0, 0.0, 1.0])
        assert octahedron.point_vertex(p) == 4
        q = octahedron.locate_xyz([1 / 3, 1 / 3, 1 / 3])
        assert q.face == 0
        assert q.barycentric == pytest.approx((1 / 3, 1 / 3, 1 / 3))

    def test_locate_uv(self, flat_torus):
        """주기 uv 좌표로 점 찾기"""
        p = flat_torus.locate_uv([1.512, -0.9863])
        assert np.allclose(flat_torus.position_of(p), [0.512, 0.0137])
        with pytest.raises(InvalidSurfacePoint):
            flat_torus.locate_xyz([0.0, 0.0, 0.0])

    def test_ambient_distance_wraps_on_torus(self, flat_torus):
        """토러스 거리는 최소 이미지"""
        d = flat_torus.ambient_distances(np.array([0.95, 0.5]), np.array([0.05, 0.5]))
        assert d == pytest.approx(0.1)
