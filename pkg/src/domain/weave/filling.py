# -*- coding: utf-8 -*-
"""
Filling tree 캐스케이드

가장 먼 점 z 에서 digon 으로 나누고 각 digon 을 수축한다. 수축이 측지 루프에서 멈추면
ρ 위로 상쇄를 시도하고, 가로막는 측지선 τ 가 나오면 그 영역의 절단 궤적 꼭짓점에서
다시 digon 으로 나눈다. 같은 뿌리-잎 경로에서 이미 기록된 가로막이가 다시 나오면
그 가지는 이어 붙이고(splice) 잘라낸다. 서로 다른 가로막이가 k-1 개 모이면 Loops,
모든 가지가 끝나면 digon 호모토피들로 sweep-out 을 조립한다.
"""
import enum
import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Deque, Dict, List, Optional, Sequence

import networkx as nx

from src.core.exceptions import BoundViolated, DegreeAmbiguous, ResolutionStall
from src.core.models.geometry import GeodesicPath, Homotopy, ShortenMode, SurfacePoint
from src.domain.cutlocus.graph import cut_locus
from src.domain.cutlocus.minimizing import minimizing_geodesics, slide_to_vertex
from src.domain.metric.distance import diameter, farthest_point, shortest_path
from src.domain.metric.frechet import frechet_distance, same_path
from src.domain.surface.mesh import IntrinsicMesh
from src.domain.surface.paths import constant_path
from src.domain.weave.contraction import contract_digon, loop_to_path_frames, obstructing_geodesic
from src.domain.weave.digon import (
    Digon,
    angle_tolerance,
    build_digons,
    cone_at,
    departure_direction,
    digon_decomposition,
)
from src.domain.weave.sweep import SweepOut, sweep_out_degree, trace_from
from src.infrastructure.config.settings import GeodesicSettings, get_settings

logger = logging.getLogger(__name__)

# digon 하나를 부채꼴로 채울 때 자오선 수 상한
MAX_FAN_MEMBERS = 64
# 자식 digon 이 부모 각 범위를 넘어도 되는 여유 (라디안)
MAX_SPAN_EXCESS = 1e-3


class NodeStatus(enum.Enum):
    """filling tree 노드 상태"""
    PENDING = "pending"
    CONTRACTED = "contracted"
    SPLIT = "split"
    OBSTRUCTED = "obstructed"
    SPLICED = "spliced"
    DEPTH_LIMIT = "depth_limit"


@dataclass
class FillingTree:
    """
    digon 분할/수축 캐스케이드 기록

    노드 속성: digon, status, loop_id, depth, vertex (분할점), homotopy.
    """
    graph: nx.DiGraph = field(default_factory=nx.DiGraph)
    root: int = 0
    obstructions: List[GeodesicPath] = field(default_factory=list)
    obstruction_loops: List[GeodesicPath] = field(default_factory=list)

    def add(self, digon: Optional[Digon], parent: Optional[int], depth: int) -> int:
        node = self.graph.number_of_nodes()
        self.graph.add_node(
            node, digon=digon, status=NodeStatus.PENDING, loop_id=None, depth=depth,
            vertex=None, homotopy=None, path_homotopy=None,
        )
        if parent is not None:
            self.graph.add_edge(parent, node)
        return node

    def set_status(self, node: int, status: NodeStatus, loop_id: Optional[int] = None, **extra: Any) -> None:
        data = self.graph.nodes[node]
        data["status"] = status
        data["loop_id"] = loop_id
        data.update(extra)

    def status(self, node: int) -> NodeStatus:
        return self.graph.nodes[node]["status"]

    def digon(self, node: int) -> Optional[Digon]:
        return self.graph.nodes[node]["digon"]

    def children(self, node: int) -> List[int]:
        return sorted(self.graph.successors(node))

    @property
    def leaves(self) -> List[int]:
        return sorted(n for n in self.graph.nodes if self.graph.out_degree(n) == 0)

    @property
    def is_tree(self) -> bool:
        return self.graph.number_of_nodes() > 0 and nx.is_arborescence(self.graph)

    def path_obstructions(self, node: int) -> List[int]:
        """뿌리에서 node 까지 기록된 가로막이 번호 (splice 는 제외)"""
        route = nx.shortest_path(self.graph, self.root, node)
        ids = []
        for n in route:
            data = self.graph.nodes[n]
            if data["status"] == NodeStatus.OBSTRUCTED and data["loop_id"] is not None:
                ids.append(data["loop_id"])
        return ids

    def recompute_lambda(self) -> int:
        """뿌리-잎 경로마다 서로 다른 가로막이 수의 최댓값"""
        return max((len(set(self.path_obstructions(leaf))) for leaf in self.leaves), default=0)

    def paths_distinct(self) -> bool:
        """모든 뿌리-잎 경로에서 가로막이 번호가 서로 다른지"""
        for leaf in self.leaves:
            ids = self.path_obstructions(leaf)
            if len(ids) != len(set(ids)):
                return False
        return True

    def sweep_bound(self, d: float, dist_xy: float, k: int) -> Dict[str, float]:
        """sweep-out 길이 L 의 두 가지 상한"""
        lam = self.recompute_lambda()
        return {
            "lambda_form": 3.0 * d + 2.0 * d * lam,
            "k_form": (2 * k - 1) * d + 2.0 * dist_xy,
        }

    def to_dict(self) -> Dict[str, Any]:
        nodes = []
        for n in sorted(self.graph.nodes):
            data = self.graph.nodes[n]
            digon = data["digon"]
            homotopy = data["homotopy"]
            nodes.append(
                {
                    "id": n,
                    "parent": next(iter(self.graph.predecessors(n)), None),
                    "depth": data["depth"],
                    "status": data["status"].value,
                    "loop_id": data["loop_id"],
                    "digon": None if digon is None else digon.index,
                    "fat": None if digon is None else digon.fat,
                    "max_length": None if homotopy is None else homotopy.max_length,
                }
            )
        return {
            "root": self.root,
            "lambda": self.recompute_lambda(),
            "nodes": nodes,
            "obstructions": [o.to_dict() for o in self.obstructions],
        }


@dataclass
class FillingOutcome:
    """
    run_filling_tree 결과

    kind 는 "loops" (서로 다른 가로막이 k-1 개 이상), "sweep", "stalled" 중 하나다.
    """
    kind: str
    tree: FillingTree
    rho: GeodesicPath
    d: float
    dist_xy: float
    k: int
    loops: List[GeodesicPath] = field(default_factory=list)
    sweep: Optional[SweepOut] = None
    flagged: bool = False
    flag: Optional[str] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def lambda_(self) -> int:
        return self.tree.recompute_lambda()

    @property
    def bounds_ok(self) -> bool:
        """sweep-out 의 L 이 두 상한을 모두 만족하는지 (sweep 이 없으면 True)"""
        return all(check["passed"] for check in self.metadata.get("bounds", {}).values())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "k": self.k,
            "d": self.d,
            "dist_xy": self.dist_xy,
            "lambda": self.lambda_,
            "flagged": self.flagged,
            "flag": self.flag,
            "bounds_ok": self.bounds_ok,
            "loops": [g.to_dict() for g in self.loops],
            "sweep": None if self.sweep is None else self.sweep.to_dict(),
            "tree": self.tree.to_dict(),
            "bounds": self.metadata.get("bounds", {}),
        }


def _match(
    mesh: IntrinsicMesh, path: GeodesicPath, pool: Sequence[GeodesicPath], ids: Sequence[int], radius: float
) -> Optional[int]:
    """pool 중 ids 에 속하고 path 와 같은 (양방향 정렬 거리) 경로 번호"""
    for i in ids:
        other = pool[i]
        if same_path(mesh, path, other, radius):
            return i
    return None


def _rays(
    mesh: IntrinsicMesh,
    x: SurfacePoint,
    z: SurfacePoint,
    theta: float,
    turn: float,
    reach: float,
    settings: GeodesicSettings,
) -> List[GeodesicPath]:
    """theta 에서 theta + turn 사이 (양 끝 제외) x 에서 곧게 뻗어 z 에서 닫은 자오선들"""
    tolerances = settings.resolve(mesh)
    count = int(min(max(math.ceil(abs(turn) * reach / tolerances.spacing), 1), MAX_FAN_MEMBERS))
    frames = []
    for j in range(1, count):
        ray = trace_from(mesh, x, theta + turn * j / count, reach)
        if not mesh.same_location(ray.end, z):
            ray = ray.concatenate(shortest_path(mesh, ray.end, z, settings=settings))
        frames.append(ray)
    return frames


def _fan(mesh: IntrinsicMesh, digon: Digon, settings: GeodesicSettings) -> List[GeodesicPath]:
    """side_a 에서 side_b 까지 x 에서 곧게 뻗은 자오선으로 채우기"""
    theta = departure_direction(mesh, digon.side_a)
    rays = _rays(mesh, digon.x, digon.z, theta, digon.angle_x, digon.length, settings)
    return [digon.side_a] + rays + [digon.side_b]


def _bridge(
    mesh: IntrinsicMesh,
    first: GeodesicPath,
    last: GeodesicPath,
    z: SurfacePoint,
    settings: GeodesicSettings,
) -> List[GeodesicPath]:
    """이웃 프레임 사이가 h_c 보다 벌어지면 출발 방향 사이를 곧은 자오선으로 메우기"""
    tolerances = settings.resolve(mesh)
    if frechet_distance(mesh, first, last) <= tolerances.spacing:
        return []
    cone = cone_at(mesh, first.start)
    theta = departure_direction(mesh, first)
    turn = (departure_direction(mesh, last) - theta) % cone
    if turn > cone / 2.0:
        turn -= cone
    reach = min(first.length, last.length)
    return _rays(mesh, first.start, z, theta, turn, reach, settings)


def _spanned_children(mesh: IntrinsicMesh, tree: FillingTree, node: int) -> List[int]:
    """부모 digon 의 side_a → side_b 각 범위 안에 있는 자식들 (출발 방향 순)"""
    digon = tree.digon(node)
    assert digon is not None
    cone = cone_at(mesh, digon.x)
    theta = departure_direction(mesh, digon.side_a)
    spanned = []
    for child in tree.children(node):
        sub = tree.digon(child)
        if sub is None:
            continue
        offset = (departure_direction(mesh, sub.side_a) - theta) % cone
        if offset + sub.angle_x <= digon.angle_x + MAX_SPAN_EXCESS:
            spanned.append((offset, child))
    return [child for _, child in sorted(spanned)]


def _node_frames(
    mesh: IntrinsicMesh,
    tree: FillingTree,
    node: int,
    z: SurfacePoint,
    settings: GeodesicSettings,
    provenance: List[Dict[str, Any]],
) -> List[GeodesicPath]:
    """
    노드 digon 의 side_a → side_b 프레임을 z 까지 늘려 돌려주기 (깊이 우선)

    경로 호모토피가 있으면 그대로, ρ 위로 상쇄된 루프 호모토피는 경로 프레임으로 바꾸고,
    분할된 노드는 자식들의 프레임을 출발 방향 순으로 잇는다. 나머지는 부채꼴로 채운다.
    """
    tolerances = settings.resolve(mesh)
    digon = tree.digon(node)
    assert digon is not None
    data = tree.graph.nodes[node]
    connector = None
    if not mesh.same_location(digon.z, z):
        connector = shortest_path(mesh, digon.z, z, settings=settings)

    def extend(frames: Sequence[GeodesicPath]) -> List[GeodesicPath]:
        if connector is None:
            return list(frames)
        return [frame.concatenate(connector) for frame in frames]

    status = data["status"]
    homotopy = data.get("homotopy")
    if data.get("path_homotopy") is not None:
        provenance.append({"node": node, "source": "contracted"})
        return extend(data["path_homotopy"].frames)
    if status == NodeStatus.CONTRACTED and homotopy is not None:
        provenance.append({"node": node, "source": "cancelled"})
        frames = loop_to_path_frames(mesh, digon.side_a, digon.side_b, homotopy.frames, tolerances.spacing)
        return extend(frames)

    children = _spanned_children(mesh, tree, node)
    if not children:
        provenance.append({"node": node, "source": "fan", "status": status.value})
        return extend(_fan(mesh, digon, settings))

    provenance.append({"node": node, "source": "tree", "children": children})
    frames = extend([digon.side_a])
    for child in children:
        child_frames = _node_frames(mesh, tree, child, z, settings, provenance)
        frames.extend(_bridge(mesh, frames[-1], child_frames[0], z, settings))
        frames.extend(child_frames)
    last = extend([digon.side_b])[0]
    frames.extend(_bridge(mesh, frames[-1], last, z, settings))
    frames.append(last)
    return frames


def assemble_sweep(
    mesh: IntrinsicMesh,
    tree: FillingTree,
    top: Sequence[int],
    settings: GeodesicSettings,
) -> SweepOut:
    """
    최상위 digon 들의 side_a → side_b 호모토피를 반시계 순으로 이어 sweep-out 조립

    각 digon 은 filling tree 를 깊이 우선으로 내려가며 기록된 호모토피를 잇는다.
    """
    first = tree.digon(top[0])
    assert first is not None
    meridians: List[GeodesicPath] = []
    provenance: List[Dict[str, Any]] = []
    for node in top:
        frames = _node_frames(mesh, tree, node, first.z, settings, provenance)
        if meridians:
            frames = frames[1:]
        meridians.extend(frames)
    if meridians[-1] is not meridians[0]:
        meridians[-1] = meridians[0]
    return SweepOut(
        meridians=meridians, x=first.x, z=first.z,
        metadata={"kind": "filling_tree", "provenance": provenance},
    )


def _split(
    mesh: IntrinsicMesh,
    digon: Digon,
    settings: GeodesicSettings,
) -> Optional[List[Digon]]:
    """
    digon 영역의 절단 궤적 꼭짓점에서 다시 digon 으로 나누기

    Returns:
        하위 digon 목록 (분할점 측지선이 둘 미만이면 None)

    Raises:
        ResolutionStall: 해상도보다 큰 영역에서 절단 궤적이 비어 있음
    """
    tolerances = settings.resolve(mesh)
    x = digon.x
    graph = cut_locus(mesh, x, domain=digon.domain, settings=settings)
    area = float(mesh.face_areas[sorted(digon.domain)].sum()) if digon.domain else 0.0
    if graph.fallback or graph.is_empty:
        if area > math.pi * tolerances.spur_length ** 2:
            raise ResolutionStall(
                f"Cut locus empty inside a domain of area {area:.4g}", partial=None, area=area
            )
        return None
    start = max(graph.fine.nodes, key=lambda n: (graph.fine.nodes[n].get("distance", 0.0), -n))
    slide = slide_to_vertex(graph, graph.point(start), settings=settings)
    geodesics = slide.geodesics or minimizing_geodesics(mesh, x, slide.point, settings=settings)
    if len(geodesics) < 2:
        return None
    return build_digons(mesh, geodesics, angle_tolerance(mesh, settings), faces=digon.domain)


def run_filling_tree(
    mesh: IntrinsicMesh,
    x: SurfacePoint,
    y: Optional[SurfacePoint] = None,
    k: int = 2,
    settings: Optional[GeodesicSettings] = None,
    strict: bool = False,
    d: Optional[float] = None,
) -> FillingOutcome:
    """
    filling tree 캐스케이드 실행

    Args:
        mesh: 구면형 메쉬
        x: 기준점
        y: 도착점 (없으면 x)
        k: 필요한 측지선 수
        settings: 설정
        strict: True 이면 해상도 정체와 상한 위반 시 예외
        d: 지름 (없으면 계산)

    Returns:
        FillingOutcome - loops 에는 ρ 와 다른 가로막는 측지선들 (ρ 는 포함하지 않음).
        sweep-out 이 상한을 넘으면 flag 가 BoundViolated

    Raises:
        ValueError: k < 1
        ResolutionStall: strict 이고 영역 안 절단 궤적이 비었을 때
        BoundViolated: strict 이고 sweep-out L 이 상한을 넘을 때
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    settings = settings or get_settings()
    tolerances = settings.resolve(mesh)
    y = y or x
    if d is None:
        d = diameter(mesh, settings=settings)[0]
    same = mesh.same_location(x, y)
    rho = constant_path(x) if same else shortest_path(mesh, x, y, settings=settings)
    dist_xy = rho.length

    z = farthest_point(mesh, x, settings=settings)
    decomposition = digon_decomposition(mesh, x, z, settings=settings)

    tree = FillingTree()
    root = tree.add(None, parent=None, depth=0)
    tree.set_status(root, NodeStatus.SPLIT, vertex=z)
    queue: Deque[int] = deque()
    top = []
    for digon in decomposition.digons:
        node = tree.add(digon, parent=root, depth=1)
        top.append(node)
        queue.append(node)

    outcome = FillingOutcome(kind="sweep", tree=tree, rho=rho, d=d, dist_xy=dist_xy, k=k)
    outcome.metadata["decomposition"] = decomposition.to_dict()
    if decomposition.flagged:
        outcome.metadata["decomposition_flag"] = decomposition.flag

    # k = 1 이어도 가로막이 하나면 loops 로 끝낸다 (남은 노드로 sweep 을 만들지 않음)
    wanted = max(k - 1, 1)
    while queue:
        node = queue.popleft()
        digon = tree.digon(node)
        assert digon is not None
        depth = tree.graph.nodes[node]["depth"]
        if depth > settings.weave.max_depth:
            tree.set_status(node, NodeStatus.DEPTH_LIMIT)
            outcome.flagged, outcome.flag = True, "DepthLimit"
            logger.warning(f"filling tree depth limit reached at node {node}")
            continue
        on_path = tree.path_obstructions(node)

        contraction = contract_digon(mesh, digon, settings=settings)
        if contraction.contracted:
            tree.set_status(
                node, NodeStatus.CONTRACTED,
                homotopy=contraction.homotopy, path_homotopy=contraction.homotopy,
            )
            continue

        omega = contraction.obstruction
        assert omega is not None
        if digon.fat:
            repeat = _match(mesh, omega, tree.obstruction_loops, on_path, tolerances.dedupe_radius)
            if repeat is not None:
                # ω 에서 fat digon 경계까지 되돌리는 루프 호모토피
                back = list(reversed(contraction.loop_homotopy.frames))  # type: ignore[union-attr]
                splice = Homotopy(frames=back, mode=ShortenMode.BASED_LOOP, budget=digon.boundary.length + 1e-9)
                tree.set_status(node, NodeStatus.SPLICED, loop_id=repeat, homotopy=splice)
                logger.debug(f"fat digon {node} spliced onto obstruction {repeat}")
                continue

        cancel = obstructing_geodesic(mesh, omega, rho, settings=settings)
        if cancel.cancelled:
            tree.set_status(
                node, NodeStatus.CONTRACTED,
                homotopy=contraction.loop_homotopy.concat(cancel.homotopy),  # type: ignore[union-attr]
            )
            continue

        tau = cancel.tau
        assert tau is not None
        known = _match(
            mesh, tau, tree.obstructions, range(len(tree.obstructions)), tolerances.dedupe_radius
        )
        if known is not None and known in on_path:
            tree.set_status(node, NodeStatus.SPLICED, loop_id=known, homotopy=cancel.homotopy)
            continue
        if known is None:
            known = len(tree.obstructions)
            tree.obstructions.append(tau)
            tree.obstruction_loops.append(omega)
            logger.info(f"new obstruction {known}: length {tau.length:.4g}")
        tree.set_status(node, NodeStatus.OBSTRUCTED, loop_id=known, homotopy=cancel.homotopy)
        if len(tree.obstructions) >= wanted:
            break

        try:
            children = _split(mesh, digon, settings)
        except ResolutionStall as e:
            outcome.kind = "stalled"
            outcome.flagged, outcome.flag = True, "ResolutionStall"
            outcome.loops = list(tree.obstructions)
            logger.warning(f"filling tree stalled: {e}")
            if strict:
                raise ResolutionStall(str(e), partial=outcome)
            return outcome
        if not children:
            continue
        tree.graph.nodes[node]["vertex"] = children[0].z
        for child in children:
            queue.append(tree.add(child, parent=node, depth=depth + 1))

    outcome.loops = list(tree.obstructions)
    bounds = tree.sweep_bound(d, dist_xy, k)
    if len(tree.obstructions) >= wanted:
        outcome.kind = "loops"
    else:
        sweep = assemble_sweep(mesh, tree, top, settings)
        try:
            sweep_out_degree(mesh, sweep, settings=settings)
        except DegreeAmbiguous as e:
            outcome.flagged, outcome.flag = True, "DegreeAmbiguous"
            logger.warning(f"assembled sweep-out degree ambiguous: {e}")
        outcome.sweep = sweep
        checks = {
            name: {"bound": value, "value": sweep.L, "passed": sweep.L <= value + tolerances.slack}
            for name, value in bounds.items()
        }
        outcome.metadata["bounds"] = checks
        violated = [name for name, check in checks.items() if not check["passed"]]
        if violated:
            logger.warning(f"sweep-out L={sweep.L:.4g} exceeds bounds {violated}")
            if not outcome.flagged:
                outcome.flagged, outcome.flag = True, "BoundViolated"
            if strict:
                raise BoundViolated(
                    f"Sweep-out L={sweep.L:.4g} exceeds {violated}", partial=outcome, bounds=violated
                )
    outcome.metadata["lambda"] = tree.recompute_lambda()
    logger.info(
        f"Filling tree: {outcome.kind}, {tree.graph.number_of_nodes()} nodes, "
        f"{len(tree.obstructions)} obstructions, lambda={outcome.metadata['lambda']}"
    )
    return outcome
