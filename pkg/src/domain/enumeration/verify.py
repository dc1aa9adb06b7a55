# -*- coding: utf-8 -*-
"""
길이 상한 검증

보고서 하나에 적용할 수 있는 모든 부등식을 평가한다. 모든 상한은 이산화 오차를
고려해 slack = 10·c·h 를 더해 비교한다.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence

from src.domain.enumeration.report import BoundCheck, EnumerationReport, Route

logger = logging.getLogger(__name__)

CONJECTURE = "conjecture_k_diam"
QUADRATIC = "quadratic"
QUADRATIC_BASED = "quadratic_based"
SECOND = "second_2q_diam"
PI1_BASIS = "pi1_k_diam"
MINMAX = "minmax"
MINMAX_BASED = "minmax_based"
FILLING_LAMBDA = "filling_lambda"
FILLING_K = "filling_k"

BOUND_NAMES = (
    CONJECTURE, QUADRATIC, QUADRATIC_BASED, SECOND, PI1_BASIS,
    MINMAX, MINMAX_BASED, FILLING_LAMBDA, FILLING_K,
)


@dataclass
class VerdictTable:
    """verify_bounds 결과"""
    checks: List[BoundCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """정보용이 아닌 모든 검사 통과 여부"""
        return all(c.passed for c in self.checks if not c.informational)

    @property
    def failures(self) -> List[BoundCheck]:
        return [c for c in self.checks if not c.passed]

    def get(self, name: str) -> Optional[BoundCheck]:
        return next((c for c in self.checks if c.name == name), None)

    def rows(self) -> List[List[str]]:
        """표 출력용 행"""
        rows = []
        for c in self.checks:
            verdict = "pass" if c.passed else ("info" if c.informational else "FAIL")
            rows.append([c.name, f"{c.value:.6g}", f"{c.bound:.6g}", f"{c.margin:+.3g}", verdict])
        return rows

    def to_dict(self) -> Dict[str, Any]:
        return {"passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


def _check(
    name: str,
    bound: float,
    lengths: Sequence[float],
    slack: float,
    informational: bool = False,
    message: str = "",
) -> BoundCheck:
    failures = [i for i, value in enumerate(lengths) if value > bound + slack]
    value = max(lengths) if lengths else 0.0
    passed = not failures
    return BoundCheck(
        name=name,
        bound=float(bound),
        value=float(value),
        slack=float(slack),
        passed=passed,
        informational=informational,
        failures=failures,
        message="" if passed else message,
    )


def verify_bounds(
    report: EnumerationReport,
    conjecture_mode: bool = True,
    only: Optional[Iterable[str]] = None,
) -> VerdictTable:
    """
    보고서에 적용 가능한 상한 부등식 평가

    Args:
        report: 열거 보고서
        conjecture_mode: k·d 추측 상한도 정보용으로 평가할지 여부
        only: 평가할 검사 이름 (없으면 전부)

    Returns:
        VerdictTable
    """
    k, d, slack = report.k, report.d, report.slack
    first = report.lengths[:k]
    based = report.same_endpoints
    checks: List[BoundCheck] = []

    if conjecture_mode:
        checks.append(
            _check(CONJECTURE, k * d, first, slack, informational=True,
                   message="conjecture violated at resolution")
        )
    if report.chi == 2:
        if based:
            checks.append(
                _check(QUADRATIC_BASED, (4 * k * k - 6 * k + 2) * d, first, slack,
                       message="based-loop quadratic bound exceeded")
            )
        else:
            checks.append(
                _check(QUADRATIC, (4 * k * k - 2 * k - 1) * d, first, slack,
                       message="quadratic bound exceeded")
            )
    else:
        checks.append(_check(PI1_BASIS, k * d, first, slack, message="loop-basis bound exceeded"))
    checks.append(
        _check(SECOND, 2 * report.q * d, report.lengths[:2], slack, message="second geodesic bound exceeded")
    )

    if report.sweep_L is not None:
        L = report.sweep_L
        swept = [
            g.length for g, origin in zip(report.geodesics, report.provenance) if origin == Route.SWEEP_OUT
        ]
        if based:
            checks.append(_check(MINMAX_BASED, 2 * (k - 1) * L, swept, slack, message="min-max bound exceeded"))
        else:
            checks.append(_check(MINMAX, 2 * (k - 1) * L + d, swept, slack, message="min-max bound exceeded"))
        if report.lambda_ is not None:
            checks.append(
                _check(FILLING_LAMBDA, 3 * d + 2 * d * report.lambda_, [L], slack,
                       message="sweep-out control exceeds 3d + 2d*lambda")
            )
        checks.append(
            _check(FILLING_K, (2 * k - 1) * d + 2 * report.dist_xy, [L], slack,
                   message="sweep-out control exceeds (2k-1)d + 2dist(x,y)")
        )

    if only is not None:
        wanted = set(only)
        unknown = wanted - set(BOUND_NAMES)
        if unknown:
            raise ValueError(f"Unknown bound names: {sorted(unknown)}")
        checks = [c for c in checks if c.name in wanted]

    table = VerdictTable(checks=checks)
    for c in table.failures:
        if c.informational:
            logger.info(f"{c.name}: {c.message} (value {c.value:.6g} > {c.bound:.6g})")
        else:
            logger.warning(f"{c.name}: {c.message} (value {c.value:.6g} > {c.bound:.6g} + {c.slack:.3g})")
    return table
