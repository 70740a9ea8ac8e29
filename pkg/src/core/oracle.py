"""
패킷 공간 전수 열거 오라클
동치/함의 검사, 표현 간 일치 검사, DNF 선형 시간 SAT
"""

from dataclasses import dataclass, field
from typing import Dict, Iterator, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .base_representation import BaseRepresentation
from .config import FieldConfig, get_budget
from .decision_tree import CompleteDecisionTree, compile_policy, to_blacklist, to_whitelist
from .normal_forms import Form, NormalFormExpr, tree_to_cnf, tree_to_dnf
from .policy import Action, Packet, Policy
from .representations import (
    ExpressionRepresentation,
    RuleListRepresentation,
    TreeRepresentation,
)

REPRESENTATION_KINDS = ('rules', 'tree', 'dnf', 'cnf', 'whitelist', 'blacklist')


class BudgetExceededError(RuntimeError):
    """패킷 공간이 열거 예산보다 큼"""

    def __init__(self, required: int, allowed: int):
        self.required = required
        self.allowed = allowed
        super().__init__(f"패킷 공간 {required:,} 이 열거 예산 {allowed:,} 을 초과합니다")


def _guard(config: FieldConfig, budget: Optional[int]) -> None:
    allowed = get_budget(budget)
    if config.space_size > allowed:
        raise BudgetExceededError(config.space_size, allowed)


def create_representation(kind: str, policy: Policy, config: FieldConfig,
                          tree: Optional[CompleteDecisionTree] = None) -> BaseRepresentation:
    """
    표현 팩토리: kind 에 따라 정책의 표현 인스턴스 생성

    Args:
        kind: 'rules', 'tree', 'dnf', 'cnf', 'whitelist', 'blacklist'
        policy: 원본 정책
        config: 필드 구성
        tree: 이미 컴파일된 완전 트리 (없으면 새로 컴파일)

    Returns:
        표현 인스턴스

    Raises:
        ValueError: 알 수 없는 표현 종류
    """
    if kind == 'rules':
        return RuleListRepresentation(policy, config)
    if kind not in REPRESENTATION_KINDS:
        raise ValueError(f"알 수 없는 표현 종류: {kind}")

    if tree is None:
        tree = compile_policy(policy, config)
    representation_map = {
        'tree': lambda: TreeRepresentation(tree),
        'dnf': lambda: ExpressionRepresentation(tree_to_dnf(tree)),
        'cnf': lambda: ExpressionRepresentation(tree_to_cnf(tree)),
        'whitelist': lambda: RuleListRepresentation(to_whitelist(tree), config),
        'blacklist': lambda: RuleListRepresentation(to_blacklist(tree), config),
    }
    return representation_map[kind]()


def _first_true(mask: np.ndarray) -> Optional[Packet]:
    """C 순서 첫 원소 = 사전순 최소 패킷"""
    flat = np.flatnonzero(mask)
    if flat.size == 0:
        return None
    return tuple(int(i) for i in np.unravel_index(int(flat[0]), mask.shape))


# ==========================================
# 결정 맵
# ==========================================

@dataclass(frozen=True, eq=False)
class DecisionMap:
    """패킷 -> 동작 (전체 공간)"""

    config: FieldConfig
    accepted: np.ndarray = field(repr=False)

    def __getitem__(self, packet: Sequence[int]) -> Action:
        values = self.config.check_packet(packet)
        return Action.ACCEPT if self.accepted[values] else Action.DENY

    def __len__(self) -> int:
        return int(self.accepted.size)

    @property
    def accept_count(self) -> int:
        return int(np.count_nonzero(self.accepted))

    def items(self) -> Iterator[Tuple[Packet, Action]]:
        for idx in np.ndindex(*self.accepted.shape):
            yield idx, Action.ACCEPT if self.accepted[idx] else Action.DENY

    def to_frame(self) -> pd.DataFrame:
        """필드별 열 f0..f{d-1} 과 action 열"""
        grids = np.indices(self.accepted.shape).reshape(self.config.d, -1)
        frame = pd.DataFrame({f"f{f}": grids[f] for f in range(self.config.d)})
        frame['action'] = np.where(self.accepted.reshape(-1), 'accept', 'deny')
        return frame


def enumerate_decisions(policy: Policy, config: FieldConfig,
                        budget: Optional[int] = None) -> DecisionMap:
    """
    모든 패킷에 대한 first-match 결정

    Raises:
        BudgetExceededError: Π 2^{w_f} > 예산
    """
    _guard(config, budget)
    grid = RuleListRepresentation(policy, config).decision_grid()
    return DecisionMap(config, grid)


# ==========================================
# 함의 / 동치
# ==========================================

@dataclass(frozen=True)
class Verdict:
    holds: bool
    mode: str  # 'implies' | 'equiv'
    counterexample: Optional[Packet] = None

    def render(self) -> str:
        if not self.holds:
            return 'COUNTEREXAMPLE ' + ' '.join(str(v) for v in self.counterexample or ())
        return 'EQUIVALENT' if self.mode == 'equiv' else 'IMPLIES'


def check_implication(f1: Policy, f2: Policy, config: FieldConfig,
                      budget: Optional[int] = None) -> Verdict:
    """f1 이 accept 하는 모든 패킷을 f2 도 accept 하는가"""
    a1 = enumerate_decisions(f1, config, budget).accepted
    a2 = enumerate_decisions(f2, config, budget).accepted
    witness = _first_true(a1 & ~a2)
    return Verdict(witness is None, 'implies', witness)


def check_equivalence(f1: Policy, f2: Policy, config: FieldConfig,
                      budget: Optional[int] = None) -> Verdict:
    """양방향 함의, 반례는 대칭차의 사전순 최소 패킷"""
    a1 = enumerate_decisions(f1, config, budget).accepted
    a2 = enumerate_decisions(f2, config, budget).accepted
    witness = _first_true(a1 != a2)
    return Verdict(witness is None, 'equiv', witness)


def dnf_sat(expr: NormalFormExpr) -> bool:
    """
    DNF 만족 가능성 (리터럴 한 번 훑기)

    모순 없는 곱항이 하나라도 있으면 참
    """
    if expr.form is not Form.DNF:
        raise ValueError(f"DNF 가 필요합니다: {expr.form}")

    for clause in expr.clauses:
        polarity: Dict[object, bool] = {}
        consistent = True
        for lit in clause:
            seen = polarity.setdefault(lit.variable, lit.positive)
            if seen != lit.positive:
                consistent = False
                break
        if consistent:
            return True
    return False


# ==========================================
# 표현 간 일치
# ==========================================

@dataclass(frozen=True)
class AgreementReport:
    checked: Tuple[str, ...]
    mismatches: Dict[str, Packet]
    packets: int

    @property
    def ok(self) -> bool:
        return not self.mismatches


def check_agreement(policy: Policy, config: FieldConfig,
                    kinds: Sequence[str] = REPRESENTATION_KINDS[1:],
                    budget: Optional[int] = None) -> AgreementReport:
    """
    각 표현의 결정을 오라클 결정 맵과 비교

    Returns:
        AgreementReport (불일치 표현별 사전순 최소 반례)
    """
    truth = enumerate_decisions(policy, config, budget).accepted
    mismatches: Dict[str, Packet] = {}
    tree = compile_policy(policy, config)

    for kind in kinds:
        grid = create_representation(kind, policy, config, tree).decision_grid()
        witness = _first_true(grid != truth)
        if witness is not None:
            mismatches[kind] = witness

    return AgreementReport(tuple(kinds), mismatches, int(truth.size))
