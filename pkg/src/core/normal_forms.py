"""
결정 트리에서 DNF/CNF 추출, 드모르간 부정, 평가, 크기 상한 검사, DIMACS 입출력
"""

from dataclasses import dataclass
from enum import Enum
from itertools import product
from math import prod
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .config import FieldConfig
from .decision_tree import CompleteDecisionTree, NotCompleteError, iter_paths
from .interval_encoding import BitVariable, Literal, canonical_cover, interval_to_terms
from .policy import Action

Clause = Tuple[Literal, ...]


class Form(Enum):
    CNF = 'cnf'
    DNF = 'dnf'

    def __str__(self) -> str:
        return self.value


def _normalize_clause(clause: Sequence[Literal]) -> Optional[Clause]:
    """중복 리터럴 제거, 양/음 극성이 함께 있으면 None"""
    seen: Dict[BitVariable, bool] = {}
    for lit in clause:
        prev = seen.get(lit.variable)
        if prev is None:
            seen[lit.variable] = lit.positive
        elif prev != lit.positive:
            return None
    return tuple(Literal(var, pos) for var, pos in sorted(seen.items()))


@dataclass(frozen=True)
class NormalFormExpr:
    """
    정규형 논리식

    CNF: 절은 논리합, 전체는 논리곱 (절 0개 = 참, 빈 절 = 거짓)
    DNF: 절은 논리곱, 전체는 논리합 (절 0개 = 거짓, 빈 절 = 참)

    한 절에 같은 변수의 양/음 리터럴이 모두 있으면 생성 시 제거한다
    (CNF 에서는 항진 절, DNF 에서는 모순 절).
    """

    form: Form
    clauses: Tuple[Clause, ...]
    config: FieldConfig

    def __post_init__(self):
        kept = []
        for clause in self.clauses:
            for lit in clause:
                lit.variable.check(self.config)
            normalized = _normalize_clause(clause)
            if normalized is not None:
                kept.append(normalized)
        object.__setattr__(self, 'clauses', tuple(kept))

    @property
    def var_count(self) -> int:
        return self.config.total_bits

    @property
    def clause_count(self) -> int:
        return len(self.clauses)

    @property
    def max_clause_len(self) -> int:
        return max((len(c) for c in self.clauses), default=0)


# ==========================================
# 트리 -> 정규형
# ==========================================

def _paths_to_dnf(tree: CompleteDecisionTree, keep: Action) -> NormalFormExpr:
    if not isinstance(tree, CompleteDecisionTree):
        raise NotCompleteError("정규형 추출은 완전 트리에서만 가능합니다")
    config = tree.config
    clauses: List[Clause] = []

    for intervals, action in iter_paths(tree):
        if action is not keep:
            continue
        per_field = [interval_to_terms(iv, f, config) for f, iv in enumerate(intervals)]
        for combo in product(*per_field):
            clauses.append(tuple(lit for term in combo for lit in term))

    return NormalFormExpr(Form.DNF, tuple(clauses), config)


def tree_to_dnf(tree: CompleteDecisionTree) -> NormalFormExpr:
    """accept 경로마다 간선 접두사 항들의 곱집합을 곱항으로"""
    return _paths_to_dnf(tree, Action.ACCEPT)


def negate_dnf(expr: NormalFormExpr) -> NormalFormExpr:
    """드모르간: 각 곱항을 극성을 뒤집은 합절로 (절 수 보존)"""
    if expr.form is not Form.DNF:
        raise ValueError(f"DNF 가 필요합니다: {expr.form}")
    clauses = tuple(tuple(lit.negated() for lit in clause) for clause in expr.clauses)
    return NormalFormExpr(Form.CNF, clauses, expr.config)


def tree_to_cnf(tree: CompleteDecisionTree) -> NormalFormExpr:
    """deny 경로의 DNF (¬P) 를 부정해서 P 의 CNF"""
    return negate_dnf(_paths_to_dnf(tree, Action.DENY))


# ==========================================
# 평가
# ==========================================

def eval_expr(expr: NormalFormExpr, packet: Sequence[int]) -> bool:
    """식 크기에 선형"""
    config = expr.config
    if expr.form is Form.DNF:
        return any(all(lit.holds(packet, config) for lit in clause) for clause in expr.clauses)
    return all(any(lit.holds(packet, config) for lit in clause) for clause in expr.clauses)


def _bit_tables(config: FieldConfig) -> List[List[np.ndarray]]:
    tables = []
    for w in config.widths:
        values = np.arange(1 << w)
        tables.append([((values >> (w - 1 - k)) & 1).astype(bool) for k in range(w)])
    return tables


def _clause_box(clause: Clause, tables: List[List[np.ndarray]], config: FieldConfig,
                flip: bool) -> np.ndarray:
    """
    리터럴(flip 이면 부정)이 모두 참인 패킷 영역

    필드별 1차원 마스크의 외적이므로 박스 하나를 만든다.
    """
    masks: Dict[int, np.ndarray] = {}
    for lit in clause:
        f, k = lit.variable.field, lit.variable.bit
        want = lit.positive != flip
        bits = tables[f][k] if want else ~tables[f][k]
        masks[f] = bits if f not in masks else masks[f] & bits

    box = np.ones(config.shape, dtype=bool)
    for f, mask in masks.items():
        view = [1] * config.d
        view[f] = -1
        box &= mask.reshape(view)
    return box


def expr_decision_grid(expr: NormalFormExpr) -> np.ndarray:
    """패킷 공간 전체에 대한 식의 참/거짓 (config.shape 배열)"""
    config = expr.config
    tables = _bit_tables(config)

    if expr.form is Form.DNF:
        grid = np.zeros(config.shape, dtype=bool)
        for clause in expr.clauses:
            grid |= _clause_box(clause, tables, config, flip=False)
        return grid

    grid = np.ones(config.shape, dtype=bool)
    for clause in expr.clauses:
        # 합절이 거짓인 영역 = 모든 리터럴이 거짓인 박스
        grid &= ~_clause_box(clause, tables, config, flip=True)
    return grid


# ==========================================
# 크기 상한
# ==========================================

BOUND_NOTE = (
    "per-interval clause ceiling uses 2*w (the looser 4*w constant is not used); "
    "per-clause literal ceiling uses sum(w), not the per-field max(w)"
)


@dataclass(frozen=True)
class BoundReport:
    """
    절 수/절 길이 상한 비교

    규칙이 0개면 완성 전 단말 상한이 정의되지 않으므로 base_bound 는 None (n/a).
    """

    form: Form
    rule_count: int
    clause_count: int
    max_clause_len: int
    literal_ceiling: int
    per_field_literal_ceiling: int
    base_bound: Optional[int]
    adjusted_bound: int
    within_adjusted_bound: bool
    within_base_bound: Optional[bool]
    literals_ok: bool
    note: str = BOUND_NOTE

    @property
    def passed(self) -> bool:
        return self.within_adjusted_bound and self.literals_ok

    def lines(self) -> List[str]:
        verdict = 'PASS' if self.passed else 'FAIL'
        if self.base_bound is None:
            base_line = f"{self.form}_base_bound: n/a"
        else:
            base = 'PASS' if self.within_base_bound else 'FAIL'
            base_line = f"{self.form}_base_bound: {self.base_bound} {base}"
        return [
            f"{self.form}_clauses: {self.clause_count}",
            f"{self.form}_max_clause_len: {self.max_clause_len} (ceiling {self.literal_ceiling})",
            base_line,
            f"{self.form}_adjusted_bound: {self.adjusted_bound} {verdict}",
        ]


def _bound_report(form: Form, clause_count: int, max_clause_len: int, literals_ok: bool,
                  n: int, config: FieldConfig) -> BoundReport:
    d = config.d
    per_interval = (2 * config.max_width) ** d
    base_bound = per_interval * (2 * n - 1) ** d if n > 0 else None
    adjusted_bound = per_interval * (2 * n + 1) ** d

    return BoundReport(
        form=form,
        rule_count=n,
        clause_count=clause_count,
        max_clause_len=max_clause_len,
        literal_ceiling=config.total_bits,
        per_field_literal_ceiling=config.max_width,
        base_bound=base_bound,
        adjusted_bound=adjusted_bound,
        within_adjusted_bound=clause_count <= adjusted_bound,
        within_base_bound=None if base_bound is None else clause_count <= base_bound,
        literals_ok=literals_ok and max_clause_len <= config.total_bits,
    )


def bound_check(expr: NormalFormExpr, n: int, config: FieldConfig) -> BoundReport:
    """
    절 수 <= (2·max w)^d · (2n+1)^d, 절 길이 <= Σw

    완성 전 단말 상한을 쓴 (2·max w)^d · (2n-1)^d 도 비교용으로 함께 기록한다.
    """
    literals_ok = all(
        len({lit.variable for lit in clause}) == len(clause) for clause in expr.clauses
    )
    return _bound_report(expr.form, expr.clause_count, expr.max_clause_len,
                         literals_ok, n, config)


def clause_profile(tree: CompleteDecisionTree, form: Form) -> Tuple[int, int]:
    """
    절을 만들지 않고 (절 수, 최대 절 길이) 계산

    경로 하나의 절 수는 필드별 커버 크기의 곱, 최대 절 길이는 필드별 최장 접두사 길이의 합.
    tree_to_dnf / tree_to_cnf 결과의 clause_count, max_clause_len 과 같다.
    """
    if not isinstance(tree, CompleteDecisionTree):
        raise NotCompleteError("정규형 추출은 완전 트리에서만 가능합니다")
    keep = Action.ACCEPT if form is Form.DNF else Action.DENY
    config = tree.config
    count = 0
    longest = 0

    for intervals, action in iter_paths(tree):
        if action is not keep:
            continue
        covers = [canonical_cover(iv, f, config) for f, iv in enumerate(intervals)]
        count += prod(len(cover) for cover in covers)
        longest = max(longest, sum(max(len(p.bits) for p in cover) for cover in covers))

    return count, longest


def tree_bound_check(tree: CompleteDecisionTree, form: Form, n: int) -> BoundReport:
    """bound_check 와 같은 판정, 절 목록 없이 (넓은 필드에서도 메모리 일정)"""
    count, longest = clause_profile(tree, form)
    return _bound_report(form, count, longest, True, n, tree.config)


# ==========================================
# DIMACS
# ==========================================

class DimacsFormatError(ValueError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


def emit_dimacs(expr: NormalFormExpr, comments: bool = True) -> str:
    """
    DIMACS CNF (DNF 는 'p dnf' 헤더의 비표준 확장)

    변수 번호: BitVariable(f, k) -> 1 + Σ_{g<f} w_g + k
    """
    config = expr.config
    lines = []
    if comments:
        for f, w in enumerate(config.widths):
            lines.append(f"c field {f} width {w} offset {config.offset(f)}")
    lines.append(f"p {expr.form} {expr.var_count} {expr.clause_count}")
    for clause in expr.clauses:
        lits = [str(lit.dimacs(config)) for lit in clause]
        lines.append(' '.join(lits + ['0']))
    return '\n'.join(lines) + '\n'


@dataclass(frozen=True)
class DimacsDocument:
    form: Form
    num_vars: int
    clauses: Tuple[Tuple[int, ...], ...]
    widths: Optional[Tuple[int, ...]] = None

    def to_expr(self, config: Optional[FieldConfig] = None) -> NormalFormExpr:
        """필드 주석 또는 주어진 config 로 NormalFormExpr 복원"""
        if config is None:
            if self.widths is None:
                raise ValueError("필드 주석이 없으므로 config 가 필요합니다")
            config = FieldConfig(self.widths)
        if config.total_bits != self.num_vars:
            raise ValueError(f"변수 수 불일치: {self.num_vars} != {config.total_bits}")

        # 변수 번호 -> BitVariable
        variables: Dict[int, BitVariable] = {}
        for f, w in enumerate(config.widths):
            for k in range(w):
                var = BitVariable(f, k)
                variables[var.number(config)] = var

        clauses = tuple(
            tuple(Literal(variables[abs(n)], n > 0) for n in clause)
            for clause in self.clauses
        )
        return NormalFormExpr(self.form, clauses, config)


def parse_dimacs(text: str) -> DimacsDocument:
    """
    DIMACS 텍스트 파싱 ('c field f width w offset o' 주석 인식)

    Raises:
        DimacsFormatError: 헤더/리터럴/절 수 오류
    """
    form: Optional[Form] = None
    num_vars = 0
    expected = 0
    clauses: List[Tuple[int, ...]] = []
    current: List[int] = []
    field_widths: Dict[int, int] = {}
    line_no = 0

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue

        if line.startswith('c'):
            parts = line.split()
            if len(parts) == 7 and parts[1] == 'field' and parts[3] == 'width':
                try:
                    field_widths[int(parts[2])] = int(parts[4])
                except ValueError:
                    raise DimacsFormatError(line_no, f"잘못된 필드 주석: {line}") from None
            continue

        if line.startswith('p'):
            if form is not None:
                raise DimacsFormatError(line_no, "헤더가 중복되었습니다")
            parts = line.split()
            if len(parts) != 4 or parts[1] not in ('cnf', 'dnf'):
                raise DimacsFormatError(line_no, f"잘못된 헤더: {line}")
            try:
                num_vars, expected = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsFormatError(line_no, f"헤더 숫자 오류: {line}") from None
            form = Form(parts[1])
            continue

        if form is None:
            raise DimacsFormatError(line_no, "헤더 전에 절이 나왔습니다")
        try:
            literals = [int(tok) for tok in line.split()]
        except ValueError:
            raise DimacsFormatError(line_no, f"정수가 아닌 토큰: {line}") from None

        for lit in literals:
            if lit == 0:
                clauses.append(tuple(current))
                current = []
                continue
            if abs(lit) > num_vars:
                raise DimacsFormatError(line_no, f"변수 번호 범위 초과: {lit}")
            current.append(lit)

    if form is None:
        raise DimacsFormatError(line_no, "헤더가 없습니다")
    if current:
        raise DimacsFormatError(line_no, "마지막 절이 0 으로 끝나지 않았습니다")
    if len(clauses) != expected:
        raise DimacsFormatError(line_no, f"절 수 불일치: {len(clauses)} != {expected}")

    widths = None
    if field_widths and sorted(field_widths) == list(range(len(field_widths))):
        widths = tuple(field_widths[f] for f in range(len(field_widths)))

    return DimacsDocument(form, num_vars, tuple(clauses), widths)
