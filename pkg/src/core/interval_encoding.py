"""
필드 값/구간의 비트 변수 인코딩 (세그먼트 트리)

비트 k=0 이 최상위 비트이며 세그먼트 트리의 루트 층에 해당한다.
왼쪽 간선 = 0, 오른쪽 간선 = 1.
"""

from dataclasses import dataclass
from typing import Iterator, List, Sequence, Set, Tuple

from .config import FieldConfig
from .policy import Interval

# 재료화된 세그먼트 트리 오라클의 최대 폭
MARKED_COVER_MAX_WIDTH = 8


@dataclass(frozen=True, order=True)
class BitVariable:
    """필드 field 의 k 번째 비트 (k=0 이 MSB)"""

    field: int
    bit: int

    def number(self, config: FieldConfig) -> int:
        """DIMACS 변수 번호 1 + Σ_{g<f} w_g + k"""
        return 1 + config.offset(self.field) + self.bit

    def check(self, config: FieldConfig):
        if not 0 <= self.field < config.d:
            raise ValueError(f"필드 인덱스 범위 초과: {self.field}")
        if not 0 <= self.bit < config.widths[self.field]:
            raise ValueError(f"비트 인덱스 범위 초과: {self.bit} (폭 {config.widths[self.field]})")


@dataclass(frozen=True, order=True)
class Literal:
    """변수 또는 그 부정"""

    variable: BitVariable
    positive: bool = True

    def negated(self) -> 'Literal':
        return Literal(self.variable, not self.positive)

    def holds(self, packet: Sequence[int], config: FieldConfig) -> bool:
        value = packet[self.variable.field]
        shift = config.widths[self.variable.field] - 1 - self.variable.bit
        return bool((value >> shift) & 1) == self.positive

    def dimacs(self, config: FieldConfig) -> int:
        n = self.variable.number(config)
        return n if self.positive else -n

    def __str__(self) -> str:
        sign = '' if self.positive else '¬'
        return f"{sign}x{self.variable.field}.{self.variable.bit}"


# 곱항 (리터럴 논리곱)
Term = Tuple[Literal, ...]


@dataclass(frozen=True)
class Prefix:
    """
    비트 접두사

    길이 ℓ 인 bits 는 [bits·2^{w-ℓ}, bits·2^{w-ℓ} + 2^{w-ℓ} - 1] 을 나타낸다.
    """

    field: int
    width: int
    bits: Tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) > self.width:
            raise ValueError(f"접두사 길이 {len(self.bits)} > 폭 {self.width}")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"접두사 비트는 0/1 이어야 합니다: {self.bits}")

    @property
    def span(self) -> Interval:
        free = self.width - len(self.bits)
        base = 0
        for b in self.bits:
            base = (base << 1) | b
        lo = base << free
        return Interval(lo, lo + (1 << free) - 1)

    def term(self) -> Term:
        return tuple(
            Literal(BitVariable(self.field, k), bool(b)) for k, b in enumerate(self.bits)
        )

    def __str__(self) -> str:
        return ''.join(str(b) for b in self.bits) or '*'


@dataclass(frozen=True)
class PrefixCover:
    """한 필드 구간을 서로소 접두사들로 덮은 결과 (값 오름차순)"""

    field: int
    width: int
    prefixes: Tuple[Prefix, ...]

    def __len__(self) -> int:
        return len(self.prefixes)

    def __iter__(self) -> Iterator[Prefix]:
        return iter(self.prefixes)

    def values(self) -> Set[int]:
        covered: Set[int] = set()
        for p in self.prefixes:
            covered.update(range(p.span.lo, p.span.hi + 1))
        return covered

    def bitstrings(self) -> List[str]:
        return [str(p) for p in self.prefixes]


def encode_value(value: int, field: int, config: FieldConfig) -> Term:
    """
    값 하나를 w_f 개 리터럴의 논리곱으로

    Raises:
        ValueError: 값이 필드 범위를 벗어남
    """
    width = config.widths[field]
    if not 0 <= value <= config.domain_max(field):
        raise ValueError(f"필드 {field} 값 범위 초과: {value} (폭 {width})")
    bits = tuple((value >> (width - 1 - k)) & 1 for k in range(width))
    return Prefix(field, width, bits).term()


def _decompose(lo: int, hi: int, width: int) -> Iterator[Tuple[int, ...]]:
    # (노드 접두사, 노드 구간) 을 오른쪽 먼저 쌓아 왼쪽부터 꺼냄
    stack: List[Tuple[Tuple[int, ...], int, int]] = [((), 0, (1 << width) - 1)]
    while stack:
        bits, node_lo, node_hi = stack.pop()
        if hi < node_lo or node_hi < lo:
            continue
        if lo <= node_lo and node_hi <= hi:
            yield bits
            continue
        mid = (node_lo + node_hi) // 2
        stack.append((bits + (1,), mid + 1, node_hi))
        stack.append((bits + (0,), node_lo, mid))


def canonical_cover(interval: Interval, field: int, config: FieldConfig) -> PrefixCover:
    """
    세그먼트 트리 정규 분해

    접두사 수 <= 2·w_f, 합집합은 정확히 [lo, hi], 형제 접두사는 함께 나오지 않는다.
    """
    width = config.widths[field]
    if interval.hi > config.domain_max(field):
        raise ValueError(f"필드 {field} 구간 {interval} 가 {width}비트 범위를 벗어남")
    prefixes = tuple(Prefix(field, width, bits)
                     for bits in _decompose(interval.lo, interval.hi, width))
    return PrefixCover(field, width, prefixes)


def marked_cover(interval: Interval, field: int, config: FieldConfig) -> PrefixCover:
    """
    표시 규칙 그대로의 축약 세그먼트 트리 (검증용)

    1. 구간 안의 잎을 모두 표시
    2. 형제 n, n' 이 모두 표시되어 있고 표시된 자손이 없으면 둘의 표시를 지우고 부모를 표시
    3. 더 이상 지울 수 없을 때까지 반복
    """
    width = config.widths[field]
    if width > MARKED_COVER_MAX_WIDTH:
        raise ValueError(f"marked_cover 는 폭 {MARKED_COVER_MAX_WIDTH} 이하만 지원합니다")
    if interval.hi > config.domain_max(field):
        raise ValueError(f"필드 {field} 구간 {interval} 가 {width}비트 범위를 벗어남")

    marked = {
        tuple((v >> (width - 1 - k)) & 1 for k in range(width))
        for v in range(interval.lo, interval.hi + 1)
    }

    changed = True
    while changed:
        changed = False
        for node in sorted(marked, key=len, reverse=True):
            if not node or node not in marked:
                continue
            sibling = node[:-1] + (1 - node[-1],)
            if sibling not in marked:
                continue
            has_marked_descendant = any(
                len(other) > len(node) and (other[:len(node)] in (node, sibling))
                for other in marked
            )
            if has_marked_descendant:
                continue
            marked.discard(node)
            marked.discard(sibling)
            marked.add(node[:-1])
            changed = True

    prefixes = sorted((Prefix(field, width, bits) for bits in marked),
                      key=lambda p: p.span.lo)
    return PrefixCover(field, width, tuple(prefixes))


def interval_to_terms(interval: Interval, field: int, config: FieldConfig) -> Tuple[Term, ...]:
    """접두사마다 곱항 하나, 전체는 그 논리합"""
    return tuple(p.term() for p in canonical_cover(interval, field, config))


def naive_term_count(interval: Interval) -> int:
    """값마다 곱항 하나씩 쓰는 단순 인코딩의 항 수"""
    return interval.size


def terms_hold(terms: Sequence[Term], packet: Sequence[int], config: FieldConfig) -> bool:
    return any(all(lit.holds(packet, config) for lit in term) for term in terms)


def format_term(term: Term, with_field: bool = False) -> str:
    """'¬x0¬x1x2x3' 형식 (필드 번호 생략 시 층 번호만)"""
    if not term:
        return '⊤'
    parts = []
    for lit in term:
        sign = '' if lit.positive else '¬'
        var = lit.variable
        name = f"x{var.field}.{var.bit}" if with_field else f"x{var.bit}"
        parts.append(sign + name)
    return ''.join(parts)


def format_terms(terms: Sequence[Term], with_field: bool = False) -> str:
    if not terms:
        return '⊥'
    return ' ∨ '.join(format_term(t, with_field) for t in terms)
