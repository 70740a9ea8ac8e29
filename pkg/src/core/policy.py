"""
방화벽 규칙/정책 데이터 모델
규칙 파일 파서와 first-match 기준 의미론
"""

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple

from .config import FieldConfig

# 패킷: 필드 순서대로 d 개의 자연수
Packet = Tuple[int, ...]


class Action(Enum):
    """규칙 동작"""

    ACCEPT = 'accept'
    DENY = 'deny'

    @property
    def opposite(self) -> 'Action':
        return Action.DENY if self is Action.ACCEPT else Action.ACCEPT

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, order=True)
class Interval:
    """
    닫힌 정수 구간 [lo, hi]

    빈 구간은 만들지 않는다. 빈 결과가 나올 수 있는 연산은 None 을 반환한다.
    """

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo < 0:
            raise ValueError(f"구간 하한은 음수일 수 없습니다: [{self.lo},{self.hi}]")
        if self.lo > self.hi:
            raise ValueError(f"구간 lo > hi: [{self.lo},{self.hi}]")

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    def contains(self, value: int) -> bool:
        return self.lo <= value <= self.hi

    def intersect(self, other: 'Interval') -> Optional['Interval']:
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            return None
        return Interval(lo, hi)

    def subtract(self, other: 'Interval') -> List['Interval']:
        """self \\ other (0~2개 조각, 오름차순)"""
        if other.hi < self.lo or other.lo > self.hi:
            return [self]
        pieces = []
        if self.lo < other.lo:
            pieces.append(Interval(self.lo, other.lo - 1))
        if other.hi < self.hi:
            pieces.append(Interval(other.hi + 1, self.hi))
        return pieces

    def is_adjacent(self, other: 'Interval') -> bool:
        """other 가 바로 오른쪽에 붙어 있는지 (c = b + 1)"""
        return other.lo == self.hi + 1

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi}]"


def gap_intervals(intervals: Sequence[Interval], domain_max: int) -> List[Interval]:
    """
    정렬된 서로소 구간 사이의 빈 구간 b(I_i, I_{i+1})

    첫 구간 앞 b(0, I_1) 과 마지막 구간 뒤 b(I_k, ∞) 포함,
    도메인 [0, domain_max] 로 잘라낸다.
    """
    gaps = []
    cursor = 0
    for interval in intervals:
        if interval.lo > cursor:
            gaps.append(Interval(cursor, interval.lo - 1))
        cursor = max(cursor, interval.hi + 1)
    if cursor <= domain_max:
        gaps.append(Interval(cursor, domain_max))
    return gaps


@dataclass(frozen=True)
class Rule:
    """
    규칙 (r_1, ..., r_d, A)

    predicate 는 필드 순서대로 하나씩의 구간
    """

    predicate: Tuple[Interval, ...]
    action: Action

    def __post_init__(self):
        object.__setattr__(self, 'predicate', tuple(self.predicate))

    def matches(self, packet: Sequence[int]) -> bool:
        if len(packet) != len(self.predicate):
            return False
        return all(iv.lo <= v <= iv.hi for iv, v in zip(self.predicate, packet))

    def format(self) -> str:
        return ' '.join(str(iv) for iv in self.predicate) + f" -> {self.action}"

    def __str__(self) -> str:
        return self.format()


@dataclass(frozen=True)
class Policy:
    """순서 있는 규칙 목록 + 기본 동작"""

    rules: Tuple[Rule, ...]
    default_action: Action

    def __post_init__(self):
        object.__setattr__(self, 'rules', tuple(self.rules))

    def __len__(self) -> int:
        return len(self.rules)


class PolicyParseError(ValueError):
    """규칙 파일 구문/범위 오류 (줄/열 번호 포함)"""

    def __init__(self, line: int, column: int, reason: str):
        self.line = line
        self.column = column
        self.reason = reason
        super().__init__(f"line {line}, column {column}: {reason}")


# ==========================================
# 규칙 파일 파서
# ==========================================

_INTERVAL_RE = re.compile(r'\[\s*([0-9]+)\s*,\s*([0-9]+)\s*\]')
_ARROW_RE = re.compile(r'->\s+(\S+)\s*$')
_DEFAULT_RE = re.compile(r'default\s+(\S+)\s*$')
_ACTIONS = {a.value: a for a in Action}


def _parse_action(word: str, line_no: int, column: int) -> Action:
    if word not in _ACTIONS:
        raise PolicyParseError(line_no, column, f"알 수 없는 동작 {word!r} (accept|deny)")
    return _ACTIONS[word]


def _parse_rule_line(line: str, line_no: int, config: FieldConfig) -> Rule:
    intervals: List[Interval] = []
    pos = 0
    n = len(line)

    while True:
        start = pos
        while pos < n and line[pos].isspace():
            pos += 1
        if pos >= n:
            raise PolicyParseError(line_no, pos + 1, "'-> accept|deny' 가 없습니다")
        if intervals and pos == start:
            raise PolicyParseError(line_no, pos + 1, "구간 뒤에는 공백이 필요합니다")

        if line[pos] == '[':
            m = _INTERVAL_RE.match(line, pos)
            if not m:
                raise PolicyParseError(line_no, pos + 1, "구간 형식 오류 (예: [1,10])")
            lo, hi = int(m.group(1)), int(m.group(2))
            field_idx = len(intervals)
            if lo > hi:
                raise PolicyParseError(
                    line_no, pos + 1, f"필드 {field_idx}: lo > hi ([{lo},{hi}])")
            if field_idx < config.d and hi > config.domain_max(field_idx):
                raise PolicyParseError(
                    line_no, pos + 1,
                    f"필드 {field_idx}: {hi} 는 {config.widths[field_idx]}비트 범위"
                    f" [0,{config.domain_max(field_idx)}] 를 벗어납니다")
            intervals.append(Interval(lo, hi))
            pos = m.end()
            continue

        m = _ARROW_RE.match(line, pos)
        if not m:
            raise PolicyParseError(line_no, pos + 1, f"예상하지 못한 문자 {line[pos]!r}")
        if len(intervals) != config.d:
            raise PolicyParseError(
                line_no, 1, f"구간 개수 불일치: {len(intervals)} != d={config.d}")
        action = _parse_action(m.group(1), line_no, m.start(1) + 1)
        return Rule(tuple(intervals), action)


def parse_policy(text: str, config: FieldConfig) -> Policy:
    """
    규칙 파일 파싱

    Args:
        text: 규칙 파일 텍스트
        config: 필드 구성

    Returns:
        Policy (파일 순서 그대로)

    Raises:
        PolicyParseError: 구문 오류, 범위 초과, 구간 개수 불일치,
            lo > hi, default 지시어 누락/중복
    """
    rules: List[Rule] = []
    default_action: Optional[Action] = None
    last_line = 0

    for line_no, raw in enumerate(text.splitlines(), start=1):
        last_line = line_no
        line = raw.rstrip()
        stripped = line.lstrip()

        if not stripped or stripped.startswith('#'):
            continue

        if stripped.startswith('default'):
            m = _DEFAULT_RE.match(stripped)
            indent = len(line) - len(stripped)
            if not m:
                raise PolicyParseError(line_no, indent + 1, "default 지시어 형식 오류")
            if default_action is not None:
                raise PolicyParseError(line_no, indent + 1, "default 지시어가 중복되었습니다")
            default_action = _parse_action(m.group(1), line_no, indent + m.start(1) + 1)
            continue

        rules.append(_parse_rule_line(line, line_no, config))

    if default_action is None:
        raise PolicyParseError(max(last_line, 1), 1, "default 지시어가 없습니다")

    return Policy(tuple(rules), default_action)


def format_policy(policy: Policy) -> str:
    """정규화된 규칙 파일 텍스트 (parse_policy 의 역)"""
    lines = [rule.format() for rule in policy.rules]
    lines.append(f"default {policy.default_action}")
    return '\n'.join(lines) + '\n'


# ==========================================
# 기준 의미론
# ==========================================

def first_match(policy: Policy, packet: Sequence[int]) -> Action:
    """가장 먼저 매칭되는 규칙의 동작, 없으면 기본 동작"""
    for rule in policy.rules:
        if rule.matches(packet):
            return rule.action
    return policy.default_action


@dataclass(frozen=True)
class Violation:
    """규칙 불변식 위반 한 건"""

    rule_index: int
    kind: str  # 'arity' | 'range'
    message: str
    field_index: Optional[int] = None

    def __str__(self) -> str:
        return f"rule {self.rule_index}: {self.kind}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def lines(self) -> List[str]:
        return [str(v) for v in self.violations]


def validate_policy(policy: Policy, config: FieldConfig) -> ValidationReport:
    """
    규칙별 불변식 검사

    Returns:
        ValidationReport (위반이 없으면 ok)
    """
    violations: List[Violation] = []

    for idx, rule in enumerate(policy.rules):
        if len(rule.predicate) != config.d:
            violations.append(Violation(
                idx, 'arity', f"구간 {len(rule.predicate)}개, 필드 {config.d}개 필요"))
        for f, iv in enumerate(rule.predicate[:config.d]):
            if iv.hi > config.domain_max(f):
                violations.append(Violation(
                    idx, 'range',
                    f"필드 {f} 구간 {iv} 가 {config.widths[f]}비트 범위를 벗어남"
                    f" ({iv.hi} >= {config.domain_size(f)})",
                    field_index=f))

    return ValidationReport(tuple(violations))


def make_rule(bounds: Iterable[Tuple[int, int]], action: Action) -> Rule:
    """(lo, hi) 쌍 목록으로 규칙 생성"""
    return Rule(tuple(Interval(lo, hi) for lo, hi in bounds), action)
