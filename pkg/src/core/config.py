"""
패킷 필드 설정 관리
"""

import os
import sys
from dataclasses import dataclass
from typing import Callable, Dict, Optional, TextIO, Tuple

# 필드 개수 상한 (헤더 필드 수는 작은 상수로 가정)
MAX_FIELDS = 12

# 오라클 전수 열거 예산 (패킷 공간 크기)
DEFAULT_BUDGET = 2 ** 24
BUDGET_ENV = 'FWBOOL_BUDGET'


@dataclass(frozen=True)
class FieldConfig:
    """
    패킷 헤더 필드 구성

    각 필드 f 는 [0, 2^{w_f} - 1] 범위의 자연수를 가진다.
    """

    widths: Tuple[int, ...]

    def __post_init__(self):
        widths = tuple(int(w) for w in self.widths)
        object.__setattr__(self, 'widths', widths)

        if not 1 <= len(widths) <= MAX_FIELDS:
            raise ValueError(f"필드 개수는 1~{MAX_FIELDS} 사이여야 합니다: {len(widths)}")
        for f, w in enumerate(widths):
            if w < 1:
                raise ValueError(f"필드 {f} 비트 폭은 1 이상이어야 합니다: {w}")

    @property
    def d(self) -> int:
        return len(self.widths)

    def domain_max(self, field: int) -> int:
        return (1 << self.widths[field]) - 1

    def domain_size(self, field: int) -> int:
        return 1 << self.widths[field]

    def offset(self, field: int) -> int:
        """DIMACS 변수 번호 계산용 비트 오프셋 (이전 필드 폭의 합)"""
        return sum(self.widths[:field])

    @property
    def total_bits(self) -> int:
        return sum(self.widths)

    @property
    def max_width(self) -> int:
        return max(self.widths)

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(1 << w for w in self.widths)

    @property
    def space_size(self) -> int:
        size = 1
        for w in self.widths:
            size <<= w
        return size

    def check_packet(self, packet) -> Tuple[int, ...]:
        """
        패킷 검증

        Returns:
            정규화된 패킷 튜플

        Raises:
            ValueError: 길이 불일치 또는 범위 초과
        """
        values = tuple(int(v) for v in packet)
        if len(values) != self.d:
            raise ValueError(f"패킷 필드 수 불일치: {len(values)} != {self.d}")
        for f, v in enumerate(values):
            if not 0 <= v <= self.domain_max(f):
                raise ValueError(f"필드 {f} 값 범위 초과: {v} (최대 {self.domain_max(f)})")
        return values

    def describe(self) -> str:
        return ','.join(str(w) for w in self.widths)


def print_config(config: FieldConfig, stream: Optional[TextIO] = None):
    """설정 출력"""
    out = stream or sys.stderr

    print(f"⚙️ 필드 구성: d={config.d}", file=out)
    print("=" * 40, file=out)
    for f, w in enumerate(config.widths):
        print(f"  필드 {f}: {w}비트 [0, {config.domain_max(f)}]", file=out)
    print(f"  전체 비트 변수: {config.total_bits}개", file=out)
    print(f"  패킷 공간: 2^{config.total_bits} = {config.space_size:,}", file=out)
    print("=" * 40, file=out)


def get_desk_config() -> FieldConfig:
    """
    데스크 규모 기본 설정

    특징:
    - 3개 필드, 각 4비트 (0~15)
    - 예제 정책과 동일한 공간
    - 4,096개 패킷 전수 열거 가능
    """
    return FieldConfig((4, 4, 4))


def get_desk_wide_config() -> FieldConfig:
    """2개 필드, 각 6비트 (무작위 코퍼스 두 번째 구성)"""
    return FieldConfig((6, 6))


def get_desk_tiny_config() -> FieldConfig:
    """2개 필드, 각 2비트 (손으로 검산 가능한 크기)"""
    return FieldConfig((2, 2))


def get_ipv4_5tuple_config() -> FieldConfig:
    """
    IPv4 5-튜플 (src, dst, sport, dport, proto)

    분석/통계 전용, 전수 열거 예산을 크게 초과함
    """
    return FieldConfig((32, 32, 16, 16, 8))


# 프리셋 맵핑
PRESETS: Dict[str, Callable[[], FieldConfig]] = {
    'desk': get_desk_config,
    'desk-wide': get_desk_wide_config,
    'desk-tiny': get_desk_tiny_config,
    'ipv4-5tuple': get_ipv4_5tuple_config,
}


def get_config(preset: str = 'desk') -> FieldConfig:
    """
    프리셋으로 설정 가져오기

    Args:
        preset: 'desk', 'desk-wide', 'desk-tiny', 'ipv4-5tuple'

    Returns:
        FieldConfig
    """
    if preset not in PRESETS:
        print(f"⚠️ 알 수 없는 프리셋: {preset}, desk 사용", file=sys.stderr)
        preset = 'desk'

    return PRESETS[preset]()


def parse_fields(text: str) -> FieldConfig:
    """
    --fields 인자 해석

    프리셋 이름 또는 쉼표 구분 비트 폭 목록 (예: '4,4,4')
    """
    text = text.strip()
    if text in PRESETS:
        return get_config(text)

    parts = [p.strip() for p in text.split(',')]
    try:
        widths = tuple(int(p) for p in parts)
    except ValueError:
        raise ValueError(f"잘못된 필드 목록: {text!r} (예: 4,4,4)") from None

    return FieldConfig(widths)


def get_budget(override: Optional[int] = None) -> int:
    """
    오라클 열거 예산

    우선순위: 인자 > FWBOOL_BUDGET 환경변수 > 기본값 2^24
    """
    if override is not None:
        budget = override
    else:
        raw = os.environ.get(BUDGET_ENV)
        if raw is None or not raw.strip():
            return DEFAULT_BUDGET
        try:
            budget = int(raw)
        except ValueError:
            raise ValueError(f"{BUDGET_ENV} 값이 정수가 아닙니다: {raw!r}") from None

    if budget < 1:
        raise ValueError(f"열거 예산은 1 이상이어야 합니다: {budget}")
    return budget
