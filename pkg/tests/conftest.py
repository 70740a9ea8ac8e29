"""
공통 픽스처
"""

import os
from typing import Callable

import numpy as np
import pytest
from hypothesis import settings

from core.config import FieldConfig, get_desk_config
from core.policy import Action, Policy, make_rule

settings.register_profile("fast", max_examples=10, deadline=None)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

SAMPLE_POLICY_TEXT = """\
# 3개 필드, 각 4비트
[1,10] [2,5] [1,10] -> accept
[3,15] [3,4] [1,10] -> deny
default deny
"""


def random_policy(rng: np.random.Generator, config: FieldConfig, max_rules: int = 8) -> Policy:
    """필드마다 무작위 닫힌 구간, 무작위 동작"""
    n = int(rng.integers(0, max_rules + 1))
    rules = []
    for _ in range(n):
        bounds = []
        for w in config.widths:
            a, b = sorted(int(v) for v in rng.integers(0, 1 << w, size=2))
            bounds.append((a, b))
        rules.append(make_rule(bounds, Action.ACCEPT if rng.random() < 0.5 else Action.DENY))
    default = Action.ACCEPT if rng.random() < 0.5 else Action.DENY
    return Policy(tuple(rules), default)


@pytest.fixture
def desk() -> FieldConfig:
    return get_desk_config()


@pytest.fixture
def sample_policy() -> Policy:
    return Policy(
        (
            make_rule([(1, 10), (2, 5), (1, 10)], Action.ACCEPT),
            make_rule([(3, 15), (3, 4), (1, 10)], Action.DENY),
        ),
        Action.DENY,
    )


@pytest.fixture
def sample_text() -> str:
    return SAMPLE_POLICY_TEXT


@pytest.fixture
def policy_factory() -> Callable[[int, FieldConfig], Policy]:
    """시드 고정 무작위 정책"""

    def make(seed: int, config: FieldConfig, max_rules: int = 8) -> Policy:
        return random_policy(np.random.default_rng(seed), config, max_rules)

    return make


@pytest.fixture
def accept_all() -> Policy:
    return Policy((), Action.ACCEPT)


@pytest.fixture
def deny_all() -> Policy:
    return Policy((), Action.DENY)
