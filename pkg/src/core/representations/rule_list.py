"""
규칙 목록 표현 (first-match)
"""

from typing import Optional, Sequence

import numpy as np

from ..base_representation import BaseRepresentation
from ..config import FieldConfig
from ..policy import Action, Policy, first_match


class RuleListRepresentation(BaseRepresentation):
    """
    순서 있는 규칙 목록

    원본 정책, 추출된 화이트리스트/블랙리스트 모두 이 표현을 쓴다.
    """

    def __init__(self, policy: Policy, config: FieldConfig):
        super().__init__(config)
        self.policy = policy

    def decide(self, packet: Sequence[int]) -> Optional[Action]:
        return first_match(self.policy, packet)

    def decision_grid(self) -> np.ndarray:
        grid = self.empty_grid(self.policy.default_action is Action.ACCEPT)

        # 뒤에서부터 덮어써서 앞 규칙이 이기게 함
        for rule in reversed(self.policy.rules):
            grid[self.box(rule.predicate)] = rule.action is Action.ACCEPT

        return grid
