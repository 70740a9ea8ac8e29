"""
결정 트리 표현
"""

from typing import Optional, Sequence

import numpy as np

from ..base_representation import BaseRepresentation
from ..decision_tree import CompleteDecisionTree, NotCompleteError, evaluate, iter_paths
from ..policy import Action


class TreeRepresentation(BaseRepresentation):
    """완전 결정 트리 (경로는 서로소 박스)"""

    def __init__(self, tree: CompleteDecisionTree):
        if not isinstance(tree, CompleteDecisionTree):
            raise NotCompleteError("트리 표현은 완전 트리가 필요합니다")
        super().__init__(tree.config)
        self.tree = tree

    def decide(self, packet: Sequence[int]) -> Optional[Action]:
        return evaluate(self.tree, packet)

    def decision_grid(self) -> np.ndarray:
        grid = self.empty_grid()
        for intervals, action in iter_paths(self.tree):
            if action is Action.ACCEPT:
                grid[self.box(intervals)] = True
        return grid
