"""
논리식 표현 (DNF/CNF)
"""

from typing import Optional, Sequence

import numpy as np

from ..base_representation import BaseRepresentation
from ..normal_forms import NormalFormExpr, eval_expr, expr_decision_grid
from ..policy import Action


class ExpressionRepresentation(BaseRepresentation):
    """식이 참이면 accept, 거짓이면 deny"""

    def __init__(self, expr: NormalFormExpr):
        super().__init__(expr.config)
        self.expr = expr

    def decide(self, packet: Sequence[int]) -> Optional[Action]:
        return Action.ACCEPT if eval_expr(self.expr, packet) else Action.DENY

    def decision_grid(self) -> np.ndarray:
        return expr_decision_grid(self.expr)

    def get_representation_name(self) -> str:
        return f"{self.expr.form}".upper() + 'Expression'
