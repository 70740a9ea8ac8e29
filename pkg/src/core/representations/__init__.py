"""
정책 표현 모듈
"""

from .rule_list import RuleListRepresentation
from .tree import TreeRepresentation
from .expression import ExpressionRepresentation

__all__ = [
    'RuleListRepresentation',
    'TreeRepresentation',
    'ExpressionRepresentation',
]
