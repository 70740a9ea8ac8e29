"""
정책 표현 추상 클래스
규칙 목록, 결정 트리, DNF/CNF 의 공통 베이스
"""

from abc import ABC, abstractmethod
from typing import Optional, Sequence, Tuple

import numpy as np

from .config import FieldConfig
from .policy import Action, Interval


class BaseRepresentation(ABC):
    """
    정책 표현 추상 클래스

    모든 표현은 이 클래스를 상속받아 구현
    - decide(): 패킷 하나의 결정
    - decision_grid(): 패킷 공간 전체의 accept 여부 (오라클 비교용)
    """

    def __init__(self, config: FieldConfig):
        """
        초기화

        Args:
            config: 필드 구성
        """
        self.config = config

    @abstractmethod
    def decide(self, packet: Sequence[int]) -> Optional[Action]:
        """
        패킷 결정 (표현별 구현 필요)

        Args:
            packet: 필드 값 튜플

        Returns:
            동작, 결정이 없으면 None
        """
        pass

    @abstractmethod
    def decision_grid(self) -> np.ndarray:
        """
        패킷 공간 전체 결정 (표현별 구현 필요)

        Returns:
            config.shape 크기 bool 배열 (True = accept)
        """
        pass

    # ==========================================
    # 공통 헬퍼
    # ==========================================

    @staticmethod
    def box(intervals: Sequence[Interval]) -> Tuple[slice, ...]:
        """구간 목록 -> 그리드 슬라이스 (닫힌 구간이므로 hi + 1)"""
        return tuple(slice(iv.lo, iv.hi + 1) for iv in intervals)

    def empty_grid(self, fill: bool = False) -> np.ndarray:
        return np.full(self.config.shape, fill, dtype=bool)

    def get_representation_name(self) -> str:
        """표현 이름 반환"""
        return self.__class__.__name__
