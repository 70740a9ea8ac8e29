"""
방화벽 결정 트리 (FDT)

- addrule: 규칙을 기존 트리에 재귀적으로 추가 (기존 트리가 항상 우선)
- group_adjacent: 인접 형제 노드 병합 (하향식이 아닌 상향식 한 번)
- complete: 기본 동작으로 모든 패킷 공간을 덮음
- extract_rules: 화이트리스트/블랙리스트 추출
"""

from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .config import FieldConfig
from .policy import Action, Interval, Policy, Rule, gap_intervals


class TreeArityError(ValueError):
    """규칙 잔여 구간 수와 트리 잔여 깊이 불일치"""


class NotCompleteError(ValueError):
    """완전 트리가 필요한 연산에 불완전 트리가 전달됨"""


@dataclass(frozen=True)
class Terminal:
    """단말 노드 (깊이 d)"""

    action: Action


@dataclass(frozen=True)
class Edge:
    interval: Interval
    child: 'Node'


@dataclass(frozen=True)
class Internal:
    """
    내부 노드

    depth 번째 필드를 검사한다. 간선 구간은 서로소이며 lo 오름차순.
    """

    depth: int
    edges: Tuple[Edge, ...]
    starts: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        edges = tuple(self.edges)
        if not edges:
            raise ValueError(f"간선 없는 내부 노드 (깊이 {self.depth})")
        for prev, cur in zip(edges, edges[1:]):
            if cur.interval.lo <= prev.interval.hi:
                raise ValueError(
                    f"깊이 {self.depth} 간선이 정렬/서로소가 아님: "
                    f"{prev.interval} {cur.interval}")
        object.__setattr__(self, 'edges', edges)
        object.__setattr__(self, 'starts', tuple(e.interval.lo for e in edges))

    def find(self, value: int) -> Optional[Edge]:
        """이진 탐색으로 value 를 포함하는 간선"""
        idx = bisect_right(self.starts, value) - 1
        if idx < 0:
            return None
        edge = self.edges[idx]
        return edge if value <= edge.interval.hi else None


Node = Union[Terminal, Internal]


@dataclass(frozen=True)
class DecisionTree:
    """
    결정 트리

    root 가 None 이면 빈 트리 (어떤 패킷에도 경로가 없음)
    """

    config: FieldConfig
    root: Optional[Node]

    @property
    def is_empty(self) -> bool:
        return self.root is None


@dataclass(frozen=True)
class CompleteDecisionTree(DecisionTree):
    """모든 내부 노드의 간선 합집합이 필드 도메인 전체인 트리"""

    def __post_init__(self):
        if self.root is None or not _is_complete(self.root, self.config, {}):
            raise NotCompleteError("트리가 패킷 공간 전체를 덮지 않습니다")


@dataclass(frozen=True)
class TreeStats:
    leaf_count: int
    node_count: int
    max_out_degree: int
    is_complete: bool


# ==========================================
# addrule / build_tree
# ==========================================

def _chain(intervals: Sequence[Interval], action: Action, depth: int) -> Node:
    """규칙 벡터를 한 줄짜리 트리로"""
    node: Node = Terminal(action)
    for offset in range(len(intervals) - 1, -1, -1):
        node = Internal(depth + offset, (Edge(intervals[offset], node),))
    return node


def _add(intervals: Sequence[Interval], action: Action, node: Optional[Node],
         depth: int, config: FieldConfig) -> Node:
    if node is None:
        return _chain(intervals, action, depth)

    if isinstance(node, Terminal):
        if intervals:
            raise TreeArityError(f"규칙에 구간 {len(intervals)}개가 남았지만 트리는 끝남")
        # 기존 트리가 우선
        return node

    if not intervals:
        raise TreeArityError(f"규칙은 끝났지만 트리는 깊이 {node.depth} 에서 계속됨")
    if node.depth != depth:
        raise TreeArityError(f"트리 깊이 불일치: {node.depth} != {depth}")

    head, rest = intervals[0], intervals[1:]
    edges: List[Edge] = []

    for edge in node.edges:
        overlap = edge.interval.intersect(head)
        if overlap is None:
            edges.append(edge)
            continue
        for piece in edge.interval.subtract(head):
            edges.append(Edge(piece, edge.child))
        edges.append(Edge(overlap, _add(rest, action, edge.child, depth + 1, config)))

    tail: Optional[Node] = None
    existing = [e.interval for e in node.edges]
    for gap in gap_intervals(existing, config.domain_max(depth)):
        overlap = gap.intersect(head)
        if overlap is None:
            continue
        if tail is None:
            tail = _chain(rest, action, depth + 1)
        edges.append(Edge(overlap, tail))

    edges.sort(key=lambda e: e.interval.lo)
    return Internal(depth, tuple(edges))


def addrule(rule: Rule, tree: DecisionTree) -> DecisionTree:
    """
    규칙 하나를 트리에 추가

    기존 트리가 덮는 패킷의 결정은 그대로, 트리가 덮지 않고 규칙이 덮는
    패킷은 규칙의 동작을 받는다.

    Raises:
        TreeArityError: 규칙 구간 수 != 필드 수
    """
    config = tree.config
    if len(rule.predicate) != config.d:
        raise TreeArityError(f"규칙 구간 {len(rule.predicate)}개, 필드 {config.d}개")
    root = _add(rule.predicate, rule.action, tree.root, 0, config)
    return DecisionTree(config, root)


def build_tree(policy: Policy, config: FieldConfig) -> DecisionTree:
    """규칙 순서대로 addrule 을 접어서 트리 생성 (기본 동작은 반영하지 않음)"""
    tree = DecisionTree(config, None)
    for rule in policy.rules:
        tree = addrule(rule, tree)
    return tree


# ==========================================
# 인접 노드 그룹화
# ==========================================

def _group(root: Node) -> Node:
    # 구조 키 -> 정규 노드 (hash-consing), 자식 비교는 id 비교로 O(1)
    canonical: Dict[tuple, Node] = {}
    visited: Dict[int, Node] = {}

    def visit(node: Node) -> Node:
        done = visited.get(id(node))
        if done is not None:
            return done

        if isinstance(node, Terminal):
            key: tuple = ('T', node.action)
            result: Node = node
        else:
            merged: List[Tuple[Interval, Node]] = []
            for edge in node.edges:
                child = visit(edge.child)
                if merged and merged[-1][1] is child and merged[-1][0].is_adjacent(edge.interval):
                    merged[-1] = (Interval(merged[-1][0].lo, edge.interval.hi), child)
                else:
                    merged.append((edge.interval, child))
            key = (node.depth, tuple((iv.lo, iv.hi, id(child)) for iv, child in merged))
            result = Internal(node.depth, tuple(Edge(iv, child) for iv, child in merged))

        result = canonical.setdefault(key, result)
        visited[id(node)] = result
        return result

    return visit(root)


def group_adjacent(tree: DecisionTree) -> DecisionTree:
    """
    형제 노드 중 구간이 맞닿고 (c = b + 1) 서브트리가 동일한 것을 병합

    단말부터 위로 한 번 훑는다. 결과는 의미가 같고 멱등이다.
    """
    if tree.root is None:
        return tree
    root = _group(tree.root)
    return type(tree)(tree.config, root)


# ==========================================
# 완성 (기본 동작 병합)
# ==========================================

def _is_complete(node: Node, config: FieldConfig, memo: Dict[int, bool]) -> bool:
    if isinstance(node, Terminal):
        return True
    cached = memo.get(id(node))
    if cached is not None:
        return cached

    intervals = [e.interval for e in node.edges]
    result = (not gap_intervals(intervals, config.domain_max(node.depth))
              and all(_is_complete(e.child, config, memo) for e in node.edges))
    memo[id(node)] = result
    return result


def complete(tree: DecisionTree, default: Action) -> CompleteDecisionTree:
    """
    경로가 없는 패킷을 default 단말로 보내 트리를 완전하게 만든다

    기존에 덮인 패킷의 결정은 바뀌지 않는다.
    """
    config = tree.config
    full = [Interval(0, config.domain_max(f)) for f in range(config.d)]

    if tree.root is None:
        return CompleteDecisionTree(config, _chain(full, default, 0))

    fillers: Dict[int, Node] = {}
    visited: Dict[int, Node] = {}

    def filler(depth: int) -> Node:
        if depth not in fillers:
            fillers[depth] = _chain(full[depth:], default, depth)
        return fillers[depth]

    def fill(node: Node) -> Node:
        if isinstance(node, Terminal):
            return node
        done = visited.get(id(node))
        if done is not None:
            return done

        edges = [Edge(e.interval, fill(e.child)) for e in node.edges]
        intervals = [e.interval for e in node.edges]
        for gap in gap_intervals(intervals, config.domain_max(node.depth)):
            edges.append(Edge(gap, filler(node.depth + 1)))
        edges.sort(key=lambda e: e.interval.lo)

        result = Internal(node.depth, tuple(edges))
        visited[id(node)] = result
        return result

    return CompleteDecisionTree(config, fill(tree.root))


def compile_policy(policy: Policy, config: FieldConfig) -> CompleteDecisionTree:
    """build -> group -> complete -> group"""
    tree = group_adjacent(build_tree(policy, config))
    return group_adjacent(complete(tree, policy.default_action))


# ==========================================
# 평가 / 추출 / 통계
# ==========================================

def evaluate(tree: DecisionTree, packet: Sequence[int]) -> Optional[Action]:
    """
    노드마다 이진 탐색, O(d log n)

    Returns:
        동작, 경로가 없으면 None (불완전 트리)
    """
    node = tree.root
    if node is None:
        return None
    for value in packet:
        if isinstance(node, Terminal):
            break
        edge = node.find(value)
        if edge is None:
            return None
        node = edge.child
    return node.action if isinstance(node, Terminal) else None


Path = Tuple[Tuple[Interval, ...], Action]


def iter_paths(tree: DecisionTree) -> Iterator[Path]:
    """루트에서 단말까지의 경로 (깊이 우선, 간선 오름차순)"""
    if tree.root is None:
        return

    stack: List[Tuple[Node, Tuple[Interval, ...]]] = [(tree.root, ())]
    while stack:
        node, prefix = stack.pop()
        if isinstance(node, Terminal):
            yield prefix, node.action
            continue
        for edge in reversed(node.edges):
            stack.append((edge.child, prefix + (edge.interval,)))


def extract_rules(tree: CompleteDecisionTree, keep: Action) -> List[Rule]:
    """
    keep 단말로 가는 경로마다 규칙 하나

    경로끼리 서로소이므로 순서는 의미가 없다.
    """
    if not isinstance(tree, CompleteDecisionTree):
        raise NotCompleteError("화이트리스트/블랙리스트 추출은 완전 트리에서만 가능합니다")
    return [Rule(intervals, action) for intervals, action in iter_paths(tree) if action is keep]


def _normal_form_policy(tree: CompleteDecisionTree, keep: Action) -> Policy:
    return Policy(tuple(extract_rules(tree, keep)), keep.opposite)


def to_whitelist(tree: CompleteDecisionTree) -> Policy:
    """accept 규칙 + default deny"""
    return _normal_form_policy(tree, Action.ACCEPT)


def to_blacklist(tree: CompleteDecisionTree) -> Policy:
    """deny 규칙 + default accept"""
    return _normal_form_policy(tree, Action.DENY)


def tree_stats(tree: DecisionTree) -> TreeStats:
    """트리(공유 노드를 펼친) 기준 개수"""
    if tree.root is None:
        return TreeStats(0, 0, 0, False)

    memo: Dict[int, Tuple[int, int, int]] = {}

    def count(node: Node) -> Tuple[int, int, int]:
        if isinstance(node, Terminal):
            return 1, 1, 0
        cached = memo.get(id(node))
        if cached is not None:
            return cached
        leaves, nodes, degree = 0, 1, len(node.edges)
        for edge in node.edges:
            sub_leaves, sub_nodes, sub_degree = count(edge.child)
            leaves += sub_leaves
            nodes += sub_nodes
            degree = max(degree, sub_degree)
        memo[id(node)] = (leaves, nodes, degree)
        return memo[id(node)]

    leaves, nodes, degree = count(tree.root)
    return TreeStats(
        leaf_count=leaves,
        node_count=nodes,
        max_out_degree=degree,
        is_complete=_is_complete(tree.root, tree.config, {}),
    )


def dump_tree(tree: DecisionTree) -> str:
    """경로당 한 줄 'lo,hi | lo,hi | ... -> action', 구간 수치 순 정렬"""
    paths = sorted(iter_paths(tree), key=lambda p: (p[0], p[1].value))
    return ''.join(
        ' | '.join(f"{iv.lo},{iv.hi}" for iv in intervals) + f" -> {action}\n"
        for intervals, action in paths
    )


def leaf_bound(n: int, d: int, completed: bool = False) -> int:
    """완성 전 (2n-1)^d, 완성 후 (2n+1)^d"""
    factor = 2 * n + 1 if completed else max(2 * n - 1, 0)
    return factor ** d
