"""
정책 컴파일 파이프라인 (규칙 목록 -> 트리 -> 화이트/블랙리스트 -> DNF/CNF)
"""

import json
import sys
from datetime import datetime
from functools import cached_property
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd

from .config import FieldConfig
from .decision_tree import (
    CompleteDecisionTree,
    DecisionTree,
    build_tree,
    complete,
    dump_tree,
    group_adjacent,
    iter_paths,
    leaf_bound,
    to_blacklist,
    to_whitelist,
    tree_stats,
)
from .interval_encoding import canonical_cover, naive_term_count
from .normal_forms import (
    Form,
    NormalFormExpr,
    emit_dimacs,
    tree_bound_check,
    tree_to_cnf,
    tree_to_dnf,
)
from .policy import Policy, format_policy

EMIT_KINDS = ('tree', 'whitelist', 'blacklist', 'dnf', 'cnf')
TREE_STAGES = ('built', 'grouped', 'complete')


class PolicyCompiler:
    """
    정책 컴파일러
    - 단계별 트리 (built / grouped / complete)
    - 정규형 정책과 논리식 출력
    - 크기 상한 통계 및 리포트 저장
    """

    def __init__(self, policy: Policy, config: FieldConfig, name: str = 'policy',
                 report_dir: Optional[str] = None, quiet: bool = False):
        """
        초기화

        Args:
            policy: 파싱된 정책
            config: 필드 구성
            name: 리포트 파일 이름 접두사 (보통 정책 파일 이름)
            report_dir: 리포트 저장 디렉토리 (None 이면 저장하지 않음)
            quiet: 진행 로그 생략
        """
        self.policy = policy
        self.config = config
        self.name = name
        self.quiet = quiet

        # ID
        now = datetime.now()
        self.session_id = now.strftime("%Y%m%d_%H%M%S")

        self.output_dir: Optional[Path] = None
        if report_dir is not None:
            self.output_dir = Path(report_dir)
            self.output_dir.mkdir(parents=True, exist_ok=True)

    def log(self, message: str):
        """로그 (표준 출력은 결과 전용이므로 표준 에러로)"""
        timestamp = datetime.now().strftime("%Y-%m-%d %H:%M:%S")
        log_message = f"[{timestamp}] {message}"
        if not self.quiet:
            print(log_message, file=sys.stderr)

        if self.output_dir is not None:
            log_file = self.output_dir / f"{self.name}_{self.session_id}.log"
            with open(log_file, 'a', encoding='utf-8') as f:
                f.write(log_message + '\n')

    # ==========================================
    # 단계별 결과
    # ==========================================

    @cached_property
    def built_tree(self) -> DecisionTree:
        self.log(f"🌲 addrule: 규칙 {len(self.policy)}개로 트리 생성")
        return build_tree(self.policy, self.config)

    @cached_property
    def grouped_tree(self) -> DecisionTree:
        self.log("🔗 인접 노드 그룹화")
        return group_adjacent(self.built_tree)

    @cached_property
    def complete_tree(self) -> CompleteDecisionTree:
        self.log(f"🧱 기본 동작 {self.policy.default_action} 으로 완성")
        return group_adjacent(complete(self.grouped_tree, self.policy.default_action))

    @cached_property
    def dnf(self) -> NormalFormExpr:
        self.log("🧮 DNF 추출 (accept 경로)")
        return tree_to_dnf(self.complete_tree)

    @cached_property
    def cnf(self) -> NormalFormExpr:
        self.log("🧮 CNF 추출 (deny 경로 + 드모르간)")
        return tree_to_cnf(self.complete_tree)

    def tree_for_stage(self, stage: str) -> DecisionTree:
        if stage not in TREE_STAGES:
            raise ValueError(f"알 수 없는 단계: {stage}")
        return {
            'built': lambda: self.built_tree,
            'grouped': lambda: self.grouped_tree,
            'complete': lambda: self.complete_tree,
        }[stage]()

    def emit(self, kind: str, stage: str = 'complete') -> str:
        """
        출력 텍스트 생성

        Args:
            kind: 'tree', 'whitelist', 'blacklist', 'dnf', 'cnf'
            stage: tree 출력 시 단계

        Returns:
            결정적 텍스트
        """
        if kind == 'tree':
            return dump_tree(self.tree_for_stage(stage))
        if kind == 'whitelist':
            return format_policy(to_whitelist(self.complete_tree))
        if kind == 'blacklist':
            return format_policy(to_blacklist(self.complete_tree))
        if kind == 'dnf':
            return emit_dimacs(self.dnf)
        if kind == 'cnf':
            return emit_dimacs(self.cnf)
        raise ValueError(f"알 수 없는 출력 종류: {kind}")

    # ==========================================
    # 통계
    # ==========================================

    def cover_frame(self) -> pd.DataFrame:
        """완전 트리 간선 구간별 접두사 커버 크기 vs 단순 인코딩 항 수"""
        rows = []
        for path_idx, (intervals, action) in enumerate(iter_paths(self.complete_tree)):
            for f, iv in enumerate(intervals):
                rows.append({
                    'path': path_idx,
                    'action': str(action),
                    'field': f,
                    'lo': iv.lo,
                    'hi': iv.hi,
                    'cover_terms': len(canonical_cover(iv, f, self.config)),
                    'naive_terms': naive_term_count(iv),
                    'cover_ceiling': 2 * self.config.widths[f],
                })
        columns = ['path', 'action', 'field', 'lo', 'hi',
                   'cover_terms', 'naive_terms', 'cover_ceiling']
        return pd.DataFrame(rows, columns=columns)

    def analyze_results(self) -> Dict:
        """크기/상한 통계"""
        n, d = len(self.policy), self.config.d

        built = tree_stats(self.built_tree)
        grouped = tree_stats(self.grouped_tree)
        completed = tree_stats(self.complete_tree)

        covers = self.cover_frame()
        max_cover = int(covers['cover_terms'].max()) if not covers.empty else 0
        cover_ok = bool((covers['cover_terms'] <= covers['cover_ceiling']).all())

        # 절 수만 세므로 넓은 필드에서도 DNF/CNF 를 만들지 않는다
        dnf_bound = tree_bound_check(self.complete_tree, Form.DNF, n)
        cnf_bound = tree_bound_check(self.complete_tree, Form.CNF, n)

        results = {
            'rules': n,
            'fields': d,
            'widths': list(self.config.widths),
            'default_action': str(self.policy.default_action),
            'leaves_built': built.leaf_count,
            'nodes_built': built.node_count,
            'leaves_grouped': grouped.leaf_count,
            'nodes_grouped': grouped.node_count,
            'leaves_complete': completed.leaf_count,
            'nodes_complete': completed.node_count,
            'max_out_degree': completed.max_out_degree,
            'leaf_bound_built': leaf_bound(n, d),
            'leaf_bound_complete': leaf_bound(n, d, completed=True),
            'whitelist_rules': len(to_whitelist(self.complete_tree)),
            'blacklist_rules': len(to_blacklist(self.complete_tree)),
            'max_cover': max_cover,
            'cover_ceiling': 2 * self.config.max_width,
            'cover_terms_total': int(covers['cover_terms'].sum()),
            'naive_terms_total': int(covers['naive_terms'].sum()),
            'dnf': dnf_bound,
            'cnf': cnf_bound,
        }
        results['leaf_bound_built_pass'] = built.leaf_count <= results['leaf_bound_built']
        results['leaf_bound_complete_pass'] = (
            completed.leaf_count <= results['leaf_bound_complete'])
        results['cover_pass'] = cover_ok
        results['passed'] = (results['leaf_bound_built_pass']
                             and results['leaf_bound_complete_pass']
                             and cover_ok and dnf_bound.passed and cnf_bound.passed)

        self.log(f"✅ 분석 완료: {'PASS' if results['passed'] else 'FAIL'}")
        return results

    @staticmethod
    def report_lines(results: Dict) -> List[str]:
        """줄 단위 통계 (스크립트용으로 안정적)"""
        def verdict(flag: bool) -> str:
            return 'PASS' if flag else 'FAIL'

        lines = [
            f"rules: {results['rules']}",
            f"fields: {results['fields']}",
            f"widths: {','.join(str(w) for w in results['widths'])}",
            f"leaves_built: {results['leaves_built']}",
            f"leaves_grouped: {results['leaves_grouped']}",
            f"leaves_complete: {results['leaves_complete']}",
            f"leaf_bound_built: {results['leaf_bound_built']} "
            f"{verdict(results['leaf_bound_built_pass'])}",
            f"leaf_bound_complete: {results['leaf_bound_complete']} "
            f"{verdict(results['leaf_bound_complete_pass'])}",
            f"whitelist_rules: {results['whitelist_rules']}",
            f"blacklist_rules: {results['blacklist_rules']}",
            f"max_cover: {results['max_cover']} (ceiling {results['cover_ceiling']}) "
            f"{verdict(results['cover_pass'])}",
            f"cover_terms_total: {results['cover_terms_total']} "
            f"(naive {results['naive_terms_total']})",
        ]
        lines.extend(results['dnf'].lines())
        lines.extend(results['cnf'].lines())
        lines.append(f"bounds: {verdict(results['passed'])}")
        return lines

    # ==========================================
    # 리포트 저장
    # ==========================================

    def _serialize(self, results: Dict) -> Dict:
        data = {}
        for key, value in results.items():
            if hasattr(value, 'lines'):
                data[key] = {
                    'clause_count': value.clause_count,
                    'max_clause_len': value.max_clause_len,
                    'literal_ceiling': value.literal_ceiling,
                    'per_field_literal_ceiling': value.per_field_literal_ceiling,
                    'base_bound': value.base_bound,
                    'adjusted_bound': value.adjusted_bound,
                    'within_base_bound': value.within_base_bound,
                    'within_adjusted_bound': value.within_adjusted_bound,
                    'literals_ok': value.literals_ok,
                    'note': value.note,
                }
            else:
                data[key] = value
        return data

    def save_results(self, results: Dict) -> List[Path]:
        """JSON + Markdown + CSV 저장"""
        if self.output_dir is None:
            return []

        self.log("💾 결과 저장 중...")
        saved = []

        json_file = self.output_dir / f"{self.name}_stats_{self.session_id}.json"
        with open(json_file, 'w', encoding='utf-8') as f:
            json.dump(self._serialize(results), f, indent=2, ensure_ascii=False)
        self.log(f"✅ JSON: {json_file.name}")
        saved.append(json_file)

        md_file = self.output_dir / f"{self.name}_stats_{self.session_id}.md"
        with open(md_file, 'w', encoding='utf-8') as f:
            f.write(self._generate_markdown(results))
        self.log(f"✅ 리포트: {md_file.name}")
        saved.append(md_file)

        csv_file = self.output_dir / f"{self.name}_covers_{self.session_id}.csv"
        self.cover_frame().to_csv(csv_file, index=False, encoding='utf-8-sig')
        self.log(f"✅ CSV: {csv_file.name}")
        saved.append(csv_file)

        return saved

    def _generate_markdown(self, results: Dict) -> str:
        """마크다운 리포트"""
        md = []
        md.append(f"# 📊 정책 분석 리포트: {self.name}")
        md.append("")
        md.append(f"**생성 시각**: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
        md.append("")

        md.append("## ⚙️ 필드 구성")
        md.append("")
        md.append("| 필드 | 비트 폭 | 범위 |")
        md.append("|------|---------|------|")
        for f, w in enumerate(self.config.widths):
            md.append(f"| {f} | {w} | [0, {self.config.domain_max(f)}] |")
        md.append("")

        md.append("## 🌲 결정 트리")
        md.append("")
        md.append("| 단계 | 단말 | 노드 | 상한 |")
        md.append("|------|------|------|------|")
        md.append(f"| built | {results['leaves_built']} | {results['nodes_built']} "
                  f"| {results['leaf_bound_built']} |")
        md.append(f"| grouped | {results['leaves_grouped']} | {results['nodes_grouped']} | - |")
        md.append(f"| complete | {results['leaves_complete']} | {results['nodes_complete']} "
                  f"| {results['leaf_bound_complete']} |")
        md.append("")

        md.append("## 🧮 논리식 크기")
        md.append("")
        md.append("| 형식 | 절 수 | 최대 절 길이 | 기본 상한 | 보정 상한 | 판정 |")
        md.append("|------|-------|--------------|-----------|-----------|------|")
        for key in ('dnf', 'cnf'):
            b = results[key]
            md.append(f"| {key.upper()} | {b.clause_count} | {b.max_clause_len} "
                      f"| {'n/a' if b.base_bound is None else b.base_bound} | {b.adjusted_bound} "
                      f"| {'✅' if b.passed else '❌'} |")
        md.append("")
        md.append(f"> {results['dnf'].note}")
        md.append("")

        md.append("## 📏 구간 인코딩")
        md.append("")
        md.append(f"- 최대 커버 크기: {results['max_cover']} (상한 {results['cover_ceiling']})")
        md.append(f"- 커버 항 합계: {results['cover_terms_total']}"
                  f" (단순 인코딩 {results['naive_terms_total']})")
        md.append("")

        md.append("## 📋 정책")
        md.append("")
        md.append("```")
        md.append(format_policy(self.policy).rstrip('\n'))
        md.append("```")
        md.append("")

        return '\n'.join(md)
