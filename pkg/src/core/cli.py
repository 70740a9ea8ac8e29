"""
명령줄 인터페이스

사용법:
    # 규칙 파일 검증
    fwbool validate --policy rules.fw --fields 4,4,4

    # 트리 / 화이트리스트 / 블랙리스트 / DNF / CNF 출력
    fwbool compile --policy rules.fw --fields 4,4,4 --emit whitelist
    fwbool compile --policy rules.fw --fields 4,4,4 --emit cnf --out rules.cnf

    # 두 정책의 동치/함의 검사
    fwbool check --left a.fw --right b.fw --fields 4,4,4 --mode equiv

    # 크기 통계와 상한 검사
    fwbool stats --policy rules.fw --fields 4,4,4 --report-dir compile_reports
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from .compiler import EMIT_KINDS, TREE_STAGES, PolicyCompiler
from .config import FieldConfig, parse_fields, print_config
from .oracle import BudgetExceededError, check_equivalence, check_implication
from .policy import Policy, PolicyParseError, parse_policy, validate_policy

# 종료 코드
EXIT_OK = 0
EXIT_ERROR = 1
EXIT_COUNTEREXAMPLE = 2
EXIT_BUDGET = 3


class _ArgumentParser(argparse.ArgumentParser):
    """사용법 오류도 EXIT_ERROR 로 (2 는 반례 전용)"""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_ERROR)


class CliError(Exception):
    """사용자에게 보여줄 오류 (종료 코드 1)"""


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """명령줄 인자"""
    parser = _ArgumentParser(
        prog='fwbool',
        description='🧱 방화벽 규칙 목록 -> 결정 트리 -> 화이트/블랙리스트 -> DNF/CNF',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
예시:
  fwbool validate --policy rules.fw --fields 4,4,4
  fwbool compile --policy rules.fw --fields 4,4,4 --emit tree --stage built
  fwbool compile --policy rules.fw --fields desk --emit cnf --out rules.cnf
  fwbool check --left rules.fw --right whitelist.fw --fields 4,4,4 --mode equiv
  fwbool stats --policy rules.fw --fields 4,4,4 --report-dir compile_reports

종료 코드:
  0 성공 / 성립, 1 입출력·파싱·검증 오류, 2 반례 발견, 3 열거 예산 초과
  FWBOOL_BUDGET 환경변수로 열거 예산 변경 (기본 2^24)
        """
    )
    parser.add_argument('-q', '--quiet', action='store_true', help='진행 로그 생략')

    sub = parser.add_subparsers(dest='command', required=True, parser_class=_ArgumentParser)

    def add_fields(p):
        p.add_argument('--fields', type=str, required=True,
                       help='필드 비트 폭 (예: 4,4,4) 또는 프리셋 이름 (desk, desk-wide, ...)')

    p_validate = sub.add_parser('validate', help='규칙 파일 검증')
    p_validate.add_argument('--policy', type=str, required=True, help='규칙 파일 경로')
    add_fields(p_validate)

    p_compile = sub.add_parser('compile', help='트리/정규형 출력')
    p_compile.add_argument('--policy', type=str, required=True, help='규칙 파일 경로')
    add_fields(p_compile)
    p_compile.add_argument('--emit', type=str, required=True, choices=list(EMIT_KINDS),
                           help='출력 종류')
    p_compile.add_argument('--stage', type=str, default='complete', choices=list(TREE_STAGES),
                           help='tree 출력 단계 (기본: complete)')
    p_compile.add_argument('--out', type=str, help='출력 파일 (기본: 표준 출력)')

    p_check = sub.add_parser('check', help='두 정책 동치/함의 검사')
    p_check.add_argument('--left', type=str, required=True, help='왼쪽 규칙 파일')
    p_check.add_argument('--right', type=str, required=True, help='오른쪽 규칙 파일')
    add_fields(p_check)
    p_check.add_argument('--mode', type=str, default='equiv', choices=['equiv', 'implies'],
                         help='equiv: 동치, implies: left 의 accept ⊆ right 의 accept')
    p_check.add_argument('--budget', type=int, help='열거 예산 (FWBOOL_BUDGET 보다 우선)')

    p_stats = sub.add_parser('stats', help='크기 통계와 상한 검사')
    p_stats.add_argument('--policy', type=str, required=True, help='규칙 파일 경로')
    add_fields(p_stats)
    p_stats.add_argument('--report-dir', type=str,
                         help='JSON/Markdown/CSV 리포트 저장 디렉토리')

    return parser.parse_args(argv)


def _load_config(args: argparse.Namespace) -> FieldConfig:
    """--fields 해석, quiet 가 아니면 설정 배너를 표준 에러로"""
    try:
        config = parse_fields(args.fields)
    except ValueError as e:
        raise CliError(f"--fields: {e}") from None

    if not args.quiet:
        print_config(config)
    return config


def _load_policy(path: str, config: FieldConfig) -> Policy:
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise CliError(f"{path}: {e.strerror or e}") from None
    try:
        return parse_policy(text, config)
    except PolicyParseError as e:
        raise CliError(f"{path}: {e}") from None


def cmd_validate(args: argparse.Namespace) -> int:
    """검증 결과 출력, 위반이 없으면 0"""
    config = _load_config(args)
    policy = _load_policy(args.policy, config)

    # parse_policy 를 통과한 정책은 위반이 없다 (_load_policy 를 바꿔 끼운 경우만 출력)
    report = validate_policy(policy, config)
    if not report.ok:
        for line in report.lines():
            print(line)
        return EXIT_ERROR

    print(f"OK: {len(policy)} rules")
    return EXIT_OK


def cmd_compile(args: argparse.Namespace) -> int:
    """트리 덤프 / 정책 텍스트 / DIMACS 출력"""
    config = _load_config(args)
    policy = _load_policy(args.policy, config)

    report = validate_policy(policy, config)
    if not report.ok:
        raise CliError('; '.join(report.lines()))

    compiler = PolicyCompiler(policy, config, name=Path(args.policy).stem, quiet=args.quiet)
    text = compiler.emit(args.emit, args.stage)

    if args.out:
        try:
            Path(args.out).write_text(text, encoding='utf-8')
        except OSError as e:
            raise CliError(f"{args.out}: {e.strerror or e}") from None
        compiler.log(f"✅ {args.emit}: {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    """EQUIVALENT / IMPLIES / COUNTEREXAMPLE 한 줄"""
    config = _load_config(args)
    left = _load_policy(args.left, config)
    right = _load_policy(args.right, config)

    check = check_equivalence if args.mode == 'equiv' else check_implication
    try:
        verdict = check(left, right, config, args.budget)
    except BudgetExceededError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as e:
        raise CliError(str(e)) from None

    print(verdict.render())
    return EXIT_OK if verdict.holds else EXIT_COUNTEREXAMPLE


def cmd_stats(args: argparse.Namespace) -> int:
    """크기 통계 출력 (+ 리포트 저장)"""
    config = _load_config(args)
    policy = _load_policy(args.policy, config)

    report = validate_policy(policy, config)
    if not report.ok:
        raise CliError('; '.join(report.lines()))

    compiler = PolicyCompiler(policy, config, name=Path(args.policy).stem,
                              report_dir=args.report_dir, quiet=args.quiet)
    results = compiler.analyze_results()

    for line in compiler.report_lines(results):
        print(line)

    compiler.save_results(results)
    return EXIT_OK


COMMANDS = {
    'validate': cmd_validate,
    'compile': cmd_compile,
    'check': cmd_check,
    'stats': cmd_stats,
}


def main(argv: Optional[List[str]] = None) -> int:
    """메인"""
    args = parse_args(argv)

    try:
        return COMMANDS[args.command](args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
