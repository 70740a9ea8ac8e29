#!/usr/bin/env python3
"""
통합 실행 스크립트
설치 없이 저장소에서 바로 fwbool 실행

사용법:
    uv run scripts/run.py validate --policy policies/sample.fw --fields 4,4,4
    uv run scripts/run.py compile --policy policies/sample.fw --fields 4,4,4 --emit whitelist
    uv run scripts/run.py check --left a.fw --right b.fw --fields 4,4,4 --mode equiv
    uv run scripts/run.py stats --policy policies/sample.fw --fields 4,4,4
"""

import sys
from pathlib import Path

# 프로젝트 루트
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root / "src"))

from core.cli import main


if __name__ == "__main__":
    sys.exit(main())
