"""
컴파일 파이프라인 / 리포트 테스트
"""

import pytest

from core.compiler import PolicyCompiler
from core.decision_tree import CompleteDecisionTree


@pytest.fixture
def compiler(sample_policy, desk):
    return PolicyCompiler(sample_policy, desk, name='sample', quiet=True)


class TestStages:
    def test_stages_are_cached(self, compiler):
        assert compiler.tree_for_stage('complete') is compiler.complete_tree
        assert isinstance(compiler.complete_tree, CompleteDecisionTree)

    def test_unknown_stage(self, compiler):
        with pytest.raises(ValueError):
            compiler.tree_for_stage('pruned')

    def test_unknown_emit(self, compiler):
        with pytest.raises(ValueError):
            compiler.emit('bdd')

    def test_blacklist_text(self, compiler):
        text = compiler.emit('blacklist')
        assert text.splitlines()[-1] == 'default accept'
        assert len(text.splitlines()) == 7


class TestCoverFrame:
    def test_one_row_per_path_edge(self, compiler):
        frame = compiler.cover_frame()
        assert len(frame) == 7 * 3
        assert int(frame['cover_terms'].sum()) == 51
        assert int(frame['naive_terms'].sum()) == 192
        assert (frame['cover_terms'] <= frame['cover_ceiling']).all()

    def test_accept_path(self, compiler):
        frame = compiler.cover_frame()
        accept = frame[frame['action'] == 'accept']
        assert list(accept['cover_terms']) == [5, 2, 5]


class TestLogging:
    def test_quiet_suppresses_stderr(self, compiler, capsys):
        compiler.log("hello")
        assert capsys.readouterr().err == ""

    def test_log_to_stderr_and_file(self, sample_policy, desk, tmp_path, capsys):
        compiler = PolicyCompiler(sample_policy, desk, name='sample', report_dir=str(tmp_path))
        compiler.log("hello")
        assert "hello" in capsys.readouterr().err
        log_file = tmp_path / f"sample_{compiler.session_id}.log"
        assert "hello" in log_file.read_text(encoding='utf-8')

    def test_save_without_report_dir(self, compiler):
        assert compiler.save_results(compiler.analyze_results()) == []

    def test_markdown_report(self, sample_policy, desk, tmp_path):
        compiler = PolicyCompiler(sample_policy, desk, name='sample',
                                  report_dir=str(tmp_path), quiet=True)
        saved = compiler.save_results(compiler.analyze_results())
        assert [p.suffix for p in saved] == ['.json', '.md', '.csv']
        markdown = saved[1].read_text(encoding='utf-8')
        assert '| DNF | 50 |' in markdown
        assert '[1,10] [2,5] [1,10] -> accept' in markdown
