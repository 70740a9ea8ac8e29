"""
필드 구성 / 예산 설정 테스트
"""

import io

import pytest

from core.config import (
    BUDGET_ENV,
    DEFAULT_BUDGET,
    MAX_FIELDS,
    PRESETS,
    FieldConfig,
    get_budget,
    get_config,
    parse_fields,
    print_config,
)


class TestFieldConfig:
    def test_derived_values(self):
        config = FieldConfig((4, 2, 3))
        assert config.d == 3
        assert config.total_bits == 9
        assert config.max_width == 4
        assert config.shape == (16, 4, 8)
        assert config.space_size == 512
        assert [config.offset(f) for f in range(3)] == [0, 4, 6]
        assert config.domain_max(1) == 3

    def test_rejects_zero_width(self):
        with pytest.raises(ValueError):
            FieldConfig((4, 0))

    def test_rejects_too_many_fields(self):
        with pytest.raises(ValueError):
            FieldConfig((1,) * (MAX_FIELDS + 1))
        with pytest.raises(ValueError):
            FieldConfig(())

    def test_check_packet(self):
        config = FieldConfig((4, 4))
        assert config.check_packet([3, 15]) == (3, 15)
        with pytest.raises(ValueError):
            config.check_packet((3,))
        with pytest.raises(ValueError):
            config.check_packet((3, 16))


class TestPresets:
    @pytest.mark.parametrize("name, widths", [
        ('desk', (4, 4, 4)),
        ('desk-wide', (6, 6)),
        ('desk-tiny', (2, 2)),
        ('ipv4-5tuple', (32, 32, 16, 16, 8)),
    ])
    def test_presets(self, name, widths):
        assert name in PRESETS
        assert get_config(name).widths == widths
        assert parse_fields(name).widths == widths

    def test_unknown_preset_falls_back(self, capsys):
        assert get_config('nope').widths == (4, 4, 4)
        assert 'nope' in capsys.readouterr().err

    def test_print_config(self):
        out = io.StringIO()
        print_config(FieldConfig((4, 4, 4)), out)
        text = out.getvalue()
        assert '4,096' in text
        assert 'd=3' in text


class TestParseFields:
    def test_width_list(self):
        assert parse_fields(' 4, 4 ,4 ').widths == (4, 4, 4)

    @pytest.mark.parametrize("text", ['', 'four', '4,,4', '4,-1'])
    def test_invalid(self, text):
        with pytest.raises(ValueError):
            parse_fields(text)


class TestBudget:
    def test_default(self, monkeypatch):
        monkeypatch.delenv(BUDGET_ENV, raising=False)
        assert get_budget() == DEFAULT_BUDGET == 2 ** 24

    def test_environment(self, monkeypatch):
        monkeypatch.setenv(BUDGET_ENV, '4096')
        assert get_budget() == 4096

    def test_override(self, monkeypatch):
        monkeypatch.setenv(BUDGET_ENV, '4096')
        assert get_budget(10) == 10

    @pytest.mark.parametrize("raw", ['abc', '0', '-5'])
    def test_invalid_environment(self, monkeypatch, raw):
        monkeypatch.setenv(BUDGET_ENV, raw)
        with pytest.raises(ValueError):
            get_budget()
