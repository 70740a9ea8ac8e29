"""
전수 열거 오라클 테스트
"""

import pytest

from core.config import BUDGET_ENV, FieldConfig
from core.decision_tree import compile_policy, to_blacklist, to_whitelist
from core.interval_encoding import BitVariable, Literal
from core.normal_forms import Form, NormalFormExpr, tree_to_cnf, tree_to_dnf
from core.oracle import (
    BudgetExceededError,
    Verdict,
    check_agreement,
    check_equivalence,
    check_implication,
    create_representation,
    dnf_sat,
    enumerate_decisions,
)
from core.policy import Action, Policy, Rule, make_rule


class TestEnumerateDecisions:
    def test_sample_accept_count(self, sample_policy, desk):
        decisions = enumerate_decisions(sample_policy, desk)
        assert len(decisions) == 4096
        assert decisions.accept_count == 10 * 4 * 10
        assert decisions[(5, 3, 5)] is Action.ACCEPT
        assert decisions[(12, 3, 5)] is Action.DENY

    def test_empty_policy_accept(self, accept_all, desk):
        decisions = enumerate_decisions(accept_all, desk)
        assert decisions.accept_count == 4096
        assert all(action is Action.ACCEPT for _, action in decisions.items())

    def test_budget_exceeded(self, accept_all):
        with pytest.raises(BudgetExceededError) as exc:
            enumerate_decisions(accept_all, FieldConfig((32, 32, 32)))
        assert exc.value.required == 2 ** 96
        assert exc.value.allowed == 2 ** 24

    def test_budget_from_environment(self, accept_all, desk, monkeypatch):
        monkeypatch.setenv(BUDGET_ENV, "100")
        with pytest.raises(BudgetExceededError):
            enumerate_decisions(accept_all, desk)

    def test_explicit_budget_wins(self, accept_all, desk, monkeypatch):
        monkeypatch.setenv(BUDGET_ENV, "100")
        assert enumerate_decisions(accept_all, desk, budget=4096).accept_count == 4096

    def test_invalid_packet(self, sample_policy, desk):
        decisions = enumerate_decisions(sample_policy, desk)
        with pytest.raises(ValueError):
            decisions[(16, 0, 0)]

    def test_to_frame(self):
        config = FieldConfig((2, 2))
        policy = Policy((make_rule([(1, 1), (0, 3)], Action.ACCEPT),), Action.DENY)
        frame = enumerate_decisions(policy, config).to_frame()
        assert list(frame.columns) == ['f0', 'f1', 'action']
        assert len(frame) == 16
        accepted = frame[frame['action'] == 'accept']
        assert sorted(zip(accepted['f0'], accepted['f1'])) == [(1, 0), (1, 1), (1, 2), (1, 3)]


class TestImplication:
    def test_whitelist_implies_original(self, sample_policy, desk):
        whitelist = to_whitelist(compile_policy(sample_policy, desk))
        verdict = check_implication(whitelist, sample_policy, desk)
        assert verdict.holds
        assert verdict.render() == 'IMPLIES'

    def test_accept_all_does_not_imply_deny_all(self, accept_all, deny_all, desk):
        verdict = check_implication(accept_all, deny_all, desk)
        assert not verdict.holds
        assert verdict.counterexample == (0, 0, 0)
        assert verdict.render() == 'COUNTEREXAMPLE 0 0 0'

    def test_reflexive(self, sample_policy, desk):
        assert check_implication(sample_policy, sample_policy, desk).holds

    def test_deny_all_implies_anything(self, deny_all, sample_policy, desk):
        assert check_implication(deny_all, sample_policy, desk).holds

    @pytest.mark.parametrize("seed", range(20))
    def test_transitive_on_chains(self, policy_factory, desk, seed):
        # 앞에 deny 규칙을 붙이면 accept 집합이 줄고, accept 규칙을 붙이면 늘어난다
        middle = policy_factory(seed, desk)
        extra = policy_factory(seed + 500, desk, max_rules=3).rules
        narrower = Policy(tuple(Rule(r.predicate, Action.DENY) for r in extra) + middle.rules,
                          middle.default_action)
        wider = Policy(tuple(Rule(r.predicate, Action.ACCEPT) for r in extra) + middle.rules,
                       middle.default_action)
        assert check_implication(narrower, middle, desk).holds
        assert check_implication(middle, wider, desk).holds
        assert check_implication(narrower, wider, desk).holds

    @pytest.mark.parametrize("seed", range(20))
    def test_transitive_on_random_triples(self, policy_factory, seed):
        tiny = FieldConfig((2, 2))
        a, b, c = (policy_factory(3 * seed + k, tiny, max_rules=3) for k in range(3))
        if check_implication(a, b, tiny).holds and check_implication(b, c, tiny).holds:
            assert check_implication(a, c, tiny).holds


class TestEquivalence:
    def test_whitelist(self, sample_policy, desk):
        whitelist = to_whitelist(compile_policy(sample_policy, desk))
        verdict = check_equivalence(sample_policy, whitelist, desk)
        assert verdict == Verdict(True, 'equiv', None)
        assert verdict.render() == 'EQUIVALENT'

    def test_blacklist(self, sample_policy, desk):
        blacklist = to_blacklist(compile_policy(sample_policy, desk))
        assert check_equivalence(sample_policy, blacklist, desk).holds

    def test_single_packet_difference(self, sample_policy, desk):
        poked = Policy(
            (make_rule([(7, 7), (9, 9), (2, 2)], Action.ACCEPT),) + sample_policy.rules,
            sample_policy.default_action,
        )
        verdict = check_equivalence(sample_policy, poked, desk)
        assert not verdict.holds
        assert verdict.counterexample == (7, 9, 2)

    def test_smallest_counterexample(self, desk):
        left = Policy((make_rule([(3, 4), (0, 15), (5, 6)], Action.ACCEPT),), Action.DENY)
        right = Policy((), Action.DENY)
        assert check_equivalence(left, right, desk).counterexample == (3, 0, 5)


class TestDnfSat:
    def test_contradictory_clause(self):
        x = BitVariable(0, 0)
        expr = NormalFormExpr(Form.DNF, ((Literal(x), Literal(x, False)),), FieldConfig((1,)))
        assert not dnf_sat(expr)

    def test_no_clauses(self):
        assert not dnf_sat(NormalFormExpr(Form.DNF, (), FieldConfig((1,))))

    def test_sample_policy(self, sample_policy, desk):
        assert dnf_sat(tree_to_dnf(compile_policy(sample_policy, desk)))

    def test_all_deny(self, deny_all, desk):
        assert not dnf_sat(tree_to_dnf(compile_policy(deny_all, desk)))

    def test_rejects_cnf(self, sample_policy, desk):
        with pytest.raises(ValueError):
            dnf_sat(tree_to_cnf(compile_policy(sample_policy, desk)))


class TestAgreement:
    def test_sample_all_representations(self, sample_policy, desk):
        report = check_agreement(sample_policy, desk)
        assert report.ok
        assert report.checked == ('tree', 'dnf', 'cnf', 'whitelist', 'blacklist')
        assert report.packets == 4096

    def test_unknown_representation(self, sample_policy, desk):
        with pytest.raises(ValueError):
            create_representation('bdd', sample_policy, desk)

    @pytest.mark.parametrize("kind, name", [
        ('rules', 'RuleListRepresentation'),
        ('tree', 'TreeRepresentation'),
        ('dnf', 'DNFExpression'),
        ('cnf', 'CNFExpression'),
    ])
    def test_representation_names(self, sample_policy, desk, kind, name):
        representation = create_representation(kind, sample_policy, desk)
        assert representation.get_representation_name() == name
        assert representation.decide((5, 3, 5)) is Action.ACCEPT
        assert representation.decide((0, 0, 0)) is Action.DENY
