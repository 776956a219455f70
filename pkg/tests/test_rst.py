import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from hydrogran import rst
from hydrogran.errors import CapacityError, NumericError, SizeError, ValidationError
from hydrogran.rst import UNRECOGNIZED, DecisionTable, RoughRule, StrengthState

# rows (a=0,d=0),(a=0,d=0),(a=1,d=0),(a=1,d=1)
FOUR = DecisionTable([[0], [0], [1], [1]], [0, 0, 0, 1])


@st.composite
def tables(draw, max_objects=8, n_attrs=4, max_values=3):
    n = draw(st.integers(1, max_objects))
    v = draw(st.integers(1, max_values))
    cond = draw(st.lists(st.lists(st.integers(0, v - 1), min_size=n_attrs, max_size=n_attrs),
                         min_size=n, max_size=n))
    dec = draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))
    return DecisionTable(cond, dec)


class TestIndiscernibility:
    def test_empty_attrs(self):
        t = DecisionTable([[0], [1], [2], [3]], [0, 0, 1, 1])
        assert rst.indiscernibility_classes(t, []) == [frozenset({0, 1, 2, 3})]

    def test_grouping(self):
        assert rst.indiscernibility_classes(FOUR, [0]) == [frozenset({0, 1}), frozenset({2, 3})]

    def test_singletons(self):
        t = DecisionTable([[0, 1], [1, 0], [1, 1]], [0, 0, 0])
        assert all(len(b) == 1 for b in rst.indiscernibility_classes(t, [0, 1]))

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            rst.indiscernibility_classes(FOUR, [1])

    @settings(max_examples=100, deadline=None)
    @given(tables(), st.sets(st.integers(0, 3)))
    def test_partition(self, t, attrs):
        blocks = rst.indiscernibility_classes(t, attrs)
        union = set().union(*blocks)
        assert union == set(range(t.n_objects))
        assert sum(len(b) for b in blocks) == t.n_objects


class TestApproximations:
    def test_lower(self):
        assert rst.lower_approx(FOUR, [0], 0) == {0, 1}

    def test_upper_and_boundary(self):
        up = rst.upper_approx(FOUR, [0], 0)
        assert up == {0, 1, 2, 3}
        assert up - rst.lower_approx(FOUR, [0], 0) == {2, 3}

    def test_consistent_table(self):
        t = DecisionTable([[0, 0], [0, 1], [1, 0], [0, 0]], [1, 0, 2, 1])
        for d in (0, 1, 2):
            members = set(np.flatnonzero(t.decisions == d).tolist())
            assert rst.lower_approx(t, [0, 1], d) == members
            assert rst.upper_approx(t, [0, 1], d) == members

    def test_absent_class(self):
        assert rst.lower_approx(FOUR, [0], 7) == frozenset()
        assert rst.upper_approx(FOUR, [0], 7) == frozenset()

    @settings(max_examples=200, deadline=None)
    @given(tables(), st.sets(st.integers(0, 3)), st.integers(0, 2))
    def test_sandwich_and_oracle(self, t, attrs, d):
        rows, decs = t.conditions.tolist(), t.decisions.tolist()
        lo = rst.lower_approx(t, attrs, d)
        up = rst.upper_approx(t, attrs, d)
        members = {i for i, x in enumerate(decs) if x == d}
        assert lo <= members <= up
        assert lo == oracles.lower(rows, decs, attrs, d)
        assert up == oracles.upper(rows, decs, attrs, d)

    @settings(max_examples=100, deadline=None)
    @given(tables(), st.sets(st.integers(0, 3)), st.integers(0, 3))
    def test_positive_region_monotone(self, t, attrs, extra):
        assert rst.positive_region(t, attrs) <= rst.positive_region(t, attrs | {extra})


class TestDiscernibility:
    def test_identical_rows(self):
        t = DecisionTable([[1, 2], [1, 2]], [0, 0])
        assert rst.discernibility_matrix(t)[0][1] == frozenset()

    def test_one_attribute(self):
        t = DecisionTable([[0, 1], [1, 1]], [0, 1])
        m = rst.discernibility_matrix(t)
        assert m[0][1] == frozenset({0}) == m[1][0]

    def test_same_decision_suppressed(self):
        t = DecisionTable([[0, 0, 0], [1, 1, 1]], [2, 2])
        assert rst.discernibility_matrix(t)[0][1] == frozenset()

    def test_needs_two_objects(self):
        with pytest.raises(SizeError):
            rst.discernibility_matrix(DecisionTable([[0]], [0]))


class TestReducts:
    def test_duplicate_attribute(self):
        rng = np.random.default_rng(0)
        a0 = rng.integers(0, 3, 12)
        a1 = rng.integers(0, 3, 12)
        t = DecisionTable(np.column_stack([a0, a1, a0]), (a0 + a1) % 2)
        reds = rst.find_reducts(t)
        assert reds
        assert not any({0, 2} <= r for r in reds)

    def test_single_attribute(self):
        t = DecisionTable([[0], [1], [2]], [0, 1, 1])
        assert rst.find_reducts(t) == [frozenset({0})]

    def test_fully_inconsistent(self):
        t = DecisionTable([[1, 1], [1, 1], [1, 1]], [0, 1, 2])
        assert rst.find_reducts(t) == [frozenset()]

    def test_capacity(self):
        with pytest.raises(CapacityError):
            rst.find_reducts(DecisionTable(np.zeros((2, 21), dtype=int), [0, 1]))
        with pytest.raises(CapacityError):
            rst.find_reducts(DecisionTable(np.zeros((2, 5), dtype=int), [0, 1]), max_attrs=4)

    @settings(max_examples=60, deadline=None)
    @given(tables(max_objects=8, n_attrs=5, max_values=2))
    def test_matches_exhaustive_oracle(self, t):
        rows, decs = t.conditions.tolist(), t.decisions.tolist()
        assert set(rst.find_reducts(t)) == oracles.reducts(rows, decs, t.n_attrs)


class TestRules:
    def test_four_row_example(self):
        rules = rst.extract_exact_rules(FOUR, [0])
        assert rules == [RoughRule(((0, 0),), 0, 2, 0.5)]

    def test_consistent_profiles(self):
        t = DecisionTable([[0, 0], [0, 1], [1, 0], [0, 0], [1, 1]], [1, 0, 2, 1, 0])
        assert len(rst.extract_exact_rules(t, [0, 1])) == 4

    def test_empty_attrs_rejected(self):
        with pytest.raises(ValidationError):
            rst.extract_exact_rules(FOUR, [])

    @settings(max_examples=150, deadline=None)
    @given(tables(), st.sets(st.integers(0, 3), min_size=1))
    def test_oracle_and_exactness(self, t, attrs):
        rows, decs = t.conditions.tolist(), t.decisions.tolist()
        rules = rst.extract_exact_rules(t, attrs)
        got = {(r.conditions, r.decision, r.support, r.strength) for r in rules}
        assert got == oracles.exact_rules(rows, decs, attrs)
        for r in rules:
            covered = [i for i in range(t.n_objects) if r.matches(rows[i])]
            assert len(covered) == r.support
            assert all(decs[i] == r.decision for i in covered)
            assert 0 < r.strength <= 1

    def test_rule_format(self):
        r = RoughRule(((0, 1), (2, 3)), 2, 5, 5 / 33)
        assert str(r) == "IF a1=1 AND a3=3 THEN d=2  [support=5, strength=0.1515]"


class TestClassify:
    RULES = [
        RoughRule(((0, 1),), 0, 4, 0.4),
        RoughRule(((1, 2),), 3, 6, 0.6),
        RoughRule(((0, 1), (1, 2)), 1, 6, 0.6),
    ]

    def test_unique_match(self):
        assert rst.classify(self.RULES[:1], 0.3, [1, 0]) == 0

    def test_no_match(self):
        assert rst.classify(self.RULES, 0.0, [0, 0]) == UNRECOGNIZED
        assert rst.ascribe([UNRECOGNIZED, 2]).tolist() == [4, 2]

    def test_strongest_wins(self):
        assert rst.classify(self.RULES[:2], 0.3, [1, 2]) == 3

    def test_specificity_then_index(self):
        assert rst.classify(self.RULES, 0.3, [1, 2]) == 1
        twins = [RoughRule(((0, 1),), 2, 1, 0.5), RoughRule(((1, 1),), 3, 1, 0.5)]
        assert rst.classify(twins, 0.0, [1, 1]) == 2

    def test_threshold_filters(self):
        assert rst.classify(self.RULES[:2], 0.5, [1, 0]) == UNRECOGNIZED


class TestEm:
    def test_zero(self):
        assert rst.em([0, 1, 2], [0, 1, 2], 3) == 0.0

    def test_arithmetic(self):
        assert rst.em([1, 2], [1, 4], 2) == 2.0

    def test_all_unrecognized(self):
        assert rst.em([0, 3, 2, 1], [UNRECOGNIZED] * 4, 4) == 1.0

    def test_unrecognized_counts_one_not_sentinel_distance(self):
        assert rst.em([0], [UNRECOGNIZED], 1) == 1.0

    def test_size_error(self):
        with pytest.raises(SizeError):
            rst.em([1, 2], [1], 2)


class TestAdapt:
    def test_fixed_point(self):
        s = rst.adapt_strength(StrengthState(0.3), 0.2, 0.1, 0.2)
        assert s.s == 0.3 and s.converged
        assert s.history == ((0.3, 0.2),)

    def test_linear_step(self):
        s = rst.adapt_strength(StrengthState(0.5), 1.0, 0.1, 0.0)
        assert s.s == pytest.approx(0.4, abs=1e-15)
        assert not s.converged

    def test_clamp(self):
        assert rst.adapt_strength(StrengthState(0.05), 1.0, 1.0, 0.0).s == 0.0
        assert rst.adapt_strength(StrengthState(0.95), 0.0, 1.0, 1.0).s == 1.0

    def test_errors(self):
        with pytest.raises(NumericError):
            rst.adapt_strength(StrengthState(0.5), float("nan"), 0.1, 0.0)
        with pytest.raises(ValidationError):
            rst.adapt_strength(StrengthState(0.5), 1.0, 0.0, 0.0)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(0, 1), st.floats(0, 5), st.floats(0.001, 0.19))
    def test_contraction_under_constant_em(self, s0, e, gain):
        state = StrengthState(s0)
        steps = []
        for _ in range(20):
            nxt = rst.adapt_strength(state, e, gain, 0.0)
            steps.append(abs(nxt.s - state.s))
            assert 0.0 <= nxt.s <= 1.0
            state = nxt
        assert all(b <= a + 1e-15 for a, b in zip(steps, steps[1:]))
        assert len(state.history) == 20
