"""Rough-set machinery over symbolic decision tables.

Objects are rows of small non-negative integer codes. Everything here is
exact set arithmetic on object indices; attribute sets are plain iterables
of column indices.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, NumericError, SizeError, ValidationError

UNRECOGNIZED = -1
SENTINEL_DECISION = 4
MAX_REDUCT_ATTRS = 20
CONVERGENCE_TOL = 1e-3


class DecisionTable:
    __slots__ = ("conditions", "decisions")

    def __init__(self, conditions, decisions):
        cond = np.array(conditions, dtype=np.int64, ndmin=2)
        dec = np.array(decisions, dtype=np.int64).ravel()
        if cond.shape[0] != dec.shape[0]:
            raise SizeError(f"{cond.shape[0]} condition rows but {dec.shape[0]} decisions")
        if cond.shape[0] < 1:
            raise SizeError("a decision table needs at least one object")
        if np.any(cond < 0) or np.any(dec < 0):
            raise ValidationError("category codes must be non-negative")
        cond.setflags(write=False)
        dec.setflags(write=False)
        self.conditions = cond
        self.decisions = dec

    @property
    def n_objects(self):
        return self.conditions.shape[0]

    @property
    def n_attrs(self):
        return self.conditions.shape[1]

    def __repr__(self):
        return f"DecisionTable(objects={self.n_objects}, attrs={self.n_attrs})"


@dataclass(frozen=True)
class RoughRule:
    conditions: tuple  # ((attr, code), ...) sorted by attr
    decision: int
    support: int
    strength: float

    def matches(self, x):
        return all(x[a] == v for a, v in self.conditions)

    def __str__(self):
        lhs = " AND ".join(f"a{a + 1}={v}" for a, v in self.conditions)
        return (
            f"IF {lhs} THEN d={self.decision}  "
            f"[support={self.support}, strength={self.strength:.4f}]"
        )


@dataclass(frozen=True)
class StrengthState:
    s: float
    history: tuple = ()
    converged: bool = False


def _attr_list(t, attrs):
    attrs = sorted(set(int(a) for a in attrs))
    for a in attrs:
        if not 0 <= a < t.n_attrs:
            raise IndexError(f"attribute index {a} out of range [0, {t.n_attrs})")
    return attrs


def indiscernibility_classes(t, attrs):
    """Blocks of objects equal on ``attrs``, ordered by first member."""
    cols = _attr_list(t, attrs)
    blocks = {}
    sub = t.conditions[:, cols]
    for i, key in enumerate(map(tuple, sub.tolist())):
        blocks.setdefault(key, []).append(i)
    return [frozenset(b) for b in blocks.values()]


def _class_members(t, dclass):
    return frozenset(np.flatnonzero(t.decisions == dclass).tolist())


def lower_approx(t, attrs, dclass):
    members = _class_members(t, dclass)
    out = set()
    for b in indiscernibility_classes(t, attrs):
        if b <= members:
            out |= b
    return frozenset(out)


def upper_approx(t, attrs, dclass):
    members = _class_members(t, dclass)
    out = set()
    for b in indiscernibility_classes(t, attrs):
        if b & members:
            out |= b
    return frozenset(out)


def positive_region(t, attrs):
    """Objects whose block is pure in the decision."""
    dec = t.decisions
    out = set()
    for b in indiscernibility_classes(t, attrs):
        if len({int(dec[i]) for i in b}) == 1:
            out |= b
    return frozenset(out)


def discernibility_matrix(t):
    """n x n nested list of frozensets; entry (i, j) lists the condition
    attributes separating i and j when their decisions differ."""
    n = t.n_objects
    if n < 2:
        raise SizeError("discernibility matrix needs at least two objects")
    empty = frozenset()
    m = [[empty] * n for _ in range(n)]
    C, d = t.conditions, t.decisions
    for i in range(n):
        for j in range(i + 1, n):
            if d[i] != d[j]:
                entry = frozenset(np.flatnonzero(C[i] != C[j]).tolist())
                m[i][j] = m[j][i] = entry
    return m


def find_reducts(t, max_attrs=MAX_REDUCT_ATTRS):
    """All minimal attribute subsets preserving the full positive region.

    Exhaustive search by increasing subset size; ``max_attrs`` caps the
    attribute count (never above 20).
    """
    bound = min(max_attrs, MAX_REDUCT_ATTRS)
    if t.n_attrs > bound:
        raise CapacityError(f"{t.n_attrs} attributes exceed exhaustive-search bound {bound}")
    target = positive_region(t, range(t.n_attrs))
    found = []
    for k in range(t.n_attrs + 1):
        for subset in itertools.combinations(range(t.n_attrs), k):
            s = frozenset(subset)
            if any(r <= s for r in found):
                continue
            if positive_region(t, s) == target:
                found.append(s)
    return found


def extract_exact_rules(t, attrs):
    """One rule per pure indiscernibility block on ``attrs``."""
    cols = _attr_list(t, attrs)
    if not cols:
        raise ValidationError("rule extraction needs a non-empty attribute set")
    n = t.n_objects
    rules = []
    for b in indiscernibility_classes(t, cols):
        decs = {int(t.decisions[i]) for i in b}
        if len(decs) != 1:
            continue
        first = min(b)
        conds = tuple((a, int(t.conditions[first, a])) for a in cols)
        rules.append(RoughRule(conds, decs.pop(), len(b), len(b) / n))
    return rules


def classify(rules, threshold, x):
    """Decision of the strongest matching rule with strength >= threshold.

    Ties go to the rule with more conditions, then the earlier rule. Returns
    :data:`UNRECOGNIZED` when nothing fires.
    """
    best = None
    best_key = None
    for i, rule in enumerate(rules):
        if rule.strength < threshold or not rule.matches(x):
            continue
        key = (-rule.strength, -len(rule.conditions), i)
        if best_key is None or key < best_key:
            best, best_key = rule, key
    return UNRECOGNIZED if best is None else best.decision


def classify_all(rules, threshold, X):
    return np.array([classify(rules, threshold, x) for x in np.asarray(X)], dtype=np.int64)


def ascribe(predicted):
    """Replace UNRECOGNIZED markers with the sentinel decision value."""
    p = np.asarray(predicted, dtype=np.int64)
    return np.where(p == UNRECOGNIZED, SENTINEL_DECISION, p)


def em(actual, predicted, m=None):
    """Squared-difference error measure over m test objects.

    An unrecognized object contributes exactly 1 to the sum.
    """
    a = np.asarray(actual, dtype=np.int64).ravel()
    p = np.asarray(predicted, dtype=np.int64).ravel()
    if m is None:
        m = a.size
    if a.size != p.size or a.size != m:
        raise SizeError(f"length mismatch: actual {a.size}, predicted {p.size}, m {m}")
    if m < 1:
        raise SizeError("EM needs m >= 1")
    miss = p == UNRECOGNIZED
    contrib = np.where(miss, 1.0, (a - p).astype(np.float64) ** 2)
    return float(contrib.sum() / m)


def adapt_strength(state, em_value, gain, target):
    """Linear negative-feedback update of the strength threshold."""
    if gain <= 0:
        raise ValidationError("gain must be > 0")
    if not math.isfinite(em_value):
        raise NumericError(f"non-finite EM value {em_value!r}")
    s_new = min(1.0, max(0.0, state.s - gain * (em_value - target)))
    return StrengthState(
        s=s_new,
        history=state.history + ((s_new, float(em_value)),),
        converged=abs(s_new - state.s) <= CONVERGENCE_TOL,
    )


def format_rules(rules):
    return "".join(f"{r}\n" for r in rules)
