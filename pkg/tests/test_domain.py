"""Lattice, Galois, transfer, and refinement tests for the abstract domain."""

import random
from fractions import Fraction

import pytest

from mbdebug.domain import (
    BOOL_FALSE,
    BOOL_TOP,
    BOOL_TRUE,
    BOTTOM,
    INT_TOP,
    TOP,
    BooleanAbs,
    Interval,
    ObjectId,
    RefSet,
    TypeAnomaly,
    abstract_transfer,
    alpha,
    backward_refine,
    gamma_contains,
    interval,
    is_bottom,
    join,
    leq,
    meet,
    narrow,
    refs,
    render,
    singleton,
    tags_mismatch,
    widen,
)


def ival(lo, hi):
    return interval(lo, hi)


def rand_interval(rng, span=20):
    kind = rng.randrange(6)
    if kind == 0:
        return INT_TOP
    a = rng.randint(-span, span)
    b = rng.randint(-span, span)
    lo, hi = min(a, b), max(a, b)
    if kind == 1:
        return Interval(None, Fraction(hi))
    if kind == 2:
        return Interval(Fraction(lo), None)
    return Interval(Fraction(lo), Fraction(hi))


# ---------------------------------------------------------------------------
# join / meet / leq
# ---------------------------------------------------------------------------


def test_join_hull():
    assert join(ival(1, 3), ival(5, 7)) == ival(1, 7)


def test_meet_overlap():
    assert meet(ival(1, 5), ival(4, 9)) == ival(4, 5)


def test_meet_disjoint_is_bottom():
    assert is_bottom(meet(ival(1, 2), ival(5, 6)))


def test_join_consistent_with_leq():
    rng = random.Random(7)
    for _ in range(500):
        a, b = rand_interval(rng), rand_interval(rng)
        j = join(a, b)
        assert leq(a, j) and leq(b, j)
        m = meet(a, b)
        assert leq(m, a) and leq(m, b)


def test_lattice_laws():
    rng = random.Random(13)
    pool = [rand_interval(rng) for _ in range(40)]
    pool += [BOOL_TRUE, BOOL_FALSE, BOOL_TOP, TOP, BOTTOM]
    o1, o2 = ObjectId(3), ObjectId(9)
    pool += [refs(o1), refs(o1, o2, null=True), refs(null=True)]
    for _ in range(2000):
        a, b, c = rng.choice(pool), rng.choice(pool), rng.choice(pool)
        if tags_mismatch(a, b) or tags_mismatch(b, c) or tags_mismatch(a, c):
            continue
        assert join(a, b) == join(b, a)
        assert meet(a, b) == meet(b, a)
        assert join(a, join(b, c)) == join(join(a, b), c)
        assert meet(a, meet(b, c)) == meet(meet(a, b), c)
        assert join(a, a) == a or is_bottom(a)
        assert join(a, meet(a, b)) == a or is_bottom(a)
        assert meet(a, join(a, b)) == a or is_bottom(meet(a, join(a, b))) and is_bottom(a)


def test_tag_mismatch_joins_to_top():
    assert join(ival(0, 1), BOOL_TRUE) is TOP
    assert tags_mismatch(ival(0, 1), BOOL_TRUE)


# ---------------------------------------------------------------------------
# alpha / gamma
# ---------------------------------------------------------------------------


def test_alpha_numbers():
    assert alpha({2, 4, 8}) == ival(2, 8)


def test_alpha_bool():
    assert alpha({True}) == BOOL_TRUE


def test_alpha_refs():
    o = ObjectId(15)
    assert alpha({o}) == refs(o)
    assert alpha({o, None}) == refs(o, null=True)


def test_alpha_heterogeneous_is_anomaly():
    with pytest.raises(TypeAnomaly):
        alpha([2, True])
    with pytest.raises(TypeAnomaly):
        alpha([ObjectId(1), 3])


def test_gamma_contains_basics():
    assert gamma_contains(ival(0, 10), 7)
    assert not gamma_contains(ival(0, 10), 11)
    assert gamma_contains(TOP, 123)
    assert not gamma_contains(BOTTOM, 0)


def test_galois_soundness_enumerated():
    rng = random.Random(99)
    for _ in range(300):
        n = rng.randint(1, 6)
        s = {rng.randint(-50, 50) for _ in range(n)}
        a = alpha(s)
        for v in s:
            assert gamma_contains(a, v)
    o1, o2 = ObjectId(1), ObjectId(2)
    for s in [{o1}, {o1, o2}, {o1, None}, {None}]:
        a = alpha(s)
        for v in s:
            assert gamma_contains(a, v)


# ---------------------------------------------------------------------------
# widen / narrow
# ---------------------------------------------------------------------------


def test_widen_moving_hi():
    assert widen(ival(0, 1), ival(0, 2)) == Interval(Fraction(0), None)


def test_widen_fixpoint():
    assert widen(ival(0, 5), ival(0, 5)) == ival(0, 5)


def test_narrow_recovers_bound():
    assert narrow(Interval(Fraction(0), None), ival(0, 10)) == ival(0, 10)


def test_widening_stabilizes_within_four_steps():
    rng = random.Random(5)
    for _ in range(500):
        a = rand_interval(rng)
        steps = 0
        while True:
            b = rand_interval(rng)
            nxt = widen(a, b)
            if nxt == a:
                break
            a = nxt
            steps += 1
            assert steps <= 4


# ---------------------------------------------------------------------------
# transfer functions
# ---------------------------------------------------------------------------


def test_mul_example():
    assert abstract_transfer("mul", [ival(2, 3), ival(4, 4)]).value == ival(8, 12)


def test_lt_disjoint():
    assert abstract_transfer("lt", [ival(1, 2), ival(5, 5)]).value == BOOL_TRUE


def test_array_read_boundary():
    # index in [0,3] against length 3: 3 >= 3 is feasible, so the exception
    # is possible but not definite.
    res = abstract_transfer("array-read", [ival(0, 3), ival(3, 3)])
    assert res.exceptions == (("ArrayIndexOutOfBoundsException", False),)
    assert res.value is not None
    # Exhaustive check of the same fact.
    assert any(i >= 3 for i in range(0, 4))
    assert any(i < 3 for i in range(0, 4))


def test_array_read_definite_oob():
    res = abstract_transfer("array-read", [ival(5, 9), ival(3, 3)])
    assert res.definitely_raises


def test_div_by_zero_definite():
    res = abstract_transfer("div", [ival(1, 1), ival(0, 0)])
    assert res.definitely_raises
    assert res.exceptions[0][0] == "ArithmeticException"


def test_div_by_zero_possible():
    res = abstract_transfer("div", [ival(4, 4), ival(-1, 1)])
    assert ("ArithmeticException", False) in res.exceptions
    assert gamma_contains(res.value, 4)
    assert gamma_contains(res.value, -4)


CONCRETE_OPS = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
}


def test_transfer_soundness_small_domain():
    rng = random.Random(21)
    for _ in range(400):
        lo1, hi1 = sorted((rng.randint(-8, 8), rng.randint(-8, 8)))
        lo2, hi2 = sorted((rng.randint(-8, 8), rng.randint(-8, 8)))
        a, b = ival(lo1, hi1), ival(lo2, hi2)
        for op, f in CONCRETE_OPS.items():
            out = abstract_transfer(op, [a, b]).value
            for x in range(lo1, hi1 + 1):
                for y in range(lo2, hi2 + 1):
                    assert gamma_contains(out, f(x, y)), (op, a, b, x, y)
        # division, skipping zero divisors
        res = abstract_transfer("div", [a, b])
        for x in range(lo1, hi1 + 1):
            for y in range(lo2, hi2 + 1):
                if y == 0:
                    continue
                q = int(Fraction(x, y))
                assert gamma_contains(res.value, q), (a, b, x, y, q, res.value)
        # comparisons
        for op, f in (("lt", lambda a, b: a < b), ("le", lambda a, b: a <= b),
                      ("gt", lambda a, b: a > b), ("ge", lambda a, b: a >= b),
                      ("eq", lambda a, b: a == b), ("ne", lambda a, b: a != b)):
            out = abstract_transfer(op, [a, b]).value
            for x in range(lo1, hi1 + 1):
                for y in range(lo2, hi2 + 1):
                    assert gamma_contains(out, f(x, y)), (op, a, b, x, y)


def test_mod_soundness():
    rng = random.Random(31)
    for _ in range(200):
        lo1, hi1 = sorted((rng.randint(-8, 8), rng.randint(-8, 8)))
        lo2, hi2 = sorted((rng.randint(-8, 8), rng.randint(-8, 8)))
        a, b = ival(lo1, hi1), ival(lo2, hi2)
        res = abstract_transfer("mod", [a, b])
        for x in range(lo1, hi1 + 1):
            for y in range(lo2, hi2 + 1):
                if y == 0:
                    continue
                r = x - int(Fraction(x, y)) * y
                assert gamma_contains(res.value, r), (a, b, x, y, r, res.value)


def test_boolean_ops():
    assert abstract_transfer("and", [BOOL_TRUE, BOOL_FALSE]).value == BOOL_FALSE
    assert abstract_transfer("or", [BOOL_TRUE, BOOL_TOP]).value == BOOL_TRUE
    assert abstract_transfer("not", [BOOL_TRUE]).value == BOOL_FALSE
    assert abstract_transfer("and", [BOOL_TOP, BOOL_TOP]).value == BOOL_TOP


def test_ref_equality():
    o1, o2 = ObjectId(1), ObjectId(2)
    assert abstract_transfer("eq", [refs(o1), refs(o2)]).value == BOOL_FALSE
    assert abstract_transfer("eq", [refs(null=True), refs(null=True)]).value == BOOL_TRUE
    # one abstract object may stand for several concrete ones
    assert abstract_transfer("eq", [refs(o1), refs(o1)]).value == BOOL_TOP


# ---------------------------------------------------------------------------
# backward refinement
# ---------------------------------------------------------------------------


def test_refine_add():
    ra, rb = backward_refine("add", ival(5, 5), [ival(0, 10), ival(0, 10)])
    assert ra == ival(0, 5)
    assert rb == ival(0, 5)


def test_refine_lt():
    ra, rb = backward_refine("lt", BOOL_TRUE, [ival(0, 10), ival(3, 3)])
    assert ra == ival(0, 2)
    assert rb == ival(3, 3)


def test_refine_eq_infeasible():
    ra, rb = backward_refine("eq", BOOL_TRUE, [ival(1, 2), ival(5, 6)])
    assert is_bottom(ra) and is_bottom(rb)


def test_refine_never_widens():
    rng = random.Random(17)
    ops = ["add", "sub", "mul", "lt", "le", "gt", "ge", "eq", "ne"]
    for _ in range(800):
        a, b = rand_interval(rng, 10), rand_interval(rng, 10)
        op = rng.choice(ops)
        res = abstract_transfer(op, [a, b]).value
        if res is None or is_bottom(res):
            continue
        if isinstance(res, BooleanAbs):
            res = BOOL_TRUE if rng.random() < 0.5 else BOOL_FALSE
        out = backward_refine(op, res, [a, b])
        assert leq(out[0], a), (op, a, b, res, out)
        assert leq(out[1], b), (op, a, b, res, out)


def test_refine_soundness_enumerated():
    # every concrete pair producing the requested result survives refinement
    rng = random.Random(23)
    for _ in range(300):
        lo1, hi1 = sorted((rng.randint(-6, 6), rng.randint(-6, 6)))
        lo2, hi2 = sorted((rng.randint(-6, 6), rng.randint(-6, 6)))
        a, b = ival(lo1, hi1), ival(lo2, hi2)
        for op, f in (("add", lambda x, y: x + y), ("sub", lambda x, y: x - y)):
            tlo, thi = sorted((rng.randint(-10, 10), rng.randint(-10, 10)))
            want = ival(tlo, thi)
            ra, rb = backward_refine(op, want, [a, b])
            for x in range(lo1, hi1 + 1):
                for y in range(lo2, hi2 + 1):
                    if gamma_contains(want, f(x, y)):
                        assert gamma_contains(ra, x)
                        assert gamma_contains(rb, y)
        for op, f in (("lt", lambda x, y: x < y), ("ge", lambda x, y: x >= y)):
            for truth in (BOOL_TRUE, BOOL_FALSE):
                ra, rb = backward_refine(op, truth, [a, b])
                for x in range(lo1, hi1 + 1):
                    for y in range(lo2, hi2 + 1):
                        if f(x, y) == truth.may_true:
                            assert gamma_contains(ra, x), (op, truth, a, b, x, y)
                            assert gamma_contains(rb, y)


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


def test_render_forms():
    assert render(ival(1, 5)) == "[1,5]"
    assert render(INT_TOP) == "[-inf,+inf]"
    assert render(TOP) == "⊤"
    assert render(BOTTOM) == "⊥"
    assert render(refs(ObjectId(15))) == "{site15}"
    assert render(BOOL_TRUE) == "true"
    assert render(singleton(Fraction(9423, 1000))) == "[9423/1000,9423/1000]"
