import os
from random import Random

import pytest

from agmlift.canlift import j_from_lambda, lambda_invariant, lift_canonical
from agmlift.counting import (
    CurveSpec,
    _Curve,
    _ops,
    brute_count,
    count_points,
    init_seed,
    point_order_check,
)
from agmlift.errors import InvalidCurveError, InvalidInputError
from agmlift.padic import PadicField


# ----------------------------------------------------------------------
# validation and the oracle itself
# ----------------------------------------------------------------------

def test_curve_validation():
    with pytest.raises(InvalidCurveError):
        CurveSpec(1, 0, 0).validate()
    with pytest.raises(InvalidCurveError):
        CurveSpec(2, 4, 1).validate()  # a2 out of range
    with pytest.raises(InvalidCurveError):
        CurveSpec(0, 0, 1).validate()
    CurveSpec(2, 3, 2).validate()


def test_brute_count_hand_enumerated():
    # y^2 + xy = x^3 + 1 over F_2: infinity, (0,1), (1,0), (1,1)
    assert brute_count(CurveSpec(1, 0, 1)) == 4
    # y^2 + xy = x^3 + x^2 + 1 over F_2: infinity, (0,1)
    assert brute_count(CurveSpec(1, 1, 1)) == 2


def test_brute_count_matches_full_point_enumeration():
    # independent route: solve the curve equation for every (x, y) pair
    for d in (2, 3):
        ops = _ops(d)
        q = 1 << d
        rng = Random(d)
        for _ in range(6):
            a2b, a6b = rng.randrange(q), rng.randrange(1, q)
            a2, a6 = ops.elem(a2b), ops.elem(a6b)
            total = 1  # infinity
            for xb in range(q):
                for yb in range(q):
                    x, y = ops.elem(xb), ops.elem(yb)
                    if y * y + x * y == x * x * x + a2 * x * x + a6:
                        total += 1
            assert total == brute_count(CurveSpec(d, a2b, a6b))


def test_brute_count_is_even():
    rng = Random(42)
    for d in (4, 7):
        q = 1 << d
        for _ in range(10):
            assert brute_count(CurveSpec(d, rng.randrange(q), rng.randrange(1, q))) % 2 == 0


def test_brute_count_degree_cap():
    with pytest.raises(InvalidInputError):
        brute_count(CurveSpec(17, 0, 1))


# ----------------------------------------------------------------------
# curve group law
# ----------------------------------------------------------------------

def test_group_law_basics():
    C = _Curve(CurveSpec(3, 2, 5))
    rng = Random(0)
    for _ in range(10):
        P = C.random_point(rng)
        Q = C.random_point(rng)
        assert C.on_curve(P) and C.on_curve(Q)
        assert C.on_curve(C.add(P, Q))
        assert C.add(P, C.neg(P)) is None
        assert C.add(P, None) == P
    n = brute_count(CurveSpec(3, 2, 5))
    P = C.random_point(rng)
    assert C.mul(n, P) is None


def test_point_order_check_lagrange():
    c = CurveSpec(3, 1, 3)
    n = brute_count(c)
    assert point_order_check(c, n, trials=6, rng=Random(1))
    assert point_order_check(c, 2 * n, trials=6, rng=Random(2))
    assert not point_order_check(c, 1, trials=6, rng=Random(3))


# ----------------------------------------------------------------------
# seeds
# ----------------------------------------------------------------------

def test_init_seed_is_the_quartic_root():
    rng = Random(5)
    for d in (1, 2, 4, 6):
        ops = _ops(d)
        q = 1 << d
        for _ in range(8):
            a6 = rng.randrange(1, q)
            s = init_seed(CurveSpec(d, 0, a6))
            e = ops.elem(s)
            assert ((e * e) * (e * e)).reduce_residue() == a6


def test_init_seed_trivial_values():
    assert init_seed(CurveSpec(1, 0, 1)) == 1
    assert init_seed(CurveSpec(2, 0, 1)) == 1


# ----------------------------------------------------------------------
# the counting pipeline
# ----------------------------------------------------------------------

def test_count_points_degree_one():
    r = count_points(CurveSpec(1, 0, 1))
    assert (r.trace, r.order, r.verified) == (-1, 4, True)
    r2 = count_points(CurveSpec(1, 1, 1))
    assert (r2.trace, r2.order) == (1, 2)


def test_count_matches_oracle_small_degrees():
    for d in (1, 2, 3):
        q = 1 << d
        for a2 in range(q):
            for a6 in range(1, q):
                c = CurveSpec(d, a2, a6)
                assert count_points(c).order == brute_count(c)


def test_twist_classes_have_opposite_traces():
    for d in (2, 3):
        ops = _ops(d)
        q = 1 << d
        for a6 in (1, q - 1):
            by_class = {0: set(), 1: set()}
            for a2 in range(q):
                tr = ops.trace(ops.elem(a2))
                by_class[tr].add(count_points(CurveSpec(d, a2, a6)).trace)
            assert len(by_class[0]) == 1 and len(by_class[1]) == 1
            assert by_class[0] == {-t for t in by_class[1]}


def test_lifted_j_reduces_to_curve_j():
    # mod 2 the lifted invariant must equal 1/a6
    rng = Random(9)
    d = 3
    ops = _ops(d)
    F = PadicField(d, 12)
    for _ in range(5):
        a6 = rng.randrange(1, 1 << d)
        c = CurveSpec(d, 0, a6)
        res = lift_canonical(1, F, init_seed(c), 12)
        a0, a1 = res.point.coords_list()
        j = j_from_lambda(lambda_invariant(a0, a1))
        inv_a6 = ops.inv(ops.elem(a6)).reduce_residue()
        assert j.reduce_residue() == inv_a6
        assert j.is_unit()


def test_count_result_serialization():
    r = count_points(CurveSpec(2, 1, 2))
    doc = r.to_json()
    assert doc["d"] == 2 and doc["a2"] == "1" and doc["a6"] == "2"
    assert doc["order"] == (1 << 2) + 1 - doc["trace"]
    assert doc["verified"] is True


def test_precision_guard_environment_override():
    key = "CANLIFT_PRECISION_GUARD"
    old = os.environ.get(key)
    try:
        os.environ[key] = "7"
        r = count_points(CurveSpec(1, 0, 1))
        assert r.precision_used == 1 + 4 + 7
        os.environ[key] = "banana"
        with pytest.raises(InvalidInputError):
            count_points(CurveSpec(1, 0, 1))
    finally:
        if old is None:
            os.environ.pop(key, None)
        else:
            os.environ[key] = old
