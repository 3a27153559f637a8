from random import Random

import pytest

from agmlift.agm import (
    AgmState,
    agm_iterate,
    agm_step,
    bridge_to_agm,
    level_descent_squares,
    projective_ratios,
    random_descent_pair,
    transform_identities,
    verify_descent_scale,
)
from agmlift.errors import (
    InvalidInputError,
    NonUnitError,
    PrecisionError,
    RelationError,
)
from agmlift.padic import ABOVE_PRECISION, PadicField


def _ints(field, *vals):
    return [field.from_int(v) for v in vals]


# ----------------------------------------------------------------------
# single steps
# ----------------------------------------------------------------------

def test_step_fixed_point():
    Z = PadicField(1, 8)
    out = agm_step(AgmState(_ints(Z, 1, 1)))
    assert [c.coeffs for c in out.coords] == [(1,), (1,)]


def test_step_frozen_example():
    # (1+17)/2 = 9 and the canonical root of 17, at 6 guaranteed digits
    Z = PadicField(1, 8)
    out = agm_step(AgmState(_ints(Z, 1, 17)))
    assert out.coords[0].same_mod(9, out.coords[0].prec)
    assert out.coords[1].same_mod(105, out.coords[1].prec)
    assert out.min_prec() == 6
    assert out.step == 1


def test_step_specializes_to_the_classical_two_term_mean():
    F = PadicField(2, 30, f=0b111)
    rng = Random(6)
    for _ in range(10):
        x0, x1 = F.disc_element(3, rng), F.disc_element(3, rng)
        out = agm_step(AgmState([x0, x1]))
        mean = (x0 + x1).div_exact_by_2(1)
        geo = (x0 * x1).sqrt_unit()
        assert out.coords[0].same_mod(mean, out.min_prec())
        assert out.coords[1].same_mod(geo, out.min_prec())


def test_state_validation():
    Z = PadicField(1, 8)
    with pytest.raises(InvalidInputError):
        AgmState(_ints(Z, 1, 3))  # 3 is not 1 mod 4... and differs mod 8
    with pytest.raises(InvalidInputError):
        AgmState(_ints(Z, 1, 1, 1))  # not a power of two
    with pytest.raises(PrecisionError):
        AgmState([Z.from_int(1, prec=2), Z.from_int(1, prec=2)])


def test_step_precision_cost_and_budget():
    Z = PadicField(1, 12)
    st = AgmState(_ints(Z, 1, 17))
    assert agm_step(st).min_prec() == st.min_prec() - 2
    with pytest.raises(PrecisionError):
        agm_iterate(st, 5)  # 12 - 5*2 = 2 < 3
    states, _ = agm_iterate(st, 4)
    assert len(states) == 5


# ----------------------------------------------------------------------
# the inner-disc membership claim
# ----------------------------------------------------------------------

def test_iterates_leave_the_inner_disc_for_g2():
    # The classical claim that iterates of starts in 1 + 2^(g+2) Z_q stay
    # in that disc fails for g = 2: averaging (1, 1, 1, 33) gives 9,
    # which is 9 mod 16.  The recursion stays perfectly well defined.
    Z = PadicField(1, 40)
    st = AgmState(_ints(Z, 1, 1, 1, 33))
    assert st.in_start_disc()
    nxt = agm_step(st)
    assert not nxt.in_disc(4)
    assert all(c.coeffs[0] % 16 == 9 for c in nxt.coords)
    # and the next step still works: the products are squares
    agm_step(nxt)


def test_iterates_leave_the_inner_disc_for_g1_weak_start():
    # same drift for g = 1 when starting only in 1 + 2^(g+2) Z_q
    Z = PadicField(1, 20)
    st = AgmState(_ints(Z, 9, 17))
    nxt = agm_step(st)
    assert nxt.coords[0].same_mod(13, 4)
    assert not nxt.in_disc(3)
    agm_step(nxt)  # still well defined


def test_iterates_do_stay_in_inner_disc_for_g1_strong_start():
    Z = PadicField(1, 40)
    rng = Random(3)
    for _ in range(20):
        st = AgmState([Z.disc_element(4, rng) for _ in range(2)])
        states, rep = agm_iterate(st, 8)
        assert all(s["in_disc_g_plus_2"] for s in rep.steps)


# ----------------------------------------------------------------------
# convergence behavior
# ----------------------------------------------------------------------

def test_constant_vector_is_stationary():
    Z = PadicField(1, 24)
    st = AgmState(_ints(Z, 17, 17, 17, 17))
    states, rep = agm_iterate(st, 3)
    for entry in rep.steps:
        assert all(v is ABOVE_PRECISION for v in entry["diff_valuations"])


@pytest.mark.parametrize("g,d", [(1, 1), (1, 3), (2, 2), (3, 1)])
def test_contraction_from_strong_starts(g, d, field_cache):
    F = field_cache(d, 40)
    rng = Random(f"contract-{g}-{d}")
    for _ in range(10):
        st = AgmState([F.disc_element(g + 3, rng) for _ in range(1 << g)])
        x0 = st.coords[0]
        d0 = min(((c - x0).valuation() for c in st.coords[1:]), default=ABOVE_PRECISION)
        _, rep = agm_iterate(st, 5)
        seq = [d0] + rep.min_diff_valuations()
        for a, b in zip(seq, seq[1:]):
            assert b >= a + 1


def test_well_definedness_from_weak_starts(field_cache):
    # starts in 1 + 2^(g+2) Z_q only: no contraction promised, but every
    # step must keep producing square products
    for g, d in [(1, 1), (2, 1), (2, 2)]:
        F = field_cache(d, 40)
        rng = Random(f"weak-{g}-{d}")
        for _ in range(10):
            st = AgmState([F.disc_element(g + 2, rng) for _ in range(1 << g)])
            states, _ = agm_iterate(st, 5)
            assert states[-1].step == 5


def test_projective_ratios():
    Z = PadicField(1, 8)
    st = AgmState(_ints(Z, 1, 1))
    assert [c.coeffs for c in projective_ratios(st)] == [(1,), (1,)]
    st2 = agm_step(AgmState(_ints(Z, 1, 17)))
    r = projective_ratios(st2)
    assert r[0] == Z.one()
    assert r[1].same_mod(Z.from_int(105) * Z.from_int(9).inv(), st2.min_prec())
    # invariance under common unit rescaling
    F = PadicField(2, 30, f=0b111)
    rng = Random(4)
    coords = [F.disc_element(4, rng) for _ in range(4)]
    u = F.random_unit(rng)
    a = AgmState(coords)
    # scaled coordinates may leave the state domain, so compare raw ratios
    inv0 = coords[0].inv()
    scaled_inv0 = (u * coords[0]).inv()
    for c in coords[1:]:
        assert c * inv0 == (u * c) * scaled_inv0


# ----------------------------------------------------------------------
# theta side
# ----------------------------------------------------------------------

def test_level_descent_squares_examples():
    Z = PadicField(1, 8)
    assert [s.coeffs for s in level_descent_squares(_ints(Z, 1, 0))] == [(1,), (0,)]
    assert [s.coeffs for s in level_descent_squares(_ints(Z, 1, 2))] == [(5,), (4,)]


def test_descent_squares_commute_with_transform():
    # transform of the sums equals the squares of the transform
    from agmlift.thetagrid import hadamard_apply

    F = PadicField(2, 20, f=0b111)
    rng = Random(12)
    for g in (1, 2):
        a = [F.random_element(rng) for _ in range(1 << g)]
        s = level_descent_squares(a)
        lhs = hadamard_apply(s)
        y = hadamard_apply(a)
        assert all(l == c * c for l, c in zip(lhs, y))


def test_verify_descent_scale():
    Z = PadicField(1, 16)
    one_zero = _ints(Z, 1, 0)
    lam = verify_descent_scale(one_zero, one_zero)
    assert lam == Z.one()
    with pytest.raises(RelationError) as err:
        verify_descent_scale(_ints(Z, 1, 2), _ints(Z, 1, 6))
    assert err.value.index is not None
    with pytest.raises(NonUnitError):
        verify_descent_scale(_ints(Z, 1, 2), _ints(Z, 2, 2))


def test_random_pairs_have_unit_scale_and_bridge_commutes(field_cache):
    for g in (1, 2, 3):
        for d in (1, 2):
            F = field_cache(d, 40)
            rng = Random(f"pair-{g}-{d}")
            a_n, a_np1 = random_descent_pair(F, g, rng)
            scale = verify_descent_scale(a_n, a_np1)
            assert scale.same_mod(1, scale.prec)
            stepped = agm_step(AgmState(bridge_to_agm(a_n)))
            target = bridge_to_agm(a_np1)
            for p, q in zip(stepped.coords, target):
                assert p.same_mod(q, min(p.prec, q.prec))


def test_bridge_examples():
    Z = PadicField(1, 8)
    assert [c.coeffs for c in bridge_to_agm(_ints(Z, 1, 0))] == [(1,), (1,)]
    assert [c.coeffs for c in bridge_to_agm(_ints(Z, 1, 2))] == [(9,), (1,)]


def test_transform_identities_exact():
    rng = Random(7)
    for g in (1, 2, 3, 4):
        n = 1 << g
        a = [rng.randint(-30, 30) for _ in range(n)]
        for u in range(n):
            for w in range(n):
                for name, (lhs, rhs) in transform_identities(a, u, w).items():
                    assert lhs == rhs, name


def test_transform_identity_closed_form_g1():
    # for g = 1 the folded mean at index 1 is a0^2 - a1^2
    rng = Random(8)
    for _ in range(10):
        a = [rng.randint(-9, 9), rng.randint(-9, 9)]
        lhs, rhs = transform_identities(a, 1, 0)["pair_mean_vs_char_sum"]
        assert lhs == rhs == a[0] ** 2 - a[1] ** 2


def test_identity_unit_vector():
    for g in (1, 2):
        a = [1] + [0] * ((1 << g) - 1)
        for u in range(1 << g):
            pairs = transform_identities(a, u, 0)
            assert pairs["pair_mean_vs_char_sum"] == (1, 1)
