"""Built-in verification suite replaying the toolkit's reference values.

Each item returns (passed, detail) and is runnable on its own; the CLI
``selftest`` command and the service endpoint run them in order.  The
items mirror the acceptance tests in ``tests/test_acceptance.py`` so a
deployed build can re-check itself without a test harness.

Known red item: ``agm_convergence`` asserts, among true contraction
properties, the classical claim that mean-recursion iterates of starts
inside 1 + 2^(g+3) Z_q remain inside 1 + 2^(g+2) Z_q.  That claim is
provable for g = 1 but false for g >= 2 (counterexample: start
(1, 1, 1, 33) over Z_2, whose first step is congruent 9 modulo 16), so
the item fails on a fresh build by design rather than silently testing
something weaker.  See README and tests/test_agm.py.
"""

from __future__ import annotations

from random import Random

from .agm import (
    AgmState,
    agm_iterate,
    agm_step,
    bridge_to_agm,
    random_descent_pair,
    transform_identities,
    verify_descent_scale,
)
from .canlift import (
    ThetaPoint,
    j_from_lambda,
    lambda_invariant,
    lift_canonical,
    mumford_quadric_check,
    residual_general,
)
from .errors import AgmliftError, InvalidInputError
from .padic import ABOVE_PRECISION, PadicField, newton_root
from .thetagrid import character_matrix, character_matrix_det


def _fields() -> dict:
    # small cache so repeated items share field construction
    cache: dict = {}

    def get(d: int, N: int) -> PadicField:
        if (d, N) not in cache:
            cache[(d, N)] = PadicField(d, N)
        return cache[(d, N)]

    return get


_field = _fields()


def item_level2_closed_form_d1(rng_seed: int = 0) -> tuple[bool, str]:
    """Degree-1 lift: quadratic minimal relation, scale identity, j value."""
    F = _field(1, 64)
    res = lift_canonical(1, F, 1, 64)
    a0, a1 = res.point.coords_list()
    mu = a1 * a0.inv()
    quad = (mu * mu + mu + 2).is_zero_mod(63)
    twice = mu == res.omega.shift_up(1)
    j = j_from_lambda(lambda_invariant(a0, a1))
    jval = j.same_mod(-3375, 48)
    ok = quad and twice and jval
    return ok, f"quadratic={quad} ratio-doubles-scale={twice} j=-3375={jval}"


def item_level2_closed_form_d2(rng_seed: int = 0) -> tuple[bool, str]:
    """Degree-2 lift from a proper-quartic seed: quartic and norm identities."""
    F = _field(2, 64)
    res = lift_canonical(1, F, 2, 64)  # seed t: j outside the prime field
    a0, a1 = res.point.coords_list()
    mu = a1 * a0.inv()
    quartic = (mu ** 4 + 4 * mu ** 3 + 5 * mu ** 2 + 2 * mu + 4).is_zero_mod(60)
    w = res.omega
    cube = (mu ** 3 - (w * w * w.frobenius()).shift_up(3)).is_zero_mod(60)
    ok = quartic and cube
    return ok, f"quartic={quartic} cube-norm={cube}"


def item_level4_closed_form(rng_seed: int = 0) -> tuple[bool, str]:
    """Level-4 closed form over Z_2 built from the disc -7 unit root."""
    Z = _field(1, 64)
    w = newton_root(Z, [1, 1, 2], 5)  # 2w^2 + w + 1 = 0, w = 5 mod 8
    x1 = w * (1 + w.shift_up(1))
    x2 = w.shift_up(1)
    pt = ThetaPoint(1, 2, [Z.one(), x1, x2, x1])
    res = residual_general(pt, w)
    vals = [r.valuation() for r in res.values()]
    resid = all(v is ABOVE_PRECISION or v >= 60 for v in vals)
    quadrics = mumford_quadric_check(pt)["passed"]
    twolam = x1 * x1 * (x2.div_exact_by_2(1) * Z.one()).inv()
    lam_ok = twolam.same_mod(w * (1 + w.shift_up(1)) ** 2, 60)
    ok = resid and quadrics and lam_ok
    return ok, f"residuals>=60={resid} quadrics={quadrics} scale-formula={lam_ok}"


def item_transform_matrix(rng_seed: int = 0) -> tuple[bool, str]:
    """Exact determinant values and the involution identity."""
    expected = {1: 2, 2: 16, 3: 1 << 12, 4: 1 << 32}
    dets = all(abs(character_matrix_det(g)) == expected[g] for g in expected)
    invol = True
    for g in range(1, 7):
        M = character_matrix(g)
        n = 1 << g
        for i in range(n):
            row = [sum(M[i][k] * M[k][j] for k in range(n)) for j in range(n)]
            if row != [n if j == i else 0 for j in range(n)]:
                invol = False
    ok = dets and invol
    return ok, f"determinants={dets} involution={invol}"


def _convergence_trial(F: PadicField, g: int, rng: Random, steps: int):
    n = 1 << g
    st = AgmState([F.disc_element(g + 3, rng) for _ in range(n)])
    x0 = st.coords[0]
    d0 = min(((c - x0).valuation() for c in st.coords[1:]), default=ABOVE_PRECISION)
    states, rep = agm_iterate(st, steps)
    problems = []
    if not all(s["in_disc_g_plus_2"] for s in rep.steps):
        problems.append("iterate-left-inner-disc")
    seq = [d0] + rep.min_diff_valuations()
    for a, b in zip(seq, seq[1:]):
        if not b >= a + 1:
            problems.append("contraction")
            break
    cur = d0
    for i, s in enumerate(rep.steps):
        bound = cur - g
        if not all(v >= bound for v in s["ratio_delta_valuations"]):
            problems.append("ratio-cauchy")
            break
        cur = s["min_diff_valuation"]
    return problems


def item_agm_convergence(rng_seed: int = 0) -> tuple[bool, str]:
    """Contraction survey: 100 random starts per (g, d) grid point."""
    failures: dict[str, int] = {}
    for g in (1, 2, 3):
        for d in (1, 2, 4):
            F = _field(d, 40)
            rng = Random(f"agm-conv-{rng_seed}-{g}-{d}")
            steps = 6
            for _ in range(100):
                for p in _convergence_trial(F, g, rng, steps):
                    failures[f"{p}(g={g},d={d})"] = failures.get(f"{p}(g={g},d={d})", 0) + 1
    if not failures:
        return True, "all starts contract and stay in the inner disc"
    top = ", ".join(f"{k}x{v}" for k, v in sorted(failures.items()))
    return False, f"failed checks: {top}"


def item_transform_bridge(rng_seed: int = 0) -> tuple[bool, str]:
    """Unit-scale pairs commute with the squared sign transform."""
    rng = Random(f"bridge-{rng_seed}")
    bad = 0
    for i in range(100):
        g = 1 + i % 3
        d = 1 + (i // 3) % 2
        F = _field(d, 40)
        a_n, a_np1 = random_descent_pair(F, g, rng)
        scale = verify_descent_scale(a_n, a_np1)
        if not scale.same_mod(1, scale.prec):
            bad += 1
            continue
        stepped = agm_step(AgmState(bridge_to_agm(a_n)))
        target = bridge_to_agm(a_np1)
        if not all(
            p.same_mod(q, min(p.prec, q.prec)) for p, q in zip(stepped.coords, target)
        ):
            bad += 1
    ident_ok = True
    irng = Random(f"ident-{rng_seed}")
    for g in (1, 2, 3, 4):
        for _ in range(5):
            a = [irng.randint(-50, 50) for _ in range(1 << g)]
            for u in range(1 << g):
                for w in range(1 << g):
                    for lhs, rhs in transform_identities(a, u, w).values():
                        if lhs != rhs:
                            ident_ok = False
    ok = bad == 0 and ident_ok
    return ok, f"pairs-failed={bad} identities={ident_ok}"


def item_frobenius_equivariance(rng_seed: int = 0) -> tuple[bool, str]:
    """Conjugating the seed conjugates the whole lift, exactly."""
    bad = 0
    for d in (2, 3, 4):
        F = _field(d, 32)
        rng = Random(f"equiv-{rng_seed}-{d}")
        for _ in range(20):
            s = rng.randrange(1, 1 << d)
            ra = lift_canonical(1, F, s, 32)
            e = F.embed_residue(s)
            s2 = (e * e).reduce_residue()
            rb = lift_canonical(1, F, s2, 32)
            conj_pt = [c.frobenius() for c in ra.point.coords_list()]
            if rb.omega != ra.omega.frobenius() or any(
                x != y for x, y in zip(rb.point.coords_list(), conj_pt)
            ):
                bad += 1
    return bad == 0, f"mismatches={bad}"


def item_canonical_reduction(rng_seed: int = 0) -> tuple[bool, str]:
    """Every lifted vector reduces to (1, 0, ..., 0) with unit head."""
    rng = Random(f"red-{rng_seed}")
    bad = 0
    for d in (1, 2, 3, 4):
        F = _field(d, 24)
        for _ in range(5):
            s = rng.randrange(1, 1 << d)
            res = lift_canonical(1, F, s, 24)
            if not res.point.is_canonical_mod2():
                bad += 1
            if not res.point.coords_list()[0].is_unit():
                bad += 1
    Fg = _field(1, 16)
    resg = lift_canonical(2, Fg, (1, 1, 1), 12)
    if not resg.point.is_canonical_mod2():
        bad += 1
    return bad == 0, f"violations={bad}"


ITEMS = {
    "level2_closed_form_d1": item_level2_closed_form_d1,
    "level2_closed_form_d2": item_level2_closed_form_d2,
    "level4_closed_form": item_level4_closed_form,
    "transform_matrix": item_transform_matrix,
    "agm_convergence": item_agm_convergence,
    "transform_bridge": item_transform_bridge,
    "frobenius_equivariance": item_frobenius_equivariance,
    "canonical_reduction": item_canonical_reduction,
}


def run(names=None, rng_seed: int = 0) -> dict:
    """Run the selected items (all by default) and collect verdicts."""
    if names:
        unknown = [n for n in names if n not in ITEMS]
        if unknown:
            raise InvalidInputError(f"unknown selftest items: {', '.join(unknown)}")
        selected = {n: ITEMS[n] for n in names}
    else:
        selected = ITEMS
    items = []
    for name, fn in selected.items():
        try:
            passed, detail = fn(rng_seed)
        except AgmliftError as exc:  # pragma: no cover
            passed, detail = False, f"error: {exc}"
        items.append({"name": name, "passed": passed, "detail": detail})
    return {"passed": all(i["passed"] for i in items), "items": items}
