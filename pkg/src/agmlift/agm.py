"""The generalized 2-adic arithmetic-geometric mean and its theta bridge.

The mean recursion acts on vectors indexed by (Z/2Z)^g of 2-adic units,

    x'_u = 2^(-g) * sum_v sqrt(x_{u+v} x_v),

with every square root taken in the branch congruent 1 modulo 4.  For
g = 1 this is the classical two-term AGM.

Well-definedness requires the products x_{u+v} x_v to stay congruent
1 modulo 8.  The invariant maintained here (checked on construction and
after every step) is the one that actually propagates:

    every coordinate is congruent 1 modulo 4, and all coordinates are
    congruent to each other modulo 2^(g+2).

Starting vectors inside 1 + 2^(g+2) Z_q satisfy it; iterates of such
vectors keep satisfying it, although for g >= 2 they need not remain
inside 1 + 2^(g+2) Z_q themselves (the zero coordinate of a step is the
plain average of the inputs, which only gains two guaranteed digits
over 1).  See the convergence tests for a two-line counterexample.

Each step costs g+1 guaranteed digits: g for the division by 2^g and
one for the square roots.

The second half of the module relates the mean recursion to vectors of
theta null coordinates clustered around (1, 0, ..., 0): squaring the
sign transform of a theta vector produces a mean-recursion vector, and
consecutive theta vectors with unit scale correspond to consecutive
mean-recursion vectors.
"""

from __future__ import annotations

from random import Random
from typing import Sequence

from .errors import InvalidInputError, NonUnitError, PrecisionError, RelationError
from .padic import ABOVE_PRECISION, PadicElement, PadicField
from .thetagrid import hadamard_apply

ROOT_CONVENTION = "all square roots congruent 1 modulo 4"


def _coords_list(point) -> list[PadicElement]:
    # accept either a raw sequence or anything exposing coords_list()
    getter = getattr(point, "coords_list", None)
    return list(getter()) if getter is not None else list(point)


class AgmState:
    """A mean-recursion vector over (Z/2Z)^g plus its step counter."""

    __slots__ = ("coords", "g", "step", "root_convention")

    def __init__(self, coords: Sequence[PadicElement], step: int = 0):
        coords = tuple(coords)
        n = len(coords)
        if n == 0 or n & (n - 1):
            raise InvalidInputError("coordinate count must be a power of two")
        g = n.bit_length() - 1
        if g < 1:
            raise InvalidInputError("need g >= 1")
        field = coords[0].field
        if any(c.field != field for c in coords):
            raise InvalidInputError("coordinates live in different fields")
        self.coords = coords
        self.g = g
        self.step = step
        self.root_convention = ROOT_CONVENTION
        self._validate()

    def _validate(self):
        g = self.g
        if self.min_prec() < g + 2:
            raise PrecisionError("state needs at least g+2 guaranteed digits")
        x0 = self.coords[0]
        if x0.coeffs[0] & 3 != 1 or any(c & 3 for c in x0.coeffs[1:]):
            raise InvalidInputError("coordinates must be congruent 1 modulo 4")
        for c in self.coords[1:]:
            if not (c - x0).is_zero_mod(g + 2):
                raise InvalidInputError(
                    f"coordinates must agree modulo 2^{g + 2} for the recursion to be defined"
                )

    @property
    def field(self) -> PadicField:
        return self.coords[0].field

    def min_prec(self) -> int:
        return min(c.prec for c in self.coords)

    def in_disc(self, k: int) -> bool:
        """Whether every coordinate lies in 1 + 2^k Z_q."""
        one = self.field.one()
        return all((c - one).is_zero_mod(k) for c in self.coords)

    def in_start_disc(self) -> bool:
        return self.in_disc(self.g + 2)

    def __repr__(self):
        return f"AgmState(g={self.g}, step={self.step}, prec={self.min_prec()})"


def agm_step(state: AgmState) -> AgmState:
    """One mean-recursion step with the fixed root convention.

    The square roots of the pair products are taken as x_0 * w_a * w_b
    where w_v is the canonical root of x_v / x_0; this is exactly the
    root congruent 1 modulo 4 of x_a x_b, and it exists whenever the
    state invariant holds.
    """
    g = state.g
    cost = g + 1
    if state.min_prec() - cost < g + 2:
        raise PrecisionError(
            f"step needs {cost + g + 2} guaranteed digits, have {state.min_prec()}"
        )
    x0 = state.coords[0]
    inv0 = x0.inv()
    w = [(c * inv0).sqrt_unit() for c in state.coords]
    n = len(state.coords)
    prods = {}
    for a in range(n):
        for b in range(a, n):
            prods[(a, b)] = w[a] * w[b]
    new = []
    for u in range(n):
        acc = None
        for v in range(n):
            a, b = min(u ^ v, v), max(u ^ v, v)
            p = prods[(a, b)]
            acc = p if acc is None else acc + p
        new.append(x0 * acc.div_exact_by_2(g))
    return AgmState(new, state.step + 1)


class ConvergenceReport:
    """Per-step difference valuations collected by :func:`agm_iterate`."""

    def __init__(self):
        self.steps: list[dict] = []

    def add_step(self, entry: dict):
        self.steps.append(entry)

    def min_diff_valuations(self) -> list:
        return [s["min_diff_valuation"] for s in self.steps]

    def to_json(self) -> list[dict]:
        def enc(v):
            return None if v is ABOVE_PRECISION else int(v)

        return [
            {
                "diff_valuations": [enc(v) for v in s["diff_valuations"]],
                "min_diff_valuation": enc(s["min_diff_valuation"]),
                "zero_coord_delta_valuation": enc(s["zero_coord_delta_valuation"]),
                "ratio_delta_valuations": [enc(v) for v in s["ratio_delta_valuations"]],
                "in_disc_g_plus_2": s["in_disc_g_plus_2"],
            }
            for s in self.steps
        ]


def _diff_valuations(state: AgmState) -> list:
    x0 = state.coords[0]
    return [(c - x0).valuation() for c in state.coords[1:]]


def agm_iterate(state: AgmState, n: int) -> tuple[list[AgmState], ConvergenceReport]:
    """Run n steps, failing upfront if the digit budget cannot honor them.

    Returns the full trajectory (including the start state) and a report
    with, per step, the valuations of x_0 - x_u, their minimum, the
    valuation of the change of the zero coordinate, and the valuations
    of the changes of the projective ratios.
    """
    if n < 0:
        raise InvalidInputError("negative step count")
    g = state.g
    budget = state.min_prec() - n * (g + 1)
    if budget < g + 2:
        raise PrecisionError(
            f"{n} steps would leave {budget} guaranteed digits; need at least {g + 2}"
        )
    states = [state]
    report = ConvergenceReport()
    ratios = projective_ratios(state)
    for _ in range(n):
        nxt = agm_step(states[-1])
        new_ratios = projective_ratios(nxt)
        report.add_step(
            {
                "diff_valuations": _diff_valuations(nxt),
                "min_diff_valuation": min(_diff_valuations(nxt), default=ABOVE_PRECISION),
                "zero_coord_delta_valuation": (nxt.coords[0] - states[-1].coords[0]).valuation(),
                "ratio_delta_valuations": [
                    (a - b).valuation() for a, b in zip(new_ratios, ratios)
                ],
                "in_disc_g_plus_2": nxt.in_disc(g + 2),
            }
        )
        states.append(nxt)
        ratios = new_ratios
    return states, report


def projective_ratios(state: AgmState) -> list[PadicElement]:
    """The vector x_u / x_0; the zero coordinate must be a unit."""
    x0 = state.coords[0]
    if not x0.is_unit():
        raise NonUnitError("zero coordinate is not a unit")
    inv0 = x0.inv()
    return [c * inv0 for c in state.coords]


# ----------------------------------------------------------------------
# theta-coordinate side
# ----------------------------------------------------------------------

def level_descent_squares(point) -> list[PadicElement]:
    """The vector s_u = sum_v a_{u+v} a_v built from a level-2 vector.

    With unit scale these are the squares of the coordinates one level
    down; callers pair them with root extraction when walking a full
    sequence.
    """
    a = _coords_list(point)
    n = len(a)
    if n == 0 or n & (n - 1):
        raise InvalidInputError("length must be a power of two")
    prods = {}
    for i in range(n):
        for j in range(i, n):
            prods[(i, j)] = a[i] * a[j]
    out = []
    for u in range(n):
        acc = None
        for v in range(n):
            i, j = min(u ^ v, v), max(u ^ v, v)
            p = prods[(i, j)]
            acc = p if acc is None else acc + p
        out.append(acc)
    return out


def verify_descent_scale(a_n, a_np1) -> PadicElement:
    """The unit scale relating squares at one level to sums at the next.

    Solves a_n[0]^2 = scale * s_0 and checks the remaining equations at
    the available precision; raises :class:`RelationError` carrying the
    rank of the first violated equation.
    """
    an = _coords_list(a_n)
    s = level_descent_squares(a_np1)
    if len(an) != len(s):
        raise InvalidInputError("length mismatch")
    if not s[0].is_unit():
        raise NonUnitError("s_0 is not a unit; scale is undetermined")
    if not an[0].is_unit():
        raise NonUnitError("a_0 is not a unit")
    scale = an[0] * an[0] * s[0].inv()
    for u in range(len(an)):
        lhs = an[u] * an[u]
        rhs = scale * s[u]
        k = min(lhs.prec, rhs.prec)
        if not lhs.same_mod(rhs, k):
            raise RelationError(f"scale equation violated at index {u}", index=u)
    return scale


def bridge_to_agm(point) -> list[PadicElement]:
    """Entrywise square of the sign transform of a level-2 vector.

    Maps the neighborhood of (1, 0, ..., 0) to the neighborhood of
    (1, ..., 1) where the mean recursion lives.
    """
    y = hadamard_apply(_coords_list(point))
    return [c * c for c in y]


def random_descent_pair(
    field: PadicField, g: int, rng: Random, depth: int | None = None
) -> tuple[list[PadicElement], list[PadicElement]]:
    """A random pair of consecutive level-2 vectors with unit scale.

    Built from the transform side: pick y with entries in 1 + 2^(g+3) Z_q,
    pull back through the transform, run one mean step on y^2, and pull
    the root vector back.  Both pulls are exact divisions by 2^g.
    """
    if depth is None:
        depth = g + 3
    if depth < g + 3:
        raise InvalidInputError("depth below g+3 does not guarantee unit-scale pairs")
    n = 1 << g
    y = [field.disc_element(depth, rng) for _ in range(n)]
    a_n = [c.div_exact_by_2(g) for c in hadamard_apply(y)]
    sums = []
    for u in range(n):
        acc = None
        for v in range(n):
            p = y[u ^ v] * y[v]
            acc = p if acc is None else acc + p
        sums.append(acc.div_exact_by_2(g))
    y_next = [s.sqrt_unit() for s in sums]
    a_np1 = [c.div_exact_by_2(g) for c in hadamard_apply(y_next)]
    return a_n, a_np1


def transform_identities(a: Sequence[int], u: int, w: int) -> dict[str, tuple[int, int]]:
    """Both sides of the four exact transform identities over the integers.

    ``a`` is an integer vector of length 2^g, ``u`` and ``w`` are ranks.
    Each value is an (lhs, rhs) pair; the folded-mean sides divide their
    2^g factor exactly, so all entries are plain integers.
    """
    n = len(a)
    if n == 0 or n & (n - 1):
        raise InvalidInputError("length must be a power of two")
    g = n.bit_length() - 1
    y = hadamard_apply(list(a))

    def chi(s, t):
        return -1 if bin(s & t).count("1") & 1 else 1

    folded = [sum(y[uu ^ v] * y[v] for v in range(n)) for uu in range(n)]
    assert all(f % n == 0 for f in folded)
    mean_lhs = folded[u] // n
    mean_rhs = sum(chi(u, s) * a[s] * a[s] for s in range(n))

    sq_lhs = y[u] * y[u]
    sq_rhs = sum(chi(u, s ^ t) * a[s] * a[t] for s in range(n) for t in range(n))

    rec_sq_lhs = sum(chi(w, uu) * (folded[uu] // n) for uu in range(n))
    rec_sq_rhs = n * a[w] * a[w]

    rec_corr_lhs = sum(chi(w, uu) * y[uu] * y[uu] for uu in range(n))
    rec_corr_rhs = n * sum(a[s] * a[w ^ s] for s in range(n))

    return {
        "pair_mean_vs_char_sum": (mean_lhs, mean_rhs),
        "transform_square_vs_char_pair_sum": (sq_lhs, sq_rhs),
        "char_avg_recovers_square": (rec_sq_lhs, rec_sq_rhs),
        "char_avg_recovers_correlation": (rec_corr_lhs, rec_corr_rhs),
    }
