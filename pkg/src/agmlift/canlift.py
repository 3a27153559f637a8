"""Theta null coordinates of canonical lifts and their defining relations.

A level-2 theta null vector (a_u), u in (Z/2Z)^g, of a canonical lift
satisfies the twisted quadratic system

    a_u^2 = omega * sum_v sigma(a_{u+v}) sigma(a_v)

for a single unit scalar omega, where sigma is the Frobenius lift.  At
level 2^j with j >= 2 the analogous relations pair two free indices
with a sum over the embedded 2-torsion subgroup.

``lift_canonical`` solves the level-2 system to arbitrary 2-adic
precision, digit by digit.  The substitution a_0 = 1, a_u = 2 b_u turns
the system into one with a unit-triangular semilinear derivative: each
new digit of b solves a constant GF(2)-linear system whose matrix only
depends on the residue seed (it is probed once).  The mod-2 digit of b
is genuinely free and selects the branch; it is the caller-supplied
seed, and the all-zero seed (the degenerate branch through (1,0,...,0))
is rejected.

The tail of the module evaluates the classical invariants attached to a
level-2 vector: the Legendre invariant, the j-invariant, and the pair
of quadrics cutting out a genus-1 level-4 embedding.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .errors import (
    InexactDivisionError,
    InvalidInputError,
    LiftError,
    NonUnitError,
    PrecisionError,
)
from .padic import ABOVE_PRECISION, GF2Solver, PadicElement, PadicField
from .thetagrid import ThetaIndex


class ThetaPoint:
    """Theta null coordinates indexed by (Z/2^j Z)^g.

    Coordinates may be given as a mapping from index tuples or as a
    sequence in enumeration order.  Symmetry under negation of the
    index is required (theta null vectors of symmetric line bundles
    always have it) and checked on construction.
    """

    __slots__ = ("g", "j", "index", "coords", "normalized")

    def __init__(self, g: int, j: int, coords):
        self.g = g
        self.j = j
        self.index = ThetaIndex(g, j)
        if isinstance(coords, Mapping):
            table = {tuple(k): v for k, v in coords.items()}
        else:
            seq = list(coords)
            if len(seq) != self.index.size:
                raise InvalidInputError(
                    f"expected {self.index.size} coordinates, got {len(seq)}"
                )
            table = {self.index.unrank(i): v for i, v in enumerate(seq)}
        if set(table) != set(self.index.elements()):
            raise InvalidInputError("coordinate index set does not match the group")
        field = next(iter(table.values())).field
        if any(v.field != field for v in table.values()):
            raise InvalidInputError("coordinates live in different fields")
        for u in self.index.elements():
            nu = self.index.neg(u)
            if table[u] != table[nu]:
                raise InvalidInputError(f"coordinates must be symmetric: index {u}")
        self.coords = table
        one = field.one()
        self.normalized = table[self.index.unrank(0)] == one

    @property
    def field(self) -> PadicField:
        return self.coords[self.index.unrank(0)].field

    def __getitem__(self, u) -> PadicElement:
        if isinstance(u, int):
            u = self.index.unrank(u)
        return self.coords[tuple(u)]

    def coords_list(self) -> list[PadicElement]:
        return [self.coords[u] for u in self.index.elements()]

    def is_canonical_mod2(self) -> bool:
        """Reduction equals (1, 0, ..., 0): unit at 0, even elsewhere."""
        lst = self.coords_list()
        return lst[0].is_unit() and all(c.valuation() >= 1 for c in lst[1:])

    def frobenius(self, k: int = 1) -> "ThetaPoint":
        return ThetaPoint(self.g, self.j, [c.frobenius(k) for c in self.coords_list()])

    def to_json(self) -> list[list[str]]:
        return [c.to_json() for c in self.coords_list()]

    def __repr__(self):
        return f"ThetaPoint(g={self.g}, j={self.j}, d={self.field.d}, N={self.field.N})"


class LiftResult:
    """Output of :func:`lift_canonical`."""

    __slots__ = ("point", "omega", "precision_achieved", "residual_valuation")

    def __init__(self, point: ThetaPoint, omega: PadicElement,
                 precision_achieved: int, residual_valuation: int):
        self.point = point
        self.omega = omega
        self.precision_achieved = precision_achieved
        self.residual_valuation = residual_valuation

    def to_json(self) -> dict:
        f = self.point.field
        return {
            "g": self.point.g,
            "d": f.d,
            "N": f.N,
            "point": self.point.to_json(),
            "omega": self.omega.to_json(),
            "precision_achieved": self.precision_achieved,
            "residual_valuation": self.residual_valuation,
        }


# ----------------------------------------------------------------------
# relation residuals
# ----------------------------------------------------------------------

def residual_level2(point: ThetaPoint, omega: PadicElement) -> list[PadicElement]:
    """R_u = a_u^2 - omega * sum_v sigma(a_{u+v}) sigma(a_v), by rank."""
    if point.j != 1:
        raise InvalidInputError("level-2 residuals need a level-2 point")
    a = point.coords_list()
    n = len(a)
    sa = [c.frobenius() for c in a]
    out = []
    for u in range(n):
        acc = None
        for v in range(n):
            p = sa[u ^ v] * sa[v]
            acc = p if acc is None else acc + p
        out.append(a[u] * a[u] - omega * acc)
    return out


def residual_general(point: ThetaPoint, omega: PadicElement) -> dict:
    """Residuals of the two-index relations at level 2^j.

    For index pairs (u, v) the relation compares x_{u+v} x_{u-v} with
    omega times the 2-torsion-shifted sum of Frobenius conjugates.  The
    returned map carries one residual per orbit of (u, v) under swaps
    and negations, keyed by the orbit representative.
    """
    idx = point.index
    tors = idx.two_torsion()
    sx = {u: point.coords[u].frobenius() for u in idx.elements()}
    seen = set()
    out = {}
    for u in idx.elements():
        for v in idx.elements():
            orbit = []
            for s in (u, idx.neg(u)):
                for t in (v, idx.neg(v)):
                    orbit.append((idx.rank(s), idx.rank(t)))
                    orbit.append((idx.rank(t), idx.rank(s)))
            key = min(orbit)
            if key in seen:
                continue
            seen.add(key)
            lhs = point.coords[idx.add(u, v)] * point.coords[idx.sub(u, v)]
            acc = None
            for z in tors:
                p = sx[idx.add(u, z)] * sx[idx.add(v, z)]
                acc = p if acc is None else acc + p
            out[(idx.unrank(key[0]), idx.unrank(key[1]))] = lhs - omega * acc
    return out


def extract_omega(point: ThetaPoint) -> PadicElement:
    """Solve the zero-index relation for the unit scalar."""
    if point.j != 1:
        raise InvalidInputError("needs a level-2 point")
    a = point.coords_list()
    acc = None
    for c in a:
        s = c.frobenius()
        p = s * s
        acc = p if acc is None else acc + p
    if not acc.is_unit():
        raise NonUnitError("sum of conjugate squares is not a unit")
    return a[0] * a[0] * acc.inv()


# ----------------------------------------------------------------------
# the sigma-semilinear Hensel lifter
# ----------------------------------------------------------------------

def _omega_arg(field: PadicField, b: list[PadicElement]) -> PadicElement:
    acc = None
    for x in b:
        s = x.frobenius()
        p = s * s
        acc = p if acc is None else acc + p
    return field.one() + acc.shift_up(2)


def _refine_inv(a: PadicElement, warm: PadicElement | None) -> PadicElement:
    # Newton refinement of an inverse that is already correct on low digits
    if warm is None:
        return a.inv()
    field = a.field
    one = field.one()
    two = field.from_int(2)
    y = warm
    for _ in range(field.N.bit_length() + 2):
        e = a * y
        if e == one:
            return y
        y = y * (two - e)
    return a.inv()  # pragma: no cover


def _omega_of_b(field: PadicField, b: list[PadicElement],
                warm: PadicElement | None = None) -> PadicElement:
    return _refine_inv(_omega_arg(field, b), warm)


def _b_residuals(field: PadicField, b: list[PadicElement],
                 omega: PadicElement) -> list[PadicElement]:
    # G_u = b_u^2 - omega * (sigma(b_u) + sum_{v not in {0,u}} sigma(b_{u+v}) sigma(b_v))
    n = len(b) + 1
    sb = [x.frobenius() for x in b]

    def s_at(rank: int) -> PadicElement:
        return sb[rank - 1]

    out = []
    for u in range(1, n):
        acc = s_at(u)
        for v in range(1, n):
            if v == u:
                continue
            w = u ^ v
            if w == 0:
                continue
            acc = acc + s_at(w) * s_at(v)
        out.append(b[u - 1] * b[u - 1] - omega * acc)
    return out


def _digit_of(residuals: list[PadicElement], k: int, d: int) -> int:
    bits = 0
    pos = 0
    for r in residuals:
        for c in r.coeffs:
            if (c >> k) & 1:
                bits |= 1 << pos
            pos += 1
    return bits


def lift_canonical(g: int, field: PadicField, seed, target_N: int) -> LiftResult:
    """Canonical level-2 theta null vector from a residue seed.

    ``seed`` gives the mod-2 value of b_u for each nonzero index, as
    integer bitmasks in enumeration order (a bare int is accepted for
    g = 1).  The result is deterministic in the seed; the all-zero seed
    is rejected as degenerate.
    """
    if g < 1:
        raise InvalidInputError("need g >= 1")
    if isinstance(seed, int):
        seed = (seed,)
    seed = tuple(seed)
    n = 1 << g
    if len(seed) != n - 1:
        raise InvalidInputError(f"seed needs {n - 1} residues, got {len(seed)}")
    if any(s < 0 or s >= (1 << field.d) for s in seed):
        raise InvalidInputError("seed residues out of range")
    if all(s == 0 for s in seed):
        raise LiftError("degenerate seed: the branch through (1, 0, ..., 0)")
    if target_N < 1 or target_N > field.N:
        raise PrecisionError(f"target precision {target_N} outside 1..{field.N}")

    d = field.d
    dim = d * (n - 1)
    b = [field.embed_residue(s) for s in seed]

    # The digit-step matrix is constant across digits: probe it once at
    # the first digit and keep its GF(2) factorization.
    omega = _omega_of_b(field, b)
    base = _b_residuals(field, b, omega)
    cols = []
    for pos in range(dim):
        which, i = divmod(pos, d)
        shifted = list(b)
        shifted[which] = shifted[which] + field.element(
            [2 if ii == i else 0 for ii in range(d)]
        )
        om = _omega_of_b(field, shifted, warm=omega)
        probe = _b_residuals(field, shifted, om)
        delta = [(p - q) for p, q in zip(probe, base)]
        cols.append(_digit_of(delta, 1, d))
    solver = GF2Solver(cols, dim)
    if not solver.is_unique:
        raise LiftError(
            f"singular digit system at step 1 (rank {solver.rank} of {dim}); "
            "degenerate seed"
        )

    residuals = base
    for k in range(1, target_N):
        rhs = _digit_of(residuals, k, d)
        if rhs:
            eps = solver.solve(rhs)
            for which in range(n - 1):
                chunk = (eps >> (which * d)) & ((1 << d) - 1)
                if chunk:
                    b[which] = b[which] + field.embed_residue(chunk).shift_up(k)
        omega = _omega_of_b(field, b, warm=omega)
        residuals = _b_residuals(field, b, omega)
    coords = [field.one()] + [x.shift_up(1) for x in b]
    point = ThetaPoint(g, 1, coords)
    res = residual_level2(point, omega)
    vals = [r.valuation() for r in res]
    min_val = min(vals)
    if min_val is not ABOVE_PRECISION and min_val < target_N:
        raise LiftError(
            f"lift verification failed: residual valuation {min_val} < {target_N}"
        )  # pragma: no cover
    if not point.is_canonical_mod2():  # pragma: no cover
        raise LiftError("lifted point does not reduce to (1, 0, ..., 0)")
    reported = field.N if min_val is ABOVE_PRECISION else int(min_val)
    return LiftResult(point, omega, target_N, reported)


# ----------------------------------------------------------------------
# classical invariants
# ----------------------------------------------------------------------

def lambda_invariant(a0: PadicElement, a1: PadicElement) -> PadicElement:
    """Legendre invariant of the curve attached to a level-2 pair."""
    num = a0 * a0 - a1 * a1
    den = a0 * a0 + a1 * a1
    if not den.is_unit():
        raise NonUnitError("a0^2 + a1^2 is not a unit")
    r = num * den.inv()
    return r * r


def j_from_lambda(lam: PadicElement) -> PadicElement:
    """Classical j = 256 (l^2 - l + 1)^3 / (l (l - 1))^2 with exact 2-bookkeeping."""
    field = lam.field
    one = field.one()
    num = (lam * lam - lam + one) ** 3 * 256
    den = lam * (lam - one)
    den = den * den
    v = den.valuation()
    if v is ABOVE_PRECISION or v >= den.prec:
        raise PrecisionError("lambda (lambda - 1) vanishes at the available precision")
    v = int(v)
    if num.valuation() is not ABOVE_PRECISION and num.valuation() < v:
        raise InexactDivisionError("numerator valuation below denominator valuation")
    num_r = num.div_exact_by_2(v)
    den_r = den.div_exact_by_2(v)
    if not den_r.is_unit():
        raise PrecisionError("denominator still non-unit after scaling")
    return num_r * den_r.inv()


def mumford_quadric_check(point: ThetaPoint) -> dict:
    """Denominator-cleared quadric residuals of a level-4, g = 1 vector.

    Returns the two residual valuations and a flag saying whether both
    vanish at the precision they carry.
    """
    if point.g != 1 or point.j != 2:
        raise InvalidInputError("check applies to level-4 vectors of dimension 1")
    x0, x1, x2, x3 = point.coords_list()
    lam_num = x1 * x1
    lam_den = x0 * x2
    q1 = (x1 * x1 + x3 * x3) * lam_den - (lam_num * x0 * x2).shift_up(1)
    q2 = (x0 * x0 + x2 * x2) * lam_den - (lam_num * x1 * x3).shift_up(1)
    v1, v2 = q1.valuation(), q2.valuation()
    ok = (v1 is ABOVE_PRECISION or v1 >= q1.prec) and (
        v2 is ABOVE_PRECISION or v2 >= q2.prec
    )
    return {"residual_valuations": (v1, v2), "passed": ok}
