"""Exact arithmetic in unramified extensions of the 2-adic integers.

A field object represents Z_q = Z_2[t]/(f) with q = 2^d, truncated to
absolute precision 2^N.  Elements are coefficient vectors in the basis
1, t, ..., t^(d-1) with coefficients reduced modulo 2^N.  On top of the
plain ring operations the module provides

* the Frobenius lift ``sigma`` (the unique ring automorphism reducing to
  squaring on the residue field), computed once per field by Newton
  iteration on the defining polynomial and applied as a linear map;
* canonical square roots of units congruent 1 modulo 8, normalized to
  be congruent 1 modulo 4;
* valuations, norms, and exact division by powers of two.

Every element carries a per-value tag ``prec`` of guaranteed digits in
addition to the field-wide nominal precision N.  Square roots and exact
divisions lower the tag; composite algorithms check it and raise
``PrecisionError`` instead of returning silently wrong digits.

Residue-field elements (of F_q = GF(2^d)) are passed around as plain
integer bitmasks, bit i being the coefficient of t^i.
"""

from __future__ import annotations

import math
from random import Random
from typing import Iterable, Optional, Sequence

from .errors import (
    FieldMismatchError,
    InexactDivisionError,
    InvalidInputError,
    NonUnitError,
    NotASquareError,
    PrecisionError,
)

#: Returned by valuations of values that vanish at working precision.
ABOVE_PRECISION = math.inf


# ----------------------------------------------------------------------
# polynomials over GF(2), represented as integer bitmasks
# ----------------------------------------------------------------------

def gf2_degree(a: int) -> int:
    return a.bit_length() - 1


def gf2_mul(a: int, b: int) -> int:
    """Carry-less product of two GF(2)[x] bitmasks."""
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        a <<= 1
        b >>= 1
    return acc


def gf2_mod(a: int, m: int) -> int:
    """Remainder of a modulo m in GF(2)[x], m != 0."""
    dm = gf2_degree(m)
    da = gf2_degree(a)
    while da >= dm >= 0 and a:
        a ^= m << (da - dm)
        da = gf2_degree(a)
    return a


def gf2_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, gf2_mod(a, b)
    return a


def gf2_xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended gcd: returns (g, s, t) with s*a + t*b = g over GF(2)."""
    r0, r1 = a, b
    s0, s1 = 1, 0
    t0, t1 = 0, 1
    while r1:
        d = gf2_degree(r0) - gf2_degree(r1)
        if d < 0:
            r0, r1, s0, s1, t0, t1 = r1, r0, s1, s0, t1, t0
            continue
        r0 ^= r1 << d
        s0 ^= gf2_mul(s1, 1 << d)
        t0 ^= gf2_mul(t1, 1 << d)
    return r0, s0, t0


def _gf2_sqr_mod(a: int, m: int) -> int:
    # squaring spreads the bits of a
    out = 0
    i = 0
    while a:
        if a & 1:
            out |= 1 << (2 * i)
        a >>= 1
        i += 1
    return gf2_mod(out, m)


def gf2_is_irreducible(f: int, d: int) -> bool:
    """Rabin irreducibility test for a degree-d bitmask polynomial."""
    if gf2_degree(f) != d:
        return False
    if d == 1:
        return True
    # x^(2^d) == x mod f
    h = 2  # the polynomial x
    for _ in range(d):
        h = _gf2_sqr_mod(h, f)
    if h != gf2_mod(2, f):
        return False
    # gcd(x^(2^(d/r)) - x, f) == 1 for every prime r | d
    for r in _prime_divisors(d):
        h = 2
        for _ in range(d // r):
            h = _gf2_sqr_mod(h, f)
        if gf2_gcd(h ^ gf2_mod(2, f), f) != 1:
            return False
    return True


def _prime_divisors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


class GF2Solver:
    """Solve M x = b over GF(2) for a fixed matrix and many right sides.

    The matrix is given column-wise as integer bitmasks over ``dim``
    rows.  Row operations are tracked so each right side only costs a
    handful of parity computations.
    """

    def __init__(self, cols: Sequence[int], dim: int):
        self.ncols = len(cols)
        self.dim = dim
        rows = []
        for r in range(dim):
            mask = 0
            for c, col in enumerate(cols):
                if (col >> r) & 1:
                    mask |= 1 << c
            rows.append((mask, 1 << r))
        pivots: list[tuple[int, int, int]] = []  # (pivot col, row mask, op mask)
        zero_ops: list[int] = []
        for mask, op in rows:
            for pc, pm, pop in pivots:
                if (mask >> pc) & 1:
                    mask ^= pm
                    op ^= pop
            if mask == 0:
                zero_ops.append(op)
                continue
            pc = (mask & -mask).bit_length() - 1
            pivots = [
                (qc, qm ^ mask, qop ^ op) if (qm >> pc) & 1 else (qc, qm, qop)
                for qc, qm, qop in pivots
            ]
            pivots.append((pc, mask, op))
        self._pivots = pivots
        self._zero_ops = zero_ops
        self.rank = len(pivots)

    @property
    def is_unique(self) -> bool:
        return self.rank == self.ncols

    def solve(self, rhs: int) -> int:
        """A solution bitmask over columns; raises on inconsistency."""
        for op in self._zero_ops:
            if (op & rhs).bit_count() & 1:
                raise InvalidInputError("inconsistent GF(2) system")
        x = 0
        for pc, _, op in self._pivots:
            if (op & rhs).bit_count() & 1:
                x |= 1 << pc
        return x


def default_modulus(d: int) -> int:
    """First irreducible monic degree-d bitmask in ascending encoding.

    The search order (integer value of the low d coefficient bits) is
    part of the serialization contract and must never change.
    """
    for low in range(1 << d):
        f = (1 << d) | low
        if gf2_is_irreducible(f, d):
            return f
    raise InvalidInputError(f"no irreducible polynomial of degree {d}")  # pragma: no cover


# ----------------------------------------------------------------------
# the coefficient ring
# ----------------------------------------------------------------------

class PadicField:
    """Z_2[t]/(f) truncated to absolute precision 2^N.

    ``f`` may be given as a GF(2) bitmask (lifted verbatim) or as a
    sequence of d+1 integer coefficients, constant term first.  When
    omitted, the deterministic :func:`default_modulus` of degree d is
    used.  The instance is immutable after construction and safe to
    share between threads.
    """

    def __init__(self, d: int, N: int, f: Optional[int | Sequence[int]] = None):
        if d < 1:
            raise InvalidInputError("extension degree d must be >= 1")
        if N < 1:
            raise InvalidInputError("precision N must be >= 1")
        self.d = d
        self.N = N
        self.mask = (1 << N) - 1
        if f is None:
            f = default_modulus(d)
        if isinstance(f, int):
            fcoeffs = [(f >> i) & 1 for i in range(d + 1)]
        else:
            fcoeffs = [c % (1 << N) for c in f]
        if len(fcoeffs) != d + 1 or fcoeffs[d] != 1:
            raise InvalidInputError("f must be monic of degree d")
        fbits = 0
        for i, c in enumerate(fcoeffs):
            fbits |= (c & 1) << i
        if not gf2_is_irreducible(fbits, d):
            raise InvalidInputError("f is reducible modulo 2")
        self.f_lift = tuple(fcoeffs)
        self.f_bits = fbits
        # reduction table: t^(d+k) mod f as a coefficient vector
        self._red = self._reduction_table()
        self._sigma_basis: dict[int, tuple[tuple[int, ...], ...]] = {}
        self.sigma_image = self._compute_sigma_image()
        self._install_sigma_basis()
        self._check_field_invariants()

    # -- raw vector arithmetic (coefficient tuples) --------------------

    def _reduction_table(self) -> tuple[tuple[int, ...], ...]:
        d, mask = self.d, self.mask
        rows = []
        # t^d = -sum f_i t^i
        cur = [(-self.f_lift[i]) & mask for i in range(d)]
        rows.append(tuple(cur))
        for _ in range(d - 2):
            top = cur[d - 1]
            cur = [0] + cur[:-1]
            if top:
                cur = [(cur[i] + top * rows[0][i]) & mask for i in range(d)]
            rows.append(tuple(cur))
        return tuple(rows)

    def _mulvec(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        d, mask = self.d, self.mask
        if d == 1:
            return ((a[0] * b[0]) & mask,)
        prod = [0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
        out = [c & mask for c in prod[:d]]
        for k in range(d - 1):
            top = prod[d + k] & mask
            if top:
                row = self._red[k]
                out = [(out[i] + top * row[i]) & mask for i in range(d)]
        return tuple(out)

    def _addvec(self, a, b):
        mask = self.mask
        return tuple((x + y) & mask for x, y in zip(a, b))

    def _subvec(self, a, b):
        mask = self.mask
        return tuple((x - y) & mask for x, y in zip(a, b))

    def _eval_poly(self, coeffs: Sequence[int], x: Sequence[int]) -> tuple[int, ...]:
        # Horner evaluation of an integer-coefficient polynomial
        mask = self.mask
        acc = (0,) * self.d
        for c in reversed(list(coeffs)):
            acc = self._mulvec(acc, x)
            acc = tuple((v + c if i == 0 else v) & mask for i, v in enumerate(acc))
            acc = (acc[0] & mask,) + acc[1:]
        return acc

    def _invvec(self, a: Sequence[int]) -> tuple[int, ...]:
        bits = 0
        for i, c in enumerate(a):
            bits |= (c & 1) << i
        if bits == 0:
            raise NonUnitError("inverse of a non-unit")
        g, s, _ = gf2_xgcd(bits, self.f_bits)
        assert g == 1
        y = tuple((s >> i) & 1 for i in range(self.d))
        # Newton lift of the residue inverse: y <- y(2 - a y)
        two = tuple(2 if i == 0 else 0 for i in range(self.d))
        steps = max(1, (self.N - 1).bit_length())
        for _ in range(steps):
            y = self._mulvec(y, self._subvec(two, self._mulvec(a, y)))
        return y

    # -- Frobenius ------------------------------------------------------

    def _compute_sigma_image(self) -> tuple[int, ...]:
        d = self.d
        # Newton iteration on f, seeded with the residue root t^2
        s = self._eval_poly([0, 0, 1], tuple(1 if i == 1 else 0 for i in range(d)))
        fprime = [(i * self.f_lift[i]) for i in range(1, d + 1)]
        steps = max(1, (self.N - 1).bit_length()) + 1
        for _ in range(steps):
            fs = self._eval_poly(self.f_lift, s)
            dfs = self._eval_poly(fprime, s)
            s = self._subvec(s, self._mulvec(fs, self._invvec(dfs)))
        if any(self._eval_poly(self.f_lift, s)):
            raise InvalidInputError("Newton iteration for the Frobenius lift failed")  # pragma: no cover
        return s

    def _install_sigma_basis(self):
        d = self.d
        one = tuple(1 if i == 0 else 0 for i in range(d))
        imgs = [one]
        for _ in range(d - 1):
            imgs.append(self._mulvec(imgs[-1], self.sigma_image))
        self._sigma_basis[1] = tuple(imgs)

    def _sigma_k_basis(self, k: int) -> tuple[tuple[int, ...], ...]:
        k %= self.d
        if k == 0:
            return tuple(tuple(1 if i == j else 0 for i in range(self.d)) for j in range(self.d))
        if k not in self._sigma_basis:
            prev = self._sigma_k_basis(k - 1)
            self._sigma_basis[k] = tuple(self._apply_sigma_basis(v, 1) for v in prev)
        return self._sigma_basis[k]

    def _apply_sigma_basis(self, a: Sequence[int], k: int) -> tuple[int, ...]:
        basis = self._sigma_basis[1] if k == 1 else self._sigma_k_basis(k)
        mask = self.mask
        out = [0] * self.d
        for i, ai in enumerate(a):
            if not ai:
                continue
            row = basis[i]
            for j in range(self.d):
                if row[j]:
                    out[j] = (out[j] + ai * row[j]) & mask
        return tuple(out)

    def _check_field_invariants(self):
        gen = tuple(1 if i == 1 else 0 for i in range(self.d))
        v = gen
        for _ in range(self.d):
            v = self._apply_sigma_basis(v, 1)
        if v != gen:
            raise InvalidInputError("sigma^d is not the identity")  # pragma: no cover
        tsq = self._eval_poly([0, 0, 1], gen)
        if tuple(c & 1 for c in self.sigma_image) != tuple(c & 1 for c in tsq):
            raise InvalidInputError("sigma does not reduce to squaring")  # pragma: no cover

    # -- element constructors -------------------------------------------

    def element(self, coeffs: Iterable[int], prec: Optional[int] = None) -> "PadicElement":
        cs = [c & self.mask for c in coeffs]
        if len(cs) > self.d:
            raise InvalidInputError("too many coefficients")
        cs += [0] * (self.d - len(cs))
        return PadicElement(self, tuple(cs), self.N if prec is None else prec)

    def from_int(self, n: int, prec: Optional[int] = None) -> "PadicElement":
        return self.element([n], prec)

    def zero(self) -> "PadicElement":
        return self.from_int(0)

    def one(self) -> "PadicElement":
        return self.from_int(1)

    def gen(self) -> "PadicElement":
        return self.element([0, 1])

    def embed_residue(self, bits: int) -> "PadicElement":
        """Naive lift of an F_q element: 0/1 coefficients verbatim."""
        return self.element([(bits >> i) & 1 for i in range(self.d)])

    def random_element(self, rng: Random, prec: Optional[int] = None) -> "PadicElement":
        return self.element([rng.randrange(1 << self.N) for _ in range(self.d)], prec)

    def random_unit(self, rng: Random) -> "PadicElement":
        while True:
            x = self.random_element(rng)
            if x.is_unit():
                return x

    def disc_element(self, k: int, rng: Random) -> "PadicElement":
        """Random element of 1 + 2^k Z_q."""
        x = self.random_element(rng)
        return self.one() + x.shift_up(k)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "N": self.N,
            "f": format(self.f_bits, "x"),
            "f_lift": [format(c, "x") for c in self.f_lift],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "PadicField":
        f = [int(c, 16) for c in doc["f_lift"]] if "f_lift" in doc else int(doc["f"], 16)
        return cls(int(doc["d"]), int(doc["N"]), f)

    def element_from_json(self, doc: Sequence[str], prec: Optional[int] = None) -> "PadicElement":
        return self.element([int(c, 16) for c in doc], prec)

    # -- comparisons -------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, PadicField)
            and self.d == other.d
            and self.N == other.N
            and self.f_lift == other.f_lift
        )

    def __hash__(self):
        return hash((self.d, self.N, self.f_lift))

    def __repr__(self):
        return f"PadicField(d={self.d}, N={self.N}, f_bits={self.f_bits:#x})"


class PadicElement:
    """One element of a :class:`PadicField`, immutable by convention."""

    __slots__ = ("field", "coeffs", "prec")

    def __init__(self, field: PadicField, coeffs: tuple[int, ...], prec: int):
        self.field = field
        self.coeffs = coeffs
        self.prec = min(prec, field.N)

    # -- helpers --

    def _coerce(self, other) -> "PadicElement":
        if isinstance(other, PadicElement):
            if other.field != self.field:
                raise FieldMismatchError("elements of different fields")
            return other
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented  # type: ignore[return-value]

    def _with(self, coeffs, prec) -> "PadicElement":
        return PadicElement(self.field, coeffs, prec)

    # -- ring operations --

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._with(self.field._addvec(self.coeffs, o.coeffs), min(self.prec, o.prec))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._with(self.field._subvec(self.coeffs, o.coeffs), min(self.prec, o.prec))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._with(self.field._mulvec(self.coeffs, o.coeffs), min(self.prec, o.prec))

    __rmul__ = __mul__

    def __neg__(self):
        mask = self.field.mask
        return self._with(tuple((-c) & mask for c in self.coeffs), self.prec)

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        acc = PadicElement(self.field, self.field.one().coeffs, self.prec)
        base = self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.from_int(other)
        return (
            isinstance(other, PadicElement)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        return f"PadicElement({list(self.coeffs)}, d={self.field.d}, N={self.field.N}, prec={self.prec})"

    # -- structure maps --

    def frobenius(self, k: int = 1) -> "PadicElement":
        """Apply the Frobenius lift k times (k may be negative)."""
        k %= self.field.d
        if k == 0:
            return self
        return self._with(self.field._apply_sigma_basis(self.coeffs, k), self.prec)

    def norm(self) -> "PadicElement":
        """Product of all Frobenius conjugates; lands on the Z_2 line."""
        acc = self
        conj = self
        for _ in range(self.field.d - 1):
            conj = conj.frobenius()
            acc = acc * conj
        return acc

    def trace_vector(self) -> "PadicElement":
        acc = self
        conj = self
        for _ in range(self.field.d - 1):
            conj = conj.frobenius()
            acc = acc + conj
        return acc

    # -- valuation and units --

    def valuation(self):
        """Largest k <= N dividing every coefficient, ABOVE_PRECISION at 0."""
        v = self.field.N
        for c in self.coeffs:
            if c:
                w = (c & -c).bit_length() - 1
                if w < v:
                    v = w
                    if v == 0:
                        return 0
        if all(c == 0 for c in self.coeffs):
            return ABOVE_PRECISION
        return v

    def is_unit(self) -> bool:
        return any(c & 1 for c in self.coeffs)

    def is_zero_mod(self, k: int) -> bool:
        v = self.valuation()
        return v is ABOVE_PRECISION or v >= k

    def same_mod(self, other, k: int) -> bool:
        o = self._coerce(other)
        return (self - o).is_zero_mod(k)

    def reduce_residue(self) -> int:
        """Image in F_q as an integer bitmask."""
        bits = 0
        for i, c in enumerate(self.coeffs):
            bits |= (c & 1) << i
        return bits

    # -- division-like operations --

    def inv(self) -> "PadicElement":
        if not self.is_unit():
            raise NonUnitError("inverse of a non-unit")
        return self._with(self.field._invvec(self.coeffs), self.prec)

    def shift_up(self, k: int) -> "PadicElement":
        """Multiply by 2^k."""
        mask = self.field.mask
        return self._with(tuple((c << k) & mask for c in self.coeffs), min(self.prec + k, self.field.N))

    def div_exact_by_2(self, k: int) -> "PadicElement":
        """Exact division by 2^k; the result carries k fewer guaranteed digits."""
        if k == 0:
            return self
        if k < 0:
            return self.shift_up(-k)
        if self.prec <= k:
            raise PrecisionError(f"dividing by 2^{k} with only {self.prec} guaranteed digits")
        low = (1 << k) - 1
        if any(c & low for c in self.coeffs):
            raise InexactDivisionError(f"valuation below {k}")
        return self._with(tuple(c >> k for c in self.coeffs), self.prec - k)

    def sqrt_unit(self) -> "PadicElement":
        """Square root of x = 1 mod 8, normalized to be = 1 mod 4.

        Newton iteration for the inverse square root (division-free);
        the result is guaranteed to one digit less than the input.
        """
        if self.prec < 4:
            raise PrecisionError("need at least 4 guaranteed digits for a square root")
        if not (self.coeffs[0] & 7 == 1 and all(c & 7 == 0 for c in self.coeffs[1:])):
            raise NotASquareError("square roots exist only for units = 1 mod 8")
        field = self.field
        target = self.prec
        z = field.one()
        three = field.from_int(3)
        err = self * z * z - field.one()
        guard = 0
        while not err.is_zero_mod(target):
            z = (z * (three - self * z * z)).div_exact_by_2(1)
            err = self * z * z - field.one()
            guard += 1
            if guard > field.N + 4:  # pragma: no cover
                raise PrecisionError("square-root iteration failed to converge")
        y = self * z
        if y.coeffs[0] & 3 != 1:
            y = -y
        # canonical representative: drop digits beyond the guaranteed tag
        lowmask = (1 << (self.prec - 1)) - 1
        return self._with(tuple(c & lowmask for c in y.coeffs), self.prec - 1)

    # -- serialization --

    def to_json(self) -> list[str]:
        return [format(c, "x") for c in self.coeffs]


def newton_root(field: PadicField, coeffs: Sequence[int], seed) -> PadicElement:
    """Root of an integer polynomial by Newton iteration from a simple seed.

    ``coeffs`` lists the coefficients constant term first.  The seed (an
    element, an integer, or a residue bitmask) must satisfy the usual
    Hensel condition: the derivative at the seed is a unit and the seed
    is closer to a root than the square of the derivative defect.
    """
    if isinstance(seed, PadicElement):
        x = seed
    elif isinstance(seed, int):
        x = field.from_int(seed)
    else:
        raise InvalidInputError("seed must be an element or an integer")
    deriv = [i * coeffs[i] for i in range(1, len(coeffs))]
    for _ in range(field.N + 2):
        fx = field._eval_poly(coeffs, x.coeffs)
        if all(c == 0 for c in fx):
            return field.element(x.coeffs)
        dfx = field.element(field._eval_poly(deriv, x.coeffs))
        if not dfx.is_unit():
            raise NonUnitError("derivative at the seed is not a unit")
        x = x - field.element(fx) * dfx.inv()
    fx = field._eval_poly(coeffs, x.coeffs)
    if any(fx):
        raise PrecisionError("Newton iteration did not reach working precision")
    return field.element(x.coeffs)
