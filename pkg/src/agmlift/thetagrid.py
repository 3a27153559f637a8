"""Index groups (Z/2^j Z)^g, sign characters, and the +-1 transform.

Group elements are tuples of length g with entries modulo 2^j.  The
enumeration order is fixed forever: rank(u) = sum_i u_i * (2^j)^i, the
first coordinate varying fastest.  For level two (j = 1) the rank is the
bitmask of the tuple and index addition is XOR, which the hot paths use
directly.

The transform matrix has entries (-1)^(u.v) for 2-torsion indices u, v.
It is never materialized for transforms: ``hadamard_apply`` runs the
in-place butterfly in O(g 2^g) ring operations.  The matrix itself (and
its exact integer determinant) is only built for small g.
"""

from __future__ import annotations

from typing import Sequence

from .errors import InvalidInputError


class ThetaIndex:
    """The abelian group (Z/2^j Z)^g with its fixed enumeration."""

    def __init__(self, g: int, j: int = 1):
        if g < 1 or j < 1:
            raise InvalidInputError("need g >= 1 and j >= 1")
        self.g = g
        self.j = j
        self.level = 1 << j
        self.size = self.level ** g

    def elements(self) -> list[tuple[int, ...]]:
        return [self.unrank(i) for i in range(self.size)]

    def rank(self, u: Sequence[int]) -> int:
        r = 0
        for i in reversed(range(self.g)):
            r = r * self.level + (u[i] % self.level)
        return r

    def unrank(self, i: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.g):
            out.append(i % self.level)
            i //= self.level
        return tuple(out)

    def add(self, u, v) -> tuple[int, ...]:
        return tuple((a + b) % self.level for a, b in zip(u, v))

    def sub(self, u, v) -> tuple[int, ...]:
        return tuple((a - b) % self.level for a, b in zip(u, v))

    def neg(self, u) -> tuple[int, ...]:
        return tuple((-a) % self.level for a in u)

    def double(self, u) -> tuple[int, ...]:
        return tuple((2 * a) % self.level for a in u)

    def two_torsion(self) -> list[tuple[int, ...]]:
        """The 2-torsion subgroup, embedded as (level/2) * (Z/2Z)^g."""
        half = self.level >> 1
        sub = ThetaIndex(self.g, 1)
        return [tuple(half * b for b in w) for w in sub.elements()]

    def __repr__(self):
        return f"ThetaIndex(g={self.g}, j={self.j})"


def character(u: Sequence[int], v: Sequence[int]) -> int:
    """Sign character of 2-torsion indices: product of (-1)^(u_i v_i)."""
    if len(u) != len(v):
        raise InvalidInputError("index length mismatch")
    s = 0
    for a, b in zip(u, v):
        if a not in (0, 1) or b not in (0, 1):
            raise InvalidInputError("character is defined on 2-torsion indices")
        s ^= a & b
    return -1 if s else 1


def hadamard_apply(values: Sequence) -> list:
    """Butterfly transform y_u = sum_v (-1)^(u.v) a_v over any ring.

    ``values`` has length 2^g indexed by rank; entries may be integers
    or ring elements supporting + and -.
    """
    n = len(values)
    if n == 0 or n & (n - 1):
        raise InvalidInputError("length must be a power of two")
    out = list(values)
    h = 1
    while h < n:
        for start in range(0, n, 2 * h):
            for i in range(start, start + h):
                a, b = out[i], out[i + h]
                out[i] = a + b
                out[i + h] = a - b
        h *= 2
    return out


def character_matrix(g: int) -> list[list[int]]:
    """The 2^g x 2^g matrix of character values, in enumeration order."""
    n = 1 << g
    return [[-1 if bin(u & v).count("1") & 1 else 1 for v in range(n)] for u in range(n)]


def character_matrix_det(g: int) -> int:
    """Exact integer determinant via fraction-free Bareiss elimination."""
    m = [row[:] for row in character_matrix(g)]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k]:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for jj in range(k + 1, n):
                m[i][jj] = (m[i][jj] * m[k][k] - m[i][k] * m[k][jj]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]
