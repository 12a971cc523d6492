"""Integer lattices spanned by rational vectors, with Hermite normal form.

Membership, coordinates and residues are all exact.  Generators are scaled by
the common denominator so that every computation happens on Python ints.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .exact import Vector, det, vec


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def hermite_rows(rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int], list[list[int]]]:
    """Row-style Hermite normal form.

    Returns ``(H, pivots, U)`` where ``U`` is unimodular, ``U @ rows`` equals
    ``H`` stacked on zero rows, ``H`` is in echelon form with positive pivots
    and the entries above each pivot reduced into ``[0, pivot)``.
    """
    a = [list(map(int, r)) for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            b = a[i][c]
            if b == 0:
                continue
            p = a[r][c]
            g, x, y = xgcd(p, b)
            s, t = -b // g, p // g
            a[r], a[i] = ([x * e + y * f for e, f in zip(a[r], a[i])],
                          [s * e + t * f for e, f in zip(a[r], a[i])])
            u[r], u[i] = ([x * e + y * f for e, f in zip(u[r], u[i])],
                          [s * e + t * f for e, f in zip(u[r], u[i])])
        p = a[r][c]
        if p == 0:
            continue
        if p < 0:
            a[r] = [-e for e in a[r]]
            u[r] = [-e for e in u[r]]
            p = -p
        for i in range(r):
            q = a[i][c] // p
            if q:
                a[i] = [e - q * f for e, f in zip(a[i], a[r])]
                u[i] = [e - q * f for e, f in zip(u[i], u[r])]
        pivots.append(c)
        r += 1
    return a[:r], pivots, u


def integer_kernel(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Basis of the integer relations ``{c in Z^m : sum c_i rows[i] = 0}``."""
    h, _, u = hermite_rows(rows)
    return u[len(h):]


@dataclass(frozen=True)
class IntegerLattice:
    """The integer span of a finite set of rational vectors in Q^dim."""

    generators: tuple[Vector, ...]
    dim: int
    _denom: int = field(init=False, repr=False, compare=False)
    _hnf: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    _pivots: tuple[int, ...] = field(init=False, repr=False, compare=False)
    _transform: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        gens = tuple(vec(g) for g in self.generators)
        for g in gens:
            if len(g) != self.dim:
                raise ValueError(f"generator {g} does not have dimension {self.dim}")
        d = lcm(1, *(x.denominator for g in gens for x in g))
        ints = [[int(x * d) for x in g] for g in gens]
        h, piv, u = hermite_rows(ints) if ints else ([], [], [])
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "_denom", d)
        object.__setattr__(self, "_hnf", tuple(map(tuple, h)))
        object.__setattr__(self, "_pivots", tuple(piv))
        object.__setattr__(self, "_transform", tuple(map(tuple, u[:len(h)])))

    @classmethod
    def spanned_by(cls, vectors: Iterable[Iterable], dim: int | None = None) -> "IntegerLattice":
        gens = tuple(vec(v) for v in vectors)
        if dim is None:
            if not gens:
                raise ValueError("dimension required for an empty generating set")
            dim = len(gens[0])
        return cls(gens, dim)

    # -- normal form -----------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self._hnf)

    def basis(self) -> tuple[Vector, ...]:
        """Echelon (Hermite) basis, as rational vectors."""
        return tuple(tuple(Fraction(x, self._denom) for x in row) for row in self._hnf)

    def reduce(self, v: Sequence) -> tuple[tuple[int, ...], Vector]:
        """Reduce ``v`` modulo the lattice.

        Returns the integer coefficients of the subtracted Hermite basis
        vectors and the residue; ``v`` is a member iff the residue is zero.
        """
        v = vec(v)
        if len(v) != self.dim:
            raise ValueError(f"vector of dimension {len(v)} tested against lattice in dimension {self.dim}")
        w = [x * self._denom for x in v]
        coeffs = []
        for row, c in zip(self._hnf, self._pivots):
            q = w[c] // row[c]
            if q:
                w = [a - q * b for a, b in zip(w, row)]
            coeffs.append(q)
        return tuple(coeffs), tuple(x / self._denom for x in w)

    def __contains__(self, v) -> bool:
        return all(x == 0 for x in self.reduce(v)[1])

    def contains(self, v) -> bool:
        return v in self

    def residue(self, v) -> Vector:
        return self.reduce(v)[1]

    def coordinates(self, v) -> tuple[int, ...] | None:
        """Integer coefficients expressing ``v`` in the original generators."""
        coeffs, res = self.reduce(v)
        if any(x != 0 for x in res):
            return None
        out = [0] * len(self.generators)
        for q, urow in zip(coeffs, self._transform):
            if q:
                out = [a + q * b for a, b in zip(out, urow)]
        return tuple(out)

    # -- lattice relations -----------------------------------------------

    def contains_lattice(self, other: "IntegerLattice") -> bool:
        return all(g in self for g in other.generators)

    def same_as(self, other: "IntegerLattice") -> bool:
        # the rational Hermite basis is canonical for the lattice
        return self.dim == other.dim and self.basis() == other.basis()

    def index_in(self, larger: "IntegerLattice") -> int:
        """The index [larger : self]; both must have the same rank."""
        if not larger.contains_lattice(self):
            raise ValueError("lattice is not contained in the proposed superlattice")
        if larger.rank != self.rank:
            raise ValueError("index is infinite: ranks differ")
        rows = [larger.coordinates_in_basis(b) for b in self.basis()]
        return abs(int(det(rows))) if rows else 1

    def coordinates_in_basis(self, v) -> tuple[int, ...]:
        coeffs, res = self.reduce(v)
        if any(x != 0 for x in res):
            raise ValueError(f"{v} is not in the lattice")
        return coeffs

    def image(self, linear_map) -> "IntegerLattice":
        """Lattice spanned by the images of the generators under ``linear_map``."""
        gens = [linear_map(g) for g in self.generators]
        return IntegerLattice(tuple(gens), len(gens[0]) if gens else self.dim)

    def scaled(self, c) -> "IntegerLattice":
        c = Fraction(c)
        return IntegerLattice(tuple(tuple(c * x for x in g) for g in self.generators), self.dim)

    def intersect(self, other: "IntegerLattice") -> "IntegerLattice":
        """Intersection of two lattices in the same ambient space."""
        a, b = self.basis(), other.basis()
        if not a or not b:
            return IntegerLattice((), self.dim)
        d = lcm(1, *(x.denominator for g in a + b for x in g))
        rows = [[int(x * d) for x in g] for g in a] + [[int(-x * d) for x in g] for g in b]
        rel = integer_kernel(rows)
        gens = []
        for c in rel:
            gens.append(tuple(sum((ci * g[j] for ci, g in zip(c[:len(a)], a)), Fraction(0))
                              for j in range(self.dim)))
        return IntegerLattice(tuple(gens), self.dim)

    def __repr__(self) -> str:
        return f"IntegerLattice(rank={self.rank}, dim={self.dim}, basis={[list(map(str, b)) for b in self.basis()]})"


def lattice_membership(lattice: IntegerLattice, v) -> bool:
    """Exact test that ``v`` lies in the integer span of the lattice generators."""
    return lattice.contains(v)
