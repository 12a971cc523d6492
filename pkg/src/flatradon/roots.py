"""Exact root systems: simple roots, positive roots, Weyl reflections, weights.

Classical series use orthogonal coordinates (type A lives in the sum-zero
hyperplane of Q^(n+1)); exceptional series use the simple-root basis with
the symmetrized Cartan matrix as Gram matrix.  Long roots have squared
length 2.  Every number here is a ``Fraction``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from . import exact as ex
from .exact import Matrix, Vector
from .lattice import IntegerLattice

Weight = Vector

_EXCEPTIONAL_CARTAN = {
    ("E", 6): [[2, 0, -1, 0, 0, 0], [0, 2, 0, -1, 0, 0], [-1, 0, 2, -1, 0, 0],
               [0, -1, -1, 2, -1, 0], [0, 0, 0, -1, 2, -1], [0, 0, 0, 0, -1, 2]],
    ("E", 7): [[2, 0, -1, 0, 0, 0, 0], [0, 2, 0, -1, 0, 0, 0], [-1, 0, 2, -1, 0, 0, 0],
               [0, -1, -1, 2, -1, 0, 0], [0, 0, 0, -1, 2, -1, 0], [0, 0, 0, 0, -1, 2, -1],
               [0, 0, 0, 0, 0, -1, 2]],
    ("E", 8): [[2, 0, -1, 0, 0, 0, 0, 0], [0, 2, 0, -1, 0, 0, 0, 0], [-1, 0, 2, -1, 0, 0, 0, 0],
               [0, -1, -1, 2, -1, 0, 0, 0], [0, 0, 0, -1, 2, -1, 0, 0], [0, 0, 0, 0, -1, 2, -1, 0],
               [0, 0, 0, 0, 0, -1, 2, -1], [0, 0, 0, 0, 0, 0, -1, 2]],
    ("F", 4): [[2, -1, 0, 0], [-1, 2, -2, 0], [0, -1, 2, -1], [0, 0, -1, 2]],
    ("G", 2): [[2, -1], [-3, 2]],
}
# squared lengths of the simple roots, long roots normalized to 2
_EXCEPTIONAL_LENGTHS = {
    ("F", 4): [2, 2, 1, 1],
    ("G", 2): [Fraction(2, 3), 2],
}

POSITIVE_ROOT_COUNT = {
    "A": lambda n: n * (n + 1) // 2,
    "B": lambda n: n * n,
    "C": lambda n: n * n,
    "D": lambda n: n * (n - 1),
    "E": lambda n: {6: 36, 7: 63, 8: 120}[n],
    "F": lambda n: 24,
    "G": lambda n: 6,
}


@dataclass(frozen=True)
class RootSystem:
    """A reduced root system realized in Q^dim with an explicit Gram matrix.

    ``positive_roots`` and ``fundamental`` are computed once at construction
    and never mutated afterwards.
    """

    label: str
    simple_roots: tuple[Vector, ...]
    gram: Matrix
    cartan: tuple[tuple[int, ...], ...]
    positive_roots: tuple[Vector, ...]
    fundamental: tuple[Vector, ...]

    @property
    def rank(self) -> int:
        return len(self.simple_roots)

    @property
    def dim(self) -> int:
        return len(self.gram)

    @property
    def roots(self) -> tuple[Vector, ...]:
        return self.positive_roots + tuple(ex.neg(a) for a in self.positive_roots)

    def inner(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
        return ex.dot(u, ex.matvec(self.gram, v))

    def pairing(self, lam: Sequence[Fraction], beta: Sequence[Fraction]) -> Fraction:
        """<lam, beta> = 2 (lam, beta) / (beta, beta)."""
        bb = self.inner(beta, beta)
        if bb == 0:
            raise ValueError("pairing against the zero vector")
        return 2 * self.inner(lam, beta) / bb

    def reflect(self, lam: Sequence[Fraction], beta: Sequence[Fraction]) -> Vector:
        c = self.pairing(lam, beta)
        return tuple(x - c * b for x, b in zip(lam, beta))

    def is_dominant(self, lam: Sequence[Fraction]) -> bool:
        return all(self.inner(lam, a) >= 0 for a in self.simple_roots)

    def is_integral(self, lam: Sequence[Fraction]) -> bool:
        """Algebraic integrality: <lam, alpha_i> is an integer for every simple root."""
        return all(self.pairing(lam, a).denominator == 1 for a in self.simple_roots)

    def in_span(self, v: Sequence[Fraction]) -> bool:
        return ex.rank(list(self.simple_roots) + [tuple(v)]) == self.rank

    # -- coordinates ---------------------------------------------------

    def to_fundamental(self, lam: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """Coordinates in the fundamental-weight basis (the Dynkin labels)."""
        return tuple(self.pairing(lam, a) for a in self.simple_roots)

    def from_fundamental(self, coords: Iterable) -> Weight:
        coords = ex.vec(coords)
        if len(coords) != self.rank:
            raise ValueError(f"expected {self.rank} fundamental-weight coordinates, got {len(coords)}")
        out = ex.zeros(self.dim)
        for c, w in zip(coords, self.fundamental):
            out = ex.add(out, ex.scale(c, w))
        return out

    def to_simple_root_coords(self, lam: Sequence[Fraction]) -> tuple[Fraction, ...]:
        x = ex.solve(ex.transpose(self.simple_roots), lam)
        if x is None:
            raise ValueError(f"{lam} is not in the span of the roots")
        return x

    def root_lattice(self) -> IntegerLattice:
        return IntegerLattice(self.simple_roots, self.dim)

    def weight_lattice(self) -> IntegerLattice:
        return IntegerLattice(self.fundamental, self.dim)

    def rescaled(self, factor) -> "RootSystem":
        """Same system with the Gram matrix multiplied by ``factor`` > 0."""
        f = ex.frac(factor)
        if f <= 0:
            raise ValueError("rescaling factor must be positive")
        return replace(self, gram=tuple(tuple(f * x for x in row) for row in self.gram))

    def highest_root(self) -> Vector:
        return max(self.positive_roots, key=lambda a: sum(self.to_simple_root_coords(a)))


# -- construction --------------------------------------------------------


def _unit(n: int, i: int, c=1) -> list[Fraction]:
    v = [Fraction(0)] * n
    v[i] = Fraction(c)
    return v


def _classical_simple_roots(series: str, n: int) -> tuple[list[list[Fraction]], Matrix]:
    if series == "A":
        dim = n + 1
        simple = [ex.sub(_unit(dim, i), _unit(dim, i + 1)) for i in range(n)]
        return simple, ex.identity(dim)
    dim = n
    simple = [ex.sub(_unit(dim, i), _unit(dim, i + 1)) for i in range(n - 1)]
    if series == "B":
        simple.append(tuple(_unit(dim, n - 1)))
        return simple, ex.identity(dim)
    if series == "C":
        simple.append(tuple(_unit(dim, n - 1, 2)))
        half = Fraction(1, 2)
        return simple, tuple(tuple(half * x for x in row) for row in ex.identity(dim))
    simple.append(ex.add(_unit(dim, n - 2), _unit(dim, n - 1)))
    return simple, ex.identity(dim)


def _check_rank(series: str, rank: int) -> None:
    ok = {
        "A": rank >= 1,
        "B": rank >= 2,
        "C": rank >= 2,
        "D": rank >= 4,
        "E": rank in (6, 7, 8),
        "F": rank == 4,
        "G": rank == 2,
    }
    if series not in ok:
        raise ValueError(f"unknown series {series!r}; expected one of A, B, C, D, E, F, G")
    if not isinstance(rank, int) or not ok[series]:
        raise ValueError(f"invalid rank {rank} for series {series}")


def build_root_system(series: str, rank: int) -> RootSystem:
    """Standard realization of the simple root system of the given type."""
    series = series.upper()
    _check_rank(series, rank)
    if series in "ABCD":
        simple, gram = _classical_simple_roots(series, rank)
    else:
        cartan = _EXCEPTIONAL_CARTAN[(series, rank)]
        lengths = [Fraction(x) for x in _EXCEPTIONAL_LENGTHS.get((series, rank), [2] * rank)]
        simple = [tuple(_unit(rank, i)) for i in range(rank)]
        gram = tuple(tuple(Fraction(cartan[i][j]) * lengths[j] / 2 for j in range(rank))
                     for i in range(rank))
    rs = from_simple_roots(f"{series}{rank}", simple, gram)
    expected = POSITIVE_ROOT_COUNT[series](rank)
    if len(rs.positive_roots) != expected:
        raise AssertionError(f"{series}{rank}: generated {len(rs.positive_roots)} positive roots, expected {expected}")
    return rs


def from_simple_roots(label: str, simple: Sequence[Sequence], gram: Sequence[Sequence]) -> RootSystem:
    """Build a root system from a base and a Gram matrix.

    Positive roots are generated by closure: for a positive root beta and a
    simple root alpha_i, beta + alpha_i is a root iff q > 0 in the
    alpha_i-string through beta, where q = p - <beta, alpha_i>.
    """
    simple = tuple(ex.vec(a) for a in simple)
    gram = ex.mat(gram)
    n = len(simple)
    if ex.rank(simple) != n:
        raise ValueError("simple roots are linearly dependent")
    ip = lambda u, v: ex.dot(u, ex.matvec(gram, v))  # noqa: E731
    cartan_q = [[2 * ip(simple[i], simple[j]) / ip(simple[j], simple[j]) for j in range(n)] for i in range(n)]
    if any(c.denominator != 1 for row in cartan_q for c in row):
        raise ValueError("simple roots do not give an integral Cartan matrix")
    cartan = tuple(tuple(int(c) for c in row) for row in cartan_q)
    for i in range(n):
        if cartan[i][i] != 2 or any(cartan[i][j] > 0 for j in range(n) if j != i):
            raise ValueError(f"not a base: Cartan matrix {cartan}")

    # closure in simple-root coordinates
    units = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    known = set(units)
    order = list(units)
    layer = list(units)
    while layer:
        nxt = []
        for beta in layer:
            for i in range(n):
                p = 0
                while True:
                    down = tuple(b - (p + 1) * (k == i) for k, b in enumerate(beta))
                    if down in known:
                        p += 1
                    else:
                        break
                pair = sum(beta[j] * cartan[j][i] for j in range(n))
                if p - pair > 0:
                    up = tuple(b + (k == i) for k, b in enumerate(beta))
                    if up not in known:
                        known.add(up)
                        order.append(up)
                        nxt.append(up)
        layer = nxt
    order.sort(key=lambda c: (sum(c), tuple(-x for x in c)))
    positive = tuple(
        tuple(sum((c[i] * simple[i][k] for i in range(n)), Fraction(0)) for k in range(len(gram)))
        for c in order
    )
    # fundamental weights: omega_i = sum_k c_ik alpha_k with (omega_i, alpha_j) = delta_ij (alpha_j, alpha_j)/2
    b = [[ip(simple[k], simple[j]) for j in range(n)] for k in range(n)]
    binv = ex.inverse(b)
    fundamental = []
    for i in range(n):
        half = ip(simple[i], simple[i]) / 2
        coeffs = [half * binv[i][k] for k in range(n)]
        fundamental.append(tuple(sum((coeffs[k] * simple[k][m] for k in range(n)), Fraction(0))
                                 for m in range(len(gram))))
    rs = RootSystem(label, simple, gram, cartan, positive, tuple(fundamental))
    _validate(rs)
    return rs


def _validate(rs: RootSystem) -> None:
    g = rs.gram
    if ex.transpose(g) != g:
        raise ValueError("Gram matrix is not symmetric")
    # positive definiteness on the span of the roots
    b = [[rs.inner(a, c) for c in rs.simple_roots] for a in rs.simple_roots]
    for k in range(1, len(b) + 1):
        if ex.det([row[:k] for row in b[:k]]) <= 0:
            raise ValueError("inner product is not positive definite on the root span")


def direct_sum(*systems: RootSystem) -> RootSystem:
    """Orthogonal direct sum with block-diagonal Gram matrix."""
    dims = [s.dim for s in systems]
    total = sum(dims)
    offsets = [sum(dims[:i]) for i in range(len(dims))]

    def pad(v, k):
        out = [Fraction(0)] * total
        out[offsets[k]:offsets[k] + dims[k]] = v
        return tuple(out)

    simple = [pad(a, k) for k, s in enumerate(systems) for a in s.simple_roots]
    gram = [[Fraction(0)] * total for _ in range(total)]
    for k, s in enumerate(systems):
        o = offsets[k]
        for i in range(s.dim):
            for j in range(s.dim):
                gram[o + i][o + j] = s.gram[i][j]
    label = "x".join(s.label for s in systems)
    return from_simple_roots(label, simple, gram)


def with_base(rs: RootSystem, simple: Sequence[Sequence]) -> RootSystem:
    """The same root system with a different choice of simple roots."""
    new = from_simple_roots(rs.label, simple, rs.gram)
    if set(new.roots) != set(rs.roots):
        raise ValueError(f"{[ex.fmt_vec(a) for a in new.simple_roots]} is not a base of {rs.label}")
    return new


# -- Weyl group ------------------------------------------------------------


def pairing(rs: RootSystem, lam, beta) -> Fraction:
    return rs.pairing(ex.vec(lam), ex.vec(beta))


def is_dominant(rs: RootSystem, lam) -> bool:
    return rs.is_dominant(ex.vec(lam))


def fundamental_weights(rs: RootSystem) -> tuple[Weight, ...]:
    return rs.fundamental


def dominant_representative(rs: RootSystem, lam, reflection_set=None) -> tuple[Weight, tuple[int, ...]]:
    """Dominant element of the orbit of ``lam`` and the reflections used.

    ``reflection_set`` defaults to the simple roots.  The word lists indices
    into ``reflection_set`` in the order the reflections were applied.  Each
    step strictly raises the weight, so the loop ends.
    """
    refl = rs.simple_roots if reflection_set is None else tuple(ex.vec(b) for b in reflection_set)
    lam = ex.vec(lam)
    word = []
    while True:
        for i, beta in enumerate(refl):
            if rs.inner(lam, beta) < 0:
                lam = rs.reflect(lam, beta)
                word.append(i)
                break
        else:
            return lam, tuple(word)


def apply_word(rs: RootSystem, lam, word, reflection_set=None) -> Weight:
    refl = rs.simple_roots if reflection_set is None else tuple(ex.vec(b) for b in reflection_set)
    lam = ex.vec(lam)
    for i in word:
        lam = rs.reflect(lam, refl[i])
    return lam


def orbit(rs: RootSystem, lam, reflection_set=None) -> frozenset[Weight]:
    refl = rs.simple_roots if reflection_set is None else tuple(ex.vec(b) for b in reflection_set)
    start = ex.vec(lam)
    seen = {start}
    todo = deque([start])
    while todo:
        mu = todo.popleft()
        for beta in refl:
            nu = rs.reflect(mu, beta)
            if nu not in seen:
                seen.add(nu)
                todo.append(nu)
    return frozenset(seen)


def weyl_group_matrices(rs: RootSystem, reflection_set=None) -> list[Matrix]:
    """All elements of the group generated by the given reflections, as matrices."""
    refl = rs.simple_roots if reflection_set is None else tuple(ex.vec(b) for b in reflection_set)
    n = rs.dim
    basis = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]

    def refl_matrix(beta):
        cols = [rs.reflect(e, beta) for e in basis]
        return ex.transpose(cols)

    gens = [refl_matrix(b) for b in refl]
    ident = ex.identity(n)
    seen = {ident}
    todo = deque([ident])
    while todo:
        m = todo.popleft()
        for g in gens:
            h = ex.matmul(g, m)
            if h not in seen:
                seen.add(h)
                todo.append(h)
    return sorted(seen)


# -- representations -------------------------------------------------------


def dual_highest_weight(rs: RootSystem, omega) -> Weight:
    """omega* = -w0(omega), the dominant conjugate of -omega."""
    omega = ex.vec(omega)
    if not rs.is_dominant(omega):
        raise ValueError(f"{ex.fmt_vec(omega)} is not dominant")
    return dominant_representative(rs, ex.neg(omega))[0]


def _dominant_weights_below(rs: RootSystem, omega: Weight) -> list[Weight]:
    # dominant mu with omega - mu in the non-negative span of the simple roots;
    # simple-root coordinates of a dominant weight are >= 0, which bounds the box
    top = rs.to_simple_root_coords(omega)
    bounds = [int(c // 1) for c in top]
    out = []
    for ks in product(*(range(b + 1) for b in bounds)):
        mu = omega
        for k, a in zip(ks, rs.simple_roots):
            if k:
                mu = ex.sub(mu, ex.scale(k, a))
        if rs.is_dominant(mu):
            out.append(mu)
    return out


def weights_of_rep(rs: RootSystem, omega, analytic_lattice: IntegerLattice | None = None) -> frozenset[Weight]:
    """Set of weights (no multiplicities) of the irreducible module V(omega)."""
    omega = ex.vec(omega)
    if not rs.is_dominant(omega):
        raise ValueError(f"{ex.fmt_vec(omega)} is not dominant")
    if not rs.is_integral(omega):
        raise ValueError(f"{ex.fmt_vec(omega)} is not algebraically integral")
    if analytic_lattice is not None and omega not in analytic_lattice:
        raise ValueError(f"{ex.fmt_vec(omega)} is not in the analytic lattice")
    if not rs.in_span(omega):
        raise ValueError(f"{ex.fmt_vec(omega)} is not in the span of the roots")
    out: set[Weight] = set()
    for mu in _dominant_weights_below(rs, omega):
        out |= orbit(rs, mu)
    return frozenset(out)


def weyl_dimension(rs: RootSystem, omega) -> int:
    """prod over positive roots of (omega + rho, alpha) / (rho, alpha)."""
    omega = ex.vec(omega)
    rho = rs.from_fundamental([1] * rs.rank)
    shifted = ex.add(omega, rho)
    num, den = Fraction(1), Fraction(1)
    for a in rs.positive_roots:
        num *= rs.inner(shifted, a)
        den *= rs.inner(rho, a)
    d = num / den
    if d.denominator != 1:
        raise ArithmeticError(f"non-integral Weyl dimension {d}")
    return int(d)


def is_weight_of(rs: RootSystem, omega, lam) -> bool:
    """Saturation test: lam is a weight of V(omega) iff omega - lam lies in the
    root lattice and omega - mu is a non-negative combination of simple roots,
    where mu is the dominant conjugate of lam."""
    omega, lam = ex.vec(omega), ex.vec(lam)
    if not rs.in_span(lam):
        return False
    diff = rs.to_simple_root_coords(ex.sub(omega, lam))
    if any(c.denominator != 1 for c in diff):
        return False
    mu = dominant_representative(rs, lam)[0]
    return all(c >= 0 for c in rs.to_simple_root_coords(ex.sub(omega, mu)))
