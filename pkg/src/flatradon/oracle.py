"""Brute-force representation oracle.

Explicit matrix models of su(2), su(3), so(5) and su(2)+su(2) with their
involutions.  Irreducible modules are cut out of tensor powers of the
defining representation, k-invariants are computed as a joint null space,
and the torus average is computed by quadrature over A = exp(a_0).  None of
this uses the lattice criteria in :mod:`flatradon.kernel`; it exists to check
them.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import product
from math import lcm
from typing import Callable, Sequence

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from . import exact as ex
from .exact import Vector
from .roots import RootSystem, build_root_system, direct_sum, weyl_dimension, with_base

NULL_TOL = 1e-9
DEGREE_CAP = 6
MODELS = ("su2", "su3", "so5", "su2xsu2")


class UnreachableWeight(ValueError):
    pass


@dataclass(frozen=True)
class Factor:
    """A sub-block of the defining representation (optionally dualized)."""

    indices: tuple[int, ...]
    dual: bool = False

    def matrix(self, x: np.ndarray) -> np.ndarray:
        m = x[np.ix_(self.indices, self.indices)]
        return -m.T if self.dual else m


@dataclass
class MatrixAlgebra:
    name: str
    rs: RootSystem
    defining_weights: tuple[Vector, ...]
    basis: list[np.ndarray]
    k_basis: list[np.ndarray]
    a_basis: tuple[Vector, ...]
    theta: Callable[[np.ndarray], np.ndarray]
    factors: tuple[Factor, ...]
    choose_factors: Callable[["MatrixAlgebra", Vector], list[int]]
    in_analytic_lattice: Callable[[Vector], bool]
    raising: list[np.ndarray] = field(default_factory=list)
    lowering: list[np.ndarray] = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.defining_weights)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def cartan(self, t: Sequence) -> np.ndarray:
        """Cartan element H_t acting on a weight vector of weight w by w . t."""
        t = ex.vec(t)
        return np.diag([float(ex.dot(w, t)) for w in self.defining_weights]).astype(complex)

    def factor_weights(self, f: Factor) -> list[Vector]:
        ws = [self.defining_weights[i] for i in f.indices]
        return [ex.neg(w) for w in ws] if f.dual else ws


def _root_vector(basis: list[np.ndarray], weights: Sequence[Vector], alpha: Vector) -> np.ndarray:
    n = len(weights)
    mask = np.array([[ex.sub(weights[p], weights[q]) == alpha for q in range(n)] for p in range(n)]).ravel()
    g = np.stack([b.ravel() for b in basis], axis=1)
    outside = g[~mask]
    null = _null_space(outside)
    if null.shape[1] != 1:
        raise AssertionError(f"root space for {ex.fmt_vec(alpha)} has dimension {null.shape[1]}")
    x = (g @ null[:, 0]).reshape(n, n)
    k = np.argmax(np.abs(x))
    return x / x.flat[k]


def _null_space(a: np.ndarray, tol: float = NULL_TOL) -> np.ndarray:
    """Orthonormal columns spanning {x : a x = 0}."""
    rows, cols = a.shape
    if rows < cols:
        a = np.vstack([a, np.zeros((cols - rows, cols), dtype=a.dtype)])
    _, s, vh = np.linalg.svd(a, full_matrices=False)
    return vh[int(np.sum(s > tol)):].conj().T


def _e(n, p, q) -> np.ndarray:
    m = np.zeros((n, n), dtype=complex)
    m[p, q] = 1
    return m


def _su_n(n: int, rs: RootSystem, name: str) -> MatrixAlgebra:
    weights = tuple(tuple(Fraction(int(i == j)) - Fraction(1, n) for j in range(n)) for i in range(n))
    basis = [_e(n, p, q) for p in range(n) for q in range(n) if p != q]
    basis += [_e(n, p, p) - _e(n, p + 1, p + 1) for p in range(n - 1)]
    k_basis = [_e(n, p, q) - _e(n, q, p) for p in range(n) for q in range(p + 1, n)]
    a_basis = tuple(rs.simple_roots)

    def choose(alg, coords):
        if n == 2:
            return [0] * int(coords[0])
        return [0] * int(coords[0]) + [1] * int(coords[1])

    factors = (Factor(tuple(range(n))),) if n == 2 else (Factor(tuple(range(n))), Factor(tuple(range(n)), dual=True))
    return MatrixAlgebra(name, rs, weights, basis, k_basis, a_basis, lambda x: -x.T, factors, choose,
                         rs.weight_lattice().contains)


def _so5(rs: RootSystem) -> MatrixAlgebra:
    # orthonormal weight basis f+1, f-1, f+2, f-2, f0 of C^5
    s = 1 / np.sqrt(2)
    u = np.zeros((5, 5), dtype=complex)
    u[:, 0] = s * (_unit5(0) + 1j * _unit5(4))
    u[:, 1] = s * (_unit5(0) - 1j * _unit5(4))
    u[:, 2] = s * (_unit5(1) + 1j * _unit5(2))
    u[:, 3] = s * (_unit5(1) - 1j * _unit5(2))
    u[:, 4] = _unit5(3)
    uh = u.conj().T
    w = lambda a, b: (Fraction(a), Fraction(b))  # noqa: E731
    weights = (w(1, 0), w(-1, 0), w(0, 1), w(0, -1), w(0, 0))

    def gen(i, j):
        return _e(5, i, j) - _e(5, j, i)

    to_f = lambda x: uh @ x @ u  # noqa: E731
    basis = [to_f(gen(i, j)) for i in range(5) for j in range(i + 1, 5)]
    k_basis = [to_f(gen(i, j)) for i in range(4) for j in range(i + 1, 4)]
    d = np.diag([1, 1, 1, 1, -1]).astype(complex)

    def theta(x):
        return uh @ d @ (u @ x @ uh) @ d @ u

    def choose(alg, coords):
        omega = alg.rs.from_fundamental(coords)
        if any(c.denominator != 1 for c in omega):
            raise UnreachableWeight(f"{ex.fmt_vec(omega)} is a spin weight; no vector-representation model")
        return [0] * int(sum(omega))

    integral = lambda v: all(c.denominator == 1 for c in v)  # noqa: E731
    return MatrixAlgebra("so5", rs, weights, basis, k_basis, ((Fraction(1), Fraction(0)),), theta,
                         (Factor(tuple(range(5))),), choose, integral)


def _unit5(i):
    v = np.zeros(5, dtype=complex)
    v[i] = 1
    return v


def _su2xsu2(rs: RootSystem) -> MatrixAlgebra:
    h = Fraction(1, 2)
    weights = ((h, -h, 0, 0), (-h, h, 0, 0), (0, 0, h, -h), (0, 0, -h, h))
    weights = tuple(ex.vec(w) for w in weights)
    blocks = [_e(2, 0, 1), _e(2, 1, 0), _e(2, 0, 0) - _e(2, 1, 1)]
    z = np.zeros((2, 2), dtype=complex)
    left = [np.block([[b, z], [z, z]]) for b in blocks]
    right = [np.block([[z, z], [z, b]]) for b in blocks]
    k_basis = [a + b for a, b in zip(left, right)]

    def theta(x):
        return np.block([[x[2:, 2:], x[2:, :2]], [x[:2, 2:], x[:2, :2]]])

    def choose(alg, coords):
        return [0] * int(coords[0]) + [1] * int(coords[1])

    a = (ex.vec((1, -1, -1, 1)),)
    return MatrixAlgebra("su2xsu2", rs, weights, left + right, k_basis, a, theta,
                         (Factor((0, 1)), Factor((2, 3))), choose, rs.weight_lattice().contains)


def model_root_system(name: str) -> RootSystem:
    if name == "su2":
        return build_root_system("A", 1)
    if name == "su3":
        return build_root_system("A", 2)
    if name == "so5":
        return build_root_system("B", 2)
    if name == "su2xsu2":
        a1 = build_root_system("A", 1)
        return with_base(direct_sum(a1, a1), [(1, -1, 0, 0), (0, 0, -1, 1)])
    raise ValueError(f"unsupported algebra {name!r}; expected one of {MODELS}")


def build_algebra(name: str) -> MatrixAlgebra:
    rs = model_root_system(name)
    if name == "su2":
        alg = _su_n(2, rs, name)
    elif name == "su3":
        alg = _su_n(3, rs, name)
    elif name == "so5":
        alg = _so5(rs)
    else:
        alg = _su2xsu2(rs)
    alg.raising = [_root_vector(alg.basis, alg.defining_weights, a) for a in rs.simple_roots]
    alg.lowering = [_root_vector(alg.basis, alg.defining_weights, ex.neg(a)) for a in rs.simple_roots]
    check_algebra(alg)
    return alg


def _span_residual(basis: list[np.ndarray], x: np.ndarray) -> float:
    g = np.stack([b.ravel() for b in basis], axis=1)
    c, *_ = np.linalg.lstsq(g, x.ravel(), rcond=None)
    return float(np.max(np.abs(g @ c - x.ravel()))) if x.size else 0.0


def check_algebra(alg: MatrixAlgebra, tol: float = 1e-12) -> None:
    """Raise AssertionError unless the model is self-consistent."""
    for x in alg.basis:
        for y in alg.basis:
            if _span_residual(alg.basis, x @ y - y @ x) > tol:
                raise AssertionError(f"{alg.name}: basis is not closed under brackets")
    for a, e_a, f_a in zip(alg.rs.simple_roots, alg.raising, alg.lowering):
        for j in range(alg.rs.dim):
            t = tuple(Fraction(int(i == j)) for i in range(alg.rs.dim))
            h = alg.cartan(t)
            val = float(ex.dot(a, t))
            if np.max(np.abs(h @ e_a - e_a @ h - val * e_a)) > tol:
                raise AssertionError(f"{alg.name}: [H, X_alpha] != alpha(H) X_alpha")
            if np.max(np.abs(h @ f_a - f_a @ h + val * f_a)) > tol:
                raise AssertionError(f"{alg.name}: [H, X_-alpha] != -alpha(H) X_-alpha")
    for x in alg.basis:
        if np.max(np.abs(alg.theta(alg.theta(x)) - x)) > tol:
            raise AssertionError(f"{alg.name}: theta is not an involution")
    for k in alg.k_basis:
        if np.max(np.abs(alg.theta(k) - k)) > tol:
            raise AssertionError(f"{alg.name}: k basis element not fixed by theta")
    fixed = [x + alg.theta(x) for x in alg.basis]
    g = np.stack([f.ravel() for f in fixed], axis=1)
    if np.linalg.matrix_rank(g, tol=1e-9) != len(alg.k_basis):
        raise AssertionError(f"{alg.name}: fixed subalgebra has the wrong dimension")
    for y in alg.a_basis:
        h = alg.cartan(y)
        if np.max(np.abs(alg.theta(h) + h)) > tol:
            raise AssertionError(f"{alg.name}: a-basis element is not in the (-1)-eigenspace")


# -- irreducible modules -----------------------------------------------------


@dataclass
class Irrep:
    algebra: str
    omega: Vector
    weights: tuple[Vector, ...]            # weight of each carrier basis vector
    k_ops: list[np.ndarray]                # action of the k basis
    raising: list[np.ndarray]
    embedding: np.ndarray                  # carrier basis inside the tensor power
    full_op: Callable[[np.ndarray], sp.csr_matrix] = field(repr=False)
    highest_index: int = 0

    @property
    def dim(self) -> int:
        return len(self.weights)

    def represent(self, x: np.ndarray) -> np.ndarray:
        b = self.embedding
        return b.conj().T @ (self.full_op(x) @ b)


def _tensor_op(mats: list[np.ndarray]) -> sp.csr_matrix:
    dims = [m.shape[0] for m in mats]
    total = None
    for j, m in enumerate(mats):
        parts = [sp.identity(d, format="csr", dtype=complex) for d in dims]
        parts[j] = sp.csr_matrix(m)
        term = reduce(lambda a, b: sp.kron(a, b, format="csr"), parts)
        total = term if total is None else total + term
    return total.tocsr()


def _orthonormalize(vectors: list[np.ndarray], basis: list[np.ndarray]) -> list[np.ndarray]:
    # modified Gram-Schmidt with one re-projection pass, fixed order
    out = list(basis)
    for v in vectors:
        norm0 = np.linalg.norm(v)
        if norm0 == 0:
            continue
        w = v.copy()
        for _ in range(2):
            for q in out:
                w = w - q * np.vdot(q, w)
        nw = np.linalg.norm(w)
        if nw > 1e-8 * max(norm0, 1.0):
            out.append(w / nw)
    return out[len(basis):]


def _fix_phase(v: np.ndarray) -> np.ndarray:
    k = int(np.flatnonzero(np.abs(v) > 1e-6 * np.max(np.abs(v)))[0])
    return v * (abs(v[k]) / v[k])


def build_irrep(alg: MatrixAlgebra, omega) -> Irrep:
    """V(omega) inside a tensor product of (dual) defining representations."""
    rs = alg.rs
    omega = ex.vec(omega)
    if not rs.is_dominant(omega) or not rs.is_integral(omega):
        raise ValueError(f"{ex.fmt_vec(omega)} is not a dominant integral weight")
    if not alg.in_analytic_lattice(omega):
        raise ValueError(f"{ex.fmt_vec(omega)} is not analytic for the {alg.name} model group")
    coords = rs.to_fundamental(omega)
    chosen = alg.choose_factors(alg, coords)
    if len(chosen) > DEGREE_CAP:
        raise UnreachableWeight(f"V({ex.fmt_vec(omega)}) needs tensor degree {len(chosen)} > {DEGREE_CAP}")
    factors = [alg.factors[i] for i in chosen]

    if not factors:
        one = np.ones((1, 1), dtype=complex)
        zero = np.zeros((1, 1), dtype=complex)
        return Irrep(alg.name, omega, (ex.zeros(rs.dim),), [zero.copy() for _ in alg.k_basis],
                     [zero.copy() for _ in alg.raising], one,
                     lambda x: sp.csr_matrix(np.zeros((1, 1), dtype=complex)))

    def full_op(x):
        return _tensor_op([f.matrix(x) for f in factors])

    # exact weights of the product basis, stored as scaled integers
    fweights = [alg.factor_weights(f) for f in factors]
    den = lcm(*(c.denominator for ws in fweights for w in ws for c in w), *(c.denominator for c in omega))
    fw_int = [np.array([[int(c * den) for c in w] for w in ws]) for ws in fweights]
    grids = np.meshgrid(*[np.arange(len(ws)) for ws in fweights], indexing="ij")
    wt = sum(fw_int[j][grids[j].ravel()] for j in range(len(factors)))
    target = np.array([int(c * den) for c in omega])

    raise_full = [full_op(e) for e in alg.raising]
    lower_full = [full_op(f) for f in alg.lowering]
    idx = np.flatnonzero(np.all(wt == target, axis=1))
    if idx.size == 0:
        raise UnreachableWeight(f"{ex.fmt_vec(omega)} does not occur in the chosen tensor product")
    null = _null_space(np.vstack([e[:, idx].toarray() for e in raise_full]))
    if null.shape[1] == 0:
        raise UnreachableWeight(f"no highest-weight vector of weight {ex.fmt_vec(omega)}")
    hw = np.zeros(wt.shape[0], dtype=complex)
    hw[idx] = null[:, 0]
    hw = _fix_phase(hw / np.linalg.norm(hw))

    # generate the module by simple lowering operators, level by level
    simple_int = [np.array([int(c * den) for c in a]) for a in rs.simple_roots]
    columns: list[np.ndarray] = [hw]
    col_weights: list[tuple[int, ...]] = [tuple(target)]
    level = {tuple(target): [hw]}
    while level:
        pending: dict[tuple[int, ...], list[np.ndarray]] = {}
        for mu in sorted(level, reverse=True):
            for f, a in zip(lower_full, simple_int):
                nu = tuple(np.array(mu) - a)
                for v in level[mu]:
                    w = f @ v
                    if np.linalg.norm(w) > NULL_TOL:
                        pending.setdefault(nu, []).append(w)
        level = {}
        for nu in sorted(pending, reverse=True):
            new = _orthonormalize(pending[nu], [])
            if new:
                level[nu] = new
                columns.extend(new)
                col_weights.extend([nu] * len(new))
    b = np.stack(columns, axis=1)
    weights = tuple(tuple(Fraction(int(c), den) for c in w) for w in col_weights)

    def restrict(x_full):
        return b.conj().T @ (x_full @ b)

    k_ops = [restrict(full_op(k)) for k in alg.k_basis]
    raising = [restrict(e) for e in raise_full]
    for x in alg.basis:
        xf = full_op(x)
        if np.max(np.abs(xf @ b - b @ restrict(xf))) > 1e-9:
            raise AssertionError(f"carrier of V({ex.fmt_vec(omega)}) is not invariant")
    expected = weyl_dimension(rs, omega)
    if b.shape[1] != expected:
        raise AssertionError(f"V({ex.fmt_vec(omega)}): built dimension {b.shape[1]}, Weyl formula {expected}")
    return Irrep(alg.name, omega, weights, k_ops, raising, b, full_op)


def k_invariants(irrep: Irrep, alg: MatrixAlgebra | None = None) -> list[np.ndarray]:
    """Orthonormal basis of the joint null space of the k action."""
    if irrep.dim == 1 and not any(np.any(k) for k in irrep.k_ops):
        return [np.ones(1, dtype=complex)]
    null = _null_space(np.vstack(irrep.k_ops))
    return [_fix_phase(null[:, i]) for i in range(null.shape[1])]


def support_of(irrep: Irrep, v: np.ndarray, tol: float = NULL_TOL) -> frozenset[Vector]:
    v = np.asarray(v)
    if np.linalg.norm(v) == 0:
        raise ValueError("support of the zero vector")
    out = set()
    for lam in set(irrep.weights):
        mask = np.array([w == lam for w in irrep.weights])
        if np.linalg.norm(v[mask]) > tol:
            out.add(lam)
    return frozenset(out)


def _torus_frequencies(irrep: Irrep, a_basis: Sequence[Vector]) -> tuple[int, np.ndarray]:
    vals = [[ex.dot(w, y) for y in a_basis] for w in irrep.weights]
    period = lcm(1, *(q.denominator for row in vals for q in row))
    freq = np.array([[int(q * period) for q in row] for row in vals], dtype=int)
    return period, freq


def exactness_threshold(irrep: Irrep, alg: MatrixAlgebra) -> int:
    _, freq = _torus_frequencies(irrep, alg.a_basis)
    return 2 * int(np.max(np.abs(freq), initial=0)) + 1


def reynolds_RA(irrep: Irrep, alg: MatrixAlgebra, v, u, samples: int | None = None) -> complex:
    """Average of <exp(a) v, u> over the torus A = exp(a_0).

    The torus is parametrized by s in [0, 1)^dim(a) through
    exp(2 pi i P sum_j s_j H_{y_j}); equal-weight sampling on the grid is exact
    once ``samples`` exceeds twice the largest frequency.
    """
    v = np.asarray(v, dtype=complex)
    u = np.asarray(u, dtype=complex)
    period, _ = _torus_frequencies(irrep, alg.a_basis)
    need = exactness_threshold(irrep, alg)
    if samples is None:
        samples = need
    if samples < need:
        warnings.warn(f"{samples} samples per torus direction is below the exactness threshold {need}",
                      RuntimeWarning, stacklevel=2)
    hs = [irrep.represent(alg.cartan(y)) for y in alg.a_basis]
    grid = np.arange(samples) / samples
    total = 0j
    for s in product(grid, repeat=len(hs)):
        h = sum(si * period * hi for si, hi in zip(s, hs))
        total += np.vdot(u, scipy.linalg.expm(2j * np.pi * h) @ v)
    return total / samples ** len(hs)


def zero_restricted_projection(irrep: Irrep, alg: MatrixAlgebra, v) -> np.ndarray:
    """Exact projector onto weights that vanish on a, applied to v."""
    v = np.asarray(v, dtype=complex)
    mask = np.array([all(ex.dot(w, y) == 0 for y in alg.a_basis) for w in irrep.weights])
    return np.where(mask, v, 0)


def f_invariant(irrep: Irrep, alg: MatrixAlgebra, v, x_basis: Sequence[Vector], gram) -> bool:
    """Whether v is fixed by the generators exp(pi i x_i) of F."""
    v = np.asarray(v, dtype=complex)
    for x in x_basis:
        dual = ex.matvec(gram, x)
        g = scipy.linalg.expm(1j * np.pi * irrep.represent(alg.cartan(dual)))
        if np.linalg.norm(g @ v - v) > 1e-9:
            return False
    return True


# -- exact su(2) -------------------------------------------------------------


def su2_exact_invariant(m: int) -> dict[Vector, Fraction]:
    """so(2)-invariant of Sym^m C^2 in exact arithmetic, keyed by weight.

    Basis x^(m-k) y^k has weight (m - 2k) omega_1; the generator E12 - E21
    acts as the derivation x -> -y, y -> x.
    """
    if m < 0:
        raise ValueError("degree must be non-negative")
    size = m + 1
    rows = [[Fraction(0)] * size for _ in range(size)]
    for k in range(size):
        a, b = m - k, k
        if a:
            rows[k + 1][k] -= a  # -a x^(a-1) y^(b+1)
        if b:
            rows[k - 1][k] += b  # +b x^(a+1) y^(b-1)
    null = ex.nullspace(rows, size)
    if not null:
        return {}
    if len(null) > 1:
        raise AssertionError("so(2)-invariants of an su(2) irrep have dimension > 1")
    v = null[0]
    omega1 = (Fraction(1, 2), Fraction(-1, 2))
    return {ex.scale(m - 2 * k, omega1): c for k, c in enumerate(v) if c != 0}
