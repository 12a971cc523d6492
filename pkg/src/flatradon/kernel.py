"""Decision procedures for the kernel of the maximal flat Radon transform.

For a space M = G/K and an irreducible V(omega) occurring in L^2(M):

* V(omega) is spherical when it has a k-invariant (Cartan-Helgason), plus
  omega in Lambda for the adjoint flavor;
* V(omega) comes from the adjoint form iff omega* lies in Lambda;
* otherwise V(omega) is annihilated by the transform.

Every verdict carries a certificate that re-checks with lattice membership
alone.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from . import exact as ex
from .exact import Vector
from .lattice import IntegerLattice, integer_kernel
from .roots import dominant_representative, dual_highest_weight, is_weight_of, weights_of_rep
from .spaces import SpaceSpec, dual_basis_x, lattice_Lambda, restricted_roots


class ConsistencyError(RuntimeError):
    """Two independent computations of the same quantity disagree."""


class Verdict(str, enum.Enum):
    NOT_SPHERICAL = "NotSpherical"
    DESCENDS = "DescendsToAdjoint"
    IN_KERNEL = "InKernel"


@dataclass(frozen=True)
class KernelVerdict:
    kind: Verdict
    omega: Vector
    dual: Vector | None = None
    # DESCENDS: integer coordinates of omega* in the generators of Lambda.
    # IN_KERNEL: the non-zero normal-form residue of omega* modulo Lambda.
    coords: tuple[int, ...] | None = None
    residue: Vector | None = None

    def verify(self, spec: SpaceSpec) -> bool:
        """Re-check the certificate using lattice arithmetic only."""
        lam = lattice_Lambda(spec)
        if self.kind is Verdict.DESCENDS:
            total = ex.zeros(spec.rs.dim)
            for c, g in zip(self.coords, lam.generators):
                total = ex.add(total, ex.scale(c, g))
            return total == self.dual
        if self.kind is Verdict.IN_KERNEL:
            return (not ex.is_zero(self.residue)
                    and ex.sub(self.dual, self.residue) in lam
                    and self.dual not in lam)
        return True

    def summary(self) -> str:
        if self.kind is Verdict.DESCENDS:
            return "omega* = " + " + ".join(f"{c}*g{i + 1}" for i, c in enumerate(self.coords) if c) if any(self.coords) else "omega* = 0"
        if self.kind is Verdict.IN_KERNEL:
            return "omega* mod Lambda = (" + ", ".join(ex.fmt_vec(self.residue)) + ")"
        return "no K-invariant"


def _check_highest_weight(spec: SpaceSpec, omega: Vector) -> None:
    rs = spec.rs
    if len(omega) != rs.dim:
        raise ValueError(f"weight has dimension {len(omega)}, expected {rs.dim}")
    if not rs.in_span(omega):
        raise ValueError(f"{ex.fmt_vec(omega)} is not in the span of the roots")
    if not rs.is_dominant(omega):
        raise ValueError(f"{ex.fmt_vec(omega)} is not dominant")
    if omega not in spec.analytic_lattice:
        raise ValueError(f"{ex.fmt_vec(omega)} is not analytically integral for {spec.name}")


def helgason_condition(spec: SpaceSpec, omega: Sequence[Fraction]) -> bool:
    """theta(omega) = -omega and (omega, beta)/(beta, beta) in Z>=0 for beta in Sigma+."""
    rs = spec.rs
    if not spec.is_anti_invariant(omega):
        return False
    for beta in restricted_roots(spec).sigma_pos:
        q = rs.inner(omega, beta) / rs.inner(beta, beta)
        if q.denominator != 1 or q < 0:
            return False
    return True


def is_spherical(spec: SpaceSpec, omega) -> bool:
    omega = ex.vec(omega)
    _check_highest_weight(spec, omega)
    if not helgason_condition(spec, omega):
        return False
    if spec.flavor == "KZ":
        return omega in lattice_Lambda(spec)
    return True


def support_contains(spec: SpaceSpec, omega, lam) -> bool:
    """Whether the weight ``lam`` occurs in the k-invariant of V(omega).

    Criterion: theta(lam) = -lam and omega - lam lies in Lambda.
    """
    omega, lam = ex.vec(omega), ex.vec(lam)
    _check_highest_weight(spec, omega)
    if not helgason_condition(spec, omega):
        raise ValueError(f"V({ex.fmt_vec(omega)}) has no k-invariant")
    if not is_weight_of(spec.rs, omega, lam):
        raise ValueError(f"{ex.fmt_vec(lam)} is not a weight of V({ex.fmt_vec(omega)})")
    return spec.is_anti_invariant(lam) and ex.sub(omega, lam) in lattice_Lambda(spec)


def support(spec: SpaceSpec, omega) -> frozenset[Vector]:
    """All weights of V(omega) in the support of its k-invariant."""
    omega = ex.vec(omega)
    return frozenset(lam for lam in weights_of_rep(spec.rs, omega, spec.analytic_lattice)
                     if support_contains(spec, omega, lam))


def annihilates_F(spec: SpaceSpec, lam) -> bool:
    """Whether the character lam is trivial on F = {a in A : a^2 central}.

    Computed twice: by the parity of lam(x_i) on the generators exp(pi i x_i),
    and by membership of lam in Lambda.
    """
    lam = ex.vec(lam)
    if lam not in spec.analytic_lattice:
        raise ValueError(f"{ex.fmt_vec(lam)} is not analytically integral")
    if not spec.is_anti_invariant(lam):
        raise ValueError(f"{ex.fmt_vec(lam)} does not satisfy theta(lam) = -lam")
    parity = all(_is_even_integer(spec.rs.inner(lam, x)) for x in dual_basis_x(spec))
    member = lam in lattice_Lambda(spec)
    if parity != member:
        raise ConsistencyError(
            f"{spec.name}: parity test says {parity} but Lambda membership says {member} "
            f"for {ex.fmt_vec(lam)}")
    return member


def _is_even_integer(q: Fraction) -> bool:
    return q.denominator == 1 and q.numerator % 2 == 0


def descends_to_adjoint(spec: SpaceSpec, omega) -> bool:
    omega = ex.vec(omega)
    if not is_spherical(spec, omega):
        raise ValueError(f"V({ex.fmt_vec(omega)}) is not spherical for {spec.name}")
    return dual_highest_weight(spec.rs, omega) in lattice_Lambda(spec)


def _support_route_in_kernel(spec: SpaceSpec, dual: Vector) -> bool:
    # a support weight restricting to zero on a is anti-invariant with zero
    # restriction, so it can only be the zero weight
    zero = ex.zeros(spec.rs.dim)
    return not (is_weight_of(spec.rs, dual, zero) and support_contains(spec, dual, zero))


def in_kernel(spec: SpaceSpec, omega) -> KernelVerdict:
    omega = ex.vec(omega)
    if not is_spherical(spec, omega):
        return KernelVerdict(Verdict.NOT_SPHERICAL, omega)
    dual = dual_highest_weight(spec.rs, omega)
    lam = lattice_Lambda(spec)
    coords = lam.coordinates(dual)
    support_says_kernel = _support_route_in_kernel(spec, dual)
    if (coords is None) != support_says_kernel:
        raise ConsistencyError(
            f"{spec.name}: lattice and support routes disagree for omega = {ex.fmt_vec(omega)}")
    if coords is not None:
        return KernelVerdict(Verdict.DESCENDS, omega, dual, coords=coords)
    return KernelVerdict(Verdict.IN_KERNEL, omega, dual, residue=lam.residue(dual))


def dominant_analytic_weights(spec: SpaceSpec, bound: int) -> list[tuple[tuple[int, ...], Vector]]:
    """Dominant analytic weights with fundamental-coordinate sum <= bound, lexicographic."""
    if bound < 0:
        raise ValueError("bound must be non-negative")
    rs = spec.rs
    out = []
    for c in product(range(bound + 1), repeat=rs.rank):
        if sum(c) > bound:
            continue
        omega = rs.from_fundamental(c)
        if omega in spec.analytic_lattice:
            out.append((c, omega))
    return out


def enumerate_spherical(spec: SpaceSpec, bound: int) -> list[tuple[Vector, KernelVerdict]]:
    out = []
    for _, omega in dominant_analytic_weights(spec, bound):
        if spec.is_anti_invariant(omega) and is_spherical(spec, omega):
            out.append((omega, in_kernel(spec, omega)))
    return out


# -- injectivity -------------------------------------------------------------


def spherical_lattice(spec: SpaceSpec) -> IntegerLattice:
    """Lattice whose dominant members are exactly the spherical highest weights.

    Cut out of the analytic lattice by theta(w) = -w and the integrality of
    (w, beta)/(beta, beta) on Sigma+, and intersected with Lambda for the
    adjoint flavor.
    """
    rs = spec.rs
    basis = spec.analytic_lattice.basis()
    m = len(basis)
    sig = restricted_roots(spec).sigma_pos
    s = len(sig)
    # unknowns: n in Z^m (coefficients on the basis) and k in Z^s
    eqs: list[list[Fraction]] = []
    for i in range(rs.dim):
        eqs.append([b[i] + spec.apply_theta(b)[i] for b in basis] + [Fraction(0)] * s)
    for j, beta in enumerate(sig):
        bb = rs.inner(beta, beta)
        eqs.append([rs.inner(b, beta) / bb for b in basis] + [Fraction(-int(i == j)) for i in range(s)])
    int_eqs = []
    for row in eqs:
        d = 1
        for x in row:
            d = d * x.denominator // _gcd(d, x.denominator)
        int_eqs.append([int(x * d) for x in row])
    columns = [list(col) for col in zip(*int_eqs)]
    rel = integer_kernel(columns)
    gens = []
    for c in rel:
        v = ex.zeros(rs.dim)
        for ci, b in zip(c[:m], basis):
            v = ex.add(v, ex.scale(ci, b))
        gens.append(v)
    lat = IntegerLattice(tuple(gens), rs.dim)
    if spec.flavor == "KZ":
        lat = lat.intersect(lattice_Lambda(spec))
    return lat


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


@dataclass(frozen=True)
class InjectivityResult:
    injective: bool
    spherical_generators: tuple[Vector, ...]
    # injective: coordinates of each spherical generator in Lambda's generators
    containment: tuple[tuple[int, ...], ...] | None = None
    # not injective: a spherical highest weight whose dual is outside Lambda
    witness: KernelVerdict | None = None


def is_transform_injective(spec: SpaceSpec) -> InjectivityResult:
    lam = lattice_Lambda(spec)
    sph = spherical_lattice(spec)
    gens = sph.basis()
    coords = [lam.coordinates(g) for g in gens]
    if all(c is not None for c in coords):
        return InjectivityResult(True, gens, containment=tuple(coords))
    bad = next(g for g, c in zip(gens, coords) if c is None)
    return InjectivityResult(False, gens, witness=_smallest_witness(spec, bad))


def _smallest_witness(spec: SpaceSpec, generator: Vector) -> KernelVerdict:
    rs = spec.rs
    # Lambda and the spherical lattice are stable under the restricted Weyl
    # group, and restricted-dominant anti-invariant weights are dominant
    start, _ = dominant_representative(rs, generator, restricted_roots(spec).simple)
    verdict = in_kernel(spec, start)
    if verdict.kind is not Verdict.IN_KERNEL:
        raise ConsistencyError(f"{spec.name}: witness {ex.fmt_vec(start)} does not lie in the kernel")
    limit = int(sum(rs.to_fundamental(start)))
    candidates = sorted(dominant_analytic_weights(spec, limit), key=lambda t: (sum(t[0]), tuple(-x for x in t[0])))
    for _, omega in candidates:
        if spec.is_anti_invariant(omega) and is_spherical(spec, omega):
            v = in_kernel(spec, omega)
            if v.kind is Verdict.IN_KERNEL:
                return v
    return verdict
