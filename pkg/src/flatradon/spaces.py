"""Symmetric spaces as (root system, involution, analytic lattice, flavor).

A :class:`SpaceSpec` carries only lattice/involution data.  From it we derive
the restricted roots, their simple system, the restricted Weyl group, the
lattices ``Lambda = {rho - theta rho}`` (rho in the root lattice) and
``LambdaHat = {mu - theta mu}`` (mu in the weight lattice), and the basis of
the (-1)-eigenspace dual to the simple restricted roots.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Sequence

import jsonschema
import yaml

from . import exact as ex
from .exact import Matrix, Vector
from .lattice import IntegerLattice
from .roots import RootSystem, build_root_system, direct_sum, weyl_group_matrices, with_base

FLAVORS = ("K0", "KZ")
ORACLES = ("su2", "su3", "so5", "su2xsu2", "funk-s2")


@dataclass(frozen=True)
class SpaceSpec:
    name: str
    rs: RootSystem
    theta: Matrix
    analytic_lattice: IntegerLattice
    flavor: str = "K0"
    analytic_kind: str = "weight"
    oracles: tuple[str, ...] = ()
    comment: str = ""
    line: int | None = field(default=None, compare=False)

    def apply_theta(self, v: Sequence[Fraction]) -> Vector:
        return ex.matvec(self.theta, v)

    def restrict(self, v: Sequence[Fraction]) -> Vector:
        """r(v) = (v - theta v) / 2, the projection onto the (-1)-eigenspace."""
        t = self.apply_theta(v)
        return tuple((a - b) / 2 for a, b in zip(v, t))

    def is_anti_invariant(self, v: Sequence[Fraction]) -> bool:
        return ex.neg(v) == self.apply_theta(v)

    def with_flavor(self, flavor: str) -> "SpaceSpec":
        from dataclasses import replace
        return replace(self, flavor=flavor)


@dataclass(frozen=True)
class Violation:
    """First failed structural check, with the root (or vector) that fails it."""

    code: str
    message: str
    witness: Vector | None = None

    def __str__(self) -> str:
        w = "" if self.witness is None else f" (witness {ex.fmt_vec(self.witness)})"
        return f"{self.code}: {self.message}{w}"


@dataclass(frozen=True)
class RestrictedData:
    sigma: tuple[Vector, ...]
    sigma_pos: tuple[Vector, ...]
    simple: tuple[Vector, ...]
    fixed_roots: tuple[Vector, ...]
    lifts: tuple[Vector, ...]  # a positive root restricting to each simple restricted root


class SpecError(ValueError):
    pass


# -- validation ------------------------------------------------------------


def validate_spec(spec: SpaceSpec) -> Violation | None:
    """Run every structural check; return the first violation, or None."""
    rs, th = spec.rs, spec.theta
    n = rs.dim
    if len(th) != n or any(len(row) != n for row in th):
        return Violation("shape", f"theta must be {n}x{n}")
    if ex.matmul(th, th) != ex.identity(n):
        return Violation("not-involution", "theta squared is not the identity")
    if ex.matmul(ex.transpose(th), ex.matmul(rs.gram, th)) != rs.gram:
        return Violation("not-isometry", "theta does not preserve the inner product")
    roots = set(rs.roots)
    for a in rs.roots:
        if spec.apply_theta(a) not in roots:
            return Violation("not-root-permutation", "theta does not map roots to roots", a)
    positive = set(rs.positive_roots)
    for a in rs.positive_roots:
        t = spec.apply_theta(a)
        if t != a and ex.neg(t) not in positive:
            return Violation("positivity", "-theta(alpha) is not positive for a non-fixed positive root", a)
    wl = rs.weight_lattice()
    for g in spec.analytic_lattice.generators:
        if g not in wl:
            return Violation("analytic-lattice", "generator is not an integral weight", g)
    for a in rs.simple_roots:
        if a not in spec.analytic_lattice:
            return Violation("analytic-lattice", "analytic lattice does not contain the root lattice", a)
    for g in spec.analytic_lattice.generators:
        if spec.apply_theta(g) not in spec.analytic_lattice:
            return Violation("analytic-lattice", "theta does not preserve the analytic lattice", g)
    if all(ex.is_zero(spec.restrict(a)) for a in rs.positive_roots):
        return Violation("empty-restricted-system", "empty restricted system: theta fixes every root")
    if spec.flavor not in FLAVORS:
        return Violation("flavor", f"flavor must be one of {FLAVORS}")
    return None


def fixed_roots(spec: SpaceSpec) -> tuple[Vector, ...]:
    return tuple(a for a in spec.rs.roots if spec.apply_theta(a) == a)


# -- derived data ------------------------------------------------------------


@lru_cache(maxsize=None)
def restricted_roots(spec: SpaceSpec) -> RestrictedData:
    rs = spec.rs
    pos: list[Vector] = []
    lift_of: dict[Vector, Vector] = {}
    for a in rs.positive_roots:
        r = spec.restrict(a)
        if ex.is_zero(r):
            continue
        if r not in lift_of:
            pos.append(r)
            lift_of[r] = a
    if not pos:
        raise SpecError(f"{spec.name}: empty restricted root system")
    pos_set = set(pos)
    sums = {ex.add(b, c) for b in pos for c in pos}

    def divisible(b):
        return ex.scale(Fraction(1, 2), b) in pos_set

    simple = tuple(b for b in pos if not divisible(b) and b not in sums)
    sigma = tuple(pos) + tuple(ex.neg(b) for b in pos)
    return RestrictedData(
        sigma=sigma,
        sigma_pos=tuple(pos),
        simple=simple,
        fixed_roots=fixed_roots(spec),
        lifts=tuple(lift_of[b] for b in simple),
    )


def minus_eigenspace_dim(spec: SpaceSpec) -> int:
    return ex.rank([ex.sub(a, spec.apply_theta(a)) for a in spec.rs.simple_roots])


@lru_cache(maxsize=None)
def lattice_Lambda(spec: SpaceSpec) -> IntegerLattice:
    """Generated by alpha_i - theta(alpha_i) over the simple roots."""
    gens = [ex.sub(a, spec.apply_theta(a)) for a in spec.rs.simple_roots]
    return IntegerLattice(tuple(gens), spec.rs.dim)


@lru_cache(maxsize=None)
def lattice_LambdaHat(spec: SpaceSpec) -> IntegerLattice:
    """Generated by omega_i - theta(omega_i) over the fundamental weights."""
    gens = [ex.sub(w, spec.apply_theta(w)) for w in spec.rs.fundamental]
    return IntegerLattice(tuple(gens), spec.rs.dim)


@lru_cache(maxsize=None)
def dual_basis_x(spec: SpaceSpec) -> tuple[Vector, ...]:
    """Vectors x_i in the (-1)-eigenspace with (alpha'_j, x_i) = delta_ij.

    Evaluation of a weight at x_i is the inner product against x_i.
    """
    simple = restricted_roots(spec).simple
    k = minus_eigenspace_dim(spec)
    if len(simple) != k or ex.rank(simple) != k:
        raise SpecError(
            f"{spec.name}: {len(simple)} simple restricted roots do not form a basis "
            f"of the {k}-dimensional (-1)-eigenspace")
    rs = spec.rs
    gram = [[rs.inner(a, b) for b in simple] for a in simple]
    inv = ex.inverse(gram)
    out = []
    for i in range(k):
        v = ex.zeros(rs.dim)
        for j in range(k):
            v = ex.add(v, ex.scale(inv[i][j], simple[j]))
        out.append(v)
    return tuple(out)


def restricted_weyl_group(spec: SpaceSpec) -> list[Matrix]:
    return weyl_group_matrices(spec.rs, restricted_roots(spec).simple)


def restricted_reflection(spec: SpaceSpec, beta: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    return spec.rs.reflect(v, beta)


# -- catalog -------------------------------------------------------------------


class CatalogError(Exception):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _schema() -> dict:
    with resources.files("flatradon.data").joinpath("catalog.schema.json").open() as fh:
        return json.load(fh)


def default_catalog_path() -> Path:
    return Path(str(resources.files("flatradon.data").joinpath("catalog.yaml")))


def _build_rs(entry: dict) -> RootSystem:
    series, rank = entry["series"], entry["rank"]
    if isinstance(series, list) != isinstance(rank, list):
        raise SpecError("series and rank must both be scalars or both be lists")
    if isinstance(series, list):
        if len(series) != len(rank):
            raise SpecError("series and rank lists differ in length")
        rs = direct_sum(*(build_root_system(s, r) for s, r in zip(series, rank)))
    else:
        rs = build_root_system(series, rank)
    if "simple_roots" in entry:
        rs = with_base(rs, [ex.vec(r) for r in entry["simple_roots"]])
    return rs


def spec_from_entry(entry: dict, line: int | None = None) -> SpaceSpec:
    rs = _build_rs(entry)
    theta = ex.mat(entry["theta"])
    lat = entry["analytic_lattice"]
    if lat == "root":
        analytic, kind = rs.root_lattice(), "root"
    elif lat == "weight":
        analytic, kind = rs.weight_lattice(), "weight"
    else:
        analytic = IntegerLattice(tuple(ex.vec(g) for g in lat["generators"]), rs.dim)
        kind = "explicit"
    return SpaceSpec(
        name=entry["name"],
        rs=rs,
        theta=theta,
        analytic_lattice=analytic,
        flavor=entry.get("flavor", "K0"),
        analytic_kind=kind,
        oracles=tuple(entry.get("oracles", ())),
        comment=entry.get("comment", ""),
        line=line,
    )


def parse_catalog(text: str) -> list[SpaceSpec]:
    try:
        root = yaml.compose(text)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise CatalogError(f"parse error: {getattr(exc, 'problem', exc)}",
                           None if mark is None else mark.line + 1) from exc
    if root is None:
        raise CatalogError("empty catalog", 1)
    try:
        jsonschema.validate(data, _schema())
    except jsonschema.ValidationError as exc:
        line = _line_for_path(root, list(exc.absolute_path))
        raise CatalogError(f"schema violation at {'/'.join(map(str, exc.absolute_path)) or '<root>'}: {exc.message}",
                           line) from exc
    entry_nodes = _entries_node(root)
    specs = []
    seen = set()
    for entry, node in zip(data["spaces"], entry_nodes):
        line = node.start_mark.line + 1
        if entry["name"] in seen:
            raise CatalogError(f"duplicate space name {entry['name']!r}", line)
        seen.add(entry["name"])
        try:
            spec = spec_from_entry(entry, line)
        except (ValueError, ZeroDivisionError) as exc:
            raise CatalogError(f"{entry['name']}: {exc}", line) from exc
        bad = validate_spec(spec)
        if bad is not None:
            raise CatalogError(f"{entry['name']}: {bad}", line)
        specs.append(spec)
    return specs


def _entries_node(root):
    for key, value in root.value:
        if key.value == "spaces":
            return value.value
    return []


def _line_for_path(node, path) -> int | None:
    line = node.start_mark.line + 1
    for step in path:
        if isinstance(node, yaml.MappingNode):
            nxt = next((v for k, v in node.value if k.value == step), None)
        elif isinstance(node, yaml.SequenceNode) and isinstance(step, int) and step < len(node.value):
            nxt = node.value[step]
        else:
            nxt = None
        if nxt is None:
            break
        node = nxt
        line = node.start_mark.line + 1
    return line


def load_catalog(path: str | Path | None = None) -> list[SpaceSpec]:
    """Load and validate a catalog file (the bundled one by default)."""
    p = default_catalog_path() if path is None else Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise CatalogError(f"cannot read catalog {p}: {exc}") from exc
    return parse_catalog(text)


def find_space(specs: Sequence[SpaceSpec], name: str) -> SpaceSpec:
    for s in specs:
        if s.name == name:
            return s
    raise KeyError(name)
