"""Command-line interface: ``flatradon <command> ...``.

Exit codes: 0 success, 1 oracle mismatch, 2 configuration or load error,
3 bad user input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import exact as ex
from . import funk
from .kernel import KernelVerdict, Verdict, dominant_analytic_weights, enumerate_spherical, in_kernel, \
    is_transform_injective, support
from .spaces import CatalogError, SpaceSpec, dual_basis_x, find_space, lattice_Lambda, lattice_LambdaHat, \
    load_catalog, restricted_roots

EXIT_OK, EXIT_MISMATCH, EXIT_CONFIG, EXIT_INPUT = 0, 1, 2, 3
SCHEMA_VERSION = 1
CSV_FIELDS = ("space", "omega", "verdict", "certificate", "oracle")


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(f"{self.prog}: error: {message}", EXIT_INPUT)


# -- report rows -------------------------------------------------------------


@dataclass
class ReportRow:
    space: str
    omega: tuple[int, ...]
    verdict: str
    certificate: dict
    oracle: str = "unchecked"
    notes: list[str] = field(default_factory=list)

    def as_json(self) -> dict:
        return {"space": self.space, "omega": list(self.omega), "verdict": self.verdict,
                "certificate": self.certificate, "oracle": self.oracle}

    def as_csv(self) -> dict:
        cert = self.certificate
        summary = f"{cert['kind']}:{';'.join(map(str, cert['value']))}" if cert else ""
        return {"space": self.space, "omega": " ".join(map(str, self.omega)), "verdict": self.verdict,
                "certificate": summary, "oracle": self.oracle}


def certificate_of(v: KernelVerdict) -> dict:
    if v.kind is Verdict.DESCENDS:
        return {"kind": "coordinates", "value": list(v.coords)}
    if v.kind is Verdict.IN_KERNEL:
        return {"kind": "residue", "value": ex.fmt_vec(v.residue)}
    return {}


def _fund(spec: SpaceSpec, omega) -> tuple[int, ...]:
    return tuple(int(c) for c in spec.rs.to_fundamental(omega))


def row_for(spec: SpaceSpec, v: KernelVerdict) -> ReportRow:
    return ReportRow(spec.name, _fund(spec, v.omega), v.kind.value, certificate_of(v))


def _table(rows: list[ReportRow], space: str, bound: int, fmt: str) -> str:
    if fmt == "json":
        doc = {"schema": SCHEMA_VERSION, "space": space, "bound": bound, "rows": [r.as_json() for r in rows]}
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r.as_csv())
    return buf.getvalue()


def _vecs(vs) -> str:
    return ", ".join("(" + ", ".join(ex.fmt_vec(v)) + ")" for v in vs) or "(none)"


# -- commands ----------------------------------------------------------------


def cmd_catalog(specs: list[SpaceSpec], args) -> int:
    print(f"{'name':<16} {'system':<8} {'rank':>4} {'a-rank':>6} {'|Sigma+|':>8} {'flavor':<6}")
    for s in specs:
        rd = restricted_roots(s)
        print(f"{s.name:<16} {s.rs.label:<8} {s.rs.rank:>4} {len(rd.simple):>6} {len(rd.sigma_pos):>8} {s.flavor:<6}")
    return EXIT_OK


def cmd_analyze(spec: SpaceSpec, args) -> int:
    rd = restricted_roots(spec)
    lam, lamhat = lattice_Lambda(spec), lattice_LambdaHat(spec)
    inj = is_transform_injective(spec)
    index = lam.index_in(lamhat)
    if args.format == "json":
        doc = {
            "schema": SCHEMA_VERSION, "space": spec.name, "flavor": spec.flavor,
            "sigma_plus": [ex.fmt_vec(v) for v in rd.sigma_pos],
            "simple": [ex.fmt_vec(v) for v in rd.simple],
            "Lambda": [ex.fmt_vec(v) for v in lam.basis()],
            "LambdaHat": [ex.fmt_vec(v) for v in lamhat.basis()],
            "index": index,
            "injective": inj.injective,
            "spherical_lattice": [ex.fmt_vec(v) for v in inj.spherical_generators],
        }
        if inj.injective:
            doc["containment"] = [list(c) for c in inj.containment]
        else:
            doc["witness"] = {"omega": list(_fund(spec, inj.witness.omega)),
                              "dual": ex.fmt_vec(inj.witness.dual),
                              "residue": ex.fmt_vec(inj.witness.residue)}
        print(json.dumps(doc, indent=2))
        return EXIT_OK
    print(f"space: {spec.name} ({spec.rs.label}, flavor {spec.flavor})")
    print(f"Sigma+: {_vecs(rd.sigma_pos)}")
    print(f"simple restricted roots: {_vecs(rd.simple)}")
    print(f"Lambda generators: {_vecs(lam.basis())}")
    print(f"LambdaHat generators: {_vecs(lamhat.basis())}")
    print(f"index [LambdaHat:Lambda]: {index}")
    print(f"spherical lattice generators: {_vecs(inj.spherical_generators)}")
    if inj.injective:
        print("injective: yes")
        for g, c in zip(inj.spherical_generators, inj.containment):
            print(f"  certificate: ({', '.join(ex.fmt_vec(g))}) = {list(c)} in Lambda generators")
    else:
        w = inj.witness
        print("injective: no")
        print(f"  witness omega = {list(_fund(spec, w.omega))} (fundamental coordinates), "
              f"omega* = ({', '.join(ex.fmt_vec(w.dual))}), residue mod Lambda = ({', '.join(ex.fmt_vec(w.residue))})")
    return EXIT_OK


def _parse_coords(spec: SpaceSpec, coords: Sequence[str]) -> tuple:
    if len(coords) != spec.rs.rank:
        raise CliError(f"{spec.name} needs {spec.rs.rank} fundamental coordinates, got {len(coords)}", EXIT_INPUT)
    try:
        vals = [Fraction(c) for c in coords]
    except (ValueError, ZeroDivisionError):
        raise CliError(f"coordinates must be integers: {' '.join(coords)}", EXIT_INPUT) from None
    if any(v.denominator != 1 for v in vals):
        raise CliError("coordinates must be integers", EXIT_INPUT)
    if any(v < 0 for v in vals):
        raise CliError(f"omega = {coords} is not dominant (negative fundamental coordinate)", EXIT_INPUT)
    omega = spec.rs.from_fundamental(vals)
    if omega not in spec.analytic_lattice:
        raise CliError(f"omega = {coords} is not analytically integral for {spec.name}", EXIT_INPUT)
    return omega


def cmd_test_weight(spec: SpaceSpec, args) -> int:
    omega = _parse_coords(spec, args.coords)
    v = in_kernel(spec, omega)
    row = row_for(spec, v)
    if args.format == "json":
        print(json.dumps({"schema": SCHEMA_VERSION, **row.as_json()}, indent=2))
        return EXIT_OK
    print(f"space: {spec.name}")
    print(f"omega: {list(row.omega)} = ({', '.join(ex.fmt_vec(omega))})")
    print(f"verdict: {v.kind.value}")
    if v.kind is not Verdict.NOT_SPHERICAL:
        print(f"omega*: ({', '.join(ex.fmt_vec(v.dual))})")
        print(f"certificate: {v.summary()}")
    return EXIT_OK


def _check_bound(bound: int) -> None:
    if bound < 0:
        raise CliError("bound must be non-negative", EXIT_INPUT)


def cmd_enumerate(spec: SpaceSpec, args) -> int:
    _check_bound(args.bound)
    rows = [row_for(spec, v) for _, v in enumerate_spherical(spec, args.bound)]
    sys.stdout.write(_table(rows, spec.name, args.bound, args.format))
    return EXIT_OK


# -- verification -------------------------------------------------------------


class _Oracle:
    """Runs the matrix model and Funk quadrature checks for one space."""

    def __init__(self, spec: SpaceSpec, tol: float, seed: int):
        from . import oracle
        self.o = oracle
        self.spec = spec
        self.tol = tol
        self.seed = seed
        models = [m for m in spec.oracles if m in oracle.MODELS]
        self.alg = None
        if models:
            alg = oracle.build_algebra(models[0])
            if tuple(alg.rs.simple_roots) != tuple(spec.rs.simple_roots):
                raise CliError(f"{spec.name}: model {models[0]} realizes a different base", EXIT_CONFIG)
            self.alg = alg
        self.funk = "funk-s2" in spec.oracles
        self._irreps: dict = {}

    @property
    def available(self) -> bool:
        return self.alg is not None or self.funk

    def _invariant(self, omega):
        """(irrep, k-invariants, F-invariant flags) or None when out of reach."""
        if omega in self._irreps:
            return self._irreps[omega]
        try:
            ir = self.o.build_irrep(self.alg, omega)
        except ValueError:  # includes UnreachableWeight
            self._irreps[omega] = None
            return None
        inv = self.o.k_invariants(ir, self.alg)
        xs = dual_basis_x(self.spec)
        f_ok = [self.o.f_invariant(ir, self.alg, v, xs, self.spec.rs.gram) for v in inv]
        self._irreps[omega] = (ir, inv, f_ok)
        return self._irreps[omega]

    def check(self, omega, verdict: KernelVerdict) -> tuple[str, list[str]]:
        spec = self.spec
        sym_sph = verdict.kind is not Verdict.NOT_SPHERICAL
        problems: list[str] = []
        ran = False
        if self.alg is not None:
            got = self._invariant(omega)
            if got is not None:
                ran = True
                ir, inv, f_ok = got
                if len(inv) > 1:
                    problems.append(f"k-invariants have dimension {len(inv)} > 1")
                orc_sph = len(inv) == 1 and (spec.flavor != "KZ" or f_ok[0])
                if orc_sph != sym_sph:
                    problems.append(f"spherical: symbolic {sym_sph}, oracle {orc_sph}")
                elif sym_sph:
                    predicted = support(spec, omega)
                    found = self.o.support_of(ir, inv[0])
                    if predicted != found:
                        problems.append(f"support: symbolic {_vecs(sorted(predicted))}, oracle {_vecs(sorted(found))}")
                    problems += self._reynolds(verdict)
        if self.funk and sym_sph:
            l = int(spec.rs.to_fundamental(omega)[0]) // 2  # noqa: E741
            if l <= 12:
                ran = True
                normals = funk.random_normals(50, np.random.default_rng(self.seed))
                mag = max(funk.max_transform(l, m, normals) for m in range(-l, l + 1))
                killed = mag <= self.tol
                if killed != (verdict.kind is Verdict.IN_KERNEL):
                    problems.append(f"funk: verdict {verdict.kind.value}, max |transform| of degree {l} = {mag:.3e}")
        if problems:
            return "mismatch", problems
        return ("confirmed" if ran else "unchecked"), []

    def _reynolds(self, verdict: KernelVerdict) -> list[str]:
        got = self._invariant(verdict.dual)
        if got is None:
            return []
        ir, inv, _ = got
        if len(inv) != 1:
            return [f"V(omega*) has {len(inv)} k-invariants"]
        r = abs(self.o.reynolds_RA(ir, self.alg, inv[0], inv[0]))
        if r <= self.tol:
            orc_kernel = True
        elif r >= 1e-3:
            orc_kernel = False
        else:
            return [f"Reynolds value {r:.3e} is neither zero nor bounded away from zero"]
        if orc_kernel != (verdict.kind is Verdict.IN_KERNEL):
            return [f"kernel: verdict {verdict.kind.value}, Reynolds |R_A v*| = {r:.3e}"]
        return []


def cmd_verify(spec: SpaceSpec, args) -> int:
    _check_bound(args.bound)
    orc = _Oracle(spec, args.tolerance, args.seed)
    if not orc.available:
        print(f"warning: {spec.name} has no oracle model; all rows unchecked", file=sys.stderr)
    rows = []
    failed = False
    for _, omega in dominant_analytic_weights(spec, args.bound):
        v = in_kernel(spec, omega)
        row = row_for(spec, v)
        if orc.available:
            row.oracle, row.notes = orc.check(omega, v)
        rows.append(row)
        if row.oracle == "mismatch":
            failed = True
            for note in row.notes:
                print(f"mismatch at omega = {list(row.omega)}: {note}", file=sys.stderr)
    sys.stdout.write(_table(rows, spec.name, args.bound, args.format))
    return EXIT_MISMATCH if failed else EXIT_OK


def cmd_funk(args) -> int:
    if not 0 <= args.l <= 12:
        raise CliError("--l must be between 0 and 12", EXIT_INPUT)
    if args.samples < 4:
        raise CliError("--samples must be at least 4", EXIT_INPUT)
    if args.trials < 10:
        raise CliError("--trials must be at least 10", EXIT_INPUT)
    rng = np.random.default_rng(args.seed)
    normals = funk.random_normals(args.trials, rng)
    expected = funk.legendre_at_zero(args.l)
    ratio = funk.funk_hecke_ratio(args.l, normals=normals, samples=args.samples)
    rows = []
    ok = True
    for m in range(-args.l, args.l + 1):
        single = funk.fit_ratio(args.l, [m], normals, args.samples)
        rows.append(funk.RatioRow(args.l, m, single[0], single[1]))
        ok &= abs(single[0] - expected) <= 1e-8 and single[1] <= 1e-8
        if args.l % 2:
            ok &= single[2] <= args.tolerance
    if args.format == "json":
        doc = {"schema": SCHEMA_VERSION, "l": args.l, "samples": args.samples, "trials": args.trials,
               "seed": args.seed, "legendre_p_at_0": expected, "ratio": ratio,
               "rows": [r._asdict() for r in rows]}
        print(json.dumps(doc, indent=2))
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(funk.RatioRow._fields)
        for r in rows:
            w.writerow([r.l, r.m, repr(r.ratio), repr(r.residual)])
        sys.stdout.write(buf.getvalue())
    if not ok:
        print(f"mismatch: ratios for l = {args.l} differ from P_l(0) = {expected}", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


# -- entry point -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="flatradon", description="Kernel of the maximal flat Radon transform on compact symmetric spaces.")
    p.add_argument("--catalog", help="catalog YAML file (default: bundled)")
    p.add_argument("--seed", type=int, default=42, help="seed for random circles (default 42)")
    p.add_argument("--tolerance", type=float, default=1e-10, help="numeric zero threshold (default 1e-10)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("catalog", help="list the spaces in the catalog")

    a = sub.add_parser("analyze", help="restricted roots, lattices and injectivity")
    a.add_argument("space")
    a.add_argument("--format", choices=("text", "json"), default="text")

    t = sub.add_parser("test-weight", help="kernel verdict for one highest weight")
    t.add_argument("space")
    t.add_argument("coords", nargs="+", help="fundamental-weight coordinates")
    t.add_argument("--format", choices=("text", "json"), default="text")

    for name, helptext in (("enumerate", "table of spherical weights and verdicts"),
                           ("verify", "cross-check verdicts against the numeric oracles")):
        e = sub.add_parser(name, help=helptext)
        e.add_argument("space")
        e.add_argument("--bound", type=int, required=True, help="maximum fundamental-coordinate sum")
        e.add_argument("--format", choices=("json", "csv"), default="json")

    f = sub.add_parser("funk", help="Funk-Hecke ratios on the 2-sphere")
    f.add_argument("--l", type=int, required=True)
    f.add_argument("--samples", type=int, default=None, help="points per circle (default 2l+2)")
    f.add_argument("--trials", type=int, default=50)
    f.add_argument("--format", choices=("csv", "json"), default="csv")
    return p


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "funk":
            if args.samples is None:
                args.samples = max(4, 2 * args.l + 2)
            return cmd_funk(args)
        try:
            specs = load_catalog(args.catalog)
        except CatalogError as exc:
            raise CliError(f"catalog error: {exc}", EXIT_CONFIG) from None
        if args.command == "catalog":
            return cmd_catalog(specs, args)
        try:
            spec = find_space(specs, args.space)
        except KeyError:
            names = ", ".join(s.name for s in specs)
            raise CliError(f"unknown space {args.space!r}; known: {names}", EXIT_CONFIG) from None
        handler = {"analyze": cmd_analyze, "test-weight": cmd_test_weight,
                   "enumerate": cmd_enumerate, "verify": cmd_verify}[args.command]
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return handler(spec, args)
    except CliError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
