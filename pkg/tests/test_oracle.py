import warnings
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from flatradon import exact as ex
from flatradon.kernel import Verdict, in_kernel, is_spherical, support
from flatradon.oracle import (MODELS, UnreachableWeight, build_algebra, build_irrep, exactness_threshold,
                              f_invariant, k_invariants, reynolds_RA, su2_exact_invariant, support_of,
                              zero_restricted_projection)
from flatradon.roots import dual_highest_weight, weyl_dimension
from flatradon.spaces import dual_basis_x


@pytest.fixture(scope="module")
def algs():
    return {name: build_algebra(name) for name in MODELS}


def test_algebra_dimensions(algs):
    assert (algs["su2"].dim, len(algs["su2"].k_basis)) == (3, 1)
    assert (algs["su3"].dim, len(algs["su3"].k_basis)) == (8, 3)
    assert (algs["so5"].dim, len(algs["so5"].k_basis)) == (10, 6)
    assert (algs["su2xsu2"].dim, len(algs["su2xsu2"].k_basis)) == (6, 3)
    k = algs["su2"].k_basis[0]
    assert np.allclose(k, -k.T)


def test_su2_coroot_normalization(algs):
    su2 = algs["su2"]
    a = su2.rs.simple_roots[0]
    coroot = ex.scale(Fraction(2) / su2.rs.inner(a, a), a)
    h, e = su2.cartan(coroot), su2.raising[0]
    assert np.allclose(h @ e - e @ h, 2 * e, atol=1e-12)


def test_unsupported_algebra():
    with pytest.raises(ValueError):
        build_algebra("g2")


def test_irrep_examples(algs):
    su2, su3 = algs["su2"], algs["su3"]
    assert build_irrep(su2, su2.rs.from_fundamental((2,))).dim == 3
    assert build_irrep(su3, su3.rs.from_fundamental((1, 1))).dim == 8
    for alg in algs.values():
        triv = build_irrep(alg, ex.zeros(alg.rs.dim))
        assert triv.dim == 1 and all(np.allclose(k, 0) for k in triv.k_ops)


def test_unreachable_and_invalid(algs):
    su2, so5 = algs["su2"], algs["so5"]
    with pytest.raises(UnreachableWeight):
        build_irrep(su2, su2.rs.from_fundamental((7,)))
    with pytest.raises(ValueError):
        build_irrep(so5, so5.rs.from_fundamental((0, 1)))  # spin weight
    with pytest.raises(ValueError):
        build_irrep(su2, ex.neg(su2.rs.fundamental[0]))


@pytest.mark.parametrize("name,coords", [("su2", (c,)) for c in range(5)]
                         + [("su3", c) for c in [(1, 0), (0, 1), (1, 1), (2, 1)]]
                         + [("so5", c) for c in [(1, 0), (0, 2), (1, 2)]]
                         + [("su2xsu2", c) for c in [(1, 0), (1, 1), (2, 1)]])
def test_irrep_structure(algs, name, coords):
    alg = algs[name]
    om = alg.rs.from_fundamental(coords)
    ir = build_irrep(alg, om)
    assert ir.dim == weyl_dimension(alg.rs, om)
    # commutation relations survive restriction to the carrier
    xs = alg.basis
    for x, y in product(xs[:4], xs[-3:]):
        lhs = ir.represent(x @ y - y @ x)
        rx, ry = ir.represent(x), ir.represent(y)
        assert np.allclose(lhs, rx @ ry - ry @ rx, atol=1e-9)
    hw = np.zeros(ir.dim)
    hw[ir.highest_index] = 1
    assert ir.weights[ir.highest_index] == om
    for e in ir.raising:
        assert np.allclose(e @ hw, 0, atol=1e-9)
    # weight vectors: Cartan acts diagonally by the recorded weights
    for j in range(alg.rs.dim):
        t = tuple(Fraction(int(i == j)) for i in range(alg.rs.dim))
        h = ir.represent(alg.cartan(t))
        assert np.allclose(h, np.diag([float(ex.dot(w, t)) for w in ir.weights]), atol=1e-9)


def test_su2_invariant_examples(algs):
    su2 = algs["su2"]
    ir = build_irrep(su2, su2.rs.from_fundamental((2,)))
    (v,) = k_invariants(ir, su2)
    a = su2.rs.simple_roots[0]
    assert support_of(ir, v) == {a, ex.neg(a)}
    assert k_invariants(build_irrep(su2, su2.rs.fundamental[0]), su2) == []
    triv = build_irrep(su2, ex.zeros(2))
    (t,) = k_invariants(triv, su2)
    assert support_of(triv, t) == {ex.zeros(2)}
    with pytest.raises(ValueError):
        support_of(ir, np.zeros(3))


def test_su2_exact_and_float_supports_agree(algs):
    su2 = algs["su2"]
    for m in range(7):
        ir = build_irrep(su2, su2.rs.from_fundamental((m,)))
        inv = k_invariants(ir, su2)
        exact = su2_exact_invariant(m)
        assert bool(inv) == bool(exact) == (m % 2 == 0)
        if inv:
            assert support_of(ir, inv[0]) == set(exact)
    # e1^2 + e2^2 up to scale
    assert set(su2_exact_invariant(2).values()) == {1}


def test_reynolds_examples(algs):
    su2 = algs["su2"]
    ir = build_irrep(su2, su2.rs.from_fundamental((2,)))
    (v,) = k_invariants(ir, su2)
    assert abs(reynolds_RA(ir, su2, v, v)) <= 1e-10
    triv = build_irrep(su2, ex.zeros(2))
    one = np.ones(1)
    assert abs(reynolds_RA(triv, su2, one, one) - 1) <= 1e-12
    ir4 = build_irrep(su2, su2.rs.from_fundamental((4,)))
    (v4,) = k_invariants(ir4, su2)
    assert abs(reynolds_RA(ir4, su2, v4, v4)) > 1e-3


@pytest.mark.parametrize("name,coords", [("su2", (4,)), ("su3", (2, 2)), ("su3", (4, 0)), ("su2xsu2", (2, 2))])
def test_reynolds_matches_exact_projector(algs, name, coords):
    alg = algs[name]
    ir = build_irrep(alg, alg.rs.from_fundamental(coords))
    rng = np.random.default_rng(0)
    v = rng.standard_normal(ir.dim) + 1j * rng.standard_normal(ir.dim)
    u = rng.standard_normal(ir.dim) + 1j * rng.standard_normal(ir.dim)
    exact = np.vdot(u, zero_restricted_projection(ir, alg, v))
    n = exactness_threshold(ir, alg)
    got = reynolds_RA(ir, alg, v, u, n)
    assert abs(got - exact) <= 1e-10 * max(1, abs(exact))
    assert abs(reynolds_RA(ir, alg, v, u, 2 * n) - got) < 1e-12 * max(1, abs(exact)) * 10


def test_reynolds_warns_below_threshold(algs):
    su2 = algs["su2"]
    ir = build_irrep(su2, su2.rs.from_fundamental((4,)))
    v = np.ones(ir.dim)
    with pytest.warns(RuntimeWarning):
        reynolds_RA(ir, su2, v, v, 2)


MODEL_SPACES = [("sphere-2", "su2"), ("su3-mod-so3", "su3"), ("sphere-4", "so5"), ("group-su2", "su2xsu2"),
                ("rp-2", "su2"), ("ad-su3-mod-so3", "su3"), ("rp-4", "so5"), ("group-so3", "su2xsu2")]


@pytest.mark.parametrize("space,model", MODEL_SPACES)
def test_oracle_agrees_with_criteria(catalog, algs, space, model):
    spec, alg = catalog[space], algs[model]
    assert tuple(alg.rs.simple_roots) == tuple(spec.rs.simple_roots)
    xs = dual_basis_x(spec)
    for c in product(range(5), repeat=spec.rs.rank):
        if sum(c) > 4:
            continue
        om = spec.rs.from_fundamental(c)
        if om not in spec.analytic_lattice or not alg.in_analytic_lattice(om):
            continue
        try:
            ir = build_irrep(alg, om)
        except UnreachableWeight:
            continue
        inv = k_invariants(ir, alg)
        assert len(inv) <= 1
        found = bool(inv) and (spec.flavor == "K0" or f_invariant(ir, alg, inv[0], xs, spec.rs.gram))
        assert found == is_spherical(spec, om)
        if found and spec.flavor == "K0":
            assert support_of(ir, inv[0]) == support(spec, om)
        if found:
            verdict = in_kernel(spec, om)
            ird = build_irrep(alg, dual_highest_weight(spec.rs, om))
            (vd,) = k_invariants(ird, alg)
            with warnings.catch_warnings():
                warnings.simplefilter("error")
                r = abs(reynolds_RA(ird, alg, vd, vd))
            if verdict.kind is Verdict.IN_KERNEL:
                assert r <= 1e-10
            else:
                assert r >= 1e-3
