from fractions import Fraction

import pytest

from flatradon import exact as ex
from flatradon.lattice import IntegerLattice
from flatradon.roots import build_root_system, direct_sum, with_base
from flatradon.spaces import (CatalogError, SpaceSpec, dual_basis_x, lattice_Lambda, lattice_LambdaHat,
                              load_catalog, parse_catalog, restricted_roots, restricted_weyl_group,
                              validate_spec)

REQUIRED = {"sphere-2", "rp-2", "sphere-4", "su3-mod-so3", "group-su2"}


def make(rs, theta, lattice="weight", flavor="K0", name="t"):
    lat = rs.weight_lattice() if lattice == "weight" else rs.root_lattice()
    return SpaceSpec(name, rs, ex.mat(theta), lat, flavor)


def minus_id(n):
    return [[-int(i == j) for j in range(n)] for i in range(n)]


def test_validate_examples():
    a1 = build_root_system("A", 1)
    assert validate_spec(make(a1, minus_id(2))) is None
    a2 = build_root_system("A", 2)
    bad = validate_spec(make(a2, [[int(i == j) for j in range(3)] for i in range(3)]))
    assert bad is not None and bad.code == "empty-restricted-system"
    b2 = build_root_system("B", 2)
    spec = make(b2, [[-1, 0], [0, 1]])
    assert validate_spec(spec) is None
    assert set(restricted_roots(spec).fixed_roots) == {(0, 1), (0, -1)}


def test_validate_rejections():
    b2 = build_root_system("B", 2)
    assert validate_spec(make(b2, [[2, 0], [0, 1]])).code == "not-involution"
    assert validate_spec(make(b2, [[1, 0], [0, 1], [0, 0]])).code == "shape"
    a2 = build_root_system("A", 2)
    # a rotation-like involution that is not an isometry
    not_iso = [[1, 0, 0], [1, -1, 0], [0, 0, 1]]
    assert validate_spec(make(a2, not_iso)).code in {"not-isometry", "not-root-permutation"}
    # swap of two coordinates of A2 with the standard base breaks the positivity condition
    swap01 = [[0, 1, 0], [1, 0, 0], [0, 0, 1]]
    v = validate_spec(make(a2, swap01))
    assert v.code == "positivity" and v.witness is not None


def test_restricted_roots_examples():
    a1 = build_root_system("A", 1)
    rd = restricted_roots(make(a1, minus_id(2)))
    assert rd.sigma_pos == (a1.simple_roots[0],) and rd.simple == (a1.simple_roots[0],)
    b2 = build_root_system("B", 2)
    rd = restricted_roots(make(b2, [[-1, 0], [0, 1]]))
    assert rd.sigma_pos == ((1, 0),) and rd.simple == ((1, 0),)


def test_group_manifold_data(catalog):
    spec = catalog["group-su2"]
    rd = restricted_roots(spec)
    h = Fraction(1, 2)
    assert rd.sigma_pos == ((h, -h, -h, h),)
    assert lattice_Lambda(spec).same_as(IntegerLattice.spanned_by([(1, -1, -1, 1)]))
    assert lattice_LambdaHat(spec).same_as(IntegerLattice.spanned_by([(h, -h, -h, h)]))


def test_lattice_examples(catalog):
    s2 = catalog["sphere-2"]
    assert lattice_Lambda(s2).same_as(IntegerLattice.spanned_by([(2, -2)]))
    assert lattice_LambdaHat(s2).same_as(IntegerLattice.spanned_by([(1, -1)]))
    s4 = catalog["sphere-4"]
    assert lattice_Lambda(s4).same_as(IntegerLattice.spanned_by([(2, 0)]))


def test_dual_basis_examples(catalog):
    s2 = catalog["sphere-2"]
    (x,) = dual_basis_x(s2)
    rs = s2.rs
    assert rs.inner(rs.simple_roots[0], x) == 1
    for m in range(5):
        assert rs.inner(ex.scale(m, rs.fundamental[0]), x) == Fraction(m, 2)
    s4 = catalog["sphere-4"]
    (x,) = dual_basis_x(s4)
    for k in range(4):
        assert s4.rs.inner((k, 0), x) == k


def test_required_entries_present(catalog):
    assert REQUIRED <= set(catalog)
    s2, rp2 = catalog["sphere-2"], catalog["rp-2"]
    assert (s2.rs, s2.theta, s2.analytic_lattice) == (rp2.rs, rp2.theta, rp2.analytic_lattice)
    assert restricted_roots(s2) == restricted_roots(rp2)
    assert lattice_Lambda(s2).same_as(lattice_Lambda(rp2))
    assert s2.flavor == "K0" and rp2.flavor == "KZ"


def test_catalog_rejects_non_involution_with_line():
    text = """schema: 1
spaces:
  - name: ok
    series: A
    rank: 1
    theta: [[-1, 0], [0, -1]]
    analytic_lattice: root
  - name: broken
    series: B
    rank: 2
    theta: [[2, 0], [0, 1]]
    analytic_lattice: weight
"""
    with pytest.raises(CatalogError) as err:
        parse_catalog(text)
    assert err.value.line == 8
    assert "not-involution" in str(err.value)


def test_catalog_parse_errors_carry_lines(tmp_path):
    with pytest.raises(CatalogError) as err:
        parse_catalog("schema: 1\nspaces:\n  - name: [unclosed\n")
    assert err.value.line is not None
    with pytest.raises(CatalogError) as err:
        parse_catalog("schema: 1\nspaces:\n  - name: x\n    series: A\n    rank: 1\n    theta: [[-1, 0], [0, -1]]\n"
                      "    analytic_lattice: root\n    flavor: KK\n")
    assert err.value.line == 8
    with pytest.raises(CatalogError):
        load_catalog(tmp_path / "missing.yaml")


def test_explicit_generators_and_rationals():
    text = """schema: 1
spaces:
  - name: explicit
    series: A
    rank: 1
    theta: [[-1, 0], [0, -1]]
    analytic_lattice:
      generators: [["1/2", "-1/2"]]
"""
    (spec,) = parse_catalog(text)
    assert spec.analytic_kind == "explicit"
    assert (Fraction(1, 2), Fraction(-1, 2)) in spec.analytic_lattice


def test_with_base_rejects_non_base():
    a1 = build_root_system("A", 1)
    with pytest.raises(ValueError):
        with_base(direct_sum(a1, a1), [(1, -1, 0, 0), (2, -2, 0, 0)])


# -- structural invariants over the whole catalog ----------------------------


def all_specs():
    return load_catalog()


@pytest.mark.parametrize("spec", all_specs(), ids=lambda s: s.name)
def test_restriction_is_projector(spec):
    for a in spec.rs.roots:
        r = spec.restrict(a)
        assert spec.restrict(r) == r
        assert spec.restrict(spec.apply_theta(a)) == ex.neg(r)


@pytest.mark.parametrize("spec", all_specs(), ids=lambda s: s.name)
def test_sigma_structure(spec):
    rd = restricted_roots(spec)
    assert set(rd.sigma) == {ex.neg(b) for b in rd.sigma}
    assert set(rd.sigma) == {spec.restrict(a) for a in spec.rs.roots if not ex.is_zero(spec.restrict(a))}
    for b in rd.sigma_pos:
        coeffs = ex.solve(ex.transpose(rd.simple), b)
        assert coeffs is not None and all(c >= 0 for c in coeffs)
    for i, b in enumerate(rd.simple):
        for c in rd.simple[i + 1:]:
            assert ex.rank([b, c]) == 2


@pytest.mark.parametrize("spec", all_specs(), ids=lambda s: s.name)
def test_lattices_span_minus_eigenspace(spec):
    lam, hat = lattice_Lambda(spec), lattice_LambdaHat(spec)
    assert hat.contains_lattice(lam)
    k = len(restricted_roots(spec).simple)
    assert lam.rank == hat.rank == k
    for g in lam.generators + hat.generators:
        assert spec.is_anti_invariant(g)


@pytest.mark.parametrize("spec", all_specs(), ids=lambda s: s.name)
def test_lattices_weyl_stable(spec):
    lam, hat = lattice_Lambda(spec), lattice_LambdaHat(spec)
    for w in restricted_weyl_group(spec):
        for lat in (lam, hat):
            image = IntegerLattice(tuple(ex.matvec(w, g) for g in lat.generators), lat.dim)
            assert image.same_as(lat)


@pytest.mark.parametrize("spec", all_specs(), ids=lambda s: s.name)
def test_reflection_differences_in_Lambda(spec):
    lam, hat = lattice_Lambda(spec), lattice_LambdaHat(spec)
    for g in hat.generators:
        for b in restricted_roots(spec).simple:
            assert ex.sub(g, spec.rs.reflect(g, b)) in lam


@pytest.mark.parametrize("spec", all_specs(), ids=lambda s: s.name)
def test_Lambda_evaluates_evenly(spec):
    for g in lattice_Lambda(spec).generators:
        for x in dual_basis_x(spec):
            q = spec.rs.inner(g, x)
            assert q.denominator == 1 and q.numerator % 2 == 0
