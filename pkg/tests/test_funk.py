from math import factorial, pi, sqrt

import numpy as np
import pytest
from scipy.spatial.transform import Rotation
from scipy.special import lpmv

from flatradon.funk import (BoundednessViolation, GreatCircle, HarmonicSpec, boundedness_check, combination,
                            eval_harmonic, funk_hecke_ratio, funk_transform, harmonic_function, harmonics,
                            legendre_at_zero, max_transform, random_normals, ratio_table, sphere_quadrature)


def test_constant_and_dipole_values():
    pts = random_normals(5, np.random.default_rng(1))
    assert np.allclose(eval_harmonic(HarmonicSpec(0, 0), pts), 1 / sqrt(4 * pi), atol=1e-15)
    assert eval_harmonic(HarmonicSpec(1, 0), (0, 0, 1)) == pytest.approx(sqrt(3 / (4 * pi)), abs=1e-15)


def test_non_unit_point_rejected():
    with pytest.raises(ValueError):
        eval_harmonic(HarmonicSpec(1, 0), (0, 0, 2))
    with pytest.raises(ValueError):
        HarmonicSpec(2, 3)


def test_orthonormality():
    pts, w = sphere_quadrature(8)
    ys = harmonics(4, pts)
    keys = sorted(ys)
    gram = np.array([[w @ (ys[a] * ys[b]) for b in keys] for a in keys])
    assert np.max(np.abs(gram - np.eye(len(keys)))) <= 1e-10


@pytest.mark.parametrize("l,m", [(2, 1), (3, 2), (5, 5), (7, 1), (9, 4)])
def test_matches_scipy_legendre(l, m):  # noqa: E741
    # scipy includes the Condon-Shortley phase; undo it
    x = np.linspace(-0.9, 0.9, 7)
    phi = 0.3
    pts = np.stack([np.sqrt(1 - x ** 2) * np.cos(phi), np.sqrt(1 - x ** 2) * np.sin(phi), x], axis=1)
    norm = sqrt((2 * l + 1) / (4 * pi) * factorial(l - m) / factorial(l + m))
    ref = (-1) ** m * sqrt(2) * norm * lpmv(m, l, x) * np.cos(m * phi)
    assert np.allclose(harmonic_function(l, m)(pts), ref, atol=1e-12)


def test_circle_frame():
    c = GreatCircle((1, 2, 2))
    u, v, n = c.frame
    assert abs(np.linalg.norm(n) - 1) <= 1e-14
    assert np.allclose(np.cross(u, v), n)
    assert np.allclose(np.linalg.norm(c.points(16), axis=1), 1)


def test_transform_examples():
    eq = GreatCircle((0, 0, 1))
    assert funk_transform(lambda p: np.ones(len(p)), GreatCircle((0.3, -1, 2)), 8) == pytest.approx(1)
    assert abs(funk_transform(harmonic_function(1, 0), eq, 8)) <= 1e-15
    pole = eval_harmonic(HarmonicSpec(2, 0), (0, 0, 1))
    assert funk_transform(harmonic_function(2, 0), eq, 8) == pytest.approx(-0.5 * pole, abs=1e-14)
    with pytest.raises(ValueError):
        funk_transform(harmonic_function(0, 0), eq, 3)


def test_legendre_at_zero():
    assert [legendre_at_zero(l) for l in range(0, 8, 2)] == [1, -0.5, 0.375, -0.3125]
    assert all(legendre_at_zero(l) == 0 for l in range(1, 12, 2))


def test_funk_hecke_examples():
    rng = np.random.default_rng(42)
    assert funk_hecke_ratio(0, 10, rng) == pytest.approx(1, abs=1e-12)
    assert funk_hecke_ratio(4, 10, np.random.default_rng(1)) == pytest.approx(3 / 8, abs=1e-8)
    normals = random_normals(50, np.random.default_rng(2))
    assert max(max_transform(3, m, normals) for m in range(-3, 4)) <= 1e-10
    with pytest.raises(ValueError):
        funk_hecke_ratio(2, normals=np.array([[0, 0, 1.0]] * 10))
    with pytest.raises(ValueError):
        funk_hecke_ratio(13, 10)


def test_sample_independence_above_threshold():
    normals = random_normals(10, np.random.default_rng(3))
    l = 6  # noqa: E741
    a = [max_transform(l, m, normals, samples=2 * l + 1) for m in range(-l, l + 1)]
    b = [max_transform(l, m, normals, samples=4 * l + 3) for m in range(-l, l + 1)]
    assert np.allclose(a, b, atol=1e-12)


def test_rotation_equivariance():
    rng = np.random.default_rng(7)
    coeffs = {(l, m): float(rng.standard_normal()) for l in range(5) for m in range(-l, l + 1)}  # noqa: E741
    f = combination(coeffs)
    for seed in range(3):
        r = Rotation.random(random_state=seed).as_matrix()
        c = GreatCircle(tuple(random_normals(1, rng)[0]))
        lhs = funk_transform(lambda p: f(p @ r.T), c, 12)
        rhs = funk_transform(f, c.rotated(r), 12)
        assert abs(lhs - rhs) <= 1e-10


def test_ratio_table_rows():
    rows = list(ratio_table(3, 12, np.random.default_rng(5)))
    assert len(rows) == 16
    for row in rows:
        assert abs(row.ratio - legendre_at_zero(row.l)) <= 1e-8 and row.residual <= 1e-8


def test_boundedness_examples():
    r = boundedness_check({(0, 0): 1.0}, 100, np.random.default_rng(0))
    assert r.norm_in == pytest.approx(1, abs=1e-12) and r.norm_out == pytest.approx(1, abs=1e-12)
    r = boundedness_check({(3, 1): 1.0}, 100, np.random.default_rng(0))
    assert r.norm_out <= 1e-10
    r = boundedness_check({(2, 0): 1.0}, 4000, np.random.default_rng(0))
    assert abs(r.norm_out / r.norm_in - 0.5) <= 4 * r.stderr
    with pytest.raises(ValueError):
        boundedness_check({(9, 0): 1.0}, 10)
    assert issubclass(BoundednessViolation, AssertionError)
