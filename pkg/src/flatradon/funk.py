"""Great-circle (Funk) transform on S^2 by quadrature.

Real orthonormal spherical harmonics without the Condon-Shortley phase:

    Y_l^0  = N_l0 P_l(cos t)
    Y_l^m  = sqrt(2) N_lm P_l^m(cos t) cos(m p)     (m > 0)
    Y_l^-m = sqrt(2) N_lm P_l^m(cos t) sin(m p)

The transform averages over a circle with the normalized measure, so it sends
Y_l^m to P_l(0) Y_l^m evaluated at the circle's normal.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import pi, sqrt
from typing import Callable, Iterator, Mapping, NamedTuple

import numpy as np

Harmonic = tuple[int, int]


@dataclass(frozen=True)
class HarmonicSpec:
    l: int  # noqa: E741
    m: int

    def __post_init__(self):
        if self.l < 0 or abs(self.m) > self.l:
            raise ValueError(f"invalid harmonic (l={self.l}, m={self.m})")


def _legendre_normalized(lmax: int, x: np.ndarray) -> dict[Harmonic, np.ndarray]:
    """N_lm P_l^m(x) for 0 <= m <= l <= lmax, by the stable normalized recurrence."""
    s = np.sqrt(np.clip(1 - x * x, 0, None))
    out: dict[Harmonic, np.ndarray] = {}
    pmm = np.full_like(x, 1 / sqrt(4 * pi))
    for m in range(lmax + 1):
        if m > 0:
            pmm = sqrt((2 * m + 1) / (2 * m)) * s * pmm
        out[m, m] = pmm
        if m == lmax:
            break
        prev2, prev = pmm, sqrt(2 * m + 3) * x * pmm
        out[m + 1, m] = prev
        for l in range(m + 2, lmax + 1):  # noqa: E741
            a = sqrt((4 * l * l - 1) / (l * l - m * m))
            b = sqrt(((l - 1) ** 2 - m * m) / (4 * (l - 1) ** 2 - 1))
            prev2, prev = prev, a * (x * prev - b * prev2)
            out[l, m] = prev
    return out


def _check_unit(points: np.ndarray) -> None:
    if np.any(np.abs(np.linalg.norm(points, axis=-1) - 1) > 1e-12):
        raise ValueError("harmonics are evaluated at unit vectors only")


def harmonics(lmax: int, points) -> dict[Harmonic, np.ndarray]:
    """All real harmonics of degree <= lmax at an array of unit vectors (..., 3)."""
    pts = np.asarray(points, dtype=float)
    _check_unit(pts)
    x, y, z = pts[..., 0], pts[..., 1], pts[..., 2]
    phi = np.arctan2(y, x)
    leg = _legendre_normalized(lmax, z)
    out: dict[Harmonic, np.ndarray] = {}
    for (l, m), p in leg.items():  # noqa: E741
        if m == 0:
            out[l, 0] = p
        else:
            out[l, m] = sqrt(2) * p * np.cos(m * phi)
            out[l, -m] = sqrt(2) * p * np.sin(m * phi)
    return out


def eval_harmonic(h: HarmonicSpec, point) -> np.ndarray | float:
    val = harmonics(h.l, point)[h.l, h.m]
    return float(val) if np.ndim(val) == 0 else val


def harmonic_function(l: int, m: int) -> Callable[[np.ndarray], np.ndarray]:  # noqa: E741
    h = HarmonicSpec(l, m)
    return lambda pts: harmonics(h.l, pts)[h.l, h.m]


def combination(coeffs: Mapping[Harmonic, float]) -> Callable[[np.ndarray], np.ndarray]:
    lmax = max((l for l, _ in coeffs), default=0)

    def f(pts):
        ys = harmonics(lmax, pts)
        return sum(c * ys[key] for key, c in coeffs.items())
    return f


# -- circles -----------------------------------------------------------------


@dataclass(frozen=True)
class GreatCircle:
    """Circle c(t) = cos(t) u + sin(t) v with (u, v, normal) right-handed."""

    normal: tuple[float, float, float]

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=float)
        norm = np.linalg.norm(n)
        if norm == 0:
            raise ValueError("zero normal")
        object.__setattr__(self, "normal", tuple(n / norm))

    @property
    def frame(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        n = np.asarray(self.normal)
        e = np.eye(3)[int(np.argmin(np.abs(n)))]
        u = np.cross(n, e)
        u /= np.linalg.norm(u)
        return u, np.cross(n, u), n

    def points(self, n: int) -> np.ndarray:
        u, v, _ = self.frame
        t = 2 * pi * np.arange(n) / n
        return np.cos(t)[:, None] * u + np.sin(t)[:, None] * v

    def rotated(self, r: np.ndarray) -> "GreatCircle":
        return GreatCircle(tuple(np.asarray(r) @ np.asarray(self.normal)))


def random_normals(count: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal((count, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def funk_transform(f: Callable[[np.ndarray], np.ndarray], circle: GreatCircle, n: int) -> float:
    """Normalized-measure average of f over the circle by the n-point trapezoid rule."""
    if n < 4:
        raise ValueError("at least 4 samples are required")
    return float(np.mean(f(circle.points(n))))


def circle_points(normals: np.ndarray, n: int) -> np.ndarray:
    """Sample points of many circles at once, shape (len(normals), n, 3)."""
    return np.stack([GreatCircle(tuple(nv)).points(n) for nv in normals])


def transform_many(f: Callable[[np.ndarray], np.ndarray], normals: np.ndarray, n: int) -> np.ndarray:
    """Vectorized funk_transform over the circles with the given normals."""
    if n < 4:
        raise ValueError("at least 4 samples are required")
    return np.mean(f(circle_points(normals, n)), axis=1)


def legendre_at_zero(l: int) -> float:  # noqa: E741
    """P_l(0) by the three-term recurrence."""
    p0, p1 = 1.0, 0.0
    if l == 0:
        return p0
    for k in range(1, l):
        p0, p1 = p1, -(k / (k + 1)) * p0
    return p1


# -- Funk-Hecke ratios -------------------------------------------------------


class RatioRow(NamedTuple):
    l: int  # noqa: E741
    m: int
    ratio: float
    residual: float


def _samples_for(l: int, samples: int | None) -> int:  # noqa: E741
    return max(4, 2 * l + 2) if samples is None else samples


def fit_ratio(l: int, ms, normals: np.ndarray, samples: int) -> tuple[float, float, float]:  # noqa: E741
    """Least-squares ratio, max residual and max |transform| over orders ms."""
    num = den = 0.0
    pairs = []
    at_normals = harmonics(l, normals)
    on_circles = harmonics(l, circle_points(normals, samples))
    for m in ms:
        ys = at_normals[l, m]
        taus = np.mean(on_circles[l, m], axis=1)
        num += float(taus @ ys)
        den += float(ys @ ys)
        pairs.append((taus, ys))
    if den == 0:
        raise ValueError("degenerate trial set: harmonics vanish at every sampled normal")
    ratio = num / den
    resid = max(float(np.max(np.abs(t - ratio * y))) for t, y in pairs)
    return ratio, resid, max(float(np.max(np.abs(t))) for t, _ in pairs)


def _trial_normals(trials: int, rng: np.random.Generator) -> np.ndarray:
    normals = random_normals(trials, rng)
    if trials < 2 or np.allclose(np.abs(normals @ normals[0]), 1.0):
        raise ValueError("degenerate trial set: all circles coincide")
    return normals


def funk_hecke_ratio(l: int, trials: int = 50, rng: np.random.Generator | None = None,  # noqa: E741
                     samples: int | None = None, normals: np.ndarray | None = None) -> float:
    """Least-squares eigenvalue of the transform on degree-l harmonics, over all orders."""
    if not 0 <= l <= 12:
        raise ValueError("degree must be in 0..12")
    if normals is None:
        normals = _trial_normals(trials, rng or np.random.default_rng(42))
    elif len(normals) < 2 or np.allclose(np.abs(normals @ normals[0]), 1.0):
        raise ValueError("degenerate trial set: all circles coincide")
    return fit_ratio(l, range(-l, l + 1), normals, _samples_for(l, samples))[0]


def max_transform(l: int, m: int, normals: np.ndarray, samples: int | None = None) -> float:  # noqa: E741
    taus = transform_many(harmonic_function(l, m), normals, _samples_for(l, samples))
    return float(np.max(np.abs(taus)))


def ratio_table(lmax: int, trials: int, rng: np.random.Generator, samples: int | None = None) -> Iterator[RatioRow]:
    """Rows (l, m, ratio, residual) for every harmonic of degree <= lmax."""
    normals = _trial_normals(trials, rng)
    for l in range(lmax + 1):  # noqa: E741
        for m in range(-l, l + 1):
            ratio, resid, _ = fit_ratio(l, [m], normals, _samples_for(l, samples))
            yield RatioRow(l, m, ratio, resid)


# -- boundedness -------------------------------------------------------------


# relative floating-point allowance; a constant f has zero Monte Carlo spread
ROUNDOFF = 1e-12


class BoundednessViolation(AssertionError):
    pass


class BoundednessResult(NamedTuple):
    norm_in: float
    norm_out: float
    stderr: float


def sphere_quadrature(degree: int) -> tuple[np.ndarray, np.ndarray]:
    """Product Gauss-Legendre x uniform rule, exact on polynomials of the given degree.

    Weights sum to the area 4 pi.
    """
    nz = degree // 2 + 1
    nphi = degree + 1
    z, wz = np.polynomial.legendre.leggauss(nz)
    phi = 2 * pi * np.arange(nphi) / nphi
    s = np.sqrt(1 - z * z)
    pts = np.stack([np.outer(s, np.cos(phi)), np.outer(s, np.sin(phi)), np.outer(z, np.ones(nphi))], axis=-1)
    w = np.outer(wz, np.full(nphi, 2 * pi / nphi))
    return pts.reshape(-1, 3), w.ravel()


def random_harmonic_coeffs(degree: int, rng: np.random.Generator) -> dict[Harmonic, float]:
    return {(l, m): float(rng.standard_normal()) for l in range(degree + 1) for m in range(-l, l + 1)}  # noqa: E741


def boundedness_check(f_coeffs: Mapping[Harmonic, float], n_circles: int,
                      rng: np.random.Generator | None = None) -> BoundednessResult:
    """L2 norms of f on S^2 and of its transform on the space of circles.

    Both use the area measure; the circle side is a Monte Carlo estimate over
    uniformly random normals with a delta-method standard error.
    """
    if not f_coeffs:
        raise ValueError("empty harmonic expansion")
    lmax = max(l for l, _ in f_coeffs)
    if lmax > 8:
        raise ValueError("degree must be at most 8")
    rng = rng or np.random.default_rng(42)
    f = combination(f_coeffs)
    pts, w = sphere_quadrature(2 * lmax)
    norm_in = sqrt(float(w @ f(pts) ** 2))

    normals = random_normals(n_circles, rng)
    n = _samples_for(lmax, None)
    taus = transform_many(f, normals, n)
    sq = 4 * pi * taus ** 2
    mean_sq = float(np.mean(sq))
    se_sq = float(np.std(sq, ddof=1) / sqrt(n_circles)) if n_circles > 1 else float("inf")
    norm_out = sqrt(mean_sq)
    stderr = se_sq / (2 * norm_out) if norm_out > 0 else sqrt(se_sq)
    if norm_out > norm_in + 3 * stderr + ROUNDOFF * norm_in:
        raise BoundednessViolation(f"transform norm {norm_out} exceeds {norm_in} + 3 * {stderr}")
    return BoundednessResult(norm_in, norm_out, stderr)
