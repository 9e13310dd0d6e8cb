"""Comparison of the Bergman metric with the G_lambda metric on Y_I, and the
Hermitian sandwich bound B <= gamma A.

At a point with invariant X the pair (T_B, T_lambda) is congruent, through the
same Jacobian, to a block-diagonal pair whose generalized eigenvalues are
Phi(X), Psi(X), Upsilon(X). So the squared length ratio is pinched between
their min and max.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curvature import (BoundsReport, bergman_ratio_functions, random_directions, ratio_extrema,
                        ratio_limit, within, x_grid, _scan_points)
from .domains import CartanHartogsDomain, Point, xy_of
from .errors import PreconditionError
from .metrics import t_bergman, t_lambda

SANDWICH_TOL = 1e-10


@dataclass(frozen=True)
class RatioSample:
    point: Point
    direction: np.ndarray
    value: float

    def __post_init__(self):
        if not (np.isfinite(self.value) and self.value > 0):
            raise PreconditionError(f"metric ratio must be positive and finite, got {self.value}")


def metric_ratio(domain: CartanHartogsDomain, pt: Point, direction: np.ndarray) -> float:
    """sqrt(dz T_B dz* / dz T_lambda dz*)."""
    direction = np.asarray(direction, dtype=complex).ravel()
    if not np.any(direction):
        raise PreconditionError("direction must be nonzero")
    num = t_bergman(domain, pt).length2(direction)
    den = t_lambda(domain, pt).length2(direction)
    return float(np.sqrt(num / den))


def analytic_ratio_bounds(domain: CartanHartogsDomain, grid: int = 2001, extra_x=()) -> BoundsReport:
    """b = sqrt(min), a = sqrt(max) of Phi, Psi, Upsilon over [0, 1) and the X -> 1 limit."""
    xs = x_grid(grid, extra_x)
    lo, hi, where = ratio_extrema(bergman_ratio_functions(domain, xs), xs, ratio_limit(domain))
    b, a = float(np.sqrt(lo)), float(np.sqrt(hi))
    return BoundsReport("equivalence", b, a,
                        constants={"a": a, "b": b, "a2": hi, "b2": lo, "limit": ratio_limit(domain)},
                        witnesses={"a": where["max"], "b": where["min"]},
                        grid={"x_points": int(xs.size)})


def equivalence_scan(domain: CartanHartogsDomain, samples: int = 50, directions: int = 8,
                     x_max: float = 0.99, seed: int = 42, grid: int = 2001) -> BoundsReport:
    """Empirical (b, a) from seeded samples, bracketed by the analytic constants."""
    if samples < 1 or directions < 1:
        raise PreconditionError("samples and directions must be at least 1")
    rng, pts = _scan_points(domain, samples, x_max, seed)
    vals, where, xs = [], [], []
    for i, pt in enumerate(pts):
        xs.append(xy_of(domain, pt).X)
        tb = t_bergman(domain, pt)
        tl = t_lambda(domain, pt)
        for j, v in enumerate(random_directions(rng, domain, directions)):
            vals.append(float(np.sqrt(tb.length2(v) / tl.length2(v))))
            where.append((i, j))
    report = analytic_ratio_bounds(domain, grid, xs)
    vals = np.asarray(vals)
    imin, imax = int(np.argmin(vals)), int(np.argmax(vals))
    report.samples = {
        "count": int(vals.size),
        "min": float(vals[imin]),
        "max": float(vals[imax]),
        "argmin": list(where[imin]),
        "argmax": list(where[imax]),
        "within": within(vals, report.lower, report.upper),
        "positive": bool(np.all(vals > 0)),
    }
    return report


def _hermitian(mat: np.ndarray, name: str) -> np.ndarray:
    mat = np.atleast_2d(np.asarray(mat, dtype=complex))
    if mat.shape[0] != mat.shape[1]:
        raise PreconditionError(f"{name} must be square, got {mat.shape}")
    scale = max(1.0, float(np.max(np.abs(mat))))
    if np.max(np.abs(mat - mat.conj().T)) > 1e-12 * scale:
        raise PreconditionError(f"{name} is not Hermitian")
    return 0.5 * (mat + mat.conj().T)


def hermitian_sandwich(a_mat: np.ndarray, b_mat: np.ndarray, alpha: float, beta: float,
                       tol: float = SANDWICH_TOL) -> float:
    """gamma = beta / alpha^(n-1) such that B <= gamma A.

    Requires A, B Hermitian positive definite, B - alpha A >= 0 and
    det B <= beta det A. The generalized eigenvalues of (B, A) are all at least
    alpha with product at most beta, which caps the largest one by gamma.
    """
    a_mat = _hermitian(a_mat, "A")
    b_mat = _hermitian(b_mat, "B")
    if a_mat.shape != b_mat.shape:
        raise PreconditionError(f"A and B shapes differ: {a_mat.shape} vs {b_mat.shape}")
    if not (alpha > 0 and beta > 0):
        raise PreconditionError("alpha and beta must be positive")
    n = a_mat.shape[0]
    for name, mat in (("A", a_mat), ("B", b_mat)):
        if np.linalg.eigvalsh(mat)[0] <= 0:
            raise PreconditionError(f"{name} is not positive definite")
    scale = max(1.0, float(np.max(np.abs(b_mat))))
    if np.linalg.eigvalsh(b_mat - alpha * a_mat)[0] < -tol * scale:
        raise PreconditionError("B - alpha A is not positive semidefinite")
    _, logdet_a = np.linalg.slogdet(a_mat)
    _, logdet_b = np.linalg.slogdet(b_mat)
    if logdet_b > np.log(beta) + logdet_a + tol:
        raise PreconditionError("det B exceeds beta det A")
    gamma = beta / alpha ** (n - 1)
    gap = np.linalg.eigvalsh(gamma * a_mat - b_mat)[0]
    if gap < -tol * max(scale, gamma * float(np.max(np.abs(a_mat)))):
        raise PreconditionError(f"gamma A - B has eigenvalue {gap:.3e}")
    return float(gamma)
