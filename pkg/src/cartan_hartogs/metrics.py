"""Automorphisms of Y_I, their Jacobians, and the closed-form metric tensors.

All metric matrices use the convention ``g[i, j] = d^2 phi / dz_i d conj(z_j)``
so that a tangent row vector ``dz`` has length ``dz @ g @ dz.conj()``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domains import CartanHartogsDomain, Point, contains, in_base, xy_of
from .errors import DomainError, ParameterError
from .numerics import check_hermitian, dot_times, hermitian_sqrt_inverse
from .potentials import BERGMAN, POWER, RICCI, bergman_first_second, ricci_first_second


def _require_type_i(domain: CartanHartogsDomain) -> None:
    if domain.base.kind != "I":
        raise ParameterError(f"closed-form metrics exist only on Y_I, got type {domain.base.kind}")


def _h_left(z):
    return np.eye(z.shape[0]) - z @ z.conj().T


def _h_right(z):
    return np.eye(z.shape[1]) - z.conj().T @ z


@dataclass(frozen=True)
class Automorphism:
    """(Z, W) -> (A(Z-Z0)(I - Z0* Z)^-1 D^-1, W det(I-Z0 Z0*)^(1/2K) det(I - Z Z0*)^(-1/K)).

    ``A`` and ``D`` are the Hermitian positive-definite roots with
    ``A* A = (I - Z0 Z0*)^-1`` and ``D* D = (I - Z0* Z0)^-1``.
    """

    Z0: np.ndarray
    A: np.ndarray
    D: np.ndarray
    K: float

    def apply(self, z: np.ndarray, w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        z0 = self.Z0
        zs = self.A @ (z - z0) @ np.linalg.inv(np.eye(z0.shape[1]) - z0.conj().T @ z) @ np.linalg.inv(self.D)
        det0 = np.linalg.det(_h_left(z0)).real
        det1 = complex(np.linalg.det(np.eye(z0.shape[0]) - z @ z0.conj().T))
        ws = w * det0 ** (1.0 / (2 * self.K)) * det1 ** (-1.0 / self.K)
        return zs, ws


def automorphism_at(domain: CartanHartogsDomain, z0: np.ndarray) -> Automorphism:
    _require_type_i(domain)
    z0 = domain.base.check_structure(z0)
    if not in_base(domain.base, z0):
        raise DomainError("Z0 must lie strictly inside R_I")
    a = hermitian_sqrt_inverse(_h_left(z0))
    d = hermitian_sqrt_inverse(_h_right(z0))
    return Automorphism(z0, a, d, domain.K)


def e_row(domain: CartanHartogsDomain, z: np.ndarray) -> np.ndarray:
    """E(Z): entry (a, b) is tr[(I - Z Z*)^-1 I_ab Z*], flattened row-major."""
    _require_type_i(domain)
    z = domain.base.check_structure(z)
    if not in_base(domain.base, z):
        raise DomainError("Z lies outside R_I")
    h1inv = np.linalg.inv(_h_left(z))
    return (h1inv.T @ z.conj()).ravel()


@dataclass(frozen=True)
class JacobianBlocks:
    j11: np.ndarray
    j12: np.ndarray
    j21: np.ndarray
    j22: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        return np.block([[self.j11, self.j12], [self.j21, self.j22]])


def jacobian_at(aut: Automorphism, domain: CartanHartogsDomain, w: np.ndarray) -> JacobianBlocks:
    """Holomorphic Jacobian of ``aut`` at (Z0, W); rows are input coordinates."""
    _require_type_i(domain)
    w = np.asarray(w, dtype=complex).ravel()
    z = aut.Z0
    mn, N = z.size, domain.N
    det = np.linalg.det(_h_left(z)).real
    half = det ** (-1.0 / (2 * domain.K))
    e = e_row(domain, z)
    return JacobianBlocks(
        j11=dot_times(aut.A.T, aut.D.conj().T),
        j12=np.outer(e, w) * (half / domain.K),
        j21=np.zeros((N, mn), dtype=complex),
        j22=half * np.eye(N, dtype=complex),
    )


def numeric_jacobian(aut: Automorphism, domain: CartanHartogsDomain, w: np.ndarray,
                     step: float = 1e-5) -> np.ndarray:
    """Oracle: central differences of ``aut.apply`` at (Z0, W).

    The map is holomorphic, so differencing along real coordinate directions
    gives the complex derivative.
    """
    w = np.asarray(w, dtype=complex).ravel()
    m, n = aut.Z0.shape
    z0flat = np.concatenate([aut.Z0.ravel(), w])
    d = z0flat.size

    def f(v):
        zs, ws = aut.apply(v[: m * n].reshape(m, n), v[m * n:])
        return np.concatenate([zs.ravel(), ws])

    jac = np.empty((d, d), dtype=complex)
    for k in range(d):
        e = np.zeros(d, dtype=complex)
        e[k] = step
        jac[k] = (f(z0flat + e) - f(z0flat - e)) / (2 * step)
    return jac


@dataclass(frozen=True)
class MetricTensor:
    matrix: np.ndarray
    point: Point
    generator: str

    def check(self, tol: float = 1e-10):
        return check_hermitian(self.matrix, tol * max(1.0, float(np.max(np.abs(self.matrix)))))

    def length2(self, dz: np.ndarray) -> float:
        dz = np.asarray(dz, dtype=complex)
        return float((dz @ self.matrix @ dz.conj()).real)


def origin_block(domain: CartanHartogsDomain, w_star: np.ndarray, d1: float, d2: float) -> np.ndarray:
    """Metric of a potential phi(X) - mu_exp log det at (0, W*).

    ``d1``, ``d2`` are phi'(X), phi''(X) at X = |W*|^2.
    """
    w_star = np.asarray(w_star, dtype=complex).ravel()
    x = float(np.vdot(w_star, w_star).real)
    mn = domain.base.z_dim
    top = (d1 * x / domain.K + domain.mu_exp) * np.eye(mn)
    bottom = d1 * np.eye(domain.N) + d2 * np.outer(w_star.conj(), w_star)
    out = np.zeros((mn + domain.N,) * 2, dtype=complex)
    out[:mn, :mn] = top
    out[mn:, mn:] = bottom
    return out


def _first_second(generator: str, domain: CartanHartogsDomain, y: float) -> tuple[float, float]:
    if generator == POWER:
        return domain.lam * y, domain.lam * y * y
    if generator == BERGMAN:
        d1, d2 = bergman_first_second(domain, y)
    elif generator == RICCI:
        d1, d2 = ricci_first_second(domain, y)
    else:
        raise ParameterError(f"unknown generator {generator!r}")
    return float(d1), float(d2)


def t_lambda_origin(domain: CartanHartogsDomain, w_star: np.ndarray) -> MetricTensor:
    pt = Point(np.zeros(domain.base.shape), w_star)
    y = xy_of(domain, pt).Y
    d1, d2 = _first_second(POWER, domain, y)
    return MetricTensor(origin_block(domain, pt.W, d1, d2), pt, POWER)


def reduce_to_origin(domain: CartanHartogsDomain, pt: Point) -> tuple[JacobianBlocks, np.ndarray]:
    """Jacobian of the automorphism anchored at ``pt`` and the image fiber point W*."""
    _require_type_i(domain)
    if not contains(domain, pt):
        raise DomainError("point lies outside the domain")
    aut = automorphism_at(domain, pt.Z)
    det = np.linalg.det(_h_left(pt.Z)).real
    return jacobian_at(aut, domain, pt.W), pt.W * det ** (-1.0 / (2 * domain.K))


def pullback_metric(domain: CartanHartogsDomain, pt: Point, generator: str) -> MetricTensor:
    """J diag((phi' X/K + mu) I, phi' I + phi'' W*^H W*) J^H for the given generator."""
    jac, w_star = reduce_to_origin(domain, pt)
    y = xy_of(domain, pt).Y
    d1, d2 = _first_second(generator, domain, y)
    j = jac.matrix
    return MetricTensor(j @ origin_block(domain, w_star, d1, d2) @ j.conj().T, pt, generator)


def t_lambda(domain: CartanHartogsDomain, pt: Point) -> MetricTensor:
    """Metric of G_lambda on Y_I assembled from its four explicit blocks."""
    _require_type_i(domain)
    xy = xy_of(domain, pt)
    x, y = xy.X, xy.Y
    lam, K = domain.lam, domain.K
    z, w = pt.Z, pt.W
    h1inv = np.linalg.inv(_h_left(z))
    h2inv = np.linalg.inv(_h_right(z))
    s = np.linalg.det(_h_left(z)).real ** (-1.0 / K)
    e = e_row(domain, z)

    t11 = ((lam / K) * y * x + domain.mu_exp) * dot_times(h1inv.conj(), h2inv) \
        + (lam / K**2) * y**2 * x * np.outer(e, e.conj())
    t12 = (s * lam * y**2 / K) * np.outer(e, w)
    t22 = lam * y * s * np.eye(domain.N) + s**2 * lam * y**2 * np.outer(w.conj(), w)
    mat = np.block([[t11, t12], [t12.conj().T, t22]])
    return MetricTensor(mat, pt, POWER)


def t_bergman(domain: CartanHartogsDomain, pt: Point) -> MetricTensor:
    return pullback_metric(domain, pt, BERGMAN)


@dataclass(frozen=True)
class UnitaryReduction:
    theta: float
    mu: float
    U: np.ndarray

    def reconstruct(self) -> np.ndarray:
        e1 = np.zeros(self.U.shape[0], dtype=complex)
        e1[0] = self.mu
        return np.exp(1j * self.theta) * (e1 @ self.U)


def unitary_reduce(w: np.ndarray) -> UnitaryReduction:
    """Write W = e^{i theta} (mu, 0, ..., 0) U with mu = |W| and U unitary.

    ``U`` is a Householder reflector whose first row is ``e^{-i theta} W / mu``.
    """
    w = np.asarray(w, dtype=complex).ravel()
    n = w.size
    mu = float(np.linalg.norm(w))
    if mu == 0.0:
        return UnitaryReduction(0.0, 0.0, np.eye(n, dtype=complex))
    theta = float(np.angle(w[0])) if w[0] != 0 else 0.0
    target = (np.exp(-1j * theta) * w / mu).conj()
    v = -target.copy()
    v[0] += 1.0
    vv = float(np.vdot(v, v).real)
    if vv < 1e-30:
        u = np.eye(n, dtype=complex)
    else:
        u = np.eye(n, dtype=complex) - 2.0 * np.outer(v, v.conj()) / vv
    return UnitaryReduction(theta, mu, u)
