"""Cartan base domains, Cartan-Hartogs domains over them, and the invariants X, Y."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterError, PreconditionError, StructureError
from .numerics import sample_unit_contraction

STRUCTURE_TOL = 1e-12

_STRUCTURE = {"I": "general", "II": "symmetric", "III": "skew", "IV": "lie"}


@dataclass(frozen=True)
class CartanBase:
    """One of the classical domains R_I(m, n), R_II(p), R_III(q), R_IV(n).

    Types II and III are stored as full ``p x p`` / ``q x q`` matrices; type IV
    points are ``1 x n`` row vectors.
    """

    kind: str
    rows: int
    cols: int

    def __post_init__(self):
        if self.kind not in _STRUCTURE:
            raise ParameterError(f"unknown base type {self.kind!r}")
        if self.rows < 1 or self.cols < 1:
            raise ParameterError("base dimensions must be positive")
        if self.kind in ("II", "III") and self.rows != self.cols:
            raise ParameterError(f"type {self.kind} base must be square")
        if self.kind == "III" and self.rows < 2:
            raise ParameterError("type III base needs q >= 2")
        if self.kind == "IV" and self.rows != 1:
            raise ParameterError("type IV base is a row vector")

    @classmethod
    def type_i(cls, m: int, n: int) -> "CartanBase":
        return cls("I", m, n)

    @classmethod
    def type_ii(cls, p: int) -> "CartanBase":
        return cls("II", p, p)

    @classmethod
    def type_iii(cls, q: int) -> "CartanBase":
        return cls("III", q, q)

    @classmethod
    def type_iv(cls, n: int) -> "CartanBase":
        return cls("IV", 1, n)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def structure(self) -> str:
        return _STRUCTURE[self.kind]

    @property
    def genus(self) -> int:
        """Exponent of the generic norm in the base Bergman kernel."""
        if self.kind == "I":
            return self.rows + self.cols
        if self.kind == "II":
            return self.rows + 1
        if self.kind == "III":
            return self.rows - 1
        return self.cols

    @property
    def coord_index(self) -> tuple[np.ndarray, np.ndarray]:
        """Row/column indices of the independent entries, in row-major order."""
        r, c = self.shape
        if self.kind == "II":
            return np.triu_indices(r)
        if self.kind == "III":
            return np.triu_indices(r, 1)
        ii, jj = np.indices((r, c))
        return ii.ravel(), jj.ravel()

    @property
    def z_dim(self) -> int:
        return len(self.coord_index[0])

    def to_coords(self, z: np.ndarray) -> np.ndarray:
        ii, jj = self.coord_index
        return np.asarray(z, dtype=complex)[..., ii, jj]

    def from_coords(self, coords: np.ndarray) -> np.ndarray:
        """Rebuild (a stack of) structured matrices from independent coordinates."""
        coords = np.asarray(coords, dtype=complex)
        ii, jj = self.coord_index
        z = np.zeros(coords.shape[:-1] + self.shape, dtype=complex)
        z[..., ii, jj] = coords
        if self.kind == "II":
            off = ii != jj
            z[..., jj[off], ii[off]] = coords[..., off]
        elif self.kind == "III":
            z[..., jj, ii] = -coords
        return z

    def check_structure(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if z.ndim == 1 and self.kind == "IV":
            z = z.reshape(1, -1)
        if z.shape != self.shape:
            raise StructureError(f"type {self.kind} expects shape {self.shape}, got {z.shape}")
        if self.kind == "II" and np.max(np.abs(z - z.T)) > STRUCTURE_TOL:
            raise StructureError("type II point must be symmetric")
        if self.kind == "III" and np.max(np.abs(z + z.T)) > STRUCTURE_TOL:
            raise StructureError("type III point must be skew-symmetric")
        return z


def generic_det(base: CartanBase, z: np.ndarray) -> float | np.ndarray:
    """det(I - Z Z*) for types I-III, 1 + |Z Z^t|^2 - 2 Z Z* for type IV.

    Accepts a single matrix (structure checked) or a stack ``(..., rows, cols)``.
    """
    z = np.asarray(z, dtype=complex)
    single = z.ndim <= 2
    if single:
        z = base.check_structure(z)
    if base.kind == "IV":
        v = z[..., 0, :]
        zz = np.sum(v * v, axis=-1)
        s = np.sum(np.abs(v) ** 2, axis=-1)
        out = 1.0 + np.abs(zz) ** 2 - 2.0 * s
    else:
        eye = np.eye(base.rows)
        out = np.linalg.det(eye - z @ np.conj(np.swapaxes(z, -1, -2))).real
    return float(out) if single else out


def in_base(base: CartanBase, z: np.ndarray) -> bool:
    """Strict membership in the classical domain (boundary counts as outside)."""
    z = base.check_structure(z)
    if base.kind == "IV":
        v = z[0]
        return bool(generic_det(base, z) > 0 and np.vdot(v, v).real < 1.0)
    h = np.eye(base.rows) - z @ z.conj().T
    return bool(np.linalg.eigvalsh(0.5 * (h + h.conj().T))[0] > 0)


@dataclass(frozen=True)
class CartanHartogsDomain:
    """{(Z, W): Z in base, W in C^N, |W|^(2K) < generic_det(Z)} with metric parameter ``lam``."""

    base: CartanBase
    N: int
    K: float
    lam: float = 1.0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ParameterError(f"fiber dimension N must be a positive integer, got {self.N}")
        if not self.K > 0:
            raise ParameterError(f"K must be positive, got {self.K}")
        if not self.lam > 0:
            raise ParameterError(f"lambda must be positive, got {self.lam}")

    @property
    def mu_exp(self) -> float:
        """Exponent of the generic determinant in the potentials (m+n+N/K for type I)."""
        return self.base.genus + self.N / self.K

    @property
    def dim(self) -> int:
        return self.base.z_dim + self.N

    @property
    def m(self) -> int:
        return self.base.rows

    @property
    def n(self) -> int:
        return self.base.cols

    def with_lambda(self, lam: float) -> "CartanHartogsDomain":
        return CartanHartogsDomain(self.base, self.N, self.K, lam)

    def describe(self) -> dict:
        b = self.base
        dims = {"I": {"m": b.rows, "n": b.cols}, "II": {"p": b.rows},
                "III": {"q": b.rows}, "IV": {"n": b.cols}}[b.kind]
        return {"type": b.kind, **dims, "N": self.N, "K": self.K, "lambda": self.lam}


def type_i(m: int, n: int, N: int, K: float, lam: float = 1.0) -> CartanHartogsDomain:
    return CartanHartogsDomain(CartanBase.type_i(m, n), N, K, lam)


@dataclass(frozen=True)
class Point:
    Z: np.ndarray
    W: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "Z", np.atleast_2d(np.asarray(self.Z, dtype=complex)))
        object.__setattr__(self, "W", np.atleast_1d(np.asarray(self.W, dtype=complex)).ravel())

    def flat(self, domain: CartanHartogsDomain) -> np.ndarray:
        """Coordinates z = (Z_1, W) with Z_1 the independent entries of Z, row-major."""
        return np.concatenate([domain.base.to_coords(self.Z), self.W])

    @classmethod
    def from_flat(cls, domain: CartanHartogsDomain, z: np.ndarray) -> "Point":
        z = np.asarray(z, dtype=complex)
        k = domain.base.z_dim
        return cls(domain.base.from_coords(z[:k]), z[k:])

    @classmethod
    def origin(cls, domain: CartanHartogsDomain) -> "Point":
        return cls(np.zeros(domain.base.shape), np.zeros(domain.N))


@dataclass(frozen=True)
class ScalarXY:
    X: float
    Y: float

    @classmethod
    def from_x(cls, x: float) -> "ScalarXY":
        if not 0.0 <= x < 1.0:
            raise DomainError(f"X must lie in [0, 1), got {x}")
        return cls(float(x), 1.0 / (1.0 - x))


def _check_point_shapes(domain: CartanHartogsDomain, pt: Point) -> np.ndarray:
    z = domain.base.check_structure(pt.Z)
    if pt.W.shape != (domain.N,):
        raise StructureError(f"W must have {domain.N} entries, got {pt.W.shape}")
    return z


def contains(domain: CartanHartogsDomain, pt: Point) -> bool:
    z = _check_point_shapes(domain, pt)
    if not in_base(domain.base, z):
        return False
    det = generic_det(domain.base, z)
    w2 = float(np.vdot(pt.W, pt.W).real)
    return bool(det > 0 and w2 ** domain.K < det)


def xy_of(domain: CartanHartogsDomain, pt: Point) -> ScalarXY:
    if not contains(domain, pt):
        raise DomainError("point lies outside the domain")
    det = generic_det(domain.base, pt.Z)
    x = float(np.vdot(pt.W, pt.W).real) * det ** (-1.0 / domain.K)
    return ScalarXY(x, 1.0 / (1.0 - x))


def flat_invariants(domain: CartanHartogsDomain, zs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """X and log generic_det for a stack of flat coordinate vectors.

    Used by the finite-difference oracles, which evaluate potentials on
    batches of nearby points.
    """
    zs = np.atleast_2d(np.asarray(zs, dtype=complex))
    k = domain.base.z_dim
    z = domain.base.from_coords(zs[:, :k])
    det = generic_det(domain.base, z)
    if np.any(det <= 0):
        raise DomainError("generic determinant is not positive")
    logdet = np.log(det)
    w2 = np.sum(np.abs(zs[:, k:]) ** 2, axis=-1)
    x = w2 * np.exp(-logdet / domain.K)
    if np.any(x >= 1.0):
        raise DomainError("point lies outside the domain (X >= 1)")
    return x, logdet


def sample_interior(domain: CartanHartogsDomain, rng: np.random.Generator, x_max: float,
                    z_margin: float = 0.9) -> Point:
    """Seeded interior point with X uniform on [0, x_max)."""
    if not 0.0 < x_max < 1.0:
        raise PreconditionError(f"x_max must lie in (0, 1), got {x_max}")
    base = domain.base
    z = sample_unit_contraction(rng, base.structure, base.shape, z_margin)
    x_target = rng.uniform(0.0, x_max)
    g = rng.standard_normal(domain.N) + 1j * rng.standard_normal(domain.N)
    det = generic_det(base, z)
    w = g / np.linalg.norm(g) * np.sqrt(x_target * det ** (1.0 / domain.K))
    pt = Point(z, w)
    if xy_of(domain, pt).X > x_max:
        pt = Point(z, w * (1.0 - 1e-12))
    return pt
