"""Dense complex linear algebra, Wirtinger finite differences and seeded sampling.

Matrices are plain ``numpy`` complex128 arrays; nothing here keeps state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, PreconditionError

HERMITIAN_TOL = 1e-10

STRUCTURES = ("general", "symmetric", "skew", "row", "lie")


@dataclass(frozen=True)
class HermitianCheckResult:
    is_hermitian: bool
    min_eigenvalue: float
    max_asymmetry: float


def check_hermitian(mat: np.ndarray, tol: float = HERMITIAN_TOL) -> HermitianCheckResult:
    """Asymmetry and smallest eigenvalue of the Hermitian part of ``mat``."""
    mat = np.asarray(mat, dtype=complex)
    asym = float(np.max(np.abs(mat - mat.conj().T))) if mat.size else 0.0
    herm = 0.5 * (mat + mat.conj().T)
    min_eig = float(np.linalg.eigvalsh(herm)[0]) if mat.size else 0.0
    return HermitianCheckResult(asym <= tol, min_eig, asym)


def hermitian_sqrt_inverse(h: np.ndarray, tol: float = 1e-14) -> np.ndarray:
    """Hermitian positive-definite ``A`` with ``conj(A).T @ A == inv(h)``.

    ``h`` must be Hermitian positive definite. The root is taken through the
    eigendecomposition so that it is unique.
    """
    h = np.atleast_2d(np.asarray(h, dtype=complex))
    scale = max(1.0, float(np.max(np.abs(h))))
    asym = float(np.max(np.abs(h - h.conj().T)))
    if asym > 1e-12 * scale:
        raise DomainError(f"matrix is not Hermitian (max asymmetry {asym:.3e})")
    vals, vecs = np.linalg.eigh(0.5 * (h + h.conj().T))
    if vals[0] <= tol * scale:
        raise DomainError(f"matrix is not positive definite (eigenvalue {vals[0]:.6e})")
    return (vecs * (1.0 / np.sqrt(vals))) @ vecs.conj().T


def dot_times(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Block product: block ``(i, j)`` of the result is ``a[i, j] * b``."""
    return np.kron(np.atleast_2d(a), np.atleast_2d(b))


def wirtinger_hessian(
    f: Callable[[np.ndarray], float | np.ndarray],
    z: np.ndarray,
    step: float = 1e-4,
    batched: bool = False,
    extrapolate: bool = False,
) -> np.ndarray:
    """Central-difference estimate of ``d^2 f / dz_i d conj(z_j)``.

    ``f`` is real valued on C^d. With ``batched=True`` it is called once on a
    ``(k, d)`` stack of points and must return ``k`` values.

    The real Hessian over ``(Re z, Im z)`` is differenced first and then
    combined as ``(f_xx + f_yy + i (f_xy - f_yx)) / 4``. ``extrapolate``
    applies one Richardson step with ``step / 2``, cancelling the O(step^2) term.
    """
    if extrapolate:
        coarse = wirtinger_hessian(f, z, step, batched)
        fine = wirtinger_hessian(f, z, step / 2, batched)
        return (4.0 * fine - coarse) / 3.0
    z = np.asarray(z, dtype=complex).ravel()
    d = z.size
    dirs = np.concatenate([np.eye(d), 1j * np.eye(d)]).astype(complex) * step
    n = 2 * d

    pts = [z]
    for p in range(n):
        pts.append(z + dirs[p])
        pts.append(z - dirs[p])
    pairs = [(p, q) for p in range(n) for q in range(p + 1, n)]
    for p, q in pairs:
        pts.append(z + dirs[p] + dirs[q])
        pts.append(z + dirs[p] - dirs[q])
        pts.append(z - dirs[p] + dirs[q])
        pts.append(z - dirs[p] - dirs[q])
    stack = np.array(pts)
    if batched:
        vals = np.asarray(f(stack), dtype=float).ravel()
    else:
        vals = np.array([float(f(pt)) for pt in stack])
    if not np.all(np.isfinite(vals)):
        raise DomainError("function is not finite on the difference stencil")

    f0 = vals[0]
    hess = np.empty((n, n))
    for p in range(n):
        hess[p, p] = (vals[1 + 2 * p] - 2.0 * f0 + vals[2 + 2 * p]) / step**2
    base = 1 + 2 * n
    for k, (p, q) in enumerate(pairs):
        pp, pm, mp, mm = vals[base + 4 * k: base + 4 * k + 4]
        hess[p, q] = hess[q, p] = (pp - pm - mp + mm) / (4.0 * step**2)

    hxx = hess[:d, :d]
    hyy = hess[d:, d:]
    hxy = hess[:d, d:]
    return 0.25 * ((hxx + hyy) + 1j * (hxy - hxy.T))


def _structured_gaussian(rng: np.random.Generator, structure: str, shape: tuple[int, int]) -> np.ndarray:
    g = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    if structure == "symmetric":
        return 0.5 * (g + g.T)
    if structure == "skew":
        return 0.5 * (g - g.T)
    if structure in ("row", "lie") and shape[0] != 1:
        raise PreconditionError(f"{structure} structure needs a single row, got {shape}")
    return g


def lie_norm(z: np.ndarray) -> float:
    """Norm whose open unit ball is the Lie ball (classical domain of type IV)."""
    z = np.asarray(z, dtype=complex).ravel()
    s = float(np.vdot(z, z).real)
    q = abs(complex(z @ z))
    return float(np.sqrt(s + np.sqrt(max(s * s - q * q, 0.0))))


def sample_unit_contraction(
    rng: np.random.Generator,
    structure: str,
    shape: tuple[int, int],
    margin: float,
) -> np.ndarray:
    """Random structured matrix whose norm is at most ``margin``.

    ``structure`` is one of ``general``, ``symmetric``, ``skew``, ``row`` (norms
    are spectral norms) or ``lie`` (a row vector bounded in the Lie norm, which
    dominates the Euclidean norm).
    """
    if not 0.0 < margin < 1.0:
        raise PreconditionError(f"margin must lie in (0, 1), got {margin}")
    if structure not in STRUCTURES:
        raise PreconditionError(f"unknown structure {structure!r}")
    g = _structured_gaussian(rng, structure, shape)
    radius = margin * rng.uniform()
    norm = lie_norm(g) if structure == "lie" else float(np.linalg.norm(g, 2))
    if norm == 0.0:
        return np.zeros(shape, dtype=complex)
    return g * (radius / norm)


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-distributed unitary via QR with phase correction."""
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def rel_max_err(approx: np.ndarray, ref: np.ndarray) -> float:
    """Max-norm error of ``approx`` relative to the max-norm of ``ref``."""
    approx = np.asarray(approx)
    ref = np.asarray(ref)
    denom = float(np.max(np.abs(ref)))
    err = float(np.max(np.abs(approx - ref)))
    return err / denom if denom > 0 else err
