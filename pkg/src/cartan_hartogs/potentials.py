"""Bergman kernel of Y_I and the G_lambda potentials with their X-derivatives.

Everything that can overflow is evaluated in log space: the series G(X) is
normalised by its top power of Y before the logarithm is taken.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, log, pi

import numpy as np

from .domains import CartanHartogsDomain, Point, ScalarXY, flat_invariants, xy_of, generic_det
from .errors import DomainError, ParameterError, RangeError

BERGMAN = "bergman"
POWER = "power"
RICCI = "ricci"
GENERATORS = (BERGMAN, POWER, RICCI)


def _require_type_i(domain: CartanHartogsDomain) -> None:
    if domain.base.kind != "I":
        raise ParameterError(f"only defined on Y_I, got type {domain.base.kind}")


@dataclass(frozen=True)
class HuaPolynomial:
    """P(x) = (x+1) prod_{r<m} prod_{j<n} (x + 1 + K(n+r-j)), held as its shifts.

    ``shifts[i]`` is the constant ``c`` of the factor ``(x + 1 + c)``; they are
    exact rationals of the binary value of ``K``.
    """

    m: int
    n: int
    K: float
    shifts: tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return len(self.shifts)

    @property
    def roots(self) -> list[float]:
        return [float(-1 - c) for c in self.shifts]

    def exact(self, x: int | Fraction) -> Fraction:
        out = Fraction(1)
        for c in self.shifts:
            out *= x + 1 + c
        return out

    def __call__(self, x: float) -> float:
        return float(np.prod([x + 1.0 + float(c) for c in self.shifts]))

    @property
    def coefficients(self) -> np.ndarray:
        """Monomial coefficients, constant term first."""
        poly = [Fraction(1)]
        for c in self.shifts:
            a = 1 + c
            nxt = [Fraction(0)] * (len(poly) + 1)
            for i, p in enumerate(poly):
                nxt[i] += p * a
                nxt[i + 1] += p
            poly = nxt
        return np.array([float(p) for p in poly])


def hua_polynomial(m: int, n: int, K: float) -> HuaPolynomial:
    if m < 1 or n < 1 or not K > 0:
        raise ParameterError("need m, n >= 1 and K > 0")
    k = Fraction(K)
    shifts = [Fraction(0)]
    for r in range(m):
        shifts.extend(k * (n + r - j) for j in range(n))
    return HuaPolynomial(m, n, float(K), tuple(shifts))


@dataclass(frozen=True)
class KernelCoefficients:
    m: int
    n: int
    K: float
    N: int
    exact: tuple[Fraction, ...]

    @property
    def b(self) -> np.ndarray:
        return np.array([float(v) for v in self.exact])

    @property
    def top(self) -> int:
        return len(self.exact) - 1


def bergman_coefficients(m: int, n: int, K: float, N: int) -> KernelCoefficients:
    """b_0 .. b_{mn+1} from the factorial recurrence, in exact rational arithmetic."""
    p = hua_polynomial(m, n, K)
    b: list[Fraction] = []
    for j in range(m * n + 2):
        acc = p.exact(-j - 1)
        for k, bk in enumerate(b):
            acc -= bk * (-1) ** k * Fraction(factorial(j), factorial(j - k))
        b.append(acc / ((-1) ** j * factorial(j)))
    return KernelCoefficients(m, n, float(K), int(N), tuple(b))


def g_series(coeffs: KernelCoefficients, xy: ScalarXY) -> tuple[float, float, float]:
    """G(X), G'(X), G''(X) as plain (non-log) sums; raises RangeError on overflow."""
    y = xy.Y
    N = coeffs.N
    out = []
    for shift in range(3):
        total = 0.0
        with np.errstate(over="raise"):
            try:
                for j, bj in enumerate(coeffs.b):
                    if bj:
                        total += bj * factorial(N + j - 1 + shift) * y ** (N + j + shift)
            except (OverflowError, FloatingPointError):
                raise RangeError(f"G series overflows at Y={y!r}") from None
        if not np.isfinite(total):
            raise RangeError(f"G series overflows at Y={y!r}")
        out.append(total)
    if out[0] <= 0:
        raise DomainError(f"G(X) = {out[0]} is not positive at Y={y!r}")
    return tuple(out)


def _bergman_log_derivs(coeffs: KernelCoefficients, y):
    """log G, M' = d log G/dX, M'' for scalar or array Y, overflow free."""
    y = np.asarray(y, dtype=float)
    u = 1.0 / y
    N, top = coeffs.N, coeffs.top
    s = [np.zeros_like(y) for _ in range(3)]
    for j, bj in enumerate(coeffs.b):
        if not bj:
            continue
        upow = u ** (top - j)
        for shift in range(3):
            s[shift] = s[shift] + bj * factorial(N + j - 1 + shift) * upow
    if np.any(s[0] <= 0):
        raise DomainError("Bergman series G(X) is not positive")
    r1 = s[1] / s[0]
    r2 = s[2] / s[0]
    logg = (N + top) * np.log(y) + np.log(s[0])
    return logg, y * r1, y * y * (r2 - r1 * r1)


def kernel_log_normalisation(domain: CartanHartogsDomain) -> float:
    """log of K^(-mn) pi^(-(mn+N))."""
    mn = domain.m * domain.n
    return -mn * log(domain.K) - (mn + domain.N) * log(pi)


def _coeffs_for(domain: CartanHartogsDomain) -> KernelCoefficients:
    _require_type_i(domain)
    return bergman_coefficients(domain.m, domain.n, domain.K, domain.N)


def bergman_log_kernel(domain: CartanHartogsDomain, pt: Point) -> float:
    """log K_{Y_I}(Z, W; conj Z, conj W) on the diagonal."""
    coeffs = _coeffs_for(domain)
    xy = xy_of(domain, pt)
    logg, _, _ = _bergman_log_derivs(coeffs, xy.Y)
    det = generic_det(domain.base, pt.Z)
    return float(kernel_log_normalisation(domain) + logg - domain.mu_exp * log(det))


def bergman_log_kernel_flat(domain: CartanHartogsDomain, zs: np.ndarray) -> np.ndarray:
    """Batched log kernel over flat coordinates ``(k, dim)``."""
    coeffs = _coeffs_for(domain)
    x, logdet = flat_invariants(domain, zs)
    logg, _, _ = _bergman_log_derivs(coeffs, 1.0 / (1.0 - x))
    return kernel_log_normalisation(domain) + logg - domain.mu_exp * logdet


def log_g_lambda(domain: CartanHartogsDomain, pt: Point) -> float:
    """log G_lambda = lambda log Y - mu_exp log generic_det(Z)."""
    xy = xy_of(domain, pt)
    det = generic_det(domain.base, pt.Z)
    return float(domain.lam * log(xy.Y) - domain.mu_exp * log(det))


def log_g_lambda_flat(domain: CartanHartogsDomain, zs: np.ndarray) -> np.ndarray:
    x, logdet = flat_invariants(domain, zs)
    return -domain.lam * np.log1p(-x) - domain.mu_exp * logdet


@dataclass(frozen=True)
class PotentialDerivs:
    """A generating function of X and its X-derivatives.

    ``value`` is the log of the generator; ``d1``..``d4`` are successive
    derivatives in X (``d3``/``d4`` only for the power generator).
    """

    generator: str
    X: float
    Y: float
    value: float
    d1: float
    d2: float
    d3: float | None = None
    d4: float | None = None


def ricci_log_g(domain: CartanHartogsDomain, y):
    """log G_I(X) where det T_lambda = G_I(X) det(I - Z Z*)^(-mu_exp)."""
    _require_type_i(domain)
    lam, K, N, mn = domain.lam, domain.K, domain.N, domain.m * domain.n
    y = np.asarray(y, dtype=float)
    return (mn * np.log(lam * y / K + domain.m + domain.n + (N - lam) / K)
            + N * log(lam) + (N + 1) * np.log(y))


def ricci_first_second(domain: CartanHartogsDomain, y):
    """Closed forms of d log G_I / dX and d^2 log G_I / dX^2."""
    _require_type_i(domain)
    lam, K, N = domain.lam, domain.K, domain.N
    m, n = domain.m, domain.n
    y = np.asarray(y, dtype=float)
    den = lam * y + K * (m + n) + N - lam
    if np.any(den <= 0):
        raise ParameterError(f"lambda={lam} makes lambda*Y + K(m+n) + N - lambda nonpositive")
    d1 = m * n * lam * y**2 / den + (N + 1) * y
    d2 = m * n * lam * y**3 * (lam * y + 2 * K * m + 2 * K * n + 2 * N - 2 * lam) / den**2 + (N + 1) * y**2
    return d1, d2


def derivs_of(generator: str, domain: CartanHartogsDomain, xy: ScalarXY) -> PotentialDerivs:
    x, y = xy.X, xy.Y
    if generator == POWER:
        lam = domain.lam
        return PotentialDerivs(POWER, x, y, lam * log(y), lam * y, lam * y**2,
                               2 * lam * y**3, 6 * lam * y**4)
    if generator == BERGMAN:
        logg, d1, d2 = _bergman_log_derivs(_coeffs_for(domain), y)
        return PotentialDerivs(BERGMAN, x, y, float(logg), float(d1), float(d2))
    if generator == RICCI:
        d1, d2 = ricci_first_second(domain, y)
        return PotentialDerivs(RICCI, x, y, float(ricci_log_g(domain, y)), float(d1), float(d2))
    raise ParameterError(f"unknown generator {generator!r}")


def bergman_first_second(domain: CartanHartogsDomain, y):
    """(M', M'') of log G(X) for scalar or array Y."""
    _, d1, d2 = _bergman_log_derivs(_coeffs_for(domain), y)
    return d1, d2
