"""Ricci and holomorphic sectional curvature of the G_lambda metric on Y_I.

Curvatures use the ratio convention

    Ric(dz)  = -dz Hess(log det T) dz* / dz T dz*
    HSC(dz)  = dz (-dbar d T + dT T^-1 dT*) dz* / (dz T dz*)^2

so the unit ball with its Bergman metric has HSC = -2/3 and Ric = -1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .domains import CartanHartogsDomain, Point, generic_det, sample_interior, xy_of
from .errors import PreconditionError
from .metrics import MetricTensor, pullback_metric, reduce_to_origin, t_lambda
from .potentials import RICCI, bergman_first_second, ricci_first_second, ricci_log_g

DEFAULT_Y_MAX = 1e4
ROUNDING_RTOL = 1e-10


def det_t_lambda(domain: CartanHartogsDomain, pt: Point) -> float:
    """log det T_lambda = log G_I(X) - mu_exp log det(I - Z Z*)."""
    y = xy_of(domain, pt).Y
    return float(ricci_log_g(domain, y) - domain.mu_exp * np.log(generic_det(domain.base, pt.Z)))


def ricci_derivs(domain: CartanHartogsDomain, y: float) -> tuple[float, float]:
    if y < 1:
        raise PreconditionError(f"Y must be >= 1, got {y}")
    d1, d2 = ricci_first_second(domain, y)
    return float(d1), float(d2)


def ricci_hessian(domain: CartanHartogsDomain, pt: Point) -> MetricTensor:
    """Hessian of log det T_lambda, assembled by pulling back from (0, W*)."""
    return pullback_metric(domain, pt, RICCI)


def ricci_along(domain: CartanHartogsDomain, pt: Point, direction: np.ndarray) -> float:
    direction = np.asarray(direction, dtype=complex)
    if not np.any(direction):
        raise PreconditionError("direction must be nonzero")
    num = ricci_hessian(domain, pt).length2(direction)
    den = t_lambda(domain, pt).length2(direction)
    return -num / den


def ratio_limit(domain: CartanHartogsDomain) -> float:
    """Common X -> 1 limit (mn + N + 1) / lambda of all six ratio functions."""
    return (domain.m * domain.n + domain.N + 1) / domain.lam


def _ratios(domain, x, d1, d2):
    x = np.asarray(x, dtype=float)
    y = 1.0 / (1.0 - x)
    lam, K, mu = domain.lam, domain.K, domain.mu_exp
    phi = (d1 * x / K + mu) / (lam * y * x / K + mu)
    psi = (d1 + d2 * x) / (lam * y + lam * y * y * x)
    ups = d1 / (lam * y)
    return phi, psi, ups


def ricci_ratio_functions(domain: CartanHartogsDomain, x):
    """(Phi_I, Psi_I, Upsilon_I): ratios of the log det T form to the T form per block."""
    d1, d2 = ricci_first_second(domain, 1.0 / (1.0 - np.asarray(x, dtype=float)))
    return _ratios(domain, x, d1, d2)


def bergman_ratio_functions(domain: CartanHartogsDomain, x):
    """(Phi, Psi, Upsilon): ratios of the Bergman form to the G_lambda form per block."""
    d1, d2 = bergman_first_second(domain, 1.0 / (1.0 - np.asarray(x, dtype=float)))
    return _ratios(domain, x, d1, d2)


@dataclass(frozen=True)
class HscTerms:
    """Coefficients of the fourth-order form Omega_1 at (0, W)."""

    Y: float
    P1: float
    P12: float
    P2: float
    Q1: float
    Q2: float
    R: float
    M1: float


def m1_constant(domain: CartanHartogsDomain) -> float:
    return (domain.m + domain.n) * domain.K + domain.N - domain.lam


def hsc_terms(domain: CartanHartogsDomain, y: float) -> HscTerms:
    lam, K = domain.lam, domain.K
    m1 = m1_constant(domain)
    return HscTerms(
        Y=y,
        P1=-2 * lam * y**4,
        P12=-4 * lam * y**3,
        P2=-2 * lam * y**2,
        Q1=-4 * lam * y**2 / K,
        Q2=(4 / K) * lam**2 * y**4 / (lam * y + m1) - (8 / K) * lam * y**3,
        R=-(2 / K**2) * lam * (y**2 - y),
        M1=m1,
    )


def hsc_origin(domain: CartanHartogsDomain, w: np.ndarray, dz1: np.ndarray, dw: np.ndarray) -> float:
    """Closed-form HSC at (0, W) in direction (dZ_1, dW)."""
    w = np.asarray(w, dtype=complex).ravel()
    dz1 = np.asarray(dz1, dtype=complex).ravel()
    dw = np.asarray(dw, dtype=complex).ravel()
    if not (np.any(dz1) or np.any(dw)):
        raise PreconditionError("direction must be nonzero")
    y = xy_of(domain, Point(np.zeros(domain.base.shape), w)).Y
    t = hsc_terms(domain, y)
    lam, K = domain.lam, domain.K

    wdw2 = abs(np.vdot(dw, w)) ** 2
    dw2 = float(np.vdot(dw, dw).real)
    dz2 = float(np.vdot(dz1, dz1).real)
    dz = dz1.reshape(domain.base.shape)
    g = dz @ dz.conj().T
    tr4 = float(np.trace(g @ g).real)
    zcoef = (lam * y + t.M1) / K

    omega1 = (t.P1 * wdw2**2 + t.P12 * wdw2 * dw2 + t.P2 * dw2**2
              + t.Q1 * dw2 * dz2 + t.Q2 * wdw2 * dz2 + t.R * dz2**2
              - 2 * zcoef * tr4)
    omega2 = (zcoef * dz2 + lam * y * dw2 + lam * y**2 * wdw2) ** 2
    return omega1 / omega2


def hsc_numeric(domain: CartanHartogsDomain, pt: Point, direction: np.ndarray,
                step: float = 1e-3, with_error: bool = False):
    """Oracle: finite differences of the closed-form T_lambda along the complex line.

    Fourth-order stencils in both real directions of ``t`` for
    ``z(t) = z + t * direction``; ``step`` is scaled by the local distance to
    the boundary and by ``1 / |direction|``. With ``with_error`` also returns the change
    against a run at twice the step.
    """
    xi = np.asarray(direction, dtype=complex).ravel()
    if not np.any(xi):
        raise PreconditionError("direction must be nonzero")
    z0 = pt.flat(domain)
    # step is relative to the distance from the boundary and the direction's length
    h1 = np.eye(domain.m) - pt.Z @ pt.Z.conj().T
    radius = min(1.0 - xy_of(domain, pt).X, float(np.linalg.eigvalsh(h1)[0]))
    step = step * radius / float(np.linalg.norm(xi))

    def tmat(t):
        return t_lambda(domain, Point.from_flat(domain, z0 + t * xi)).matrix

    def estimate(h):
        t0 = tmat(0)
        cache = {}
        for unit in (1.0, 1j):
            for k in (-2, -1, 1, 2):
                cache[(unit, k)] = tmat(k * h * unit)

        def d1(unit):
            c = cache
            return (-c[(unit, 2)] + 8 * c[(unit, 1)] - 8 * c[(unit, -1)] + c[(unit, -2)]) / (12 * h)

        def d2(unit):
            c = cache
            return (-c[(unit, 2)] + 16 * c[(unit, 1)] - 30 * t0 + 16 * c[(unit, -1)] - c[(unit, -2)]) / (12 * h * h)

        da, db = d1(1.0), d1(1j)
        dt = 0.5 * (da - 1j * db)
        dtbar = 0.5 * (da + 1j * db)
        lap = d2(1.0) + d2(1j)
        ddbar = 0.25 * (xi @ lap @ xi.conj()).real
        cross = (xi @ dt) @ np.linalg.solve(t0, dtbar @ xi.conj())
        num = -ddbar + cross.real
        den = (xi @ t0 @ xi.conj()).real
        return num / den**2

    value = estimate(step)
    if with_error:
        return value, abs(value - estimate(2 * step))
    return value


def hsc_numeric_origin(domain, w, dz1, dw, step: float = 1e-3, with_error: bool = False):
    pt = Point(np.zeros(domain.base.shape), w)
    direction = np.concatenate([np.asarray(dz1, dtype=complex).ravel(), np.asarray(dw, dtype=complex).ravel()])
    return hsc_numeric(domain, pt, direction, step, with_error)


def hsc_at(domain: CartanHartogsDomain, pt: Point, direction: np.ndarray) -> float:
    """HSC at a general point by transporting (pt, direction) to (0, W*)."""
    jac, w_star = reduce_to_origin(domain, pt)
    moved = np.asarray(direction, dtype=complex) @ jac.matrix
    k = domain.base.z_dim
    return hsc_origin(domain, w_star, moved[:k], moved[k:])


def trace_inequality_check(z: np.ndarray, rtol: float = 1e-12) -> bool:
    """tr(ZZ*ZZ*) <= tr(ZZ*)^2 <= m tr(ZZ*ZZ*), with rounding slack ``rtol``."""
    z = np.atleast_2d(np.asarray(z, dtype=complex))
    g = z @ z.conj().T
    t4 = float(np.trace(g @ g).real)
    t2 = float(np.trace(g).real) ** 2
    m = z.shape[0]
    slack = rtol * max(t2, t4, 1e-300)
    return bool(t4 <= t2 + slack and t2 <= m * t4 + slack)


# Bound families. Each maps an array of Y >= 1 to the coefficient ratio it bounds.

def lower_families(domain: CartanHartogsDomain, y) -> dict[str, np.ndarray]:
    y = np.asarray(y, dtype=float)
    lam, K, N = domain.lam, domain.K, domain.N
    m, n = domain.m, domain.n
    m1 = m1_constant(domain)
    s = lam * y + m1
    const = np.full_like(y, -2.0 / lam)
    return {
        "phi1": const,
        "phi2": const,
        "phi3": const,
        "phi4": -2 * y / s,
        "phi5": -2 * y * (lam * y + 2 * m1) / s**2,
        "phi61": (-2 * lam * (y**2 - y) - 2 * K * s) / s**2,
    }


def phi51(domain: CartanHartogsDomain, y) -> np.ndarray:
    """Looser replacement for phi5 with M1 replaced by (m+n)K + N."""
    y = np.asarray(y, dtype=float)
    lam = domain.lam
    s = lam * y + m1_constant(domain)
    return -2 * y * (lam * y + 2 * (domain.m + domain.n) * domain.K + 2 * domain.N) / s**2


def upper_families(domain: CartanHartogsDomain, y) -> dict[str, np.ndarray]:
    y = np.asarray(y, dtype=float)
    lam, K, m = domain.lam, domain.K, domain.m
    m1 = m1_constant(domain)
    s = lam * y + m1
    return {
        "phi42": 2 * y / s,
        "phi52": 2 * (lam * (y - 1) ** 2 + (m1 + lam) * (2 * y - 1)) / s**2,
        "phi62": 2 * (lam * (y**2 - y) + K * s / m) / s**2,
    }


def phi62_unshifted(domain: CartanHartogsDomain, y) -> np.ndarray:
    """The upper-bound family with lambda Y^2 in place of lambda (Y^2 - Y)."""
    y = np.asarray(y, dtype=float)
    lam = domain.lam
    s = lam * y + m1_constant(domain)
    return 2 * (lam * y**2 + domain.K * s / domain.m) / s**2


def upper_bound_conditions(domain: CartanHartogsDomain, y: float, c: float) -> dict[str, float]:
    """Coefficients of Omega_1 + C Omega_2 whose signs certify HSC <= -C at this Y.

    Returns P1*, P12*, P2*, the combined Q coefficient bound Q1*/X + Q2* (or
    Q1* at X = 0) and the |dZ_1|^4 coefficient after the trace inequality.
    """
    t = hsc_terms(domain, y)
    lam, K = domain.lam, domain.K
    s = lam * y + t.M1
    x = 1.0 - 1.0 / y
    q1 = t.Q1 + 2 * c * lam * y * s / K
    q2 = t.Q2 + 2 * c * lam * y**2 * s / K
    r = t.R + c * s**2 / K**2
    return {
        "P1*": t.P1 + c * lam**2 * y**4,
        "P12*": t.P12 + 2 * c * lam**2 * y**3,
        "P2*": t.P2 + c * lam**2 * y**2,
        "Q1*": q1,
        "Q*": q1 / x + q2 if x > 0 else q1,
        "R*": r - 2 * s / (domain.m * K),
    }


@dataclass
class BoundsReport:
    """Empirical and analytic curvature or equivalence constants.

    ``lower``/``upper`` bracket every sampled value; ``constants`` holds the
    named extrema, ``witnesses`` where each was attained.
    """

    kind: str
    lower: float
    upper: float
    constants: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    grid: dict = field(default_factory=dict)
    samples: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "lower": self.lower,
            "upper": self.upper,
            "constants": dict(sorted(self.constants.items())),
            "witnesses": dict(sorted(self.witnesses.items())),
            "grid": dict(sorted(self.grid.items())),
            "samples": dict(sorted(self.samples.items())),
        }


def y_grid(y_max: float = DEFAULT_Y_MAX, grid: int = 2001, extra=()) -> np.ndarray:
    """Log-spaced Y in [1, y_max] joined with ``extra`` values, sorted."""
    if not y_max > 1:
        raise PreconditionError(f"y_max must exceed 1, got {y_max}")
    if grid < 1:
        raise PreconditionError("grid must be nonempty")
    ys = np.geomspace(1.0, y_max, grid) if grid > 1 else np.array([1.0])
    return np.unique(np.concatenate([ys, np.asarray(extra, dtype=float)]))


def _extremum(families: dict, grid: np.ndarray, limit, pick, var: str = "Y", at_limit="inf"):
    """Extremum over named families on ``grid``, seeded with the analytic limit.

    Ties keep the earliest family name and lowest grid index.
    """
    best, where = limit, {"family": "limit", var: at_limit}
    for name in sorted(families):
        vals = families[name]
        i = int(pick(vals))
        v = float(vals[i])
        if (pick is np.argmin and v < best) or (pick is np.argmax and v > best):
            best, where = v, {"family": name, var: float(grid[i])}
    return best, where


def hsc_lower_bound(domain: CartanHartogsDomain, y_max: float = DEFAULT_Y_MAX,
                    grid: int = 2001, extra_y=()) -> BoundsReport:
    """-a = smallest value of the lower families on [1, y_max] and at Y = inf."""
    ys = y_grid(y_max, grid, extra_y)
    lo, where = _extremum(lower_families(domain, ys), ys, -2.0 / domain.lam, np.argmin)
    relaxed = float(np.min(phi51(domain, ys)))
    return BoundsReport(
        "HSC-lower", lo, np.inf,
        constants={"a": -lo, "a_relaxed": -min(lo, relaxed), "limit": -2.0 / domain.lam},
        witnesses={"a": where},
        grid={"y_max": y_max, "points": int(ys.size)},
    )


def hsc_upper_bound(domain: CartanHartogsDomain, y_max: float = DEFAULT_Y_MAX,
                    grid: int = 2001, extra_y=()) -> BoundsReport:
    """-C with C = min(2/lambda, min of the upper families)."""
    ys = y_grid(y_max, grid, extra_y)
    c, where = _extremum(upper_families(domain, ys), ys, 2.0 / domain.lam, np.argmin)
    return BoundsReport(
        "HSC-upper", -np.inf, -c,
        constants={"C": c, "limit": 2.0 / domain.lam},
        witnesses={"C": where},
        grid={"y_max": y_max, "points": int(ys.size)},
    )


def x_grid(grid: int = 2001, extra=()) -> np.ndarray:
    """X in [0, 1): dense near 1 via 1 - X log-spaced down to 1e-8."""
    gaps = np.geomspace(1.0, 1e-8, grid)
    return np.unique(np.concatenate([1.0 - gaps, np.asarray(extra, dtype=float)]))


def ratio_extrema(funcs, xs: np.ndarray, limit: float) -> tuple[float, float, dict]:
    """(min, max) over three ratio functions on ``xs`` and their common limit."""
    names = ("Phi", "Psi", "Upsilon")
    families = dict(zip(names, funcs))
    lo, where_lo = _extremum(families, xs, limit, np.argmin, "X", 1.0)
    hi, where_hi = _extremum(families, xs, limit, np.argmax, "X", 1.0)
    return lo, hi, {"min": where_lo, "max": where_hi}


def ricci_bounds(domain: CartanHartogsDomain, grid: int = 2001, extra_x=()) -> BoundsReport:
    """-a <= Ric <= -b with a, b the max/min of Phi_I, Psi_I, Upsilon_I on [0, 1]."""
    xs = x_grid(grid, extra_x)
    lo, hi, where = ratio_extrema(ricci_ratio_functions(domain, xs), xs, ratio_limit(domain))
    return BoundsReport("Ricci", -hi, -lo, constants={"a": hi, "b": lo, "limit": ratio_limit(domain)},
                        witnesses={"a": where["max"], "b": where["min"]},
                        grid={"x_points": int(xs.size)})


def random_directions(rng: np.random.Generator, domain: CartanHartogsDomain, count: int) -> list[np.ndarray]:
    """Gaussian directions, with pure base and pure fiber directions mixed in."""
    d, k = domain.dim, domain.base.z_dim
    out = []
    for i in range(count):
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        if i % 4 == 1:
            v[k:] = 0
        elif i % 4 == 2:
            v[:k] = 0
        out.append(v)
    return out


def _scan_points(domain, samples, x_max, seed):
    rng = np.random.default_rng(seed)
    pts = [sample_interior(domain, rng, x_max) for _ in range(samples)]
    return rng, pts


def ricci_scan(domain: CartanHartogsDomain, samples: int = 50, directions: int = 8,
               x_max: float = 0.99, seed: int = 42, grid: int = 2001) -> BoundsReport:
    """Sample Ric at seeded points and directions and bracket by the analytic constants."""
    rng, pts = _scan_points(domain, samples, x_max, seed)
    vals, where = [], []
    xs = []
    for i, pt in enumerate(pts):
        xs.append(xy_of(domain, pt).X)
        num = ricci_hessian(domain, pt)
        den = t_lambda(domain, pt)
        for j, v in enumerate(random_directions(rng, domain, directions)):
            vals.append(-num.length2(v) / den.length2(v))
            where.append((i, j))
    report = ricci_bounds(domain, grid, xs)
    _attach_samples(report, vals, where)
    return report


def hsc_scan(domain: CartanHartogsDomain, samples: int = 50, directions: int = 8,
             x_max: float = 0.99, seed: int = 42, y_max: float = DEFAULT_Y_MAX,
             grid: int = 2001) -> BoundsReport:
    """Sample HSC (via transport to the origin) and bracket by -a and -C."""
    rng, pts = _scan_points(domain, samples, x_max, seed)
    vals, where, ys = [], [], []
    for i, pt in enumerate(pts):
        ys.append(xy_of(domain, pt).Y)
        for j, v in enumerate(random_directions(rng, domain, directions)):
            vals.append(hsc_at(domain, pt, v))
            where.append((i, j))
    low = hsc_lower_bound(domain, y_max, grid, ys)
    up = hsc_upper_bound(domain, y_max, grid, ys)
    report = BoundsReport("HSC", low.lower, up.upper,
                          constants={**low.constants, **up.constants},
                          witnesses={**low.witnesses, **up.witnesses},
                          grid=low.grid)
    _attach_samples(report, vals, where)
    return report


def within(vals, lower: float, upper: float, rtol: float = ROUNDING_RTOL) -> bool:
    """All ``vals`` inside [lower, upper] up to relative rounding slack."""
    vals = np.asarray(vals, dtype=float)
    ok_lo = np.isinf(lower) or np.all(vals >= lower - rtol * abs(lower))
    ok_hi = np.isinf(upper) or np.all(vals <= upper + rtol * abs(upper))
    return bool(ok_lo and ok_hi)


def _attach_samples(report: BoundsReport, vals, where) -> None:
    vals = np.asarray(vals)
    imin, imax = int(np.argmin(vals)), int(np.argmax(vals))
    report.samples = {
        "count": int(vals.size),
        "min": float(vals[imin]),
        "max": float(vals[imax]),
        "argmin": list(where[imin]),
        "argmax": list(where[imax]),
        "within": within(vals, report.lower, report.upper),
        "negative": bool(np.all(vals < 0)),
    }
