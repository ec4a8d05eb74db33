"""Certificate that no marginal F beats 1.5852 in the independent regime.

Seven values of phi are taken at points built from alpha = 1.352 and
beta = 1.532.  Each depends only on F at the five abscissae
1/beta < 1/alpha < 1 < alpha < beta, so the question reduces to a min-max
over monotone 5-tuples (f1, ..., f5) in [0, 1].

The terms form a chain (f1)-(f1,f2)-(f2,f3)-(f3,f4)-(f4)-(f4,f5)-(f5), so the
exact grid min-max is a dynamic program over one variable at a time.  A
Lipschitz slack converts the grid value into a bound over all real tuples.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .marginals import DomainError

ALPHA = 1.352
BETA = 1.532
THRESHOLD = 1.5852
SANITY_CAP = 1.59

XY_GE_1 = "xy>=1"
XY_LE_1 = "xy<=1"


@dataclass(frozen=True)
class CertificatePoint:
    x: float
    y: float
    ix: int  # index of F(x) among the five abscissae
    iy: int

    @property
    def branch(self) -> str:
        return XY_GE_1 if self.x * self.y >= 1.0 else XY_LE_1

    @property
    def coefficients(self) -> tuple[float, float, float]:
        """(cx, y, ch) in phi = 1 + y - cx F(x) - y F(y) + ch F(x) F(y)."""
        inv = 1.0 / self.x
        return min(1.0, 1.0 - inv + self.y), self.y, min(1.0 + inv, 1.0 + self.y)

    def value(self, fx, fy):
        cx, y, ch = self.coefficients
        return 1.0 + y - cx * fx - y * fy + ch * fx * fy

    def lipschitz(self) -> float:
        """Sup over [0,1]^2 of the l1 norm of the gradient in the f-values."""
        cx, y, ch = self.coefficients
        if self.ix == self.iy:
            return max(abs(cx + y), abs(2.0 * ch - cx - y))
        return max(abs(cx), abs(ch - cx)) + max(abs(y), abs(ch - y))


ABSCISSAE = (1.0 / BETA, 1.0 / ALPHA, 1.0, ALPHA, BETA)

# in chain order
POINTS = (
    CertificatePoint(1.0 / BETA, 1.0 / BETA, 0, 0),
    CertificatePoint(1.0 / BETA, 1.0 / ALPHA, 0, 1),
    CertificatePoint(1.0 / ALPHA, 1.0, 1, 2),
    CertificatePoint(1.0, ALPHA, 2, 3),
    CertificatePoint(ALPHA, ALPHA, 3, 3),
    CertificatePoint(ALPHA, BETA, 3, 4),
    CertificatePoint(BETA, BETA, 4, 4),
)
POINT_NAMES = (
    "(1/beta,1/beta)",
    "(1/beta,1/alpha)",
    "(1/alpha,1)",
    "(1,alpha)",
    "(alpha,alpha)",
    "(alpha,beta)",
    "(beta,beta)",
)


def lambda_constants() -> tuple[float, float, float, float]:
    l1 = 383 / 500 + math.sqrt(154595269) / 105500
    l2 = 169 * (3830 * l1 - 2367) / (2500 * (294 * l1 - 169))
    l3 = 169 / 250 - (227 / 2500) / (2 * l2 - 1)
    l4 = 0.5 - 0.0908 / (2 * l3 - 0.648)
    return l1, l2, l3, l4


def lambda_closed_forms(dps: int = 40):
    """The same constants from their radical closed forms, in mpmath."""
    import mpmath

    with mpmath.workdps(dps):
        r = mpmath.sqrt(154595269)
        l1 = mpmath.mpf(383) / 500 + r / 105500
        l2 = mpmath.mpf(18069396176) / 32281745375 + 2054533 * r / 129126981500
        l3 = (17274798609857 - 466378991 * r) / mpmath.mpf(22964052192750)
        l4 = (7635461853 + 9926731 * r) / (137555892260 + 32555020 * r)
        return l1, l2, l3, l4


def _check_tuple(f) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.shape != (5,):
        raise DomainError("expected five values F(1/beta), F(1/alpha), F(1), F(alpha), F(beta)")
    if np.any(f < 0.0) or np.any(f > 1.0):
        raise DomainError("F values must lie in [0, 1]")
    if np.any(np.diff(f) < 0.0):
        raise DomainError(f"F values must be non-decreasing, got {f.tolist()}")
    return f


def phi_at_points(f_values) -> tuple[float, ...]:
    """phi at the seven certificate points, in ``POINTS`` order."""
    f = _check_tuple(f_values)
    return tuple(float(p.value(f[p.ix], f[p.iy])) for p in POINTS)


def tuple_from_marginal(marginal) -> tuple[float, ...]:
    return tuple(float(marginal.cdf(x)) for x in ABSCISSAE)


# ---------------------------------------------------------------------------
# grid certificate
# ---------------------------------------------------------------------------


@dataclass
class LowerBoundReport:
    resolution: float
    threshold: float
    minimax: float
    argmin_tuple: tuple[float, ...]
    slack: float
    tuples_checked: int
    passed: bool
    refined_minimax: float | None = None
    refined_tuple: tuple[float, ...] | None = None
    wall_time: float = 0.0
    term_values: tuple[float, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "minimax": self.minimax,
            "argmin_tuple": list(self.argmin_tuple),
            "slack": self.slack,
            "tuples_checked": self.tuples_checked,
            "passed": self.passed,
            "resolution": self.resolution,
            "threshold": self.threshold,
            "refined_minimax": self.refined_minimax,
            "refined_tuple": None if self.refined_tuple is None else list(self.refined_tuple),
            "wall_time": self.wall_time,
        }


def _chain_step(prev: np.ndarray, g: np.ndarray, point: CertificatePoint, block: int):
    """new[j] = min over i <= j of max(prev[i], term(g[i], g[j])), with argmin."""
    n = g.size
    best = np.empty(n)
    arg = np.empty(n, dtype=np.int64)
    rows = np.arange(n)[:, None]
    for start in range(0, n, block):
        cols = np.arange(start, min(start + block, n))
        m = np.maximum(prev[:, None], point.value(g[:, None], g[None, cols]))
        m[rows > cols[None, :]] = np.inf
        k = np.argmin(m, axis=0)
        arg[cols] = k
        best[cols] = m[k, np.arange(cols.size)]
    return best, arg


def grid_minimax(resolution: float, block: int = 256) -> tuple[float, tuple[float, ...], float]:
    """Exact min over monotone grid tuples of the seven-point max.

    Returns (value, argmin tuple, grid step).
    """
    steps = math.ceil(1.0 / resolution - 1e-9)
    g = np.linspace(0.0, 1.0, steps + 1)
    p = POINTS
    v = p[0].value(g, g)
    v, a2 = _chain_step(v, g, p[1], block)
    v, a3 = _chain_step(v, g, p[2], block)
    v, a4 = _chain_step(v, g, p[3], block)
    v = np.maximum(v, p[4].value(g, g))
    v, a5 = _chain_step(v, g, p[5], block)
    v = np.maximum(v, p[6].value(g, g))
    i5 = int(np.argmin(v))
    i4 = int(a5[i5])
    i3 = int(a4[i4])
    i2 = int(a3[i3])
    i1 = int(a2[i2])
    tup = tuple(float(g[i]) for i in (i1, i2, i3, i4, i5))
    return float(v[i5]), tup, 1.0 / steps


def slack_for(step: float) -> float:
    # rounding each coordinate to the nearest grid point keeps the tuple
    # monotone and moves every coordinate by at most step / 2
    return max(p.lipschitz() for p in POINTS) * step / 2.0


def refine_minimax(start) -> tuple[float, tuple[float, ...]]:
    """Local descent on min t s.t. t >= each term, f monotone, f in [0,1]."""
    start = np.asarray(start, dtype=float)
    z0 = np.append(start, max(phi_at_points(start)))
    cons = [
        {"type": "ineq", "fun": (lambda z, p=p: z[5] - p.value(z[p.ix], z[p.iy]))}
        for p in POINTS
    ]
    cons += [{"type": "ineq", "fun": (lambda z, k=k: z[k + 1] - z[k])} for k in range(4)]
    res = optimize.minimize(
        lambda z: z[5],
        z0,
        method="SLSQP",
        bounds=[(0.0, 1.0)] * 5 + [(None, None)],
        constraints=cons,
        options={"ftol": 1e-15, "maxiter": 500},
    )
    f = np.clip(res.x[:5], 0.0, 1.0)
    f = np.maximum.accumulate(f)
    value = max(phi_at_points(f))
    if value > z0[5]:
        return float(z0[5]), tuple(float(v) for v in start)
    return float(value), tuple(float(v) for v in f)


def verify_lower_bound(
    resolution: float = 1e-3,
    threshold: float = THRESHOLD,
    refine: bool = True,
) -> LowerBoundReport:
    if not 1e-4 <= resolution <= 1e-1:
        raise DomainError("resolution must lie in [1e-4, 1e-1]")
    t0 = time.perf_counter()
    value, tup, step = grid_minimax(resolution)
    slack = slack_for(step)
    n = round(1.0 / step) + 1
    report = LowerBoundReport(
        resolution=resolution,
        threshold=threshold,
        minimax=value,
        argmin_tuple=tup,
        slack=slack,
        tuples_checked=math.comb(n + 4, 5),
        passed=value >= threshold - slack,
        term_values=phi_at_points(tup),
    )
    if refine:
        report.refined_minimax, report.refined_tuple = refine_minimax(tup)
    report.wall_time = time.perf_counter() - t0
    return report


# ---------------------------------------------------------------------------
# replay of the analytic argument on samples
# ---------------------------------------------------------------------------


@dataclass
class ImplicationCheck:
    name: str
    premise_hits: int
    failures: int


def _implications(threshold: float):
    l1, l2, l3, l4 = lambda_constants()
    below = lambda idx: (lambda vals: all(vals[i] < threshold for i in idx))  # noqa: E731
    # indices into POINTS
    aa, ab, bb, one_a, ia_one, ib_ia, ib_ib = 4, 5, 6, 3, 2, 1, 0
    head = (aa, bb, ab)
    return [
        ("F(alpha) in (0.54, 0.81)", below((aa,)), lambda f: 0.54 < f[3] < 0.81),
        ("F(beta) < lambda1", below((bb,)), lambda f: f[4] < l1),
        ("F(alpha) < lambda2", below(head), lambda f: f[3] < l2),
        ("F(1) < lambda3", below(head + (one_a,)), lambda f: f[2] < l3),
        ("F(1/alpha) < lambda4", below(head + (one_a, ia_one)), lambda f: f[1] < l4),
        ("F(1/beta) < 0.1143", below(head + (one_a, ia_one, ib_ia)), lambda f: f[0] < 0.1143),
        ("F(1/beta) > 0.116", below((ib_ib,)), lambda f: f[0] > 0.116),
        ("not all seven below", below(range(7)), lambda f: False),
    ]


def replay_proof_chain(
    samples: int = 100_000,
    seed: int = 0,
    threshold: float = THRESHOLD,
    center=None,
    radius: float = 0.08,
) -> list[ImplicationCheck]:
    """Check each step of the analytic contradiction on sampled tuples.

    A third of the tuples are uniform monotone tuples, a third are drawn
    near ``center`` (default: the refined minimizer) and the rest sit very
    close to it in f2..f5 with f1 free, so the deeper premises get hits.
    """
    rng = np.random.default_rng(seed)
    if center is None:
        center = refine_minimax(grid_minimax(1e-2)[1])[1]
    center = np.asarray(center, dtype=float)
    k = samples // 3
    wide = np.sort(rng.random((k, 5)), axis=1)
    near = center + rng.uniform(-radius, radius, (k, 5))
    tight = center + rng.uniform(-radius / 50, radius / 50, (samples - 2 * k, 5))
    tight[:, 0] = rng.uniform(0.0, tight[:, 1])
    tuples = np.sort(np.clip(np.vstack([wide, near, tight]), 0.0, 1.0), axis=1)
    values = np.column_stack([p.value(tuples[:, p.ix], tuples[:, p.iy]) for p in POINTS])
    out = []
    for name, premise, conclusion in _implications(threshold):
        hits = fails = 0
        for f, vals in zip(tuples, values):
            if premise(vals):
                hits += 1
                if not conclusion(f):
                    fails += 1
        out.append(ImplicationCheck(name, hits, fails))
    return out
