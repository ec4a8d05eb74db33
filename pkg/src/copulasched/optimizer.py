"""Global maximization of phi over the positive quadrant.

phi is only piecewise smooth: F changes formula at its breakpoints, the two
``min`` terms switch on the curve xy = 1 and the Clayton positive part
switches on F(x)**(1/m) + F(y)**(1/m) = 1.  Writing

    phi = max(g_A, g_B),  g_A = 1 + y - F(x) - y F(y) + (1 + 1/x) H,
                          g_B = g_A + (1/x - y)(F(x) - H),

(valid because F(x) >= H) and, for Clayton, H = max(0, H_ext) with a positive
coefficient, phi is the pointwise maximum of at most four functions that are
smooth on every rectangle of breakpoints.  The maximum of phi over a
rectangle is therefore the largest of the branch maxima, each of which is a
smooth box-constrained problem.  Rectangles touching infinity are
parametrized by the reciprocal coordinate, which makes every box compact.
"""
from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy import optimize

from .copula import (
    CLAYTON,
    INDEPENDENT,
    CopulaSpec,
    clayton,
    independent,
    pair_value_extended,
    positive_region_excess,
)
from .marginals import INF, PaperPiecewise, Piece
from .ratio import eval_phi

# (a, b) pairs minimizing the maximum ratio for each number of tasks, as
# tabulated by the authors; None stands for the independent regime.
REFERENCE_AB: dict[int | None, tuple[float, float]] = {
    2: (2.2468, 0.7607),
    3: (1.9328, 0.7418),
    4: (1.8442, 0.7453),
    5: (1.8070, 0.7487),
    6: (1.7863, 0.7510),
    7: (1.7734, 0.7526),
    8: (1.7646, 0.7536),
    9: (1.7581, 0.7543),
    10: (1.7530, 0.7548),
    15: (1.7410, 0.7570),
    20: (1.7326, 0.7573),
    30: (1.7267, 0.7582),
    45: (1.7225, 0.7587),
    70: (1.7199, 0.7592),
    100: (1.7183, 0.7594),
    200: (1.7167, 0.7597),
    500: (1.7156, 0.7598),
    1000: (1.7153, 0.7599),
    5000: (1.7150, 0.7599),
    10**4: (1.7149, 0.7599),
    10**5: (1.7149, 0.7599),
    10**6: (1.7149, 0.7599),
    None: (1.715, 0.76),
}

XY_GE_1 = "xy>=1"
XY_LE_1 = "xy<=1"
H_POS = "H>0"
H_ZERO = "H=0"
BOTH = "both"

_X_FLOOR = 1e-12  # x only enters through 1/x; keep it finite at the origin


def regime_for(n: int | None, a: float, b: float) -> CopulaSpec:
    """Clayton regime with n tasks, or the independent regime for n None/inf."""
    marginal = PaperPiecewise(a, b)
    if n is None or n == INF:
        return independent(marginal)
    return clayton(int(n), marginal)


# ---------------------------------------------------------------------------
# cells
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Axis:
    """One coordinate restricted to a smooth piece of F.

    ``reciprocal`` axes are searched in the variable 1/t over [0, 1/lo]; every
    other axis in t itself.
    """

    piece: Piece
    lo: float
    hi: float
    reciprocal: bool = False

    @property
    def bounds(self) -> tuple[float, float]:
        if self.reciprocal:
            return (0.0, 1.0 / self.lo)
        return (self.lo, self.hi)

    def to_coord(self, v: float) -> float:
        if self.reciprocal:
            return INF if v == 0.0 else 1.0 / v
        return v

    def from_coord(self, t: float) -> float:
        if self.reciprocal:
            return 0.0 if t == INF else 1.0 / t
        return t

    def values(self, v: float) -> tuple[float, float, float, float]:
        """(t, dt/dv, F(t), dF/dv) at the search variable v."""
        if not self.reciprocal:
            return v, 1.0, _unit(self.piece.f(v)), self.piece.df(v)
        if v == 0.0:
            return INF, -INF, _unit(self.piece.f(INF)), 0.0
        t = 1.0 / v
        dfdv = 0.0 if self.piece.constant else -t * t * self.piece.df(t)
        return t, -t * t, _unit(self.piece.f(t)), dfdv


def _unit(f: float) -> float:
    # piece formulas evaluated at a cell edge can overshoot [0, 1] by rounding
    return 0.0 if f < 0.0 else 1.0 if f > 1.0 else f


def axes_for(marginal) -> list[Axis]:
    axes = []
    for p in marginal.pieces():
        if p.hi < INF:
            axes.append(Axis(p, p.lo, p.hi))
        elif p.lo > 0.0:
            axes.append(Axis(p, p.lo, INF, reciprocal=True))
        else:
            axes.append(Axis(p, 0.0, 1.0))
            axes.append(Axis(p, 1.0, INF, reciprocal=True))
    return axes


@dataclass(frozen=True)
class SearchCell:
    x_range: tuple[float, float]
    y_range: tuple[float, float]
    constraint_side: str
    copula_side: str

    def to_dict(self) -> dict:
        return {
            "x_range": list(self.x_range),
            "y_range": list(self.y_range),
            "constraint_side": self.constraint_side,
            "copula_side": self.copula_side,
        }


def _prod(s: float, t: float) -> float:
    return 0.0 if s == 0.0 or t == 0.0 else s * t


def _side(lo_val: float, hi_val: float, threshold: float, ge: str, le: str) -> str:
    if lo_val >= threshold:
        return ge
    if hi_val <= threshold:
        return le
    return BOTH


def make_cell(regime: CopulaSpec, ax: Axis, ay: Axis) -> SearchCell:
    constraint = _side(_prod(ax.lo, ay.lo), _prod(ax.hi, ay.hi), 1.0, XY_GE_1, XY_LE_1)
    if regime.regime == INDEPENDENT:
        copula_side = BOTH
    else:
        F = regime.marginal.cdf
        w_lo = positive_region_excess(regime, F(ax.lo), F(ay.lo))
        w_hi = positive_region_excess(regime, F(ax.hi), F(ay.hi))
        copula_side = H_POS if w_lo > 0.0 else H_ZERO if w_hi <= 0.0 else BOTH
    return SearchCell((ax.lo, ax.hi), (ay.lo, ay.hi), constraint, copula_side)


def enumerate_cells(regime: CopulaSpec) -> list[tuple[SearchCell, Axis, Axis]]:
    axes = axes_for(regime.marginal)
    return [(make_cell(regime, ax, ay), ax, ay) for ax in axes for ay in axes]


def branches_for(regime: CopulaSpec, cell: SearchCell) -> list[tuple[str, str]]:
    """Branch functions whose maximum over the cell can reach phi's maximum."""
    sides = [XY_GE_1, XY_LE_1] if cell.constraint_side == BOTH else [cell.constraint_side]
    if regime.regime == INDEPENDENT:
        hs = [BOTH]
    elif cell.copula_side == BOTH:
        hs = [H_POS, H_ZERO]
    else:
        hs = [cell.copula_side]
    return [(s, h) for s in sides for h in hs]


# ---------------------------------------------------------------------------
# branch functions
# ---------------------------------------------------------------------------


def _times(s: float, t: float) -> float:
    return 0.0 if t == 0.0 else s * t


class BranchFunction:
    """A smooth branch of phi on one cell, in the cell's search variables."""

    def __init__(self, regime: CopulaSpec, ax: Axis, ay: Axis, side: str, hside: str):
        self.regime = regime
        self.ax = ax
        self.ay = ay
        self.side = side
        self.hside = hside

    def value_grad(self, v: Sequence[float]) -> tuple[float, np.ndarray]:
        vx, vy = float(v[0]), float(v[1])
        x, dx, fx, dfx = self.ax.values(vx)
        y, dy, fy, dfy = self.ay.values(vy)
        # x enters only through 1/x and F(x)
        if self.ax.reciprocal:
            ix, dix = vx, 1.0
        else:
            ix, dix = 1.0 / x, -1.0 / (x * x)
        if self.hside == H_ZERO:
            h = hx = hy = 0.0
        else:
            h, hx, hy = pair_value_extended(self.regime, fx, fy)
        hvx, hvy = hx * dfx, hy * dfy
        if self.side == XY_GE_1:
            g = 1.0 + _times(y, 1.0 - fy) - fx + (1.0 + ix) * h
            gx = -dfx + dix * h + (1.0 + ix) * hvx
            gy = _times(dy, 1.0 - fy) - _times(y, dfy) + (1.0 + ix) * hvy
        else:
            k = (1.0 - fy) - (fx - h)
            g = 1.0 - (1.0 - ix) * fx + h + _times(y, k)
            gx = dix * fx - (1.0 - ix) * dfx + hvx + _times(y, hvx - dfx)
            gy = hvy + _times(dy, k) + _times(y, hvy - dfy)
        return g, np.array([gx, gy])

    def value(self, v: Sequence[float]) -> float:
        return self.value_grad(v)[0]

    def point(self, v: Sequence[float]) -> tuple[float, float]:
        return self.ax.to_coord(float(v[0])), self.ay.to_coord(float(v[1]))


def _safe_phi(regime: CopulaSpec, x: float, y: float) -> float:
    return eval_phi(regime, max(x, _X_FLOOR), y)


# ---------------------------------------------------------------------------
# local search
# ---------------------------------------------------------------------------


def _box(ax: Axis, ay: Axis) -> list[tuple[float, float]]:
    bx = ax.bounds
    if not ax.reciprocal:
        bx = (max(bx[0], _X_FLOOR), bx[1])
    return [bx, ay.bounds]


def _deterministic_starts(box) -> list[np.ndarray]:
    (x0, x1), (y0, y1) = box
    xs = (x0, 0.5 * (x0 + x1), x1)
    ys = (y0, 0.5 * (y0 + y1), y1)
    return [np.array([x, y]) for x in xs for y in ys]


def _random_starts(box, count: int, rng: np.random.Generator) -> list[np.ndarray]:
    (x0, x1), (y0, y1) = box
    pts = rng.random((count, 2))
    return [np.array([x0 + p[0] * (x1 - x0), y0 + p[1] * (y1 - y0)]) for p in pts]


@dataclass
class LocalResult:
    value: float
    v: np.ndarray
    converged: bool


def _ascend(fn: BranchFunction, box, starts: Iterable[np.ndarray]) -> LocalResult | None:
    def neg(v):
        g, grad = fn.value_grad(v)
        if not (math.isfinite(g) and np.all(np.isfinite(grad))):
            # only reachable on dominated branches at y = inf
            return 1e300, np.zeros(2)
        return -g, -grad

    best: LocalResult | None = None
    for s in starts:
        res = optimize.minimize(
            neg, s, jac=True, method="L-BFGS-B", bounds=box,
            options={"ftol": 1e-16, "gtol": 1e-13, "maxiter": 500},
        )
        val = -float(res.fun)
        if not math.isfinite(val) or val <= -1e299:
            continue
        if best is None or val > best.value:
            best = LocalResult(val, np.asarray(res.x, dtype=float), bool(res.success))
    return best


def _polish(fn: BranchFunction, box, start: LocalResult) -> LocalResult:
    """Derivative-free refinement of the best ascent point."""
    def neg(v):
        g = fn.value(v)
        return -g if math.isfinite(g) else 1e300

    res = optimize.minimize(
        neg, start.v, method="Powell", bounds=box,
        options={"xtol": 1e-12, "ftol": 1e-15, "maxfev": 4000},
    )
    val = -float(res.fun)
    if math.isfinite(val) and val > start.value:
        return LocalResult(val, np.asarray(res.x, dtype=float), start.converged)
    return start


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass
class CellResult:
    cell: SearchCell
    branch: tuple[str, str]
    local_max: float
    argmax: tuple[float, float]
    converged: bool

    def to_dict(self) -> dict:
        d = self.cell.to_dict()
        d.update(
            branch=list(self.branch),
            local_max=self.local_max,
            argmax=list(self.argmax),
            converged=self.converged,
        )
        return d


@dataclass
class RatioReport:
    argmax_x: float
    argmax_y: float
    max_value: float
    runs: int
    spread_delta: float
    per_cell: list[CellResult] = field(default_factory=list)
    wall_time: float = 0.0
    run_maxima: list[float] = field(default_factory=list)

    @property
    def argmax(self) -> tuple[float, float]:
        return self.argmax_x, self.argmax_y

    def to_dict(self, cells: bool = True, timing: bool = False) -> dict:
        d = {
            "argmax": [self.argmax_x, self.argmax_y],
            "value": self.max_value,
            "delta": self.spread_delta,
            "runs": self.runs,
            "run_maxima": list(self.run_maxima),
        }
        if timing:
            d["wall_time"] = self.wall_time
        if cells:
            d["cells"] = [c.to_dict() for c in self.per_cell]
        return d


def _pick(candidates: list[tuple[float, float, float]], rel: float = 1e-13):
    """Best candidate; among numerical ties prefer a point with xy >= 1.

    Under the symmetry phi(x, y) = phi(1/y, 1/x) maxima come in pairs and the
    xy >= 1 member is the conventional representative.
    """
    if not candidates:
        return (-INF, math.nan, math.nan)
    top = max(c[0] for c in candidates)
    tied = [c for c in candidates if c[0] >= top - rel * abs(top)]
    upper = [c for c in tied if _prod(c[1], c[2]) >= 1.0]
    return max(upper or tied, key=lambda c: c[0])


def maximize_phi(
    regime: CopulaSpec,
    runs: int = 10,
    seed: int = 0,
    random_starts: int = 2,
    polish: bool = True,
) -> RatioReport:
    """Maximize phi over (0, inf] x [0, inf].

    Each rectangle of F's breakpoints and each admissible branch is searched
    by bounded L-BFGS-B from the 9 corner/edge-midpoint/centre starts plus
    ``random_starts`` uniform interior starts per run, then polished with
    Powell's method.  The deterministic starts do not depend on the run, so
    they are searched once and shared.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    t0 = time.perf_counter()
    problems = []
    for ci, (cell, ax, ay) in enumerate(enumerate_cells(regime)):
        for branch in branches_for(regime, cell):
            fn = BranchFunction(regime, ax, ay, *branch)
            problems.append((ci, cell, branch, fn, _box(ax, ay)))

    shared = []
    for _, _, _, fn, box in problems:
        res = _ascend(fn, box, _deterministic_starts(box))
        shared.append(_polish(fn, box, res) if polish and res is not None else res)

    run_best: list[tuple[float, float, float]] = []
    per_cell_best: list[LocalResult | None] = list(shared)
    for run in range(runs):
        candidates = []
        for pi, (ci, cell, branch, fn, box) in enumerate(problems):
            cand = shared[pi]
            if random_starts > 0:
                rng = np.random.default_rng([seed, run, ci, pi])
                extra = _ascend(fn, box, _random_starts(box, random_starts, rng))
                if extra is not None and polish:
                    extra = _polish(fn, box, extra)
                if extra is not None and (cand is None or extra.value > cand.value):
                    cand = extra
            if cand is None:
                continue
            prev = per_cell_best[pi]
            if prev is None or cand.value > prev.value:
                per_cell_best[pi] = cand
            x, y = fn.point(cand.v)
            candidates.append((max(cand.value, _safe_phi(regime, x, y)), x, y))
        run_best.append(_pick(candidates))

    per_cell = []
    for (ci, cell, branch, fn, box), res in zip(problems, per_cell_best):
        if res is None:
            continue
        x, y = fn.point(res.v)
        per_cell.append(CellResult(cell, branch, res.value, (x, y), res.converged))

    values = [r[0] for r in run_best]
    top = max(range(runs), key=lambda i: values[i])
    return RatioReport(
        argmax_x=run_best[top][1],
        argmax_y=run_best[top][2],
        max_value=values[top],
        runs=runs,
        spread_delta=max(values) - min(values),
        per_cell=per_cell,
        wall_time=time.perf_counter() - t0,
        run_maxima=values,
    )


# ---------------------------------------------------------------------------
# critical points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CriticalPoint:
    x: float
    y: float
    value: float
    kind: str  # "interior", "edge" or "corner"
    branch: tuple[str, str]


def _axis_for_range(regime: CopulaSpec, rng: tuple[float, float]) -> Axis:
    lo, hi = rng
    for ax in axes_for(regime.marginal):
        if ax.lo <= lo + 1e-12 and hi <= ax.hi + 1e-12 * max(1.0, abs(ax.hi)):
            return Axis(ax.piece, lo, hi, reciprocal=(hi == INF))
    raise ValueError(f"range {rng} is not contained in one piece of F")


def cell_from_ranges(regime: CopulaSpec, x_range, y_range) -> tuple[SearchCell, Axis, Axis]:
    ax = _axis_for_range(regime, tuple(map(float, x_range)))
    ay = _axis_for_range(regime, tuple(map(float, y_range)))
    return make_cell(regime, ax, ay), ax, ay


def _active(regime: CopulaSpec, fn: BranchFunction, v, tol: float = 1e-10) -> bool:
    x, y = fn.point(v)
    g = fn.value(v)
    return abs(_safe_phi(regime, x, y) - g) <= tol * max(1.0, abs(g))


def _dedupe(points: list[CriticalPoint], tol: float = 1e-7) -> list[CriticalPoint]:
    out: list[CriticalPoint] = []
    for p in points:
        if not any(abs(p.x - q.x) <= tol and abs(p.y - q.y) <= tol for q in out):
            out.append(p)
    return out


def _interior_roots(fn: BranchFunction, box, grid: int) -> list[np.ndarray]:
    (x0, x1), (y0, y1) = box
    roots = []
    for sx in np.linspace(x0, x1, grid + 2)[1:-1]:
        for sy in np.linspace(y0, y1, grid + 2)[1:-1]:
            sol = optimize.root(lambda v: fn.value_grad(v)[1], [sx, sy], method="hybr",
                                options={"xtol": 1e-15})
            v = sol.x
            if not np.all(np.isfinite(v)):
                continue
            if not (x0 < v[0] < x1 and y0 < v[1] < y1):
                continue
            if np.linalg.norm(fn.value_grad(v)[1]) > 1e-9:
                continue
            roots.append(np.asarray(v, dtype=float))
    return roots


def _edge_roots(fn: BranchFunction, box, samples: int = 400) -> list[np.ndarray]:
    """Stationary points of the branch restricted to each edge of the box."""
    out = []
    for fixed_axis in (0, 1):
        free = 1 - fixed_axis
        lo, hi = box[free]
        for fixed in box[fixed_axis]:
            def d(t):
                v = [0.0, 0.0]
                v[fixed_axis], v[free] = fixed, t
                return fn.value_grad(v)[1][free]

            ts = np.linspace(lo, hi, samples + 1)
            ds = [d(t) for t in ts]
            for t_a, t_b, d_a, d_b in zip(ts, ts[1:], ds, ds[1:]):
                if d_a == 0.0 or d_a * d_b > 0.0 or not (math.isfinite(d_a) and math.isfinite(d_b)):
                    continue
                t = optimize.brentq(d, t_a, t_b, xtol=1e-15, rtol=4 * np.finfo(float).eps)
                if lo < t < hi:
                    v = [0.0, 0.0]
                    v[fixed_axis], v[free] = fixed, t
                    out.append(np.array(v))
    return out


def critical_points(
    regime: CopulaSpec,
    cell: SearchCell | tuple,
    include_boundary: bool = False,
    grid: int = 5,
) -> list[CriticalPoint]:
    """Stationary points of phi inside a cell.

    ``cell`` is a :class:`SearchCell` or a pair ``(x_range, y_range)`` lying
    within single pieces of F.  Only points where the solving branch is the
    active one are kept.  With ``include_boundary`` the stationary points of
    phi restricted to each cell edge, and the finite corners, are returned too.
    """
    if isinstance(cell, SearchCell):
        x_range, y_range = cell.x_range, cell.y_range
    else:
        x_range, y_range = cell
    cell, ax, ay = cell_from_ranges(regime, x_range, y_range)
    box = _box(ax, ay)
    found: list[CriticalPoint] = []
    for branch in branches_for(regime, cell):
        fn = BranchFunction(regime, ax, ay, *branch)
        for v in _interior_roots(fn, box, grid):
            if _active(regime, fn, v):
                x, y = fn.point(v)
                found.append(CriticalPoint(x, y, fn.value(v), "interior", branch))
        if include_boundary:
            for v in _edge_roots(fn, box):
                if _active(regime, fn, v):
                    x, y = fn.point(v)
                    found.append(CriticalPoint(x, y, fn.value(v), "edge", branch))
    if include_boundary:
        (x0, x1), (y0, y1) = box
        for vx in (x0, x1):
            for vy in (y0, y1):
                x, y = ax.to_coord(vx), ay.to_coord(vy)
                if math.isfinite(x) and math.isfinite(y):
                    found.append(CriticalPoint(x, y, _safe_phi(regime, x, y), "corner", ("", "")))
    return _dedupe(found)


# ---------------------------------------------------------------------------
# parameter search and curves
# ---------------------------------------------------------------------------


def tune_ab(
    n: int | None,
    a_grid: Sequence[float],
    b_grid: Sequence[float],
    runs: int = 1,
    seed: int = 0,
    refine: bool = True,
    maxfev: int = 80,
) -> tuple[float, float, RatioReport]:
    """Choose (a, b) minimizing the maximum of phi.

    Grid search over ``a_grid x b_grid`` followed by one bounded Nelder-Mead
    refinement from the best grid point.
    """
    a_grid = [float(a) for a in a_grid]
    b_grid = [float(b) for b in b_grid]
    if not all(1.0 < a <= 3.0 for a in a_grid) or not all(0.5 < b < 1.0 for b in b_grid):
        raise ValueError("grids must lie within a in (1, 3], b in (0.5, 1)")

    cache: dict[tuple[float, float], RatioReport] = {}

    def objective(p) -> float:
        a, b = float(p[0]), float(p[1])
        if not (1.0 < a <= 3.0 and 0.5 < b < 1.0):
            return INF
        key = (a, b)
        if key not in cache:
            cache[key] = maximize_phi(regime_for(n, a, b), runs=runs, seed=seed,
                                      random_starts=0, polish=False)
        return cache[key].max_value

    best = min(((a, b) for a in a_grid for b in b_grid), key=objective)
    if refine:
        lo = (min(a_grid), min(b_grid))
        hi = (max(a_grid), max(b_grid))
        step = (
            (hi[0] - lo[0]) / max(len(a_grid) - 1, 1) or 0.01,
            (hi[1] - lo[1]) / max(len(b_grid) - 1, 1) or 0.005,
        )
        simplex = np.array([best, (best[0] + step[0] / 2, best[1]), (best[0], best[1] + step[1] / 2)])
        res = optimize.minimize(
            objective, np.array(best), method="Nelder-Mead",
            bounds=[(lo[0], hi[0]), (lo[1], hi[1])],
            options={"initial_simplex": simplex, "xatol": 1e-5, "fatol": 1e-10, "maxfev": maxfev},
        )
        if objective(res.x) < objective(best):
            best = (float(res.x[0]), float(res.x[1]))
    a, b = best
    report = maximize_phi(regime_for(n, a, b), runs=max(runs, 1), seed=seed)
    return a, b, report


CURVE_COLUMNS = ("n", "a", "b", "x_star", "y_star", "value", "delta")


def ratio_curve(
    n_list: Sequence[int | None],
    runs: int = 3,
    seed: int = 0,
    params: dict | None = None,
    workers: int = 1,
) -> list[dict]:
    """Maximum of phi for each n at the reference (or supplied) (a, b).

    Rows are independent, so ``workers > 1`` spreads them over processes;
    the output does not depend on the worker count.
    """
    params = params or REFERENCE_AB
    jobs = []
    for n in n_list:
        key = None if n is None or n == INF else int(n)
        if key is not None and key < 2:
            raise ValueError("n must be >= 2")
        if key not in params:
            raise ValueError(f"no (a, b) known for n={key}; pass params")
        a, b = params[key]
        jobs.append((key, a, b, runs, seed))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_curve_row, jobs))
    return [_curve_row(j) for j in jobs]


def _curve_row(job) -> dict:
    key, a, b, runs, seed = job
    rep = maximize_phi(regime_for(key, a, b), runs=runs, seed=seed)
    return {
        "n": "inf" if key is None else key,
        "a": a,
        "b": b,
        "x_star": rep.argmax_x,
        "y_star": rep.argmax_y,
        "value": rep.max_value,
        "delta": rep.spread_delta,
    }


def export_ratio_curve(
    n_list: Sequence[int | None],
    out: str | Path,
    runs: int = 3,
    seed: int = 0,
    params: dict | None = None,
    workers: int = 1,
) -> list[dict]:
    rows = ratio_curve(n_list, runs=runs, seed=seed, params=params, workers=workers)
    with open(out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CURVE_COLUMNS)
        for r in rows:
            w.writerow([r["n"]] + [repr(float(r[c])) for c in CURVE_COLUMNS[1:]])
    return rows
