"""Marginal distribution functions F used to draw the mechanism's thresholds.

Three families are supported:

* :class:`PaperPiecewise` -- the continuous piecewise algebraic F with
  parameters ``a`` and ``b``, affine in ``x`` on ``[1, a)`` and affine in
  ``1/x`` on ``[1/a, 1)``, so that ``F(x) + F(1/x) = 1``.
* :class:`LuYuTranscendental` -- ``F(x) = 1 - 2**(-x**2.3)``.
* :class:`Tabulated` -- linear interpolation through user supplied points.

Every marginal exposes its smooth :class:`Piece` decomposition.  The optimizer
works cell by cell on these pieces so that one-sided behaviour at the
demarcation points is never ambiguous.
"""
from __future__ import annotations

import bisect
import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

INF = math.inf


class DomainError(ValueError):
    """Argument outside the domain of an operation."""


class DemarcationPointError(DomainError):
    """Derivative requested exactly at a point where F has a kink.

    The one-sided derivatives are carried on the exception.
    """

    def __init__(self, x: float, left: float, right: float):
        super().__init__(
            f"F is not differentiable at x={x!r}: left derivative {left!r}, "
            f"right derivative {right!r}"
        )
        self.x = x
        self.left = left
        self.right = right


# ---------------------------------------------------------------------------
# pieces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Piece:
    """A maximal interval ``[lo, hi)`` on which F is given by one smooth formula.

    ``f`` and ``df`` evaluate that formula (and its derivative) and may be
    called slightly outside the interval, which is how closed search cells
    get their one-sided values at the edges.
    """

    lo: float
    hi: float

    def f(self, x: float) -> float:
        raise NotImplementedError

    def df(self, x: float) -> float:
        raise NotImplementedError

    @property
    def constant(self) -> bool:
        return False


@dataclass(frozen=True)
class AffinePiece(Piece):
    """``F(x) = c0 + c1*(x - x0) + c2*(1/x - r0)`` on the piece."""

    c0: float = 0.0
    c1: float = 0.0
    c2: float = 0.0
    x0: float = 0.0
    r0: float = 0.0

    def f(self, x: float) -> float:
        v = self.c0
        if self.c1:
            v += self.c1 * (x - self.x0)
        if self.c2:
            v += self.c2 * (1.0 / x - self.r0)
        return v

    def df(self, x: float) -> float:
        d = self.c1
        if self.c2:
            d -= self.c2 / (x * x)
        return d

    @property
    def constant(self) -> bool:
        return self.c1 == 0.0 and self.c2 == 0.0


@dataclass(frozen=True)
class LuYuPiece(Piece):
    exponent: float = 2.3

    def f(self, x: float) -> float:
        if x == INF:
            return 1.0
        return -math.expm1(-math.log(2.0) * x**self.exponent)

    def df(self, x: float) -> float:
        if x == INF or x == 0.0:
            return 0.0
        p = self.exponent
        return math.log(2.0) * p * x ** (p - 1.0) * 2.0 ** (-(x**p))


# ---------------------------------------------------------------------------
# marginal families
# ---------------------------------------------------------------------------


class Marginal:
    """Common interface.  Subclasses provide ``pieces`` and ``quantile``."""

    kind: str = ""

    def pieces(self) -> tuple[Piece, ...]:
        raise NotImplementedError

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return tuple(p.lo for p in self.pieces()[1:])

    def _piece_index(self, x: float) -> int:
        return bisect.bisect_right(self.breakpoints, x)

    def cdf(self, x):
        """Evaluate F at a scalar or array of nonnegative abscissae."""
        if np.ndim(x) == 0:
            return self._cdf_scalar(float(x))
        arr = np.asarray(x, dtype=float)
        out = np.fromiter((self._cdf_scalar(v) for v in arr.ravel()), float, arr.size)
        return out.reshape(arr.shape)

    def _cdf_scalar(self, x: float) -> float:
        if not x >= 0.0:
            raise DomainError(f"F is defined on [0, inf], got x={x!r}")
        if x == INF:
            return 1.0
        return self.pieces()[self._piece_index(x)].f(x)

    def derivative(self, x: float, side: int = 0) -> float:
        """Derivative of F at ``x > 0``.

        ``side`` selects a one-sided derivative (-1 left, +1 right).  With
        ``side=0`` a kink raises :class:`DemarcationPointError`.
        """
        x = float(x)
        if not x > 0.0:
            raise DomainError(f"derivative needs x > 0, got {x!r}")
        if x == INF:
            return 0.0
        pieces = self.pieces()
        k = self._piece_index(x)
        if k > 0 and x == pieces[k].lo:
            left, right = pieces[k - 1].df(x), pieces[k].df(x)
            if side < 0:
                return left
            if side > 0 or left == right:
                return right
            raise DemarcationPointError(x, left, right)
        return pieces[k].df(x)

    def quantile(self, u):
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class PaperPiecewise(Marginal):
    """Six-piece continuous algebraic F with support ``[1/a, a]``."""

    a: float
    b: float
    kind = "piecewise"

    def __post_init__(self):
        if not (self.a > 1.0 and 0.5 < self.b < 1.0):
            raise DomainError(f"need a > 1 and 0.5 < b < 1, got a={self.a}, b={self.b}")
        if not (1.7 <= self.a <= 3.0 and 0.7 <= self.b <= 1.0):
            warnings.warn(
                f"(a, b) = ({self.a}, {self.b}) lies outside [1.7, 3] x [0.7, 1]",
                stacklevel=3,
            )
        object.__setattr__(self, "_pieces", self._build_pieces())

    @property
    def demarcation_points(self) -> tuple[float, float, float, float, float]:
        a = self.a
        return (1.0 / a, 2.0 / (a + 1.0), 1.0, (a + 1.0) / 2.0, a)

    def _build_pieces(self) -> tuple[Piece, ...]:
        a, b = self.a, self.b
        p1, p2, p3, p4, p5 = self.demarcation_points
        s_outer = 2.0 * (1.0 - b) / (a - 1.0)
        s_inner = (2.0 * b - 1.0) / (a - 1.0)
        return (
            AffinePiece(0.0, p1, 0.0),
            AffinePiece(p1, p2, 0.0, c2=-s_outer, r0=a),
            AffinePiece(p2, p3, 0.5, c2=-s_inner, r0=1.0),
            AffinePiece(p3, p4, 0.5, c1=s_inner, x0=1.0),
            AffinePiece(p4, p5, 1.0, c1=s_outer, x0=a),
            AffinePiece(p5, INF, 1.0),
        )

    def pieces(self) -> tuple[Piece, ...]:
        return self._pieces

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return self.demarcation_points

    def _cdf_scalar(self, x: float) -> float:
        # written per piece (not via c0 + c1 x) so demarcation values are exact
        if not x >= 0.0:
            raise DomainError(f"F is defined on [0, inf], got x={x!r}")
        a, b = self.a, self.b
        if x >= a:
            return 1.0
        if x >= (a + 1.0) / 2.0:
            return 1.0 - 2.0 * (1.0 - b) * (a - x) / (a - 1.0)
        if x >= 1.0:
            return 0.5 + (2.0 * b - 1.0) * (x - 1.0) / (a - 1.0)
        if x >= 2.0 / (a + 1.0):
            return 0.5 - (2.0 * b - 1.0) * (1.0 / x - 1.0) / (a - 1.0)
        if x >= 1.0 / a:
            # 1/(1/a) can exceed a by an ulp
            return max(2.0 * (1.0 - b) * (a - 1.0 / x) / (a - 1.0), 0.0)
        return 0.0

    def cdf(self, x):
        if np.ndim(x) == 0:
            return self._cdf_scalar(float(x))
        x = np.asarray(x, dtype=float)
        if np.any(~(x >= 0.0)):
            raise DomainError("F is defined on [0, inf]")
        a, b = self.a, self.b
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = 1.0 / x
            choices = [
                np.ones_like(x),
                1.0 - 2.0 * (1.0 - b) * (a - x) / (a - 1.0),
                0.5 + (2.0 * b - 1.0) * (x - 1.0) / (a - 1.0),
                0.5 - (2.0 * b - 1.0) * (inv - 1.0) / (a - 1.0),
                np.maximum(2.0 * (1.0 - b) * (a - inv) / (a - 1.0), 0.0),
            ]
        conds = [x >= a, x >= (a + 1.0) / 2.0, x >= 1.0, x >= 2.0 / (a + 1.0), x >= 1.0 / a]
        return np.select(conds, choices, 0.0)

    def quantile(self, u):
        if np.ndim(u) == 0:
            return self._quantile_scalar(float(u))
        u = np.asarray(u, dtype=float)
        if np.any(~((u >= 0.0) & (u <= 1.0))):
            raise DomainError("quantile needs u in [0, 1]")
        a, b = self.a, self.b
        choices = [
            a - (1.0 - u) * (a - 1.0) / (2.0 * (1.0 - b)),
            1.0 + (u - 0.5) * (a - 1.0) / (2.0 * b - 1.0),
            1.0 / (1.0 + (0.5 - u) * (a - 1.0) / (2.0 * b - 1.0)),
            1.0 / (a - u * (a - 1.0) / (2.0 * (1.0 - b))),
        ]
        return np.select([u >= b, u >= 0.5, u >= 1.0 - b], choices[:3], choices[3])

    def _quantile_scalar(self, u: float) -> float:
        if not 0.0 <= u <= 1.0:
            raise DomainError(f"quantile needs u in [0, 1], got {u!r}")
        a, b = self.a, self.b
        if u >= b:
            return a - (1.0 - u) * (a - 1.0) / (2.0 * (1.0 - b))
        if u >= 0.5:
            return 1.0 + (u - 0.5) * (a - 1.0) / (2.0 * b - 1.0)
        if u >= 1.0 - b:
            return 1.0 / (1.0 + (0.5 - u) * (a - 1.0) / (2.0 * b - 1.0))
        return 1.0 / (a - u * (a - 1.0) / (2.0 * (1.0 - b)))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "a": self.a, "b": self.b}


@dataclass(frozen=True)
class LuYuTranscendental(Marginal):
    """``F(x) = 1 - 2**(-x**2.3)``."""

    kind = "luyu"

    def pieces(self) -> tuple[Piece, ...]:
        return (LuYuPiece(0.0, INF),)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return ()

    def quantile(self, u):
        u = np.asarray(u, dtype=float)
        if np.any((u < 0.0) | (u > 1.0)):
            raise DomainError("quantile needs u in [0, 1]")
        with np.errstate(divide="ignore"):
            x = (-np.log1p(-u) / math.log(2.0)) ** (1.0 / 2.3)
        return float(x) if x.ndim == 0 else x

    def to_dict(self) -> dict:
        return {"kind": self.kind}


@dataclass(frozen=True)
class Tabulated(Marginal):
    """Piecewise-linear F through ``points``; ``(0, 0)`` is implied.

    F is flat after the last abscissa; ``F(inf)`` is 1 by convention.
    """

    points: tuple[tuple[float, float], ...]
    kind = "tabulated"

    def __post_init__(self):
        pts = tuple((float(x), float(u)) for x, u in self.points)
        if not pts:
            raise DomainError("Tabulated needs at least one point")
        if pts[0][0] > 0.0:
            pts = ((0.0, 0.0),) + pts
        xs = [p[0] for p in pts]
        us = [p[1] for p in pts]
        if xs[0] < 0.0 or any(x1 <= x0 for x0, x1 in zip(xs, xs[1:])):
            raise DomainError("Tabulated abscissae must be >= 0 and strictly increasing")
        if us[0] != 0.0 or any(u1 < u0 for u0, u1 in zip(us, us[1:])) or us[-1] > 1.0:
            raise DomainError("Tabulated values must start at 0, be non-decreasing and <= 1")
        object.__setattr__(self, "points", pts)
        pieces = []
        for (x0, u0), (x1, u1) in zip(pts, pts[1:]):
            slope = (u1 - u0) / (x1 - x0)
            pieces.append(AffinePiece(x0, x1, u0, c1=slope, x0=x0))
        pieces.append(AffinePiece(xs[-1], INF, us[-1]))
        object.__setattr__(self, "_pieces", tuple(pieces))

    def pieces(self) -> tuple[Piece, ...]:
        return self._pieces

    def _cdf_scalar(self, x: float) -> float:
        if not x >= 0.0:
            raise DomainError(f"F is defined on [0, inf], got x={x!r}")
        if x == INF:
            return 1.0
        xs = [p[0] for p in self.points]
        us = [p[1] for p in self.points]
        return float(np.interp(x, xs, us))

    def quantile(self, u):
        if np.ndim(u) == 0:
            return self._quantile_scalar(float(u))
        arr = np.asarray(u, dtype=float)
        out = np.fromiter((self._quantile_scalar(v) for v in arr.ravel()), float, arr.size)
        return out.reshape(arr.shape)

    def _quantile_scalar(self, u: float) -> float:
        if not 0.0 <= u <= 1.0:
            raise DomainError(f"quantile needs u in [0, 1], got {u!r}")
        xs = [p[0] for p in self.points]
        us = [p[1] for p in self.points]
        if u == 0.0:
            # last zero: the left edge of the support
            return xs[bisect.bisect_right(us, 0.0) - 1]
        k = bisect.bisect_left(us, u)
        if k == len(us):
            return INF
        u0, u1 = us[k - 1], us[k]
        return xs[k - 1] + (u - u0) / (u1 - u0) * (xs[k] - xs[k - 1])

    def to_dict(self) -> dict:
        return {"kind": self.kind, "points": [list(p) for p in self.points]}


# ---------------------------------------------------------------------------
# functional API
# ---------------------------------------------------------------------------


def eval_F(spec: Marginal, x):
    return spec.cdf(x)


def quantile(spec: Marginal, u):
    return spec.quantile(u)


def eval_F_derivative(spec: Marginal, x: float, side: int = 0) -> float:
    return spec.derivative(x, side)


def marginal_from_dict(d: dict) -> Marginal:
    """Inverse of ``to_dict``; the JSON form used by the CLI."""
    kind = d.get("kind")
    if kind in ("piecewise", "PaperPiecewise"):
        return PaperPiecewise(float(d["a"]), float(d["b"]))
    if kind in ("luyu", "LuYuTranscendental"):
        return LuYuTranscendental()
    if kind in ("tabulated", "Tabulated"):
        return Tabulated(tuple(tuple(p) for p in d["points"]))
    raise DomainError(f"unknown marginal kind {kind!r}")


def tabulated_from_values(xs: Sequence[float], us: Sequence[float]) -> Tabulated:
    return Tabulated(tuple(zip(xs, us)))
