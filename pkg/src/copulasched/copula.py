"""Joint laws of the threshold vector (X_1, ..., X_n).

Two regimes are supported: the Clayton copula at its extreme negative
dependence parameter ``-1/(n-1)`` and the independent product.  Values of the
Clayton copula are computed in log space,

    u**(1/m) = 1 + expm1(log(u)/m),    C = exp(m * log1p(sum of expm1 terms)),

which keeps full precision for ``m = n - 1`` up to 10**6 and beyond.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .marginals import DomainError, Marginal

CLAYTON = "clayton"
INDEPENDENT = "independent"


@dataclass(frozen=True)
class CopulaSpec:
    regime: str
    n: int
    marginal: Marginal

    def __post_init__(self):
        if self.regime not in (CLAYTON, INDEPENDENT):
            raise DomainError(f"unknown regime {self.regime!r}")
        if self.regime == CLAYTON and self.n < 2:
            raise DomainError("the Clayton regime needs n >= 2")
        if self.n < 1:
            raise DomainError("n must be positive")

    @property
    def m(self) -> int:
        """Clayton exponent n - 1."""
        return self.n - 1

    def describe(self) -> str:
        if self.regime == CLAYTON:
            return f"clayton(n={self.n})"
        return "independent"


def clayton(n: int, marginal: Marginal) -> CopulaSpec:
    return CopulaSpec(CLAYTON, int(n), marginal)


def independent(marginal: Marginal, n: int = 2) -> CopulaSpec:
    return CopulaSpec(INDEPENDENT, int(n), marginal)


# ---------------------------------------------------------------------------
# copula values
# ---------------------------------------------------------------------------


def _root_excess(u: float, m: int) -> float:
    """u**(1/m) - 1, accurate when the result is tiny."""
    if u <= 0.0:
        return -1.0
    return math.expm1(math.log(u) / m)


def clayton_copula(us: Sequence[float], m: int) -> float:
    """[(sum u_i**(1/m) - len(us) + 1)^+]**m."""
    if any(u == 0.0 for u in us):
        return 0.0
    if m == 1:
        return max(math.fsum(us) - len(us) + 1.0, 0.0)
    s = math.fsum(_root_excess(u, m) for u in us)
    if s <= -1.0:
        return 0.0
    return math.exp(m * math.log1p(s))


def pair_value(spec: CopulaSpec, fx: float, fy: float) -> float:
    """H as a function of the two marginal values."""
    if spec.regime == INDEPENDENT:
        return fx * fy
    # exact margins: H(x, inf) = F(x)
    if fy == 1.0:
        return fx
    if fx == 1.0:
        return fy
    return clayton_copula((fx, fy), spec.m)


def pair_value_extended(spec: CopulaSpec, fx: float, fy: float) -> tuple[float, float, float]:
    """Smooth extension of H through its zero set, with partials in (fx, fy).

    For Clayton this is ``sign(w)|w|**m`` with ``w = fx**(1/m) + fy**(1/m) - 1``;
    its positive part is H.  Because H enters the ratio function with a
    positive coefficient, maximizing both this extension and ``H = 0`` covers
    the positive-part kink exactly.
    """
    if spec.regime == INDEPENDENT:
        return fx * fy, fy, fx
    m = spec.m
    if m == 1:
        return fx + fy - 1.0, 1.0, 1.0
    ex, ey = _root_excess(fx, m), _root_excess(fy, m)
    s = ex + ey  # w - 1
    w = 1.0 + s
    if w == 0.0:
        return 0.0, 0.0, 0.0
    logabs = math.log1p(s) if s > -1.0 else math.log(-w)
    h = math.copysign(math.exp(m * logabs), w)
    dx = 0.0 if fx == 0.0 else math.exp((m - 1) * logabs + (1.0 / m - 1.0) * math.log(fx))
    dy = 0.0 if fy == 0.0 else math.exp((m - 1) * logabs + (1.0 / m - 1.0) * math.log(fy))
    # exact margins
    if fy == 1.0:
        h = fx
    elif fx == 1.0:
        h = fy
    return h, dx, dy


def positive_region_excess(spec: CopulaSpec, fx: float, fy: float) -> float:
    """``F(x)**(1/m) + F(y)**(1/m) - 1``; H > 0 exactly where this is positive."""
    if spec.regime == INDEPENDENT:
        return 1.0 if fx > 0.0 and fy > 0.0 else -1.0
    return 1.0 + _root_excess(fx, spec.m) + _root_excess(fy, spec.m)


def eval_G(spec: CopulaSpec, x: Sequence[float]) -> float:
    x = list(x)
    if len(x) != spec.n:
        raise DomainError(f"expected {spec.n} coordinates, got {len(x)}")
    us = [float(spec.marginal.cdf(v)) for v in x]
    if spec.regime == INDEPENDENT:
        return math.prod(us)
    return clayton_copula(us, spec.m)


def eval_H(spec: CopulaSpec, x: float, y: float) -> float:
    fx = spec.marginal.cdf(x)
    fy = spec.marginal.cdf(y)
    return pair_value(spec, fx, fy)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


@dataclass
class SampleBatch:
    seed: int
    draws: np.ndarray  # rows = samples, columns = tasks

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow([f"X{j + 1}" for j in range(self.draws.shape[1])])
            for row in self.draws:
                w.writerow([repr(float(v)) for v in row])


def copula_uniforms(spec: CopulaSpec, count: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``count`` rows with uniform margins and the spec's copula."""
    n = spec.n
    if spec.regime == INDEPENDENT:
        return rng.random((count, n))
    # uniform point on the simplex; (1 - S_i)**(n-1) has the Clayton copula
    e = rng.standard_exponential((count, n))
    total = e.sum(axis=1, keepdims=True)
    rest = e[:, ::-1] if n == 2 else total - e
    one_minus_s = rest / total
    with np.errstate(divide="ignore"):
        u = np.exp(spec.m * np.log(one_minus_s))
    return np.clip(u, 0.0, 1.0)


def sample(spec: CopulaSpec, count: int, seed: int) -> SampleBatch:
    if count < 1:
        raise DomainError("count must be >= 1")
    rng = np.random.default_rng(seed)
    u = copula_uniforms(spec, count, rng)
    x = np.asarray(spec.marginal.quantile(u), dtype=float)
    return SampleBatch(seed=seed, draws=x)
