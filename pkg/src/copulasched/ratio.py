"""Worst-case ratio functions.

``eval_phi`` is the two-variable function whose global maximum bounds the
mechanism's approximation ratio,

    phi(x, y) = 1 + y - min{1, 1 - 1/x + y} F(x) - y F(y)
                  + min{1 + 1/x, 1 + y} H(x, y),

with H taken from the copula spec.  ``eval_rho`` evaluates the pairwise
bound from its probabilistic definition instead, and ``eval_theta_luyu`` is
the lower-bound expression for Lu and Yu's transcendental marginal.
"""
from __future__ import annotations

import math

from .copula import CopulaSpec, pair_value
from .marginals import DomainError, LuYuTranscendental

INF = math.inf
_LUYU = LuYuTranscendental()


def _times(y: float, t: float) -> float:
    # y * t with 0 * inf = 0, for probing the y = +inf tail
    return 0.0 if t == 0.0 else y * t


def phi_from_values(inv_x: float, y: float, fx: float, fy: float, h: float) -> float:
    """phi given 1/x, y and the values F(x), F(y), H(x, y)."""
    return (
        1.0
        + _times(y, 1.0 - fy)
        - min(1.0, 1.0 - inv_x + y) * fx
        + min(1.0 + inv_x, 1.0 + y) * h
    )


def _inverse(x: float) -> float:
    if not x > 0.0:
        raise DomainError(f"phi needs x > 0, got {x!r}")
    return 0.0 if x == INF else 1.0 / x


def eval_phi(regime: CopulaSpec, x: float, y: float) -> float:
    inv_x = _inverse(x)
    if not y >= 0.0:
        raise DomainError(f"phi needs y >= 0, got {y!r}")
    F = regime.marginal.cdf
    fx, fy = F(x), F(y)
    return phi_from_values(inv_x, y, fx, fy, pair_value(regime, fx, fy))


def phi_details(regime: CopulaSpec, x: float, y: float) -> dict:
    """phi plus the pieces that went into it; used by the CLI for debugging."""
    inv_x = _inverse(x)
    F = regime.marginal.cdf
    fx, fy = F(x), F(y)
    h = pair_value(regime, fx, fy)
    return {
        "phi": phi_from_values(inv_x, y, fx, fy, h),
        "regime": regime.describe(),
        "x": x,
        "y": y,
        "F_x": fx,
        "F_y": fy,
        "H": h,
        # which min{} argument fired; both agree on xy = 1
        "xy_ge_1_branch": y >= inv_x,
    }


def eval_rho(copula: CopulaSpec, r_j: float, r_k: float) -> float:
    """Pairwise bound for two tasks with time ratios r_j, r_k.

    Pr(X_j > r_j) + r_k Pr(X_k > r_k) + (1/r_j - r_k)^+ Pr(X_j <= r_j, X_k > r_k)
    + (1 + 1/r_j) Pr(X_j <= r_j, X_k <= r_k)
    """
    if not (r_j > 0.0 and r_k > 0.0):
        raise DomainError("time ratios must be positive")
    F = copula.marginal.cdf
    fj, fk = F(r_j), F(r_k)
    both_low = pair_value(copula, fj, fk)
    j_low_k_high = fj - both_low
    inv_j = 0.0 if r_j == INF else 1.0 / r_j
    return (
        (1.0 - fj)
        + _times(r_k, 1.0 - fk)
        + max(inv_j - r_k, 0.0) * j_low_k_high
        + (1.0 + inv_j) * both_low
    )


def eval_theta_luyu(alpha1: float, alpha2: float) -> float:
    if alpha1 < 0.0 or alpha2 < 0.0:
        raise DomainError("theta needs nonnegative arguments")
    beta1 = _LUYU.cdf(alpha1)
    beta2 = _LUYU.cdf(INF if alpha2 == 0.0 else 1.0 / alpha2)
    return (
        (1.0 + alpha2) * beta1 * beta2
        + beta1 * (1.0 - beta2)
        + (1.0 + alpha1) * (1.0 - beta1) * (1.0 - beta2)
        + max(alpha1, alpha2) * beta2 * (1.0 - beta1)
    )


LUYU_CLAIMED_BOUND = 1.5963
LUYU_COUNTEREXAMPLE = (0.87793459260323, 2.09409917605545)
