"""The randomized allocation rule and tools to evaluate it.

Each task j draws a threshold X_j; it goes to machine 1 when
``t[0, j] / t[1, j] < X_j`` and to machine 2 otherwise.  The thresholds are
coupled by a :class:`~copulasched.copula.CopulaSpec`.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .copula import CopulaSpec, copula_uniforms
from .marginals import DomainError

DEFAULT_ORACLE_CAP = 24
_CHUNK = 1 << 16


class OracleScaleError(ValueError):
    """The brute-force optimum was requested for too many tasks."""


class InstanceFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Instance:
    t: np.ndarray  # shape (2, n); t[i, j] = time of task j on machine i

    def __post_init__(self):
        t = np.array(self.t, dtype=float)
        if t.ndim != 2 or t.shape[0] != 2 or t.shape[1] < 1:
            raise DomainError(f"processing times must be a 2 x n matrix, got shape {t.shape}")
        if not np.all(np.isfinite(t)) or np.any(t < 0):
            raise DomainError("processing times must be finite and nonnegative")
        t.setflags(write=False)
        object.__setattr__(self, "t", t)

    @property
    def n(self) -> int:
        return self.t.shape[1]

    def ratios(self) -> np.ndarray:
        """t1/t2 per task; 0 when t1 = 0 and +inf when only t2 is zero."""
        t1, t2 = self.t
        with np.errstate(divide="ignore", invalid="ignore"):
            r = t1 / t2
        r[t1 == 0.0] = 0.0
        return r

    def to_dict(self) -> dict:
        return {"t": self.t.tolist()}


@dataclass(frozen=True)
class Allocation:
    x: np.ndarray  # shape (2, n), 0/1 entries

    def __post_init__(self):
        x = np.array(self.x, dtype=np.int8)
        if x.ndim != 2 or x.shape[0] != 2:
            raise DomainError("an allocation is a 2 x n matrix")
        if not np.all(x.sum(axis=0) == 1) or np.any((x != 0) & (x != 1)):
            raise DomainError("every task must go to exactly one machine")
        x.setflags(write=False)
        object.__setattr__(self, "x", x)

    @classmethod
    def from_machine1(cls, on_first) -> "Allocation":
        on_first = np.asarray(on_first, dtype=bool)
        return cls(np.vstack([on_first, ~on_first]).astype(np.int8))


def _on_first(ratios: np.ndarray, draws: np.ndarray) -> np.ndarray:
    return ratios < draws


def allocate(inst: Instance, draws) -> Allocation:
    draws = np.asarray(draws, dtype=float)
    if draws.shape != (inst.n,):
        raise DomainError(f"need {inst.n} thresholds, got shape {draws.shape}")
    return Allocation.from_machine1(_on_first(inst.ratios(), draws))


def makespan(inst: Instance, alloc: Allocation) -> float:
    if alloc.x.shape != inst.t.shape:
        raise DomainError("allocation and instance shapes differ")
    return float(np.max(np.sum(alloc.x * inst.t, axis=1)))


def _loads(t: np.ndarray, on_first: np.ndarray) -> np.ndarray:
    """Makespan of each row of a boolean (k, n) machine-1 indicator."""
    m1 = on_first @ t[0]
    m2 = (~on_first) @ t[1]
    return np.maximum(m1, m2)


def opt_makespan(inst: Instance, max_tasks: int = DEFAULT_ORACLE_CAP) -> float:
    """Exact optimum by enumerating all 2**n allocations."""
    n = inst.n
    if n > max_tasks:
        raise OracleScaleError(
            f"brute-force optimum limited to {max_tasks} tasks, instance has {n}"
        )
    shifts = np.arange(n, dtype=np.int64)
    best = math.inf
    total = 1 << n
    for start in range(0, total, _CHUNK):
        codes = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        bits = ((codes[:, None] >> shifts) & 1).astype(bool)
        best = min(best, float(_loads(inst.t, bits).min()))
    return best


def estimate_ratio(
    inst: Instance,
    copula: CopulaSpec,
    samples: int,
    seed: int,
    max_tasks: int = DEFAULT_ORACLE_CAP,
) -> tuple[float, float]:
    """Monte-Carlo estimate of E[makespan] / OPT and its standard error."""
    if samples < 1:
        raise DomainError("samples must be >= 1")
    if copula.n != inst.n:
        raise DomainError(f"copula is for {copula.n} tasks, instance has {inst.n}")
    opt = opt_makespan(inst, max_tasks)
    rng = np.random.default_rng(seed)
    ratios = inst.ratios()
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < samples:
        k = min(_CHUNK, samples - done)
        u = copula_uniforms(copula, k, rng)
        x = np.asarray(copula.marginal.quantile(u), dtype=float)
        spans = _loads(inst.t, _on_first(ratios, x))
        total += float(spans.sum())
        total_sq += float((spans * spans).sum())
        done += k
    if opt == 0.0:
        # every allocation is free only if the mechanism never paid anything
        return (1.0, 0.0) if total == 0.0 else (math.inf, math.nan)
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0)
    se = math.sqrt(var / samples) if samples > 1 else math.nan
    return mean / opt, se / opt


# ---------------------------------------------------------------------------
# monotonicity
# ---------------------------------------------------------------------------


@dataclass
class MonotonicityReport:
    perturbations: int
    max_violation: float
    path_max_violation: float
    worst_machine: int

    def to_dict(self) -> dict:
        return {
            "perturbations": self.perturbations,
            "max_violation": self.max_violation,
            "path_max_violation": self.path_max_violation,
            "worst_machine": self.worst_machine,
        }


def machine_probabilities(inst: Instance, copula: CopulaSpec) -> np.ndarray:
    """Pr(x[i, j] = 1) for each machine and task.

    With a continuous F, Pr(r_j < X_j) = 1 - F(r_j) regardless of the copula.
    """
    f = np.asarray(copula.marginal.cdf(inst.ratios()), dtype=float)
    return np.vstack([1.0 - f, f])


def _perturb(t: np.ndarray, rng: np.random.Generator) -> tuple[int, np.ndarray]:
    i = int(rng.integers(2))
    new = t.copy()
    n = t.shape[1]
    touched = rng.random(n) < 0.5
    touched[rng.integers(n)] = True
    scale = np.exp(rng.normal(0.0, 1.0, n))
    row = np.where(touched, t[i] * scale, t[i])
    # occasionally move a time to or from zero
    zero = touched & (rng.random(n) < 0.05)
    row = np.where(zero, 0.0, row)
    revive = touched & (row == 0.0) & (rng.random(n) < 0.5)
    row = np.where(revive, rng.exponential(1.0, n), row)
    new[i] = row
    return i, new


def check_monotonicity(
    inst: Instance,
    copula: CopulaSpec,
    perturbations: int,
    seed: int,
    path_draws: int = 16,
) -> MonotonicityReport:
    """Largest value of sum_j (p_ij - p~_ij)(t_ij - t~_ij) over random
    single-machine perturbations; monotone mechanisms keep it <= 0.

    ``path_max_violation`` repeats the check on sampled allocations for a
    handful of fixed threshold draws per perturbation.
    """
    if perturbations < 1:
        raise DomainError("perturbations must be >= 1")
    if copula.n != inst.n:
        raise DomainError(f"copula is for {copula.n} tasks, instance has {inst.n}")
    rng = np.random.default_rng(seed)
    p = machine_probabilities(inst, copula)
    worst = -math.inf
    worst_machine = 0
    path_worst = -math.inf
    for _ in range(perturbations):
        i, t_new = _perturb(inst.t, rng)
        other = Instance(t_new)
        q = machine_probabilities(other, copula)
        dt = inst.t[i] - t_new[i]
        v = float(np.dot(p[i] - q[i], dt))
        if v > worst:
            worst, worst_machine = v, i
        if path_draws:
            u = copula_uniforms(copula, path_draws, rng)
            x = np.asarray(copula.marginal.quantile(u), dtype=float)
            a = _on_first(inst.ratios(), x)
            b = _on_first(other.ratios(), x)
            if i == 1:
                a, b = ~a, ~b
            path_worst = max(path_worst, float(((a.astype(float) - b) @ dt).max()))
    return MonotonicityReport(perturbations, worst, path_worst, worst_machine)


# ---------------------------------------------------------------------------
# instance files
# ---------------------------------------------------------------------------


def read_instance(path: str | Path) -> Instance:
    """Load an instance from JSON ``{"t": [[...], [...]]}`` or a two-row CSV."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InstanceFormatError(f"cannot read {path}: {exc}") from exc
    try:
        if path.suffix.lower() == ".json":
            payload = json.loads(text)
            if not isinstance(payload, dict) or "t" not in payload:
                raise InstanceFormatError('JSON instance needs a "t" key')
            rows = payload["t"]
        else:
            rows = [r for r in csv.reader(text.splitlines()) if any(c.strip() for c in r)]
            rows = [[float(c) for c in r] for r in rows]
        if len(rows) != 2 or len(rows[0]) != len(rows[1]):
            raise InstanceFormatError("instance must have two rows of equal length")
        return Instance(np.array(rows, dtype=float))
    except (ValueError, TypeError) as exc:
        if isinstance(exc, InstanceFormatError):
            raise
        raise InstanceFormatError(f"malformed instance file {path}: {exc}") from exc


def write_instance(inst: Instance, path: str | Path) -> None:
    path = Path(path)
    if path.suffix.lower() == ".json":
        path.write_text(json.dumps(inst.to_dict()))
        return
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        for row in inst.t:
            w.writerow([repr(float(v)) for v in row])
