"""Numerical realization of the shrinking-step limits.

The symbolic limits behind generalized derivatives are evaluated
numerically: a quotient g(delta) is sampled on a geometric sequence of
steps and a Neville tableau extrapolates it polynomially (in delta, not
delta^2, since the quotients carry full Taylor error series) to
delta = 0.  The tableau entry with the smallest neighbour deviation is
accepted, which also recovers gracefully when the largest steps are
polluted, e.g. by a fold of an arcsine linearization inside the
stencil.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import GencalcError, LimitEvaluationError


@dataclass(frozen=True)
class LimitPolicy:
    """Controls the step sequence delta0 * ratio**k and the stop rule."""

    delta0: float
    ratio: float = 0.5
    max_stages: int = 8
    rtol: float = 1e-9
    atol: float = 1e-12

    def __post_init__(self):
        if not self.delta0 > 0:
            raise ValueError("delta0 must be positive")
        if not 0 < self.ratio < 1:
            raise ValueError("ratio must lie in (0, 1)")
        if self.max_stages < 2:
            raise ValueError("max_stages must be at least 2")
        if self.rtol < 0 or self.atol < 0 or (self.rtol == 0 and self.atol == 0):
            raise ValueError("rtol and atol must be nonnegative and not both zero")


@dataclass(frozen=True)
class LimitResult:
    value: complex
    est_error: float
    converged: bool
    stages_used: int


def default_policy(x: float = 0.0) -> LimitPolicy:
    """Default policy near the point x: delta0 = 1e-2 * max(1, |x|)."""
    return LimitPolicy(delta0=1e-2 * max(1.0, abs(x)))


def _finite(z: complex) -> bool:
    return math.isfinite(z.real) and math.isfinite(z.imag)


def estimate_limit(g: Callable[[float], complex], policy: LimitPolicy) -> LimitResult:
    """Extrapolate g(delta) to delta = 0.

    g is evaluated at delta_k = delta0 * ratio**k and a Neville tableau
    is built over the nodes.  Each new entry's error is the larger of
    its deviations from the two entries it was built from; the entry
    with the smallest error is returned.  Convergence means that error
    met max(atol, rtol * |value|).  A non-finite quotient or tableau
    corrections growing two stages in a row stop the refinement early
    (cancellation guard); the best earlier extrapolant is then returned
    with converged=False unless it had already met tolerance.

    Failures inside g propagate as LimitEvaluationError carrying the
    failing delta.
    """
    deltas: list[float] = []
    prev_row: list[complex] = []
    best_value: complex = complex("nan")
    best_err = math.inf
    diag_corrections: list[float] = []
    stages_used = 0
    aborted = False

    for k in range(policy.max_stages):
        delta = policy.delta0 * policy.ratio ** k
        try:
            y = complex(g(delta))
        except GencalcError as exc:
            raise LimitEvaluationError(delta) from exc
        stages_used = k + 1
        if not _finite(y):
            aborted = True
            break
        deltas.append(delta)
        row = [y]
        for j in range(1, k + 1):
            denom = deltas[k - j] / delta - 1.0
            entry = row[j - 1] + (row[j - 1] - prev_row[j - 1]) / denom
            err = max(abs(entry - row[j - 1]), abs(entry - prev_row[j - 1]))
            row.append(entry)
            if not _finite(entry):
                aborted = True
                break
            if err <= best_err:
                best_value, best_err = entry, err
        if aborted:
            break
        if k == 0:
            best_value = y
        if k >= 1:
            diag_corrections.append(abs(row[-1] - row[-2]))
            if (
                len(diag_corrections) >= 3
                and diag_corrections[-1] > diag_corrections[-2] > diag_corrections[-3]
            ):
                break
        prev_row = row
        if best_err <= max(policy.atol, policy.rtol * abs(best_value)):
            break

    converged = (
        _finite(best_value)
        and best_err <= max(policy.atol, policy.rtol * abs(best_value))
    )
    return LimitResult(best_value, best_err, converged, stages_used)


def unwrap_branch(values: Sequence[complex], period: float) -> list[complex]:
    """Shift entries by integer multiples of *period* for continuity.

    The wrapped coordinate is the real part (phases and other
    linearized angles are real numbers; complex entries keep their
    imaginary part).  After unwrapping, consecutive real parts differ
    by less than period/2 whenever the underlying true increments do.
    The first entry is unchanged.
    """
    if period <= 0:
        raise ValueError("period must be positive")
    out: list[complex] = []
    ref = 0.0
    for v in values:
        v = complex(v)
        if not out:
            out.append(v)
        else:
            k = round((ref - v.real) / period)
            out.append(v + k * period)
        ref = out[-1].real
    return out


def stencil(x: float, delta: float, count: int) -> np.ndarray:
    """Equally spaced nodes [x, x+delta, ..., x+(count-1)*delta]."""
    if count < 2:
        raise ValueError("count must be at least 2")
    if delta == 0:
        raise ValueError("delta must be nonzero")
    return x + delta * np.arange(count, dtype=float)


def unwrap_phases(values: Sequence[complex], anchor: int = 0) -> list[float]:
    """Principal arguments unwrapped outward from *anchor* (kept principal)."""
    args = [cmath.phase(complex(v)) for v in values]
    if not args:
        return []
    if not 0 <= anchor < len(args):
        raise ValueError("anchor out of range")
    right = unwrap_branch(args[anchor:], 2.0 * math.pi)
    left = unwrap_branch(args[anchor::-1], 2.0 * math.pi)
    merged = [z.real for z in left[::-1]] + [z.real for z in right[1:]]
    return merged
