"""Generalized derivatives, traces, monomial tables and reconstruction.

The generalized derivative of f under a family parameter is the
numerical limit of the stencil-solve quotient; a trace evaluates it
over a grid, recording failures as first-class holes instead of
aborting.  Reconstruction evaluates the family with all instantaneous
parameter traces, recovering f on the grid without antiderivatives,
and exactly rather than up to a constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, NamedTuple, Sequence

import numpy as np

from .derivators import Family, family_eval, param_quotient
from .errors import (
    DomainError,
    GencalcError,
    NonConvergenceError,
    OffGridError,
)
from .expr import Binary, Call, Constant, Literal, Unary, Variable, evaluate
from .numerics import LimitPolicy, LimitResult, default_policy, estimate_limit
from .sigio import SampledSignal

_EXPR_NODES = (Literal, Constant, Variable, Unary, Binary, Call)


def as_evaluator(derivand) -> Callable[[float], complex]:
    """Adapt an expression tree, sampled signal or callable to f(x)."""
    if isinstance(derivand, _EXPR_NODES):
        return lambda t: evaluate(derivand, t)
    if isinstance(derivand, SampledSignal):
        return derivand.value_at
    if callable(derivand):
        return derivand
    raise TypeError(f"cannot evaluate derivand of type {type(derivand).__name__}")


@dataclass(frozen=True)
class GeneralizedDerivativeRequest:
    """What to differentiate: derivand, family, parameter and limit policy."""

    derivand: object
    family: Family
    param_index: int
    policy: LimitPolicy | None = None

    def __post_init__(self):
        if not 0 <= self.param_index < self.family.arity:
            raise ValueError("param_index must be smaller than the family arity")


@dataclass(frozen=True)
class InstParamTrace:
    """An instantaneous parameter function sampled over a grid."""

    grid: np.ndarray
    values: np.ndarray
    holes: frozenset[int]
    diagnostics: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        diags = np.asarray(self.diagnostics, dtype=float)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "diagnostics", diags)
        object.__setattr__(self, "holes", frozenset(self.holes))
        if not (len(grid) == len(values) == len(diags)):
            raise ValueError("grid, values and diagnostics must have equal length")
        if len(grid) > 1 and not np.all(np.diff(grid) > 0):
            raise ValueError("grid must be strictly increasing")

    def value_at(self, x: float) -> complex:
        i = self.index_of(x)
        if i in self.holes:
            raise DomainError(f"trace has a hole at x={x!r}")
        return complex(self.values[i])

    def index_of(self, x: float) -> int:
        i = int(np.argmin(np.abs(self.grid - x)))
        if abs(self.grid[i] - x) > 1e-9 * max(1.0, abs(x)):
            raise OffGridError(f"x={x!r} is not on the trace grid")
        return i


def _sampled_policy(signal: SampledSignal, policy: LimitPolicy) -> LimitPolicy:
    # Steps are restricted to dyadic multiples of the grid spacing; no
    # sub-grid interpolation is performed.
    dx = signal.dx
    m = int(math.floor(math.log2(max(policy.delta0, 4.0 * dx) / dx) + 1e-9))
    m = max(2, m)
    return LimitPolicy(
        delta0=(2.0 ** m) * dx,
        ratio=0.5,
        max_stages=min(policy.max_stages, m + 1),
        rtol=policy.rtol,
        atol=policy.atol,
    )


def _derivative_result(req: GeneralizedDerivativeRequest, x: float) -> LimitResult:
    f = as_evaluator(req.derivand)
    policy = req.policy if req.policy is not None else default_policy(x)
    if isinstance(req.derivand, SampledSignal):
        policy = _sampled_policy(req.derivand, policy)
    g = lambda d: param_quotient(req.family, req.param_index, f, x, d)
    return estimate_limit(g, policy)


def _check_result(res: LimitResult, policy_atol: float) -> complex:
    v = complex(res.value)
    finite = math.isfinite(v.real) and math.isfinite(v.imag) and math.isfinite(res.est_error)
    if not finite:
        raise NonConvergenceError("limit diverged", res)
    if not res.converged and res.est_error > max(1e3 * policy_atol, 0.25 * abs(v)):
        # No significant digits in the extrapolant: treat as failure
        # rather than report a garbage value.
        raise NonConvergenceError(
            f"limit did not stabilize (estimated error {res.est_error:.3e})", res
        )
    return v


def generalized_derivative(req: GeneralizedDerivativeRequest, x: float) -> complex:
    """The instantaneous value of the requested family parameter at x."""
    policy = req.policy if req.policy is not None else default_policy(x)
    return _check_result(_derivative_result(req, x), policy.atol)


def derivative_trace(req: GeneralizedDerivativeRequest, grid: Sequence[float]) -> InstParamTrace:
    """Apply the generalized derivative per grid point.

    Failures (singular stencils, domain errors, non-convergence) become
    holes; the whole trace never aborts.  diagnostics carries the
    per-point error estimate of the limit.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("grid must be nonempty")
    if grid.size > 1 and not np.all(np.diff(grid) > 0):
        raise ValueError("grid must be strictly increasing")
    policy = req.policy if req.policy is not None else default_policy(float(np.max(np.abs(grid))))
    values = np.full(grid.shape, np.nan + 0j, dtype=complex)
    diags = np.full(grid.shape, np.nan)
    holes = set()
    for i, x in enumerate(grid):
        try:
            res = _derivative_result(req, float(x))
            values[i] = _check_result(res, policy.atol)
            diags[i] = res.est_error
        except GencalcError:
            holes.add(i)
    return InstParamTrace(grid, values, frozenset(holes), diags)


class Monomial(NamedTuple):
    """coeff * x**exponent; arithmetic stays exact for rational inputs."""

    coeff: object
    exponent: object


def _exact(*vals) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in vals)


def monomial_derivative(c, m, n: int) -> Monomial:
    """Closed-form top-parameter derivative of c*x**m under a degree-n family.

    Returns c * prod_{i=0}^{n-1}(m - i) / n! times x**(m - n).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if _exact(c, m):
        c = Fraction(c)
        m = Fraction(m)
    prod = c
    for i in range(n):
        prod = prod * (m - i)
    return Monomial(prod / math.factorial(n), m - n)


def monomial_antiderivative(c, m, n: int) -> Monomial:
    """Closed-form inverse of monomial_derivative on c*x**m.

    n = 1 requires m != -1 (the classical exclusion); n >= 2 requires
    m + i != 0 for every i = 1..n.  Raises DomainError naming the
    violated constraint otherwise.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if _exact(c, m):
        c = Fraction(c)
        m = Fraction(m)
    if n == 1:
        if m == -1:
            raise DomainError("not integrable in this family: m = -1")
        return Monomial(c / (m + 1), m + 1)
    if m + n == 0:
        raise DomainError(f"not integrable in this family: m + n = 0 (m={m}, n={n})")
    denom = m + n
    for i in range(1, n):
        if m + i == 0:
            raise DomainError(f"not integrable in this family: m + {i} = 0 (m={m})")
        denom = denom * (m + i) / (i + 1)
    return Monomial(c / denom, m + n)


def reconstruct(family: Family, param_traces: Sequence[InstParamTrace], x: float) -> complex:
    """Evaluate the family with all instantaneous parameters at x.

    This is the integral without antiderivatives: with every parameter
    trace of f supplied, the result equals f(x) exactly (not up to a
    constant).  x must hit the common grid; holes raise DomainError.
    """
    if len(param_traces) != family.arity:
        raise ValueError(f"family {family.name!r} needs {family.arity} traces")
    params = [t.value_at(x) for t in param_traces]
    return family_eval(family, params, x)


def _fit_polynomial_trace(trace: InstParamTrace, max_degree: int = 10) -> list[complex]:
    """Exact polynomial coefficients (ascending) of a polynomial trace."""
    keep = [i for i in range(len(trace.grid)) if i not in trace.holes]
    if len(keep) < 1:
        raise DomainError("trace has no usable points")
    xs = trace.grid[keep]
    ys = trace.values[keep]
    scale = max(1.0, float(np.max(np.abs(ys))))
    for deg in range(0, min(max_degree, len(keep) - 1) + 1):
        coeffs = np.polynomial.polynomial.polyfit(xs, ys.real, deg).astype(complex)
        if np.any(ys.imag):
            coeffs = coeffs + 1j * np.polynomial.polynomial.polyfit(xs, ys.imag, deg)
        resid = np.max(np.abs(np.polynomial.polynomial.polyval(xs, coeffs) - ys))
        if resid <= 1e-7 * scale:
            return list(coeffs)
    raise DomainError("trace is not polynomial; partial reconstruction needs all parameters")


def _gen_binom(m, r: int) -> float:
    if isinstance(m, int) and m >= 0:
        return float(math.comb(m, r))
    prod = 1.0
    for i in range(r):
        prod *= (m - i) / (i + 1)
    return prod


def reconstruct_partial(
    family: Family,
    known: Mapping[str, InstParamTrace],
    user_constants: Mapping[str, complex],
    x: float,
) -> complex:
    """Reconstruction when some parameter directions vanished.

    With every parameter known this equals reconstruct.  With exactly
    one known trace on a polynomial family, the trace is inverted in
    closed form monomial by monomial (the generalized antiderivative)
    and the vanished directions are restored as user_constants[a_i] *
    x**i.  Other partial combinations have no pointwise inverse and
    raise DomainError.
    """
    names = family.param_names
    for name in list(known) + list(user_constants):
        if name not in names:
            raise ValueError(f"family {family.name!r} has no parameter {name!r}")
    missing = [p for p in names if p not in known and p not in user_constants]
    if missing:
        raise DomainError(f"missing parameter {missing[0]!r}")
    if all(p in known for p in names):
        return reconstruct(family, [known[p] for p in names], x)
    if family.kind not in ("linear", "poly") or len(known) != 1:
        raise DomainError(
            "partial reconstruction is defined for a single known trace of a "
            "polynomial family; supply all parameter traces otherwise"
        )
    n = family.arity - 1
    (name, trace), = known.items()
    j = int(name[1:])
    coeffs = _fit_polynomial_trace(trace)
    scale = max(1.0, max(abs(c) for c in coeffs))
    out: dict[int, complex] = {}
    for q, t in enumerate(coeffs):
        if abs(t) <= 1e-9 * scale:
            continue
        m = q + j
        d = _gen_binom_sum(j, n, m)
        if d == 0:
            raise DomainError(
                f"trace component x**{q} lies in a vanished direction of "
                f"parameter {name!r} and cannot be inverted"
            )
        out[m] = out.get(m, 0.0) + t / d
    for other in names:
        if other == name:
            continue
        i = int(other[1:])
        out[i] = out.get(i, 0.0) + complex(user_constants[other])
    return sum(c * complex(x) ** m for m, c in out.items()) if out else complex(0.0)


def _gen_binom_sum(j: int, n: int, m: int) -> float:
    total = 0.0
    for r in range(j, n + 1):
        total += (-1.0) ** (r - j) * math.comb(r, j) * _gen_binom(m, r)
    return total


def write_trace_csv(trace: InstParamTrace, path) -> None:
    """Serialize a trace with header x,re,im,err,hole."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("x,re,im,err,hole\n")
        for i, x in enumerate(trace.grid):
            hole = 1 if i in trace.holes else 0
            v = trace.values[i]
            e = trace.diagnostics[i]
            fh.write(f"{x!r},{v.real!r},{v.imag!r},{e!r},{hole}\n")
