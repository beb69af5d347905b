"""Derivator/integrator families and the exact local N-point solve.

Every family here is a parametric reference curve h(x; p0..pN-1) that
can be fitted exactly through N stencil points.  All solves share one
mechanism: linearize the samples (identity for polynomials, log for
exponential kernels, arc-functions for the trigonometric ones), fit the
resulting phase polynomial by Newton divided differences, and map its
monomial coefficients back to the family parameters.

Parameter vectors are ordered leading-coefficient first, matching the
conventional way the families are written:

    linear      a1, a0           h = a1*x + a0
    poly:n      an, ..., a0      h = sum ai * x**i
    exp         a, b             h = exp(a*x + b)
    sin/cos/tan omega, phi       h = sin/cos/tan(omega*x + phi)
    chirp       omega1, omega0, phi
                                 h = sin(2*pi*(omega1*x**2/2 + omega0*x) + phi)
    fourier     omega, b         h = exp(-1j*omega*x + b)

Trigonometric and logarithmic linearizations use principal branches at
the stencil base and keep continuity across the stencil via
unwrap_branch; where several exact branches exist the principal one is
chosen and a BranchChoiceWarning is emitted.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (
    BranchChoiceWarning,
    DomainError,
    EvalError,
    SingularStencilError,
)
from .numerics import stencil, unwrap_branch

_TWO_PI = 2.0 * math.pi

_KINDS = ("linear", "poly", "exp", "sin", "cos", "tan", "chirp", "fourier")


@dataclass(frozen=True)
class Family:
    """A derivator/integrator family descriptor."""

    kind: str
    degree: int | None = None  # polynomial degree, only for kind="poly"

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}")
        if self.kind == "poly":
            if self.degree is None or self.degree < 1:
                raise ValueError("polynomial degree must be at least 1")
        elif self.degree is not None:
            raise ValueError("degree applies only to polynomial families")

    @property
    def arity(self) -> int:
        if self.kind == "poly":
            return self.degree + 1
        return {"linear": 2, "exp": 2, "sin": 2, "cos": 2, "tan": 2,
                "chirp": 3, "fourier": 2}[self.kind]

    @property
    def param_names(self) -> tuple[str, ...]:
        if self.kind == "linear":
            return ("a1", "a0")
        if self.kind == "poly":
            return tuple(f"a{i}" for i in range(self.degree, -1, -1))
        if self.kind == "exp":
            return ("a", "b")
        if self.kind in ("sin", "cos", "tan"):
            return ("omega", "phi")
        if self.kind == "chirp":
            return ("omega1", "omega0", "phi")
        return ("omega", "b")

    @property
    def name(self) -> str:
        if self.kind == "poly":
            return f"poly:{self.degree}"
        return self.kind

    def param_index(self, name: str) -> int:
        try:
            return self.param_names.index(name)
        except ValueError:
            raise ValueError(
                f"family {self.name!r} has no parameter {name!r}; "
                f"choose from {', '.join(self.param_names)}"
            ) from None


LINEAR = Family("linear")
EXP = Family("exp")
SIN = Family("sin")
COS = Family("cos")
TAN = Family("tan")
CHIRP = Family("chirp")
FOURIER = Family("fourier")


def polynomial(degree: int) -> Family:
    return Family("poly", degree)


def parse_family(text: str) -> Family:
    """Resolve a stable CLI identifier such as "linear" or "poly:3"."""
    if text.startswith("poly:"):
        try:
            degree = int(text.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad polynomial family {text!r}") from None
        return polynomial(degree)
    if text in ("linear", "exp", "sin", "cos", "tan", "chirp", "fourier"):
        return Family(text)
    raise ValueError(f"unknown family {text!r}")


@dataclass(frozen=True)
class StencilSamples:
    """N points (xs[k], ys[k]) matched to a family of arity N."""

    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        ys = np.asarray(self.ys, dtype=complex)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)
        if xs.shape != ys.shape or xs.ndim != 1:
            raise ValueError("xs and ys must be 1-d sequences of equal length")
        d = np.diff(xs)
        if len(d) and not (np.all(d > 0) or np.all(d < 0)):
            raise SingularStencilError("stencil nodes must be strictly monotone")


def _poly_degree(family: Family) -> int:
    return family.arity - 1


def _coeffs_from_params(family: Family, params: Sequence[complex]) -> list[complex]:
    """Ascending monomial coefficients of the linearized phase polynomial."""
    p = [complex(v) for v in params]
    if family.kind in ("linear", "poly"):
        return p[::-1]
    if family.kind == "exp":
        a, b = p
        return [b, a]
    if family.kind == "fourier":
        omega, b = p
        return [b, -1j * omega]
    if family.kind in ("sin", "cos", "tan"):
        omega, phi = p
        return [phi, omega]
    omega1, omega0, phi = p  # chirp
    return [phi, _TWO_PI * omega0, math.pi * omega1]


def _params_from_coeffs(family: Family, coeffs: Sequence[complex]) -> np.ndarray:
    c = list(coeffs) + [0.0] * (family.arity - len(coeffs))
    if family.kind in ("linear", "poly"):
        params = c[::-1]
    elif family.kind == "exp":
        params = [c[1], c[0]]
    elif family.kind == "fourier":
        params = [1j * c[1], c[0]]
    elif family.kind in ("sin", "cos", "tan"):
        params = [c[1], c[0]]
    else:  # chirp
        params = [c[2] / math.pi, c[1] / _TWO_PI, c[0]]
    return np.asarray(params, dtype=complex)


def family_eval(family: Family, params: Sequence[complex], x: complex) -> complex:
    """Evaluate h(x; params)."""
    if len(params) != family.arity:
        raise ValueError(f"family {family.name!r} takes {family.arity} parameters")
    coeffs = _coeffs_from_params(family, params)
    p = complex(0.0)
    for c in reversed(coeffs):
        p = p * x + c
    if family.kind in ("linear", "poly"):
        return p
    if family.kind in ("exp", "fourier"):
        return cmath.exp(p)
    if family.kind == "sin" or family.kind == "chirp":
        return cmath.sin(p)
    if family.kind == "cos":
        return cmath.cos(p)
    c = cmath.cos(p)
    if abs(c) < 1e-12:
        raise EvalError("tangent pole", x)
    return cmath.sin(p) / c


def _arc(name: str, y: complex) -> complex:
    if y.imag == 0.0:
        a = y.real
        if name == "asin" and -1.0 <= a <= 1.0:
            return complex(math.asin(a), 0.0)
        if name == "acos" and -1.0 <= a <= 1.0:
            return complex(math.acos(a), 0.0)
        if name == "atan":
            return complex(math.atan(a), 0.0)
    warn = name != "atan"
    if warn:
        warnings.warn(
            f"{name} linearization left the real interval; principal complex "
            "branch chosen",
            BranchChoiceWarning,
            stacklevel=3,
        )
    return {"asin": cmath.asin, "acos": cmath.acos, "atan": cmath.atan}[name](y)


def linearize(family: Family, ys: Sequence[complex], base: complex | None = None) -> list[complex]:
    """Map samples of h to samples of its phase polynomial.

    Branch continuity is enforced across the sequence with
    unwrap_branch; *base*, when given, is the already-unwrapped
    linearized value expected at the first sample (used to keep a whole
    grid of stencils on one branch).  For log-based families a zero
    sample raises DomainError.
    """
    ys = [complex(y) for y in ys]
    kind = family.kind
    if kind in ("linear", "poly"):
        return ys
    if kind in ("exp", "fourier"):
        ws = []
        for y in ys:
            if y == 0:
                raise DomainError("logarithm undefined: zero sample")
            ws.append(cmath.log(y))
        phases = [complex(w.imag, 0.0) for w in ws]
        if base is not None:
            shift = _TWO_PI * round((base.imag - phases[0].real) / _TWO_PI)
            phases = [p + shift for p in phases]
        unwrapped = unwrap_branch(phases, _TWO_PI)
        if any(abs(u - p) > 1e-9 for u, p in zip(unwrapped, phases)):
            warnings.warn(
                "complex logarithm wrapped across the stencil; branch chosen "
                "by continuity",
                BranchChoiceWarning,
                stacklevel=2,
            )
        return [complex(w.real, p.real) for w, p in zip(ws, unwrapped)]
    arc = {"sin": "asin", "cos": "acos", "tan": "atan", "chirp": "asin"}[kind]
    ws = [_arc(arc, y) for y in ys]
    period = math.pi if kind == "tan" else _TWO_PI
    if base is not None:
        shift = period * round((base.real - ws[0].real) / period)
        ws = [w + shift for w in ws]
    return unwrap_branch(ws, period)


def _newton_coeffs(xs: Sequence[float], ws: Sequence[complex]) -> list[complex]:
    """Ascending monomial coefficients of the interpolating polynomial."""
    n = len(ws)
    dd = [complex(w) for w in ws]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            span = float(xs[i]) - float(xs[i - j])
            if span == 0:
                raise SingularStencilError("duplicate stencil nodes")
            dd[i] = (dd[i] - dd[i - 1]) / span
    coeffs: list[complex] = [dd[n - 1]]
    for i in range(n - 2, -1, -1):
        # coeffs(t) <- coeffs(t) * (t - xs[i]) + dd[i]
        shifted = [complex(0.0)] + coeffs
        for j in range(len(coeffs)):
            shifted[j] -= coeffs[j] * xs[i]
        shifted[0] += dd[i]
        coeffs = shifted
    return coeffs


def fit_linearized(family: Family, xs: Sequence[float], ws: Sequence[complex]) -> np.ndarray:
    """Parameters from already-linearized samples."""
    coeffs = _newton_coeffs(xs, ws)
    return _params_from_coeffs(family, coeffs)


def solve_stencil(family: Family, samples: StencilSamples) -> np.ndarray:
    """The unique parameter vector interpolating the stencil samples.

    family_eval(family, result, xs[k]) == ys[k] for all k, up to
    rounding.  Raises SingularStencilError for duplicate nodes and
    DomainError where a log linearization hits zero.
    """
    if len(samples.xs) != family.arity:
        raise ValueError(
            f"family {family.name!r} needs {family.arity} points, "
            f"got {len(samples.xs)}"
        )
    ws = linearize(family, samples.ys)
    return fit_linearized(family, samples.xs, ws)


def param_quotient(
    family: Family,
    param_index: int,
    f: Callable[[float], complex],
    x: float,
    delta: float,
) -> complex:
    """The pre-limit quotient: component param_index of the stencil solve.

    Its delta -> 0 limit is the generalized derivative of f under the
    family's parameter param_index.
    """
    if not 0 <= param_index < family.arity:
        raise ValueError(f"param_index out of range for family {family.name!r}")
    xs = stencil(x, delta, family.arity)
    ys = [f(float(t)) for t in xs]
    params = solve_stencil(family, StencilSamples(xs, np.asarray(ys, dtype=complex)))
    return complex(params[param_index])
