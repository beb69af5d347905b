"""Instantaneous frequency from chirp waveforms and complex wave functions.

A real chirp sin(2*pi*(omega1*x**2/2 + omega0*x) + phi) is fitted
locally through three shrinking stencil points after an arcsine
linearization; the recovered instantaneous chirp parameters combine to
the instantaneous frequency omega(x) = omega1(x)*x + omega0(x).  A
complex wave function A*exp(-1j*Omega(x)) is treated the same way
through the complex logarithm (the Fourier kernel family), whose slope
parameter is the instantaneous frequency directly.  Both recoveries are
pointwise: away from the arcsine folds (|f| = 1) there is no
time-frequency trade-off, which is the contrast the stft baseline
exhibits.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .derivators import CHIRP, FOURIER, fit_linearized, linearize
from .errors import DomainError, GencalcError, OffGridError
from .gcalc import (
    GeneralizedDerivativeRequest,
    InstParamTrace,
    as_evaluator,
    _check_result,
)
from .numerics import LimitPolicy, default_policy, estimate_limit, stencil, unwrap_phases

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ChirpDerivatives:
    """The three instantaneous chirp parameter traces on a common grid."""

    omega1: InstParamTrace
    omega0: InstParamTrace
    phi: InstParamTrace


@dataclass(frozen=True)
class FrequencyTrace:
    """Instantaneous frequency over a grid; nonnegative off holes."""

    grid: np.ndarray
    omega: np.ndarray
    holes: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "grid", np.asarray(self.grid, dtype=float))
        object.__setattr__(self, "omega", np.asarray(self.omega, dtype=float))
        object.__setattr__(self, "holes", frozenset(self.holes))


@dataclass(frozen=True)
class AmplitudeSpectrum:
    """Level-set amplitude spectrum built from a frequency trace."""

    bin_centers: np.ndarray
    values: np.ndarray
    bin_width: float


def _fold_guard(ys: Sequence[complex]) -> None:
    for y in ys:
        y = complex(y)
        if y.imag == 0.0 and abs(1.0 - y.real * y.real) < 1e-12:
            raise DomainError("arcsine linearization singular: |f| = 1 on the stencil")


def _chirp_params_quotient(f, x: float, delta: float) -> np.ndarray:
    xs = stencil(x, delta, 3)
    ys = [f(float(t)) for t in xs]
    _fold_guard(ys)
    ws = linearize(CHIRP, ys)
    return fit_linearized(CHIRP, xs, ws)


def _literal_omega1_quotient(f, x: float, delta: float) -> complex:
    # The alternative reading of the top-parameter quotient with the
    # doubling inside the arcsine; exposed for comparison only.
    k0 = cmath.asin(f(x))
    k1 = cmath.asin(2.0 * f(x + delta))
    k2 = cmath.asin(f(x + 2.0 * delta))
    return (k0 - k1 + k2) / (_TWO_PI * delta * delta)


def chirp_derivatives(
    f,
    grid: Sequence[float],
    policy: LimitPolicy | None = None,
    literal_top: bool = False,
) -> ChirpDerivatives:
    """Instantaneous omega1, omega0, phi traces of a real waveform.

    Points where the arcsine linearization is singular (|f| = 1 within
    1e-12 of the fold, or no stable limit near a fold) become holes in
    all three traces.  With literal_top=True the omega1 quotient uses
    the doubled-argument arcsine form instead of doubling outside; that
    form does not converge for generic chirps and is provided for
    comparison.
    """
    f = as_evaluator(f)
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("grid must be nonempty")
    n = grid.size
    values = [np.full(n, np.nan + 0j, dtype=complex) for _ in range(3)]
    diags = [np.full(n, np.nan) for _ in range(3)]
    holes: set[int] = set()
    for i, x in enumerate(grid):
        pol = policy if policy is not None else default_policy(float(x))
        try:
            for k in range(3):
                if k == 0 and literal_top:
                    g = lambda d: _literal_omega1_quotient(f, float(x), d)
                else:
                    g = lambda d, k=k: complex(_chirp_params_quotient(f, float(x), d)[k])
                res = estimate_limit(g, pol)
                values[k][i] = _check_result(res, pol.atol)
                diags[k][i] = res.est_error
        except GencalcError:
            holes.add(i)
    holes_f = frozenset(holes)
    traces = [InstParamTrace(grid, v, holes_f, d) for v, d in zip(values, diags)]
    return ChirpDerivatives(*traces)


def instantaneous_frequency(cd: ChirpDerivatives, sign_mode: str = "continuity") -> FrequencyTrace:
    """Combine chirp derivatives into omega(x) = omega1(x)*x + omega0(x).

    The arcsine branch makes the raw combination carry a per-region
    sign.  "absolute" forms the combination first and takes |.|
    pointwise.  "continuity" picks, point by point, the sign that keeps
    the trace smooth, then flips globally if the result is
    predominantly negative; points still negative after that carry an
    unresolved sign at an omega zero crossing and are reported as
    holes.
    """
    if sign_mode not in ("continuity", "absolute"):
        raise ValueError("sign_mode must be 'continuity' or 'absolute'")
    grid = cd.omega1.grid
    if cd.omega0.grid.shape != grid.shape or not np.allclose(cd.omega0.grid, grid):
        raise ValueError("chirp derivative traces must share a grid")
    holes = set(cd.omega1.holes) | set(cd.omega0.holes)
    raw = (cd.omega1.values * grid + cd.omega0.values).real
    omega = np.full(grid.shape, np.nan)
    if sign_mode == "absolute":
        for i in range(len(grid)):
            if i not in holes:
                omega[i] = abs(raw[i])
        return FrequencyTrace(grid, omega, frozenset(holes))
    prev = None
    for i in range(len(grid)):
        if i in holes:
            continue
        v = raw[i]
        if prev is None:
            omega[i] = abs(v)
        else:
            omega[i] = v if abs(v - prev) <= abs(-v - prev) else -v
        prev = omega[i]
    good = [i for i in range(len(grid)) if i not in holes]
    if good and float(np.median(omega[good])) < 0:
        omega[good] = -omega[good]
    for i in good:
        if omega[i] < 0:
            holes.add(i)
            omega[i] = np.nan
    return FrequencyTrace(grid, omega, frozenset(holes))


def fourier_derivative(
    psi,
    grid: Sequence[float],
    policy: LimitPolicy | None = None,
) -> tuple[InstParamTrace, InstParamTrace]:
    """Instantaneous omega and b traces of a complex wave function.

    The complex-logarithm branch is kept continuous along each stencil
    and along the grid; the grid phase is anchored at the grid point
    nearest x = 0, where the principal logarithm is taken as is.
    Samples with |psi| below 1e-12 become holes.
    """
    psi = as_evaluator(psi)
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("grid must be nonempty")
    n = grid.size
    base_vals = np.empty(n, dtype=complex)
    tiny = np.zeros(n, dtype=bool)
    for i, x in enumerate(grid):
        v = complex(psi(float(x)))
        base_vals[i] = v
        tiny[i] = abs(v) < 1e-12
    anchor = int(np.argmin(np.abs(grid)))
    phases = np.array(unwrap_phases(np.where(tiny, 1.0, base_vals), anchor))

    values = [np.full(n, np.nan + 0j, dtype=complex) for _ in range(2)]
    diags = [np.full(n, np.nan) for _ in range(2)]
    holes: set[int] = set()
    for i, x in enumerate(grid):
        if tiny[i]:
            holes.add(i)
            continue
        pol = policy if policy is not None else default_policy(float(x))
        base = complex(math.log(abs(base_vals[i])), phases[i])

        def solve(d: float, k: int) -> complex:
            xs = stencil(float(x), d, 2)
            ys = []
            for t in xs:
                v = complex(psi(float(t)))
                if abs(v) < 1e-12:
                    raise DomainError("logarithm undefined: |psi| below 1e-12")
                ys.append(v)
            ws = linearize(FOURIER, ys, base=base)
            return complex(fit_linearized(FOURIER, xs, ws)[k])

        try:
            for k in range(2):
                res = estimate_limit(lambda d, k=k: solve(d, k), pol)
                values[k][i] = _check_result(res, pol.atol)
                diags[k][i] = res.est_error
        except GencalcError:
            holes.add(i)
    holes_f = frozenset(holes)
    omega = InstParamTrace(grid, values[0], holes_f, diags[0])
    b = InstParamTrace(grid, values[1], holes_f, diags[1])
    return omega, b


def wavefunction_reconstruct(omega: InstParamTrace, b: InstParamTrace, x: float) -> complex:
    """exp(-1j*omega(x)*x + b(x)) at a grid point."""
    w = omega.value_at(x)
    bb = b.value_at(x)
    return cmath.exp(-1j * w * x + bb)


def amplitude_spectrum(ft: FrequencyTrace, delta_omega: float) -> AmplitudeSpectrum:
    """Histogram-style amplitude spectrum from the level sets of omega(x).

    Bins are half-open intervals [c - dw/2, c + dw/2) around centers
    c = k*dw; each bin value is the trapezoid integral of omega(x) over
    the samples whose omega falls in the bin, divided by the center.
    The k = 0 bin would divide by a near-zero center and is omitted.
    """
    if delta_omega <= 0:
        raise ValueError("delta_omega must be positive")
    good = [i for i in range(len(ft.grid)) if i not in ft.holes]
    if len(good) < 2:
        raise ValueError("frequency trace needs at least 2 usable points")
    ks = {}
    for i in good:
        ks[i] = math.floor(ft.omega[i] / delta_omega + 0.5)
    kmin = min(ks.values())
    kmax = max(ks.values())
    centers = [k * delta_omega for k in range(kmin, kmax + 1) if k != 0]
    sums = {k: 0.0 for k in range(kmin, kmax + 1)}
    for a, b in zip(good[:-1], good[1:]):
        if b != a + 1:
            continue  # holes break integration runs
        if ks[a] != ks[b]:
            continue  # pair straddles two bins
        dx = ft.grid[b] - ft.grid[a]
        sums[ks[a]] += 0.5 * (ft.omega[a] + ft.omega[b]) * dx
    values = [sums[round(c / delta_omega)] / c for c in centers]
    return AmplitudeSpectrum(np.asarray(centers), np.asarray(values), delta_omega)


def write_frequency_csv(ft: FrequencyTrace, path) -> None:
    """Serialize with header x,omega,hole."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("x,omega,hole\n")
        for i, x in enumerate(ft.grid):
            hole = 1 if i in ft.holes else 0
            fh.write(f"{x!r},{ft.omega[i]!r},{hole}\n")


def write_amplitude_csv(spec: AmplitudeSpectrum, path) -> None:
    """Serialize with header omega,F."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("omega,F\n")
        for c, v in zip(spec.bin_centers, spec.values):
            fh.write(f"{float(c)!r},{float(v)!r}\n")
