"""Uniformly sampled signals: data model, synthesis, CSV persistence.

CSV schema: header ``x,re,im`` (``im`` optional, defaulting to zero),
one row per sample, values written with shortest round-trip decimal
text so that write followed by read is lossless.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import CsvFormatError, EvalError, NonUniformGridError
from .expr import ExprNode, evaluate


@dataclass(frozen=True)
class SampledSignal:
    """Samples on the grid x0 + k*dx, k = 0..len(samples)-1."""

    x0: float
    dx: float
    samples: np.ndarray

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=complex)
        object.__setattr__(self, "samples", samples)
        if self.dx <= 0:
            raise ValueError("dx must be positive")
        if samples.ndim != 1 or len(samples) == 0:
            raise ValueError("samples must be a nonempty 1-d sequence")

    @property
    def grid(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(len(self.samples))

    @property
    def rate(self) -> float:
        return 1.0 / self.dx

    def value_at(self, x: float) -> complex:
        """Sample at a grid node; raises EvalError off the grid."""
        pos = (x - self.x0) / self.dx
        i = int(round(pos))
        if abs(pos - i) > 1e-6 or not 0 <= i < len(self.samples):
            raise EvalError("point is not a grid node of the sampled signal", x)
        return complex(self.samples[i])


def generate(expr: ExprNode | Callable[[float], complex], x0: float, dx: float, n: int) -> SampledSignal:
    """Synthesize a signal by evaluating an expression on a fresh grid."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if dx <= 0:
        raise ValueError("dx must be positive")
    f = expr if callable(expr) else (lambda t: evaluate(expr, t))
    samples = np.empty(n, dtype=complex)
    for k in range(n):
        try:
            samples[k] = f(x0 + k * dx)
        except EvalError as exc:
            raise EvalError(f"generation failed at sample {k}: {exc}", x0 + k * dx) from exc
    return SampledSignal(x0, dx, samples)


def _fmt(v: float) -> str:
    return repr(float(v))


def write_csv(signal: SampledSignal, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("x,re,im\n")
        for x, s in zip(signal.grid, signal.samples):
            fh.write(f"{_fmt(x)},{_fmt(s.real)},{_fmt(s.imag)}\n")


def read_csv(path) -> SampledSignal:
    """Read a signal, checking the x column for grid uniformity."""
    xs: list[float] = []
    vals: list[complex] = []
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip()
        cols = [c.strip() for c in header.split(",")]
        if cols not in (["x", "re", "im"], ["x", "re"]):
            raise CsvFormatError(f"expected header 'x,re[,im]', got {header!r}", 1)
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != len(cols):
                raise CsvFormatError(f"expected {len(cols)} fields, got {len(parts)}", lineno)
            try:
                x = float(parts[0])
                re = float(parts[1])
                im = float(parts[2]) if len(parts) == 3 else 0.0
            except ValueError:
                raise CsvFormatError(f"malformed row {line!r}", lineno) from None
            xs.append(x)
            vals.append(complex(re, im))
    if not xs:
        raise CsvFormatError("no samples", 2)
    if len(xs) == 1:
        return SampledSignal(xs[0], 1.0, np.asarray(vals))
    diffs = np.diff(xs)
    dx = float(np.median(diffs))
    if dx <= 0 or np.any(np.abs(diffs - dx) > 1e-9 * max(abs(dx), 1e-300)):
        raise NonUniformGridError("x column is not uniformly spaced")
    return SampledSignal(xs[0], dx, np.asarray(vals))
