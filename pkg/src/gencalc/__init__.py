"""Generalized differential and integral calculus.

The classical derivative fits a line through two infinitesimally close
points and reports its slope.  This package fits other reference
families (polynomials, exponentials, sinusoids, linear chirps, the
Fourier kernel) through N shrinking stencil points and reports any
family parameter's instantaneous value, together with the inverse
operation: rebuilding a function from its instantaneous parameter
traces without antiderivatives.  The flagship application recovers the
instantaneous frequency of chirp signals and complex wave functions
pointwise, with a Gabor/STFT baseline for contrast.
"""

from .baseline import (
    Spectrogram,
    Spectrum,
    dft,
    gaussian_pair_check,
    inverse_dft,
    ridge,
    stft,
    uncertainty_product,
)
from .derivators import (
    CHIRP,
    COS,
    EXP,
    FOURIER,
    LINEAR,
    SIN,
    TAN,
    Family,
    StencilSamples,
    family_eval,
    param_quotient,
    parse_family,
    polynomial,
    solve_stencil,
)
from .errors import (
    AliasingError,
    BranchChoiceWarning,
    CsvFormatError,
    DomainError,
    EvalError,
    GencalcError,
    NonConvergenceError,
    NonUniformGridError,
    OffGridError,
    ParseError,
    SingularStencilError,
)
from .expr import ExprNode, Token, evaluate, parse, parse_text, to_text, tokenize
from .gcalc import (
    GeneralizedDerivativeRequest,
    InstParamTrace,
    Monomial,
    derivative_trace,
    generalized_derivative,
    monomial_antiderivative,
    monomial_derivative,
    reconstruct,
    reconstruct_partial,
    write_trace_csv,
)
from .instafreq import (
    AmplitudeSpectrum,
    ChirpDerivatives,
    FrequencyTrace,
    amplitude_spectrum,
    chirp_derivatives,
    fourier_derivative,
    instantaneous_frequency,
    wavefunction_reconstruct,
)
from .numerics import (
    LimitPolicy,
    LimitResult,
    default_policy,
    estimate_limit,
    stencil,
    unwrap_branch,
)
from .sigio import SampledSignal, generate, read_csv, write_csv

__version__ = "0.1.0"
