"""Numerics for composition-differentiation operators ``f -> f' o phi`` on the Dirichlet space."""

__version__ = "0.1.0"

from .exceptions import (
    CompdiffError,
    ConvergenceError,
    NoClosedFormError,
    SymbolError,
    TruncationError,
)
from .series import (
    DEFAULT_N,
    LinearFractional,
    Monomial,
    Polynomial,
    PowerSeries,
    SymbolMap,
    compose,
    derivative,
    eval_series,
    multiply,
    parse_symbol,
    symbol_taylor,
)
from .space import BERGMAN, DIRICHLET, HARDY, WeightedSpace, inner_product, kernel, norm, reproduce_check
from .operators import OperatorMatrix, adjoint, apply, build_Cphi, build_Dphi, build_Tpsi
from .spectral import (
    closed_form_norm,
    closed_form_spectrum,
    hilbert_schmidt_norm,
    matrix_norm,
    matrix_spectrum,
    norm_curve,
)
from .faadibruno import bell, coefficient_recursion, faa_di_bruno

__all__ = [name for name in dir() if not name.startswith("_")]
