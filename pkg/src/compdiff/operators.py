"""Truncated matrices of composition, composition-differentiation and multiplication operators.

Entry ``(m, n)`` of an :class:`OperatorMatrix` is ``<T e_n, e_m>`` with
``e_n`` the orthonormal bases of the domain and codomain spaces. Vectors
handed to the matrices are basis coefficients ``a_n * beta(n)``, so the
Hilbert-space adjoint is the literal conjugate transpose.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import TruncationError
from .series import DEFAULT_N, PowerSeries, SymbolMap, powers
from .space import DIRICHLET, BERGMAN, WeightedSpace


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    entries: np.ndarray
    domain: WeightedSpace
    codomain: WeightedSpace
    N: int
    symbol: str = ""
    # set when sup |phi| = 1: the matrix truncates a possibly unbounded operator
    unbounded_warning: bool = False

    def __post_init__(self):
        e = np.array(self.entries, dtype=complex)
        if e.shape != (self.N + 1, self.N + 1):
            raise TruncationError(f"expected {(self.N + 1,) * 2} matrix, got {e.shape}")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    def __matmul__(self, other: OperatorMatrix) -> OperatorMatrix:
        if self.N != other.N:
            raise TruncationError("truncation mismatch in operator product")
        return OperatorMatrix(
            self.entries @ other.entries, other.domain, self.codomain, self.N,
            f"{self.symbol} * {other.symbol}",
            self.unbounded_warning or other.unbounded_warning,
        )

    @property
    def shape(self):
        return self.entries.shape


def _check_symbol(phi: SymbolMap) -> bool:
    return phi.sup_bound >= 1


def build_Dphi(phi: SymbolMap, sp: WeightedSpace = DIRICHLET, N: int = DEFAULT_N) -> OperatorMatrix:
    """Matrix of ``f -> f' o phi`` on ``sp``; column ``n`` expands ``e_n' o phi``."""
    beta = sp.weights(N)
    P = powers(phi.taylor(N), max(N - 1, 0), N)  # P[k] = phi**k
    cols = np.zeros((N + 1, N + 1), dtype=complex)
    n = np.arange(1, N + 1)
    # e_n' = n z^(n-1) / beta(n)
    cols[:, 1:] = (P[n - 1] * (n / beta[n])[:, None]).T
    return OperatorMatrix(cols * beta[:, None], sp, sp, N, f"D[{phi.describe()}]", _check_symbol(phi))


def build_Cphi(
    phi: SymbolMap,
    domain: WeightedSpace = BERGMAN,
    codomain: WeightedSpace = DIRICHLET,
    N: int = DEFAULT_N,
) -> OperatorMatrix:
    """Matrix of ``f -> f o phi`` from ``domain`` to ``codomain``."""
    P = powers(phi.taylor(N), N, N)
    cols = P.T / domain.weights(N)[None, :]
    return OperatorMatrix(
        cols * codomain.weights(N)[:, None], domain, codomain, N,
        f"C[{phi.describe()}]", _check_symbol(phi),
    )


def build_Tpsi(psi: PowerSeries, sp: WeightedSpace = DIRICHLET, N: int = DEFAULT_N) -> OperatorMatrix:
    """Matrix of multiplication by ``psi``: entry ``(m, n) = psi_{m-n} beta(m)/beta(n)``."""
    if psi.N < N:
        raise TruncationError("multiplier must be truncated at order >= N")
    beta = sp.weights(N)
    m, n = np.indices((N + 1, N + 1))
    lag = m - n
    T = np.where(lag >= 0, psi.coeffs[np.clip(lag, 0, N)], 0)
    return OperatorMatrix(T * beta[:, None] / beta[None, :], sp, sp, N, "T[psi]")


def adjoint(m: OperatorMatrix) -> OperatorMatrix:
    return OperatorMatrix(
        m.entries.conj().T, m.codomain, m.domain, m.N, f"({m.symbol})*", m.unbounded_warning
    )


def identity(sp: WeightedSpace = DIRICHLET, N: int = DEFAULT_N) -> OperatorMatrix:
    return OperatorMatrix(np.eye(N + 1), sp, sp, N, "I")


def to_basis(f: PowerSeries, sp: WeightedSpace) -> np.ndarray:
    return f.coeffs * sp.weights(f.N)


def from_basis(v: np.ndarray, sp: WeightedSpace) -> PowerSeries:
    return PowerSeries(np.asarray(v) / sp.weights(len(v) - 1))


def apply(m: OperatorMatrix, f: PowerSeries) -> PowerSeries:
    """Apply ``m`` to a Taylor series, returning Taylor coefficients in the codomain."""
    if f.N != m.N:
        raise TruncationError(f"series truncated at {f.N}, matrix at {m.N}")
    return from_basis(m.entries @ to_basis(f, m.domain), m.codomain)
