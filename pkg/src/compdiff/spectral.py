"""Operator norms, spectra and Hilbert-Schmidt sums for ``D_phi``.

Closed forms for the monomial symbol ``phi(z) = a z^M``:

* ``||D_phi|| = max(1, sqrt(M nu (nu - 1)) |a|**(nu - 1))`` with
  ``nu = floor(2 / (1 - |a|**2))``;
* spectrum ``{0, 2a}`` when ``M = 2`` and ``{0}`` otherwise (also ``{0}``
  for affine ``az + b`` with ``0 < |a| < 1 - |b|``).

The numerical counterparts work on truncated matrices from
:mod:`compdiff.operators`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath as mp
import numpy as np
import scipy.linalg

from .exceptions import ConvergenceError, NoClosedFormError
from .operators import OperatorMatrix, build_Dphi
from .series import DEFAULT_N, LinearFractional, Monomial, SymbolMap
from .space import DIRICHLET, WeightedSpace

SEED = 0x5EED


@dataclass
class NormResult:
    nu: int
    closed_form: float
    M: int
    a: complex
    matrix_estimate: float | None = None
    # 2/(1-|a|^2) is an integer: n = nu and n = nu - 1 give the same value
    tie: bool = False
    # exact decision that the norm equals 1
    flat: bool = False


def _abs2_exact(a: complex) -> Fraction:
    a = complex(a)
    return Fraction(a.real) ** 2 + Fraction(a.imag) ** 2


def closed_form_norm(a: complex, M: int) -> NormResult:
    """Exact ``||D_phi||`` on the Dirichlet space for ``phi(z) = a z^M``.

    ``nu`` and the comparison with 1 are decided in exact rational
    arithmetic on the binary value of ``|a|**2``, so the flat region is
    reproduced without rounding ambiguity at its endpoint.
    """
    if not 0 < abs(a) < 1:
        raise ValueError("closed_form_norm needs 0 < |a| < 1")
    if int(M) != M or M < 1:
        raise ValueError("M must be a positive integer")
    x = _abs2_exact(a)
    q = Fraction(2) / (1 - x)
    nu = math.floor(q)
    tie = q.denominator == 1
    if nu < 2:
        return NormResult(nu, 1.0, M, a, tie=tie, flat=True)
    peak_sq = M * nu * (nu - 1) * x ** (nu - 1)
    if peak_sq <= 1:
        return NormResult(nu, 1.0, M, a, tie=tie, flat=True)
    # correctly rounded square root of the exact rational
    with mp.workdps(40):
        value = float(mp.sqrt(mp.mpf(peak_sq.numerator) / peak_sq.denominator))
    return NormResult(nu, value, M, a, tie=tie)


def matrix_norm(
    m: OperatorMatrix | np.ndarray,
    tol: float = 1e-12,
    max_iter: int = 200_000,
    seed: int = SEED,
) -> float:
    """Largest singular value by power iteration on ``A^H A``.

    Stops once the eigen-residual ``||G v - rho v||`` drops below
    ``tol * rho``; for Hermitian ``G`` this certifies that ``rho`` lies within
    that residual of an eigenvalue of ``G``.
    """
    A = m.entries if isinstance(m, OperatorMatrix) else np.asarray(m, dtype=complex)
    if not np.any(A):
        return 0.0
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(A.shape[1]) + 1j * rng.standard_normal(A.shape[1])
    v /= np.linalg.norm(v)
    for _ in range(max_iter):
        w = A.conj().T @ (A @ v)
        rho = float(np.vdot(v, w).real)
        if rho == 0.0:
            return 0.0
        if np.linalg.norm(w - rho * v) <= tol * rho:
            return math.sqrt(rho)
        v = w / np.linalg.norm(w)
    raise ConvergenceError(f"power iteration did not converge in {max_iter} steps")


def norm_curve(M: int, grid: Sequence[float]) -> list[tuple[float, int, float]]:
    """Rows ``(|a|, nu, ||D_phi||)`` for ``phi = a z^M`` over ``grid``."""
    rows = []
    for a in grid:
        if not 0 < a < 1:
            raise ValueError("grid values must lie in (0, 1)")
        r = closed_form_norm(a, M)
        rows.append((float(a), r.nu, r.closed_form))
    return rows


@dataclass
class SpectrumResult:
    eigenvalues: list = field(default_factory=list)
    predicted: set | None = None
    raw: np.ndarray | None = None
    tol: float | None = None

    @property
    def nonzero(self) -> list:
        return [v for v in self.eigenvalues if v != 0]


def closed_form_spectrum(phi: SymbolMap) -> SpectrumResult:
    if isinstance(phi, Monomial):
        pred = {0j, complex(2 * phi.a)} if phi.M == 2 else {0j}
        return SpectrumResult(predicted=pred)
    if isinstance(phi, LinearFractional) and phi.is_affine:
        a, b = phi.a / phi.d, phi.b / phi.d
        if 0 < abs(a) < 1 - abs(b):
            return SpectrumResult(predicted={0j})
    raise NoClosedFormError(f"no closed form in paper for symbol {phi.describe()}")


def matrix_spectrum(m: OperatorMatrix, tol: float | None = None) -> SpectrumResult:
    """Eigenvalues of the truncated matrix; moduli below ``tol`` are reported as 0.

    ``tol`` defaults to ``1e-8 * matrix_norm(m)``.
    """
    raw = scipy.linalg.eigvals(m.entries)
    if not np.all(np.isfinite(raw)):
        raise ConvergenceError("eigensolver returned non-finite values")
    if tol is None:
        tol = 1e-8 * matrix_norm(m)
    vals = [0j if abs(v) < tol else complex(v) for v in raw]
    vals.sort(key=lambda v: (-abs(v), v.real, v.imag))
    return SpectrumResult(vals, raw=raw, tol=tol)


@dataclass
class HSResult:
    value: float
    partial_sums: np.ndarray
    tail_estimate: float
    # sum over rows m >= 1: the Dirichlet seminorm part of sum ||D_phi e_n||^2
    seminorm_sq: float


def hilbert_schmidt_norm(phi: SymbolMap, sp: WeightedSpace = DIRICHLET, N: int = DEFAULT_N) -> HSResult:
    """``sqrt(sum_{n <= N} ||D_phi e_n||**2)`` from the truncated matrix columns.

    The tail estimate is the growth of the squared sum between ``N/2`` and
    ``N``; partial sums that do not stabilise signal a non-HS operator.
    """
    E = np.abs(build_Dphi(phi, sp, N).entries) ** 2
    partial = np.cumsum(E.sum(axis=0))
    tail = float(partial[-1] - partial[N // 2])
    return HSResult(float(np.sqrt(partial[-1])), np.sqrt(partial), tail, float(E[1:].sum()))
