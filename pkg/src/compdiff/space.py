"""Weighted Hardy spaces (Dirichlet, Hardy, Bergman) and Dirichlet kernels.

A weighted Hardy space is fixed by its weight sequence ``beta(n)``:
``||f||**2 = sum |a_n|**2 beta(n)**2`` for ``f = sum a_n z**n``, and
``e_n = z**n / beta(n)`` is an orthonormal basis. Area integrals use the
normalized measure ``dA`` (total mass one).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .exceptions import TruncationError
from .series import DEFAULT_N, PowerSeries, derivative, eval_series


class SpaceKind(enum.Enum):
    DIRICHLET = "dirichlet"
    HARDY = "hardy"
    BERGMAN = "bergman"


@dataclass(frozen=True)
class WeightedSpace:
    kind: SpaceKind

    def weights(self, N: int) -> np.ndarray:
        """``beta(0..N)``."""
        n = np.arange(N + 1, dtype=float)
        if self.kind is SpaceKind.DIRICHLET:
            w = np.sqrt(n)
            w[0] = 1.0
            return w
        if self.kind is SpaceKind.HARDY:
            return np.ones(N + 1)
        return 1.0 / np.sqrt(n + 1)

    def basis(self, n: int, N: int) -> PowerSeries:
        """The orthonormal basis function ``e_n`` truncated at ``N``."""
        return PowerSeries.monomial(n, N, 1.0 / self.weights(n)[n])

    @property
    def name(self) -> str:
        return self.kind.value


DIRICHLET = WeightedSpace(SpaceKind.DIRICHLET)
HARDY = WeightedSpace(SpaceKind.HARDY)
BERGMAN = WeightedSpace(SpaceKind.BERGMAN)


def norm(f: PowerSeries, sp: WeightedSpace = DIRICHLET) -> float:
    return float(np.sqrt(np.sum(np.abs(f.coeffs) ** 2 * sp.weights(f.N) ** 2)))


def inner_product(f: PowerSeries, g: PowerSeries, sp: WeightedSpace = DIRICHLET) -> complex:
    N = min(f.N, g.N)
    w2 = sp.weights(N) ** 2
    return complex(np.sum(f.coeffs[: N + 1] * np.conj(g.coeffs[: N + 1]) * w2))


@dataclass(frozen=True, eq=False)
class KernelFunction:
    """Dirichlet kernel at ``w``: ``order=0`` reproduces ``f(w)``, ``order=1`` reproduces ``f'(w)``."""

    w: complex
    order: int
    series: PowerSeries

    def __call__(self, z):
        return eval_series(self.series, z)

    def closed_form(self, z):
        z = np.asarray(z, dtype=complex)
        wc = np.conj(self.w)
        if self.order == 0:
            return 1 + np.log(1 / (1 - wc * z))
        return z / (1 - wc * z)


def kernel(w: complex, order: int = 0, N: int = DEFAULT_N) -> KernelFunction:
    """Truncated Dirichlet reproducing kernel ``K_w`` or ``K_w^(1)``.

    ``K_w(z) = 1 + log(1/(1 - conj(w) z))`` and
    ``K_w^(1)(z) = z / (1 - conj(w) z)``.
    """
    if abs(w) >= 1:
        raise ValueError("kernel base point must satisfy |w| < 1")
    if order not in (0, 1):
        raise ValueError("kernel order must be 0 or 1")
    wc = np.conj(complex(w))
    n = np.arange(1, N + 1)
    c = np.zeros(N + 1, dtype=complex)
    if order == 0:
        c[0] = 1.0
        c[1:] = wc**n / n
    else:
        c[1:] = wc ** (n - 1)
    return KernelFunction(complex(w), order, PowerSeries(c))


def reproduce_check(f: PowerSeries, w: complex, order: int = 0) -> float:
    """``|<f, K_w^(order)> - f^(order)(w)|`` in the Dirichlet space."""
    if order == 1 and f.N < 1:
        raise TruncationError("order-1 reproduction needs a series of order >= 1")
    K = kernel(w, order, f.N)
    target = eval_series(f if order == 0 else derivative(f), w)
    return abs(inner_product(f, K.series, DIRICHLET) - target)
