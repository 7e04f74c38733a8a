"""Companion maps of linear-fractional symbols and the adjoint identity

    D_phi^* T_{K^(1)_{sigma(0)}}^* = T_{K^(1)_{phi(0)}} D_sigma

checked on truncated matrices and on reproducing kernels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import SymbolError
from .operators import adjoint, apply, build_Dphi, build_Tpsi, to_basis
from .series import DEFAULT_N, LinearFractional, PowerSeries, _boundary
from .space import DIRICHLET, kernel


@dataclass(frozen=True)
class CompanionPair:
    phi: LinearFractional
    sigma: LinearFractional
    phi0: complex
    sigma0: complex


def companion(phi: LinearFractional) -> CompanionPair:
    """Pair ``phi`` with ``sigma(z) = (conj(a) z - conj(c)) / (-conj(b) z + conj(d))``."""
    if not isinstance(phi, LinearFractional):
        raise SymbolError("companion map is defined for linear-fractional symbols")
    if phi.sup_bound >= 1:
        raise SymbolError("adjoint formula needs sup |phi| < 1")
    sigma = phi.companion_map()
    return CompanionPair(phi, sigma, complex(phi(0.0)), complex(sigma(0.0)))


def multiplier_kernels(pair: CompanionPair, N: int = DEFAULT_N) -> tuple[PowerSeries, PowerSeries]:
    """Taylor series of ``K^(1)_{phi(0)}`` and ``K^(1)_{sigma(0)}``.

    In closed form these are ``conj(d) z / (-conj(b) z + conj(d))`` and
    ``d z / (c z + d)``.
    """
    return kernel(pair.phi0, 1, N).series, kernel(pair.sigma0, 1, N).series


def multiplier_sup(w: complex, n: int = 4096) -> tuple[float, float]:
    """Boundary-grid sups of ``|psi|`` and ``|psi'|`` for ``psi = K^(1)_w``."""
    z = _boundary(n)
    wc = np.conj(w)
    return float(np.max(np.abs(z / (1 - wc * z)))), float(np.max(np.abs(1 / (1 - wc * z) ** 2)))


def identity_sides(phi: LinearFractional, N: int = DEFAULT_N):
    pair = companion(phi)
    k_phi0, k_sigma0 = multiplier_kernels(pair, N)
    left = adjoint(build_Dphi(phi, DIRICHLET, N)) @ adjoint(build_Tpsi(k_sigma0, DIRICHLET, N))
    right = build_Tpsi(k_phi0, DIRICHLET, N) @ build_Dphi(pair.sigma, DIRICHLET, N)
    return left, right


def verify_identity(phi: LinearFractional, N: int = 64) -> float:
    """Largest entry of ``left - right`` on the leading ``(N/2) x (N/2)`` block."""
    left, right = identity_sides(phi, N)
    k = N // 2
    return float(np.max(np.abs(left.entries[:k, :k] - right.entries[:k, :k])))


def verify_on_kernels(phi: LinearFractional, ws, points, N: int = 128) -> float:
    """Apply both sides to ``K_w`` and compare the resulting series at ``points``.

    Both should equal ``conj(d w / (c w + d)) K^(1)_{phi(w)}``.
    """
    left, right = identity_sides(phi, N)
    points = np.asarray(points, dtype=complex)
    worst = 0.0
    for w in ws:
        K = kernel(w, 0, N).series
        lv = apply(left, K)(points)
        rv = apply(right, K)(points)
        worst = max(worst, float(np.max(np.abs(lv - rv))))
    return worst


def kernel_image(m, w: complex, N: int) -> PowerSeries:
    """``m`` applied to the truncated kernel ``K_w``."""
    return apply(m, kernel(w, 0, N).series)


def expected_kernel_image(phi: LinearFractional, w: complex, N: int) -> np.ndarray:
    """Basis vector of ``conj(d w / (c w + d)) K^(1)_{phi(w)}``."""
    scale = np.conj(phi.d * w / (phi.c * w + phi.d))
    return scale * to_basis(kernel(complex(phi(w)), 1, N).series, DIRICHLET)
