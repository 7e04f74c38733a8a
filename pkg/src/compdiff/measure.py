"""Disk quadrature and pullback-measure integrals.

The pullback measure ``mu = n_phi dA`` is never built explicitly. Every
integral against it is turned into an integral over the disk by the change
of variables

    int g dmu = int g(phi(z)) |phi'(z)|**2 dA(z),

which stays valid for non-univalent symbols. ``dA`` is normalized area
measure, so a polar cell at radius ``r`` has weight ``2 r dr dtheta/(2 pi)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import mpmath as mp
import numpy as np
from scipy import integrate

from .series import SymbolMap

SMOOTH_GRID = (512, 1024)
INDICATOR_GRID = (2048, 4096)
MC_SEED = 0x5EED
_CHUNK = 1 << 20


@dataclass(frozen=True)
class QuadratureGrid:
    """Tensor polar grid: midpoint rule in ``r``, uniform (periodic trapezoid) in ``theta``."""

    radial_nodes: int
    angular_nodes: int
    scheme: str = "polar-midpoint"

    def radii(self) -> tuple[np.ndarray, np.ndarray]:
        r = (np.arange(self.radial_nodes) + 0.5) / self.radial_nodes
        return r, 2 * r / self.radial_nodes

    def angles(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.angular_nodes) / self.angular_nodes

    def refined(self) -> QuadratureGrid:
        return QuadratureGrid(2 * self.radial_nodes, 2 * self.angular_nodes, self.scheme)

    def coarsened(self) -> QuadratureGrid:
        return QuadratureGrid(max(self.radial_nodes // 2, 1), max(self.angular_nodes // 2, 1), self.scheme)

    def total_weight(self) -> float:
        return float(self.radii()[1].sum())

    def blocks(self) -> Iterable[tuple[np.ndarray, np.ndarray]]:
        """Yield ``(z, weight)`` blocks of whole radial rings, in ring order."""
        r, wr = self.radii()
        th = np.exp(1j * self.angles())
        step = max(1, _CHUNK // self.angular_nodes)
        for i in range(0, r.size, step):
            z = r[i : i + step, None] * th[None, :]
            w = np.broadcast_to((wr[i : i + step] / self.angular_nodes)[:, None], z.shape)
            yield z, w


def as_grid(grid) -> QuadratureGrid:
    if isinstance(grid, QuadratureGrid):
        return grid
    return QuadratureGrid(*grid)


@dataclass(frozen=True)
class QuadResult:
    value: complex
    error: float
    coarse: complex
    grid: QuadratureGrid

    def __float__(self):
        return float(np.real(self.value))


def disk_integral(F: Callable[[np.ndarray], np.ndarray], grid: QuadratureGrid) -> complex:
    """``int F dA`` on one grid; ring blocks are reduced in fixed order."""
    parts = []
    for z, w in grid.blocks():
        vals = F(z)
        if not np.all(np.isfinite(vals)):
            raise FloatingPointError("non-finite integrand samples")
        parts.append(np.sum(vals * w))
    return complex(np.sum(parts))


def refine_integral(F, grid, smooth: bool) -> QuadResult:
    """Integrate on ``grid`` and its coarsening; error is the difference.

    For smooth integrands the midpoint error is ``O(h**2)`` with an even
    expansion, so one Richardson step is applied.
    """
    fine = as_grid(grid)
    coarse = fine.coarsened()
    If, Ic = disk_integral(F, fine), disk_integral(F, coarse)
    if smooth:
        value = If + (If - Ic) / 3
        return QuadResult(value, abs(If - Ic) / 3, Ic, fine)
    return QuadResult(If, abs(If - Ic), Ic, fine)


def pullback_integral(
    phi: SymbolMap,
    g: Callable[[np.ndarray], np.ndarray],
    grid=SMOOTH_GRID,
    smooth: bool = True,
) -> QuadResult:
    """``int g dmu`` computed as ``int g(phi(z)) |phi'(z)|**2 dA(z)``."""
    return refine_integral(lambda z: g(phi(z)) * np.abs(phi.deriv(z)) ** 2, grid, smooth)


def dirichlet_seminorm_sq(phi: SymbolMap, N: int = 256) -> float:
    """``sum n |phi_n|**2`` from Taylor coefficients (the mass of ``mu``)."""
    c = phi.taylor(N).coeffs
    return float(np.sum(np.arange(N + 1) * np.abs(c) ** 2))


@dataclass(frozen=True)
class CarlesonWindow:
    theta: float
    h: float

    def __post_init__(self):
        if not 0 < self.h <= 1:
            raise ValueError("window size h must lie in (0, 1]")

    def contains(self, w: np.ndarray) -> np.ndarray:
        return np.abs(w - np.exp(1j * self.theta)) < self.h


def carleson_ratio(phi: SymbolMap, window: CarlesonWindow, grid=INDICATOR_GRID) -> QuadResult:
    """``mu(S(theta, h)) / h**4``."""
    res = pullback_integral(phi, lambda w: window.contains(w).astype(float), grid, smooth=False)
    s = window.h**4
    return QuadResult(res.value.real / s, res.error / s, res.coarse.real / s, res.grid)


DEFAULT_THETAS = 2 * np.pi * np.arange(64) / 64
DEFAULT_HS = tuple(2.0**-k for k in range(1, 11))


def carleson_table(
    phi: SymbolMap,
    thetas=DEFAULT_THETAS,
    hs=DEFAULT_HS,
    grid=INDICATOR_GRID,
) -> np.ndarray:
    """Ratios ``mu(S(theta, h)) / h**4`` for every window, shape ``(len(thetas), len(hs))``.

    The pullback points are computed once per ring block and binned by
    distance to each ``e^{i theta}``.
    """
    g = as_grid(grid)
    hs = np.asarray(hs, dtype=float)
    order = np.argsort(hs)
    edges = hs[order]
    out = np.zeros((len(thetas), hs.size))
    for z, w in g.blocks():
        pw = phi(z).ravel()
        mass = (np.abs(phi.deriv(z)) ** 2 * w).ravel()
        for i, t in enumerate(thetas):
            d = np.abs(pw - np.exp(1j * t))
            # bin k collects points with edges[k-1] <= d < edges[k]
            idx = np.searchsorted(edges, d, side="right")
            binned = np.bincount(idx, weights=mass, minlength=edges.size + 1)[: edges.size]
            out[i, order] += np.cumsum(binned)
    return out / hs[None, :] ** 4


def carleson_sup(phi: SymbolMap, thetas=DEFAULT_THETAS, hs=DEFAULT_HS, grid=INDICATOR_GRID) -> float:
    return float(carleson_table(phi, thetas, hs, grid).max())


def involution_integral(phi: SymbolMap, a: complex, grid=SMOOTH_GRID) -> QuadResult:
    """``int |phi_a'(w)|**4 dmu(w)`` with ``phi_a(z) = (a - z)/(1 - conj(a) z)``.

    Evaluated as ``int |phi'|**2 (1 - |a|**2)**4 / |1 - conj(a) phi|**8 dA``.
    """
    if abs(a) >= 1:
        raise ValueError("involution parameter needs |a| < 1")
    ac = np.conj(a)
    s = (1 - abs(a) ** 2) ** 4
    return pullback_integral(phi, lambda w: s / np.abs(1 - ac * w) ** 8, grid)


def hs_integral(phi: SymbolMap, grid=SMOOTH_GRID) -> QuadResult:
    """``int |phi'|**2 / (1 - |phi|**2)**4 dA``."""
    return pullback_integral(phi, lambda w: 1 / (1 - np.abs(w) ** 2) ** 4, grid)


def monte_carlo_integral(
    phi: SymbolMap,
    g: Callable[[np.ndarray], np.ndarray],
    samples: int = 1 << 20,
    strata: int = 256,
    seed: int = MC_SEED,
) -> tuple[float, float]:
    """Stratified-in-radius Monte Carlo estimate of ``int g dmu``; returns ``(value, stderr)``.

    Stratum ``i`` covers ``r**2`` in ``[i/strata, (i+1)/strata)``, so each
    carries equal area mass.
    """
    rng = np.random.default_rng(seed)
    per = max(samples // strata, 2)
    means = np.empty(strata)
    variances = np.empty(strata)
    for i in range(strata):
        u = (i + rng.random(per)) / strata
        z = np.sqrt(u) * np.exp(2j * np.pi * rng.random(per))
        v = np.real(g(phi(z)) * np.abs(phi.deriv(z)) ** 2)
        means[i] = v.mean()
        variances[i] = v.var(ddof=1) / per
    return float(means.mean()), float(math.sqrt(variances.sum()) / strata)


# --------------------------------------------------------------------------
# Model regions
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ModelRegion:
    """Region whose boundary near 1 follows ``x**(1/p) + y**(1/p) = 1``."""

    p: int

    def __post_init__(self):
        if self.p not in (2, 3, 4):
            raise ValueError("model region exponent p must be 2, 3 or 4")

    def profile(self, t):
        """``(1 - x**(1/p))**p`` at ``x = 1 - t``, computed without cancellation."""
        t = np.asarray(t, dtype=float)
        return (-np.expm1(np.log1p(-t) / self.p)) ** self.p


def _closed_form_ratio(p: int, h: float) -> float:
    with mp.workdps(50):
        h = mp.mpf(h)
        s = 1 - h
        if p == 2:
            num = 2 * h - h**2 / 2 + mp.mpf(4) / 3 * s ** mp.mpf(1.5) - mp.mpf(4) / 3
        else:
            num = (
                h**2 / 2
                + mp.mpf(9) / 4 * s ** (mp.mpf(4) / 3)
                - mp.mpf(9) / 5 * s ** (mp.mpf(5) / 3)
                - mp.mpf(9) / 20
            )
        return num / h**4


def model_integral(p: int, h: float) -> float:
    """``int_{1-h}^1 (1 - x**(1/p))**p dx`` by adaptive quadrature."""
    r = ModelRegion(p)
    val, _ = integrate.quad(r.profile, 0.0, h, epsabs=0.0, epsrel=1e-13, limit=200)
    return val


def model_ratio(region: ModelRegion | int, h: float) -> float:
    """``int_{1-h}^1 (1 - x**(1/p))**p dx / h**4``.

    ``p = 2, 3`` use the antiderivatives in closed form, evaluated at 50
    digits so the ``O(1)`` terms cancel cleanly for small ``h``; ``p = 4``
    is integrated numerically.
    """
    p = region.p if isinstance(region, ModelRegion) else ModelRegion(region).p
    if not 0 < h <= 1:
        raise ValueError("h must lie in (0, 1]")
    if p in (2, 3):
        return float(_closed_form_ratio(p, h))
    return model_integral(p, h) / h**4
