"""Truncated power series and analytic self-maps of the unit disk.

A :class:`PowerSeries` stores the Taylor coefficients ``c[0..N]`` of a
function about the origin. Every symbol map can produce its own Taylor
expansion, so all downstream code (operator matrices, kernels, the
Faa di Bruno recursion) works with coefficient arrays only.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exceptions import SymbolError, TruncationError

DEFAULT_N = 256
BOUNDARY_GRID = 4096


@dataclass(frozen=True, eq=False)
class PowerSeries:
    """Taylor coefficients ``coeffs[n]`` of ``z**n``, truncated at order ``len - 1``."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            raise TruncationError("a power series needs at least one coefficient")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[complex], N: int | None = None) -> PowerSeries:
        """Build a series, zero-padding or cutting ``coeffs`` to order ``N``."""
        c = np.asarray(coeffs, dtype=complex).ravel()
        if N is None:
            return cls(c)
        out = np.zeros(N + 1, dtype=complex)
        k = min(N + 1, c.size)
        out[:k] = c[:k]
        return cls(out)

    @classmethod
    def monomial(cls, n: int, N: int, coeff: complex = 1.0) -> PowerSeries:
        out = np.zeros(N + 1, dtype=complex)
        if n <= N:
            out[n] = coeff
        return cls(out)

    @property
    def truncation_order(self) -> int:
        return self.coeffs.size - 1

    N = truncation_order

    def __len__(self):
        return self.coeffs.size

    def __getitem__(self, n):
        return self.coeffs[n]

    def __call__(self, z):
        return eval_series(self, z)

    def __add__(self, other: PowerSeries) -> PowerSeries:
        n = min(self.N, other.N) + 1
        return PowerSeries(self.coeffs[:n] + other.coeffs[:n])

    def __sub__(self, other: PowerSeries) -> PowerSeries:
        n = min(self.N, other.N) + 1
        return PowerSeries(self.coeffs[:n] - other.coeffs[:n])

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            return multiply(self, other)
        return PowerSeries(self.coeffs * other)

    __rmul__ = __mul__

    def truncate(self, N: int) -> PowerSeries:
        return PowerSeries.from_coeffs(self.coeffs, N)

    def allclose(self, other: PowerSeries, atol: float = 1e-12) -> bool:
        n = min(self.N, other.N) + 1
        return bool(np.allclose(self.coeffs[:n], other.coeffs[:n], rtol=0, atol=atol))

    def __repr__(self):
        head = ", ".join(f"{c:.6g}" for c in self.coeffs[:6])
        tail = ", ..." if self.coeffs.size > 6 else ""
        return f"PowerSeries(N={self.N}, [{head}{tail}])"


def eval_series(s: PowerSeries, z):
    """Horner evaluation of the truncated polynomial at ``z`` (scalar or array)."""
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for c in s.coeffs[::-1]:
        acc = acc * z + c
    return acc[()] if acc.ndim == 0 else acc


def derivative(s: PowerSeries) -> PowerSeries:
    if s.N < 1:
        raise TruncationError("derivative needs truncation order >= 1")
    n = np.arange(1, s.N + 1)
    return PowerSeries(n * s.coeffs[1:])


def multiply(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    """Cauchy product truncated at ``min(f.N, g.N)``."""
    N = min(f.N, g.N)
    return PowerSeries(np.convolve(f.coeffs[: N + 1], g.coeffs[: N + 1])[: N + 1])


def powers(s: PowerSeries, kmax: int, N: int | None = None) -> np.ndarray:
    """Rows ``k = 0..kmax`` hold the coefficients of ``s**k`` truncated at ``N``."""
    N = s.N if N is None else N
    base = PowerSeries.from_coeffs(s.coeffs, N).coeffs
    out = np.zeros((kmax + 1, N + 1), dtype=complex)
    out[0, 0] = 1.0
    for k in range(1, kmax + 1):
        out[k] = np.convolve(out[k - 1], base)[: N + 1]
    return out


# --------------------------------------------------------------------------
# Symbol maps
# --------------------------------------------------------------------------


def _boundary(n: int = BOUNDARY_GRID) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(n) / n)


@dataclass(frozen=True)
class SymbolMap:
    """Analytic self-map of the disk.

    ``declared_sup_bound`` is a user assertion about ``sup |phi|``; the
    effective bound :attr:`sup_bound` is the larger of it and the value
    measured on a boundary grid.
    """

    declared_sup_bound: float | None = field(default=None, kw_only=True)

    def __post_init__(self):
        if self.declared_sup_bound is not None and not 0 < self.declared_sup_bound <= 1:
            raise SymbolError("declared_sup_bound must lie in (0, 1]")
        self._validate()
        grid = self.grid_sup()
        if grid > 1 + 1e-12:
            raise SymbolError(f"map does not send the disk into itself (boundary sup {grid:.6g})")

    def _validate(self):
        pass

    def __call__(self, z):
        raise NotImplementedError

    def deriv(self, z):
        raise NotImplementedError

    def taylor(self, N: int) -> PowerSeries:
        raise NotImplementedError

    def grid_sup(self, n: int = BOUNDARY_GRID) -> float:
        return float(np.max(np.abs(self(_boundary(n)))))

    @property
    def sup_bound(self) -> float:
        grid = self.grid_sup()
        if self.declared_sup_bound is None:
            return grid
        return max(grid, self.declared_sup_bound)

    @property
    def at_zero(self) -> complex:
        return complex(self(0.0))

    def describe(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Monomial(SymbolMap):
    """``phi(z) = a z**M`` with ``0 < |a| < 1``."""

    a: complex = 0.5
    M: int = 1

    def _validate(self):
        if not 0 < abs(self.a) < 1:
            raise SymbolError("monomial symbol needs 0 < |a| < 1")
        if int(self.M) != self.M or self.M < 1:
            raise SymbolError("monomial exponent M must be a positive integer")

    def __call__(self, z):
        return self.a * np.asarray(z, dtype=complex) ** self.M

    def deriv(self, z):
        return self.M * self.a * np.asarray(z, dtype=complex) ** (self.M - 1)

    def taylor(self, N: int) -> PowerSeries:
        return PowerSeries.monomial(self.M, N, self.a)

    def grid_sup(self, n: int = BOUNDARY_GRID) -> float:
        return abs(self.a)

    def describe(self) -> str:
        return f"{_fmt(self.a)}z^{self.M}"


@dataclass(frozen=True)
class LinearFractional(SymbolMap):
    """``phi(z) = (a z + b) / (c z + d)``."""

    a: complex = 1.0
    b: complex = 0.0
    c: complex = 0.0
    d: complex = 1.0

    def _validate(self):
        if self.d == 0 or abs(self.c) >= abs(self.d):
            raise SymbolError("degenerate linear-fractional map: need |c| < |d|")
        if self.a * self.d - self.b * self.c == 0:
            raise SymbolError("linear-fractional map is constant")
        if np.min(np.abs(self.c * _boundary() + self.d)) <= 0:
            raise SymbolError("denominator vanishes on the closed disk")

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return (self.a * z + self.b) / (self.c * z + self.d)

    def deriv(self, z):
        z = np.asarray(z, dtype=complex)
        return (self.a * self.d - self.b * self.c) / (self.c * z + self.d) ** 2

    def taylor(self, N: int) -> PowerSeries:
        # 1/(cz+d) = (1/d) * sum (-c z / d)^n
        geo = (1 / self.d) * (-self.c / self.d) ** np.arange(N + 1)
        out = (self.b * geo).astype(complex)
        out[1:] += self.a * geo[:-1]
        return PowerSeries(out)

    @property
    def is_affine(self) -> bool:
        return self.c == 0

    def companion_map(self) -> LinearFractional:
        """``sigma(z) = (conj(a) z - conj(c)) / (-conj(b) z + conj(d))``."""
        conj = np.conj
        return LinearFractional(
            complex(conj(self.a)), complex(-conj(self.c)),
            complex(-conj(self.b)), complex(conj(self.d)),
        )

    def describe(self) -> str:
        return "(" + ",".join(_fmt(v) for v in (self.a, self.b, self.c, self.d)) + ")"


@dataclass(frozen=True)
class Polynomial(SymbolMap):
    """``phi(z) = sum coeffs[n] z**n``."""

    coeffs: tuple = (0.0, 0.5)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))
        super().__post_init__()

    def _validate(self):
        if len(self.coeffs) < 2 or all(c == 0 for c in self.coeffs[1:]):
            raise SymbolError("polynomial symbol must be non-constant")

    def __call__(self, z):
        return eval_series(PowerSeries(self.coeffs), z)

    def deriv(self, z):
        return eval_series(derivative(PowerSeries(self.coeffs)), z)

    def taylor(self, N: int) -> PowerSeries:
        return PowerSeries.from_coeffs(self.coeffs, N)

    def describe(self) -> str:
        return "poly:" + ",".join(_fmt(c) for c in self.coeffs)


def _fmt(v: complex) -> str:
    v = complex(v) + 0.0  # drops negative zeros
    if v.imag == 0:
        return repr(v.real)
    return repr(v).strip("()")


def symbol_taylor(phi: SymbolMap, N: int = DEFAULT_N) -> PowerSeries:
    return phi.taylor(N)


def compose(f: PowerSeries, phi: SymbolMap, N: int = DEFAULT_N) -> PowerSeries:
    """Taylor coefficients of ``f o phi`` up to order ``N``.

    Only the coefficients are truncated; each one is exact for the
    polynomial ``f``. Evaluating the result at ``|z| <= r < 1`` differs
    from ``f(phi(z))`` by at most :func:`compose_tail_bound`.
    """
    rho = phi.sup_bound
    if rho >= 1:
        raise TruncationError(
            "norm/compactness criteria unavailable at truncation: sup |phi| >= 1"
        )
    P = powers(phi.taylor(N), f.N, N)
    return PowerSeries(f.coeffs @ P)


def compose_tail_bound(f: PowerSeries, phi: SymbolMap, N: int, r: float) -> float:
    """Bound on ``|compose(f, phi, N)(z) - f(phi(z))|`` for ``|z| <= r``.

    Cauchy estimates on the unit circle give ``|[phi**k]_m| <= rho**k`` for
    every ``m``; summing the discarded tail ``m > N`` yields
    ``sum_k |f_k| rho**k * r**(N+1) / (1 - r)``.
    """
    rho = phi.sup_bound
    mass = float(np.sum(np.abs(f.coeffs) * rho ** np.arange(f.N + 1)))
    return mass * r ** (N + 1) / (1 - r)


_NUM = r"(?:\([^()]*\)|[0-9.eE+\-j]+)"
_MONO = re.compile(
    rf"^\s*(?P<a>{_NUM})?\s*\*?\s*z(?:\s*\^\s*(?P<M>\d+))?\s*(?P<b>[+-]\s*{_NUM})?\s*$"
)


def parse_symbol(text: str, declared_sup_bound: float | None = None) -> SymbolMap:
    """Parse ``"a z^M"``, ``"a z + b"``, ``"(a,b,c,d)"`` or ``"poly:c0,c1,..."``.

    >>> parse_symbol("0.3z^2")
    Monomial(declared_sup_bound=None, a=0.3, M=2)
    """
    s = text.strip()
    kw = {"declared_sup_bound": declared_sup_bound}
    if s.startswith("poly:"):
        return Polynomial(tuple(_complex(t) for t in s[5:].split(",")), **kw)
    if s.startswith("(") and s.endswith(")") and s.count(",") == 3:
        vals = [_complex(t) for t in s[1:-1].split(",")]
        return LinearFractional(*vals, **kw)
    m = _MONO.match(s.replace(" ", ""))
    if not m:
        raise SymbolError(f"cannot parse symbol {text!r}")
    a = _complex(m["a"]) if m["a"] else 1.0
    M = int(m["M"]) if m["M"] else 1
    if m["b"] is None:
        return Monomial(_real_if_possible(a), M, **kw)
    sign, rest = m["b"][0], m["b"][1:]
    b = _complex(rest) * (-1 if sign == "-" else 1)
    if M == 1:
        return LinearFractional(a, b, 0.0, 1.0, **kw)
    coeffs = [0j] * (M + 1)
    coeffs[0], coeffs[M] = b, a
    return Polynomial(tuple(coeffs), **kw)


def _complex(tok: str) -> complex:
    tok = tok.strip()
    if tok.startswith("(") and tok.endswith(")"):
        tok = tok[1:-1]
    try:
        return complex(tok.replace(" ", ""))
    except ValueError as exc:
        raise SymbolError(f"bad number {tok!r}") from exc


def _real_if_possible(v: complex):
    return v.real if v.imag == 0 else v
