"""Partial Bell polynomials, Faa di Bruno derivatives, and the eigenfunction recursion.

``bell`` enumerates every integer sequence ``c_1..c_{n-k+1}`` with
``sum c_j = k`` and ``sum j c_j = n``. The combinatorial weight
``n! / prod(c_j! (j!)**c_j)`` is an exact integer, so integer (or symbolic)
inputs give exact results.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .exceptions import SymbolError
from .series import Monomial, PowerSeries, SymbolMap


@dataclass(frozen=True)
class PartitionSequence:
    n: int
    k: int
    c: tuple

    def __post_init__(self):
        if sum(self.c) != self.k or sum(j * cj for j, cj in enumerate(self.c, 1)) != self.n:
            raise ValueError(f"{self.c} does not satisfy the (n={self.n}, k={self.k}) constraints")

    @property
    def weight(self) -> int:
        return _weight(self.n, self.c)


@lru_cache(maxsize=None)
def _fact(n: int) -> int:
    return math.factorial(n)


def _weight(n: int, c: Sequence[int]) -> int:
    den = 1
    for j, cj in enumerate(c, 1):
        den *= _fact(cj) * _fact(j) ** cj
    return _fact(n) // den


def partition_sequences(n: int, k: int, support: Sequence[bool] | None = None) -> Iterator[tuple]:
    """Yield all ``c`` of length ``n-k+1`` with ``sum c = k`` and ``sum j c_j = n``.

    ``support[j-1] = False`` forces ``c_j = 0``; used to skip parts whose
    argument is zero.
    """
    L = n - k + 1
    c = [0] * L
    if support is None:
        support = [True] * L

    def rec(j: int, parts: int, total: int):
        # fill c_j for j = L..1 from the largest part down
        if j == 0:
            if parts == 0 and total == 0:
                yield tuple(c)
            return
        # the remaining parts all have size <= j, so total <= parts * j
        if total > parts * j or total < parts:
            return
        cap = min(parts, total // j) if support[j - 1] else 0
        for cj in range(cap, -1, -1):
            c[j - 1] = cj
            yield from rec(j - 1, parts - cj, total - cj * j)
        c[j - 1] = 0

    if 1 <= k <= n:
        yield from rec(L, k, n)


def bell(n: int, k: int, xs: Sequence):
    """Partial exponential Bell polynomial ``B_{n,k}(x_1, ..., x_{n-k+1})``.

    Works for ints, floats, complex numbers and any type supporting
    ``+``, ``*`` and ``**`` (e.g. sympy symbols).
    """
    if not 1 <= k <= n:
        raise ValueError("bell needs 1 <= k <= n")
    if len(xs) != n - k + 1:
        raise ValueError(f"bell({n}, {k}) needs {n - k + 1} arguments, got {len(xs)}")
    support = [not _is_zero(x) for x in xs]
    total = 0
    for c in partition_sequences(n, k, support):
        term = _weight(n, c)
        for x, cj in zip(xs, c):
            if cj:
                term = term * x**cj
        total = total + term
    return total


def _is_zero(x) -> bool:
    try:
        return bool(x == 0)
    except TypeError:
        return False


def symbol_derivatives(phi: SymbolMap, n: int) -> list:
    """``[phi(0), phi'(0), ..., phi^(n)(0)]``; exact products for monomial symbols."""
    if isinstance(phi, Monomial):
        out = [0] * (n + 1)
        if phi.M <= n:
            out[phi.M] = _fact(phi.M) * phi.a
        return out
    t = phi.taylor(n).coeffs
    return [_fact(j) * complex(t[j]) for j in range(n + 1)]


def faa_di_bruno(f: PowerSeries, phi: SymbolMap, n: int) -> complex:
    """``d^n/dz^n [f'(phi(z))]`` at ``z = 0`` for a symbol with ``phi(0) = 0``."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    if f.N < n + 1:
        raise ValueError("f must be truncated at order >= n + 1")
    if abs(phi.at_zero) != 0:
        raise SymbolError("faa_di_bruno assumes phi(0) = 0")
    dphi = symbol_derivatives(phi, n)
    total = 0j
    for k in range(1, n + 1):
        # f^(k+1)(0) = (k+1)! * a_{k+1}
        fk = _fact(k + 1) * complex(f.coeffs[k + 1])
        if fk != 0:
            total += fk * bell(n, k, dphi[1 : n - k + 2])
    return total


@dataclass(frozen=True)
class CoefficientTrace:
    """Values ``f^(n)(0)``, ``n = 0..N``, forced on an eigenfunction with eigenvalue ``lam``."""

    lam: complex
    M: int
    a: complex
    values: tuple
    seed: str

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def taylor(self) -> PowerSeries:
        return PowerSeries([v / _fact(n) for n, v in enumerate(self.values)])


def coefficient_recursion(
    lam: complex, a: complex, M: int, N: int = 40, seed: complex | None = None
) -> CoefficientTrace:
    """Derivatives at 0 of an eigenfunction of ``f -> f' o (a z^M)`` with eigenvalue ``lam``.

    Starts from ``f(0) = f'(0) = 0`` and solves, for ``n = 2..N``,

        f^(n)(0) = (1/lam) sum_{k=1}^{n-1} f^(k+1)(0) B_{n,k}(0, phi''(0), ..., phi^(n-k+1)(0))

    for ``f^(n)(0)``; the ``k = n-1`` term carries ``f^(n)(0)`` itself. When
    its coefficient ``1 - B_{n,n-1}/lam`` vanishes (only ``M = 2``,
    ``lam = 2a``, ``n = 2``) the value is free and ``seed`` fixes it
    (default 2, giving ``f = z**2``).
    """
    if lam == 0:
        raise ValueError("eigenvalue must be non-zero")
    if M < 2:
        raise ValueError("recursion applies to M >= 2")
    phi = Monomial(a, M)
    dphi = symbol_derivatives(phi, N)
    dphi[1] = 0
    vals: list = [0, 0]
    seed_note = "none"
    for n in range(2, N + 1):
        rhs = 0
        for k in range(1, n - 1):
            if vals[k + 1] != 0:
                rhs = rhs + vals[k + 1] * bell(n, k, dphi[1 : n - k + 2])
        diag_bell = bell(n, n - 1, dphi[1:3])
        pivot = 1 - diag_bell / lam
        if pivot == 0 or cmath.isclose(diag_bell, lam, rel_tol=1e-12):
            if rhs != 0:
                raise ArithmeticError(f"inconsistent recursion at n={n}")
            value = 2 if seed is None else seed
            seed_note = f"f^({n})(0) = {value}"
        else:
            value = (rhs / lam) / pivot
        vals.append(value)
    # f(0) = f'(0) / lam with f'(0) = 0
    vals[0] = vals[1] / lam
    return CoefficientTrace(lam, M, a, tuple(vals), seed_note)
