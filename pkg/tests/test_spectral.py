import math

import numpy as np
import pytest

from compdiff.exceptions import ConvergenceError, NoClosedFormError
from compdiff.operators import build_Dphi, identity
from compdiff.series import LinearFractional, Monomial, Polynomial
from compdiff.space import DIRICHLET
from compdiff.spectral import (
    closed_form_norm,
    closed_form_spectrum,
    hilbert_schmidt_norm,
    matrix_norm,
    matrix_spectrum,
    norm_curve,
)


def brute_norm(a, M, nmax=500):
    n = np.arange(2, nmax + 1)
    vals = np.sqrt(M * n * (n - 1.0)) * abs(a) ** (n - 1.0)
    return max(1.0, float(vals.max())), int(n[np.argmax(vals)])


def test_closed_form_examples():
    r = closed_form_norm(0.5, 2)
    assert (r.nu, r.closed_form) == (2, 1.0)
    r = closed_form_norm(6 ** -0.25, 1)
    assert r.nu == 3 and r.closed_form == pytest.approx(1.0, abs=1e-15)
    r = closed_form_norm(0.9, 1)
    assert r.nu == 10
    assert r.closed_form == pytest.approx(math.sqrt(90) * 0.9**9, rel=1e-15)
    assert r.closed_form == pytest.approx(3.6754, abs=5e-5)


@pytest.mark.parametrize("M", [1, 2, 3, 5])
@pytest.mark.parametrize("a", [0.05, 0.3, 0.55, 0.7, 0.85, 0.9, 0.95, 0.97 + 0.1j])
def test_closed_form_matches_brute_force(a, M):
    r = closed_form_norm(a, M)
    value, argmax = brute_norm(a, M)
    assert r.closed_form == pytest.approx(value, rel=1e-13)
    if r.nu >= 2 and not r.tie:
        assert argmax == r.nu


def test_tie_flag_at_breakpoint():
    # 2/(1 - 0.5^2) = 8/3 is not an integer, 2/(1 - 0.75) = 8 is
    assert not closed_form_norm(0.5, 1).tie
    r = closed_form_norm(math.sqrt(0.75), 1)
    # sqrt(0.75)**2 is not exactly 0.75 in binary
    assert r.nu in (7, 8)
    r = closed_form_norm(0.5**0.5, 2)
    assert r.nu == 4 and r.tie == (abs(0.5**0.5) ** 2 == 0.5)


def test_closed_form_rejects_bad_input():
    for a in (0, 1, 1.2):
        with pytest.raises(ValueError):
            closed_form_norm(a, 1)
    with pytest.raises(ValueError):
        closed_form_norm(0.5, 0)


def test_matrix_norm_examples():
    assert matrix_norm(identity(DIRICHLET, 10)) == pytest.approx(1.0, abs=1e-12)
    assert matrix_norm(np.zeros((4, 4))) == 0.0
    est = matrix_norm(build_Dphi(Monomial(0.9, 1), DIRICHLET, 256))
    assert abs(est - closed_form_norm(0.9, 1).closed_form) <= 1e-9


def test_matrix_norm_against_svd():
    rng = np.random.default_rng(5)
    for _ in range(5):
        A = rng.normal(size=(30, 30)) + 1j * rng.normal(size=(30, 30))
        s = np.linalg.svd(A, compute_uv=False)[0]
        assert matrix_norm(A) == pytest.approx(s, rel=1e-10)


def test_matrix_norm_nonconvergence_raises():
    # one step cannot certify a random start vector
    A = np.diag([1.0, 0.999, 0.5])
    with pytest.raises(ConvergenceError):
        matrix_norm(A, max_iter=1)


def test_norm_curve_examples():
    assert norm_curve(2, [0.5])[0][2] == 1.0
    # the float nearest 1/sqrt(6) lies just past the breakpoint
    assert norm_curve(3, [1 / math.sqrt(6)])[0][2] == pytest.approx(1.0, abs=3e-16)
    assert not closed_form_norm(1 / math.sqrt(6), 3).flat
    assert closed_form_norm(1 / math.sqrt(6) - 1e-15, 3).flat
    for M in (1, 2, 3):
        thr = 6 ** -0.25 if M == 1 else 1 / math.sqrt(2 * M)
        grid = np.linspace(0.01, thr, 50)[:-1]
        assert all(row[2] == 1.0 for row in norm_curve(M, grid))


def test_norm_curve_nondecreasing():
    grid = np.linspace(0.01, 0.98, 400)
    for M in (1, 2, 3):
        vals = [r[2] for r in norm_curve(M, grid)]
        assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_norm_curve_rejects_out_of_range():
    with pytest.raises(ValueError):
        norm_curve(1, [0.5, 1.0])


def test_closed_form_spectrum_examples():
    assert closed_form_spectrum(Monomial(0.3, 2)).predicted == {0j, 0.6 + 0j}
    assert closed_form_spectrum(Monomial(0.5, 3)).predicted == {0j}
    assert closed_form_spectrum(LinearFractional(0.3, 0.2, 0, 1)).predicted == {0j}


@pytest.mark.parametrize("phi", [LinearFractional(0.1, 0.3, 0.2, 1), Polynomial((0, 0.3, 0.2))])
def test_closed_form_spectrum_unsupported(phi):
    with pytest.raises(NoClosedFormError):
        closed_form_spectrum(phi)


def test_matrix_spectrum_m2():
    r = matrix_spectrum(build_Dphi(Monomial(0.3, 2), DIRICHLET, 64), tol=1e-10)
    assert len(r.nonzero) == 1
    assert abs(r.nonzero[0] - 0.6) <= 1e-10
    assert np.sort(np.abs(r.raw))[-2] <= 1e-10


def test_matrix_spectrum_m3_nilpotent():
    r = matrix_spectrum(build_Dphi(Monomial(0.5, 3), DIRICHLET, 64), tol=1e-10)
    assert r.nonzero == []
    assert np.max(np.abs(r.raw)) <= 1e-10


def test_matrix_spectrum_affine():
    for N in (32, 64, 128):
        r = matrix_spectrum(build_Dphi(LinearFractional(0.3, 0.2, 0, 1), DIRICHLET, N), tol=1e-10)
        assert r.nonzero == []


def test_default_tolerance_is_relative():
    m = build_Dphi(Monomial(0.3, 2), DIRICHLET, 32)
    r = matrix_spectrum(m)
    assert r.tol == pytest.approx(1e-8 * matrix_norm(m))


def test_nonzero_eigenvalues_stable_in_N():
    for a in (0.3, 0.45 - 0.2j, 0.7):
        e64 = matrix_spectrum(build_Dphi(Monomial(a, 2), DIRICHLET, 64), tol=1e-10).nonzero
        e128 = matrix_spectrum(build_Dphi(Monomial(a, 2), DIRICHLET, 128), tol=1e-10).nonzero
        assert len(e64) == len(e128) == 1
        assert abs(e64[0] - e128[0]) <= 1e-10


@pytest.mark.parametrize("a, M", [(0.5, 1), (0.3, 1), (0.7, 2), (0.4 + 0.3j, 3)])
def test_hilbert_schmidt_closed_form(a, M):
    x = abs(a) ** 2
    r = hilbert_schmidt_norm(Monomial(a, M), DIRICHLET, 512)
    assert r.value**2 == pytest.approx(1 + 2 * M * x / (1 - x) ** 3, rel=1e-10)
    assert np.all(np.diff(r.partial_sums) >= 0)


def test_hilbert_schmidt_example_value():
    assert hilbert_schmidt_norm(Monomial(0.5, 1), DIRICHLET, 256).value == pytest.approx(1.47823, abs=1e-5)


def test_hilbert_schmidt_tail_shrinks():
    phi = Monomial(0.8, 1)
    tails = [hilbert_schmidt_norm(phi, DIRICHLET, N).tail_estimate for N in (64, 128, 256)]
    assert tails[0] > tails[1] > tails[2]
