"""Command-line front end: every computation emits a CSV or JSON report.

Reports embed the run configuration and package version; identical
invocations produce byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from typing import Any

import click
import numpy as np

from . import __version__
from .adjoint import companion, verify_identity, verify_on_kernels
from .exceptions import CompdiffError, NoClosedFormError, SymbolError
from .faadibruno import bell
from .measure import (
    DEFAULT_HS,
    CarlesonWindow,
    ModelRegion,
    carleson_table,
    hs_integral,
    model_ratio,
)
from .operators import build_Dphi
from .series import DEFAULT_N, LinearFractional, Monomial, SymbolMap, parse_symbol
from .spectral import (
    SEED,
    closed_form_norm,
    closed_form_spectrum,
    hilbert_schmidt_norm,
    matrix_norm,
    matrix_spectrum,
)
from .space import DIRICHLET


@dataclass
class RunConfig:
    command: str
    symbol: str | None = None
    N: int | None = None
    grid: list | None = None
    format: str = "json"
    out: str | None = None
    params: dict = field(default_factory=dict)


# --------------------------------------------------------------------------
# Output
# --------------------------------------------------------------------------


def _num(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    s = format(x, ".17g")
    return s if any(ch in s for ch in ".en") else s + ".0"


def to_json(obj: Any, indent: int = 0) -> str:
    """JSON with 17-significant-digit floats; complex numbers become ``[re, im]``."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if obj is None or isinstance(obj, bool):
        return {None: "null", True: "true", False: "false"}[obj]
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return f"[{_num(obj.real)}, {_num(obj.imag)}]"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{to_json(str(k))}: {to_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [f"{inner}{to_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return _num(float(v)) if math.isfinite(v) else "nan"
    if isinstance(v, complex):
        return f"{_num(v.real)}{'+' if v.imag >= 0 else '-'}{_num(abs(v.imag))}j"
    return str(v)


def emit(cfg: RunConfig, result: dict, header: list[str] | None = None, rows: list | None = None):
    """Write ``result`` as JSON, or ``rows`` as CSV with provenance comment lines."""
    provenance = {"artifact": "compdiff", "version": __version__, "config": asdict(cfg)}
    if cfg.format == "json":
        payload = dict(provenance)
        payload["result"] = result
        if rows is not None:
            payload["result"] = dict(result, table={"columns": header, "rows": rows})
        text = to_json(payload) + "\n"
    else:
        buf = io.StringIO()
        buf.write(f"# compdiff {__version__}\n")
        buf.write("# config: " + to_json(asdict(cfg)).replace("\n", " ") + "\n")
        for k, v in result.items():
            buf.write(f"# {k}: " + to_json(v).replace("\n", " ") + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header or [])
        for r in rows or []:
            w.writerow([_cell(v) for v in r])
        text = buf.getvalue()
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


# --------------------------------------------------------------------------
# Option helpers
# --------------------------------------------------------------------------


def _symbol(symbol: str | None, a: float | None, M: int | None) -> SymbolMap:
    try:
        if symbol:
            return parse_symbol(symbol)
        if a is None:
            raise click.UsageError("give --symbol or --a (with optional --M)")
        return Monomial(a, M or 1)
    except SymbolError as exc:
        raise click.BadParameter(str(exc), param_hint="--symbol") from exc


def _seed(text: str | None) -> int:
    if text is None:
        return SEED
    try:
        return int(text, 16)
    except ValueError as exc:
        raise click.BadParameter("seed must be hexadecimal", param_hint="--seed") from exc


fmt_option = click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="json", show_default=True)
out_option = click.option("--out", type=click.Path(dir_okay=False), default=None, help="Output file (default stdout).")
N_option = click.option("--N", "N", type=click.IntRange(min=2), default=DEFAULT_N, show_default=True)
seed_option = click.option("--seed", default=None, help="Hex seed for randomised starts.")


class _Group(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except (CompdiffError, FloatingPointError, np.linalg.LinAlgError) as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(1)


@click.group(cls=_Group)
@click.version_option(__version__)
def main():
    """Composition-differentiation operators on the Dirichlet space."""


@main.command("norm-curve")
@click.option("--M", "M", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--a-min", type=float, default=0.01, show_default=True)
@click.option("--a-max", type=float, default=0.95, show_default=True)
@click.option("--steps", type=click.IntRange(min=1), default=200, show_default=True)
@click.option("--with-matrix", is_flag=True, help="Add truncated-matrix norms on a reduced grid.")
@N_option
@fmt_option
@out_option
@seed_option
def cmd_norm_curve(M, a_min, a_max, steps, with_matrix, N, fmt, out, seed):
    """Closed-form norm of D_phi for phi = a z^M as a function of |a|."""
    if not (0 < a_min < 1 and 0 < a_max < 1) or (steps > 1 and not a_min < a_max):
        raise click.UsageError("need 0 < a_min < a_max < 1")
    grid = [a_min] if steps == 1 else np.linspace(a_min, a_max, steps).tolist()
    stride = max(1, steps // 20)
    rows = []
    for i, a in enumerate(grid):
        r = closed_form_norm(a, M)
        est = None
        if with_matrix and i % stride == 0:
            est = matrix_norm(build_Dphi(Monomial(a, M), DIRICHLET, N), seed=_seed(seed))
        rows.append([a, r.nu, r.closed_form, est])
    cfg = RunConfig("norm-curve", f"a z^{M}", N if with_matrix else None, None, fmt, out,
                    {"M": M, "a_min": a_min, "a_max": a_max, "steps": steps, "with_matrix": with_matrix})
    emit(cfg, {"rows": len(rows)}, ["abs_a", "nu", "norm_closed_form", "norm_matrix"], rows)


@main.command("spectrum")
@click.option("--symbol", default=None, help='e.g. "0.3z^2", "0.3z+0.2", "(a,b,c,d)", "poly:0,0.2,0.1".')
@click.option("--a", type=float, default=None)
@click.option("--M", "M", type=click.IntRange(min=1), default=None)
@click.option("--tol", type=float, default=None, help="Zero threshold (default 1e-8 * matrix norm).")
@N_option
@fmt_option
@out_option
@seed_option
def cmd_spectrum(symbol, a, M, tol, N, fmt, out, seed):
    """Predicted spectrum versus eigenvalues of the truncated matrix."""
    phi = _symbol(symbol, a, M)
    result: dict = {}
    try:
        predicted = sorted(closed_form_spectrum(phi).predicted, key=lambda v: (abs(v), v.real))
    except NoClosedFormError as exc:
        predicted = None
        result["warning"] = f"{exc}; matrix eigenvalues only"
    m = build_Dphi(phi, DIRICHLET, N)
    if tol is None:
        tol = 1e-8 * matrix_norm(m, seed=_seed(seed))
    spec = matrix_spectrum(m, tol)
    nonzero = spec.nonzero
    result.update(
        predicted=predicted,
        nonzero_eigenvalues=nonzero,
        zero_count=len(spec.eigenvalues) - len(nonzero),
        tol=tol,
    )
    zeros = [abs(v) for v in spec.raw if abs(v) < tol]
    result["max_raw_modulus_of_zeros"] = float(max(zeros, default=0.0))
    if predicted is not None:
        dev = 0.0
        for v in nonzero:
            dev = max(dev, min(abs(v - p) for p in predicted))
        for p in predicted:
            if p != 0:
                dev = max(dev, min((abs(v - p) for v in nonzero), default=abs(p)))
        result["max_deviation"] = dev
        result["matched"] = dev <= max(tol, 1e-10)
    cfg = RunConfig("spectrum", phi.describe(), N, None, fmt, out, {"tol": tol})
    rows = [[v.real, v.imag] for v in nonzero]
    if fmt == "csv":
        emit(cfg, result, ["re", "im"], rows)
    else:
        emit(cfg, result)


@main.command("carleson")
@click.option("--symbol", default=None)
@click.option("--a", type=float, default=None)
@click.option("--M", "M", type=click.IntRange(min=1), default=None)
@click.option("--model", "model", type=click.IntRange(2, 4), default=None, help="Model region exponent p.")
@click.option("--h", "hs", type=float, multiple=True, help="Window sizes (repeatable).")
@click.option("--thetas", type=click.IntRange(min=1), default=64, show_default=True)
@click.option("--radial", type=click.IntRange(min=2), default=2048, show_default=True)
@click.option("--angular", type=click.IntRange(min=2), default=4096, show_default=True)
@fmt_option
@out_option
def cmd_carleson(symbol, a, M, model, hs, thetas, radial, angular, fmt, out):
    """Carleson ratios mu(S(theta,h))/h^4 for a symbol or a model region."""
    hs = list(hs) or list(DEFAULT_HS)
    for h in hs:
        if not 0 < h <= 1:
            raise click.BadParameter("window sizes must lie in (0, 1]", param_hint="--h")
    if model is not None:
        region = ModelRegion(model)
        rows = [[0.0, h, model_ratio(region, h)] for h in hs]
        cfg = RunConfig("carleson", None, None, None, fmt, out, {"model": model, "h": hs})
        emit(cfg, {"sup": max(r[2] for r in rows)}, ["theta", "h", "ratio"], rows)
        return
    phi = _symbol(symbol, a, M)
    th = (2 * np.pi * np.arange(thetas) / thetas).tolist()
    for h in hs:
        CarlesonWindow(0.0, h)
    table = carleson_table(phi, th, hs, (radial, angular))
    rows = [[t, h, table[i, j]] for i, t in enumerate(th) for j, h in enumerate(hs)]
    cfg = RunConfig("carleson", phi.describe(), None, [radial, angular], fmt, out, {"thetas": thetas, "h": hs})
    emit(cfg, {"sup": float(table.max())}, ["theta", "h", "ratio"], rows)


@main.command("hs")
@click.option("--symbol", default=None)
@click.option("--a", type=float, default=None)
@click.option("--M", "M", type=click.IntRange(min=1), default=None)
@click.option("--radial", type=click.IntRange(min=2), default=512, show_default=True)
@click.option("--angular", type=click.IntRange(min=2), default=1024, show_default=True)
@N_option
@fmt_option
@out_option
def cmd_hs(symbol, a, M, radial, angular, N, fmt, out):
    """Hilbert-Schmidt norm from basis images, with the area-integral cross-check."""
    phi = _symbol(symbol, a, M)
    hs = hilbert_schmidt_norm(phi, DIRICHLET, N)
    integral = hs_integral(phi, (radial, angular))
    I = float(integral)
    ratio = hs.seminorm_sq / I if I > 0 else math.inf
    result = {
        "hs_norm": hs.value,
        "hs_norm_sq": hs.value**2,
        "tail_estimate": hs.tail_estimate,
        "seminorm_sum": hs.seminorm_sq,
        "integral": I,
        "integral_error": integral.error,
        "seminorm_to_integral": ratio,
        "bounds": [2.0, 6.0],
        "within_bounds": bool(2.0 <= ratio <= 6.0),
    }
    cfg = RunConfig("hs", phi.describe(), N, [radial, angular], fmt, out)
    if fmt == "csv":
        emit(cfg, {}, list(result), [[result[k] if not isinstance(result[k], list) else "2;6" for k in result]])
    else:
        emit(cfg, result)


@main.command("adjoint")
@click.option("--symbol", required=True, help='Linear-fractional symbol, e.g. "0.3z+0.2" or "(0.1,0.3,0.2,1)".')
@N_option
@fmt_option
@out_option
def cmd_adjoint(symbol, N, fmt, out):
    """Residual of the adjoint identity on truncated matrices and on kernels."""
    phi = _symbol(symbol, None, None)
    if not isinstance(phi, LinearFractional):
        raise click.BadParameter("adjoint needs a linear-fractional symbol", param_hint="--symbol")
    pair = companion(phi)
    result = {
        "sigma": pair.sigma.describe(),
        "phi0": pair.phi0,
        "sigma0": pair.sigma0,
        "residual": verify_identity(phi, N),
        "residual_half_N": verify_identity(phi, max(N // 2, 2)),
        "kernel_residual": verify_on_kernels(phi, [0, 0.3, 0.5j], [0, 0.2, -0.3j, 0.4 + 0.1j, -0.5], N),
    }
    cfg = RunConfig("adjoint", phi.describe(), N, None, fmt, out)
    if fmt == "csv":
        emit(cfg, {}, ["N", "residual"], [[N, result["residual"]], [max(N // 2, 2), result["residual_half_N"]]])
    else:
        emit(cfg, result)


@main.command("bell")
@click.argument("n", type=click.IntRange(min=1))
@click.argument("k", type=click.IntRange(min=1))
@click.argument("xs")
@fmt_option
@out_option
def cmd_bell(n, k, xs, fmt, out):
    """Partial Bell polynomial B_{n,k}(x_1, ...); XS is comma separated and may be symbolic."""
    import sympy

    if k > n:
        raise click.BadParameter("need k <= n", param_hint="K")
    try:
        args = [sympy.sympify(t) for t in xs.split(",")]
    except sympy.SympifyError as exc:
        raise click.BadParameter(str(exc), param_hint="XS") from exc
    if len(args) != n - k + 1:
        raise click.BadParameter(f"need {n - k + 1} arguments", param_hint="XS")
    value = sympy.expand(bell(n, k, args))
    if value.is_number:
        v = complex(value)
        out_value: Any = int(value) if value.is_integer else (v.real if v.imag == 0 else v)
    else:
        out_value = str(value)
    cfg = RunConfig("bell", None, None, None, fmt, out, {"n": n, "k": k, "xs": xs})
    if fmt == "csv":
        emit(cfg, {}, ["n", "k", "value"], [[n, k, out_value]])
    else:
        emit(cfg, {"value": out_value})


if __name__ == "__main__":
    sys.exit(main())
