"""Command-line front end.

Usage:
    bdspectral classify --p 0.2 --p0 0.6 --r0 0.1
    bdspectral atlas --p 0.2 --grid 200 -o atlas.csv
    bdspectral transition --p 0.2 --p0 0.2 --r0 0.5 -i 0 -j 0 -n 2 --method both
    bdspectral qsd --p 0.2 --p0 0.2 --r0 0.5 --x 0.9
    bdspectral ratio-limit --p 0.2 --p0 0.6 --r0 0.1 -i 0 -j 0 -k 1 -l 1
    bdspectral verify --p 0.3 --p0 0.6 --r0 0.4

Every real is written with 17 significant digits, so the output re-parses
to the same float64 values and is byte-identical across runs.

Exit codes: 0 success, 1 verification failure, 2 invalid arguments,
3 output path not writable.
"""

from __future__ import annotations

import functools
import io
import math
import sys
from dataclasses import dataclass

import click

from .asymptotics import qsd_alpha, ratio_limit, ratio_limit_parity
from .chain import ChainParams, new_chain, oracle_transition
from .errors import ChainError
from .measure import classify_region, density_at, spectral_measure
from .quadrature import DEFAULT_NODES, VERIFY_NODES, build_rule, km_transition
from .verify import run_checks

__all__ = ["cli", "dumps", "fmt_real"]

EXIT_VERIFY = 1
EXIT_INVALID = 2
EXIT_UNWRITABLE = 3


def fmt_real(x: float) -> str:
    """Decimal text with 17 significant digits; non-finite values become null."""
    x = float(x)
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """Deterministic JSON with 17-digit reals."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt_real(obj)
    if isinstance(obj, str):
        return '"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if hasattr(obj, "item"):
        return dumps(obj.item(), indent, _level)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


@dataclass(frozen=True)
class CliConfig:
    command: str
    params: ChainParams | None
    nodes: int = DEFAULT_NODES
    output: str | None = None
    fmt: str = "json"


def _fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _emit(cfg: CliConfig, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if cfg.output is None or cfg.output == "-":
        click.echo(text, nl=False)
        return
    try:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        _fail(f"cannot write {cfg.output}: {exc.strerror or exc}", EXIT_UNWRITABLE)


def _csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        cells = []
        for v in row:
            if isinstance(v, bool):
                cells.append("true" if v else "false")
            elif isinstance(v, float):
                cells.append(fmt_real(v))
            else:
                cells.append(str(v))
        buf.write(",".join(cells) + "\n")
    return buf.getvalue()


def _params_doc(params: ChainParams) -> dict:
    return params.as_dict()


def chain_options(func):
    @click.option("--p", "p", type=float, required=True, help="Up probability away from 0.")
    @click.option("--p0", "p0", type=float, required=True, help="Up probability at state 0.")
    @click.option("--r0", "r0", type=float, required=True, help="Holding probability at state 0.")
    @functools.wraps(func)
    def wrapper(p, p0, r0, **kwargs):
        try:
            params = new_chain(p, p0, r0)
        except ChainError as exc:
            _fail(str(exc), EXIT_INVALID)
        return func(params=params, **kwargs)

    return wrapper


def output_option(func):
    return click.option("--output", "-o", "output", default=None,
                        help="Output file (default: standard output).")(func)


def guarded(func):
    """Turn library errors into exit code 2 with a one-line message."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except ChainError as exc:
            _fail(str(exc), EXIT_INVALID)

    return wrapper


@click.group()
@click.version_option(package_name="artifact")
def cli() -> None:
    """Spectral measure of a birth-and-death chain with constant p, q."""


@cli.command()
@chain_options
@output_option
@guarded
def classify(params: ChainParams, output: str | None) -> None:
    """Count and locate the point masses."""
    measure = spectral_measure(params)
    region = classify_region(params)
    doc = _params_doc(params)
    doc.update(
        mass_count=region.count,
        masses=[{"x": m.x, "w": m.w} for m in measure.masses],
        eta=measure.eta,
        recurrent=region.recurrent,
        positive_recurrent=region.positive_recurrent,
        boundary=region.boundary,
    )
    _emit(CliConfig("classify", params, output=output), dumps(doc))


@cli.command()
@click.option("--p", "p", type=float, required=True, help="Up probability away from 0.")
@click.option("--grid", type=int, default=200, show_default=True, help="Lattice points per axis.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@output_option
def atlas(p: float, grid: int, fmt: str, output: str | None) -> None:
    """Mass-point count over the (r0, p0) triangle for fixed p.

    Lattice values are r0 = i/(grid-1), p0 = j/(grid-1); cells with p0 = 0
    or r0 + p0 > 1 are skipped.
    """
    if grid < 2:
        _fail(f"grid must be >= 2, got {grid}", EXIT_INVALID)
    rows = []
    g = grid - 1
    try:
        for i in range(grid):
            for j in range(1, grid - i):
                region = classify_region(new_chain(p, j / g, i / g))
                rows.append((i / g, j / g, region.count, region.boundary))
    except ChainError as exc:
        _fail(str(exc), EXIT_INVALID)
    cfg = CliConfig("atlas", None, output=output, fmt=fmt)
    if fmt == "csv":
        _emit(cfg, _csv(["r0", "p0", "mass_count", "boundary"], rows))
    else:
        doc = [{"r0": r, "p0": q, "mass_count": n, "boundary": b} for r, q, n, b in rows]
        _emit(cfg, dumps({"p": float(p), "grid": grid, "cells": doc}))


@cli.command()
@chain_options
@click.option("--nodes", type=int, default=DEFAULT_NODES, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@output_option
@guarded
def measure(params: ChainParams, nodes: int, fmt: str, output: str | None) -> None:
    """Density at the quadrature nodes plus the point masses."""
    rule = build_rule(params, nodes)
    xs = [float(x) for x in rule.nodes]
    dens = [density_at(params, x) for x in xs]
    sm = spectral_measure(params)
    cfg = CliConfig("measure", params, nodes=nodes, output=output, fmt=fmt)
    if fmt == "csv":
        rows = [(x, d, "continuous") for x, d in zip(xs, dens)]
        rows += [(m.x, m.w, "atom") for m in sm.masses]
        _emit(cfg, _csv(["x", "value", "kind"], rows))
        return
    doc = _params_doc(params)
    doc.update(
        cut=sm.cut,
        nodes=xs,
        density=dens,
        masses=[{"x": m.x, "w": m.w} for m in sm.masses],
        eta=sm.eta,
    )
    _emit(cfg, dumps(doc))


@cli.command()
@chain_options
@click.option("-i", "i", type=int, required=True, help="Start state.")
@click.option("-j", "j", type=int, required=True, help="End state.")
@click.option("-n", "n", type=int, required=True, help="Number of steps.")
@click.option("--method", type=click.Choice(["spectral", "oracle", "both"]), default="both",
              show_default=True)
@click.option("--nodes", type=int, default=DEFAULT_NODES, show_default=True)
@output_option
@guarded
def transition(params: ChainParams, i: int, j: int, n: int, method: str, nodes: int,
               output: str | None) -> None:
    """n-step transition probability (P^n)_ij."""
    doc = {"spectral": None, "oracle": None, "abs_diff": None}
    if method in ("spectral", "both"):
        res = km_transition(params, i, j, n, nodes, with_oracle=method == "both")
        doc.update(spectral=res.spectral, oracle=res.oracle, abs_diff=res.abs_diff)
    else:
        doc["oracle"] = oracle_transition(params, i, j, n)
    _emit(CliConfig("transition", params, nodes=nodes, output=output), dumps(doc))


@cli.command()
@chain_options
@click.option("--x", "x", type=float, required=True, help="Family parameter in (eta, 1).")
@click.option("--tol", type=float, default=1e-12, show_default=True, help="Tail mass bound.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@output_option
@guarded
def qsd(params: ChainParams, x: float, tol: float, fmt: str, output: str | None) -> None:
    """Quasi-stationary distribution alpha(x)."""
    d = qsd_alpha(params, x, tol)
    cfg = CliConfig("qsd", params, output=output, fmt=fmt)
    if fmt == "csv":
        _emit(cfg, _csv(["j", "alpha"], [(k, float(a)) for k, a in enumerate(d.alpha)]))
        return
    doc = {
        "x": d.x,
        "alpha": [float(a) for a in d.alpha],
        "jcut": d.jcut,
        "tail_bound": d.tail_bound,
        "nonnegative": d.nonnegative,
    }
    _emit(cfg, dumps(doc))


@cli.command("ratio-limit")
@chain_options
@click.option("-i", "i", type=int, required=True)
@click.option("-j", "j", type=int, required=True)
@click.option("-k", "k", type=int, required=True)
@click.option("-l", "l", type=int, required=True)
@click.option("--parity", type=click.Choice(["even", "odd"]), default=None,
              help="Subsequence for the periodic case r0 = 0.")
@output_option
@guarded
def ratio_limit_cmd(params: ChainParams, i: int, j: int, k: int, l: int,
                    parity: str | None, output: str | None) -> None:
    """Limit of (P^n)_ij / (P^n)_kl as n grows."""
    if parity is None:
        res = ratio_limit(params, i, j, k, l)
    else:
        res = ratio_limit_parity(params, i, j, k, l, parity)
    doc = {"limit": res.limit, "mode": res.mode, "eta": res.eta_used}
    if res.caveat is not None:
        doc["caveat"] = res.caveat
    _emit(CliConfig("ratio-limit", params, output=output), dumps(doc))


@cli.command()
@chain_options
@click.option("--nodes", type=int, default=VERIFY_NODES, show_default=True)
@output_option
@guarded
def verify(params: ChainParams, nodes: int, output: str | None) -> None:
    """Run the invariant suite; exit 1 if any check fails."""
    checks = run_checks(params, nodes)
    all_pass = all(c.passed for c in checks)
    doc = {"checks": [c.as_dict() for c in checks], "all_pass": all_pass}
    _emit(CliConfig("verify", params, nodes=nodes, output=output), dumps(doc))
    if not all_pass:
        sys.exit(EXIT_VERIFY)


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
