"""Command-line front end: ``symspec <command> [options]``.

Commands: rep, symmetrize, kernel, cumulant, estimate, verify, synth.
Data goes to ``--output`` (or stdout), diagnostics to stderr. Exit status is
0 on success, 1 on a validation or usage error, 2 on an I/O error.
Any option may also come from ``--config file.json``; flags win over the file.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, fields
from typing import Any

from . import io as sio
from .cumulants import cumulant_grid
from .errors import SymspecError, ValidationError
from .expr import compile_expression
from .kernels import (
    flat_top_conical,
    flat_top_pyramidal,
    gabr_rao_lag_window,
    optimal_kernel,
    optimal_lag_window,
)
from .permgroup import enumerate_group, format_cycles
from .representation import Domain, domain_matrix, verify_representation
from .spectra import (
    FrequencyGrid,
    default_max_lag,
    kernel_convolution_estimate,
    lag_window_estimate,
    periodogram,
    spectral_symmetry_check,
)
from .symmetrize import Combiner, WindowFunction, check_symmetry, symmetrize
from .synth import SynthKind, SynthSpec, generate_synthetic

COMMANDS = ("rep", "symmetrize", "kernel", "cumulant", "estimate", "verify", "synth")


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    output: str | None = None
    order: int | None = None
    domain: str = "lag"
    format: str | None = None
    combiner: str = "mean"
    expression: str | None = None
    check: str | None = None
    kind: str | None = None
    beta: float | None = None
    c: float = 0.5
    grid: str | None = None
    M: float | None = None
    max_lag: int | None = None
    method: str = "lag-window"
    window: str = "optimal"
    symmetrize: bool = False
    center: bool = False
    region: str = "span"
    samples: int = 100_000
    seed: int = 0
    n: int = 1024
    phi: float = 0.5
    lambda1: float = 0.6
    lambda2: float = 1.1
    noise_sd: float = 0.1
    threads: int | None = None


class UsageError(ValidationError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _common(p: argparse.ArgumentParser, *names: str) -> None:
    p.add_argument("--config", help="JSON file with option values (flags override)")
    p.add_argument("--output", "-o", help="output path ('-' or omitted: stdout)")
    p.add_argument("--threads", type=int, help="accepted for compatibility; computation is single-threaded")
    for name in names:
        _OPTIONS[name](p)


_OPTIONS = {
    "order": lambda p: p.add_argument("--order", "-k", type=int, help="order k (>= 2)"),
    "domain": lambda p: p.add_argument("--domain", choices=["lag", "freq"]),
    "format": lambda p: p.add_argument("--format", choices=["json", "csv", "text"]),
    "input": lambda p: p.add_argument("--input", "-i", help="input file"),
    "grid": lambda p: p.add_argument("--grid", help="'min,max,n' per axis or 'periodic:n'"),
    "beta": lambda p: p.add_argument("--beta", type=float),
    "c": lambda p: p.add_argument("--c", type=float, help="flat-top parameter in (0, 1)"),
    "seed": lambda p: p.add_argument("--seed", type=int),
    "max_lag": lambda p: p.add_argument("--max-lag", "-L", dest="max_lag", type=int),
    "symmetrize": lambda p: p.add_argument("--symmetrize", action="store_true", default=None,
                                           help="orbit-average the cumulant lattice"),
    "center": lambda p: p.add_argument("--center", action="store_true", default=None,
                                       help="subtract the sample mean first"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="symspec", description="Higher-order spectral analysis with S_k symmetries.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("rep", help="print the representation matrices of S_k")
    _common(p, "order", "domain", "format")

    p = sub.add_parser("symmetrize", help="symmetrize an expression over the S_k orbit")
    _common(p, "order", "domain", "format", "grid")
    p.add_argument("--combiner", help="mean|geomean|product|max|min|powermean:p")
    p.add_argument("--input", "-i", dest="expression", help="expression in x1..x(k-1)")
    p.add_argument("--check", help="'samples,tol': emit a symmetry report instead of a grid")
    p.add_argument("--seed", type=int)

    p = sub.add_parser("kernel", help="evaluate a kernel or lag-window on a grid")
    _common(p, "order", "format", "grid", "beta", "c")
    p.add_argument("--kind", choices=["optimal", "optimal-lag", "gabr-rao-lag", "flat-pyramid", "flat-cone"])

    p = sub.add_parser("cumulant", help="estimate the auto-cumulant lattice of a series")
    _common(p, "order", "input", "max_lag", "symmetrize", "center")

    p = sub.add_parser("estimate", help="estimate a k-th order spectral density")
    _common(p, "order", "input", "max_lag", "symmetrize", "grid", "beta", "c")
    p.add_argument("--method", choices=["lag-window", "convolution", "periodogram"])
    p.add_argument("--window", choices=["optimal", "flat-cone", "flat-pyramid"])
    p.add_argument("--M", "--bandwidth", dest="M", type=float)
    p.add_argument("--region", choices=["span", "box"])

    p = sub.add_parser("verify", help="verify the representation (and kernel symmetries)")
    _common(p, "order", "seed")
    p.add_argument("--samples", type=int, help="sampled product pairs when k > 5")

    p = sub.add_parser("synth", help="generate a synthetic series")
    _common(p, "seed")
    p.add_argument("--kind", choices=[k.value for k in SynthKind])
    p.add_argument("--n", type=int)
    p.add_argument("--phi", type=float)
    p.add_argument("--lambda1", type=float)
    p.add_argument("--lambda2", type=float)
    p.add_argument("--noise-sd", dest="noise_sd", type=float)
    return parser


def _join_values(argv: list[str]) -> list[str]:
    # "--grid -4,4,101" would otherwise be read as an unknown option
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in ("--grid", "--check") and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def parse_config(argv: list[str]) -> RunConfig:
    args = build_parser().parse_args(_join_values(list(argv)))
    if args.command is None:
        raise UsageError(build_parser().format_usage() + "symspec: error: a command is required")
    values: dict[str, Any] = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise ValidationError("--config must hold a JSON object")
        values.update({k.replace("-", "_"): v for k, v in raw.items()})
    values.update({k: v for k, v in vars(args).items() if v is not None and k != "config"})
    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(values) - known)
    if unknown:
        raise UsageError(f"unknown option(s) in config: {', '.join(unknown)}")
    cfg = RunConfig(**values)
    if cfg.threads is not None and cfg.threads < 1:
        raise ValidationError("--threads must be >= 1")
    return cfg


def _need(cfg: RunConfig, name: str):
    v = getattr(cfg, name)
    if v is None:
        raise UsageError(f"{cfg.command}: --{name.replace('_', '-')} is required")
    return v


def parse_grid(spec: str, dim: int) -> FrequencyGrid:
    s = spec.strip()
    if s.startswith("periodic:"):
        return FrequencyGrid.periodic(dim, int(s.split(":", 1)[1]))
    parts = s.split(",")
    if len(parts) != 3:
        raise ValidationError(f"grid must be 'min,max,n' or 'periodic:n', got {spec!r}")
    lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    return FrequencyGrid.uniform(dim, lo, hi, n)


def _grid_output(cfg: RunConfig, f: WindowFunction, grid: FrequencyGrid, meta: dict) -> str:
    pts = grid.points()
    vals = f.evaluate(pts)
    if (cfg.format or "csv") == "json":
        return sio.dumps({**meta, "grid": grid.to_dict(), "order": "axis-major, last axis fastest",
                          "values": vals.reshape(grid.shape).tolist()})
    return sio.grid_csv(pts, vals)


def cmd_rep(cfg: RunConfig) -> int:
    k = _need(cfg, "order")
    dom = Domain.parse(cfg.domain)
    entries = [{"permutation": format_cycles(p), "matrix": domain_matrix(p, dom).tolist()}
               for p in enumerate_group(k)]
    if cfg.format == "text":
        text = "".join(f"{e['permutation']}\t{json.dumps(e['matrix'])}\n" for e in entries)
    else:
        text = sio.dumps({"order": k, "domain": dom.value, "matrices": entries})
    sio.atomic_write(cfg.output, text)
    return 0


def cmd_symmetrize(cfg: RunConfig) -> int:
    k = _need(cfg, "order")
    expr = _need(cfg, "expression")
    dom = Domain.parse(cfg.domain)
    base = WindowFunction(k, dom, compile_expression(expr, k - 1), expr)
    f = symmetrize(base, Combiner.parse(cfg.combiner), dom)
    if cfg.check:
        try:
            samples, tol = cfg.check.split(",")
            samples, tol = int(samples), float(tol)
        except ValueError:
            raise ValidationError("--check must be 'samples,tol'") from None
        rep = check_symmetry(f, n_samples=samples, tol=tol, seed=cfg.seed)
        sio.atomic_write(cfg.output, sio.dumps({"label": f.label, **rep.to_dict()}))
        return 0
    grid = parse_grid(cfg.grid or "-3,3,61", k - 1)
    sio.atomic_write(cfg.output, _grid_output(cfg, f, grid, {"label": f.label}))
    return 0


def _kernel_window(cfg: RunConfig) -> WindowFunction:
    kind = _need(cfg, "kind")
    k = cfg.order or 3
    if kind == "optimal":
        return optimal_kernel(k, cfg.beta)
    if kind == "optimal-lag":
        return optimal_lag_window(k, cfg.beta)
    if k != 3:
        raise ValidationError(f"kernel kind {kind!r} exists only for order 3")
    if kind == "gabr-rao-lag":
        beta = cfg.beta
        return WindowFunction(3, Domain.LAG, lambda T: gabr_rao_lag_window(T[:, 0], T[:, 1], beta),
                              "gabr-rao-lag")
    if kind == "flat-pyramid":
        return flat_top_pyramidal(cfg.c)
    return flat_top_conical(cfg.c)


def cmd_kernel(cfg: RunConfig) -> int:
    f = _kernel_window(cfg)
    grid = parse_grid(cfg.grid or "-4,4,101", f.dim)
    meta = {**f.meta, "kind": cfg.kind, "k": f.order, "label": f.label}
    sio.atomic_write(cfg.output, _grid_output(cfg, f, grid, meta))
    return 0


def cmd_cumulant(cfg: RunConfig) -> int:
    x = sio.read_series(_need(cfg, "input"))
    k = _need(cfg, "order")
    if cfg.center:
        x = x - x.mean()
    g = cumulant_grid(x, k, _need(cfg, "max_lag"), symmetrize=bool(cfg.symmetrize))
    names = [f"t{i + 1}" for i in range(k - 1)]
    sio.atomic_write(cfg.output, sio.grid_csv(g.lag_points(), g.values.ravel(), names))
    return 0


def cmd_estimate(cfg: RunConfig) -> int:
    x = sio.read_series(_need(cfg, "input"))
    k = _need(cfg, "order")
    grid = parse_grid(cfg.grid or "periodic:64", k - 1)
    sym = bool(cfg.symmetrize)
    if cfg.method == "periodogram":
        L = _need(cfg, "max_lag")
        est = periodogram(x, k, grid, L, symmetrize=sym, region=cfg.region)
    else:
        M = _need(cfg, "M")
        if cfg.method == "lag-window":
            window = {"optimal": lambda: optimal_lag_window(k, cfg.beta),
                      "flat-cone": lambda: flat_top_conical(cfg.c),
                      "flat-pyramid": lambda: flat_top_pyramidal(cfg.c)}[cfg.window]()
            est = lag_window_estimate(x, k, window, M, grid, cfg.max_lag,
                                      symmetrize=sym, region=cfg.region)
        else:
            L = cfg.max_lag if cfg.max_lag is not None else default_max_lag(len(x), k, M)
            pg = periodogram(x, k, grid, L, symmetrize=sym, region=cfg.region)
            est = kernel_convolution_estimate(pg, optimal_kernel(k, cfg.beta), M)
    meta = est.metadata()
    meta["method"] = cfg.method
    meta["symmetry"] = _safe_symmetry(est)
    sio.atomic_write(cfg.output, sio.spectral_csv(grid.points(), est.values.ravel()))
    if cfg.output and cfg.output != "-":
        sio.atomic_write(cfg.output + ".json", sio.dumps(meta))
    else:
        print(json.dumps(meta), file=sys.stderr)
    return 0


def _safe_symmetry(est) -> dict | None:
    try:
        return spectral_symmetry_check(est, tol=1e-8).to_dict()
    except ValidationError:
        return None


def cmd_verify(cfg: RunConfig) -> int:
    k = _need(cfg, "order")
    rep = verify_representation(k, n_samples=cfg.samples, seed=cfg.seed)
    out = {"representation": rep.to_dict()}
    kern = optimal_kernel(k)
    ks = check_symmetry(kern, n_samples=1000, tol=1e-12, seed=cfg.seed)
    out["optimal_kernel_symmetry"] = ks.to_dict()
    ok = rep.passed and ks.passed
    out["passed"] = ok
    sio.atomic_write(cfg.output, sio.dumps(out))
    if not ok:
        print("verification failed", file=sys.stderr)
    return 0 if ok else 1


def cmd_synth(cfg: RunConfig) -> int:
    kind = SynthKind(cfg.kind or "white")
    spec = SynthSpec(kind, cfg.n, cfg.seed, cfg.phi, cfg.lambda1, cfg.lambda2, cfg.noise_sd)
    x = generate_synthetic(spec)
    sio.atomic_write(cfg.output, sio.series_csv(x))
    if cfg.output and cfg.output != "-":
        sio.atomic_write(cfg.output + ".json", sio.dumps(spec.metadata()))
    else:
        print(json.dumps(spec.metadata()), file=sys.stderr)
    return 0


_DISPATCH = {
    "rep": cmd_rep, "symmetrize": cmd_symmetrize, "kernel": cmd_kernel,
    "cumulant": cmd_cumulant, "estimate": cmd_estimate, "verify": cmd_verify,
    "synth": cmd_synth,
}


def run(cfg: RunConfig) -> int:
    """Execute one command; returns the process exit status."""
    try:
        return _DISPATCH[cfg.command](cfg)
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 1
    except OSError as exc:
        print(f"symspec: I/O error: {exc}", file=sys.stderr)
        return 2
    except (SymspecError, ValueError, KeyError) as exc:
        print(f"symspec: {exc}", file=sys.stderr)
        return 1


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
    except OSError as exc:
        print(f"symspec: I/O error: {exc}", file=sys.stderr)
        return 2
    except (SymspecError, ValueError, json.JSONDecodeError) as exc:
        print(f"symspec: {exc}" if not isinstance(exc, UsageError) else str(exc), file=sys.stderr)
        return 1
    return run(cfg)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
