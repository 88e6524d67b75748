"""Command-line front end: gen, sample, reduce, simulate, compare.

Settings resolve as command-line flag, then ``--config`` JSON file, then the
built-in defaults (40 nodes per level on the default frequency ranges,
``dt = 1e-3``, ``t_final = 10``).
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from kpbt import io
from kpbt.benchmarks import build_paper_example, build_random_stable
from kpbt.bt import bt_reduce
from kpbt.datadriven import dd_reduce_complex
from kpbt.errors import GridError, KPowerError, RankError
from kpbt.quadgrid import (DEFAULT_GAMMA, DEFAULT_LAM_RANGE, DEFAULT_MU_RANGE, grid_from_spec,
                           required_tuples)
from kpbt.realify import dd_reduce_real
from kpbt.simulate import integrate, relative_error
from kpbt.transfer import batch_sample

log = logging.getLogger("kpbt")

DEFAULTS = {"dt": 1e-3, "tfinal": 10.0, "input": "tcos", "n": 300, "seed": 0}


class UsageError(Exception):
    pass


def _int_list(text, what):
    try:
        vals = [int(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"{what} must be a comma-separated list of integers, got {text!r}") from None
    if not vals or any(v < 1 for v in vals):
        raise UsageError(f"{what} must be a non-empty list of positive integers, got {text!r}")
    return vals


def _load_config(path):
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(cfg, dict):
        raise UsageError(f"config {path} must be a JSON object")
    return cfg


def _opt(args, cfg, name):
    val = getattr(args, name, None)
    if val is not None:
        return val
    if name in cfg:
        return cfg[name]
    return DEFAULTS.get(name)


def _grid(args, cfg, k):
    if getattr(args, "grid", None):
        try:
            with open(args.grid, encoding="utf-8") as fh:
                spec = json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError(f"grid spec {args.grid} is not valid JSON: {exc}") from None
    elif "grid" in cfg:
        spec = cfg["grid"]
    else:
        spec = {"gammas": [DEFAULT_GAMMA] * k, "lam_range": list(DEFAULT_LAM_RANGE),
                "mu_range": list(DEFAULT_MU_RANGE)}
    try:
        grid = grid_from_spec(spec)
    except GridError as exc:
        raise UsageError(f"bad grid spec: {exc}") from None
    if grid.k != k:
        raise UsageError(f"grid has {grid.k} levels but the system has k={k}")
    return grid


def cmd_gen(args, cfg):
    example = _opt(args, cfg, "example") or "paper"
    if example == "paper":
        system = build_paper_example(int(_opt(args, cfg, "n")))
    elif example == "random":
        dims = _int_list(_opt(args, cfg, "dims") or "5,4", "--dims")
        system = build_random_stable(len(dims), dims, seed=int(_opt(args, cfg, "seed")))
    else:
        raise UsageError(f"unknown example {example!r}")
    io.save_system(system, args.out)
    print(f"wrote {args.out}: k={system.k}, dims={list(system.dims)}, n={system.n}")


def cmd_sample(args, cfg):
    system = io.load_system(args.system)
    grid = _grid(args, cfg, system.k)
    samples = batch_sample(system, required_tuples(grid))
    io.write_samples(samples, args.out)
    print(f"wrote {args.out}: {len(samples)} samples")


def _spectrum_path(out):
    out = Path(out)
    return out.with_name(out.stem + ".spectrum.csv")


def cmd_reduce(args, cfg):
    method = _opt(args, cfg, "method") or "dkbbt"
    orders = _opt(args, cfg, "orders")
    if orders is None:
        raise UsageError("--orders is required")
    orders = _int_list(orders if isinstance(orders, str) else ",".join(map(str, orders)), "--orders")
    if method == "bt":
        if not args.system:
            raise UsageError("--method bt needs --system")
        reduced, spec = bt_reduce(io.load_system(args.system), orders)
        sigma = spec.sigma
    elif method in ("dkbbt", "dkbbt-complex"):
        if args.samples:
            samples = io.read_samples(args.samples)
            grid = _grid(args, cfg, samples.k)
        elif args.system:
            system = io.load_system(args.system)
            grid = _grid(args, cfg, system.k)
            samples = batch_sample(system, required_tuples(grid))
        else:
            raise UsageError(f"--method {method} needs --samples (or --system to sample on the fly)")
        fn = dd_reduce_real if method == "dkbbt" else dd_reduce_complex
        reduced = fn(samples, grid, orders)
        sigma = reduced.spectrum
    else:
        raise UsageError(f"unknown method {method!r}")
    io.save_system(reduced, args.out)
    spath = args.spectrum_out or _spectrum_path(args.out)
    io.write_spectrum(sigma, spath)
    print(f"wrote {args.out} (orders {list(reduced.dims)}) and {spath}")


def _traj(system, args, cfg):
    return integrate(system, str(_opt(args, cfg, "input")), float(_opt(args, cfg, "tfinal")),
                     float(_opt(args, cfg, "dt")))


def _real_output(tr, label):
    y = tr.y
    if np.iscomplexobj(y):
        imag = np.abs(y.imag).max(initial=0.0)
        if imag > 1e-8 * max(np.abs(y).max(initial=0.0), 1e-300):
            log.warning("%s: output has imaginary part up to %.3e; writing the real part", label, imag)
        y = y.real
    return y


def cmd_simulate(args, cfg):
    system = io.load_system(args.system)
    tr = _traj(system, args, cfg)
    io.write_columns(args.out, ["t", "y"], [tr.t, _real_output(tr, args.system)])
    print(f"wrote {args.out}: {tr.t.size} samples")


def cmd_compare(args, cfg):
    full = io.load_system(args.system)
    ref = _traj(full, args, cfg)
    names, ys, errs = ["t", "y_full"], [ref.t, ref.y], []
    for path in args.reduced:
        label = Path(path).stem
        tr = _traj(io.load_system(path), args, cfg)
        rep = relative_error(ref, tr)
        names.append(f"y_{label}")
        ys.append(_real_output(tr, label))
        errs.append((f"e_{label}", rep.pointwise))
        print(f"{label}: relative L2 error {rep.l2:.3e}, max pointwise {rep.max:.3e}")
    names += [n for n, _ in errs]
    ys += [e for _, e in errs]
    io.write_columns(args.out, names, ys)
    print(f"wrote {args.out}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kpbt", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="JSON file with default settings")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a system manifest")
    g.add_argument("--example", choices=["paper", "random"])
    g.add_argument("--n", type=int, help="subsystem order of the tridiagonal benchmark")
    g.add_argument("--seed", type=int)
    g.add_argument("--dims", help="comma-separated subsystem orders (random example)")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("sample", help="evaluate H_k on a quadrature grid")
    s.add_argument("--system", required=True)
    s.add_argument("--grid", help="grid spec JSON")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_sample)

    r = sub.add_parser("reduce", help="reduce by bt, dkbbt (real) or dkbbt-complex")
    r.add_argument("--method", choices=["bt", "dkbbt", "dkbbt-complex"])
    r.add_argument("--system")
    r.add_argument("--samples")
    r.add_argument("--grid")
    r.add_argument("--orders", help="comma-separated r_1,...,r_k")
    r.add_argument("--out", required=True)
    r.add_argument("--spectrum-out")
    r.set_defaults(func=cmd_reduce)

    for name, func, hlp in (("simulate", cmd_simulate, "simulate one system"),
                            ("compare", cmd_compare, "simulate full and reduced systems")):
        c = sub.add_parser(name, help=hlp)
        c.add_argument("--system", required=True)
        if name == "compare":
            c.add_argument("--reduced", nargs="+", required=True)
        c.add_argument("--input", help="tcos, sindecay, step, zero or an expression in t")
        c.add_argument("--tfinal", type=float)
        c.add_argument("--dt", type=float)
        c.add_argument("--out", required=True)
        c.set_defaults(func=func)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        cfg = _load_config(args.config)
        args.func(args, cfg)
    except UsageError as exc:
        parser.error(str(exc))
    except RankError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.sigma is not None:
            print("leading singular values: " + ", ".join(f"{v:.3e}" for v in exc.sigma[:10]),
                  file=sys.stderr)
        return 1
    except (KPowerError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
