"""Artifact files: system manifests (JSON), sample/spectrum/trajectory CSVs."""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from kpbt.errors import DimensionError
from kpbt.quadgrid import QuadGrid, grid_from_spec
from kpbt.sysmodel import KPowerSystem, ReducedKPowerSystem, build_system, make_reduced
from kpbt.transfer import SampleSet

__all__ = [
    "system_to_dict",
    "system_from_dict",
    "save_system",
    "load_system",
    "write_samples",
    "read_samples",
    "write_spectrum",
    "write_columns",
    "load_grid",
    "save_grid",
]

FMT = "%.17g"


def _enc(a):
    a = np.asarray(a)
    if np.iscomplexobj(a):
        return {"re": a.real.tolist(), "im": a.imag.tolist()}
    return a.tolist()


def _dec(v):
    if isinstance(v, dict):
        return np.asarray(v["re"], dtype=float) + 1j * np.asarray(v["im"], dtype=float)
    return np.asarray(v, dtype=float)


def system_to_dict(sys: KPowerSystem) -> dict:
    d = {
        "k": sys.k,
        "dims": list(sys.dims),
        "A": [_enc(a) for a in sys.A],
        "N": [_enc(m) for m in sys.N],
        "B1": _enc(sys.B1),
        "Ck": _enc(sys.Ck),
    }
    if isinstance(sys, ReducedKPowerSystem):
        d["method"] = sys.method
    return d


def system_from_dict(d) -> KPowerSystem:
    try:
        A = [_dec(a) for a in d["A"]]
        N = [_dec(m) for m in d["N"]]
        B1, Ck = _dec(d["B1"]), _dec(d["Ck"])
    except (KeyError, TypeError, ValueError) as exc:
        raise DimensionError(f"malformed system manifest: {exc}") from exc
    if "method" in d:
        sys = make_reduced(A, N, B1, Ck, method=d["method"])
    else:
        sys = build_system(A, N, B1, Ck)
    if d.get("k", sys.k) != sys.k or list(d.get("dims", sys.dims)) != list(sys.dims):
        raise DimensionError("manifest k/dims disagree with its matrices")
    return sys


def _write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def save_system(sys: KPowerSystem, path) -> None:
    _write_text(path, json.dumps(system_to_dict(sys)) + "\n")


def load_system(path) -> KPowerSystem:
    with open(path, encoding="utf-8") as fh:
        return system_from_dict(json.load(fh))


def save_grid(grid: QuadGrid, path) -> None:
    _write_text(path, json.dumps(grid.spec()) + "\n")


def load_grid(path) -> QuadGrid:
    with open(path, encoding="utf-8") as fh:
        return grid_from_spec(json.load(fh))


def write_samples(samples: SampleSet, path) -> None:
    """One row per tuple: ``s1_im, ..., sk_im, re, im``."""
    lines = [",".join([f"s{j + 1}_im" for j in range(samples.k)] + ["re", "im"])]
    for key in samples:
        val = samples[key]
        lines.append(",".join(FMT % x for x in (*key, val.real, val.imag)))
    _write_text(path, "\n".join(lines) + "\n")


def read_samples(path) -> SampleSet:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        k = len(header) - 2
        expected = [f"s{j + 1}_im" for j in range(k)] + ["re", "im"]
        if k < 1 or header != expected:
            raise DimensionError(f"unexpected sample header {header}")
        out = SampleSet(k)
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != k + 2:
                raise DimensionError(f"{path}:{lineno}: expected {k + 2} fields, got {len(row)}")
            vals = [float(x) for x in row]
            out._add(tuple(vals[:k]), complex(vals[k], vals[k + 1]), "imported")
    return out


def write_spectrum(sigma, path) -> None:
    """``subsystem,index,sigma`` with 1-based subsystem and index."""
    lines = ["subsystem,index,sigma"]
    for j, s in enumerate(sigma):
        lines.extend(f"{j + 1},{i + 1},{FMT % v}" for i, v in enumerate(np.asarray(s)))
    _write_text(path, "\n".join(lines) + "\n")


def write_columns(path, names, columns) -> None:
    cols = [np.asarray(c) for c in columns]
    lines = [",".join(names)]
    for row in zip(*cols):
        lines.append(",".join(FMT % v for v in row))
    _write_text(Path(path), "\n".join(lines) + "\n")
