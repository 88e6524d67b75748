import json
import subprocess
import sys

import numpy as np
import pytest

from kpbt import io
from kpbt.cli import main


def _grid(tmp_path, gammas, lam=(0.1, 10), mu=(0.3, 30)):
    p = tmp_path / "g.json"
    p.write_text(json.dumps({"gammas": gammas, "lam_range": list(lam), "mu_range": list(mu)}))
    return str(p)


def _scalar(tmp_path):
    p = tmp_path / "scalar.json"
    p.write_text(json.dumps({"k": 2, "dims": [1, 1], "A": [[[-1.0]], [[-1.0]]],
                             "N": [[[1.0]]], "B1": [1.0], "Ck": [1.0]}))
    return str(p)


def test_gen_benchmark(tmp_path):
    out = tmp_path / "p.json"
    assert main(["gen", "--example", "paper", "--n", "300", "--out", str(out)]) == 0
    sys_ = io.load_system(out)
    assert sys_.n == 600


def test_gen_random_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert main(["gen", "--example", "random", "--seed", "7", "--dims", "5,4",
                     "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert io.load_system(a).dims == (5, 4)


def test_gen_bad_dims(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["gen", "--example", "random", "--dims", "5,x", "--out", str(tmp_path / "a.json")])
    assert exc.value.code == 2


def test_sample_scalar(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["sample", "--system", _scalar(tmp_path), "--grid", _grid(tmp_path, [2, 2]),
                 "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 13


def test_sample_bad_grid(tmp_path):
    g = tmp_path / "g.json"
    g.write_text('{"gammas": [3, 2]}')
    with pytest.raises(SystemExit) as exc:
        main(["sample", "--system", _scalar(tmp_path), "--grid", str(g),
              "--out", str(tmp_path / "s.csv")])
    assert exc.value.code == 2
    g.write_text("{not json")
    with pytest.raises(SystemExit):
        main(["sample", "--system", _scalar(tmp_path), "--grid", str(g),
              "--out", str(tmp_path / "s.csv")])


def test_reduce_bt_and_spectrum(tmp_path):
    red = tmp_path / "r.json"
    assert main(["reduce", "--method", "bt", "--system", _scalar(tmp_path), "--orders", "1,1",
                 "--out", str(red)]) == 0
    assert io.load_system(red).method == "bt"
    spec = (tmp_path / "r.spectrum.csv").read_text().splitlines()
    assert spec[0] == "subsystem,index,sigma" and len(spec) == 3


def test_reduce_rank_error_reports_spectrum(tmp_path, capsys):
    rc = main(["reduce", "--method", "bt", "--system", _scalar(tmp_path), "--orders", "2,1",
               "--out", str(tmp_path / "r.json")])
    assert rc == 1
    assert "singular values" in capsys.readouterr().err


def test_reduce_dkbbt_order_too_large(tmp_path, capsys):
    s = tmp_path / "s.csv"
    g = _grid(tmp_path, [2, 2])
    main(["sample", "--system", _scalar(tmp_path), "--grid", g, "--out", str(s)])
    rc = main(["reduce", "--method", "dkbbt", "--samples", str(s), "--grid", g,
               "--orders", "5,1", "--out", str(tmp_path / "r.json")])
    assert rc == 1 and "error" in capsys.readouterr().err


def test_reduce_needs_source(tmp_path):
    with pytest.raises(SystemExit):
        main(["reduce", "--method", "bt", "--orders", "1,1", "--out", str(tmp_path / "r.json")])
    with pytest.raises(SystemExit):
        main(["reduce", "--method", "dkbbt", "--orders", "1,1",
              "--out", str(tmp_path / "r.json")])


def test_nonintrusive_reduce_from_files(tmp_path):
    sysf = tmp_path / "sys.json"
    main(["gen", "--example", "random", "--seed", "3", "--dims", "4,3", "--out", str(sysf)])
    s, g = tmp_path / "s.csv", _grid(tmp_path, [4, 4])
    main(["sample", "--system", str(sysf), "--grid", g, "--out", str(s)])
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["reduce", "--method", "dkbbt", "--samples", str(s), "--grid", g,
                 "--orders", "3,2", "--out", str(a)]) == 0
    sysf.unlink()
    assert main(["reduce", "--method", "dkbbt", "--samples", str(s), "--grid", g,
                 "--orders", "3,2", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    red = io.load_system(a)
    assert red.method == "dkbbt" and not red.is_complex


def test_config_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"tfinal": 0.5, "dt": 0.1, "input": "step"}))
    out = tmp_path / "y.csv"
    assert main(["--config", str(cfg), "simulate", "--system", _scalar(tmp_path),
                 "--dt", "0.05", "--out", str(out)]) == 0
    rows = out.read_text().splitlines()
    assert rows[0] == "t,y" and len(rows) == 12
    assert float(rows[-1].split(",")[1]) > 0


def test_simulate_zero_input(tmp_path):
    out = tmp_path / "y.csv"
    main(["simulate", "--system", _scalar(tmp_path), "--input", "zero", "--tfinal", "1",
          "--out", str(out)])
    y = np.loadtxt(out, delimiter=",", skiprows=1)[:, 1]
    assert np.all(y == 0)


def test_compare_layout_and_determinism(tmp_path):
    sysf = _scalar(tmp_path)
    bt = tmp_path / "bt.json"
    main(["reduce", "--method", "bt", "--system", sysf, "--orders", "1,1", "--out", str(bt)])
    dd = tmp_path / "dd.json"
    main(["reduce", "--method", "dkbbt", "--system", sysf, "--grid",
          _grid(tmp_path, [8, 8], (1e-3, 1e3), (2e-3, 2e3)), "--orders", "1,1", "--out", str(dd)])
    outs = []
    for name in ("c1.csv", "c2.csv"):
        out = tmp_path / name
        assert main(["compare", "--system", sysf, "--reduced", str(bt), str(dd),
                     "--tfinal", "1", "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    head = outs[0].decode().splitlines()[0]
    assert head == "t,y_full,y_bt,y_dd,e_bt,e_dd"


def test_module_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "kpbt", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "reduce" in r.stdout
