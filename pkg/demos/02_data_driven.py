"""Balanced truncation from transfer-function samples only.

The full system is used once, to produce samples of H_2 on the default
40x40 quadrature grid.  From then on only the samples are touched: the
complex data-driven reduction is compared with intrusive BT through the
singular values it computes and through its transfer function.
"""
import numpy as np

from kpbt import (batch_sample, build_grid, build_paper_example, bt_reduce, dd_reduce_complex,
                  eval_hk, required_tuples)

full = build_paper_example(300)
grid = build_grid([40, 40])
samples = batch_sample(full, required_tuples(grid))
print(f"{len(samples)} samples of H_2 on a {grid.lam_gammas} grid")

dd = dd_reduce_complex(samples, grid, (25, 25))
bt, spec = bt_reduce(full, (25, 25))
for j in range(2):
    a, b = dd.spectrum[j][:5] / dd.spectrum[j][0], spec.sigma[j][:5] / spec.sigma[j][0]
    print(f"subsystem {j + 1}: normalised sigma (data) {np.round(a, 4)}")
    print(f"              normalised sigma (BT)   {np.round(b, 4)}")

rng = np.random.default_rng(1)
for _ in range(3):
    s = tuple(1j * rng.uniform(-20, 20, 2))
    print(f"H_2 at w=({s[0].imag:.2f}, {s[1].imag:.2f}): full {eval_hk(full, s):.6f}  "
          f"data-driven {eval_hk(dd, s):.6f}  BT {eval_hk(bt, s):.6f}")
