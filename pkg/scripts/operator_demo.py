"""Evaluate every operator on one corpus item at a few grid midpoints."""
import argparse

import numpy as np

from cesarolab.corpus import default_corpus
from cesarolab.operators import e_operator, fejer_mean, hilbert_modified, modified_partial_sum, partial_sum, vp_mean
from cesarolab.spectral import midpoints

p = argparse.ArgumentParser()
p.add_argument("--item", default="indicator_half")
p.add_argument("--n", type=int, default=32)
p.add_argument("--points", type=int, default=8)
args = p.parse_args()

f = {it.name: it.f for it in default_corpus()}[args.item]
pts = midpoints(10)
pts = pts.subset(np.linspace(0, len(pts) - 1, args.points).round().astype(int))
n = args.n
cols = {
    "S_n": partial_sum(f, n, pts),
    "sigma_n": fejer_mean(f, n, pts),
    "V_n": vp_mean(f, n, pts),
    "H_n": hilbert_modified(f, n, pts),
    "S~_n": modified_partial_sum(f, n, n, pts),
    "E_n|f|": e_operator(f.abs(), n, n, pts),
}
print("y," + ",".join(cols))
for i, y in enumerate(pts.y):
    print(f"{y:.6f}," + ",".join(f"{complex(v[i]).real:.6g}{complex(v[i]).imag:+.6g}j" for v in cols.values()))
