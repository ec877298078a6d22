"""Exceedance measures of (1/N) sum S_{n_j} f - f for the half-circle indicator, n_j = 2^j."""
import argparse

import numpy as np

from cesarolab.circle import PCFunction
from cesarolab.lab.convergence import check_vp_convergence, convergence_experiment
from cesarolab.sequences import make_powers_of_two

p = argparse.ArgumentParser()
p.add_argument("--grid-level", type=int, default=10)
p.add_argument("--N", type=int, nargs="+", default=[4, 8, 16, 32])
args = p.parse_args()

f = PCFunction.indicator(0.0, np.pi, 8)
seq = make_powers_of_two(max(args.N))
eps = (0.05, 0.1, 0.2)
full = convergence_experiment(f, seq, args.N, "full_average", args.grid_level, eps)
vp = check_vp_convergence(f, seq, args.N, args.grid_level, eps)
print("N,eps,average_measure,vp_measure")
for e in eps:
    for i, N in enumerate(args.N):
        print(f"{N},{e},{full.measures[e][i]:.6g},{vp.measures[e][i]:.6g}")
