"""Super-level measures of sup_N |T_{N,beta} f - T_N f| against sqrt(||f||_1/lambda)/(1-2 delta)."""
import argparse

from cesarolab.circle import TWO_PI, lp_norm
from cesarolab.config import RunConfig
from cesarolab.lab.composite import check_replacement
from cesarolab.lab.suites import corpus_for, replacement_sequence
from cesarolab.operators import CompositeSpec

p = argparse.ArgumentParser()
p.add_argument("--grid-level", type=int, default=10)
p.add_argument("--items", nargs="*", help="corpus item names (default: all)")
args = p.parse_args()

cfg = RunConfig(grid_level=args.grid_level)
seq = replacement_sequence(cfg)
spec = CompositeSpec(seq, cfg.N_max, cfg.beta, cfg.delta)
print("item,lambda_mult,measure,bound")
for it in corpus_for(cfg):
    if (args.items and it.name not in args.items) or lp_norm(it.f, 1) == 0:
        continue
    mu = lp_norm(it.f, 1) / TWO_PI
    cur = check_replacement(it.f, seq, spec, [m * mu for m in cfg.replacement_lambdas], cfg.N_max, cfg.grid_level, it.name)
    for m, meas, b in zip(cfg.replacement_lambdas, cur.measures, cur.bound_values):
        print(f"{it.name},{m:.4f},{meas:.6g},{b:.6g}")
