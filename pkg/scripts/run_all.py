"""Run every suite with the default (or a given) config and print the headline numbers."""
import argparse
import json

from cesarolab.config import RunConfig
from cesarolab.lab.suites import run_suite

p = argparse.ArgumentParser()
p.add_argument("--config")
p.add_argument("--out", default="cesarolab-out")
p.add_argument("--workers", type=int, default=1)
args = p.parse_args()

cfg = (RunConfig.from_file(args.config) if args.config else RunConfig()).with_overrides(workers=args.workers)
res = run_suite(cfg, "all", args.out)
for r in res.results:
    if r.name.endswith("_summary"):
        for lid, v in r.payload.items():
            print(f"{lid:40s} constant={json.dumps(v['constant'])} passed={v['passed']}")
print(f"{len(res.files)} files, {len(res.failures)} hard failures")
