"""Command line entry point: ``cesarolab run`` and ``cesarolab corpus list``."""
from __future__ import annotations

import argparse
import logging
import os
import sys
import time

from .config import ConfigError, RunConfig
from .corpus import load_corpus

OUT_ENV = "CESAROLAB_OUT"
EXIT_OK, EXIT_HARD_FAILURE, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("cesarolab")


def _load_config(path: str | None, **overrides) -> RunConfig:
    cfg = RunConfig.from_file(path) if path else RunConfig()
    return cfg.with_overrides(**overrides)


def build_parser() -> argparse.ArgumentParser:
    from .lab.suites import SUITES

    p = argparse.ArgumentParser(prog="cesarolab", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment suite and write JSON and CSV reports")
    run.add_argument("--suite", required=True, choices=SUITES + ("all",))
    run.add_argument("--config", help="JSON config file; flags override its fields")
    run.add_argument("--grid-level", type=int, help="evaluation grid level g")
    run.add_argument("--seed", type=int)
    run.add_argument("--out", help=f"output directory (default: ${OUT_ENV}, then the config's output_dir)")
    run.add_argument("--workers", type=int, help="parallel worker processes")

    corpus = sub.add_parser("corpus", help="corpus utilities")
    csub = corpus.add_subparsers(dest="corpus_command", required=True)
    lst = csub.add_parser("list", help="list corpus items with summaries")
    lst.add_argument("--config", help="JSON config file naming the corpus")
    return p


def cmd_run(args) -> int:
    from .lab.suites import run_suite

    cfg = _load_config(args.config, grid_level=args.grid_level, seed=args.seed, workers=args.workers)
    out = args.out or os.environ.get(OUT_ENV) or cfg.output_dir
    t0 = time.perf_counter()
    res = run_suite(cfg, args.suite, out)
    for r in res.results:
        status = "FAIL" if r.failures else "ok"
        print(f"{status:4s} {r.suite}/{r.name}")
    print(f"{len(res.files)} report files in {out} ({time.perf_counter() - t0:.1f} s)")
    if res.failures:
        for msg in res.failures:
            print(f"hard assertion failed: {msg}", file=sys.stderr)
        return EXIT_HARD_FAILURE
    return EXIT_OK


def cmd_corpus_list(args) -> int:
    cfg = _load_config(args.config)
    for it in load_corpus(cfg.corpus, cfg.seed, cfg.corpus_level):
        s = it.summary()
        print(f"{s['name']}\tlevel={s['level']}\tL1={s['L1']:.6g}\tLinf={s['Linf']:.6g}\t{s['description']}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.command == "run":
            return cmd_run(args)
        return cmd_corpus_list(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"cesarolab: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
