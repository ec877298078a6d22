"""Experiment suites: each suite is a list of independent jobs producing JSON payloads and CSV rows."""
from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from ..circle import TWO_PI, PCFunction, TrigPoly, lp_norm
from ..config import ConfigError, RunConfig
from ..corpus import CorpusItem, load_corpus
from ..dyadic import cz_decompose
from ..operators import CompositeSpec
from ..sequences import (
    IndexSequence,
    beta_param,
    block_coords,
    make_lacunary,
    make_powers_of_two,
    sequence_from_spec,
    subsequence_lacunarity_audit,
)
from . import composite, convergence, local, regions, sets
from .reports import (
    BoundRatioReport,
    HardAssertionError,
    max_ratio,
    monotone_blowup,
    reports_to_csv,
    stable_pair,
    strictly_decreasing,
)

SUITES = ("kernels", "cz", "sets", "hilbert", "lemmas34", "lemmas5", "orthogonality", "replacement", "convergence")
SEQUENCE_LENGTH = 64
HILBERT_ITEMS = 20
HILBERT_ORDERS = (8, 32, 128)
WEAK_TYPE_ORDERS = (8, 64, 1024)
E_ORDERS = (8, 32, 128, 1024, 1 << 16)
RANDOM_FAMILIES = 100
OVERLAP_GAMMAS = (7, 9, 11)


@dataclass
class JobResult:
    suite: str
    name: str
    payload: dict = field(default_factory=dict)
    reports: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "experiment": self.name,
            "failures": list(self.failures),
            "passed": not self.failures,
            "payload": _jsonable(self.payload),
            "reports": [r.to_dict() for r in self.reports],
        }


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return _jsonable(v.tolist())
    if isinstance(v, (np.floating, np.integer, np.bool_)):
        return _jsonable(v.item())
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def _guard(failures: list, label: str, fn, *args, **kw):
    """Run ``fn``; a :class:`HardAssertionError` is recorded instead of raised."""
    try:
        return fn(*args, **kw)
    except HardAssertionError as exc:
        failures.append(f"{label}: {exc}")
        return None


# -- shared inputs ------------------------------------------------------------------

@lru_cache(maxsize=4)
def _corpus(name: str, seed: int, level: int) -> tuple[CorpusItem, ...]:
    return tuple(load_corpus(name, seed, level))


def corpus_for(cfg: RunConfig) -> tuple[CorpusItem, ...]:
    return _corpus(cfg.corpus, cfg.seed, cfg.corpus_level)


def _nonzero(items):
    return [it for it in items if lp_norm(it.f, 1) > 0]


def _lams(f: PCFunction, mults) -> list[tuple[float, float]]:
    mu = lp_norm(f, 1) / TWO_PI
    return [(float(m), float(m) * mu) for m in mults]


def lemma_sequence(cfg: RunConfig) -> IndexSequence:
    """First configured lacunary sequence with ratio at least 2."""
    for s in cfg.sequences:
        seq = sequence_from_spec(s, SEQUENCE_LENGTH)
        if seq.kind == "lacunary" and seq.min_ratio() >= 2:
            return seq
    raise ConfigError("the lemma suites need a lacunary sequence with n_{j+1} >= 2 n_j in 'sequences'")


def replacement_sequence(cfg: RunConfig) -> IndexSequence:
    """Sequence with ``n_{j+1} >= (1 + j^-delta) n_j`` for the configured ``delta``."""
    for s in cfg.sequences:
        if s.get("kind") == "delta_growth" and s.get("delta") == cfg.delta:
            return sequence_from_spec(s, max(cfg.N_max, 1))
    return sequence_from_spec({"kind": "delta_growth", "delta": cfg.delta, "n1": 10}, max(cfg.N_max, 1))


def grid_pair(cfg: RunConfig) -> tuple[int, int]:
    return cfg.grid_level - 1, cfg.grid_level


def orthogonality_sequences(cfg: RunConfig, N_cap: int = 16) -> list[tuple[IndexSequence, int]]:
    """Lacunary sequences for each ``q`` with ``N`` the largest count keeping ``n_N`` under the cap."""
    out = []
    for q in cfg.orthogonality_q:
        if q <= 2.5:
            raise ConfigError(f"orthogonality needs lacunary ratio q > 2.5, got q = {q}")
        seq = make_lacunary(q, 10, N_cap)
        N = max(j for j in range(1, N_cap + 1) if seq.term(j) <= cfg.orthogonality_cap)
        out.append((seq, N))
    return out


# -- kernels ----------------------------------------------------------------------------

def job_kernel_identities(cfg: RunConfig) -> JobResult:
    res = local.kernel_identities(64, 1024, cfg.seed)
    fails = [] if res.passed else [f"kernel identities failed: {res.to_dict()}"]
    return JobResult("kernels", "kernel_identities", res.to_dict(), [], fails)


def job_sequences(cfg: RunConfig) -> JobResult:
    out = []
    for s in cfg.sequences:
        seq = sequence_from_spec(s, SEQUENCE_LENGTH)
        d = {"spec": dict(s), "first_terms": list(seq.terms[:8]), "min_ratio": seq.min_ratio()}
        betas = {}
        for j in range(1, 9):
            try:
                betas[j] = beta_param(seq, j, cfg.log_base)
            except ArithmeticError as exc:
                betas[j] = str(exc)
        d["beta_j"] = betas
        if seq.kind == "delta_growth":
            d["lacunarity_audit"] = subsequence_lacunarity_audit(seq, s["delta"], min(cfg.N_max, len(seq))).to_dict()
        out.append(d)
    blocks = {N: {"K": bc.K, "K0": bc.K0} for N in cfg.N_sweep for bc in [block_coords(N, cfg.delta)]}
    return JobResult("kernels", "sequences", {"sequences": out, "block_coords": blocks})


# -- cz ---------------------------------------------------------------------------------

def job_cz_invariants(cfg: RunConfig) -> JobResult:
    fails, rows, nest = [], [], []
    for it in _nonzero(corpus_for(cfg)):
        lams = _lams(it.f, cfg.lambda_values)
        for mult, lam in lams:
            inv = _guard(fails, f"{it.name} lam={mult}", sets.check_cz, it.f, lam)
            if inv is not None:
                rows.append({"item": it.name, "lam_mult": mult, **inv.to_dict()})
        for (m1, l1), (m2, l2) in zip(lams, lams[1:]):
            if not sets.lambda_nesting(it.f, l1, l2):
                nest.append(f"{it.name} {m1}->{m2}")
    return JobResult("cz", "cz_invariants", {"rows": rows, "nesting_violations": nest}, [], fails)


def job_cz_families(cfg: RunConfig) -> JobResult:
    out = {}
    for it in _nonzero(corpus_for(cfg)):
        out[it.name] = [
            {"lam_mult": mult, **cz_decompose(it.f, lam).to_dict()} for mult, lam in _lams(it.f, cfg.lambda_values)
        ]
    return JobResult("cz", "cz_families", out)


# -- sets -------------------------------------------------------------------------------

def _families(cfg: RunConfig):
    """``RANDOM_FAMILIES`` nonempty random families from the run seed."""
    rng = np.random.default_rng(cfg.seed)
    out = []
    while len(out) < RANDOM_FAMILIES:
        fam = sets.random_family(rng, max_level=10)
        if len(fam):
            out.append(fam)
    return out


def job_overlap(cfg: RunConfig) -> JobResult:
    fails, reports, summary = [], [], {}
    fams = _families(cfg)
    for gamma in OVERLAP_GAMMAS:
        reps = [
            r for i, fam in enumerate(fams)
            if (r := _guard(fails, f"gamma={gamma} family {i}", sets.overlap_report, fam, gamma, f"family_{i:03d}"))
        ]
        reports += reps
        mr = max((r.ratio for r in reps), default=0.0)
        summary[gamma] = {"max_ratio": mr, "bound": sets.overlap_bound(gamma), "within_bound": mr <= sets.overlap_bound(gamma)}
    return JobResult("sets", "dilation_overlap", {"by_gamma": summary, "families": len(fams)}, reports, fails)


def job_maximal_selection(cfg: RunConfig) -> JobResult:
    fails, sizes = [], []
    for i, fam in enumerate(_families(cfg)):
        for shift in (-3, -1, 1, 2):
            sel = _guard(fails, f"family {i} shift {shift}", sets.check_maximal_selection, fam, shift)
            if sel is not None:
                sizes.append([len(fam), len(sel)])
    return JobResult("sets", "maximal_selection", {"family_and_selection_sizes": sizes}, [], fails)


def job_delta_audit(cfg: RunConfig) -> JobResult:
    seq = lemma_sequence(cfg)
    N = max(cfg.N_sweep)
    fails, rows = [], []
    for it in _nonzero(corpus_for(cfg)):
        for mult, lam in _lams(it.f, cfg.lambda_values):
            cz = cz_decompose(it.f, lam)
            a = _guard(fails, f"{it.name} lam={mult}", regions.delta_audit, cz, cfg.gamma, seq, N, None, cfg.log_base)
            if a is not None:
                rows.append({"item": it.name, "lam_mult": mult, **a.to_dict()})
    return JobResult("sets", "delta_disjointness", {"rows": rows}, [], fails)


# -- hilbert ----------------------------------------------------------------------------

def job_domination(cfg: RunConfig) -> JobResult:
    pts = local.evenly_spaced_midpoints(cfg.grid_level, 64)
    fails, gaps, sq = [], {}, {}
    for it in corpus_for(cfg)[:HILBERT_ITEMS]:
        for l in HILBERT_ORDERS:
            g = local.domination_gap(it.f, l, pts)
            gaps[f"{it.name}/{l}"] = g
            if g > local.DOMINATION_TOL:
                fails.append(f"{it.name} l={l}: |S_l f - S~_l f| exceeds E_l|f| by {g:.3e}")
            s = local.modified_sum_gap(it.f, l, pts)
            sq[f"{it.name}/{l}"] = s
            if s > local.DOMINATION_TOL:
                fails.append(f"{it.name} l={l}: squared modified partial sum bound off by {s:.3e}")
    payload = {"max_domination_gap": max(gaps.values()), "max_square_gap": max(sq.values()),
               "domination_gaps": gaps, "square_gaps": sq}
    return JobResult("hilbert", "local_domination", payload, [], fails)


def job_hilbert_weak_type(cfg: RunConfig) -> JobResult:
    curves, consts = {}, {}
    items = _nonzero(corpus_for(cfg)[:HILBERT_ITEMS])
    for g in grid_pair(cfg):
        c = 0.0
        for it in items:
            mu = lp_norm(it.f, 1) / TWO_PI
            ts = [mu * 2 ** (k / 2) for k in range(0, 9)]
            for n in WEAK_TYPE_ORDERS:
                cur = local.hilbert_weak_type(it.f, n, ts, g, it.name)
                c = max(c, cur.fitted_constant())
                if g == cfg.grid_level:
                    curves[f"{it.name}/{n}"] = cur.to_dict()
        consts[g] = c
    g0, g1 = grid_pair(cfg)
    payload = {"fitted_constant": consts, "stable": stable_pair(consts[g0], consts[g1]), "curves": curves}
    return JobResult("hilbert", "hilbert_weak_type", payload)


# -- lemma ratios -------------------------------------------------------------------------

def _ratio_summary(reports, ids, N_sweep, grids) -> dict:
    """Per lemma: the empirical constant (max ratio over corpus, lambda and N) on both grids and its N-trend.

    ``grid_stable`` compares the constants of the two grids; ``blowup`` looks
    at the per-``N`` maxima on the finer grid.  Per-``N`` grid agreement is
    reported alongside.
    """
    out = {}
    g0, g1 = grids
    for lid in ids:
        sub = [r for r in reports if r.lemma_id == lid]
        by = {g: [max_ratio([r for r in sub if r.params.get("grid_level") == g], N=N) for N in N_sweep] for g in grids}
        const = {g: max(by[g], default=0.0) for g in grids}
        stable = stable_pair(const[g0], const[g1])
        blowup = monotone_blowup(by[g1])
        out[lid] = {
            "constant": {str(g): v for g, v in const.items()},
            "max_ratio_by_N": {str(g): v for g, v in by.items()},
            "N": list(N_sweep),
            "per_N_grid_stable": [stable_pair(a, b) for a, b in zip(by[g0], by[g1])],
            "grid_stable": stable,
            "blowup": blowup,
            "passed": stable and not blowup,
        }
    return out


SINGLE_ORDER_IDS = (regions.HILBERT_ON_DILATED, regions.PARTIAL_ON_DILATED, regions.SV_ON_DILATED)
GAP_IDS = (regions.HILBERT_ON_GAP, regions.PARTIAL_ON_GAP, regions.SV_ON_GAP)
OFF_IDS = (regions.HILBERT_OFF_F, regions.PARTIAL_OFF_F, regions.SV_OFF_F)
SV_SUM_IDS = (regions.SV_WEIGHTED_ON_T, regions.SV_WEIGHTED_ON_F)


def item_lemma_reports(cfg: RunConfig, item: CorpusItem, kind: str) -> list[BoundRatioReport]:
    """Bound-ratio reports of one corpus item for the ``lemmas34`` or ``lemmas5`` families."""
    seq = lemma_sequence(cfg)
    Ns = list(cfg.N_sweep)
    Nm = max(Ns)
    f = item.f
    l1 = lp_norm(f, 1)
    out = []
    for g in grid_pair(cfg):
        for mult, lam in _lams(f, cfg.lambda_values):
            cz = cz_decompose(f, lam)
            ex = {"lam_mult": mult}
            if kind == "lemmas34":
                for N in Ns:
                    n = seq.term(N)
                    for which in ("H", "S", "SV"):
                        out.append(regions.check_dilated_weighted(
                            f, lam, cfg.gamma, cfg.beta, n, n // 10, which, g, cz, item.name, {**ex, "N": N}))
                for which, lid in zip(("H", "S", "SV"), GAP_IDS):
                    terms = np.cumsum(regions.gap_terms(f, lam, cfg.gamma, seq, Nm, which, g, cz, cfg.log_base))
                    for N in Ns:
                        out.append(BoundRatioReport(lid, float(terms[N - 1]), regions.sum_rhs(N, l1, lam, cfg.log_base),
                                                    item.name, {"lam": lam, "N": N, "n": seq.term(N), "gamma": cfg.gamma,
                                                                "grid_level": g, **ex}))
            else:
                for N in Ns:
                    n = seq.term(N)
                    for which in ("H", "S", "SV"):
                        out.append(regions.check_lemma_T_minus_gammaF(f, lam, cfg.gamma, which, n, g, cz, item.name,
                                                                      {**ex, "N": N}))
                for region, lid in (("T", regions.SV_WEIGHTED_ON_T), ("gammaF", regions.SV_WEIGHTED_ON_F)):
                    terms = np.cumsum(regions.sv_weighted_terms(f, lam, cfg.beta, seq, Nm, region, cfg.gamma, g, cz,
                                                                cfg.log_base))
                    for N in Ns:
                        out.append(BoundRatioReport(lid, float(terms[N - 1]), regions.sum_rhs(N, l1, lam, cfg.log_base),
                                                    item.name, {"lam": lam, "N": N, "n": seq.term(N), "gamma": cfg.gamma,
                                                                "beta": cfg.beta, "grid_level": g, **ex}))
    return out


def job_lemma_item(cfg: RunConfig, kind: str, index: int) -> JobResult:
    item = corpus_for(cfg)[index]
    fails = []
    reps = _guard(fails, item.name, item_lemma_reports, cfg, item, kind) or []
    return JobResult(kind, f"{kind}_{item.name}", {"item": item.name, "rows": len(reps)}, reps, fails)


def job_e_vanishing(cfg: RunConfig) -> JobResult:
    seq = lemma_sequence(cfg)
    ls = sorted(set(E_ORDERS) | {seq.term(max(cfg.N_sweep))})
    fails, worst = [], {}
    for it in _nonzero(corpus_for(cfg)):
        for mult, lam in _lams(it.f, cfg.lambda_values):
            v = _guard(fails, f"{it.name} lam={mult}", regions.check_e_vanishing, it.f, lam, cfg.gamma, ls,
                       cfg.grid_level)
            worst[f"{it.name}/{mult}"] = v
    vals = [v for v in worst.values() if v is not None]
    return JobResult("lemmas5", "e_vanishing", {"orders": ls, "max": max(vals, default=0.0), "by_item": worst}, [], fails)


# -- orthogonality ----------------------------------------------------------------------

def job_orthogonality(cfg: RunConfig, q_index: int) -> JobResult:
    seq, N = orthogonality_sequences(cfg)[q_index]
    spec = CompositeSpec(seq, N, cfg.beta, cfg.delta, cfg.log_base)
    fails, rows = [], []
    items = _nonzero(corpus_for(cfg))
    for it in items:
        for mult, lam in _lams(it.f, cfg.lambda_values):
            cz = cz_decompose(it.f, lam)
            eq = _guard(fails, f"{it.name} lam={mult} equality", composite.check_orthogonality_equality,
                        it.f, seq, spec, lam, cz)
            win = _guard(fails, f"{it.name} lam={mult} windows", composite.check_spectral_windows, it.f, spec, lam, cz)
            if eq is not None and win is not None:
                rows.append({"item": it.name, "lam_mult": mult, "defect": eq.defect, "noise": eq.max_noise,
                             "window_noise": win.max_noise, "disjoint": eq.disjoint})
    Ns = [n for n in cfg.N_sweep if n <= N] or [N]
    reps = composite.check_orthogonality_bound(items, seq, spec, cfg.lambda_values, Ns)
    q = seq.params["q"]
    payload = {
        "q": q, "N": N, "n_N": seq.term(N),
        "max_defect": max((r["defect"] for r in rows), default=0.0),
        "max_noise": max((max(r["noise"], r["window_noise"]) for r in rows), default=0.0),
        "bound_max_ratio": {str(n): max_ratio(reps, N=n) for n in Ns},
        "rows": rows,
    }
    return JobResult("orthogonality", f"orthogonality_q{q:g}", payload, reps, fails)


# -- replacement ------------------------------------------------------------------------

def job_replacement(cfg: RunConfig) -> JobResult:
    seq = replacement_sequence(cfg)
    spec = CompositeSpec(seq, cfg.N_max, cfg.beta, cfg.delta, cfg.log_base)
    curves, consts, mono = {}, {}, True
    for g in grid_pair(cfg):
        c = 0.0
        for it in _nonzero(corpus_for(cfg)):
            mu = lp_norm(it.f, 1) / TWO_PI
            cur = composite.check_replacement(it.f, seq, spec, [m * mu for m in cfg.replacement_lambdas],
                                              cfg.N_max, g, it.name)
            c = max(c, cur.fitted_constant())
            mono = mono and cur.is_monotone()
            curves[f"g{g}/{it.name}"] = cur.to_dict()
        consts[g] = c
    g0, g1 = grid_pair(cfg)
    payload = {"fitted_constant": consts, "stable": stable_pair(consts[g0], consts[g1]), "monotone": mono,
               "sequence": seq.to_dict(), "curves": curves}
    return JobResult("replacement", "replacement_weak_type", payload)


# -- convergence ------------------------------------------------------------------------

def job_convergence(cfg: RunConfig) -> JobResult:
    Ns = list(cfg.N_sweep)
    seq = make_powers_of_two(max(Ns))
    ind = PCFunction.indicator(0.0, np.pi, max(cfg.corpus_level, 1))
    eps = (0.05, 0.1, 0.2)
    full = convergence.convergence_experiment(ind, seq, Ns, "full_average", cfg.grid_level, eps)
    sv = convergence.convergence_experiment(ind, seq, Ns, "sv_average", cfg.grid_level, eps)
    vp = convergence.check_vp_convergence(ind, seq, Ns, cfg.grid_level, eps)
    poly = TrigPoly.from_dict_coeffs({-1: 0.5 - 0.25j, 0: 1.0, 1: 0.5 + 0.25j})
    zero = convergence.convergence_experiment(poly, seq, Ns, "sv_average", cfg.grid_level, eps)
    fails = []
    if not zero.sup or max(zero.sup) != 0.0:
        fails.append(f"T_N of a degree-1 polynomial is not zero: {zero.sup}")
    payload = {
        "indicator_full_average": full.to_dict(),
        "indicator_sv_average": sv.to_dict(),
        "indicator_vp": vp.to_dict(),
        "bandlimited_sv_average": zero.to_dict(),
        "full_average_decreasing": strictly_decreasing(full.measures[0.1]),
        "vp_decreasing": strictly_decreasing(vp.measures[0.1]),
    }
    return JobResult("convergence", "indicator_convergence", payload, [], fails)


def job_corpus_convergence(cfg: RunConfig) -> JobResult:
    Ns = list(cfg.N_sweep)
    out = {}
    for s in cfg.sequences:
        seq = sequence_from_spec(s, max(Ns))
        key = json.dumps(s, sort_keys=True)
        out[key] = {it.name: convergence.convergence_experiment(it.f, seq, Ns, "full_average", cfg.grid_level).to_dict()
                    for it in corpus_for(cfg)}
    return JobResult("convergence", "corpus_convergence", out)


# -- scheduling ---------------------------------------------------------------------------

def suite_jobs(cfg: RunConfig, suite: str) -> list[tuple]:
    """``(function name, args)`` for every job of ``suite`` in merge order."""
    if suite == "all":
        return [j for s in SUITES for j in suite_jobs(cfg, s)]
    n_items = len(corpus_for(cfg))
    if suite == "kernels":
        return [("job_kernel_identities", ()), ("job_sequences", ())]
    if suite == "cz":
        return [("job_cz_invariants", ()), ("job_cz_families", ())]
    if suite == "sets":
        return [("job_overlap", ()), ("job_maximal_selection", ()), ("job_delta_audit", ())]
    if suite == "hilbert":
        return [("job_domination", ()), ("job_hilbert_weak_type", ())]
    if suite in ("lemmas34", "lemmas5"):
        lemma_sequence(cfg)
        jobs = [("job_lemma_item", (suite, i)) for i in range(n_items)]
        return jobs + ([("job_e_vanishing", ())] if suite == "lemmas5" else [])
    if suite == "orthogonality":
        return [("job_orthogonality", (i,)) for i in range(len(orthogonality_sequences(cfg)))]
    if suite == "replacement":
        return [("job_replacement", ())]
    if suite == "convergence":
        return [("job_convergence", ()), ("job_corpus_convergence", ())]
    raise ConfigError(f"unknown suite {suite!r}; choose from {', '.join(SUITES + ('all',))}")


def _run_job(cfg: RunConfig, fn: str, args: tuple) -> JobResult:
    return globals()[fn](cfg, *args)


def _lemma_summaries(results: list[JobResult], cfg: RunConfig) -> list[JobResult]:
    """Grid stability and N-trend of the max ratio for every lemma id found in the results."""
    out = []
    for kind, ids in (("lemmas34", SINGLE_ORDER_IDS + GAP_IDS), ("lemmas5", OFF_IDS + SV_SUM_IDS)):
        reps = [r for res in results if res.suite == kind for r in res.reports]
        if reps:
            summary = _ratio_summary(reps, ids, list(cfg.N_sweep), grid_pair(cfg))
            out.append(JobResult(kind, f"{kind}_summary", summary))
    return out


@dataclass
class RunResult:
    results: list
    files: list

    @property
    def failures(self) -> list[str]:
        return [f"{r.suite}/{r.name}: {m}" for r in self.results for m in r.failures]

    @property
    def reports(self) -> list[BoundRatioReport]:
        return [rep for r in self.results for rep in r.reports]


def run_suite(cfg: RunConfig, suite: str, out_dir: str | Path | None = None) -> RunResult:
    """Run every job of ``suite``; write one JSON per experiment and ``reports.csv`` when ``out_dir`` is set."""
    jobs = suite_jobs(cfg, suite)
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as ex:
            futs = [ex.submit(_run_job, cfg, fn, args) for fn, args in jobs]
            results = [f.result() for f in futs]
    else:
        results = [_run_job(cfg, fn, args) for fn, args in jobs]
    results += _lemma_summaries(results, cfg)
    files = []
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for r in results:
            p = out / r.suite / f"{r.name}.json"
            p.parent.mkdir(parents=True, exist_ok=True)
            p.write_text(json.dumps(r.to_dict(), indent=1, sort_keys=True))
            files.append(p)
        csv_path = out / "reports.csv"
        csv_path.write_text(reports_to_csv([rep for r in results for rep in r.reports]))
        files.append(csv_path)
        summary = {"suite": suite, "config": cfg.to_dict(), "experiments": [f"{r.suite}/{r.name}" for r in results],
                   "failures": [f"{r.suite}/{r.name}: {m}" for r in results for m in r.failures]}
        s = out / "summary.json"
        s.write_text(json.dumps(_jsonable(summary), indent=1, sort_keys=True))
        files.append(s)
    return RunResult(results, files)
