"""Monte Carlo survival experiments and decay analysis.

Each trial samples a presentation, searches GL_k(GF(q))^m exhaustively and
records how many surviving tuples fall in each image class. Results go to
an append-only JSON-lines file keyed by (q, u, trial), so an interrupted
run resumes where it stopped.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np
from scipy import stats

from . import CapExceeded
from .freegroup import relator_count, sample_presentation
from .matrep import (SUBGROUP_CAP, TUPLE_CAP, WORD_CAP, TupleSpace, as_field, exact_survival_curve,
                     large_survival_probabilities, search_representations, union_bound_curve)

log = logging.getLogger(__name__)

TIMING_FIELDS = ("elapsed_ms",)


class InsufficientData(ValueError):
    pass


def derive_seed(master_seed: int, q: int, u: int, trial: int) -> int:
    """64-bit seed for one trial, independent of execution order."""
    key = f"{int(master_seed)}:{int(q)}:{int(u)}:{int(trial)}".encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8, person=b"randrep-trial").digest(), "little")


def _parse_u(value) -> list[int]:
    if value is None:
        return []
    if isinstance(value, int):
        return [value]
    if isinstance(value, str):
        if ".." in value:
            lo, hi = value.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(tok) for tok in value.replace(",", " ").split()]
    if isinstance(value, dict):
        return list(range(int(value["start"]), int(value["stop"]) + 1, int(value.get("step", 1))))
    return [int(x) for x in value]


@dataclass
class ExperimentConfig:
    m: int
    k: int
    l: int
    fields: list = field(default_factory=lambda: [5])
    u: list = field(default_factory=list)
    density: object = None
    trials: int = 100
    master_seed: int = 0
    tuple_cap: int = TUPLE_CAP
    subgroup_cap: int = SUBGROUP_CAP
    word_cap: int = WORD_CAP
    exact: bool = False
    output: str | None = None
    threads: int = 1

    def __post_init__(self):
        self.u = _parse_u(self.u)
        self.fields = [int(q) for q in (self.fields if isinstance(self.fields, (list, tuple)) else [self.fields])]

    def validate(self) -> "ExperimentConfig":
        if self.m < 2:
            raise ValueError("m must be >= 2")
        if self.k < 1 or self.l < 1:
            raise ValueError("k and l must be >= 1")
        if not self.fields:
            raise ValueError("at least one field order is required")
        if bool(self.u) == (self.density is not None):
            raise ValueError("give exactly one of u (relator counts) and density")
        if any(u < 0 for u in self.u):
            raise ValueError("relator counts must be >= 0")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        for q in self.fields:
            as_field(q)
        if self.density is not None:
            relator_count(self.m, self.l, self.density)
        return self

    def u_values(self) -> list[int]:
        if self.density is not None:
            return [relator_count(self.m, self.l, self.density)]
        return list(self.u)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        data = json.loads(text)
        known = set(cls.__dataclass_fields__)
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        return cls(**data)

    def tasks(self) -> list[tuple]:
        return [(q, u, trial) for q in self.fields for u in self.u_values() for trial in range(self.trials)]


# per-process caches, rebuilt in each worker
_SPACES: dict = {}
_EXACT: dict = {}


def _space(m, k, q, cap):
    key = (m, k, q)
    if key not in _SPACES:
        _SPACES[key] = TupleSpace(m, k, q, cap)
    return _SPACES[key]


def _exact_curve(cfg, q):
    key = (cfg.m, cfg.k, q, cfg.l, max(cfg.u_values()))
    if key not in _EXACT:
        try:
            space = _space(cfg.m, cfg.k, q, cfg.tuple_cap)
            _EXACT[key] = exact_survival_curve(cfg.m, cfg.k, q, cfg.l, key[-1], space=space,
                                               word_cap=cfg.word_cap)
        except CapExceeded as exc:
            log.warning("no exact oracle for q=%s: %s", q, exc)
            _EXACT[key] = None
    return _EXACT[key]


def run_trial(cfg: ExperimentConfig, q: int, u: int, trial: int, emit_survivors: bool = False) -> dict:
    seed = derive_seed(cfg.master_seed, q, u, trial)
    rec = {"m": cfg.m, "k": cfg.k, "q": q, "l": cfg.l, "u": u, "trial": trial, "seed": seed}
    if cfg.density is not None:
        rec["density"] = str(cfg.density)
    t0 = time.perf_counter()
    try:
        space = _space(cfg.m, cfg.k, q, cfg.tuple_cap)
        P = sample_presentation(cfg.m, cfg.l, count=u, seed=seed)
        res = search_representations(P, cfg.k, q, space=space, emit_survivors=emit_survivors)
    except CapExceeded as exc:
        rec.update(status="cap_exceeded", error=str(exc), elapsed_ms=(time.perf_counter() - t0) * 1e3)
        return rec
    rec.update(n_trivial=res.n_trivial, n_order2=res.n_order2, n_large=res.n_large, status="ok")
    if emit_survivors:
        rec["survivors"] = [[list(A) for A in t.mats] for t in res.survivors]
    if cfg.exact:
        curve = _exact_curve(cfg, q)
        if curve is not None:
            rec["exact"] = str(curve[u])
    rec["elapsed_ms"] = (time.perf_counter() - t0) * 1e3
    return rec


def _run_chunk(args):
    cfg_json, chunk, emit = args
    cfg = ExperimentConfig.from_json(cfg_json)
    return [run_trial(cfg, q, u, t, emit) for q, u, t in chunk]


def read_records(path) -> list[dict]:
    if not path or not os.path.exists(path):
        return []
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(json.loads(line))
    return out


def record_key(rec) -> tuple:
    return (rec["q"], rec["u"], rec["trial"])


def comparable(rec) -> dict:
    """Record without its timing fields."""
    return {k: v for k, v in rec.items() if k not in TIMING_FIELDS}


def run_experiment(cfg: ExperimentConfig, emit_survivors: bool = False) -> Iterator[dict]:
    """Run every (q, u, trial) not already in ``cfg.output``; yield the new records.

    The task list is fixed by the config, and each trial seeds itself from
    (master_seed, q, u, trial), so the records do not depend on ``threads``.
    """
    cfg.validate()
    done = {record_key(r) for r in read_records(cfg.output)}
    todo = [t for t in cfg.tasks() if t not in done]
    log.info("%d tasks, %d already recorded", len(cfg.tasks()), len(cfg.tasks()) - len(todo))
    out = open(cfg.output, "a") if cfg.output else None
    try:
        for rec in _execute(cfg, todo, emit_survivors):
            if out is not None:
                out.write(json.dumps(rec, sort_keys=True) + "\n")
                out.flush()
            yield rec
    finally:
        if out is not None:
            out.close()


def _execute(cfg, todo, emit):
    if cfg.threads == 1 or len(todo) < 2:
        for q, u, t in todo:
            yield run_trial(cfg, q, u, t, emit)
        return
    size = max(1, math.ceil(len(todo) / (cfg.threads * 8)))
    chunks = [todo[i:i + size] for i in range(0, len(todo), size)]
    cfg_json = cfg.to_json()
    with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
        for recs in pool.map(_run_chunk, [(cfg_json, c, emit) for c in chunks]):
            yield from recs


# -- analysis -----------------------------------------------------------------

@dataclass
class DecayPoint:
    u: int
    trials: int
    failures: int
    freq: float
    ci_lo: float
    ci_hi: float
    sigma: float
    reported: float  # freq, or the one-sided 95% upper bound when nothing failed
    exact: Fraction | None = None
    union_bound: Fraction | None = None


@dataclass
class DecayReport:
    m: int
    k: int
    q: int
    l: int
    points: list
    slope: float
    slope_stderr: float
    intercept: float

    def as_dict(self):
        pts = []
        for p in self.points:
            d = asdict(p)
            for key in ("exact", "union_bound"):
                if d[key] is not None:
                    d[key + "_float"] = float(d[key])
                    d[key] = str(d[key])
            pts.append(d)
        return {"m": self.m, "k": self.k, "q": self.q, "l": self.l, "slope": self.slope,
                "slope_stderr": self.slope_stderr, "intercept": self.intercept, "points": pts}

    def csv_rows(self):
        yield ["u", "trials", "failures", "freq", "ci_lo", "ci_hi", "union_bound"]
        for p in self.points:
            ub = "" if p.union_bound is None else repr(float(p.union_bound))
            yield [p.u, p.trials, p.failures, repr(p.freq), repr(p.ci_lo), repr(p.ci_hi), ub]


def clopper_pearson(failures: int, trials: int, level: float = 0.95) -> tuple[float, float]:
    a = 1 - level
    lo = 0.0 if failures == 0 else float(stats.beta.ppf(a / 2, failures, trials - failures + 1))
    hi = 1.0 if failures == trials else float(stats.beta.ppf(1 - a / 2, failures + 1, trials - failures))
    return lo, hi


def one_sided_upper(failures: int, trials: int, level: float = 0.95) -> float:
    if failures == trials:
        return 1.0
    return float(stats.beta.ppf(level, failures + 1, trials - failures))


def fit_log_slope(us, freqs, trials) -> tuple[float, float, float]:
    """Weighted least squares of ln(freq) on u; returns (slope, stderr, intercept).

    Weights use the binomial delta-method variance (1 - f) / (n f) of ln f.
    """
    x = np.asarray(us, dtype=float)
    f = np.asarray(freqs, dtype=float)
    n = np.asarray(trials, dtype=float)
    y = np.log(f)
    w = n * f / np.maximum(1 - f, 1e-300)
    W = w.sum()
    xm, ym = (w * x).sum() / W, (w * y).sum() / W
    sxx = (w * (x - xm) ** 2).sum()
    slope = (w * (x - xm) * (y - ym)).sum() / sxx
    return float(slope), float(math.sqrt(1.0 / sxx)), float(ym - slope * xm)


def analyze_decay(records: Iterable[dict], exact: dict | None = None, union: dict | None = None) -> DecayReport:
    """Failure frequency per u (failure: at least one large-image survivor)."""
    recs = [r for r in records if r.get("status", "ok") == "ok"]
    groups = {(r["m"], r["k"], r["q"], r["l"]) for r in recs}
    if len(groups) != 1:
        raise InsufficientData(f"expected records of one (m, k, q, l), found {sorted(groups)}")
    (m, k, q, l), = groups
    by_u: dict[int, list[int]] = {}
    for r in recs:
        by_u.setdefault(r["u"], []).append(r["n_large"] > 0)
    if exact is None:
        exact = {r["u"]: Fraction(r["exact"]) for r in recs if "exact" in r}
    points = []
    for u in sorted(by_u):
        fails = by_u[u]
        n, s = len(fails), sum(fails)
        f = s / n
        lo, hi = clopper_pearson(s, n)
        points.append(DecayPoint(
            u=u, trials=n, failures=s, freq=f, ci_lo=lo, ci_hi=hi,
            sigma=math.sqrt(f * (1 - f) / n),
            reported=f if s else one_sided_upper(0, n),
            exact=(exact or {}).get(u), union_bound=(union or {}).get(u)))
    if sum(1 for p in points if p.failures) < 3:
        raise InsufficientData("need at least 3 values of u with observed failures")
    usable = [p for p in points if 0 < p.freq < 1]
    if len(usable) < 2:
        raise InsufficientData("need at least 2 values of u with failure frequency strictly in (0, 1)")
    slope, se, icept = fit_log_slope([p.u for p in usable], [p.freq for p in usable],
                                     [p.trials for p in usable])
    return DecayReport(m, k, q, l, points, slope, se, icept)


def oracle_overlay(m: int, k: int, q: int, l: int, u_max: int, **caps) -> tuple[dict, dict]:
    """Exact failure curve and exact union bound, keyed by u."""
    space = TupleSpace(m, k, q, caps.get("tuple_cap", TUPLE_CAP))
    curve = exact_survival_curve(m, k, q, l, u_max, space=space, word_cap=caps.get("word_cap", WORD_CAP))
    ps = large_survival_probabilities(m, k, q, l, space=space, cap=caps.get("subgroup_cap", SUBGROUP_CAP))
    ub = union_bound_curve(ps, u_max)
    return dict(enumerate(curve)), dict(enumerate(ub))


def analyze_records(records: list[dict], with_oracle: bool = False) -> list[DecayReport]:
    groups: dict[tuple, list[dict]] = {}
    for r in records:
        if r.get("status", "ok") == "ok":
            groups.setdefault((r["m"], r["k"], r["q"], r["l"]), []).append(r)
    reports = []
    for key in sorted(groups):
        recs = groups[key]
        exact = union = None
        if with_oracle:
            m, k, q, l = key
            try:
                exact, union = oracle_overlay(m, k, q, l, max(r["u"] for r in recs))
            except CapExceeded as exc:
                log.warning("no oracle overlay for %s: %s", key, exc)
        reports.append(analyze_decay(recs, exact, union))
    return reports
