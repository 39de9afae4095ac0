"""Instance generators, experiment configuration and the CSV trial runner."""

from __future__ import annotations

import csv
import io
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import hard
from .additive import estimate_lis_additive
from .exact import distance_to_monotonicity, erased_distance, is_completable_monotone, lis_exact
from .oracle import ErasedArray, QueryOracle, make_rng, read_instance, write_instance
from .sqrt import estimate_lis_multiplicative, lambda_sweep
from .tester import er_test

SCHEMA_VERSION = 1
BASE_COLUMNS = ["schema_version", "algorithm", "n", "r", "epsilon", "lambda", "alpha", "trial",
                "seed", "estimate", "ground_truth", "abs_error", "query_count", "decision",
                "wall_time_ms"]
EXTRA_COLUMNS = {
    "er-test": ["capped"],
    "lis-add": ["t", "s"],
    "lis-sqrt": ["lambda_used", "chains", "dense_boxes", "cells"],
    "exact": ["lis", "distance", "erased_distance", "distinct"],
    "distance": [],
}
TIMING_COLUMNS = {"wall_time_ms"}
FAMILIES = ("identity", "reversed", "sawtooth", "constant", "half-decreasing", "random-r",
            "D0", "D1", "Dh")


class ConfigError(ValueError):
    """Bad configuration or instance input."""


# --- generators ---------------------------------------------------------------

def sawtooth(n: int, period: int = 4) -> np.ndarray:
    i = np.arange(1, n + 1)
    return period * np.ceil(i / period).astype(np.int64) - (i - 1) % period


def half_decreasing(n: int) -> np.ndarray:
    """Increasing first half then decreasing second half (LIS about n/2)."""
    h = n // 2
    return np.concatenate([np.arange(1, h + 1), np.arange(n, h, -1)])


def random_blockwise(n: int, r: int, rng, blocks: int | None = None) -> np.ndarray:
    """Constant blocks whose values are drawn from ``1..r``."""
    blocks = blocks or 4 * r
    vals = rng.integers(1, r + 1, size=blocks)
    return vals[(np.arange(n) * blocks) // n]


def generate(family: str, n: int, rng=None, *, scales=None, r: int | None = None,
             alpha: float = 0.0, blowup: int = 1, variant: int | None = None):
    """Build an instance; returns ``(ErasedArray, labels or None)``.

    With ``blowup > 1`` a base instance of length ``n // blowup`` is built and
    each entry repeated, which keeps the LIS fraction and caps the number of
    distinct values.
    """
    rng = make_rng(rng)
    if blowup < 1 or n % blowup:
        raise ConfigError("blowup must divide n")
    m = n // blowup
    labels = None
    if family == "identity":
        v = np.arange(1, m + 1)
    elif family == "reversed":
        v = np.arange(m, 0, -1)
    elif family == "sawtooth":
        v = sawtooth(m)
    elif family == "constant":
        v = np.ones(m)
    elif family == "half-decreasing":
        v = half_decreasing(m)
    elif family == "random-r":
        if not r:
            raise ConfigError("random-r needs r")
        v = random_blockwise(m, r, rng)
    elif family in ("D0", "D1", "Dh"):
        if scales is None:
            raise ConfigError(f"{family} needs scales")
        var = {"D0": 0, "D1": 1}.get(family, variant)
        if var not in (0, 1):
            raise ConfigError("Dh needs variant 0 or 1")
        try:
            if family == "Dh" or len(scales) > 2:
                v, labels = hard.sample_Dh(m, var, tuple(scales), rng)
            else:
                v, labels = hard.sample_D(m, var, tuple(scales), rng)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    else:
        raise ConfigError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    v = hard.blow_up(v, blowup) if blowup > 1 else np.asarray(v)
    distinct = int(np.unique(v).size)
    arr = ErasedArray(v, r=r if r is not None else distinct)
    if alpha:
        arr = arr.with_erasures(alpha, rng)
    return arr, labels


def write_labels(path, labels) -> None:
    Path(path).write_text(_format_labels(labels) + "\n")


def _format_labels(labels) -> str:
    if isinstance(labels, np.ndarray):
        return " ".join(str(int(c)) for c in labels)
    lines = []

    def walk(tree, depth):
        if isinstance(tree, np.ndarray):
            lines.append("  " * depth + " ".join(str(int(c)) for c in tree))
            return
        for kind, left, right in tree:
            lines.append("  " * depth + kind)
            walk(left, depth + 1)
            walk(right, depth + 1)

    walk(labels, 0)
    return "\n".join(lines)


# --- configuration ----------------------------------------------------------------

_KEYS = {
    "algorithm": str, "input": str, "family": str, "n": int, "r": int, "epsilon": float,
    "lambda": float, "alpha": float, "scales": str, "variant": int, "blowup": int,
    "trials": int, "seed": int, "output": str, "gt_cap": int, "workers": int, "sweep": bool,
    "large_sample": bool, "regenerate": bool, "tolerance": float,
}


def _parse_bool(s: str) -> bool:
    if s.lower() in ("1", "true", "yes", "on"):
        return True
    if s.lower() in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {s!r}")


@dataclass
class ExperimentConfig:
    algorithm: str
    input: str | None = None
    family: str | None = None
    n: int | None = None
    r: int | None = None
    epsilon: float = 0.1
    lam: float = 1.0
    alpha: float = 0.0
    scales: tuple | None = None
    variant: int | None = None
    blowup: int = 1
    trials: int = 1
    seed: int = 0
    output: str | None = None
    gt_cap: int = 1 << 20
    workers: int = 1
    sweep: bool = False
    large_sample: bool = False
    regenerate: bool = False
    extra: dict = field(default_factory=dict)

    def trial_seed(self, i: int) -> int:
        return self.seed + i

    def validate(self) -> None:
        if self.algorithm not in EXTRA_COLUMNS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}; expected one of {', '.join(EXTRA_COLUMNS)}")
        if (self.input is None) == (self.family is None):
            raise ConfigError("give exactly one of input= or family=")
        if self.family is not None and not self.n:
            raise ConfigError("family instances need n")
        if self.trials < 1:
            raise ConfigError("trials must be positive")
        if self.r is not None and self.r < 1:
            raise ConfigError("r must be at least 1")
        if self.algorithm in ("er-test", "lis-add", "lis-sqrt") and not 0 < self.epsilon < 1:
            raise ConfigError("epsilon must lie in (0, 1)")
        if self.algorithm == "lis-sqrt" and not 0 < self.lam <= 1:
            raise ConfigError("lambda must lie in (0, 1]")

    @classmethod
    def from_mapping(cls, items: dict) -> "ExperimentConfig":
        kw = {}
        for key, raw in items.items():
            if key not in _KEYS:
                raise ConfigError(f"unknown config key {key!r}")
            typ = _KEYS[key]
            try:
                val = _parse_bool(raw) if typ is bool else typ(raw)
                if key == "scales":
                    val = tuple(int(s) for s in str(val).split(",") if s)
            except ValueError:
                raise ConfigError(f"bad value for {key}: {raw!r}") from None
            if key == "tolerance":
                kw.setdefault("extra", {})[key] = val
            else:
                kw["lam" if key == "lambda" else key] = val
        if "algorithm" not in kw:
            raise ConfigError("config needs algorithm=")
        cfg = cls(**kw)
        env = os.environ.get("SUBLIS_SEED")
        if env is not None:
            try:
                cfg.seed = int(env)
            except ValueError:
                raise ConfigError(f"SUBLIS_SEED is not an integer: {env!r}") from None
        cfg.validate()
        return cfg

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        items = {}
        for num, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{num}: expected key=value")
            k, v = line.split("=", 1)
            items[k.strip()] = v.strip()
        return cls.from_mapping(items)


# --- running ---------------------------------------------------------------------

def load_instance(cfg: ExperimentConfig, seed: int) -> ErasedArray:
    if cfg.input is not None:
        try:
            return read_instance(cfg.input)
        except (OSError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
    arr, _ = generate(cfg.family, cfg.n, make_rng([seed, 0x5EED]), scales=cfg.scales, r=cfg.r,
                      alpha=cfg.alpha, blowup=cfg.blowup, variant=cfg.variant)
    return arr


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else str(v)
    return str(v)


def run_trial(cfg: ExperimentConfig, i: int, arr: ErasedArray | None = None) -> dict:
    """One CSV row (as a dict of strings) for trial ``i``."""
    seed = cfg.trial_seed(i)
    if arr is None:
        arr = load_instance(cfg, seed)
    r = cfg.r or arr.r or arr.distinct_count()
    row = {"schema_version": SCHEMA_VERSION, "algorithm": cfg.algorithm, "n": arr.n, "r": r,
           "epsilon": cfg.epsilon, "lambda": cfg.lam, "alpha": arr.erased_fraction,
           "trial": i, "seed": seed}
    want_gt = arr.n <= cfg.gt_cap
    oracle = QueryOracle(arr)
    rng = make_rng(seed)
    t0 = time.perf_counter()
    gt = None
    decision = ""
    if cfg.algorithm == "er-test":
        v = er_test(oracle, cfg.epsilon, rng)
        est, decision = None, v.decision
        row["capped"] = v.capped_runs
        if want_gt:
            gt = float(erased_distance(arr))
    elif cfg.algorithm == "lis-add":
        rep = estimate_lis_additive(oracle, r, cfg.epsilon, rng, large_sample=cfg.large_sample)
        est = rep.estimate
        row.update(t=rep.params["t"], s=rep.params["s"])
    elif cfg.algorithm == "lis-sqrt":
        if cfg.sweep:
            rep = lambda_sweep(oracle, r, cfg.epsilon, rng)
            lam_used, diag = rep.params["lambda_used"], rep.diagnostics["best"]
        else:
            rep = estimate_lis_multiplicative(oracle, r, cfg.lam, cfg.epsilon, rng)
            lam_used, diag = cfg.lam, rep.diagnostics
        est = rep.estimate
        row.update(lambda_used=lam_used, chains=diag["chains"], dense_boxes=diag["dense_boxes"],
                   cells=diag["cells"])
    elif cfg.algorithm == "exact":
        vals = arr.nonerased_values()
        lis = lis_exact(vals)
        est = float(lis)
        row.update(lis=lis, distance=int(vals.size - lis) if not arr.has_erasures else "",
                   erased_distance=erased_distance(arr), distinct=arr.distinct_count())
        want_gt = False
    elif cfg.algorithm == "distance":
        est = distance_to_monotonicity(arr.values) / arr.n
        want_gt = False
    else:  # pragma: no cover - validated earlier
        raise ConfigError(cfg.algorithm)
    if want_gt and cfg.algorithm in ("lis-add", "lis-sqrt"):
        gt = float(lis_exact(arr.nonerased_values()))
    if cfg.algorithm == "er-test" and gt is not None:
        expected = ("Accept" if is_completable_monotone(arr)
                    else "Reject" if gt >= cfg.epsilon * arr.n else "")
        row["abs_error"] = "" if not expected else int(decision != expected)
    row.update(estimate=est, ground_truth=gt, query_count=oracle.count, decision=decision,
               wall_time_ms=round((time.perf_counter() - t0) * 1000, 3))
    if cfg.algorithm != "er-test":
        row["abs_error"] = abs(est - gt) if (gt is not None and est is not None) else None
    return {k: _fmt(v) for k, v in row.items()}


def _success(cfg: ExperimentConfig, row: dict) -> bool | None:
    if cfg.algorithm == "er-test":
        return None if row["abs_error"] == "" else row["abs_error"] == "0"
    if row["ground_truth"] == "" or row["estimate"] == "":
        return None
    est, gt, n = float(row["estimate"]), float(row["ground_truth"]), int(row["n"])
    if cfg.algorithm == "lis-add":
        tol = cfg.extra.get("tolerance", cfg.epsilon)
        return abs(est - gt) <= tol * n
    if cfg.algorithm == "lis-sqrt":
        return cfg.lam * gt / 100 <= est <= 3 * gt
    return None


def summarize(cfg: ExperimentConfig, rows: list[dict]) -> dict:
    """Mean and spread of the estimates and the fraction of successful trials."""
    ests = [float(r["estimate"]) for r in rows if r["estimate"] != ""]
    gts = [float(r["ground_truth"]) for r in rows if r["ground_truth"] != ""]
    flags = [s for s in (_success(cfg, r) for r in rows) if s is not None]
    out = {c: "" for c in columns_for(cfg.algorithm)}
    out.update(schema_version=str(SCHEMA_VERSION), algorithm=cfg.algorithm, trial="summary",
               n=rows[0]["n"], r=rows[0]["r"], epsilon=rows[0]["epsilon"], seed=str(cfg.seed),
               estimate=_fmt(float(np.mean(ests))) if ests else "",
               ground_truth=_fmt(float(np.mean(gts))) if gts else "",
               abs_error=_fmt(float(np.std(ests))) if ests else "",
               query_count=_fmt(float(np.mean([int(r["query_count"]) for r in rows]))),
               decision=f"success={len([f for f in flags if f])}/{len(flags)}" if flags else "")
    if cfg.algorithm == "er-test":
        rej = sum(r["decision"] == "Reject" for r in rows)
        out["estimate"] = _fmt(rej / len(rows))
    return out


def columns_for(algorithm: str) -> list[str]:
    return BASE_COLUMNS + EXTRA_COLUMNS[algorithm]


def _trial_job(args):
    cfg, i, arr = args
    return run_trial(cfg, i, arr)


def run_experiment(cfg: ExperimentConfig) -> list[dict]:
    """All trial rows (in trial order) followed by a summary row."""
    cfg.validate()
    shared = None
    if cfg.input is not None or (not cfg.regenerate and cfg.algorithm != "distance"):
        shared = load_instance(cfg, cfg.seed)
    if cfg.workers > 1 and cfg.trials > 1:
        jobs = [(cfg, i, shared) for i in range(cfg.trials)]
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(_trial_job, jobs))  # map keeps trial order
    else:
        rows = [run_trial(cfg, i, shared) for i in range(cfg.trials)]
    return rows + [summarize(cfg, rows)]


def rows_to_csv(rows: list[dict], algorithm: str) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns_for(algorithm), extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def write_generated(path, arr: ErasedArray, labels=None) -> None:
    write_instance(path, arr)
    if labels is not None:
        write_labels(str(path) + ".labels", labels)
