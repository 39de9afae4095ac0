"""Command-line driver: ``sublis <subcommand> ...``.

Every estimator subcommand writes CSV (header plus one row per trial and a
summary row) to stdout or ``--output``. Configuration problems exit with
status 2.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .bench import (ConfigError, ExperimentConfig, generate, rows_to_csv, run_experiment,
                    write_generated)
from .oracle import QueryOracle, make_rng, read_instance, write_instance
from .sqrt import estimate_lis_multiplicative, split_chain


def _seed_default() -> str:
    return os.environ.get("SUBLIS_SEED", "0")


def _common(p: argparse.ArgumentParser, *, eps: bool = True) -> None:
    p.add_argument("--input", required=True, help="instance file")
    if eps:
        p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--output", help="CSV path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sublis", description="Sublinear LIS estimation and monotonicity testing")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write an instance file")
    g.add_argument("--family", required=True,
                   help="identity|reversed|sawtooth|constant|half-decreasing|random-r|D0|D1|Dh|erase-overlay")
    g.add_argument("--n", type=int)
    g.add_argument("--scales", help="comma-separated decreasing levels, e.g. 7,3")
    g.add_argument("--variant", type=int)
    g.add_argument("--r", type=int)
    g.add_argument("--alpha", type=float, default=0.0, help="fraction of positions to erase")
    g.add_argument("--blowup", type=int, default=1)
    g.add_argument("--base", help="base instance for erase-overlay")
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--out", required=True)

    e = sub.add_parser("er-test", help="erasure-resilient monotonicity tester")
    _common(e)

    a = sub.add_parser("lis-add", help="additive-error LIS estimator")
    _common(a)
    a.add_argument("--r", type=int, required=True)
    a.add_argument("--large-sample", action="store_true", help="use the larger per-subarray sample size")

    s = sub.add_parser("lis-sqrt", help="multiplicative LIS estimator")
    _common(s)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--lambda", dest="lam", type=float, default=1.0)
    s.add_argument("--sweep", action="store_true", help="try lambda = 1, 1/2, 1/4, ...")
    s.add_argument("--diag", help="write a grid and chain report for the first trial")

    x = sub.add_parser("exact", help="exact LIS and distances of an instance")
    x.add_argument("--input", required=True)
    x.add_argument("--output")

    ex = sub.add_parser("experiment", help="run a key=value config file")
    ex.add_argument("--config", required=True)
    ex.add_argument("--output")
    return ap


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _seed(args) -> str:
    return str(args.seed) if args.seed is not None else _seed_default()


def _cmd_generate(args) -> None:
    try:
        seed = int(os.environ.get("SUBLIS_SEED", args.seed if args.seed is not None else 0))
    except ValueError:
        raise ConfigError("SUBLIS_SEED is not an integer") from None
    rng = make_rng(seed)
    if args.family == "erase-overlay":
        if not args.base:
            raise ConfigError("erase-overlay needs --base")
        try:
            base = read_instance(args.base)
        except (OSError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
        write_instance(args.out, base.with_erasures(args.alpha, rng))
        return
    if not args.n:
        raise ConfigError("--n is required")
    try:
        scales = tuple(int(v) for v in args.scales.split(",")) if args.scales else None
    except ValueError:
        raise ConfigError(f"bad --scales {args.scales!r}") from None
    arr, labels = generate(args.family, args.n, rng, scales=scales, r=args.r, alpha=args.alpha,
                           blowup=args.blowup, variant=args.variant)
    write_generated(args.out, arr, labels)


def _config_from_args(args, algorithm: str) -> ExperimentConfig:
    items = {"algorithm": algorithm, "input": args.input, "seed": _seed(args)}
    for key in ("epsilon", "trials", "r"):
        if getattr(args, key, None) is not None:
            items[key] = str(getattr(args, key))
    if algorithm == "lis-sqrt":
        items["lambda"] = str(args.lam)
        items["sweep"] = str(args.sweep)
    if algorithm == "lis-add":
        items["large_sample"] = str(args.large_sample)
    return ExperimentConfig.from_mapping(items)


def diag_report(arr, cfg: ExperimentConfig) -> str:
    rep = estimate_lis_multiplicative(QueryOracle(arr), cfg.r or arr.r or arr.distinct_count(),
                                      cfg.lam, cfg.epsilon, make_rng(cfg.trial_seed(0)))
    pipe = rep.diagnostics["pipeline"]
    lines = [f"estimate {rep.estimate!r}", f"queries {rep.query_count}"]
    lines += [f"param {k} {v}" for k, v in sorted(rep.params.items())]
    if pipe.grid is not None:
        g = pipe.grid
        lines.append(f"grid subarrays={g.x} layers={g.layers.count} dense={int(g.dense.sum())}")
        for i, j in g.dense_boxes():
            lo, hi = g.layers.interval(j)
            lines.append(f"box subarray={i} layer={j} values=({lo!r}, {hi!r}] density={g.density[i, j]:.6f}")
    lines.append(f"cells {len(pipe.cells)} antichains_removed {len(pipe.removed)}")
    for k, (ch, (lh, lv)) in enumerate(zip(pipe.chains, pipe.chain_estimates)):
        C_H, C_V = split_chain(ch)
        lines.append(f"chain {k} boxes={len(ch.boxes)} cells={ch.cells} horizontal={lh!r} vertical={lv!r}")
        for b in C_H:
            lines.append(f"  H {b.boxes}")
        for b in C_V:
            lines.append(f"  V {b.boxes}")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "generate":
            _cmd_generate(args)
            return 0
        if args.command == "experiment":
            cfg = ExperimentConfig.from_file(args.config)
            out = args.output or cfg.output
        elif args.command == "exact":
            cfg = ExperimentConfig.from_mapping({"algorithm": "exact", "input": args.input})
            out = args.output
        else:
            cfg = _config_from_args(args, args.command)
            out = args.output
        rows = run_experiment(cfg)
        _emit(rows_to_csv(rows, cfg.algorithm), out)
        if args.command == "lis-sqrt" and args.diag:
            Path(args.diag).write_text(diag_report(read_instance(cfg.input), cfg))
    except ConfigError as exc:
        print(f"sublis: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
