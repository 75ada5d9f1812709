"""Command-line front end.

Subcommands: ``simulate`` (trajectory experiments), ``enumerate`` (exact
probability tables), ``certify`` (contraction certificates), ``crosscheck``
(Monte Carlo versus exact engine).  Every successful run writes result files
plus a manifest into the output directory; the manifest stream is append-only
and each result file names the manifest that produced it.

Exit codes: 0 success, 1 check failure, 2 argument error, 3 corrupt state.
"""

from __future__ import annotations

import argparse
import datetime
import hashlib
import json
import os
import sys
import warnings
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .checkpoint import CheckpointError, CheckpointStore
from .dyadic import Dyadic
from .engine import EngineParams, certify, compute_tables, kstep_prob
from .lattice import Boundary, ModelParams
from .montecarlo import (
    ExperimentSpec,
    ExplicitWord,
    RandomUnstableBlock,
    UniformRandomBox,
    check_window_estimate,
    run_experiment,
    write_aggregate_csv,
    write_trajectories_jsonl,
)
from .render import (
    certificate_to_json,
    certificate_to_text,
    tables_from_json,
    tables_to_json,
    tables_to_text,
)
from .windows import WindowClass

OK, CHECK_FAILED, USAGE, CORRUPT = 0, 1, 2, 3


def _out_dir(args) -> Path:
    out = args.out or os.environ.get("CANDYFIX_OUT") or "runs"
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _run_id(command: str, payload: dict) -> str:
    blob = json.dumps({"command": command, "version": __version__, **payload},
                      sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


class _Manifest:
    def __init__(self, out: Path, command: str, payload: dict, exploratory: bool = False):
        self.out = out
        self.run_id = _run_id(command, payload)
        self.record = {
            "run_id": self.run_id,
            "command": command,
            "parameters": payload,
            "version": __version__,
            "exploratory": exploratory,
            "started": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            "outputs": [],
        }

    def add(self, path: Path) -> Path:
        self.record["outputs"].append(path.name)
        return path

    def close(self) -> None:
        self.record["finished"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
        with open(self.out / f"manifest-{self.run_id}.json", "w") as fh:
            json.dump(self.record, fh, indent=1, sort_keys=True)
        with open(self.out / "manifests.jsonl", "a") as fh:
            fh.write(json.dumps(self.record, sort_keys=True) + "\n")


def _parse_dist(text: str) -> tuple[Fraction, ...]:
    return tuple(Fraction(tok) for tok in text.split(","))


def _fail(message: str, code: int = USAGE) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


# --------------------------------------------------------------------------
# simulate
# --------------------------------------------------------------------------


def cmd_simulate(args) -> int:
    try:
        dist = _parse_dist(args.p) if args.p else tuple(
            Fraction(1, args.n) for _ in range(args.n))
        params = ModelParams(d=args.d, n=args.n, kappa=args.kappa, recolor_dist=dist)
    except (ValueError, ZeroDivisionError) as exc:
        return _fail(str(exc))
    try:
        if args.init.startswith("word:"):
            initial = ExplicitWord(tuple(int(c) for c in args.init[5:]))
        elif args.init == "block":
            initial = RandomUnstableBlock(args.M)
        elif args.init == "box":
            shape = tuple(int(s) for s in args.extent.split(","))
            initial = UniformRandomBox(shape)
        else:
            return _fail(f"unknown initial condition {args.init!r}")
        spec = ExperimentSpec(
            params=params,
            initial=initial,
            boundary=Boundary(args.boundary),
            t_max=args.t_max,
            trials=args.trials,
            seed=args.seed,
        )
    except ValueError as exc:
        return _fail(str(exc))

    out = _out_dir(args)
    payload = {
        "d": params.d, "n": params.n, "kappa": params.kappa,
        "p": [str(x) for x in params.recolor_dist],
        "init": args.init, "M": args.M, "extent": args.extent,
        "boundary": spec.boundary.value, "t_max": spec.t_max,
        "trials": spec.trials, "seed": spec.seed,
    }
    manifest = _Manifest(out, "simulate", payload,
                         exploratory=not spec.theorem_setting)
    stats = run_experiment(spec, threads=args.threads)
    write_trajectories_jsonl(manifest.add(out / "trajectories.jsonl"), stats,
                             manifest.run_id)
    write_aggregate_csv(manifest.add(out / "aggregate.csv"), stats)
    manifest.close()
    fixated = sum(1 for s in stats if s.fixation_time is not None)
    times = [s.fixation_time for s in stats if s.fixation_time is not None]
    print(f"trials {spec.trials}, fixated {fixated}")
    if times:
        print(f"fixation_time min {min(times)} max {max(times)}")
        if spec.trials == 1:
            print(f"fixation_time {times[0]}")
    print(f"results in {out}")
    return OK


# --------------------------------------------------------------------------
# enumerate
# --------------------------------------------------------------------------


def _engine_from_args(args) -> EngineParams:
    dist = _parse_dist(args.p) if args.p else tuple(
        Fraction(1, args.n) for _ in range(args.n))
    return EngineParams(kappa=args.kappa, n=args.n, recolor_dist=dist)


def cmd_enumerate(args) -> int:
    if args.k < 1:
        return _fail(f"--k must be >= 1, got {args.k}")
    try:
        engine = _engine_from_args(args)
    except ValueError as exc:
        return _fail(str(exc))
    if args.k > 4:
        print(f"warning: k={args.k} needs large exact sweeps; expect heavy "
              "memory and a long run", file=sys.stderr)
    out = _out_dir(args)
    store = None
    try:
        if args.checkpoint:
            store = CheckpointStore(args.checkpoint, args.k, engine.tag)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ResourceWarning)
            tables = compute_tables(args.k, engine, checkpoint=store,
                                    threads=args.threads)
    except CheckpointError as exc:
        return _fail(str(exc), CORRUPT)
    payload = {"k": args.k, "engine": engine.tag}
    manifest = _Manifest(out, "enumerate", payload,
                         exploratory=not engine.is_theorem)
    with open(manifest.add(out / "tables.json"), "w") as fh:
        json.dump({"manifest": manifest.run_id, **tables_to_json(tables)},
                  fh, indent=1, sort_keys=True)
    text = tables_to_text(tables)
    (manifest.add(out / "tables.txt")).write_text(text)
    manifest.close()
    print(text)
    return OK


# --------------------------------------------------------------------------
# certify
# --------------------------------------------------------------------------


def cmd_certify(args) -> int:
    if args.k < 1:
        return _fail(f"--k must be >= 1, got {args.k}")
    try:
        engine = _engine_from_args(args)
    except ValueError as exc:
        return _fail(str(exc))
    tables = None
    if args.tables:
        path = Path(args.tables)
        if not path.exists():
            return _fail(f"tables file not found: {path}")
        with open(path) as fh:
            tables = tables_from_json(json.load(fh))
        if tables.k != args.k:
            return _fail(f"tables file is for k={tables.k}, not k={args.k}")
    elif args.no_compute:
        return _fail("--no-compute requires --tables")
    store = None
    try:
        if args.checkpoint:
            store = CheckpointStore(args.checkpoint, args.k, engine.tag)
        cert = certify(args.k, tables=tables, engine=engine, checkpoint=store,
                       threads=args.threads)
    except CheckpointError as exc:
        return _fail(str(exc), CORRUPT)
    out = _out_dir(args)
    payload = {"k": args.k, "engine": engine.tag}
    manifest = _Manifest(out, "certify", payload,
                         exploratory=not engine.is_theorem)
    with open(manifest.add(out / "certificate.json"), "w") as fh:
        json.dump({"manifest": manifest.run_id, **certificate_to_json(cert)},
                  fh, indent=1, sort_keys=True)
    manifest.close()
    print(certificate_to_text(cert))
    return OK


# --------------------------------------------------------------------------
# crosscheck
# --------------------------------------------------------------------------


def cmd_crosscheck(args) -> int:
    if args.k < 1:
        return _fail(f"--k must be >= 1, got {args.k}")
    if args.samples < 1:
        return _fail(f"--samples must be >= 1, got {args.samples}")
    radius = 2 * args.k + 2
    length = 2 * radius + 1
    if args.windows == "all":
        words = range(1 << length)
    else:
        try:
            count = int(args.windows)
        except ValueError:
            return _fail(f"--windows must be a count or 'all', got {args.windows!r}")
        if count < 1:
            return _fail(f"--windows must be >= 1, got {count}")
        gen = np.random.Generator(np.random.Philox(key=np.uint64(args.seed)))
        words = [int(w) for w in gen.integers(0, 1 << length, size=count)]

    report = []
    failures = 0
    for i, word in enumerate(words):
        window = WindowClass.from_word(word, radius)
        res = check_window_estimate(window, args.k, args.samples,
                                    seed=args.seed + 1 + i)
        report.append({
            "window": str(window),
            "exact": res.exact,
            "freq": res.freq,
            "tolerance": res.tolerance,
            "ok": res.ok,
        })
        if not res.ok:
            failures += 1
            print(f"BREACH window {window} exact {res.exact:.6f} "
                  f"freq {res.freq:.6f} tol {res.tolerance:.6f}")
    out = _out_dir(args)
    payload = {"k": args.k, "samples": args.samples, "windows": str(args.windows),
               "seed": args.seed}
    manifest = _Manifest(out, "crosscheck", payload)
    with open(manifest.add(out / "crosscheck.json"), "w") as fh:
        json.dump({"manifest": manifest.run_id, "failures": failures,
                   "checks": report}, fh, indent=1, sort_keys=True)
    manifest.close()
    checked = len(report)
    print(f"checked {checked} windows at k={args.k}, failures {failures}")
    return OK if failures == 0 else CHECK_FAILED


# --------------------------------------------------------------------------
# probe (single window, exact)
# --------------------------------------------------------------------------


def cmd_probe(args) -> int:
    word = args.window
    if not all(c in "01" for c in word) or len(word) % 2 == 0:
        return _fail("window must be an odd-length binary word")
    radius = len(word) // 2
    if radius < 2 * args.k + 2:
        return _fail(f"window radius {radius} too small for k={args.k}")
    value = sum((int(c) << i) for i, c in enumerate(word))
    prob = kstep_prob(WindowClass.from_word(value, radius), args.k)
    print(f"{prob} = {prob.ratio_str()}")
    return OK


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def _add_engine_flags(p):
    p.add_argument("--kappa", type=int, default=3)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--p", default=None, help="recoloring law, e.g. 1/2,1/2")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="candyfix",
        description="match-three recoloring automaton: simulation and exact certificates",
    )
    parser.add_argument("--version", action="version", version=f"candyfix {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run trajectory experiments")
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--init", default="block", help="word:<digits> | block | box")
    p.add_argument("--M", type=int, default=10, help="block half-width")
    p.add_argument("--extent", default="21", help="box extents, comma separated")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--t-max", dest="t_max", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--boundary", default="stable-exterior",
                   choices=[b.value for b in Boundary])
    _add_engine_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("enumerate", help="exact probability tables")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--checkpoint", default=None, help="resumable state directory")
    _add_engine_flags(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("certify", help="contraction certificate")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--tables", default=None, help="reuse a prior tables.json")
    p.add_argument("--no-compute", dest="no_compute", action="store_true",
                   help="fail instead of computing missing tables")
    p.add_argument("--checkpoint", default=None)
    _add_engine_flags(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("crosscheck", help="Monte Carlo vs exact engine")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--windows", default="all", help="count or 'all'")
    p.add_argument("--seed", type=int, default=0)
    _add_engine_flags(p)
    p.set_defaults(func=cmd_crosscheck)

    p = sub.add_parser("probe", help="exact k-step probability of one window")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("window", help="binary color word, odd length >= 4k+5")
    p.set_defaults(func=cmd_probe)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE
    try:
        return args.func(args)
    except CheckpointError as exc:
        return _fail(str(exc), CORRUPT)


if __name__ == "__main__":
    sys.exit(main())
