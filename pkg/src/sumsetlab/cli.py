"""Batch command-line entry point: ``sumsetlab construct|saturate|suite``.

Exit codes: 0 pass, 2 bad parameters, 3 I/O failure, 4 a verdict failed.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from . import battery
from .constructions import build
from .errors import NotFound, SumsetError
from .saturator import (brute_min_subset, find_triple, greedy_diff_saturate,
                        greedy_pair_saturate, greedy_self_saturate, medium_saturate,
                        saturating_cover, select_full_dim_subset)
from .sets import read_set, sumset, write_set
from .verifier import _jsonable, hyperplane_cover_check, theorem_bound_check

VERSION = f"v{__version__}"
EXIT_OK, EXIT_PARAMS, EXIT_IO, EXIT_FAIL = 0, 2, 3, 4
ALGORITHMS = ("greedy-self", "greedy-pair", "greedy-diff", "medium", "brute-min", "triple",
              "cover", "fulldim")


class ParamError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def _default_seed() -> int:
    raw = os.environ.get("SUMSETLAB_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ParamError(f"SUMSETLAB_SEED={raw!r} is not an integer") from None


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ParamError("config file must hold a JSON object")
    return cfg


def _pick(args, cfg: dict, name: str, default=None):
    v = getattr(args, name, None)
    if v is not None:
        return v
    return cfg.get(name, default)


def _free_params(extra: list[str]) -> dict:
    """``--key value`` pairs left over by argparse, turned into a dict."""
    out: dict = {}
    i = 0
    while i < len(extra):
        tok = extra[i]
        if not tok.startswith("--"):
            raise ParamError(f"unexpected argument {tok!r}")
        key = tok[2:].replace("-", "_")
        if "=" in key:
            key, val = key.split("=", 1)
            i += 1
        elif i + 1 < len(extra) and not extra[i + 1].startswith("--"):
            val = extra[i + 1]
            i += 2
        else:
            raise ParamError(f"flag {tok} needs a value")
        if key == "primes":
            out[key] = [int(x) for x in val.split(",") if x]
        else:
            try:
                out[key] = int(val)
            except ValueError:
                out[key] = val
    return out


# ---------------------------------------------------------------------------
# construct

def cmd_construct(args, extra, cfg) -> int:
    params = {**cfg.get("params", {}), **_free_params(extra)}
    S, meta = build(args.variant, params)
    out = Path(args.out or f"{args.variant}.set")
    meta_path = out.with_name(out.name + ".json")
    record = {"version": VERSION, "variant": args.variant, "params": params, "size": len(S),
              "ctx": S.ctx.descriptor(), "metadata": meta}
    write_set(out, S, comment=f"{args.variant} {json.dumps(params, sort_keys=True)}")
    meta_path.write_text(_dump(record))
    print(f"{out}: {len(S)} elements in {S.ctx.label()}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# saturate

def _need(sets, k, algo):
    if len(sets) < k:
        raise ParamError(f"{algo} needs {k} set file(s)")


def cmd_saturate(args, extra, cfg) -> int:
    if extra:
        raise ParamError(f"unexpected arguments {extra}")
    algo = args.algorithm
    sets = [read_set(p) for p in args.sets]
    seed = _pick(args, cfg, "seed")
    seed = _default_seed() if seed is None else int(seed)
    c = Fraction(_pick(args, cfg, "c", "1/14"))
    s = int(_pick(args, cfg, "s", 3))
    report: dict = {"version": VERSION, "algorithm": algo, "seed": seed,
                    "inputs": [str(p) for p in args.sets]}
    passed: bool
    if algo in ("greedy-self", "greedy-diff", "greedy-pair"):
        _need(sets, 2 if algo == "greedy-pair" else 1, algo)
        if algo == "greedy-self":
            out, tag = greedy_self_saturate(sets[0], s, c), "sym"
        elif algo == "greedy-diff":
            out, tag = greedy_diff_saturate(sets[0], s, c), "diff"
        else:
            out, tag = greedy_pair_saturate(sets[0], sets[1], s, c), "asym"
        verdict = theorem_bound_check(out, tag)
        report.update(outcome=out.to_record(), verdict=verdict.to_record())
        passed = bool(verdict.passed)
    elif algo == "medium":
        _need(sets, 2, algo)
        out = medium_saturate(sets[0], sets[1], c=Fraction(_pick(args, cfg, "c", 1)),
                              trials=int(_pick(args, cfg, "trials", 64)), seed=seed)
        report.update(outcome=out.to_record())
        passed = bool(out.extra["reaches_target"])
    elif algo in ("brute-min", "triple"):
        _need(sets, 2, algo)
        A, B = sets[0], sets[1]
        try:
            if algo == "triple":
                wit = find_triple(A, B)
                size = len(wit)
            else:
                target = int(_pick(args, cfg, "target", 2 * len(A) - 1))
                size, wit = brute_min_subset(A, B, target, int(_pick(args, cfg, "cap", 3)))
            report.update(witness=wit, size=size, achieved=len(sumset(A, wit)))
            passed = True
        except NotFound as exc:
            report.update(witness=None, error=str(exc))
            passed = False
    elif algo == "cover":
        _need(sets, 1, algo)
        S = sets[0]
        T = sets[1] if len(sets) > 1 else S
        tau = _pick(args, cfg, "tau")
        out = saturating_cover(S, T, None if tau is None else Fraction(tau))
        report.update(outcome=out.to_record())
        passed = out.covered
    else:
        _need(sets, 1, algo)
        A = sets[0]
        t = int(_pick(args, cfg, "t", 2))
        k = int(_pick(args, cfg, "k", A.ctx.arity - 1))
        X = select_full_dim_subset(A, t, k)
        chk = hyperplane_cover_check(X, t, k)
        report.update(subset=X, cover=chk.to_record())
        passed = not chk.covered
    report["pass"] = passed
    text = _dump(report)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# suite

def _scale(args, cfg) -> dict:
    scale = dict(cfg.get("scale", {}))
    for item in args.scale or []:
        if "=" not in item:
            raise ParamError(f"--scale expects key=value, got {item!r}")
        key, val = item.split("=", 1)
        if key not in battery.DEFAULT_SCALE:
            raise ParamError(f"unknown scale key {key!r}")
        default = battery.DEFAULT_SCALE[key]
        if isinstance(default, bool):
            scale[key] = val.lower() in ("1", "true", "yes")
        elif isinstance(default, list):
            scale[key] = [int(x) for x in val.split(",") if x]
        else:
            scale[key] = int(val)
    max_n = _pick(args, cfg, "max_n")
    if max_n is not None:
        scale["max_n"] = int(max_n)
        scale["triple_max_n"] = min(int(max_n), battery.DEFAULT_SCALE["triple_max_n"])
    return scale


def cmd_suite(args, extra, cfg) -> int:
    if extra:
        raise ParamError(f"unexpected arguments {extra}")
    if args.name not in battery.SUITES + ("all",):
        raise ParamError(f"unknown suite {args.name!r}")
    seed = _pick(args, cfg, "seed")
    seed = _default_seed() if seed is None else int(seed)
    jobs = int(_pick(args, cfg, "jobs", 1))
    scale = _scale(args, cfg)
    out_dir = Path(_pick(args, cfg, "out_dir", "."))
    tasks = battery.suite_tasks(args.name, seed, scale)
    rows = battery.run_tasks(tasks, jobs)
    config = {"suite": args.name, "seed": seed, "scale": {**battery.DEFAULT_SCALE, **scale}}
    exp_id = hashlib.sha256(json.dumps(_jsonable(config), sort_keys=True).encode()).hexdigest()[:16]
    failed = [r for r in rows if r["pass"] is False]
    summary = {
        "rows": len(rows),
        "passed": sum(r["pass"] is True for r in rows),
        "failed": len(failed),
        "reported": sum(r["pass"] is None for r in rows),
    }
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(battery.CSV_COLUMNS)
    for r in rows:
        writer.writerow(battery.row_to_csv(r))
    report = {"experiment": exp_id, "version": VERSION, "config": config, "seed": seed,
              "records": [{**battery.row_to_json(r), "version": VERSION} for r in rows],
              "summary": summary}
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / f"{args.name}.csv").write_text(buf.getvalue())
    (out_dir / f"{args.name}.json").write_text(_dump(report))
    print(f"{args.name}: {summary['passed']} passed, {summary['failed']} failed, "
          f"{summary['reported']} reported -> {out_dir / (args.name + '.csv')}")
    for r in failed:
        print("FAIL " + ",".join(battery.row_to_csv(r)), file=sys.stderr)
    return EXIT_OK if not failed else EXIT_FAIL


# ---------------------------------------------------------------------------

def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sumsetlab", description="Sumset saturation experiments.")
    p.add_argument("--version", action="version", version=f"sumsetlab {VERSION}")
    p.add_argument("--config", help="JSON file whose keys mirror the command flags")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="generate a construction; extra --key value pairs are parameters")
    c.add_argument("variant")
    c.add_argument("--out", help="set file path (metadata goes to <out>.json)")

    s = sub.add_parser("saturate", help="run a saturation algorithm on set files")
    s.add_argument("algorithm", choices=ALGORITHMS)
    s.add_argument("sets", nargs="+")
    s.add_argument("--s", type=int)
    s.add_argument("--c")
    s.add_argument("--seed", type=int)
    s.add_argument("--tau")
    s.add_argument("--target", type=int)
    s.add_argument("--cap", type=int)
    s.add_argument("--t", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--trials", type=int)
    s.add_argument("--out")

    u = sub.add_parser("suite", help="run a check battery and write CSV + JSON")
    u.add_argument("name", help="theorems, constructions, covers, niveau or all")
    u.add_argument("--seed", type=int)
    u.add_argument("--jobs", type=int)
    u.add_argument("--max-n", dest="max_n", type=int)
    u.add_argument("--out-dir", dest="out_dir")
    u.add_argument("--scale", action="append", metavar="KEY=VALUE")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args, extra = parser.parse_known_args(argv)
    handlers = {"construct": cmd_construct, "saturate": cmd_saturate, "suite": cmd_suite}
    try:
        cfg = _load_config(args.config)
        return handlers[args.command](args, extra, cfg)
    except (ParamError, SumsetError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
