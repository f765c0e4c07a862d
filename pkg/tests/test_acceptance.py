"""Exit-criteria battery.

One test per criterion, run at full scale with the default seed (7, or
SUMSETLAB_SEED).  Each test records a PASS/FAIL line; pytest prints them in
the terminal summary and ``python tests/test_acceptance.py`` prints them
directly.
"""

from __future__ import annotations

import json
import os
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from sumsetlab import battery  # noqa: E402

SEED = int(os.environ.get("SUMSETLAB_SEED", "7"))
RESULTS: dict[int, tuple[bool, str]] = {}

TITLES = {
    1: "pair greedy inequality (Z, Z31, Z101; 500 each)",
    2: "self and difference greedy inequalities",
    3: "walk certificates, all A,B in [0,8] of size <= 5, k = 1..3",
    4: "AP-plus-spikes closed form and subset bound",
    5: "spike pair: large sumset, no 3-element saturator",
    6: "three-element saturators in Z and Z_p",
    7: "saturating covers, forced elements land in S'",
    8: "hyperplane covers, full-dimensional subsets, AP-plus-core bound",
    9: "niveau containment, Harper, lift, stable ratio tables",
    10: "dense/sparse engine equivalence and Cauchy-Davenport",
}


def _rows(suite: str, *prefixes: str, scale: dict | None = None):
    tasks = [t for t in battery.suite_tasks(suite, SEED, scale)
             if any(t.check == p or t.check.startswith(p) for p in prefixes)]
    t0 = time.perf_counter()
    rows = battery.run_tasks(tasks)
    return rows, time.perf_counter() - t0


def _fails(rows, check=None):
    return [r for r in rows if r["pass"] is False and (check is None or r["check"] == check)]


def _count(rows, check):
    return sum(r["check"] == check for r in rows)


def _describe_fail(r) -> str:
    return f"{r['check']} n={r['n']} s={r['s']} achieved={r['achieved']} bound={r['bound']}"


# ---------------------------------------------------------------------------

def criterion_1():
    rows, secs = _rows("theorems", "greedy-pair-")
    bad = _fails(rows)
    ok = not bad and len(rows) == 1500 and secs < 60
    return ok, f"{len(rows)} instances, {len(bad)} failures, {secs:.1f}s (limit 60s)"


def criterion_2():
    rows, _ = _rows("theorems", "greedy-self-", "greedy-diff-")
    bad = _fails(rows)
    return not bad and len(rows) == 3000, f"{len(rows)} instances, {len(bad)} failures"


def criterion_3():
    rows, secs = _rows("theorems", "walks")
    bad = _fails(rows)
    certified = sum(r["bound"] for r in rows)
    valid = sum(r["achieved"] for r in rows)
    vacuous = sum(r["witness"]["vacuous"] for r in rows)
    pairs = certified + vacuous
    ok = not bad and secs < 120 and pairs == 381 * 381 * 3
    return ok, (f"{pairs} (A,B,k) cases: {valid}/{certified} certificates valid, {vacuous} with "
                f"w = 0; {secs:.1f}s (limit 120s)")


def criterion_4():
    rows, _ = _rows("theorems", "ap-spikes")
    closed = _fails(rows, "ap-spikes-closed-form")
    subsets = _fails(rows, "ap-spikes-subsets")
    detail = (f"closed form {_count(rows, 'ap-spikes-closed-form') - len(closed)}/"
              f"{_count(rows, 'ap-spikes-closed-form')} exact; subset bound "
              f"{_count(rows, 'ap-spikes-subsets') - len(subsets)}/"
              f"{_count(rows, 'ap-spikes-subsets')} instances")
    if closed:
        ks = sorted({r["s"] for r in closed})
        detail += f"; closed form misses at k in {ks}, e.g. {_describe_fail(closed[0])}"
    return not closed and not subsets, detail


def criterion_5():
    rows, _ = _rows("theorems", "spike-pair")
    bad = _fails(rows)
    size = next(r for r in rows if r["check"] == "spike-pair-sumset")
    return not bad and len(rows) == 2, (f"|A+B| = {size['achieved']} vs kn = {size['bound']}; "
                                        f"{len(bad)} failing rows")


def criterion_6():
    rows, _ = _rows("theorems", "triple-")
    parts = []
    ok = True
    for fam in ("Z", "Z31", "Z101"):
        fam_rows = [r for r in rows if r["check"] == f"triple-{fam}"]
        bad = _fails(fam_rows)
        # calibration found no Z_p failures, so success is asserted outright
        ok &= not bad and len(fam_rows) == 300
        parts.append(f"{fam} {len(fam_rows) - len(bad)}/{len(fam_rows)}")
    return ok, ", ".join(parts)


def criterion_7():
    rows, _ = _rows("covers", "cover-")
    cover_rows = [r for r in rows if r["check"] != "cover-behrend-forced-in-S'"]
    uncovered = _fails(cover_rows)
    forced = [r for r in rows if r["check"] == "cover-behrend-forced-in-S'"]
    forced_bad = _fails(forced)
    in_union = sum(bool(r["witness"]["forced_in_union"]) for r in forced)
    ok = not uncovered and not forced_bad and len(forced) == 4
    return ok, (f"{len(cover_rows) - len(uncovered)}/{len(cover_rows)} covers complete; "
                f"A0 within S' on {len(forced) - len(forced_bad)}/{len(forced)} Behrend instances "
                f"(within S' u T' on {in_union}/{len(forced)})")


def criterion_8():
    rows, _ = _rows("covers", "hyperplane", "full-dim-", "neg-blt-")
    parts, ok = [], True
    for label, prefix, want in (("oracle agreement", "cover-check", 200),
                                ("full-dim", "full-dim", 80), ("neg-blt", "neg-blt", 5)):
        sub = [r for r in rows if r["check"].startswith(prefix)]
        bad = _fails(sub)
        ok &= len(sub) == want and not bad
        parts.append(f"{label} {len(sub) - len(bad)}/{len(sub)}")
    return ok, ", ".join(parts)


def criterion_9():
    rows, _ = _rows("niveau", "niveau-", "harper-", "lift-")
    bad = _fails(rows)
    lifts = [r for r in rows if r["check"] == "lift"]
    ratio_a, _ = _rows("niveau", "nonsaturation")
    ratio_b, _ = _rows("niveau", "nonsaturation")
    blob_a = json.dumps([battery.row_to_json(r) for r in ratio_a], sort_keys=True).encode()
    blob_b = json.dumps([battery.row_to_json(r) for r in ratio_b], sort_keys=True).encode()
    tables = sum(len(r["witness"]["rows"]) for r in ratio_a)
    stable = blob_a == blob_b and tables > 0
    ok = not bad and stable and len(lifts) == 5
    return ok, (f"{len(rows) - len(bad)}/{len(rows)} structure checks, {len(lifts)} lifts; "
                f"ratio table {tables} rows, byte-stable={stable}")


def criterion_10():
    rows, _ = _rows("theorems", "engine", "cauchy-davenport-")
    bad = _fails(rows)
    engine = sum(r["n"] or 0 for r in rows if r["check"] == "engine-equivalence")
    cd = [r for r in rows if r["check"] == "cauchy-davenport"]
    ok = not bad and engine == 10_000 and len(cd) == 2
    return ok, f"{engine} engine instances, {len(cd)} primes exhaustive, {len(bad)} failures"


CRITERIA = {i: globals()[f"criterion_{i}"] for i in TITLES}


def evaluate(i: int) -> tuple[bool, str]:
    ok, detail = CRITERIA[i]()
    RESULTS[i] = (bool(ok), detail)
    return RESULTS[i]


def summary_lines() -> list[str]:
    return [f"criterion {i:2d} {'PASS' if RESULTS[i][0] else 'FAIL'}  {TITLES[i]}: {RESULTS[i][1]}"
            for i in sorted(RESULTS)]


@pytest.mark.acceptance
@pytest.mark.parametrize("i", sorted(TITLES))
def test_criterion(i):
    ok, detail = evaluate(i)
    print(f"criterion {i}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, detail


@pytest.mark.acceptance
def test_construction_battery():
    rows, _ = _rows("constructions", "")
    bad = _fails(rows)
    assert not bad, [_describe_fail(r) for r in bad[:5]]


if __name__ == "__main__":
    for i in sorted(TITLES):
        evaluate(i)
        print(summary_lines()[-1], flush=True)
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
