"""Acceptance criteria, one test each.

Every test records a one-line verdict in ``RESULTS``; ``conftest.py``
prints them after the run, and running this file directly prints them too.
"""
from __future__ import annotations

import itertools
import time
from pathlib import Path

import numpy as np
import pytest

from mdcodes import analysis
from mdcodes.boxes import enumerate_minimal, f2_closed_form, f_d, f_d_lower, f_d_upper
from mdcodes.core import NdArray
from mdcodes.oracles import (
    ConstraintParams,
    exhaustive_count,
    find_identical_cubes,
    find_zero_boxes,
    find_zero_cubes,
    redundancy,
)
from mdcodes.squares_unique import SquaresUniqueCodec
from mdcodes.zero_boxes import ZeroBoxesCodec, param_V
from mdcodes.zero_cubes import ZeroCubesCodec

RESULTS: dict[int, str] = {}
GOLDEN = Path(__file__).parent / "data" / "zero_cubes_n7.txt"
BUDGET = 2**26


def record(num: int, title: str, ok: bool, detail: str):
    RESULTS[num] = f"[{'PASS' if ok else 'FAIL'}] criterion {num:>2} {title}: {detail}"
    return ok


# -- 1 and 2: zero-cubes codec ------------------------------------------------

ZC_CONFIGS = [(d, q, n) for q in (2, 3) for d, ns in ((1, (8, 16, 27)), (2, (8, 16, 27)), (3, (8,))) for n in ns]
_zc_outputs: dict = {}


def _run_zero_cubes():
    if _zc_outputs:
        return _zc_outputs
    rng = np.random.default_rng(2024)
    t0 = time.perf_counter()
    rt_fail = cons_fail = runs = 0
    for d, q, n in ZC_CONFIGS:
        codec = ZeroCubesCodec(n, d, q)
        N = n**d - 1
        payloads = [rng.integers(0, q, N) for _ in range(1000)] + [np.zeros(N, dtype=int)]
        for vals in payloads:
            W = NdArray(codec.in_domain, vals, q)
            X = codec.encode(W)
            runs += 1
            cons_fail += not find_zero_cubes(X, codec.L).ok
            rt_fail += codec.decode(X) != W
    _zc_outputs.update(runs=runs, rt=rt_fail, cons=cons_fail, seconds=time.perf_counter() - t0)
    return _zc_outputs


def test_c1_zero_cubes_roundtrip():
    r = _run_zero_cubes()
    ok = r["rt"] == 0 and r["seconds"] < 60
    record(1, "zero-cubes round trip", ok, f"{r['runs'] - r['rt']}/{r['runs']} identical over {len(ZC_CONFIGS)} (d,q,n), {r['seconds']:.1f}s (limit 60s)")
    assert ok


def test_c2_zero_cubes_constraint():
    r = _run_zero_cubes()
    ok = r["cons"] == 0
    record(2, "zero-cubes outputs constrained", ok, f"{r['runs'] - r['cons']}/{r['runs']} outputs free of zero L-cubes, all-zero payloads included")
    assert ok


# -- 3: worked example --------------------------------------------------------


def _golden():
    blocks, key = {}, None
    for line in GOLDEN.read_text().splitlines():
        if line.startswith("#") or not line.strip():
            continue
        if line.startswith("["):
            key = line.strip("[]")
            blocks[key] = []
        else:
            blocks[key].append([int(t) for t in line.split()])
    return {k: np.array(v) for k, v in blocks.items()}


def test_c3_worked_example():
    g = _golden()
    codec = ZeroCubesCodec(7, 2, 2)
    W = NdArray(codec.in_domain, g["input"].reshape(-1)[:-1], 2)
    steps = list(codec.encode_steps(W))
    matrices_ok = [v for v, _ in steps] == [None, (1, 0), (2, 3)] and all(
        np.array_equal(X, g[key]) for (_, X), key in zip(steps, ["input", "after (1,0)", "after (2,3)"])
    )
    p1 = "".join(map(str, steps[1][1][4:, 4:].reshape(-1)[:6]))
    p2 = "".join(map(str, steps[2][1][4:, 4:].reshape(-1)[:6]))
    back = codec.decode(NdArray.from_dense(steps[-1][1])) == W
    ok = matrices_ok and p1 == "000100" and p2 == "010010" and back
    record(3, "worked 7x7 example", ok, f"matrices {'match' if matrices_ok else 'differ'}, payloads {p1}/{p2}, decode {'ok' if back else 'fails'}")
    assert ok


# -- 4: squares-unique ---------------------------------------------------------


def test_c4_squares_unique():
    codec = SquaresUniqueCodec(16)
    rng = np.random.default_rng(16)
    payloads = [rng.integers(0, 2, 255) for _ in range(100)] + [np.zeros(255, dtype=int), np.ones(255, dtype=int)]
    t0 = time.perf_counter()
    fails, errors = 0, []
    for vals in payloads:
        W = NdArray(codec.in_domain, vals, 2)
        try:
            X = codec.encode(W)
            good = find_identical_cubes(X, 8).ok and codec.decode(X) == W
        except AssertionError as exc:  # progress or marker assertion
            errors.append(str(exc))
            good = False
        fails += not good
    secs = time.perf_counter() - t0
    ok = fails == 0 and secs < 120
    record(4, "squares-unique n=16", ok, f"{len(payloads) - fails}/{len(payloads)} round trip and 8-square unique, {len(errors)} assertion hits, {secs:.1f}s (limit 120s)")
    assert ok


# -- 5: zero-boxes -------------------------------------------------------------


def test_c5_zero_boxes():
    codec = ZeroBoxesCodec(32, 2, 2)
    assert codec.V == 15
    rng = np.random.default_rng(32)
    N = 32 * 32 - 1
    payloads = [rng.integers(0, 2, N) for _ in range(1000)]
    payloads += [(rng.random(N) < 0.1).astype(int) for _ in range(100)]
    t0 = time.perf_counter()
    fails = 0
    for vals in payloads:
        W = NdArray(codec.in_domain, vals, 2)
        try:  # the encoder asserts the weight grows at every elimination
            X = codec.encode(W)
            good = find_zero_boxes(X, codec.V).ok and codec.decode(X) == W
        except AssertionError:
            good = False
        fails += not good
    secs = time.perf_counter() - t0
    ok = fails == 0 and secs < 120
    record(5, "zero-boxes (32,2,2) V=15", ok, f"{len(payloads) - fails}/{len(payloads)} round trip and zero-box free, {secs:.1f}s (limit 120s)")
    assert ok


# -- 6: minimal boxes ----------------------------------------------------------


def test_c6_minimal_boxes():
    mismatches = [V for V in range(1, 10_001) if f_d(2, V) != f2_closed_form(V)]
    bounds_bad = [
        (d, V) for d in (2, 3) for V in range(1, 217) if not f_d_lower(d, V) <= f_d(d, V) <= f_d_upper(d, V)
    ]
    anti_bad = cover_bad = 0
    for d in (1, 2, 3):
        for V in range(1, 65):
            fam = list(enumerate_minimal(d, V))
            anti_bad += sum(a.fits_in(b) for a, b in itertools.permutations(fam, 2))
            grid = np.indices((V,) * d).reshape(d, -1).T + 1
            big = grid[grid.prod(axis=1) >= V]
            hit = np.zeros(len(big), dtype=bool)
            for s in fam:
                hit |= (big >= np.array(s.sides)).all(axis=1)
            cover_bad += int((~hit).sum())
    ok = not mismatches and not bounds_bad and not anti_bad and not cover_bad
    first = ", ".join(f"V={V}: {f_d(2, V)} vs {f2_closed_form(V)}" for V in mismatches[:3])
    record(
        6,
        "minimal boxes",
        ok,
        f"closed form disagrees at {len(mismatches)} of 10000 V ({first}, ...); "
        f"bound violations {len(bounds_bad)}; antichain violations {anti_bad}; covering gaps {cover_bad}",
    )
    assert ok


# -- 7: exact counts -----------------------------------------------------------


def test_c7_exact_counts():
    fib = [exhaustive_count(ConstraintParams("zero-cubes-free", 1, 2, n, 2)) for n in range(1, 11)]
    rec = [2, 3]
    while len(rec) < 10:
        rec.append(rec[-1] + rec[-2])
    c511 = exhaustive_count(ConstraintParams("zero-cubes-free", 2, 2, 3, 3))
    ok = fib == rec == [2, 3, 5, 8, 13, 21, 34, 55, 89, 144] and c511 == 511
    record(7, "exact counts", ok, f"d=1 L=2 counts {fib}; 3x3 L=3 count {c511}")
    assert ok


# -- 8: thresholds at desk scale -----------------------------------------------


def _desk_instances():
    # q in {2,3,4}: the finite reading of "every (d,q,n)" under the budget
    for q in (2, 3, 4):
        for d in range(1, 6):
            for n in range(1, 30):
                if q ** (n**d) > BUDGET:
                    break
                yield d, q, n


def test_c8_thresholds():
    checked = failures = 0
    worst = ""
    for d, q, n in _desk_instances():
        cases = [("zero-cubes-free", analysis.threshold("zero-cubes-free", n, d, q).minimal)]
        if n >= 4:
            cases.append(("zero-boxes-free", param_V(n, d, q)))
        for family, size in cases:
            p = ConstraintParams(family, d, q, n, size)
            c = exhaustive_count(p, budget=BUDGET, workers=2)
            checked += 1
            if c < q ** (n**d - 1):
                failures += 1
                worst = f" first failure {family} d={d} q={q} n={n} size={size}: red {redundancy(p, c):.4f}"
    ok = failures == 0
    record(8, "thresholds give redundancy <= 1", ok, f"{checked - failures}/{checked} instances with q^(n^d) <= 2^26, q in 2..4{worst}")
    assert ok


# -- 9: oracle independence ----------------------------------------------------


def _naive_pairs(a, L):
    wins = [((i, j), a[i : i + L, j : j + L]) for i in range(5 - L) for j in range(5 - L)]
    return {(u, v) for (u, x), (v, y) in itertools.combinations(wins, 2) if np.array_equal(x, y)}


def test_c9_oracle_independence():
    rng = np.random.default_rng(9)
    disagree = 0
    for _ in range(10_000):
        a = rng.integers(0, 2, (4, 4))
        for L in (1, 2, 3):
            got = {(o.u, o.v) for o in find_identical_cubes(a, L).occurrences}
            disagree += got != _naive_pairs(a, L)
    params = [
        ConstraintParams("zero-cubes-free", 2, 3, 3, 2),
        ConstraintParams("cubes-unique", 2, 2, 4, 3),
        ConstraintParams("zero-boxes-free", 2, 2, 4, 3),
        ConstraintParams("boxes-unique", 1, 2, 12, 4),
    ]
    varying = sum(len({exhaustive_count(p, workers=w) for w in (1, 2, 4)}) > 1 for p in params)
    ok = disagree == 0 and varying == 0
    record(9, "oracle independence", ok, f"{30000 - disagree}/30000 naive agreements; {len(params) - varying}/{len(params)} counts stable over 1/2/4 workers")
    assert ok


# -- 10: redundancy trend ------------------------------------------------------


def test_c10_trend():
    reds = []
    for n in (3, 4, 5):
        p = ConstraintParams("zero-cubes-free", 2, 2, n, 2)
        reds.append(redundancy(p, exhaustive_count(p, workers=2)))
    norm = [r * 2**4 / n**2 for r, n in zip(reds, (3, 4, 5))]
    spread = max(norm) / min(norm)
    ok = all(r > 0 for r in reds) and reds == sorted(reds) and spread < 10
    record(10, "redundancy trend L=2", ok, "red " + ", ".join(f"{r:.4f}" for r in reds) + f"; normalized spread {spread:.2f}x (limit 10x)")
    assert ok


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
