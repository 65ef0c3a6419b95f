"""Ground-truth predicates and exhaustive counters for the four constraints.

The predicates work straight from the definitions using numpy sliding
windows; they share no code with the encoders so they can serve as
independent checks on them.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .boxes import BoxShape, MinimalBoxFamily
from .core import Box, Coord, NdArray
from .errors import BudgetExceededError, DomainError

FAMILIES = ("zero-cubes-free", "cubes-unique", "zero-boxes-free", "boxes-unique")
DEFAULT_BUDGET = 2**26


class ZeroOccurrence(NamedTuple):
    v: Coord
    shape: tuple[int, ...]

    def __str__(self):
        return f"ZERO v={_fmt(self.v)} shape={_fmt(self.shape)}"


class DupOccurrence(NamedTuple):
    u: Coord
    v: Coord
    shape: tuple[int, ...]

    def __str__(self):
        return f"DUP u={_fmt(self.u)} v={_fmt(self.v)} shape={_fmt(self.shape)}"


def _fmt(t) -> str:
    return "(" + ",".join(str(int(x)) for x in t) + ")"


@dataclass
class ViolationReport:
    family: str
    occurrences: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.occurrences

    def lines(self) -> list[str]:
        return [str(o) for o in self.occurrences]

    def __str__(self):
        return "\n".join(self.lines())

    def __len__(self):
        return len(self.occurrences)


@dataclass(frozen=True)
class ConstraintParams:
    family: str
    d: int
    q: int
    n: int
    size: int  # L for the cube families, V for the box families

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.q < 2 or self.d < 1 or self.n < 1 or self.size < 1:
            raise DomainError("need q >= 2 and positive d, n, size")

    @property
    def cells(self) -> int:
        return self.n**self.d

    @property
    def is_cube_family(self) -> bool:
        return self.family in ("zero-cubes-free", "cubes-unique")

    @property
    def is_zero_family(self) -> bool:
        return self.family.startswith("zero")

    def shapes(self) -> list[tuple[int, ...]]:
        """Window shapes the predicate inspects (empty when none fits)."""
        if self.is_cube_family:
            return [(self.size,) * self.d] if self.size <= self.n else []
        return [s.sides for s in MinimalBoxFamily(self.d, self.size).fitting(self.n)]


def _dense(W) -> np.ndarray:
    if isinstance(W, NdArray):
        if not isinstance(W.domain, Box) or any(W.domain.offset):
            raise DomainError("predicates need an array over a full box")
        return W.to_dense()
    return np.asarray(W)


def _cube_side(a: np.ndarray) -> int:
    if len(set(a.shape)) != 1:
        raise DomainError(f"expected an n-cube, got shape {a.shape}")
    return a.shape[0]


def _window_rows(a: np.ndarray, shape) -> tuple[np.ndarray, tuple[int, ...]]:
    win = sliding_window_view(a, shape)
    grid = win.shape[: a.ndim]
    return win.reshape(math.prod(grid), math.prod(shape)), grid


def _zero_hits(a: np.ndarray, shape) -> list[ZeroOccurrence]:
    if any(s > m for s, m in zip(shape, a.shape)):
        return []
    rows, grid = _window_rows(a, shape)
    idx = np.flatnonzero(~rows.any(axis=1))
    return [ZeroOccurrence(tuple(int(c) for c in np.unravel_index(i, grid)), tuple(shape)) for i in idx]


def _dup_hits(a: np.ndarray, shape) -> list[DupOccurrence]:
    if any(s > m for s, m in zip(shape, a.shape)):
        return []
    rows, grid = _window_rows(a, shape)
    _, inverse, counts = np.unique(rows, axis=0, return_inverse=True, return_counts=True)
    inverse = inverse.reshape(-1)
    out = []
    for g in np.flatnonzero(counts > 1):
        members = np.flatnonzero(inverse == g)
        coords = [tuple(int(c) for c in np.unravel_index(i, grid)) for i in members]
        out.extend(DupOccurrence(u, v, tuple(shape)) for u, v in itertools.combinations(coords, 2))
    out.sort()
    return out


def _check_L(a: np.ndarray, L: int) -> int:
    n = _cube_side(a)
    if not 1 <= L <= n:
        raise DomainError(f"L must lie in [1, {n}], got {L}")
    return n


def find_zero_cubes(W, L: int) -> ViolationReport:
    a = _dense(W)
    _check_L(a, L)
    return ViolationReport("zero-cubes-free", _zero_hits(a, (L,) * a.ndim))


def find_identical_cubes(W, L: int) -> ViolationReport:
    a = _dense(W)
    _check_L(a, L)
    return ViolationReport("cubes-unique", _dup_hits(a, (L,) * a.ndim))


def has_identical_cubes(W, L: int) -> bool:
    """Fast boolean form of :func:`find_identical_cubes`."""
    a = _dense(W)
    _check_L(a, L)
    rows, _ = _window_rows(a, (L,) * a.ndim)
    return np.unique(rows, axis=0).shape[0] < rows.shape[0]


def _box_shapes(a: np.ndarray, V: int) -> list[BoxShape]:
    if V < 1:
        raise DomainError("V must be positive")
    fam = MinimalBoxFamily(a.ndim, V)
    return [s for s in fam if all(x <= m for x, m in zip(s.sides, a.shape))]


def find_zero_boxes(W, V: int) -> ViolationReport:
    a = _dense(W)
    hits = []
    for s in _box_shapes(a, V):
        hits.extend(_zero_hits(a, s.sides))
    hits.sort()
    return ViolationReport("zero-boxes-free", hits)


def find_identical_boxes(W, V: int) -> ViolationReport:
    a = _dense(W)
    hits = []
    for s in _box_shapes(a, V):
        hits.extend(_dup_hits(a, s.sides))
    hits.sort()
    return ViolationReport("boxes-unique", hits)


def check(W, params: ConstraintParams) -> ViolationReport:
    fn = {
        "zero-cubes-free": find_zero_cubes,
        "cubes-unique": find_identical_cubes,
        "zero-boxes-free": find_zero_boxes,
        "boxes-unique": find_identical_boxes,
    }[params.family]
    return fn(W, params.size)


# ---------------------------------------------------------------------------
# exhaustive counting


def _window_masks(params: ConstraintParams) -> list[list[int]]:
    """sd positions covered by every window, grouped per shape."""
    cube = (params.n,) * params.d
    flat = np.arange(params.cells).reshape(cube)
    groups = []
    for shape in params.shapes():
        rows, _ = _window_rows(flat, shape)
        groups.append([r.tolist() for r in rows])
    return groups


def _count_zero_free_chunk(args) -> int:
    # Zero-freeness only depends on the support of the array.  A support is
    # a bitmask over sd positions; it stands for (q-1)^popcount arrays.
    N, q, windows, hi_lo, hi_hi = args
    lo_bits = N // 2
    n_lo = 1 << lo_bits
    lo = np.arange(n_lo, dtype=np.int64)
    hi = np.arange(hi_lo, hi_hi, dtype=np.int64)
    lo_mask = n_lo - 1

    lo_hit = np.zeros(n_lo, dtype=bool)
    hi_hit = np.zeros(hi.size, dtype=bool)
    straddle = []
    for w in windows:
        m = 0
        for p in w:
            m |= 1 << p
        m_lo, m_hi = m & lo_mask, m >> lo_bits
        if m_hi == 0:
            lo_hit |= (lo & m_lo) == 0
        elif m_lo == 0:
            hi_hit |= (hi & m_hi) == 0
        else:
            straddle.append(((hi & m_hi) == 0, (lo & m_lo) == 0))

    w_lo = (q - 1) ** np.bitwise_count(lo.astype(np.uint64)).astype(np.int64)
    w_hi = (q - 1) ** np.bitwise_count(hi.astype(np.uint64)).astype(np.int64)
    total = 0
    step = max(1, (1 << 22) // n_lo)
    for s in range(0, hi.size, step):
        sl = slice(s, s + step)
        bad = hi_hit[sl, None] | lo_hit[None, :]
        for a_hi, a_lo in straddle:
            bad |= a_hi[sl, None] & a_lo[None, :]
        total += int(((~bad) @ w_lo) @ w_hi[sl])
    return total


def _digits_block(codes: np.ndarray, q: int, N: int) -> np.ndarray:
    out = np.empty((codes.size, N), dtype=np.int64)
    c = codes.copy()
    for i in range(N):
        c, out[:, i] = np.divmod(c, q)
    return out


def _count_unique_chunk(args) -> int:
    N, q, groups, start, stop = args
    total = 0
    step = 1 << 18
    for s in range(start, stop, step):
        codes = np.arange(s, min(stop, s + step), dtype=np.int64)
        digits = _digits_block(codes, q, N)
        good = np.ones(codes.size, dtype=bool)
        for windows in groups:
            if len(windows) < 2:
                continue
            idx = np.array(windows)
            powers = q ** np.arange(idx.shape[1], dtype=np.int64)
            keys = digits[:, idx] @ powers  # (codes, positions)
            keys.sort(axis=1)
            good &= ~(keys[:, 1:] == keys[:, :-1]).any(axis=1)
        total += int(good.sum())
    return total


def _split(lo: int, hi: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, hi - lo))
    edges = [lo + (hi - lo) * i // parts for i in range(parts + 1)]
    return [(a, b) for a, b in zip(edges, edges[1:]) if b > a]


def exhaustive_count(params: ConstraintParams, budget: int = DEFAULT_BUDGET, workers: int = 1) -> int:
    """Exact number of arrays in [q]^([n]^d) satisfying the constraint.

    Raises :class:`BudgetExceededError` when q^(n^d) exceeds ``budget``.
    The result does not depend on ``workers``.
    """
    N, q = params.cells, params.q
    total = q**N
    if total > budget:
        raise BudgetExceededError(total, budget)
    groups = _window_masks(params)
    if not any(groups):
        return total
    if params.is_zero_family:
        windows = [w for g in groups for w in g]
        n_hi = 1 << (N - N // 2)
        jobs = [(N, q, windows, a, b) for a, b in _split(0, n_hi, workers)]
        fn = _count_zero_free_chunk
    else:
        jobs = [(N, q, groups, a, b) for a, b in _split(0, total, workers)]
        fn = _count_unique_chunk
    if workers <= 1 or len(jobs) == 1:
        return sum(map(fn, jobs))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(fn, jobs))


def redundancy(params: ConstraintParams, count: int) -> float:
    """n^d - log_q(count); +inf for an empty code."""
    if count < 0:
        raise DomainError("count must be non-negative")
    if count == 0:
        return math.inf
    return params.cells - math.log(count, params.q)
