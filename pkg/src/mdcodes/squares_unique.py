"""Single-redundancy-bit encoder for binary n-squares with unique L-squares.

The working array is a row-major sequence of k x k blocks (k = L/2).
Blocks are only ever inserted or deleted whole, so the layout of later
blocks, in particular the trailing marker block P_M, is never sheared.

Elimination removes one of three kinds of redundancy and pushes a payload
describing it to the front of the sequence:

* case 1: a stray copy of P_M before the marker (payload prefix ``101``);
* case 2: two identical L-squares (prefix ``100``, three blocks long);
* case 3: two identical k x L rectangles, the later one on the bottom
  frontier I next to the marker (prefix ``11``).

If elimination shrank the sequence below n^2 cells, expansion appends
blocks that cannot complete a repeated k-square until the square is full.
"""
from __future__ import annotations

import itertools
import logging

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .core import Box, CubeMinusCorner, NdArray, SemiSquare, ceil_log, cr_complete, from_digits, iroot_ceil, to_digits
from .errors import CorruptionError, DomainError, UnsupportedSizeError

log = logging.getLogger(__name__)

_HOLE = -1  # cell not present in the current sequence
_PENDING = -2  # decoder placeholder, filled before the step ends


def params(n: int) -> tuple[int, int]:
    """Return ``(k, L)`` for side ``n``: k is the least divisor of n with k^2 >= 3 ceil(log2 n) + 2.

    That bound is what the case 3 payload actually needs; it coincides with
    ceil(3 log2 n) + 2 whenever n is a power of two.
    """
    if n < 4:
        raise UnsupportedSizeError("the squares-unique codec needs n >= 4")
    k0 = iroot_ceil(3 * ceil_log(n, 2) + 2, 2)
    k = next((c for c in range(k0, n + 1) if n % c == 0), None)
    if k is None or 2 * k > n:
        raise UnsupportedSizeError(
            f"n = {n} has no divisor k >= {k0} with 2k <= n; pick n with a suitable divisor (e.g. a multiple of {k0})"
        )
    return k, 2 * k


def _fmt(p) -> str:
    return f"({p[0]},{p[1]})"


def _bits_to_int(bits) -> int:
    v = 0
    for b in np.asarray(bits).reshape(-1).tolist():
        v = (v << 1) | int(b)
    return v


def _int_to_bits(v: int, length: int) -> np.ndarray:
    return np.array([(v >> (length - 1 - t)) & 1 for t in range(length)], dtype=np.int8)


class _Blocks:
    """Mutable block sequence with a dense grid view (holes are -1)."""

    def __init__(self, n: int, k: int, blocks: list[np.ndarray]):
        self.n, self.k, self.nb = n, k, n // k
        self.blocks = blocks

    def __len__(self):
        return len(self.blocks)

    @property
    def cells(self) -> int:
        return len(self.blocks) * self.k * self.k

    def origin(self, b: int) -> tuple[int, int]:
        return (b // self.nb) * self.k, (b % self.nb) * self.k

    def index(self, i: int, j: int) -> int:
        return (i // self.k) * self.nb + j // self.k

    def grid(self, extra_rows: int = 0) -> np.ndarray:
        k = self.k
        rows = -(-len(self.blocks) // self.nb) * k + extra_rows
        G = np.full((rows, self.n), _HOLE, dtype=np.int8)
        for b, blk in enumerate(self.blocks):
            i, j = self.origin(b)
            G[i : i + k, j : j + k] = blk
        return G

    def load(self, G: np.ndarray):
        k = self.k
        for b in range(len(self.blocks)):
            i, j = self.origin(b)
            self.blocks[b] = G[i : i + k, j : j + k].copy()

    def weight(self) -> int:
        return int(sum(int(b.sum()) for b in self.blocks))


def _windows(G: np.ndarray, shape) -> dict[bytes, list[tuple[int, int]]]:
    """Map content -> positions (lex order) of every fully present window."""
    a, b = shape
    if G.shape[0] < a or G.shape[1] < b:
        return {}
    win = sliding_window_view(G, shape)
    P, Q = win.shape[:2]
    rows = win.reshape(P * Q, a * b)
    present = (rows >= 0).all(axis=1)
    out: dict[bytes, list] = {}
    packed = np.packbits(rows.astype(np.uint8), axis=1)
    for idx in np.flatnonzero(present):
        out.setdefault(packed[idx].tobytes(), []).append(divmod(int(idx), Q))
    return out


def _region_cells(p, a: int, b: int) -> set[tuple[int, int]]:
    return {(p[0] + x, p[1] + y) for x in range(a) for y in range(b)}


class SquaresUniqueCodec:
    """Encoder/decoder over [n]^2 minus (0,0), binary alphabet.

    ``strict`` (the default) tightens the expansion pick: besides the rules
    above, a candidate block must not create a new copy of P_M and must not
    complete an L-square equal to another one.  ``strict=False`` follows the
    looser rule and can emit a stray P_M that the decoder then trips on.
    """

    def __init__(self, n: int, strict: bool = True):
        self.n = n
        self.k, self.L = params(n)
        self.nb = n // self.k
        self.strict = strict
        k = self.k
        lg = ceil_log(n, 2)
        self.pos_width = 2 * lg
        self.i_width = lg
        assert k * k >= 3 + self.pos_width, "case 1 payload does not fit"
        assert 3 * k * k >= 3 + 2 * self.pos_width, "case 2 payload does not fit"
        assert k * k >= 2 + self.pos_width + self.i_width, "case 3 payload does not fit"
        assert 2 ** (k * k) > n * n
        self.marker = np.zeros((k, k), dtype=np.int8)
        self.marker[0, 0] = 1
        self.square = Box((n, n))
        self.in_domain = CubeMinusCorner(n, 2, "first")
        self.max_iterations = 8 * n * n

    # -- payloads --------------------------------------------------------

    def _pos_bits(self, p) -> list[int]:
        return list(to_digits(p[0] * self.n + p[1], 2, self.pos_width))

    def _read_pos(self, bits) -> tuple[int, int]:
        r = from_digits(bits, 2)
        if r >= self.n * self.n:
            raise CorruptionError(f"encoded position {r} out of range")
        return divmod(r, self.n)

    def _pad(self, bits: list[int], length: int) -> np.ndarray:
        assert len(bits) <= length
        return np.array(bits + [1] * (length - len(bits)), dtype=np.int8)

    def _split_blocks(self, bits: np.ndarray, count: int) -> list[np.ndarray]:
        k = self.k
        rect = bits.reshape(k, count * k)
        return [rect[:, c * k : (c + 1) * k].copy() for c in range(count)]

    # -- frontier I ------------------------------------------------------

    def frontier(self, G: np.ndarray, marker_pos) -> list[tuple[int, int]]:
        """Positions of k x L rectangles on the bottom frontier next to the marker."""
        k, n = self.k, self.n
        im, jm = marker_pos
        raw = [(im - k, j) for j in range(jm - k, n)] + [(im, j) for j in range(0, jm - k - 1)]
        out = []
        for i, j in raw:
            if i < 0 or j < 0 or j + 2 * k > n or i + k > G.shape[0]:
                continue
            if (G[i : i + k, j : j + 2 * k] >= 0).all():
                out.append((i, j))
        assert len(out) <= 2**self.i_width
        return out

    # -- removal with block granularity ---------------------------------

    def _aligned(self, p) -> tuple[int, int]:
        return (p[0] // self.k) * self.k, (p[1] // self.k) * self.k

    def _block_ids(self, S: _Blocks, p, a: int, b: int) -> list[int]:
        hi, hj = self._aligned(p)
        base = S.index(hi, hj)
        return [base + x * self.nb + y for x in range(a) for y in range(b)]

    def _swap_lists(self, p, a: int, b: int):
        k = self.k
        R = _region_cells(p, a * k, b * k)
        Rh = _region_cells(self._aligned(p), a * k, b * k)
        return sorted(Rh - R), sorted(R - Rh)

    def _remove(self, S: _Blocks, p, a: int, b: int):
        """Remove the (a*k) x (b*k) region at ``p``: swap fringes with the aligned region, delete it."""
        ids = self._block_ids(S, p, a, b)
        last = len(S) - 1
        assert max(ids) < last, "removal would touch the marker block"
        G = S.grid()
        hat_only, r_only = self._swap_lists(p, a, b)
        if hat_only:
            hi = tuple(np.array(hat_only).T)
            ri = tuple(np.array(r_only).T)
            G[hi], G[ri] = G[ri].copy(), G[hi].copy()
        S.load(G)
        for b_id in sorted(ids, reverse=True):
            del S.blocks[b_id]

    # -- encoding --------------------------------------------------------

    def _touches(self, p, rows: int, cols: int, marker_pos) -> bool:
        k = self.k
        return (
            p[0] < marker_pos[0] + k
            and marker_pos[0] < p[0] + rows
            and p[1] < marker_pos[1] + k
            and marker_pos[1] < p[1] + cols
        )

    def _find_case(self, S: _Blocks):
        k, L = self.k, self.L
        G = S.grid()
        marker_pos = S.origin(len(S) - 1)
        key_m = np.packbits(self.marker.reshape(1, -1).astype(np.uint8), axis=1)[0].tobytes()
        for p in _windows(G, (k, k)).get(key_m, []):
            if p < marker_pos:
                return 1, p, None
            break
        pairs = sorted(
            pair for positions in _windows(G, (L, L)).values() for pair in itertools.combinations(positions, 2)
        )
        for p1, p2 in pairs:
            # remove the earlier square unless it overlaps the marker block
            for removed, twin in ((p1, p2), (p2, p1)):
                if not self._touches(removed, 2 * k, 2 * k, marker_pos):
                    return 2, removed, twin
        front = set(self.frontier(G, marker_pos))
        best = None
        for positions in _windows(G, (k, L)).values():
            for p2 in positions[1:]:
                if p2 not in front:
                    continue
                for p1 in positions:
                    if p1 >= p2:
                        break
                    if not self._touches(p1, k, L, marker_pos):
                        if best is None or (p1, p2) < best:
                            best = (p1, p2)
                        break
        if best is not None:
            return 3, best[0], best[1]
        return None

    def _eliminate(self, S: _Blocks, trace):
        k = self.k
        state = (S.cells, S.weight())
        for _ in range(self.max_iterations):
            found = self._find_case(S)
            if found is None:
                return
            case, p1, p2 = found
            if case == 1:
                if trace is not None:
                    trace.append(f"CASE1 @{_fmt(p1)}")
                self._remove(S, p1, 1, 1)
                bits = self._pad([1, 0, 1] + self._pos_bits(p1), k * k)
                S.blocks.insert(0, bits.reshape(k, k))
            elif case == 2:
                if trace is not None:
                    lo, hi = sorted((p1, p2))
                    trace.append(f"CASE2 @{_fmt(lo)}<{_fmt(hi)}" + ("" if p1 < p2 else " rm=2"))
                self._remove(S, p1, 2, 2)
                bits = self._pad([1, 0, 0] + self._pos_bits(p1) + self._pos_bits(p2), 3 * k * k)
                S.blocks[0:0] = self._split_blocks(bits, 3)
            else:
                G = S.grid()
                front = self.frontier(G, S.origin(len(S) - 1))
                idx = front.index(p2)
                if trace is not None:
                    trace.append(f"CASE3 @{_fmt(p1)}<{_fmt(p2)}")
                self._remove(S, p1, 1, 2)
                bits = self._pad([1, 1] + self._pos_bits(p1) + list(to_digits(idx, 2, self.i_width)), k * k)
                S.blocks.insert(0, bits.reshape(k, k))
            new_state = (S.cells, S.weight())
            assert new_state[0] < state[0] or (new_state[0] == state[0] and new_state[1] > state[1]), (
                "elimination step made no progress"
            )
            assert np.array_equal(S.blocks[-1], self.marker), "marker block was disturbed"
            state = new_state
        raise RuntimeError("elimination did not terminate")

    def _expansion_pick(self, S: _Blocks) -> int:
        k, n = self.k, self.n
        b = len(S)
        ie, je = S.origin(b)
        G = S.grid(extra_rows=k if b % self.nb == 0 else 0)
        excluded = set()
        for key in _windows(G, (k, k)):
            excluded.add(_bits_to_int(np.unpackbits(np.frombuffer(key, dtype=np.uint8))[: k * k]))
        for a, c in itertools.product(range(k), repeat=2):
            if (a, c) == (0, 0) or ie - a < 0 or je - c < 0:
                continue
            win = G[ie - a : ie - a + k, je - c : je - c + k]
            semi = SemiSquare.from_square(np.where(win < 0, 0, win), (a, c), q=2)
            assert (win[semi.domain.mask()] >= 0).all()
            excluded.add(_bits_to_int(cr_complete(semi).values))
        assert len(excluded) < 2 ** (k * k), "no expansion block is available"
        Y = 0
        while True:
            if Y not in excluded and (not self.strict or self._strict_ok(G, ie, je, Y)):
                return Y
            Y += 1
            assert Y < 2 ** (k * k), "no expansion block is available"

    def _strict_ok(self, G: np.ndarray, ie: int, je: int, Y: int) -> bool:
        k, L = self.k, self.L
        H = G.copy()
        H[ie : ie + k, je : je + k] = _int_to_bits(Y, k * k).reshape(k, k)
        key_m = np.packbits(self.marker.reshape(1, -1).astype(np.uint8), axis=1)[0].tobytes()
        if len(_windows(H, (k, k)).get(key_m, [])) > 1:
            return False
        return all(len(pos) == 1 for pos in _windows(H, (L, L)).values())

    def encode(self, W: NdArray, trace: list | None = None) -> NdArray:
        if W.domain != self.in_domain or W.q != 2:
            raise DomainError(f"encoder input must be binary over {self.in_domain!r}")
        k, n = self.k, self.n
        X = np.empty(n * n, dtype=np.int8)
        X[0] = 0
        X[1:] = W.values
        X = X.reshape(n, n)
        S = _Blocks(n, k, [])
        S.blocks = [X[i : i + k, j : j + k].copy() for i in range(0, n, k) for j in range(0, n, k)]
        S.blocks.append(self.marker.copy())
        self._eliminate(S, trace)
        target = self.nb * self.nb
        while len(S) < target:
            ie, je = S.origin(len(S))
            Y = self._expansion_pick(S)
            if trace is not None:
                trace.append(f"EXPAND @{_fmt((ie, je))} Y={Y:0{-(-k * k // 4)}x}")
            S.blocks.append(_int_to_bits(Y, k * k).reshape(k, k))
        S.blocks = S.blocks[:target]
        return NdArray(self.square, S.grid().reshape(-1), 2)

    # -- decoding --------------------------------------------------------

    def _restore(self, S: _Blocks, npayload: int, p1, a: int, b: int, twin=None):
        """Undo ``_remove`` given the popped payload size; ``twin`` None means the region held P_M."""
        k = self.k
        del S.blocks[:npayload]
        hi, hj = self._aligned(p1)
        base = S.index(hi, hj)
        ids = [base + x * self.nb + y for x in range(a) for y in range(b)]
        if ids[-1] >= len(S) + len(ids) - 1:
            raise CorruptionError(f"decoded region at {p1} would displace the marker")
        for b_id in ids:
            S.blocks.insert(b_id, np.full((k, k), _PENDING, dtype=np.int8))
        G = S.grid()
        hat_only, r_only = self._swap_lists(p1, a, b)
        rows, cols = a * k, b * k
        if p1[0] + rows > G.shape[0] or p1[1] + cols > self.n:
            raise CorruptionError(f"decoded region at {p1} leaves the array")
        if hat_only:
            hi_idx = tuple(np.array(hat_only).T)
            r_idx = tuple(np.array(r_only).T)
            if (G[r_idx] < 0).any():
                raise CorruptionError("restored fringe references missing cells")
            G[hi_idx] = G[r_idx]
        if twin is None:
            D = np.zeros((rows, cols), dtype=np.int8)
            D[0, 0] = 1
        else:
            if twin == p1:
                raise CorruptionError("twin position equals the removed one")
            if twin[0] + rows > G.shape[0] or twin[1] + cols > self.n:
                raise CorruptionError(f"twin region at {twin} leaves the array")
            D = np.empty((rows, cols), dtype=np.int8)
            di, dj = twin[0] - p1[0], twin[1] - p1[1]
            # cells of the twin inside the removed region refer to D itself,
            # always at a lexicographically later (or earlier) offset
            order = itertools.product(range(rows), range(cols))
            if twin > p1:
                order = reversed(list(order))
            for x, y in order:
                si, sj = x + di, y + dj
                if 0 <= si < rows and 0 <= sj < cols:
                    D[x, y] = D[si, sj]
                else:
                    D[x, y] = G[twin[0] + x, twin[1] + y]
        if (D < 0).any():
            raise CorruptionError("twin region references missing cells")
        G[p1[0] : p1[0] + rows, p1[1] : p1[1] + cols] = D
        if (G == _PENDING).any():
            raise CorruptionError("restored region does not cover the reinserted blocks")
        S.load(G)

    def decode(self, X: NdArray, trace: list | None = None) -> NdArray:
        if X.domain != self.square or X.q != 2:
            raise DomainError(f"decoder input must be binary over {self.square!r}")
        k, n, nb = self.k, self.n, self.nb
        G = X.to_dense().astype(np.int8)
        S = _Blocks(n, k, [G[i : i + k, j : j + k].copy() for i in range(0, n, k) for j in range(0, n, k)])
        win = sliding_window_view(G, (k, k)).reshape(-1, k * k)
        hits = np.flatnonzero((win == self.marker.reshape(-1)).all(axis=1))
        if hits.size:
            i, j = divmod(int(hits[0]), n - k + 1)
            if i % k or j % k:
                raise CorruptionError(f"first marker copy at ({i},{j}) is not block aligned")
            S.blocks = S.blocks[: S.index(i, j) + 1]
        else:
            S.blocks.append(self.marker.copy())
        for _ in range(self.max_iterations):
            head = S.blocks[0].reshape(-1)
            if head[0] == 0:
                break
            if head[1] == 1:
                p1 = self._read_pos(head[2 : 2 + self.pos_width])
                rest = head[2 + self.pos_width :]
                idx = from_digits(rest[: self.i_width], 2)
                if not rest[self.i_width :].all():
                    raise CorruptionError("case 3 payload padding corrupted")
                m = len(S)  # the sequence held m + 1 blocks before the removal
                front = self.frontier(self._presence_grid(m + 1), S.origin(m))
                if idx >= len(front):
                    raise CorruptionError(f"frontier index {idx} out of range")
                p2 = front[idx]
                if trace is not None:
                    trace.append(f"CASE3 @{_fmt(p1)}<{_fmt(p2)}")
                self._restore(S, 1, p1, 1, 2, twin=p2)
            elif head[2] == 1:
                p1 = self._read_pos(head[3 : 3 + self.pos_width])
                if not head[3 + self.pos_width :].all():
                    raise CorruptionError("case 1 payload padding corrupted")
                if trace is not None:
                    trace.append(f"CASE1 @{_fmt(p1)}")
                self._restore(S, 1, p1, 1, 1)
            else:
                if len(S) < 3:
                    raise CorruptionError("case 2 payload truncated")
                bits = np.hstack(S.blocks[:3]).reshape(-1)
                p1 = self._read_pos(bits[3 : 3 + self.pos_width])
                p2 = self._read_pos(bits[3 + self.pos_width : 3 + 2 * self.pos_width])
                if not bits[3 + 2 * self.pos_width :].all():
                    raise CorruptionError("case 2 payload padding corrupted")
                if trace is not None:
                    lo, hi = sorted((p1, p2))
                    trace.append(f"CASE2 @{_fmt(lo)}<{_fmt(hi)}" + ("" if p1 < p2 else " rm=2"))
                self._restore(S, 3, p1, 2, 2, twin=p2)
        else:
            raise CorruptionError("decoder did not reach the start bit")
        if len(S) != nb * nb + 1 or not np.array_equal(S.blocks[-1], self.marker):
            raise CorruptionError("marker block not where it belongs after unwinding")
        out = S.grid()[:n, :n].reshape(-1)
        return NdArray(self.in_domain, out[1:], 2)

    def _presence_grid(self, count: int) -> np.ndarray:
        """Grid of a ``count``-block sequence with 0 on present cells."""
        G = np.full((-(-count // self.nb) * self.k, self.n), _HOLE, dtype=np.int8)
        for b in range(count):
            i, j = (b // self.nb) * self.k, (b % self.nb) * self.k
            G[i : i + self.k, j : j + self.k] = 0
        return G
