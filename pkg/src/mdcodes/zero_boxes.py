"""Single-redundancy-symbol encoder for zero V-boxes free arrays.

Works on the serialized array: a zero box is spliced out of sd(X) and a
payload of the same length (a leading 1, the box position, the box shape
and padding) is spliced in at the front.  The first symbol doubles as the
decoder's loop flag.
"""
from __future__ import annotations

import math

import numpy as np

from .boxes import MinimalBoxFamily, box_constant
from .core import Box, CubeMinusCorner, NdArray, ceil_log, from_digits, to_digits
from .errors import CorruptionError, DomainError, UnsupportedSizeError

_EPS = 1e-9


def _ceil(x: float) -> int:
    # ceilings of real expressions; absorb float noise around integers
    r = round(x)
    return int(r) if abs(x - r) < _EPS else math.ceil(x)


def _log(x: float, q: int) -> float:
    return math.log(x) / math.log(q)


def param_C(d: int, q: int) -> int:
    return _ceil(_log(box_constant(d), q) + (d - 1) / d * _log(d + 1, q))


def param_V(n: int, d: int, q: int = 2) -> int:
    """V = ceil(d log_q n) + ceil((d-1)/d log_q log_q n) + C + 1 (no fit check)."""
    if n < 4:
        raise UnsupportedSizeError("the box codec needs n >= 4")
    loglog = _log(_log(n, q), q) if d > 1 else 0.0
    return ceil_log(n**d, q) + _ceil((d - 1) / d * loglog) + param_C(d, q) + 1


def _zero_box_starts(X: np.ndarray, shape) -> np.ndarray:
    d = X.ndim
    s = (X != 0).astype(np.int32)
    for ax in range(d):
        s = np.cumsum(s, axis=ax)
    s = np.pad(s, [(1, 0)] * d)
    grid = tuple(X.shape[i] - shape[i] + 1 for i in range(d))
    total = np.zeros(grid, dtype=np.int32)
    for corner in np.ndindex(*(2,) * d):
        sl = tuple(slice(shape[i], shape[i] + grid[i]) if c else slice(0, grid[i]) for i, c in enumerate(corner))
        total += (-1 if (d - sum(corner)) % 2 else 1) * s[sl]
    return total == 0


class ZeroBoxesCodec:
    def __init__(self, n: int, d: int, q: int = 2, V: int | None = None):
        if d < 1 or q < 2:
            raise DomainError("need d >= 1 and q >= 2")
        self.n, self.d, self.q = n, d, q
        self.V = param_V(n, d, q) if V is None else V
        self.family = MinimalBoxFamily(d, self.V)
        self.pos_width = ceil_log(n**d, q)
        self.shape_width = ceil_log(len(self.family), q)
        self.prefix = 1 + self.pos_width + self.shape_width
        if self.prefix > self.V:
            raise UnsupportedSizeError(
                f"payload of {self.prefix} symbols does not fit a box of volume {self.V} (n={n}, d={d}, q={q})"
            )
        if self.V > n**d:
            raise UnsupportedSizeError(f"V = {self.V} exceeds the array volume {n**d}")
        self.shapes = self.family.fitting(n)
        self.cube = Box.cube(n, d)
        self.in_domain = CubeMinusCorner(n, d, "first")

    def _box_ranks(self, u, sides) -> np.ndarray:
        idx = np.indices(sides).reshape(self.d, -1) + np.array(u)[:, None]
        return np.ravel_multi_index(tuple(idx), (self.n,) * self.d)

    def _first_zero_box(self, X: np.ndarray):
        best = None
        for si, shape in enumerate(self.shapes):
            hits = np.flatnonzero(_zero_box_starts(X, shape.sides))
            if hits.size == 0:
                continue
            grid = tuple(self.n - s + 1 for s in shape.sides)
            u = tuple(int(c) for c in np.unravel_index(hits[0], grid))
            key = (self.cube.rank(u), si)
            if best is None or key < best[0]:
                best = (key, u, shape)
        return None if best is None else best[1:]

    def encode(self, W: NdArray, trace: list | None = None) -> NdArray:
        if W.domain != self.in_domain or W.q != self.q:
            raise DomainError(f"encoder input must be q={self.q} over {self.in_domain!r}")
        x = np.empty(self.n**self.d, dtype=np.int64)
        x[0] = 0
        x[1:] = W.values
        weight = int(np.count_nonzero(x))
        for _ in range(self.n**self.d + 1):
            hit = self._first_zero_box(x.reshape((self.n,) * self.d))
            if hit is None:
                break
            u, shape = hit
            if trace is not None:
                trace.append("ELIM u=(" + ",".join(map(str, u)) + ") shape=(" + ",".join(map(str, shape.sides)) + ")")
            size = shape.volume
            payload = np.full(size, self.q - 1, dtype=np.int64)
            payload[0] = 1
            payload[1 : 1 + self.pos_width] = to_digits(self.cube.rank(u), self.q, self.pos_width)
            payload[1 + self.pos_width : self.prefix] = to_digits(self.family.rank(shape), self.q, self.shape_width)
            x = np.concatenate([payload, np.delete(x, self._box_ranks(u, shape.sides))])
            new_weight = int(np.count_nonzero(x))
            assert new_weight > weight, "Hamming weight must grow at every elimination"
            weight = new_weight
        else:
            raise RuntimeError("zero-box elimination did not terminate")
        return NdArray(self.cube, x, self.q)

    def decode(self, X: NdArray, trace: list | None = None) -> NdArray:
        if X.domain != self.cube or X.q != self.q:
            raise DomainError(f"decoder input must be q={self.q} over {self.cube!r}")
        x = X.values.copy()
        N = x.size
        for _ in range(N + 1):
            if x[0] == 0:
                break
            if x[0] != 1:
                raise CorruptionError(f"leading symbol {x[0]} is neither 0 nor 1")
            r = from_digits(x[1 : 1 + self.pos_width], self.q)
            s = from_digits(x[1 + self.pos_width : self.prefix], self.q)
            if r >= N or s >= len(self.family):
                raise CorruptionError("payload rank out of range")
            u, shape = self.cube.unrank(r), self.family.shapes[s]
            if any(c + a > self.n for c, a in zip(u, shape.sides)):
                raise CorruptionError(f"box {shape.sides} at {u} leaves the array")
            size = shape.volume
            if np.any(x[self.prefix : size] != self.q - 1):
                raise CorruptionError("payload padding corrupted")
            if trace is not None:
                trace.append("UNDO u=(" + ",".join(map(str, u)) + ") shape=(" + ",".join(map(str, shape.sides)) + ")")
            ranks = self._box_ranks(u, shape.sides)
            x = np.insert(x[size:], ranks - np.arange(size), 0)
        else:
            raise CorruptionError("decoder did not reach the start flag")
        return NdArray(self.in_domain, x[1:], self.q)
