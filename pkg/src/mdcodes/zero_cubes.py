"""Single-redundancy-symbol encoder for zero L-cubes free arrays.

The last corner ``(n-1)*1`` of the output is a flag: 1 means nothing was
eliminated.  Every zero L-cube found is overwritten with the contents of
the lookup cube at ``(n-L)*1``, and the lookup cube then stores the
position of the eliminated cube (shifted by the last unit vector so the
stored rank is never 0) followed by zero padding.  The padding always
covers the corner, which is how the decoder knows to keep unwinding.
"""
from __future__ import annotations

import logging
from typing import Iterator

import numpy as np

from .core import Box, CubeMinusCorner, NdArray, ceil_log, iroot_ceil, to_digits, from_digits
from .errors import CorruptionError, DomainError, UnsupportedSizeError

log = logging.getLogger(__name__)


def param_L(n: int, d: int, q: int) -> int:
    """L = ceil((ceil(d log_q n) + 1)^(1/d)); raises if the lookup cube does not fit."""
    if n < 2:
        raise UnsupportedSizeError("n must be at least 2")
    L = iroot_ceil(ceil_log(n**d, q) + 1, d)
    if L > n:
        raise UnsupportedSizeError(f"L = {L} exceeds n = {n}; the lookup cube does not fit")
    return L


def _zero_window_starts(X: np.ndarray, L: int) -> np.ndarray:
    """Boolean array over [n-L+1]^d marking zero L-cubes, via a summed-area table."""
    d = X.ndim
    s = (X != 0).astype(np.int32)
    for ax in range(d):
        s = np.cumsum(s, axis=ax)
    s = np.pad(s, [(1, 0)] * d)
    m = X.shape[0] - L + 1
    # inclusion-exclusion over the 2^d corners of each window
    total = np.zeros((m,) * d, dtype=np.int32)
    for corner in np.ndindex(*(2,) * d):
        sl = tuple(slice(L, L + m) if c else slice(0, m) for c in corner)
        sign = -1 if (d - sum(corner)) % 2 else 1
        total += sign * s[sl]
    return total == 0


class ZeroCubesCodec:
    """Encoder/decoder pair over ``[n]^d`` minus the last corner.

    ``rescan`` selects what happens after an elimination: with the default
    the next cube handled is the first zero cube anywhere in scan order, so
    cubes emptied behind the scan position by a fresh lookup payload are
    caught too.  ``rescan=False`` is a plain single forward pass.
    """

    def __init__(self, n: int, d: int, q: int = 2, rescan: bool = True):
        if d < 1 or q < 2:
            raise DomainError("need d >= 1 and q >= 2")
        self.n, self.d, self.q = n, d, q
        self.L = param_L(n, d, q)
        self.width = ceil_log(n**d, q)
        if self.width >= self.L**d:
            raise UnsupportedSizeError("position payload does not leave room for the flag")
        self.rescan = rescan
        self.cube = Box.cube(n, d)
        self.in_domain = CubeMinusCorner(n, d, "last")
        self.corner = (n - 1,) * d
        lo = n - self.L
        self._q_slices = (slice(lo, n),) * d
        self._q_lo = np.full(d, lo)
        # elimination count can never exceed the number of non-zero symbols
        # the payloads could add; this is a generous safety net
        self.max_iterations = 4 * n**d + 16

    # -- helpers ---------------------------------------------------------

    def _regions(self, v):
        L = self.L
        cube_sl = tuple(slice(c, c + L) for c in v)
        # A = cube ∩ lookup, expressed relative to each region
        rel = np.array(v) - self._q_lo
        idx = np.indices((L,) * self.d)
        in_lookup = np.ones((L,) * self.d, dtype=bool)  # cube-relative
        in_cube = np.ones((L,) * self.d, dtype=bool)  # lookup-relative
        for ax in range(self.d):
            in_lookup &= idx[ax] + rel[ax] >= 0
            in_cube &= (idx[ax] - rel[ax] >= 0) & (idx[ax] - rel[ax] < L)
        return cube_sl, in_lookup, in_cube

    def _payload(self, v) -> np.ndarray:
        shifted = tuple(v[:-1]) + (v[-1] + 1,)
        digits = to_digits(self.cube.rank(shifted), self.q, self.width)
        out = np.zeros(self.L**self.d, dtype=np.int64)
        out[: self.width] = digits
        return out.reshape((self.L,) * self.d)

    def _check_input(self, W: NdArray):
        if W.domain != self.in_domain or W.q != self.q:
            raise DomainError(f"encoder input must be q={self.q} over {self.in_domain!r}")

    # -- encoding --------------------------------------------------------

    def encode_steps(self, W: NdArray) -> Iterator[tuple[tuple[int, ...], np.ndarray]]:
        """Yield ``(v, X)`` after each elimination; the final state is the last yield or the start."""
        self._check_input(W)
        X = np.empty((self.n,) * self.d, dtype=np.int64)
        flat = X.reshape(-1)
        flat[:-1] = W.values
        flat[-1] = 1
        yield None, X.copy()
        L = self.L
        m = self.n - L + 1
        start = 0
        for it in range(self.max_iterations + 1):
            zeros = _zero_window_starts(X, L).reshape(-1)
            cand = np.flatnonzero(zeros if self.rescan else zeros[start:])
            if cand.size == 0:
                return
            if it == self.max_iterations:
                raise RuntimeError("zero-cube elimination did not terminate")
            pos = int(cand[0]) + (0 if self.rescan else start)
            v = tuple(int(c) for c in np.unravel_index(pos, (m,) * self.d))
            cube_sl, in_lookup, in_cube = self._regions(v)
            lookup = X[self._q_slices]
            moved = lookup[~in_cube].copy()
            X[cube_sl][~in_lookup] = moved
            X[self._q_slices] = self._payload(v)
            assert X[self.corner] == 0
            start = pos + 1
            yield v, X.copy()

    def encode(self, W: NdArray, trace: list | None = None) -> NdArray:
        X = None
        for v, X in self.encode_steps(W):
            if v is not None and trace is not None:
                trace.append("ELIM v=(" + ",".join(map(str, v)) + ")")
        return NdArray(self.cube, X.reshape(-1), self.q)

    def encode_dense(self, W: np.ndarray) -> np.ndarray:
        """Convenience wrapper: ``W`` is the cube with any value at the corner."""
        vals = np.asarray(W).reshape(-1)[:-1]
        return self.encode(NdArray(self.in_domain, vals, self.q)).to_dense()

    # -- decoding --------------------------------------------------------

    def decode(self, X: NdArray, trace: list | None = None) -> NdArray:
        if X.domain != self.cube or X.q != self.q:
            raise DomainError(f"decoder input must be q={self.q} over {self.cube!r}")
        Y = X.to_dense()
        L, m = self.L, self.n - self.L + 1
        for _ in range(self.max_iterations + 1):
            if Y[self.corner] != 0:
                break
            digits = Y[self._q_slices].reshape(-1)
            if digits[self.width:].any():
                raise CorruptionError("lookup cube padding is not all zero")
            r = from_digits(digits[: self.width], self.q)
            if r >= len(self.cube):
                raise CorruptionError(f"stored rank {r} is out of range")
            w = self.cube.unrank(r)
            if w[-1] < 1:
                raise CorruptionError(f"stored position {w} has no unit shift to undo")
            v = w[:-1] + (w[-1] - 1,)
            if any(c >= m for c in v):
                raise CorruptionError(f"decoded cube position {v} outside [{m}]^{self.d}")
            if trace is not None:
                trace.append("UNDO v=(" + ",".join(map(str, v)) + ")")
            cube_sl, in_lookup, in_cube = self._regions(v)
            lookup = Y[self._q_slices]
            lookup[~in_cube] = Y[cube_sl][~in_lookup]
            Y[cube_sl] = 0
        else:
            raise CorruptionError("decoder did not reach the flag")
        return NdArray(self.in_domain, Y.reshape(-1)[:-1], self.q)
