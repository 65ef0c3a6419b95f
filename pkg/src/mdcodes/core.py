"""Coordinates, coordinate sets and d-dimensional q-ary arrays.

Coordinates are plain tuples of non-negative ints.  They are ordered
lexicographically with coordinate 0 most significant; ``sd`` lists the
symbols of an array in that order and ``md`` is its inverse.  For boxes
anchored at the origin this is exactly numpy's C order, which the codecs
rely on when they work on dense arrays.
"""
from __future__ import annotations

import itertools
import math
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DomainError

Coord = tuple[int, ...]

__all__ = [
    "Coord",
    "CoordSet",
    "Box",
    "CubeMinusCorner",
    "SemiSquareDomain",
    "ExplicitSet",
    "NdArray",
    "SemiSquare",
    "coord_cmp",
    "ceil_log",
    "iroot_ceil",
    "to_digits",
    "from_digits",
    "index_encode",
    "index_decode",
    "sd",
    "md",
    "read_sub",
    "write_sub",
    "semi_concat",
    "cr_complete",
    "format_array",
    "parse_array",
]


def coord_cmp(u: Sequence[int], v: Sequence[int]) -> int:
    """Return -1, 0 or 1 as ``u`` is less than, equal to or greater than ``v``.

    >>> coord_cmp((0, 1), (1, 0))
    -1
    >>> coord_cmp((2, 0), (1, 6))
    1
    """
    if len(u) != len(v):
        raise DomainError(f"dimension mismatch: {len(u)} vs {len(v)}")
    for a, b in zip(u, v):
        if a != b:
            return -1 if a < b else 1
    return 0


def ceil_log(x: int, q: int) -> int:
    """Smallest ``w >= 0`` with ``q**w >= x``, computed exactly."""
    if x < 1:
        raise DomainError("ceil_log needs x >= 1")
    w, p = 0, 1
    while p < x:
        p *= q
        w += 1
    return w


def iroot_ceil(m: int, d: int) -> int:
    """Smallest integer ``L >= 0`` with ``L**d >= m``."""
    if m <= 0:
        return 0
    L = max(1, int(round(m ** (1.0 / d))))
    while L**d < m:
        L += 1
    while L > 1 and (L - 1) ** d >= m:
        L -= 1
    return L


def to_digits(value: int, q: int, width: int) -> tuple[int, ...]:
    """Base-q digits of ``value``, least significant first, zero padded."""
    if value < 0 or value >= q**width:
        raise DomainError(f"{value} does not fit in {width} base-{q} digits")
    out = []
    for _ in range(width):
        value, r = divmod(value, q)
        out.append(r)
    return tuple(out)


def from_digits(digits: Iterable[int], q: int) -> int:
    value = 0
    for i, dgt in enumerate(digits):
        dgt = int(dgt)
        if not 0 <= dgt < q:
            raise DomainError(f"digit {dgt} outside [0, {q})")
        value += dgt * q**i
    return value


# ---------------------------------------------------------------------------
# coordinate sets


class CoordSet:
    """Finite subset of N^d with exact membership, size and rank."""

    d: int

    def __len__(self) -> int:
        raise NotImplementedError

    def __iter__(self) -> Iterator[Coord]:
        raise NotImplementedError

    def __contains__(self, v) -> bool:
        raise NotImplementedError

    def rank(self, v: Sequence[int]) -> int:
        raise NotImplementedError

    def unrank(self, r: int) -> Coord:
        raise NotImplementedError

    @property
    def bounds(self) -> Coord:
        """Exclusive upper corner of the smallest origin box holding the set."""
        raise NotImplementedError

    def mask(self) -> np.ndarray:
        """Boolean membership array over ``bounds``."""
        m = np.zeros(self.bounds, dtype=bool)
        for c in self:
            m[c] = True
        return m

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoordSet) or len(self) != len(other) or self.d != other.d:
            return False
        return all(a == b for a, b in zip(self, other))

    def __hash__(self):
        return hash((self.d, len(self)))


class Box(CoordSet):
    """``offset + [x_0] x ... x [x_{d-1}]``; rank is mixed radix, coordinate 0 most significant."""

    def __init__(self, sides: Sequence[int], offset: Sequence[int] | None = None):
        self.sides = tuple(int(s) for s in sides)
        if not self.sides or any(s < 0 for s in self.sides):
            raise DomainError(f"invalid box sides {sides}")
        self.d = len(self.sides)
        self.offset = tuple(int(o) for o in offset) if offset is not None else (0,) * self.d
        if len(self.offset) != self.d or any(o < 0 for o in self.offset):
            raise DomainError(f"invalid box offset {offset}")

    @classmethod
    def cube(cls, n: int, d: int) -> "Box":
        return cls((n,) * d)

    def __len__(self):
        return math.prod(self.sides)

    def __iter__(self):
        return itertools.product(*(range(o, o + s) for o, s in zip(self.offset, self.sides)))

    def __contains__(self, v):
        return len(v) == self.d and all(o <= c < o + s for c, o, s in zip(v, self.offset, self.sides))

    def rank(self, v):
        if v not in self:
            raise DomainError(f"{tuple(v)} not in {self!r}")
        r = 0
        for c, o, s in zip(v, self.offset, self.sides):
            r = r * s + (c - o)
        return r

    def unrank(self, r):
        if not 0 <= r < len(self):
            raise DomainError(f"rank {r} out of range for {self!r}")
        out = []
        for o, s in zip(reversed(self.offset), reversed(self.sides)):
            r, c = divmod(r, s)
            out.append(c + o)
        return tuple(reversed(out))

    @property
    def bounds(self):
        return tuple(o + s for o, s in zip(self.offset, self.sides))

    def mask(self):
        m = np.zeros(self.bounds, dtype=bool)
        m[tuple(slice(o, o + s) for o, s in zip(self.offset, self.sides))] = True
        return m

    def __repr__(self):
        if any(self.offset):
            return f"Box({self.sides}, offset={self.offset})"
        return f"Box({self.sides})"


class CubeMinusCorner(CoordSet):
    """``[n]^d`` without its first corner ``0`` or its last corner ``(n-1)*1``."""

    def __init__(self, n: int, d: int, corner: str = "last"):
        if corner not in ("first", "last"):
            raise DomainError(f"corner must be 'first' or 'last', got {corner!r}")
        if n < 1 or d < 1:
            raise DomainError("n and d must be positive")
        self.n, self.d, self.corner = n, d, corner
        self._cube = Box.cube(n, d)
        self.missing = (0,) * d if corner == "first" else (n - 1,) * d

    def __len__(self):
        return self.n**self.d - 1

    def __iter__(self):
        it = iter(self._cube)
        if self.corner == "first":
            next(it)
            return it
        return itertools.islice(it, len(self))

    def __contains__(self, v):
        return tuple(v) in self._cube and tuple(v) != self.missing

    def rank(self, v):
        if v not in self:
            raise DomainError(f"{tuple(v)} not in {self!r}")
        r = self._cube.rank(v)
        return r - 1 if self.corner == "first" else r

    def unrank(self, r):
        if not 0 <= r < len(self):
            raise DomainError(f"rank {r} out of range for {self!r}")
        return self._cube.unrank(r + 1 if self.corner == "first" else r)

    @property
    def bounds(self):
        return (self.n,) * self.d

    def mask(self):
        m = np.ones(self.bounds, dtype=bool)
        m[self.missing] = False
        return m

    def __repr__(self):
        return f"CubeMinusCorner(n={self.n}, d={self.d}, corner={self.corner!r})"


class _Enumerated(CoordSet):
    """Irregular set: members are materialized once in sorted order."""

    _members: tuple[Coord, ...]

    def _setup(self, members: Iterable[Coord]):
        self._members = tuple(sorted(set(tuple(int(c) for c in m) for m in members)))
        self._index = {m: i for i, m in enumerate(self._members)}

    def __len__(self):
        return len(self._members)

    def __iter__(self):
        return iter(self._members)

    def __contains__(self, v):
        return tuple(v) in self._index

    def rank(self, v):
        try:
            return self._index[tuple(v)]
        except KeyError:
            raise DomainError(f"{tuple(v)} not in set") from None

    def unrank(self, r):
        if not 0 <= r < len(self._members):
            raise DomainError(f"rank {r} out of range")
        return self._members[r]

    @property
    def bounds(self):
        if not self._members:
            return (0,) * self.d
        return tuple(max(m[i] for m in self._members) + 1 for i in range(self.d))


class ExplicitSet(_Enumerated):
    def __init__(self, members: Iterable[Sequence[int]], d: int | None = None):
        members = [tuple(m) for m in members]
        if d is None:
            if not members:
                raise DomainError("dimension required for an empty set")
            d = len(members[0])
        if any(len(m) != d or min(m) < 0 for m in members):
            raise DomainError("members must be non-negative coordinates of equal dimension")
        self.d = d
        self._setup(members)

    def __repr__(self):
        return f"ExplicitSet({len(self)} coords, d={self.d})"


class SemiSquareDomain(_Enumerated):
    """Coordinates of an (n, v) semi square.

    ``bottom``: ``[n]^2`` minus ``v + [n]^2`` (the quadrant at and after ``v``).
    ``upper``: ``[n]^2`` minus ``v - [n]^2`` (the quadrant at and before ``v``);
    the reflection ``w -> (n-1)*1 - w`` maps bottom(v) onto upper((n-1)*1 - v).
    """

    def __init__(self, n: int, v: Sequence[int], kind: str = "bottom"):
        if kind not in ("bottom", "upper"):
            raise DomainError(f"kind must be 'bottom' or 'upper', got {kind!r}")
        v = tuple(int(c) for c in v)
        if len(v) != 2 or min(v) < 0:
            raise DomainError(f"invalid semi-square corner {v}")
        self.n, self.v, self.kind, self.d = n, v, kind, 2
        self._setup(w for w in itertools.product(range(n), repeat=2) if self._member(w))

    def _member(self, w) -> bool:
        if self.kind == "bottom":
            return not (w[0] >= self.v[0] and w[1] >= self.v[1])
        return not (w[0] <= self.v[0] and w[1] <= self.v[1])

    def __contains__(self, v):
        v = tuple(v)
        return len(v) == 2 and all(0 <= c < self.n for c in v) and self._member(v)

    @property
    def bounds(self):
        return (self.n, self.n)

    def __repr__(self):
        return f"SemiSquareDomain(n={self.n}, v={self.v}, kind={self.kind!r})"


# ---------------------------------------------------------------------------
# arrays


class NdArray:
    """Immutable q-ary array over a finite coordinate set.

    ``values`` holds the symbols in sd order (increasing coordinates).
    """

    __slots__ = ("domain", "values", "q")

    def __init__(self, domain: CoordSet, values, q: int = 2):
        if q < 2:
            raise DomainError("alphabet size must be at least 2")
        vals = np.array(values, dtype=np.int64).reshape(-1)
        if vals.size != len(domain):
            raise DomainError(f"{vals.size} symbols for a domain of size {len(domain)}")
        if vals.size and (vals.min() < 0 or vals.max() >= q):
            raise DomainError(f"symbols must lie in [0, {q})")
        vals.setflags(write=False)
        self.domain, self.values, self.q = domain, vals, q

    @classmethod
    def from_dense(cls, arr, q: int = 2) -> "NdArray":
        arr = np.asarray(arr)
        return cls(Box(arr.shape), arr.reshape(-1), q)

    @property
    def d(self) -> int:
        return self.domain.d

    def to_dense(self, fill: int = -1) -> np.ndarray:
        """Embed into the bounding box; cells outside the domain get ``fill``."""
        if isinstance(self.domain, Box) and not any(self.domain.offset):
            return self.values.reshape(self.domain.sides).copy()
        out = np.full(self.domain.bounds, fill, dtype=np.int64)
        out[self.domain.mask()] = self.values
        return out

    def __getitem__(self, v) -> int:
        return int(self.values[self.domain.rank(v)])

    def __len__(self):
        return self.values.size

    def __eq__(self, other):
        return (
            isinstance(other, NdArray)
            and self.q == other.q
            and self.domain == other.domain
            and np.array_equal(self.values, other.values)
        )

    def __repr__(self):
        return f"NdArray({self.domain!r}, q={self.q}, values={self.values.tolist()})"


class SemiSquare(NdArray):
    """An (n, v) semi square of the given ``kind``."""

    __slots__ = ()

    def __init__(self, n: int, v: Sequence[int], values, q: int = 2, kind: str = "bottom"):
        super().__init__(SemiSquareDomain(n, v, kind), values, q)

    @classmethod
    def from_square(cls, square, v: Sequence[int], q: int = 2, kind: str = "bottom") -> "SemiSquare":
        """Restrict a dense n x n array to the (n, v) semi-square coordinates."""
        square = np.asarray(square)
        dom = SemiSquareDomain(square.shape[0], v, kind)
        return cls(square.shape[0], v, square[dom.mask()], q, kind)

    @property
    def n(self) -> int:
        return self.domain.n

    @property
    def v(self) -> Coord:
        return self.domain.v

    @property
    def kind(self) -> str:
        return self.domain.kind


def index_encode(v: Sequence[int], A: CoordSet, q: int, width: int | None = None) -> tuple[int, ...]:
    """Rank of ``v`` in ``A`` as base-q digits, least significant first.

    ``width`` defaults to ``ceil(log_q |A|)``.

    >>> ''.join(map(str, index_encode((1, 1), Box.cube(7, 2), 2, 6)))
    '000100'
    """
    if width is None:
        width = ceil_log(len(A), q)
    return to_digits(A.rank(v), q, width)


def index_decode(digits: Sequence[int], A: CoordSet, q: int) -> Coord:
    return A.unrank(from_digits(digits, q))


def sd(X: NdArray) -> np.ndarray:
    """Symbols of ``X`` in increasing coordinate order."""
    return X.values.copy()


def md(seq, A: CoordSet, q: int = 2) -> NdArray:
    """Place the i-th symbol of ``seq`` at the i-th coordinate of ``A``."""
    return NdArray(A, seq, q)


def _shift(A: CoordSet, v: Sequence[int]) -> Iterator[Coord]:
    for a in A:
        yield tuple(x + y for x, y in zip(a, v))


def read_sub(X: NdArray, v: Sequence[int], A: CoordSet) -> NdArray:
    """``X`` restricted to ``v + A``, re-based at the origin (indexed by ``A``)."""
    if len(v) != X.d or A.d != X.d:
        raise DomainError("dimension mismatch")
    ranks = [X.domain.rank(c) for c in _shift(A, v)]
    return NdArray(A, X.values[ranks], X.q)


def write_sub(X: NdArray, v: Sequence[int], A: CoordSet, values) -> NdArray:
    """Copy of ``X`` with the cells ``v + A`` replaced by ``values`` (sd order of ``A``)."""
    if isinstance(values, NdArray):
        values = values.values
    values = np.asarray(values).reshape(-1)
    if values.size != len(A):
        raise DomainError("value count does not match the region")
    ranks = [X.domain.rank(c) for c in _shift(A, v)]
    out = X.values.copy()
    out[ranks] = values
    return NdArray(X.domain, out, X.q)


# ---------------------------------------------------------------------------
# semi squares


def semi_concat(X: SemiSquare, Y: SemiSquare) -> NdArray:
    """Place ``Y`` at the corner of ``X`` and restrict to ``[n]^2``.

    Returns a :class:`SemiSquare` with corner ``v + u``, or a full square
    (``NdArray`` over ``[n]^2``) when nothing is left missing.
    """
    if X.kind != "bottom" or Y.kind != "bottom":
        raise DomainError("concatenation is defined for bottom semi squares")
    n, v = X.n, X.v
    t, u = Y.n, Y.v
    for i in range(2):
        if not (u[i] == 0 or v[i] + t >= n):
            raise DomainError(f"X o Y is not a semi square (coordinate {i})")
    dense = X.to_dense()
    ys = Y.to_dense()
    for w in itertools.product(range(n), repeat=2):
        if dense[w] >= 0:
            continue
        r = (w[0] - v[0], w[1] - v[1])
        if 0 <= r[0] < t and 0 <= r[1] < t and ys[r] >= 0:
            dense[w] = ys[r]
    corner = (v[0] + u[0], v[1] + u[1])
    expected = SemiSquareDomain(n, corner)
    if not np.array_equal(dense >= 0, expected.mask()):
        raise DomainError("X o Y is not a semi square")
    if len(expected) == n * n:
        return NdArray(Box((n, n)), dense.reshape(-1), X.q)
    return SemiSquare(n, corner, dense[expected.mask()], X.q)


def cr_complete(X: SemiSquare) -> NdArray:
    """Self-concatenate ``X`` ``ceil(n / v_min)`` times into a full n-square."""
    if X.kind != "bottom":
        raise DomainError("CR is defined for bottom semi squares")
    nonzero = [c for c in X.v if c > 0]
    if not nonzero:
        raise DomainError("CR of the empty semi square (v = 0) is undefined")
    if len(X) == X.n * X.n:
        return NdArray(Box((X.n, X.n)), X.values, X.q)
    reps = -(-X.n // min(nonzero))
    out = X
    for _ in range(reps - 1):
        if not isinstance(out, SemiSquare):
            break
        out = semi_concat(out, X)
    if isinstance(out, SemiSquare):
        raise DomainError("self concatenation did not fill the square")
    return out


# ---------------------------------------------------------------------------
# text format


def _domain_descriptor(domain: CoordSet) -> tuple[int, int, str]:
    if isinstance(domain, Box) and not any(domain.offset) and len(set(domain.sides)) == 1:
        return domain.sides[0], domain.d, "cube"
    if isinstance(domain, CubeMinusCorner):
        return domain.n, domain.d, "minus-" + domain.corner
    raise DomainError(f"no text descriptor for {domain!r}")


def format_array(X: NdArray) -> str:
    """Serialize ``X`` as ``d n q``, an optional ``domain=`` line and one line per first-coordinate slice."""
    n, d, kind = _domain_descriptor(X.domain)
    lines = [f"{d} {n} {X.q}"]
    if kind != "cube":
        lines.append(f"domain={kind}")
    per = n ** (d - 1)
    rows: list[list[str]] = [[] for _ in range(n)]
    for c, s in zip(X.domain, X.values.tolist()):
        rows[c[0]].append(str(s))
    lines.extend(" ".join(r) for r in rows if r)
    assert all(len(r) <= per for r in rows)
    return "\n".join(lines) + "\n"


def parse_array(text: str) -> NdArray:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise DomainError("empty array text")
    try:
        d, n, q = (int(t) for t in lines[0].split())
    except ValueError:
        raise DomainError(f"bad header line {lines[0]!r}") from None
    body = lines[1:]
    kind = "cube"
    if body and body[0].startswith("domain="):
        kind = body[0][len("domain="):]
        body = body[1:]
    if kind == "cube":
        domain: CoordSet = Box.cube(n, d)
    elif kind in ("minus-first", "minus-last"):
        domain = CubeMinusCorner(n, d, kind.split("-")[1])
    else:
        raise DomainError(f"unknown domain descriptor {kind!r}")
    try:
        symbols = [int(t) for ln in body for t in ln.split()]
    except ValueError:
        raise DomainError("symbols must be decimal integers") from None
    return NdArray(domain, symbols, q)
