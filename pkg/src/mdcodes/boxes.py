"""Minimal V-boxes: box shapes of volume >= V that cannot shrink any side."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .core import ceil_log, from_digits, to_digits
from .errors import DomainError

ALPHA = math.sqrt(2.0)


@dataclass(frozen=True, order=True)
class BoxShape:
    sides: tuple[int, ...]

    def __post_init__(self):
        if not self.sides or any(s < 1 for s in self.sides):
            raise DomainError(f"box sides must be positive, got {self.sides}")

    @property
    def d(self) -> int:
        return len(self.sides)

    @property
    def volume(self) -> int:
        return math.prod(self.sides)

    def fits_in(self, other: "BoxShape") -> bool:
        """Componentwise <=."""
        return self.d == other.d and all(a <= b for a, b in zip(self.sides, other.sides))

    def __str__(self):
        return " ".join(map(str, self.sides))


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


@lru_cache(maxsize=256)
def _minimal_sides(d: int, V: int) -> tuple[tuple[int, ...], ...]:
    # A shape is minimal iff every side x_i satisfies (x_i - 1) * rest < V,
    # where rest is the product of the other sides.  Sides are bounded by V.
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int], prod: int):
        depth = len(prefix)
        if depth == d - 1:
            last = _ceil_div(V, prod)
            shape = prefix + [last]
            total = prod * last
            if all((x - 1) * (total // x) < V for x in shape):
                out.append(tuple(shape))
            return
        x = 1
        # the remaining sides are >= 1 so the volume is at least prod * x;
        # once prod * (x - 1) >= V the side x can always shrink.
        while prod * (x - 1) < V:
            prefix.append(x)
            rec(prefix, prod * x)
            prefix.pop()
            if depth < d - 2:
                x += 1
                continue
            # next to last side: among the x sharing one forced last side only
            # the smallest can be minimal, so jump to where that side drops
            last = _ceil_div(V, prod * x)
            if last == 1:
                break
            x = max(x + 1, _ceil_div(V, prod * (last - 1)))

    rec([], 1)
    return tuple(sorted(out))


class MinimalBoxFamily:
    """F_d(V), sorted lexicographically by side tuple."""

    def __init__(self, d: int, V: int):
        if d < 1 or V < 1:
            raise DomainError("d and V must be positive")
        self.d, self.V = d, V
        self.shapes = tuple(BoxShape(s) for s in _minimal_sides(d, V))
        self._rank = {s: i for i, s in enumerate(self.shapes)}

    def __len__(self):
        return len(self.shapes)

    def __iter__(self):
        return iter(self.shapes)

    def __contains__(self, shape):
        return _as_shape(shape) in self._rank

    def rank(self, shape) -> int:
        try:
            return self._rank[_as_shape(shape)]
        except KeyError:
            raise DomainError(f"{shape} is not a minimal {self.V}-box") from None

    def fitting(self, n: int) -> list[BoxShape]:
        """Members with every side <= n."""
        return [s for s in self.shapes if max(s.sides) <= n]

    def __repr__(self):
        return f"MinimalBoxFamily(d={self.d}, V={self.V}, size={len(self)})"


def _as_shape(shape) -> BoxShape:
    return shape if isinstance(shape, BoxShape) else BoxShape(tuple(shape))


def enumerate_minimal(d: int, V: int) -> MinimalBoxFamily:
    return MinimalBoxFamily(d, V)


def f_d(d: int, V: int) -> int:
    return len(_minimal_sides(d, V))


def f2_closed_form(V: int) -> int:
    """The published planar count: 2*floor(sqrt V), minus one when V is a square."""
    s = math.isqrt(V)
    return 2 * s - 1 if s * s == V else 2 * s


def f2_exact(V: int) -> int:
    """Planar count of shrink-minimal boxes.

    Differs from :func:`f2_closed_form` by one when s(s+1) < V < (s+1)^2
    with s = floor(sqrt V): the square (s+1, s+1) is then minimal too.
    """
    s = math.isqrt(V)
    if s * s == V:
        return 2 * s - 1
    return 2 * s + (1 if s * (s + 1) < V else 0)


def _check_bound_dim(d: int):
    if d < 2:
        raise DomainError("the bounds on f_d(V) are stated for d >= 2")


def box_constant(d: int) -> float:
    """C_d = alpha^(d-2) d! (d-1)! with alpha = sqrt 2."""
    return ALPHA ** (d - 2) * math.factorial(d) * math.factorial(d - 1)


def f_d_upper(d: int, V: int) -> float:
    _check_bound_dim(d)
    return box_constant(d) * V ** ((d - 1) / d)


def _iroot_floor(V: int, d: int) -> int:
    r = int(round(V ** (1.0 / d)))
    while r**d > V:
        r -= 1
    while (r + 1) ** d <= V:
        r += 1
    return r


def f_d_lower(d: int, V: int) -> int:
    _check_bound_dim(d)
    return d * _iroot_floor(V, d) ** (d - 1) - d + 1


def shape_index(shape, family: MinimalBoxFamily, q: int, width: int | None = None) -> tuple[int, ...]:
    """Rank of ``shape`` in ``family`` as LSB-first base-q digits."""
    if width is None:
        width = ceil_log(len(family), q)
    return to_digits(family.rank(shape), q, width)


def shape_from_index(digits: Sequence[int], family: MinimalBoxFamily, q: int) -> BoxShape:
    r = from_digits(digits, q)
    if r >= len(family):
        raise DomainError(f"shape rank {r} outside a family of {len(family)}")
    return family.shapes[r]
