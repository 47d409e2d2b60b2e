"""Morphisms of the OI skeleton and rank bookkeeping for free OI-modules.

An OI-morphism ``m -> n`` is a strictly increasing map ``[m] -> [n]`` where
``[n] = {1, ..., n}``.  It is stored by its value string, so ``357`` is the
morphism ``3 -> 8`` (or any larger target) sending ``1, 2, 3`` to ``3, 5, 7``.
"""
from __future__ import annotations

import contextlib
import itertools
from collections import Counter
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Iterator, Mapping, Sequence

DEFAULT_WIDTH_CAP = 12
_width_cap = DEFAULT_WIDTH_CAP


class WidthMismatchError(ValueError):
    """Raised when two width-indexed objects do not line up."""


class WidthCapError(ValueError):
    """Raised when a width exceeds the configured enumeration cap."""


class InsufficientDataError(ValueError):
    """The supplied rank data is too short to decide a free shape."""


def get_width_cap() -> int:
    return _width_cap


def set_width_cap(cap: int) -> None:
    global _width_cap
    if cap < 0:
        raise ValueError("width cap must be nonnegative")
    _width_cap = int(cap)


@contextlib.contextmanager
def width_cap(cap: int) -> Iterator[None]:
    """Temporarily change the width cap."""
    old = get_width_cap()
    set_width_cap(cap)
    try:
        yield
    finally:
        set_width_cap(old)


def check_width(w: int) -> int:
    if w < 0:
        raise ValueError(f"width must be nonnegative, got {w}")
    if w > _width_cap:
        raise WidthCapError(f"width {w} exceeds the width cap {_width_cap}")
    return w


@dataclass(frozen=True, order=True)
class OIMorphism:
    """A strictly increasing map ``[source_width] -> [target_width]``.

    Ordering is lexicographic on ``(source_width, target_width, values)``,
    so morphisms with a common source and target sort by value string.
    """

    source_width: int
    target_width: int
    values: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if self.source_width < 0 or self.target_width < 0:
            raise ValueError("widths must be nonnegative")
        if len(self.values) != self.source_width:
            raise ValueError(
                f"expected {self.source_width} values, got {len(self.values)}"
            )
        prev = 0
        for v in self.values:
            if v <= prev or v > self.target_width:
                raise ValueError(
                    f"values {self.values} are not strictly increasing in "
                    f"[1, {self.target_width}]"
                )
            prev = v

    @classmethod
    def identity(cls, w: int) -> "OIMorphism":
        return cls(w, w, tuple(range(1, w + 1)))

    @classmethod
    def from_string(cls, s: str, target_width: int) -> "OIMorphism":
        """Parse digit-string shorthand such as ``"357"``.

        Only single-digit values can be written this way; an empty string is
        the empty morphism ``0 -> target_width``.
        """
        if not s.isdigit() and s != "":
            raise ValueError(f"not a digit string: {s!r}")
        vals = tuple(int(c) for c in s)
        return cls(len(vals), target_width, vals)

    @classmethod
    def skipping(cls, k: int, w: int) -> "OIMorphism":
        """The morphism ``w - 1 -> w`` whose image misses ``k``."""
        if not 1 <= k <= w:
            raise ValueError(f"cannot skip {k} in [{w}]")
        return cls(w - 1, w, tuple(i if i < k else i + 1 for i in range(1, w)))

    def __call__(self, i: int) -> int:
        if not 1 <= i <= self.source_width:
            raise ValueError(f"{i} is outside [1, {self.source_width}]")
        return self.values[i - 1]

    def __str__(self) -> str:
        if all(v < 10 for v in self.values):
            body = "".join(str(v) for v in self.values) or "()"
        else:
            body = ",".join(str(v) for v in self.values)
        return f"{body}:{self.source_width}->{self.target_width}"

    @property
    def is_identity(self) -> bool:
        return self.source_width == self.target_width

    def image(self) -> frozenset[int]:
        return frozenset(self.values)

    def to_json(self) -> dict:
        return {
            "source": self.source_width,
            "target": self.target_width,
            "values": list(self.values),
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "OIMorphism":
        return cls(int(obj["source"]), int(obj["target"]), tuple(obj["values"]))


def enumerate_morphisms(m: int, n: int) -> list[OIMorphism]:
    """All OI-morphisms ``m -> n`` in lexicographic order of value strings."""
    check_width(m)
    check_width(n)
    return [
        OIMorphism(m, n, vals)
        for vals in itertools.combinations(range(1, n + 1), m)
    ]


def compose(outer: OIMorphism, inner: OIMorphism) -> OIMorphism:
    """``outer o inner``: first apply ``inner``, then ``outer``."""
    if inner.target_width != outer.source_width:
        raise WidthMismatchError(
            f"cannot compose {outer} after {inner}: "
            f"{inner.target_width} != {outer.source_width}"
        )
    return OIMorphism(
        inner.source_width,
        outer.target_width,
        tuple(outer.values[v - 1] for v in inner.values),
    )


def apply_to_tuple(eps: OIMorphism, t: Sequence[int]) -> tuple[int, ...]:
    """Apply ``eps`` componentwise to a strictly increasing tuple."""
    prev = 0
    for a in t:
        if a <= prev:
            raise ValueError(f"tuple {tuple(t)} is not strictly increasing")
        prev = a
    return tuple(eps(a) for a in t)


@dataclass(frozen=True)
class FreeOIModuleShape:
    """Generator widths ``n_1, ..., n_r`` of a free OI-module, as a multiset."""

    generator_widths: tuple[int, ...]

    def __post_init__(self) -> None:
        widths = tuple(sorted(int(n) for n in self.generator_widths))
        if any(n < 0 for n in widths):
            raise ValueError("generator widths must be nonnegative")
        object.__setattr__(self, "generator_widths", widths)

    @classmethod
    def from_counts(cls, counts: Mapping[int, int]) -> "FreeOIModuleShape":
        return cls(tuple(itertools.chain.from_iterable(
            [n] * c for n, c in counts.items()
        )))

    @property
    def rank(self) -> int:
        return len(self.generator_widths)

    def counts(self) -> dict[int, int]:
        return dict(sorted(Counter(self.generator_widths).items()))

    def __str__(self) -> str:
        return "{" + ",".join(str(n) for n in self.generator_widths) + "}"


class _NotFree:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NOT_FREE"

    def __bool__(self) -> bool:
        return False


NOT_FREE = _NotFree()


def free_rank_at_width(shape: FreeOIModuleShape | Iterable[int], w: int) -> int:
    """Rank over ``A(w)`` of the width-``w`` component: sum of ``C(w, n_i)``."""
    widths = shape.generator_widths if isinstance(shape, FreeOIModuleShape) else shape
    return sum(comb(w, n) for n in widths)


def shape_from_rank_sequence(
    ranks: Mapping[int, int] | Sequence[int], max_width: int
) -> FreeOIModuleShape | _NotFree:
    """Recover the generator widths of a free module from its ranks.

    ``ranks[w]`` must be given for every ``0 <= w <= max_width``.  The
    multiplicity of width ``m`` is the ``m``-th forward difference of the rank
    sequence at 0.  A negative multiplicity proves the data does not come
    from a free module and gives ``NOT_FREE``.  If all multiplicities are
    nonnegative but the top one is nonzero, a generator could sit at
    ``max_width`` or beyond, and :class:`InsufficientDataError` is raised.
    """
    r = [int(ranks[w]) for w in range(max_width + 1)]
    mult = [
        sum((-1) ** (m - k) * comb(m, k) * r[k] for k in range(m + 1))
        for m in range(max_width + 1)
    ]
    if any(c < 0 for c in mult):
        return NOT_FREE
    if mult[max_width] != 0:
        raise InsufficientDataError(
            f"difference table has not stabilized by width {max_width}"
        )
    shape = FreeOIModuleShape.from_counts({m: c for m, c in enumerate(mult) if c})
    if any(free_rank_at_width(shape, w) != r[w] for w in range(max_width + 1)):
        return NOT_FREE
    return shape
