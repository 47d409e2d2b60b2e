"""Monomial OI-ideals generated in a single width, and the tuple posets
behind squarefree strongly stable, strongly stable and Ferrers ideals."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Collection, Iterable, Mapping, Sequence

from .oi_core import apply_to_tuple, check_width, enumerate_morphisms
from .poly_oi import AlgebraSignature, Monomial, act

Tuple = tuple[int, ...]


@dataclass(frozen=True)
class TuplePoset:
    """Integer ``d``-tuples under the componentwise (Gale) order.

    ``kind`` is ``"P"`` (strictly increasing, entries in ``[n]``), ``"Q"``
    (weakly increasing, entries in ``[n]``) or ``"R"`` (strictly increasing
    with ``t[k] <= bounds[k]``).  For P and Q, ``bounds`` is ``(n,)``.
    """

    kind: str
    d: int
    bounds: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.kind not in ("P", "Q", "R"):
            raise ValueError(f"unknown poset kind {self.kind!r}")
        if self.kind == "R":
            if len(self.bounds) != self.d or list(self.bounds) != sorted(self.bounds):
                raise ValueError("R needs d nondecreasing bounds")
        elif len(self.bounds) != 1:
            raise ValueError("P and Q take a single bound n")

    @classmethod
    def P(cls, d: int, n: int) -> "TuplePoset":
        return cls("P", d, (n,))

    @classmethod
    def Q(cls, d: int, n: int) -> "TuplePoset":
        return cls("Q", d, (n,))

    @classmethod
    def R(cls, bounds: Sequence[int]) -> "TuplePoset":
        return cls("R", len(bounds), tuple(bounds))

    def _upper(self, k: int) -> int:
        return self.bounds[k] if self.kind == "R" else self.bounds[0]

    def __contains__(self, t: Sequence[int]) -> bool:
        if len(t) != self.d:
            return False
        prev = 0
        for k, a in enumerate(t):
            if a < 1 or a > self._upper(k):
                return False
            if self.kind == "Q":
                if a < prev:
                    return False
            elif a <= prev:
                return False
            prev = a
        return True

    def elements(self) -> list[Tuple]:
        top = max(self.bounds)
        if self.kind == "Q":
            cands = itertools.combinations_with_replacement(range(1, top + 1), self.d)
        else:
            cands = itertools.combinations(range(1, top + 1), self.d)
        return [t for t in cands if t in self]

    @staticmethod
    def leq(a: Sequence[int], b: Sequence[int]) -> bool:
        return all(x <= y for x, y in zip(a, b))

    def lower_covers(self, t: Sequence[int]) -> list[Tuple]:
        """Tuples obtained by decrementing one coordinate, kept if in the poset."""
        out = []
        for k in range(self.d):
            s = list(t)
            s[k] -= 1
            if tuple(s) in self:
                out.append(tuple(s))
        return out

    def interval(self, lo: Sequence[int], hi: Sequence[int]) -> list[Tuple]:
        return [t for t in self.elements() if self.leq(lo, t) and self.leq(t, hi)]


def is_order_ideal(S: Collection[Tuple], poset: TuplePoset) -> bool:
    """Downward closure via covering moves; ``S`` must lie in the poset."""
    S = set(S)
    if not all(t in poset for t in S):
        return False
    return all(c in S for t in S for c in poset.lower_covers(t))


def is_order_ideal_all_pairs(S: Collection[Tuple], poset: TuplePoset) -> bool:
    """Reference definition: every poset element below a member is a member."""
    S = set(S)
    if not all(t in poset for t in S):
        return False
    return all(x in S for x in poset.elements() if any(poset.leq(x, y) for y in S))


def maximal_elements(S: Collection[Tuple], poset: TuplePoset | None = None) -> list[Tuple]:
    if not S:
        raise ValueError("maximal elements of an empty set are undefined")
    S = sorted(set(S))
    leq = TuplePoset.leq
    return [a for a in S if not any(b != a and leq(a, b) for b in S)]


def propagate_order_ideal(I_w: Collection[Tuple], w: int) -> set[Tuple]:
    """Image of an order ideal in ``P_w`` under all morphisms ``w -> w + 1``.

    The result is checked to be an order ideal of ``P_{w+1}`` and to equal
    the union of the intervals ``[(1, ..., d), m + (1, ..., 1)]`` over the
    maximal elements ``m`` of ``I_w``.
    """
    I_w = set(I_w)
    if not I_w:
        raise ValueError("order ideals are nonempty")
    d = len(next(iter(I_w)))
    src, dst = TuplePoset.P(d, w), TuplePoset.P(d, w + 1)
    if not is_order_ideal(I_w, src):
        raise ValueError("input is not an order ideal of P_w")
    image = {
        apply_to_tuple(eps, a)
        for eps in enumerate_morphisms(w, w + 1)
        for a in I_w
    }
    if not is_order_ideal(image, dst):
        raise RuntimeError("propagated set is not an order ideal")
    bottom = tuple(range(1, d + 1))
    union: set[Tuple] = set()
    for m in maximal_elements(I_w):
        union.update(dst.interval(bottom, tuple(a + 1 for a in m)))
    if union != image:
        raise RuntimeError("propagated set differs from the union of intervals")
    return image


# ---------------------------------------------------------------------------
# monomials <-> tuples


def squarefree_tuple(m: Monomial) -> Tuple:
    if m.rows != 1 or not m.is_squarefree:
        raise ValueError(f"{m} is not a squarefree one-row monomial")
    return m.cols()


def weak_tuple(m: Monomial) -> Tuple:
    if m.rows != 1:
        raise ValueError(f"{m} is not a one-row monomial")
    return m.cols()


def ferrers_tuple(m: Monomial) -> Tuple:
    """``x_{1,i_1} ... x_{d,i_d} -> (i_1, ..., i_d)``."""
    if not m.is_squarefree or [i for i, _, _ in m.exps] != list(range(1, m.rows + 1)):
        raise ValueError(f"{m} is not of the form x_(1,i1)...x_(d,id)")
    return tuple(j for _, j, _ in m.exps)


def _equal_degree(gens: Sequence[Monomial]) -> int:
    degs = {g.degree for g in gens}
    if len(degs) > 1:
        raise ValueError(f"generators have mixed degrees {sorted(degs)}")
    return degs.pop() if degs else 0


def is_squarefree_strongly_stable(gens: Sequence[Monomial], n: int) -> bool:
    if not gens:
        return False
    d = _equal_degree(gens)
    return is_order_ideal({squarefree_tuple(g) for g in gens}, TuplePoset.P(d, n))


def is_strongly_stable(gens: Sequence[Monomial], n: int) -> bool:
    if not gens:
        return False
    d = _equal_degree(gens)
    return is_order_ideal({weak_tuple(g) for g in gens}, TuplePoset.Q(d, n))


def is_ferrers(gens: Sequence[Monomial], n: int, bounds: Sequence[int] | None = None) -> bool:
    if not gens:
        return False
    d = _equal_degree(gens)
    if bounds is None:
        bounds = (n,) * d
    return is_order_ideal({ferrers_tuple(g) for g in gens}, TuplePoset.R(bounds))


# ---------------------------------------------------------------------------


def minimalize(monos: Iterable[Monomial]) -> list[Monomial]:
    """Deduplicate and drop monomials divisible by another one; sorted."""
    uniq = sorted(set(monos))
    return [m for m in uniq if not any(o != m and o.divides(m) for o in uniq)]


class MonomialOIIdeal:
    """An OI-ideal generated in width ``gen_width`` by monomials of one degree."""

    def __init__(self, signature: AlgebraSignature, gen_width: int, generators: Sequence[Monomial]):
        check_width(gen_width)
        for g in generators:
            if g.width != gen_width:
                raise ValueError(f"generator {g} has width {g.width}, expected {gen_width}")
            if g.rows != signature.rows:
                raise ValueError(f"generator {g} does not match a {signature.rows}-row algebra")
        _equal_degree(generators)
        # equal degrees mean only duplicates can be redundant
        minimal = minimalize(generators)
        self.signature = signature
        self.gen_width = gen_width
        self.generators: tuple[Monomial, ...] = tuple(minimal)
        self._cache: dict[int, tuple[Monomial, ...]] = {}

    @property
    def degree(self) -> int:
        return self.generators[0].degree if self.generators else 0

    def __repr__(self) -> str:
        gens = ", ".join(str(g) for g in self.generators)
        return f"MonomialOIIdeal(({gens}) @ width {self.gen_width})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MonomialOIIdeal)
            and self.signature == other.signature
            and self.gen_width == other.gen_width
            and self.generators == other.generators
        )

    def expand(self, w: int) -> list[Monomial]:
        return expand(self, w)

    def to_json(self) -> dict:
        return {
            "schema": "oi-resolve/1",
            "signature": self.signature.to_json(),
            "gen_width": self.gen_width,
            "generators": [g.to_json() for g in self.generators],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "MonomialOIIdeal":
        sig = AlgebraSignature.from_json(obj.get("signature", {}))
        w0 = int(obj["gen_width"])
        gens = [Monomial.from_json(g, sig.rows, w0) for g in obj["generators"]]
        return cls(sig, w0, gens)


def expand(I: MonomialOIIdeal, w: int) -> list[Monomial]:
    """Minimal generators of ``I(w)``, sorted; empty below the generating width."""
    check_width(w)
    if w < I.gen_width:
        return []
    if w not in I._cache:
        images = (
            act(eps, g)
            for eps in enumerate_morphisms(I.gen_width, w)
            for g in I.generators
        )
        I._cache[w] = tuple(minimalize(images))
    return list(I._cache[w])


def ideal_class(gens: Sequence[Monomial], w: int) -> dict[str, bool]:
    """Which of the three classes a generating set belongs to (where defined)."""
    out = {}
    for name, pred in (
        ("squarefree_strongly_stable", is_squarefree_strongly_stable),
        ("strongly_stable", is_strongly_stable),
        ("ferrers", is_ferrers),
    ):
        try:
            out[name] = pred(gens, w)
        except ValueError:
            out[name] = False
    return out
