"""Finitely generated free OI-complexes given by coefficient data.

A map ``F_i -> F_{i-1}`` of free OI-modules is stored as a list of
:class:`Entry` records.  An entry ``(source s, target t, eps, a)`` says that
the image of generator ``f_s`` contains the term ``a * eps(g_t)``, where
``eps`` runs from the width of ``g_t`` to the width of ``f_s`` and ``a``
lives in ``A(width of f_s)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .oi_ideal import MonomialOIIdeal, expand
from .oi_core import (
    FreeOIModuleShape,
    OIMorphism,
    WidthMismatchError,
    check_width,
    compose,
    enumerate_morphisms,
)
from .poly_oi import AlgebraSignature, Monomial, Poly
from .resolution import GradedFreeComplex, homology_table


@dataclass(frozen=True, order=True)
class Generator:
    width: int
    degree: int = 0

    def to_json(self) -> dict:
        return {"width": self.width, "degree": self.degree}


@dataclass(frozen=True)
class Entry:
    source: int
    target: int
    epsilon: OIMorphism
    coefficient: Poly

    def sort_key(self):
        return (self.source, self.target, self.epsilon)

    def to_json(self) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "epsilon": self.epsilon.to_json(),
            "coefficient": self.coefficient.to_json(),
        }


def canonical_entries(entries: Iterable[Entry]) -> list[Entry]:
    """Merge entries sharing ``(source, target, epsilon)`` and drop zeros."""
    acc: dict[tuple, Poly] = {}
    for e in entries:
        k = e.sort_key()
        acc[k] = e.coefficient if k not in acc else acc[k] + e.coefficient
    return [Entry(s, t, eps, a) for (s, t, eps), a in sorted(acc.items(), key=lambda kv: kv[0]) if a]


class FreeOIComplex:
    """``F_top -> ... -> F_1 -> F_0`` with ``F_i`` free on ``levels[i]``.

    ``maps[i]`` describes ``F_i -> F_{i-1}`` for ``i >= 1``.  The optional
    ``augmentation`` is a monomial OI-ideal ``I`` whose quotient ``A / I``
    the complex is meant to resolve (only meaningful when ``F_0 = A``).
    """

    def __init__(
        self,
        signature: AlgebraSignature,
        levels: Sequence[Sequence[Generator]],
        maps: Mapping[int, Iterable[Entry]],
        augmentation: MonomialOIIdeal | None = None,
    ):
        self.signature = signature
        self.levels: list[list[Generator]] = [list(l) for l in levels]
        self.maps: dict[int, list[Entry]] = {
            i: canonical_entries(maps.get(i, ())) for i in range(1, len(self.levels))
        }
        extra = set(maps) - set(self.maps)
        if any(maps[i] for i in extra):
            raise ValueError(f"maps given for missing levels {sorted(extra)}")
        self.augmentation = augmentation
        self._validate()

    def _validate(self) -> None:
        for i, entries in self.maps.items():
            src, tgt = self.levels[i], self.levels[i - 1]
            for e in entries:
                if not (0 <= e.source < len(src) and 0 <= e.target < len(tgt)):
                    raise ValueError(f"entry {e} refers to a missing generator")
                f, g = src[e.source], tgt[e.target]
                if e.epsilon.source_width != g.width or e.epsilon.target_width != f.width:
                    raise WidthMismatchError(
                        f"level {i}: epsilon {e.epsilon} should run {g.width} -> {f.width}"
                    )
                if e.coefficient.width != f.width or e.coefficient.rows != self.signature.rows:
                    raise WidthMismatchError(f"level {i}: coefficient {e.coefficient} is not in A({f.width})")
                if not e.coefficient.is_homogeneous_of(f.degree - g.degree):
                    raise ValueError(
                        f"level {i}: coefficient {e.coefficient} is not of degree {f.degree - g.degree}"
                    )

    # -- basic views -----------------------------------------------------
    @property
    def top(self) -> int:
        return len(self.levels) - 1

    def shape(self, i: int) -> FreeOIModuleShape:
        return FreeOIModuleShape(tuple(g.width for g in self.levels[i]))

    def shapes(self) -> list[list[tuple[int, int]]]:
        """Sorted ``(width, degree)`` multisets per level."""
        return [sorted((g.width, g.degree) for g in lvl) for lvl in self.levels]

    def total_rank(self) -> int:
        return sum(len(l) for l in self.levels)

    def max_generator_width(self) -> int:
        return max((g.width for lvl in self.levels for g in lvl), default=0)

    def default_cap(self) -> int:
        return self.max_generator_width() + 2

    def is_minimal(self) -> bool:
        return all(is_minimal_map(m) for m in self.maps.values())

    def is_widthwise_minimal(self) -> bool:
        return all(is_widthwise_minimal_map(m) for m in self.maps.values())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FreeOIComplex)
            and self.signature == other.signature
            and self.levels == other.levels
            and self.maps == other.maps
            and self.augmentation == other.augmentation
        )

    def __repr__(self) -> str:
        return f"FreeOIComplex(shapes={self.shapes()})"

    def to_json(self) -> dict:
        return {
            "schema": "oi-resolve/1",
            "signature": self.signature.to_json(),
            "levels": [[g.to_json() for g in lvl] for lvl in self.levels],
            "maps": {str(i): [e.to_json() for e in m] for i, m in sorted(self.maps.items())},
            "augmentation": None if self.augmentation is None else self.augmentation.to_json(),
        }

    @classmethod
    def from_json(cls, obj) -> "FreeOIComplex":
        sig = AlgebraSignature.from_json(obj.get("signature", {}))
        levels = [[Generator(int(g["width"]), int(g.get("degree", 0))) for g in lvl] for lvl in obj["levels"]]
        maps = {}
        for i, entries in obj.get("maps", {}).items():
            i = int(i)
            out = []
            for e in entries:
                eps = OIMorphism.from_json(e["epsilon"])
                w = levels[i][int(e["source"])].width
                out.append(Entry(int(e["source"]), int(e["target"]), eps, Poly.from_json(e["coefficient"], w, sig.rows)))
            maps[i] = out
        aug = obj.get("augmentation")
        return cls(sig, levels, maps, None if aug is None else MonomialOIIdeal.from_json(aug))


# ---------------------------------------------------------------------------
# minimality


def is_minimal_map(entries: Iterable[Entry]) -> bool:
    """No coefficient at an identity morphism is a unit."""
    return all(e.coefficient.constant_term == 0 for e in entries if e.epsilon.is_identity)


def is_widthwise_minimal_map(entries: Iterable[Entry]) -> bool:
    """No coefficient at all is a unit."""
    return all(e.coefficient.constant_term == 0 for e in entries)


# ---------------------------------------------------------------------------
# evaluation


def evaluate_at_width(cplx: FreeOIComplex, w: int) -> GradedFreeComplex:
    """The graded free complex ``F_bullet(w)`` over ``A(w)``.

    The basis of ``F_i(w)`` is ``pi(f)`` for generators ``f`` and
    ``pi: width(f) -> w``, ordered by generator then by ``pi``.  The column
    of ``pi(f)`` has ``A(pi)(a)`` in the row of ``(pi o eps)(g)``.
    """
    check_width(w)
    bases = [
        [(g, pi) for g, gen in enumerate(lvl) for pi in enumerate_morphisms(gen.width, w)]
        for lvl in cplx.levels
    ]
    index = [{k: n for n, k in enumerate(b)} for b in bases]
    degrees = [[cplx.levels[i][g].degree for g, _ in b] for i, b in enumerate(bases)]
    diffs = {}
    for i in range(1, cplx.top + 1):
        by_source: dict[int, list[Entry]] = {}
        for e in cplx.maps[i]:
            by_source.setdefault(e.source, []).append(e)
        mat: dict[tuple[int, int], Poly] = {}
        for col, (g, pi) in enumerate(bases[i]):
            for e in by_source.get(g, ()):
                row = index[i - 1][(e.target, compose(pi, e.epsilon))]
                a = e.coefficient.act(pi)
                mat[(row, col)] = mat[(row, col)] + a if (row, col) in mat else a
        diffs[i] = {k: v for k, v in mat.items() if v}
    aug = None
    if cplx.augmentation is not None and [g.width for g in cplx.levels[0]] == [0]:
        aug = expand(cplx.augmentation, w)
    return GradedFreeComplex(w, cplx.signature, degrees, diffs, None, aug, [list(b) for b in bases])


def evaluated_homology(cplx: FreeOIComplex, max_width: int, degree_bound: int, p: int) -> dict[int, list[list[int]]]:
    """Homology tables of the evaluations at widths ``0..max_width``."""
    return {
        w: homology_table(evaluate_at_width(cplx, w), degree_bound, p)
        for w in range(max_width + 1)
    }


# ---------------------------------------------------------------------------
# trivial summands


def _inverse(a) -> Fraction | int:
    inv = Fraction(1) / Fraction(a)
    return int(inv) if inv.denominator == 1 else inv


def _find_unit(cplx: FreeOIComplex, level: int) -> Entry | None:
    for e in cplx.maps.get(level, ()):
        if e.epsilon.is_identity and e.coefficient.constant_term != 0:
            return e
    return None


def split_trivial_summand(cplx: FreeOIComplex, level: int):
    """Split off one trivial complex ``f_p -> g_q`` at ``level``.

    Returns ``((level, p, q), reduced)`` or ``None`` when the map at
    ``level`` is minimal.  With ``a`` the unit coefficient, the bases change
    to ``g_q' = phi(f_p)`` and ``f_i' = f_i - a^-1 * sum a_eps * eps(f_p)``;
    in the new bases ``f_p -> g_q'`` is a direct summand and is deleted.
    """
    unit = _find_unit(cplx, level)
    if unit is None:
        return None
    p, q = unit.source, unit.target
    if len(unit.coefficient.terms) != 1:
        raise ValueError(f"unit coefficient {unit.coefficient} is not a scalar")
    a_inv = _inverse(unit.coefficient.constant_term)
    phi = cplx.maps[level]
    rest = [e for e in phi if e.source == p and e is not unit]
    to_q = {}
    for e in phi:
        if e.target == q and e.source != p:
            to_q.setdefault(e.source, []).append(e)

    # phi on the new basis f_i'
    new_phi = []
    for e in phi:
        if e.source == p or e.target == q:
            continue
        new_phi.append(e)
    for i, es in to_q.items():
        for e in es:
            for r in rest:
                new_phi.append(Entry(
                    i, r.target, compose(e.epsilon, r.epsilon),
                    e.coefficient * r.coefficient.act(e.epsilon) * (-a_inv),
                ))

    # the map out of level + 1 loses its f_p component
    new_next = []
    if level + 1 in cplx.maps:
        sources: dict[int, dict[OIMorphism, Poly]] = {}
        for h in cplx.maps[level + 1]:
            comp = sources.setdefault(h.source, {})
            if h.target == p:
                comp[h.epsilon] = comp[h.epsilon] + h.coefficient if h.epsilon in comp else h.coefficient
            else:
                new_next.append(h)
                for e in to_q.get(h.target, ()):
                    eps = compose(h.epsilon, e.epsilon)
                    c = h.coefficient * e.coefficient.act(h.epsilon) * a_inv
                    comp[eps] = comp[eps] + c if eps in comp else c
        for s, comp in sources.items():
            for eps, c in comp.items():
                if c:
                    raise RuntimeError(
                        f"level {level + 1} generator {s} keeps a component {c} on the split "
                        "generator; the input does not square to zero"
                    )

    def shift(idx: int, removed: int) -> int:
        return idx - (idx > removed)

    maps = dict(cplx.maps)
    maps[level] = [
        Entry(shift(e.source, p), shift(e.target, q), e.epsilon, e.coefficient) for e in new_phi
    ]
    if level + 1 in cplx.maps:
        maps[level + 1] = [
            Entry(e.source, shift(e.target, p), e.epsilon, e.coefficient) for e in new_next
        ]
    if level - 1 >= 1:
        maps[level - 1] = [
            Entry(shift(e.source, q), e.target, e.epsilon, e.coefficient)
            for e in cplx.maps[level - 1] if e.source != q
        ]
    levels = [list(l) for l in cplx.levels]
    del levels[level][p]
    del levels[level - 1][q]
    return (level, p, q), FreeOIComplex(cplx.signature, levels, maps, cplx.augmentation)


def minimize(cplx: FreeOIComplex) -> FreeOIComplex:
    """Split trivial summands until every map is minimal.

    The first splittable level (then the first entry in ``(source, target,
    epsilon)`` order) is reduced each round.  Empty top levels are dropped.
    """
    while True:
        for level in range(1, cplx.top + 1):
            res = split_trivial_summand(cplx, level)
            if res is not None:
                cplx = res[1]
                break
        else:
            break
    top = cplx.top
    while top > 0 and not cplx.levels[top]:
        top -= 1
    if top == cplx.top:
        return cplx
    maps = {i: m for i, m in cplx.maps.items() if i <= top}
    return FreeOIComplex(cplx.signature, cplx.levels[: top + 1], maps, cplx.augmentation)


# ---------------------------------------------------------------------------
# constructions


def add_trivial_summand(cplx: FreeOIComplex, level: int, width: int, degree: int, coefficient=1) -> FreeOIComplex:
    """Direct sum with ``F^{OI,width} --(coefficient)--> F^{OI,width}`` in
    levels ``level`` and ``level - 1``."""
    if level < 1:
        raise ValueError("a trivial complex needs a level >= 1")
    if coefficient == 0:
        raise ValueError("the trivial complex needs a unit coefficient")
    levels = [list(l) for l in cplx.levels]
    while len(levels) <= level:
        levels.append([])
    levels[level].append(Generator(width, degree))
    levels[level - 1].append(Generator(width, degree))
    maps = {i: list(m) for i, m in cplx.maps.items()}
    maps.setdefault(level, []).append(Entry(
        len(levels[level]) - 1, len(levels[level - 1]) - 1, OIMorphism.identity(width),
        Poly.constant(coefficient, width, cplx.signature.rows),
    ))
    return FreeOIComplex(cplx.signature, levels, maps, cplx.augmentation)


def change_basis(cplx: FreeOIComplex, level: int, i: int, j: int, delta: OIMorphism, c: Poly) -> FreeOIComplex:
    """Rewrite the complex in the basis ``f_i' = f_i + c * delta(f_j)`` of level ``level``."""
    gens = cplx.levels[level]
    if i == j:
        raise ValueError("basis change needs two distinct generators")
    if delta.source_width != gens[j].width or delta.target_width != gens[i].width:
        raise WidthMismatchError(f"delta must run {gens[j].width} -> {gens[i].width}")
    maps = {k: list(m) for k, m in cplx.maps.items()}
    if level >= 1:
        for e in cplx.maps[level]:
            if e.source == j:
                maps[level].append(Entry(i, e.target, compose(delta, e.epsilon), c * e.coefficient.act(delta)))
    if level + 1 in cplx.maps:
        for e in cplx.maps[level + 1]:
            if e.target == i:
                maps[level + 1].append(Entry(e.source, j, compose(e.epsilon, delta), -(e.coefficient * c.act(e.epsilon))))
    return FreeOIComplex(cplx.signature, cplx.levels, maps, cplx.augmentation)


def koszul_oi_complex(top: int, signature: AlgebraSignature | None = None) -> FreeOIComplex:
    """``F^{OI,top} -> ... -> F^{OI,1} -> A`` with
    ``e_[i] -> sum_k (-1)^(k-1) x_k * e_([i] minus k)``."""
    sig = signature or AlgebraSignature()
    if sig.rows != 1:
        raise ValueError("the Koszul OI-complex is built over the one-row algebra")
    levels = [[Generator(i, i)] for i in range(top + 1)]
    maps = {
        i: [
            Entry(0, 0, OIMorphism.skipping(k, i), Poly.monomial(Monomial.var(i, k), (-1) ** (k - 1)))
            for k in range(1, i + 1)
        ]
        for i in range(1, top + 1)
    }
    return FreeOIComplex(sig, levels, maps)


def complex_to_free_oi(G: GradedFreeComplex) -> FreeOIComplex:
    """Every basis element of ``G`` becomes a generator of width ``G.width``."""
    w = G.width
    ident = OIMorphism.identity(w)
    levels = [[Generator(w, d) for d in lvl] for lvl in G.degrees]
    maps = {
        i: [Entry(c, r, ident, a) for (r, c), a in G.diff(i).items()]
        for i in range(1, G.top + 1)
    }
    return FreeOIComplex(G.signature, levels, maps)


def notwwmin_complex() -> FreeOIComplex:
    """``F^{OI,3} -> F^{OI,2} -> F^{OI,1}`` with ``e_12 -> e_2`` and
    ``e_123 -> e_13 - e_23``."""
    sig = AlgebraSignature()
    levels = [[Generator(1, 0)], [Generator(2, 0)], [Generator(3, 0)]]
    maps = {
        1: [Entry(0, 0, OIMorphism(1, 2, (2,)), Poly.constant(1, 2))],
        2: [
            Entry(0, 0, OIMorphism(2, 3, (1, 3)), Poly.constant(1, 3)),
            Entry(0, 0, OIMorphism(2, 3, (2, 3)), Poly.constant(-1, 3)),
        ],
    }
    return FreeOIComplex(sig, levels, maps)
