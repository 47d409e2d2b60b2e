"""The OI-family of cellular resolutions ``w -> B(w)`` of an OI-ideal.

Below the generating width ``w0`` the ideal vanishes and only ``B_0 = A``
remains.  From ``w0`` on, ``B(w)`` is the complex-of-boxes resolution of
``I(w)`` and a morphism ``eps`` acts by moving every box blockwise.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

from .box_complex import BoxComplex, BoxFace, build, mode_for_rows
from .oi_ideal import MonomialOIIdeal, expand
from .linalg import rank_mod_p
from .oi_core import (
    NOT_FREE,
    FreeOIModuleShape,
    OIMorphism,
    WidthMismatchError,
    check_width,
    compose,
    enumerate_morphisms,
    shape_from_rank_sequence,
)
from .poly_oi import Poly
from .resolution import GradedFreeComplex, Report, algebra_complex, cellular_resolution

DEFAULT_MAX_WIDTH = 8

UnitMatrix = dict[tuple[int, int], int]


@dataclass(frozen=True)
class LevelClassification:
    kind: str  # "FREE" or "FLAT_NOT_FREE"
    shape: FreeOIModuleShape | None
    max_width: int
    ranks: tuple[int, ...]

    @property
    def is_free(self) -> bool:
        return self.kind == "FREE"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "shape": None if self.shape is None else list(self.shape.generator_widths),
            "max_width": self.max_width,
            "ranks": list(self.ranks),
        }


class FlatOIFamily:
    """Per-width cellular resolutions of ``expand(ideal, w)``, built lazily."""

    def __init__(self, ideal: MonomialOIIdeal, max_width: int = DEFAULT_MAX_WIDTH):
        check_width(max_width)
        self.ideal = ideal
        self.max_width = max_width
        self.mode = mode_for_rows(ideal.signature.rows)
        self._complexes: dict[int, GradedFreeComplex] = {}
        self._boxes: dict[int, BoxComplex] = {}
        self._maps: dict[tuple[int, OIMorphism], UnitMatrix] = {}

    @property
    def w0(self) -> int:
        return self.ideal.gen_width

    def _check(self, w: int) -> None:
        if not 0 <= w <= self.max_width:
            raise ValueError(f"width {w} is outside the family range 0..{self.max_width}")

    def box_complex(self, w: int) -> BoxComplex | None:
        self._check(w)
        if w < self.w0:
            return None
        if w not in self._boxes:
            self._boxes[w] = build(expand(self.ideal, w), self.mode)
        return self._boxes[w]

    def complex(self, w: int) -> GradedFreeComplex:
        self._check(w)
        if w not in self._complexes:
            C = self.box_complex(w)
            if C is None:
                self._complexes[w] = algebra_complex(w, self.ideal.signature)
            else:
                self._complexes[w] = cellular_resolution(C, expand(self.ideal, w))
        return self._complexes[w]

    per_width = complex

    def levels(self, max_width: int | None = None) -> int:
        """Number of homological levels present at some width ``<= max_width``."""
        W = self.max_width if max_width is None else max_width
        return max(self.complex(w).top + 1 for w in range(W + 1))

    def basis(self, w: int, level: int) -> list[Any]:
        """Basis keys of ``B_level(w)``: ``[None]`` for ``A``, boxes above."""
        G = self.complex(w)
        if level > G.top:
            return []
        return G.keys[level]

    def rank(self, w: int, level: int) -> int:
        return len(self.basis(w, level))

    def ranks(self, level: int, max_width: int | None = None) -> list[int]:
        W = self.max_width if max_width is None else max_width
        return [self.rank(w, level) for w in range(W + 1)]


# ---------------------------------------------------------------------------
# induced maps


def induced_map(fam: FlatOIFamily, level: int, eps: OIMorphism) -> UnitMatrix:
    """``B_level(eps)`` as ``{(row in target, col in source): 1}``."""
    key = (level, eps)
    if key in fam._maps:
        return fam._maps[key]
    src = fam.basis(eps.source_width, level)
    out: UnitMatrix = {}
    if level == 0:
        if src:
            out[(0, 0)] = 1
    else:
        C = fam.box_complex(eps.target_width)
        for c, face in enumerate(src):
            image = face.act(eps)
            if C is None or image not in C:
                raise RuntimeError(f"{face} moves to {image}, which is not a face at width {eps.target_width}")
            out[(C.index(image), c)] = 1
    fam._maps[key] = out
    return out


def _unit_times(left: UnitMatrix, right: UnitMatrix) -> UnitMatrix:
    cols: dict[int, list[int]] = {}
    for (r, c) in left:
        cols.setdefault(c, []).append(r)
    out: UnitMatrix = {}
    for (k, c) in right:
        for r in cols.get(k, ()):
            out[(r, c)] = out.get((r, c), 0) + 1
    return out


def verify_naturality(fam: FlatOIFamily, max_width: int | None = None,
                      morphisms: Sequence[OIMorphism] | None = None) -> Report:
    """Check ``B_{i-1}(eps) * A(eps)(d_i(w)) = d_i(w + 1) * B_i(eps)``.

    By default every ``eps: w -> w + 1`` with ``w < max_width`` is tried.
    """
    W = fam.max_width if max_width is None else max_width
    if morphisms is None:
        morphisms = [eps for w in range(W) for eps in enumerate_morphisms(w, w + 1)]
    checked = 0
    for eps in morphisms:
        G, H = fam.complex(eps.source_width), fam.complex(eps.target_width)
        for i in range(1, H.top + 1):
            left: dict[tuple[int, int], Poly] = {}
            if i <= G.top:
                lower = induced_map(fam, i - 1, eps)
                row_of = {c: r for (r, c) in lower}
                for (r, c), a in G.diff(i).items():
                    left[(row_of[r], c)] = a.act(eps)
            upper = induced_map(fam, i, eps) if i <= G.top else {}
            col_of = {c: r for (r, c) in upper}
            right: dict[tuple[int, int], Poly] = {}
            by_col: dict[int, list[tuple[int, Poly]]] = {}
            for (r, c), a in H.diff(i).items():
                by_col.setdefault(c, []).append((r, a))
            for c, c2 in col_of.items():
                for r, a in by_col.get(c2, ()):
                    right[(r, c)] = a
            checked += 1
            if left != right:
                bad = sorted(set(left.items()) ^ set(right.items()), key=lambda kv: kv[0])[0]
                return Report(False, f"square for {eps} at level {i} fails at {bad[0]}",
                              {"epsilon": eps.to_json(), "level": i, "entry": list(bad[0])})
    return Report(True, f"{checked} naturality squares commute", {"squares": checked})


def verify_functor_laws(fam: FlatOIFamily, level: int, morphisms: Sequence[OIMorphism]) -> bool:
    """``B(id) = id`` at each width met, and ``B`` of a composite equals the
    product of the ``B``'s.  ``morphisms`` are applied first to last."""
    if not morphisms:
        raise ValueError("need at least one morphism")
    for a, b in zip(morphisms, morphisms[1:]):
        if a.target_width != b.source_width:
            raise WidthMismatchError(f"{b} cannot follow {a}")
    for eps in morphisms:
        for w in (eps.source_width, eps.target_width):
            ident = induced_map(fam, level, OIMorphism.identity(w))
            if ident != {(k, k): 1 for k in range(fam.rank(w, level))}:
                return False
    total = morphisms[0]
    prod = induced_map(fam, level, total)
    for eps in morphisms[1:]:
        total = compose(eps, total)
        prod = _unit_times(induced_map(fam, level, eps), prod)
        if induced_map(fam, level, total) != prod:
            return False
    return True


# ---------------------------------------------------------------------------
# generators and freeness


def _is_new(fam: FlatOIFamily, w: int, face: BoxFace) -> bool:
    """True when ``face`` is not the image of a face of width ``w - 1``."""
    if w == fam.w0:
        return True
    prev = fam.box_complex(w - 1)
    used = face.union()
    for k in range(1, w + 1):
        if k in used:
            continue
        pre = BoxFace(tuple(tuple(a - (a > k) for a in b) for b in face.blocks), w - 1)
        if pre in prev:
            return False
    return True


def new_generators(fam: FlatOIFamily, level: int, w: int) -> list[int]:
    """Indices of the basis elements of ``B_level(w)`` outside the span of
    the images of ``B_level(w - 1)``."""
    if level == 0:
        return [0] if w == 0 else []
    return [k for k, f in enumerate(fam.basis(w, level)) if _is_new(fam, w, f)]


def new_generators_by_span(fam: FlatOIFamily, level: int, w: int, p: int = 2) -> list[int]:
    """Same as :func:`new_generators`, by rank computations over ``F_p``.

    A basis vector is new when adding it to the images of all
    ``B_level(eps)``, ``eps: w - 1 -> w``, raises the rank.
    """
    import numpy as np

    n = fam.rank(w, level)
    cols = []
    if w >= 1:
        for eps in enumerate_morphisms(w - 1, w):
            for (r, c) in induced_map(fam, level, eps):
                v = [0] * n
                v[r] = 1
                cols.append(v)
    base = rank_mod_p(np.array(cols, dtype=np.int64).reshape(len(cols), n), p) if cols else 0
    out = []
    for k in range(n):
        e = [0] * n
        e[k] = 1
        if rank_mod_p(np.array(cols + [e], dtype=np.int64), p) > base:
            out.append(k)
    return out


def generator_widths(fam: FlatOIFamily, level: int, max_width: int | None = None) -> list[tuple[int, int]]:
    """``(width, count)`` of minimal generators of ``B_level`` up to ``max_width``."""
    W = fam.max_width if max_width is None else max_width
    out = []
    for w in range(W + 1):
        n = len(new_generators(fam, level, w))
        if n:
            out.append((w, n))
    return out


def generator_report(fam: FlatOIFamily, level: int, max_width: int | None = None) -> dict:
    """Generator widths plus whether no new generator appears at ``max_width``."""
    W = fam.max_width if max_width is None else max_width
    widths = generator_widths(fam, level, W)
    last = widths[-1][0] if widths else None
    return {
        "level": level,
        "max_width": W,
        "generator_widths": [list(x) for x in widths],
        "stabilized": last is not None and last < W,
    }


def classify_level(fam: FlatOIFamily, level: int, max_width: int | None = None) -> LevelClassification:
    """FREE with the recovered shape, or FLAT_NOT_FREE, from the ranks over
    widths ``0..max_width``.  Raises ``InsufficientDataError`` if the
    difference table has not settled."""
    W = fam.max_width if max_width is None else max_width
    ranks = fam.ranks(level, W)
    shape = shape_from_rank_sequence(ranks, W)
    if shape is NOT_FREE:
        return LevelClassification("FLAT_NOT_FREE", None, W, tuple(ranks))
    return LevelClassification("FREE", shape, W, tuple(ranks))


def lift_free_family(fam: FlatOIFamily, max_width: int | None = None, return_keys: bool = False):
    """Rewrite the family as a :class:`FreeOIComplex` when every level is
    free through ``max_width``.

    Generators are the new boxes; a boundary face ``Q`` of a generator is
    written uniquely as ``eps(Q0)`` for a generator ``Q0``.  Raises
    ``ValueError`` when some width component is not freely spanned by the
    translates of the generators.  With ``return_keys`` the generator boxes
    are returned too, one list per level.
    """
    from .oi_free_complex import Entry, FreeOIComplex, Generator

    W = fam.max_width if max_width is None else max_width
    n_levels = fam.levels(W)
    gens: list[list[tuple[int, Any]]] = []
    decomp: list[dict[tuple[int, Any], tuple[int, OIMorphism]]] = []
    for i in range(n_levels):
        g_i = [(w, fam.basis(w, i)[k]) for w in range(W + 1) for k in new_generators(fam, i, w)]
        table: dict[tuple[int, Any], tuple[int, OIMorphism]] = {}
        for w in range(W + 1):
            for idx, (gw, key) in enumerate(g_i):
                for eps in enumerate_morphisms(gw, w):
                    image = key if i == 0 else key.act(eps)
                    if (w, image) in table:
                        raise ValueError(f"level {i} is not free: {image} has two preimages")
                    table[(w, image)] = (idx, eps)
            if len([k for k in table if k[0] == w]) != fam.rank(w, i):
                raise ValueError(f"level {i} is not free at width {w}")
        gens.append(g_i)
        decomp.append(table)
    levels = []
    maps = {}
    for i, g_i in enumerate(gens):
        levels.append([Generator(w, fam.complex(w).degrees[i][fam.basis(w, i).index(key)]) for w, key in g_i])
        if i == 0:
            continue
        entries = []
        for s, (w, key) in enumerate(g_i):
            G = fam.complex(w)
            col = fam.basis(w, i).index(key)
            for (r, c), a in G.diff(i).items():
                if c != col:
                    continue
                t, eps = decomp[i - 1][(w, G.keys[i - 1][r])]
                entries.append(Entry(s, t, eps, a))
        maps[i] = entries
    out = FreeOIComplex(fam.ideal.signature, levels, maps, fam.ideal)
    if return_keys:
        return out, [[key for _, key in g_i] for g_i in gens]
    return out


def family_report(fam: FlatOIFamily, max_width: int | None = None, naturality: bool = False,
                  classify: bool = False) -> dict:
    """JSON-ready summary: ranks, generator widths, classification, checks."""
    from .oi_core import InsufficientDataError

    W = fam.max_width if max_width is None else max_width
    levels = []
    for i in range(fam.levels(W)):
        entry: dict[str, Any] = {"level": i, "ranks": fam.ranks(i, W)}
        entry.update({k: v for k, v in generator_report(fam, i, W).items() if k != "level"})
        if classify:
            try:
                entry["classification"] = classify_level(fam, i, W).to_json()
            except InsufficientDataError as exc:
                entry["classification"] = {"kind": "INSUFFICIENT_DATA", "max_width": W, "reason": str(exc)}
        levels.append(entry)
    out: dict[str, Any] = {"schema": "oi-resolve/1", "ideal": fam.ideal.to_json(), "max_width": W, "levels": levels}
    if naturality:
        out["naturality"] = verify_naturality(fam, W).to_json()
    return out
