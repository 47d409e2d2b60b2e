"""Complex-of-boxes: the vertex-induced subcomplex of a product of simplices.

A box ``sigma_1 x ... x sigma_d`` has vertex set ``sigma_1 x ... x sigma_d``
(all tuples picking one element per block) and dimension
``sum(|sigma_j| - 1)``.  A box belongs to the complex of a generating set
when every one of its vertices is a generator tuple.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .oi_ideal import (
    ferrers_tuple,
    is_ferrers,
    is_squarefree_strongly_stable,
    squarefree_tuple,
)
from .oi_core import OIMorphism, WidthMismatchError
from .poly_oi import Monomial, divide, lcm_all

SQUAREFREE = "squarefree"
FERRERS = "ferrers"
MODES = (SQUAREFREE, FERRERS)


@dataclass(frozen=True, order=True)
class BoxFace:
    blocks: tuple[tuple[int, ...], ...]
    width: int

    def __post_init__(self) -> None:
        blocks = tuple(tuple(b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        for b in blocks:
            if not b:
                raise ValueError("box blocks must be nonempty")
            if any(x >= y for x, y in zip(b, b[1:])):
                raise ValueError(f"block {b} is not strictly sorted")
            if b[0] < 1 or b[-1] > self.width:
                raise ValueError(f"block {b} leaves [1, {self.width}]")

    @property
    def d(self) -> int:
        return len(self.blocks)

    @property
    def dim(self) -> int:
        return sum(len(b) - 1 for b in self.blocks)

    def vertices(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*self.blocks)

    def top_vertex(self) -> tuple[int, ...]:
        return tuple(b[-1] for b in self.blocks)

    def union(self) -> frozenset[int]:
        return frozenset(itertools.chain.from_iterable(self.blocks))

    def blocks_ordered(self) -> bool:
        return all(a[-1] < b[0] for a, b in zip(self.blocks, self.blocks[1:]))

    def act(self, eps: OIMorphism) -> "BoxFace":
        if eps.source_width != self.width:
            raise WidthMismatchError(f"{eps} cannot move a face of width {self.width}")
        return BoxFace(tuple(tuple(eps(a) for a in b) for b in self.blocks), eps.target_width)

    def __str__(self) -> str:
        def blk(b):
            if all(a < 10 for a in b):
                return "".join(map(str, b))
            return "{" + ",".join(map(str, b)) + "}"
        return "x".join(blk(b) for b in self.blocks)

    def to_json(self) -> list:
        return [list(b) for b in self.blocks]


def tuple_of(m: Monomial, mode: str) -> tuple[int, ...]:
    return squarefree_tuple(m) if mode == SQUAREFREE else ferrers_tuple(m)


def monomial_of(t: Sequence[int], width: int, mode: str) -> Monomial:
    if mode == SQUAREFREE:
        return Monomial.from_cols(width, t)
    return Monomial.from_row_cols(width, t)


def boundary(face: BoxFace) -> list[tuple[int, BoxFace]]:
    """Signed codimension-one faces of a box.

    Removing the ``k``-th element (from 0) of block ``r`` carries the sign
    ``(-1)^(dim sigma_1 + ... + dim sigma_{r-1}) * (-1)^k``.
    """
    if face.dim == 0:
        raise ValueError("a vertex has no boundary")
    out = []
    shift = 0
    for r, blk in enumerate(face.blocks):
        if len(blk) >= 2:
            for k in range(len(blk)):
                sub = blk[:k] + blk[k + 1:]
                blocks = face.blocks[:r] + (sub,) + face.blocks[r + 1:]
                out.append(((-1) ** (shift + k), BoxFace(blocks, face.width)))
        shift += len(blk) - 1
    return out


class BoxComplex:
    """Boxes supported on a set of generator tuples, grouped by dimension."""

    def __init__(self, width: int, mode: str, d: int, vertex_tuples, faces_by_dim):
        self.width = width
        self.mode = mode
        self.d = d
        self.generator_vertices: frozenset[tuple[int, ...]] = frozenset(vertex_tuples)
        self.faces_by_dim: dict[int, list[BoxFace]] = faces_by_dim
        self._index = {
            f: i for faces in faces_by_dim.values() for i, f in enumerate(faces)
        }

    @property
    def dim(self) -> int:
        return max(self.faces_by_dim, default=-1)

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(self.faces_by_dim.get(k, [])) for k in range(self.dim + 1))

    def faces(self, k: int) -> list[BoxFace]:
        return self.faces_by_dim.get(k, [])

    def index(self, face: BoxFace) -> int:
        return self._index[face]

    def __contains__(self, face: BoxFace) -> bool:
        return face in self._index

    def contains_by_vertices(self, face: BoxFace) -> bool:
        return face.width == self.width and all(
            v in self.generator_vertices for v in face.vertices()
        )

    def contains_by_top_vertex(self, face: BoxFace) -> bool:
        """Shortcut membership; only valid when the vertices form an order ideal."""
        return (
            face.width == self.width
            and face.blocks_ordered()
            and face.top_vertex() in self.generator_vertices
        )

    def vertex_monomial(self, face: BoxFace) -> Monomial:
        """lcm of the monomials at the vertices of the box."""
        return lcm_all(monomial_of(v, self.width, self.mode) for v in face.vertices())

    def boundary_terms(self, face: BoxFace) -> list[tuple[int, Monomial, BoxFace]]:
        """``(sign, m_P / m_Q, Q)`` for each codimension-one face ``Q``."""
        mp = self.vertex_monomial(face)
        out = []
        for sign, q in boundary(face):
            if q not in self:
                raise RuntimeError(f"boundary face {q} of {face} is missing")
            out.append((sign, divide(mp, self.vertex_monomial(q)), q))
        return out

    def to_json(self) -> dict:
        return {
            "schema": "oi-resolve/1",
            "width": self.width,
            "mode": self.mode,
            "d": self.d,
            "f_vector": list(self.f_vector()),
            "faces": {str(k): [f.to_json() for f in fs] for k, fs in sorted(self.faces_by_dim.items())},
        }

    @classmethod
    def from_json(cls, obj) -> "BoxComplex":
        w = int(obj["width"])
        faces = {
            int(k): [BoxFace(tuple(map(tuple, f)), w) for f in fs]
            for k, fs in obj["faces"].items()
        }
        verts = {f.top_vertex() for f in faces.get(0, [])}
        return cls(w, obj["mode"], int(obj["d"]), verts, faces)


def enumerate_boxes(vertex_tuples, d: int, width: int) -> dict[int, list[BoxFace]]:
    """All boxes whose vertices all lie in ``vertex_tuples``.

    Blocks are chosen left to right; after fixing ``sigma_1..sigma_{r}``,
    the admissible elements of the next block are those extending every
    partial vertex to a prefix of some vertex tuple.
    """
    V = set(vertex_tuples)
    prefixes = [set() for _ in range(d + 1)]
    for v in V:
        for k in range(d + 1):
            prefixes[k].add(v[:k])
    values = [sorted({v[k] for v in V}) for k in range(d)]
    out: dict[int, list[BoxFace]] = {}

    def rec(r: int, partial: list[tuple[int, ...]], blocks: tuple):
        if r == d:
            face = BoxFace(blocks, width)
            out.setdefault(face.dim, []).append(face)
            return
        cands = [b for b in values[r] if all(p + (b,) in prefixes[r + 1] for p in partial)]
        for size in range(1, len(cands) + 1):
            for blk in itertools.combinations(cands, size):
                rec(r + 1, [p + (b,) for p in partial for b in blk], blocks + (blk,))

    if V:
        rec(0, [()], ())
    return {k: sorted(v) for k, v in sorted(out.items())}


def build(gens: Sequence[Monomial], mode: str = SQUAREFREE, check: bool = True) -> BoxComplex:
    """Complex-of-boxes for a squarefree strongly stable or Ferrers generating set."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if not gens:
        raise ValueError("need at least one generator")
    width = gens[0].width
    if check:
        pred = is_squarefree_strongly_stable if mode == SQUAREFREE else is_ferrers
        if not pred(gens, width):
            raise ValueError(f"generators are not a {mode} order ideal")
    V = [tuple_of(g, mode) for g in gens]
    d = len(V[0])
    return BoxComplex(width, mode, d, V, enumerate_boxes(V, d, width))


def mode_for_rows(rows: int) -> str:
    return SQUAREFREE if rows == 1 else FERRERS
