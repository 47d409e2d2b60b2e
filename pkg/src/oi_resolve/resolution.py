"""Graded free complexes at a single width: the cellular resolution of a
complex-of-boxes and degreewise verification over a prime field."""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .box_complex import BoxComplex, tuple_of
from .linalg import rank_mod_p, sparse_rank_mod_p
from .poly_oi import (
    AlgebraSignature,
    Monomial,
    Poly,
    count_monomials,
    hilbert_function_from_numerator,
    hilbert_numerator,
    is_prime,
    monomials_of_degree,
    scalar_mod_p,
    standard_monomial_counts,
    MAX_INCLUSION_EXCLUSION_GENS,
)

Matrix = dict[tuple[int, int], Poly]

# above this many strands the multigraded backend gives way to the dense one
MAX_STRANDS = 1 << 16


@dataclass
class Report:
    """Outcome of a verification: ``ok`` plus a message and structured data."""

    ok: bool
    message: str = ""
    data: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "message": self.message, **self.data}


@dataclass
class GradedFreeComplex:
    """``B_top -> ... -> B_1 -> B_0`` over ``A(width)``.

    ``degrees[i]`` lists the internal degrees of the basis of ``B_i``.
    ``differentials[i]`` (for ``i >= 1``) is the sparse matrix of
    ``B_i -> B_{i-1}``; its key ``(r, c)`` addresses row ``r`` of level
    ``i - 1`` and column ``c`` of level ``i``.  ``labels`` optionally give a
    multidegree per basis element, and ``augmentation`` the generators of the
    ideal whose quotient ``B_0`` should resolve.
    """

    width: int
    signature: AlgebraSignature
    degrees: list[list[int]]
    differentials: dict[int, Matrix]
    labels: list[list[Monomial]] | None = None
    augmentation: list[Monomial] | None = None
    keys: list[list[Any]] | None = field(default=None, compare=False)

    @property
    def rows(self) -> int:
        return self.signature.rows

    @property
    def top(self) -> int:
        return len(self.degrees) - 1

    def ranks(self) -> list[int]:
        return [len(d) for d in self.degrees]

    def diff(self, i: int) -> Matrix:
        return self.differentials.get(i, {})

    def max_degree(self) -> int:
        return max((d for lvl in self.degrees for d in lvl), default=0)

    def truncate(self, top: int) -> "GradedFreeComplex":
        """Drop every level above ``top``."""
        return GradedFreeComplex(
            self.width,
            self.signature,
            [list(d) for d in self.degrees[: top + 1]],
            {i: dict(m) for i, m in self.differentials.items() if i <= top},
            None if self.labels is None else [list(l) for l in self.labels[: top + 1]],
            self.augmentation,
            None if self.keys is None else [list(k) for k in self.keys[: top + 1]],
        )

    def copy(self) -> "GradedFreeComplex":
        return self.truncate(self.top)

    def trimmed(self) -> "GradedFreeComplex":
        """Drop empty levels at the top (level 0 is always kept)."""
        top = self.top
        while top > 0 and not self.degrees[top]:
            top -= 1
        return self.truncate(top)

    def check_homogeneous(self) -> Report:
        for i, m in sorted(self.differentials.items()):
            for (r, c), a in sorted(m.items()):
                want = self.degrees[i][c] - self.degrees[i - 1][r]
                if not a.is_homogeneous_of(want):
                    return Report(False, f"d{i}[{r},{c}] = {a} is not of degree {want}",
                                  {"level": i, "row": r, "col": c})
        return Report(True, "all entries homogeneous")

    def to_json(self) -> dict:
        return {
            "schema": "oi-resolve/1",
            "width": self.width,
            "signature": self.signature.to_json(),
            "degrees": self.degrees,
            "differentials": {
                str(i): [[r, c, a.to_json()] for (r, c), a in sorted(m.items())]
                for i, m in sorted(self.differentials.items())
            },
            "labels": None if self.labels is None else [[m.to_json() for m in l] for l in self.labels],
            "augmentation": None if self.augmentation is None else [m.to_json() for m in self.augmentation],
            "basis": None if self.keys is None else [[_key_str(k) for k in l] for l in self.keys],
        }

    @classmethod
    def from_json(cls, obj) -> "GradedFreeComplex":
        sig = AlgebraSignature.from_json(obj["signature"])
        w = int(obj["width"])
        mono = lambda m: Monomial.from_json(m, sig.rows, w)
        diffs = {
            int(i): {(int(r), int(c)): Poly.from_json(a, w, sig.rows) for r, c, a in entries}
            for i, entries in obj["differentials"].items()
        }
        labels = obj.get("labels")
        aug = obj.get("augmentation")
        return cls(
            w,
            sig,
            [list(map(int, d)) for d in obj["degrees"]],
            diffs,
            None if labels is None else [[mono(m) for m in l] for l in labels],
            None if aug is None else [mono(m) for m in aug],
        )


def _key_str(k) -> str:
    if k is None:
        return "A"
    if isinstance(k, tuple) and len(k) == 2 and hasattr(k[1], "values"):
        g, pi = k
        return f"g{g}@{''.join(map(str, pi.values)) if all(v < 10 for v in pi.values) else pi.values}"
    return str(k)


# ---------------------------------------------------------------------------
# construction


def cellular_resolution(C: BoxComplex, gens: Sequence[Monomial]) -> GradedFreeComplex:
    """Free complex supported on ``C``: one generator per face, with
    ``d(e_P) = sum sign(P, Q) * (m_P / m_Q) * e_Q``."""
    verts = {tuple_of(g, C.mode) for g in gens}
    if verts != set(C.generator_vertices):
        raise ValueError("generators do not match the vertices of the complex")
    w, rows = C.width, (1 if C.mode == "squarefree" else C.d)
    sig = AlgebraSignature(rows=rows)
    one = Monomial.one(w, rows)
    degrees = [[0]]
    labels = [[one]]
    keys: list[list[Any]] = [[None]]
    diffs: dict[int, Matrix] = {}
    for k in range(C.dim + 1):
        faces = C.faces(k)
        lab = [C.vertex_monomial(f) for f in faces]
        labels.append(lab)
        degrees.append([m.degree for m in lab])
        keys.append(list(faces))
        mat: Matrix = {}
        for c, f in enumerate(faces):
            if k == 0:
                mat[(0, c)] = Poly.monomial(lab[c])
            else:
                for sign, m, q in C.boundary_terms(f):
                    mat[(C.index(q), c)] = Poly.monomial(m, sign)
        diffs[k + 1] = mat
    aug = [C.vertex_monomial(f) for f in C.faces(0)]
    return GradedFreeComplex(w, sig, degrees, diffs, labels, aug, keys)


def algebra_complex(width: int, signature: AlgebraSignature) -> GradedFreeComplex:
    """``A(w)`` alone in level 0, resolving ``A(w) / 0``."""
    one = Monomial.one(width, signature.rows)
    return GradedFreeComplex(width, signature, [[0]], {}, [[one]], [], [[None]])


# ---------------------------------------------------------------------------
# verification


def _by_column(m: Matrix) -> dict[int, list[tuple[int, Poly]]]:
    out: dict[int, list[tuple[int, Poly]]] = {}
    for (r, c), a in m.items():
        out.setdefault(c, []).append((r, a))
    return out


def compose_matrices(left: Matrix, right: Matrix, width: int, rows: int) -> Matrix:
    """Sparse product ``left * right``."""
    lcols = _by_column(left)
    out: dict[tuple[int, int], Poly] = {}
    for (k, c), b in right.items():
        for r, a in lcols.get(k, ()):
            prev = out.get((r, c))
            term = a * b
            out[(r, c)] = term if prev is None else prev + term
    return {k: v for k, v in out.items() if v}


def verify_d_squared(cplx: GradedFreeComplex) -> Report:
    for i in range(2, cplx.top + 1):
        prod = compose_matrices(cplx.diff(i - 1), cplx.diff(i), cplx.width, cplx.rows)
        if prod:
            (r, c), v = min(prod.items())
            return Report(False, f"d{i - 1}*d{i} has entry {v} at ({r}, {c})",
                          {"level": i, "row": r, "col": c, "value": str(v)})
    return Report(True, "consecutive differentials compose to zero")


def verify_minimal_width(cplx: GradedFreeComplex) -> bool:
    """No differential entry has a nonzero constant term."""
    return all(
        a.constant_term == 0 for m in cplx.differentials.values() for a in m.values()
    )


def infer_labels(cplx: GradedFreeComplex) -> list[list[Monomial]] | None:
    """Multidegree labels making every entry a scalar times ``label_col / label_row``.

    Returns ``None`` when no consistent labelling exists (multi-term
    entries, zero columns, or level 0 not concentrated in degree 0).
    """
    if cplx.labels is not None:
        return cplx.labels
    if any(d != 0 for d in cplx.degrees[0]):
        return None
    one = Monomial.one(cplx.width, cplx.rows)
    labels = [[one] * len(cplx.degrees[0])]
    for i in range(1, cplx.top + 1):
        cols = _by_column(cplx.diff(i))
        lab = []
        for c in range(len(cplx.degrees[i])):
            found = None
            for r, a in cols.get(c, ()):
                if len(a.terms) != 1:
                    return None
                m, _ = a.single_term()
                cand = labels[i - 1][r] * m
                if found is None:
                    found = cand
                elif cand != found:
                    return None
            if found is None or found.degree != cplx.degrees[i][c]:
                return None
            lab.append(found)
        labels.append(lab)
    return labels


def _check_labels(cplx: GradedFreeComplex, labels) -> bool:
    for i in range(1, cplx.top + 1):
        for (r, c), a in cplx.diff(i).items():
            if len(a.terms) != 1:
                return False
            m, _ = a.single_term()
            if labels[i - 1][r] * m != labels[i][c]:
                return False
    return True


def _scalar_matrix(entries, row_idx, col_idx, p: int) -> np.ndarray:
    a = np.zeros((len(row_idx), len(col_idx)), dtype=np.int64)
    for (r, c), v in entries:
        if r in row_idx and c in col_idx:
            a[row_idx[r], col_idx[c]] = (a[row_idx[r], col_idx[c]] + v) % p
    return a


def _ranks_multigraded(cplx: GradedFreeComplex, labels, D: int, p: int):
    """``rank d_i`` in each degree ``t <= D`` via fine-graded strands."""
    nv = cplx.rows * cplx.width
    variables = [(i, j) for i in range(1, cplx.rows + 1) for j in range(1, cplx.width + 1)]
    M = {v: 0 for v in variables}
    for lvl in labels:
        for m in lvl:
            for i, j, e in m.exps:
                M[(i, j)] = max(M[(i, j)], e)
    active = [v for v in variables if M[v] > 0]
    n_strands = 1
    for v in active:
        n_strands *= M[v] + 1
    if n_strands > MAX_STRANDS:
        return None
    exps = [{(i, j): e for i, j, e in m.exps} for lvl in labels for m in lvl]
    offsets = list(itertools.accumulate([0] + [len(l) for l in labels]))
    scal = {
        i: [((r, c), scalar_mod_p(a.single_term()[1], p)) for (r, c), a in cplx.diff(i).items()]
        for i in range(1, cplx.top + 1)
    }
    ranks = {i: [0] * (D + 1) for i in range(1, cplx.top + 1)}
    for beta in itertools.product(*(range(M[v] + 1) for v in active)):
        b = dict(zip(active, beta))
        size = sum(beta)
        if size > D:
            continue
        free = nv - len(active) + sum(1 for v in active if b[v] == M[v])
        counts = [count_monomials(free, t - size) if t >= size else 0 for t in range(D + 1)]
        divides = [
            [k for k in range(len(labels[i])) if all(b.get(v, 0) >= e for v, e in exps[offsets[i] + k].items())]
            for i in range(len(labels))
        ]
        for i in range(1, cplx.top + 1):
            rows_, cols_ = divides[i - 1], divides[i]
            if not rows_ or not cols_:
                continue
            a = _scalar_matrix(scal[i], {r: n for n, r in enumerate(rows_)}, {c: n for n, c in enumerate(cols_)}, p)
            rk = rank_mod_p(a, p)
            if rk:
                for t in range(D + 1):
                    ranks[i][t] += counts[t] * rk
    return ranks


def _ranks_dense(cplx: GradedFreeComplex, D: int, p: int):
    """``rank d_i`` in each degree by expanding into monomial bases.

    Each degree block is split into the connected components of its
    nonzero pattern before elimination.
    """
    w, rows = cplx.width, cplx.rows
    ranks = {i: [0] * (D + 1) for i in range(1, cplx.top + 1)}
    for t in range(D + 1):
        bases = []
        for lvl in cplx.degrees:
            basis = {}
            for g, dg in enumerate(lvl):
                if dg <= t:
                    for u in monomials_of_degree(w, rows, t - dg):
                        basis[(g, u)] = len(basis)
            bases.append(basis)
        for i in range(1, cplx.top + 1):
            cols = _by_column(cplx.diff(i))
            entries = []
            for (g, u), ci in bases[i].items():
                for r, poly in cols.get(g, ()):
                    for m, coef in poly.terms.items():
                        entries.append((bases[i - 1][(r, u * m)], ci, scalar_mod_p(coef, p)))
            ranks[i][t] = sparse_rank_mod_p(entries, len(bases[i - 1]), len(bases[i]), p)
    return ranks


def graded_dims(cplx: GradedFreeComplex, D: int) -> list[list[int]]:
    """``dim_k B_i(t)`` for ``t <= D``."""
    nv = cplx.rows * cplx.width
    return [
        [sum(count_monomials(nv, t - d) for d in lvl if d <= t) for t in range(D + 1)]
        for lvl in cplx.degrees
    ]


def degreewise_ranks(cplx: GradedFreeComplex, D: int, p: int, backend: str = "auto"):
    """Ranks of every differential in every degree ``<= D`` over ``F_p``."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if backend not in ("auto", "multigraded", "dense"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend != "dense":
        labels = infer_labels(cplx)
        if labels is not None and _check_labels(cplx, labels):
            ranks = _ranks_multigraded(cplx, labels, D, p)
            if ranks is not None:
                return ranks
        if backend == "multigraded":
            raise ValueError("complex has no usable multigrading")
    return _ranks_dense(cplx, D, p)


def homology_table(cplx: GradedFreeComplex, D: int, p: int = 2, backend: str = "auto") -> list[list[int]]:
    """``dim H_i`` of the complex in each internal degree ``t <= D``."""
    dims = graded_dims(cplx, D)
    ranks = degreewise_ranks(cplx, D, p, backend)
    zero = [0] * (D + 1)
    return [
        [dims[i][t] - ranks.get(i, zero)[t] - ranks.get(i + 1, zero)[t] for t in range(D + 1)]
        for i in range(cplx.top + 1)
    ]


def expected_quotient_hilbert(gens: Sequence[Monomial], w: int, rows: int, D: int) -> list[int]:
    if len(gens) <= MAX_INCLUSION_EXCLUSION_GENS:
        num = hilbert_numerator(gens, w, D, rows)
        return hilbert_function_from_numerator(num, rows * w, D)
    return standard_monomial_counts(gens, w, rows, D)


def verify_exact_up_to(cplx: GradedFreeComplex, D: int, p: int = 2, backend: str = "auto") -> Report:
    """Certify exactness at levels ``>= 1`` in internal degrees ``<= D``.

    When an augmentation ideal is recorded and ``B_0`` is ``A(w)``, the
    cokernel of ``d_1`` is also compared with the Hilbert function of the
    quotient.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if D < cplx.max_degree() + 1:
        raise ValueError(f"degree bound {D} is below top degree + 1 = {cplx.max_degree() + 1}")
    H = homology_table(cplx, D, p, backend)
    failures = [
        {"level": i, "degree": t, "homology": H[i][t]}
        for i in range(1, cplx.top + 1)
        for t in range(D + 1)
        if H[i][t]
    ]
    data: dict = {"prime": p, "degree_bound": D, "homology": H}
    if cplx.augmentation is not None and cplx.degrees[0] == [0]:
        expected = expected_quotient_hilbert(cplx.augmentation, cplx.width, cplx.rows, D)
        data["cokernel"] = H[0]
        data["expected_cokernel"] = expected
        if H[0] != expected:
            failures.append({"level": 0, "cokernel": H[0], "expected": expected})
    data["failures"] = failures
    if failures:
        f = failures[0]
        return Report(False, f"nonzero homology at level {f['level']}", data)
    return Report(True, f"exact through degree {D} over F_{p}", data)


def betti_table(cplx: GradedFreeComplex) -> dict[tuple[int, int], int]:
    c = Counter((i, d) for i, lvl in enumerate(cplx.degrees) for d in lvl)
    return dict(sorted(c.items()))


def alternating_numerator(cplx: GradedFreeComplex, D: int) -> list[int]:
    """``sum_i (-1)^i sum_g t^deg(g)``, truncated at degree ``D``."""
    out = [0] * (D + 1)
    for i, lvl in enumerate(cplx.degrees):
        for d in lvl:
            if d <= D:
                out[d] += (-1) ** i
    return out


def matrix_dump(cplx: GradedFreeComplex) -> str:
    """One ``row col sign monomial`` line per term, indices from 1.

    Each differential starts with a ``# d<i> <rows>x<cols>`` header.  The
    sign field is ``+``/``-`` for unit coefficients and the signed
    coefficient otherwise.
    """
    lines = []
    for i in range(1, cplx.top + 1):
        lines.append(f"# d{i} {len(cplx.degrees[i - 1])}x{len(cplx.degrees[i])}")
        for (r, c), a in sorted(cplx.diff(i).items(), key=lambda kv: (kv[0][1], kv[0][0])):
            for m, coef in sorted(a.terms.items()):
                s = "+" if coef == 1 else "-" if coef == -1 else f"{coef:+}" if isinstance(coef, int) else str(coef)
                lines.append(f"{r + 1} {c + 1} {s} {m}")
    return "\n".join(lines) + ("\n" if lines else "")


def dense_matrix(m: Matrix, n_rows: int, n_cols: int) -> list[list[Poly | int]]:
    """Dense view used for small matrices in reports and tests."""
    out: list[list[Poly | int]] = [[0] * n_cols for _ in range(n_rows)]
    for (r, c), a in m.items():
        out[r][c] = a
    return out


def signed_permutation_equivalent(G: GradedFreeComplex, H: GradedFreeComplex,
                                  perms: Sequence[Sequence[int]]):
    """Decide whether ``H`` is ``G`` after relabelling bases by ``perms`` and
    flipping signs of basis vectors.

    ``perms[i][k]`` is the index in ``H`` of basis vector ``k`` of ``G`` at
    level ``i``.  Signs are solved as a parity problem over all entries.
    Returns ``(ok, signs)`` with ``signs[i][k]`` the sign of that vector.
    """
    if G.ranks() != H.ranks() or G.top != H.top:
        return False, None
    # nodes are (level, index in G); edges carry the sign relating them
    adj: dict[tuple[int, int], list[tuple[tuple[int, int], int]]] = {}
    for i in range(1, G.top + 1):
        g, h = G.diff(i), H.diff(i)
        if len(g) != len(h):
            return False, None
        for (r, c), a in g.items():
            b = h.get((perms[i - 1][r], perms[i][c]))
            if b is None:
                return False, None
            if b == a:
                s = 1
            elif b == -a:
                s = -1
            else:
                return False, None
            u, v = (i - 1, r), (i, c)
            adj.setdefault(u, []).append((v, s))
            adj.setdefault(v, []).append((u, s))
    signs = [[0] * n for n in G.ranks()]
    for i, n in enumerate(G.ranks()):
        for k in range(n):
            if signs[i][k]:
                continue
            signs[i][k] = 1
            stack = [(i, k)]
            while stack:
                u = stack.pop()
                for v, s in adj.get(u, ()):
                    want = signs[u[0]][u[1]] * s
                    if signs[v[0]][v[1]] == 0:
                        signs[v[0]][v[1]] = want
                        stack.append(v)
                    elif signs[v[0]][v[1]] != want:
                        return False, None
    return True, signs
