"""Ranks of integer matrices over a prime field."""
from __future__ import annotations

import numpy as np

from .poly_oi import is_prime

MAX_PRIME = 2**31 - 1


def rank_mod_p(matrix, p: int) -> int:
    """Rank over ``F_p`` by Gaussian elimination on an ``int64`` array.

    Entries are reduced into ``[0, p)`` first; with ``p < 2^31`` every
    product stays inside ``int64``.
    """
    if p > MAX_PRIME:
        raise ValueError(f"prime {p} is too large for int64 elimination")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    a = np.array(matrix, dtype=np.int64)
    if a.size == 0:
        return 0
    if a.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    a %= p
    rows, cols = a.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        nz = np.nonzero(a[rank:, c])[0]
        if nz.size == 0:
            continue
        piv = rank + nz[0]
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, c]), -1, p)
        a[rank] = (a[rank] * inv) % p
        below = np.nonzero(a[rank + 1:, c])[0] + rank + 1
        if below.size:
            a[below] = (a[below] - np.outer(a[below, c], a[rank])) % p
        rank += 1
    return rank


def sparse_rank_mod_p(entries, n_rows: int, n_cols: int, p: int) -> int:
    """Rank over ``F_p`` of a sparse matrix given as ``(row, col, value)`` triples.

    The bipartite graph of nonzero entries is split into connected
    components; the rank is the sum of the ranks of the diagonal blocks,
    each eliminated densely.
    """
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    acc: dict[tuple[int, int], int] = {}
    for r, c, v in entries:
        acc[(r, c)] = (acc.get((r, c), 0) + v) % p
    acc = {k: v for k, v in acc.items() if v}
    if not acc:
        return 0
    rs = np.fromiter((k[0] for k in acc), dtype=np.int64, count=len(acc))
    cs = np.fromiter((k[1] for k in acc), dtype=np.int64, count=len(acc))
    n = n_rows + n_cols
    graph = coo_matrix((np.ones(len(acc), dtype=np.int8), (rs, cs + n_rows)), shape=(n, n))
    _, label = connected_components(graph, directed=False)
    blocks: dict[int, list[tuple[int, int, int]]] = {}
    for (r, c), v in acc.items():
        blocks.setdefault(int(label[r]), []).append((r, c, v))
    rank = 0
    for triples in blocks.values():
        if len(triples) == 1:
            rank += 1
            continue
        rows = {r: i for i, r in enumerate(sorted({t[0] for t in triples}))}
        cols = {c: i for i, c in enumerate(sorted({t[1] for t in triples}))}
        a = np.zeros((len(rows), len(cols)), dtype=np.int64)
        for r, c, v in triples:
            a[rows[r], cols[c]] = v
        rank += rank_mod_p(a, p)
    return rank
