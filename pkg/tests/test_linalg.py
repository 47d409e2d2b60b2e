import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oi_resolve.linalg import rank_mod_p, sparse_rank_mod_p


@st.composite
def small_matrices(draw):
    r, c = draw(st.integers(0, 7)), draw(st.integers(0, 7))
    p = draw(st.sampled_from([2, 3, 5, 32003]))
    entries = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return np.array(entries, dtype=np.int64).reshape(r, c), p


def _sympy_rank(a, p):
    if a.size == 0:
        return 0
    from sympy.polys.matrices import DomainMatrix
    from sympy import GF

    dm = DomainMatrix([[GF(p)(int(x)) for x in row] for row in a.tolist()], a.shape, GF(p))
    return dm.rank()


@given(small_matrices())
def test_dense_rank_matches_reference(case):
    a, p = case
    assert rank_mod_p(a, p) == _sympy_rank(a, p)


@given(small_matrices())
def test_sparse_rank_matches_dense(case):
    a, p = case
    triples = [(r, c, int(a[r, c])) for r, c in zip(*np.nonzero(a))]
    assert sparse_rank_mod_p(triples, *a.shape, p) == rank_mod_p(a, p)


def test_sparse_rank_merges_duplicates():
    # two entries at the same position cancel mod 3
    assert sparse_rank_mod_p([(0, 0, 1), (0, 0, 2), (1, 1, 1)], 2, 2, 3) == 1


def test_rejects_composite_and_huge_primes():
    with pytest.raises(ValueError):
        rank_mod_p([[1]], 4)
    with pytest.raises(ValueError):
        rank_mod_p([[1]], 2**61 - 1)
    with pytest.raises(ValueError):
        sparse_rank_mod_p([], 1, 1, 9)
