import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import ONE_ROW
from oi_resolve.oi_core import OIMorphism, WidthMismatchError, enumerate_morphisms
from oi_resolve.oi_free_complex import (
    Entry,
    FreeOIComplex,
    Generator,
    add_trivial_summand,
    change_basis,
    evaluate_at_width,
    evaluated_homology,
    koszul_oi_complex,
    minimize,
    notwwmin_complex,
    split_trivial_summand,
)
from oi_resolve.poly_oi import Monomial, Poly, monomials_of_degree
from oi_resolve.resolution import homology_table, verify_d_squared


def test_koszul_evaluations_are_exact():
    K = koszul_oi_complex(4)
    assert K.is_minimal() and K.is_widthwise_minimal()
    for w in range(6):
        G = evaluate_at_width(K, w)
        assert verify_d_squared(G)
        assert G.ranks() == [1] + [len(enumerate_morphisms(i, w)) for i in range(1, 5)]
        if w <= 4:
            assert all(not any(row) for row in homology_table(G, w + 1)[1:])


def test_notwwmin_example():
    C = notwwmin_complex()
    assert C.is_minimal()
    assert not C.is_widthwise_minimal()
    assert evaluate_at_width(C, 3).ranks() == [3, 3, 1]
    for w in range(6):
        assert verify_d_squared(evaluate_at_width(C, w))


def test_width_validation():
    with pytest.raises(WidthMismatchError):
        FreeOIComplex(ONE_ROW, [[Generator(1)], [Generator(2)]],
                      {1: [Entry(0, 0, OIMorphism(2, 3, (1, 2)), Poly.constant(1, 2))]})


def test_homogeneity_validation():
    with pytest.raises(ValueError):
        FreeOIComplex(ONE_ROW, [[Generator(1)], [Generator(1, 2)]],
                      {1: [Entry(0, 0, OIMorphism.identity(1), Poly.monomial(Monomial.var(1, 1)))]})


def test_json_round_trip():
    for C in (koszul_oi_complex(3), notwwmin_complex()):
        assert FreeOIComplex.from_json(C.to_json()) == C


def test_split_removes_one_pair():
    K = add_trivial_summand(koszul_oi_complex(2), 1, 1, 1)
    (level, p, q), R = split_trivial_summand(K, 1)
    assert (level, p, q) == (1, 1, 1)
    assert R == koszul_oi_complex(2)
    assert split_trivial_summand(R, 1) is None


def test_trivial_summand_needs_unit():
    with pytest.raises(ValueError):
        add_trivial_summand(koszul_oi_complex(1), 1, 1, 0, coefficient=0)


@st.composite
def disguised_koszul(draw):
    top = draw(st.integers(1, 3))
    K = koszul_oi_complex(top)
    n = draw(st.integers(1, 3))
    for _ in range(n):
        level = draw(st.integers(1, top + 1))
        width = draw(st.integers(max(0, level - 1), top + 1))
        degree = draw(st.integers(0, 3))
        coef = draw(st.sampled_from([1, -1, 2]))
        K = add_trivial_summand(K, level, width, degree, coef)
    # mix a trivial generator into an original one by a basis change
    lvl = draw(st.integers(1, top))
    gens = K.levels[lvl]
    j = len(gens) - 1
    if j > 0 and gens[j].width <= gens[0].width and gens[j].degree <= gens[0].degree:
        delta = draw(st.sampled_from(enumerate_morphisms(gens[j].width, gens[0].width)))
        mons = list(monomials_of_degree(gens[0].width, 1, gens[0].degree - gens[j].degree))
        if mons:
            K = change_basis(K, lvl, 0, j, delta, Poly.monomial(draw(st.sampled_from(mons))))
    return top, K


@given(disguised_koszul())
def test_minimize_recovers_koszul(case):
    top, K = case
    M = minimize(K)
    assert M.is_minimal()
    assert M.shapes() == koszul_oi_complex(top).shapes()


@given(st.integers(1, 3), st.data())
def test_change_basis_keeps_d_squared(top, data):
    K = add_trivial_summand(koszul_oi_complex(top), 1, 1, 1)
    K = add_trivial_summand(K, 1, 1, 1, -1)
    delta = OIMorphism.identity(1)
    c = Poly.constant(data.draw(st.sampled_from([1, 2, -3])), 1)
    L = change_basis(K, 1, 1, 2, delta, c)
    for w in range(top + 2):
        assert verify_d_squared(evaluate_at_width(L, w))
    assert minimize(L).shapes() == koszul_oi_complex(top).shapes()


def test_minimized_evaluations_stay_exact():
    K = add_trivial_summand(koszul_oi_complex(3), 2, 2, 2)
    M = minimize(K)
    # the complex stops at level 3, so it is exact only through width 3
    for w in range(4):
        G = evaluate_at_width(M, w)
        assert homology_table(G, 5)[1:] == [[0] * 6] * (G.top)


def test_evaluated_homology_keys():
    H = evaluated_homology(koszul_oi_complex(2), 3, 3, 2)
    assert sorted(H) == [0, 1, 2, 3]
    assert H[0] == [[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]
