from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import ONE_ROW, ferrers, order_ideals_p, squarefree
from oi_resolve.oi_core import (
    FreeOIModuleShape,
    InsufficientDataError,
    OIMorphism,
    WidthMismatchError,
    enumerate_morphisms,
)
from oi_resolve.oi_family import (
    FlatOIFamily,
    classify_level,
    family_report,
    generator_widths,
    induced_map,
    lift_free_family,
    new_generators,
    new_generators_by_span,
    verify_functor_laws,
    verify_naturality,
)
from oi_resolve.oi_free_complex import evaluate_at_width
from oi_resolve.oi_ideal import MonomialOIIdeal
from oi_resolve.poly_oi import AlgebraSignature, Monomial
from oi_resolve.resolution import signed_permutation_equivalent, verify_exact_up_to


def principal(d):
    return MonomialOIIdeal(ONE_ROW, d, [Monomial.from_cols(d, range(1, d + 1))])


def test_below_generating_width_only_the_algebra():
    fam = FlatOIFamily(principal(2), 4)
    assert fam.complex(1).ranks() == [1]
    assert fam.complex(2).ranks() == [1, 1]
    assert fam.ranks(1) == [0, 0, 1, 3, 6]


def test_width_outside_range():
    with pytest.raises(ValueError):
        FlatOIFamily(principal(1), 3).complex(4)


def test_linear_ideal_level_one_not_free():
    I = MonomialOIIdeal(ONE_ROW, 2, [Monomial.parse("x1", 2)])
    fam = FlatOIFamily(I, 7)
    assert classify_level(fam, 1).kind == "FLAT_NOT_FREE"
    assert generator_widths(fam, 1) == [(2, 1)]
    assert generator_widths(fam, 2) == [(3, 1)]
    assert verify_naturality(fam, 5).ok


@pytest.mark.parametrize("d", [1, 2, 3])
def test_principal_levels_are_free(d):
    fam = FlatOIFamily(principal(d), 9)
    # generators of level i sit at width d + i - 1, which must stay below 9
    for i in range(1, 10 - d):
        cls = classify_level(fam, i)
        assert cls.is_free
        assert cls.shape == FreeOIModuleShape.from_counts({d + i - 1: comb(d + i - 2, d - 1)})


def test_insufficient_data():
    fam = FlatOIFamily(principal(2), 3)
    with pytest.raises(InsufficientDataError):
        classify_level(fam, 2)
    rep = family_report(fam, classify=True)
    assert rep["levels"][2]["classification"]["kind"] == "INSUFFICIENT_DATA"


def test_induced_map_is_face_action():
    fam = FlatOIFamily(principal(2), 4)
    eps = OIMorphism(3, 4, (1, 2, 4))
    src, tgt = fam.basis(3, 1), fam.basis(4, 1)
    for (r, c), v in induced_map(fam, 1, eps).items():
        assert v == 1 and tgt[r] == src[c].act(eps)


@given(order_ideals_p(max_w=4))
def test_naturality_holds(case):
    d, w, S = case
    fam = FlatOIFamily(MonomialOIIdeal(ONE_ROW, w, squarefree(w, S)), w + 2)
    assert verify_naturality(fam).ok


def test_naturality_detects_a_perturbed_map():
    fam = FlatOIFamily(principal(2), 4)
    eps = OIMorphism(2, 3, (1, 3))
    good = induced_map(fam, 1, eps)
    ((r, c), _), = good.items()
    fam._maps[(1, eps)] = {((r + 1) % 3, c): 1}
    assert not verify_naturality(fam, 3, [eps]).ok


@given(order_ideals_p(max_w=4), st.data())
def test_functor_laws(case, data):
    d, w, S = case
    fam = FlatOIFamily(MonomialOIIdeal(ONE_ROW, w, squarefree(w, S)), w + 3)
    widths = sorted(data.draw(st.lists(st.integers(w, w + 3), min_size=2, max_size=4)))
    chain = [data.draw(st.sampled_from(enumerate_morphisms(a, b))) for a, b in zip(widths, widths[1:])]
    for level in range(fam.levels()):
        assert verify_functor_laws(fam, level, chain)


def test_functor_laws_reject_non_composable():
    fam = FlatOIFamily(principal(1), 4)
    with pytest.raises(WidthMismatchError):
        verify_functor_laws(fam, 1, [OIMorphism(1, 2, (1,)), OIMorphism(1, 3, (2,))])


@given(order_ideals_p(max_w=4), st.sampled_from([2, 3]))
def test_generator_rule_matches_span_oracle(case, p):
    d, w, S = case
    fam = FlatOIFamily(MonomialOIIdeal(ONE_ROW, w, squarefree(w, S)), w + 2)
    for level in range(fam.levels()):
        for v in range(fam.max_width + 1):
            assert new_generators(fam, level, v) == new_generators_by_span(fam, level, v, p)


def test_generator_rule_for_ferrers():
    I = MonomialOIIdeal(AlgebraSignature(rows=2), 3, ferrers(3, [(1, 2), (1, 3)]))
    fam = FlatOIFamily(I, 5)
    for level in range(fam.levels()):
        for v in range(6):
            assert new_generators(fam, level, v) == new_generators_by_span(fam, level, v)


@pytest.mark.parametrize("d", [1, 2])
def test_lift_evaluates_back_to_the_family(d):
    fam = FlatOIFamily(principal(d), 6)
    F, keys = lift_free_family(fam, return_keys=True)
    for w in range(7):
        G, E = fam.complex(w), evaluate_at_width(F, w).trimmed()
        assert E.ranks() == G.ranks()
        perms = [[0] * n for n in G.ranks()]
        for i in range(G.top + 1):
            for n, (g, pi) in enumerate(E.keys[i]):
                face = None if i == 0 else keys[i][g].act(pi)
                perms[i][G.keys[i].index(face)] = n
        assert signed_permutation_equivalent(G, E, perms)[0]
        assert verify_exact_up_to(E, E.max_degree() + 1, 2).ok


def test_lift_refuses_non_free_family():
    I = MonomialOIIdeal(ONE_ROW, 2, [Monomial.parse("x1", 2)])
    with pytest.raises(ValueError):
        lift_free_family(FlatOIFamily(I, 5))


def test_report_is_deterministic():
    fam = FlatOIFamily(principal(2), 6)
    a = family_report(fam, naturality=True, classify=True)
    b = family_report(FlatOIFamily(principal(2), 6), naturality=True, classify=True)
    assert a == b
    assert a["naturality"]["ok"]
