import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import ONE_ROW, ferrers, order_ideals_p, squarefree
from oi_resolve.box_complex import build
from oi_resolve.oi_ideal import MonomialOIIdeal, expand
from oi_resolve.poly_oi import AlgebraSignature, Monomial, Poly, hilbert_numerator
from oi_resolve.resolution import (
    GradedFreeComplex,
    algebra_complex,
    alternating_numerator,
    betti_table,
    cellular_resolution,
    degreewise_ranks,
    homology_table,
    infer_labels,
    matrix_dump,
    signed_permutation_equivalent,
    verify_d_squared,
    verify_exact_up_to,
    verify_minimal_width,
)

FIVE = ["x1*x2", "x1*x3", "x1*x4", "x2*x3", "x2*x4"]


def resolve(gens, mode="squarefree"):
    return cellular_resolution(build(gens, mode), gens)


def five():
    return resolve([Monomial.parse(s, 4) for s in FIVE])


def test_five_generator_shape_and_betti():
    G = five()
    assert G.ranks() == [1, 5, 6, 2]
    assert betti_table(G) == {(0, 0): 1, (1, 2): 5, (2, 3): 6, (3, 4): 2}
    assert G.check_homogeneous()
    assert verify_minimal_width(G)


def test_five_generator_is_exact():
    rep = verify_exact_up_to(five(), 9, 2)
    assert rep.ok
    assert rep.data["cokernel"] == [1, 4, 5, 6, 7, 8, 9, 10, 11, 12]


def test_truncation_is_not_exact():
    rep = verify_exact_up_to(five().truncate(2), 9, 2)
    assert not rep.ok
    assert rep.data["failures"][0]["level"] == 2


def test_degree_bound_and_prime_validation():
    with pytest.raises(ValueError):
        verify_exact_up_to(five(), 4, 2)
    with pytest.raises(ValueError):
        verify_exact_up_to(five(), 9, 4)
    with pytest.raises(ValueError):
        degreewise_ranks(five(), 6, 2, backend="sparse")


def test_algebra_complex_resolves_zero_ideal():
    G = algebra_complex(3, ONE_ROW)
    assert verify_exact_up_to(G, 3).ok
    assert homology_table(G, 2) == [[1, 3, 6]]


def test_matrix_dump_format():
    lines = matrix_dump(five()).splitlines()
    assert lines[0] == "# d1 1x5"
    assert lines[1] == "1 1 + x1*x2"
    assert "# d3 6x2" in lines


def test_json_round_trip():
    G = five()
    H = GradedFreeComplex.from_json(G.to_json())
    assert H == G


def test_labels_inferred_when_absent():
    G = five()
    bare = GradedFreeComplex(G.width, G.signature, G.degrees, G.differentials)
    assert infer_labels(bare) == G.labels


def test_backends_agree_on_five_generators():
    G = five()
    assert degreewise_ranks(G, 7, 3, "multigraded") == degreewise_ranks(G, 7, 3, "dense")


@given(order_ideals_p(max_w=5), st.sampled_from([2, 3]))
def test_cellular_resolutions_are_exact(case, p):
    d, w, S = case
    G = resolve(squarefree(w, S))
    assert verify_d_squared(G)
    assert G.check_homogeneous()
    assert verify_exact_up_to(G, G.max_degree() + 1, p).ok


@given(order_ideals_p(max_d=2, max_w=4))
def test_dense_backend_agrees(case):
    d, w, S = case
    G = resolve(squarefree(w, S))
    D = G.max_degree() + 1
    assert homology_table(G, D, 2, "multigraded") == homology_table(G, D, 2, "dense")


@given(order_ideals_p(max_w=5))
def test_alternating_sum_is_hilbert_numerator(case):
    d, w, S = case
    gens = squarefree(w, S)
    G = resolve(gens)
    D = G.max_degree() + 1
    assert alternating_numerator(G, D) == hilbert_numerator(gens, w, D)


@given(order_ideals_p(max_w=5), st.data())
def test_sign_flip_breaks_d_squared_or_exactness(case, data):
    d, w, S = case
    G = resolve(squarefree(w, S))
    if G.top < 2:
        return
    i = data.draw(st.integers(2, G.top))
    key = data.draw(st.sampled_from(sorted(G.diff(i))))
    bad = G.copy()
    bad.differentials[i] = dict(bad.differentials[i])
    bad.differentials[i][key] = -bad.differentials[i][key]
    # a single flipped sign in a column with several boundary terms spoils d^2
    col = [k for k in G.diff(i) if k[1] == key[1]]
    if len(col) > 1 and G.diff(i - 1):
        assert not verify_d_squared(bad)


@given(order_ideals_p(max_w=4), st.data())
def test_dropping_a_top_face_breaks_exactness(case, data):
    d, w, S = case
    G = resolve(squarefree(w, S))
    if G.top < 2:
        return
    assert not verify_exact_up_to(G.truncate(G.top - 1), G.max_degree() + 1, 2).ok


@pytest.mark.parametrize("seeds", [[(1, 2)], [(1, 2), (1, 3)], [(1, 2), (1, 3), (2, 3)]])
def test_ferrers_resolutions_are_exact(seeds):
    sig = AlgebraSignature(rows=2)
    I = MonomialOIIdeal(sig, 3, ferrers(3, seeds))
    for w in (3, 4):
        gens = expand(I, w)
        G = resolve(gens, "ferrers")
        assert verify_d_squared(G)
        assert verify_exact_up_to(G, G.max_degree() + 1, 2).ok


def test_signed_permutation_equivalence():
    G = five()
    perms = [list(range(n)) for n in G.ranks()]
    H = G.copy()
    H.differentials[3] = {k: -v for k, v in H.differentials[3].items()}
    ok, signs = signed_permutation_equivalent(G, H, perms)
    assert ok
    assert signs[3] == [-1, -1] or signs[2] == [-1] * 6
    H.differentials[3][(0, 0)] = Poly.monomial(Monomial.parse("x1", 4))
    assert not signed_permutation_equivalent(G, H, perms)[0]
