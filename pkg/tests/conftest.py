import itertools
import random
import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from oi_resolve.oi_ideal import TuplePoset
from oi_resolve.poly_oi import AlgebraSignature, Monomial

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ONE_ROW = AlgebraSignature(rows=1)


def down_closure(seeds, poset):
    """Smallest order ideal of ``poset`` containing ``seeds``."""
    out, stack = set(), list(seeds)
    while stack:
        t = stack.pop()
        if t in out:
            continue
        out.add(t)
        stack.extend(poset.lower_covers(t))
    return out


def random_order_ideal(rng: random.Random, poset: TuplePoset, max_seeds: int = 3):
    elems = poset.elements()
    seeds = rng.sample(elems, rng.randint(1, min(max_seeds, len(elems))))
    return down_closure(seeds, poset)


def all_order_ideals(poset: TuplePoset, max_size: int):
    """Every nonempty order ideal with at most ``max_size`` elements."""
    elems = poset.elements()
    seen = set()
    for k in range(1, len(elems) + 1):
        for antichain in itertools.combinations(elems, k):
            if any(poset.leq(a, b) for a in antichain for b in antichain if a != b):
                continue
            ideal = frozenset(down_closure(antichain, poset))
            if len(ideal) <= max_size and ideal not in seen:
                seen.add(ideal)
                yield set(ideal)


def squarefree(w, tuples):
    return [Monomial.from_cols(w, t) for t in sorted(tuples)]


def ferrers(w, tuples):
    return [Monomial.from_row_cols(w, t) for t in sorted(tuples)]


@st.composite
def order_ideals_p(draw, max_d=3, max_w=6):
    """``(d, w, S)`` with ``S`` a random order ideal of ``P(d, w)``."""
    d = draw(st.integers(1, max_d))
    w = draw(st.integers(d, max_w))
    poset = TuplePoset.P(d, w)
    elems = poset.elements()
    seeds = draw(st.lists(st.sampled_from(elems), min_size=1, max_size=3))
    return d, w, down_closure(seeds, poset)


@pytest.fixture
def rng():
    return random.Random(20261015)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.TITLES):
        if n in mod.RESULTS:
            status = "PASS" if mod.RESULTS[n] else "FAIL"
            terminalreporter.write_line(f"criterion {n}: {status}  {mod.TITLES[n]}")
