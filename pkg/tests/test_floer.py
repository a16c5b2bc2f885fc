from __future__ import annotations

import random
from collections import Counter
from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from classical_oracle import knot_homology
from helpers import diagrams, fixture_diagram, random_diagram, random_knot, reference_table
from lensgrid.floer import (
    CapExceeded,
    ChainComplex,
    ComplexBuilder,
    boundary,
    compare_orientation,
    degree_law_violations,
    embedding_table,
    generator_count,
    generators,
    gf2_rank,
    homology,
    rectangles_from,
    verify_d_squared,
)
from lensgrid.grading import Generator, iter_generators
from lensgrid.grid import GridDiagram, lift_diagram, trace_components


def brute_rank(rows: list[int]) -> int:
    rows = [r for r in rows if r]
    rank = 0
    while rows:
        pivot = rows.pop()
        top = pivot.bit_length() - 1
        rows = [r ^ pivot if (r >> top) & 1 else r for r in rows]
        rows = [r for r in rows if r]
        rank += 1
    return rank


def test_gf2_rank_oracle():
    rng = random.Random(3)
    for _ in range(300):
        rows = [rng.getrandbits(rng.randint(1, 12)) for _ in range(rng.randint(0, 10))]
        assert gf2_rank(rows) == brute_rank(rows)


def test_generator_count_and_cap(monkeypatch):
    G = fixture_diagram("lb")
    assert generator_count(G) == 32
    assert len(list(generators(G))) == 32
    with pytest.raises(CapExceeded):
        generators(G, cap=31)
    monkeypatch.setenv("LENSGRID_CAP", "10")
    with pytest.raises(CapExceeded):
        homology(G)


def test_embedding_table_small_cases():
    # on the standard n x n torus any rectangle narrower and shorter than n embeds
    table = embedding_table(1, 0, 4)
    assert all(table[w][h] for w in range(1, 4) for h in range(1, 4))
    assert not any(table[4][h] for h in range(1, 5))


@settings(max_examples=60, deadline=None)
@given(diagrams(pmax=5, nmax=3))
def test_fast_boundary_equals_rectangle_enumeration(G):
    builder = ComplexBuilder(G)
    for x in iter_generators(G):
        slow: set[Generator] = set()
        for r in builder.rectangles(x):
            if r.empty:
                slow ^= {r.target}
        assert boundary(G, x, builder) == frozenset(slow)


@settings(max_examples=30, deadline=None)
@given(diagrams(pmax=4, nmax=3))
def test_rectangles_connect_generators_in_two_rows(G):
    for x in list(iter_generators(G))[:20]:
        for r in rectangles_from(G, x):
            assert r.source == x
            diff = [i for i in range(G.n) if r.source.a[i] != r.target.a[i]]
            assert len(diff) == 2
            assert r.empty == (r.admissible and r.n_O == 0 and r.n_X == 0)


@settings(max_examples=40, deadline=None)
@given(diagrams(pmax=5, nmax=3))
def test_d_squared_and_degree_laws(G):
    C = ChainComplex.build(G)
    assert verify_d_squared(G, complex_=C).ok
    assert degree_law_violations(C) == []


@pytest.mark.parametrize("name", ["g1", "g2"])
def test_knot_homology_matches_reference(name):
    assert homology(fixture_diagram(name)).as_dict() == reference_table(name)


def test_grid_number_one_has_zero_differential():
    rng = random.Random(2)
    for _ in range(20):
        G = random_diagram(rng, 7, 1)
        assert homology(G).total == G.p


def test_lb_homology_euler_characteristic():
    """Per (spin, Alexander) block the homology has the chain-level Euler characteristic."""
    G = fixture_diagram("lb")
    C = ChainComplex.build(G)
    H = homology(G)
    chi_chain: Counter = Counter()
    for g in C.gradings:
        chi_chain[g.block] += (-1) ** int(g.maslov - min(h.maslov for h in C.gradings if h.block == g.block))
    chi_hom: Counter = Counter()
    for r in H.rows:
        base = min(h.maslov for h in C.gradings if h.block == (r.spin, r.alexander))
        chi_hom[(r.spin, r.alexander)] += r.dim * (-1) ** int(r.maslov - base)
    assert +chi_chain == +chi_hom


def test_lb_spin_two_slot():
    H = homology(fixture_diagram("lb")).as_dict()
    assert H[(2, F(-3, 4), (F(-3, 8), F(-3, 8)))] == 1
    assert H[(2, F(1, 4), (F(-3, 8), F(-3, 8)))] == 1


def unknot_grid(n: int) -> GridDiagram:
    return GridDiagram(1, 0, n, tuple((i, i) for i in range(n)), tuple(((i + 1) % n, i) for i in range(n)))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_classical_unknot(n):
    H = homology(unknot_grid(n))
    assert H.total == 2 ** (n - 1)
    assert {r.spin for r in H.rows} == {0}
    assert max(r.maslov for r in H.rows) == 0


def trefoil_grid() -> GridDiagram:
    n = 5
    return GridDiagram(1, 0, n, tuple((i, i) for i in range(n)), tuple(((i + 2) % n, i) for i in range(n)))


def test_classical_trefoil_ranks():
    H = homology(trefoil_grid())
    assert H.total == 3 * 2**4
    # divide out (1 + V)^(n-1), where V shifts (Maslov, Alexander) by (-1, -1)
    by_alex = Counter()
    for r in H.rows:
        by_alex[r.alexander[0]] += r.dim
    series = [by_alex[F(a)] for a in range(1, -6, -1)]
    binom = [1, 4, 6, 4, 1]
    quotient = []
    rest = series[:]
    for i in range(len(series) - 4):
        c = rest[i]
        quotient.append(c)
        for j, b in enumerate(binom):
            rest[i + j] -= c * b
    assert not any(rest)
    assert quotient == [1, 1, 1]


def test_classical_oracle_agreement_on_random_knots():
    rng = random.Random(17)
    checked = 0
    while checked < 25:
        n = rng.randint(2, 5)
        G = random_diagram(rng, 1, n, nmin=n)
        if len(trace_components(G)) != 1:
            continue
        ours = {(r.maslov, r.alexander[0]): r.dim for r in homology(G).rows}
        assert ours == knot_homology(G.n, G.O, G.X)
        checked += 1


def test_lift_of_g1():
    assert homology(lift_diagram(fixture_diagram("g1"))).total == 16
    assert homology(lift_diagram(fixture_diagram("g2"))).total == 16


def test_compare_orientation_standard_knots():
    rep = compare_orientation(trefoil_grid())
    assert rep.ok and rep.k == 0


def test_compare_orientation_g2():
    assert compare_orientation(fixture_diagram("g2")).ok


def test_compare_orientation_random():
    rng = random.Random(23)
    for _ in range(25):
        assert compare_orientation(random_knot(rng, 5, 2)).ok


def test_compare_orientation_rejects_links():
    with pytest.raises(ValueError):
        compare_orientation(fixture_diagram("lb"))


def test_homology_deterministic():
    G = fixture_diagram("lb")
    assert homology(G).rows == homology(G).rows


def test_symmetric_normalization_only_shifts_alexander():
    G = fixture_diagram("lb")
    H, S = homology(G), homology(G, normalization="symmetric")
    shifted = {(s, m, tuple(a + F(3, 8) for a in al)): v for (s, m, al), v in H.as_dict().items()}
    assert shifted == S.as_dict()
