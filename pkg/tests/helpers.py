"""Shared test utilities: random diagrams, fixtures and table comparisons."""

from __future__ import annotations

import json
import random
from fractions import Fraction
from itertools import permutations
from math import gcd

from hypothesis import strategies as st

from lensgrid.cli import data_dir
from lensgrid.grading import Generator
from lensgrid.grid import GridDiagram, diagram_from_dict, trace_components

# PASS/FAIL lines recorded by the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def coprime_qs(p: int) -> list[int]:
    return [0] if p == 1 else [q for q in range(1, p) if gcd(p, q) == 1]


def random_diagram(rng: random.Random, pmax: int = 5, nmax: int = 3, pmin: int = 1, nmin: int = 1) -> GridDiagram:
    p = rng.randint(pmin, pmax)
    q = rng.choice(coprime_qs(p))
    n = rng.randint(nmin, nmax)

    def family():
        cols = list(range(n))
        rng.shuffle(cols)
        return tuple((cols[b] + n * rng.randrange(p), b) for b in range(n))

    return GridDiagram(p, q, n, family(), family())


def random_knot(rng: random.Random, pmax: int = 5, nmax: int = 2) -> GridDiagram:
    while True:
        G = random_diagram(rng, pmax, nmax)
        if len(trace_components(G)) == 1:
            return G


@st.composite
def diagrams(draw, pmax: int = 5, nmax: int = 3):
    p = draw(st.integers(1, pmax))
    q = draw(st.sampled_from(coprime_qs(p)))
    n = draw(st.integers(1, nmax))

    def family():
        cols = draw(st.permutations(range(n)))
        sheets = draw(st.lists(st.integers(0, p - 1), min_size=n, max_size=n))
        return tuple((cols[b] + n * sheets[b], b) for b in range(n))

    return GridDiagram(p, q, n, family(), family())


def fixture(name: str) -> dict:
    return json.loads((data_dir() / f"{name}.json").read_text(encoding="utf-8"))


def fixture_diagram(name: str) -> GridDiagram:
    return diagram_from_dict(fixture(name))


def homfly_data(name: str) -> dict:
    return json.loads((data_dir() / "homfly" / f"{name}.json").read_text(encoding="utf-8"))


def slot_key(row: dict) -> tuple:
    return (row["spin"], Fraction(row["maslov"]), tuple(Fraction(a) for a in row["alexander"]))


def reference_table(name: str) -> dict:
    return {slot_key(r): r["dim"] for r in fixture(name)["reference"]["homology"]}


def same_up_to_component_order(d1: dict, d2: dict, l: int) -> bool:
    """Equality of homology dictionaries allowing the components to be relabelled."""
    for perm in permutations(range(l)):
        if {(s, m, tuple(a[i] for i in perm)): v for (s, m, a), v in d1.items()} == d2:
            return True
    return False


def lb_labels() -> dict[str, Generator]:
    """Label -> generator for the L_B fixture (A..H by sheet of row 0, spin suffix)."""
    out = {}
    for g in fixture("lb")["reference"]["gradings"]:
        out[g["label"]] = Generator.from_permutation(g["permutation"], g["m"])
    return out


def v_shifted(table: dict, j: int) -> dict:
    """``table`` tensored with V_j: each slot also appears shifted by (Maslov -1, A_j -1)."""
    out: dict = {}
    for (s, m, a), v in table.items():
        for key in ((s, m, a), (s, m - 1, tuple(x - (i == j) for i, x in enumerate(a)))):
            out[key] = out.get(key, 0) + v
    return out
