"""The grid chain complex C(G) and its GF(2) homology.

Rectangles are found in the universal cover (the plane with the deck group
generated by ``(p*n, 0)`` and ``(q*n, n)``).  A rectangle from ``x`` has its
bottom-left corner at the fundamental lift ``(a_i, i)`` of the row-``i``
component of ``x`` and its top-right corner at some lift of another
component inside the window ``(a_i, a_i + pn] x (i, i + pn]``.  Marking
centres and generator points are compared in doubled coordinates.
"""

from __future__ import annotations

import os
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterator

from .grading import Generator, Grading, GradingEngine, base_generator, iter_generators
from .grid import GridDiagram, check, reverse_orientation, trace_components

DEFAULT_CAP = 10**7


class CapExceeded(RuntimeError):
    """The complex has more generators than the configured cap allows."""


def generator_cap(cap: int | None = None) -> int:
    if cap is not None:
        return cap
    env = os.environ.get("LENSGRID_CAP")
    return int(env) if env else DEFAULT_CAP


def generator_count(G: GridDiagram) -> int:
    return factorial(G.n) * G.p**G.n


def generators(G: GridDiagram, cap: int | None = None) -> Iterator[Generator]:
    """All generators of ``C(G)`` in lexicographic (permutation, sheets) order."""
    limit = generator_cap(cap)
    total = generator_count(G)
    if total > limit:
        raise CapExceeded(f"{total} generators exceed the cap of {limit}")
    return iter_generators(G)


# --- rectangles ---------------------------------------------------------------

@lru_cache(maxsize=256)
def embedding_table(p: int, q: int, n: int) -> tuple[tuple[bool, ...], ...]:
    """``table[w][h]``: can a ``w x h`` rectangle embed in the torus?

    A rectangle embeds iff no nonzero deck translate of it overlaps it,
    including along its sides.
    """
    width = p * n
    deck = []
    for k in range(-p, p + 1):
        for t in range(-2 * p - 2, 2 * p + 3):
            da, db = q * n * k + width * t, n * k
            if (da, db) != (0, 0) and abs(da) <= width and abs(db) <= width:
                deck.append((abs(da), abs(db)))
    table = [[False] * (width + 1) for _ in range(width + 1)]
    for w in range(1, width + 1):
        for h in range(1, width + 1):
            table[w][h] = all(
                (da >= w or db >= h) and not (da == w and db < h) and not (db == h and da < w)
                for da, db in deck
            )
    return tuple(tuple(row) for row in table)


@dataclass(frozen=True)
class Rectangle:
    """A parallelogram from ``source`` to ``target`` in the universal cover.

    Corners are in lattice (not doubled) coordinates; ``rows`` are the rows
    of the bottom and top edges.
    """

    source: Generator
    target: Generator
    rows: tuple[int, int]
    bottom_left: tuple[int, int]
    top_right: tuple[int, int]
    n_O: int
    n_X: int
    inner_points: int

    @property
    def admissible(self) -> bool:
        """No component of the source lies strictly inside."""
        return self.inner_points == 0

    @property
    def empty(self) -> bool:
        return self.admissible and self.n_O == 0 and self.n_X == 0

    @property
    def width(self) -> int:
        return self.top_right[0] - self.bottom_left[0]

    @property
    def height(self) -> int:
        return self.top_right[1] - self.bottom_left[1]


def _window(points2: list[tuple[int, int]], A1: int, B1: int, p: int, q: int, n: int) -> list[tuple[int, int]]:
    """Lifts of doubled fundamental-domain points inside ``(A1, A1+2pn] x (B1, B1+2pn]``."""
    w2 = 2 * p * n
    out = []
    for A, B in points2:
        for k in range(-1, p + 2):
            Bk = B + 2 * n * k
            if B1 < Bk <= B1 + w2:
                Ak = A + 2 * q * n * k
                out.append((A1 + 1 + (Ak - A1 - 1) % w2, Bk))
    return out


class ComplexBuilder:
    """Precomputed diagram data for fast rectangle searches."""

    def __init__(self, G: GridDiagram):
        self.G = G
        p, q, n = G.p, G.q, G.n
        self.emb = embedding_table(p, q, n)
        self._O2 = [(2 * a + 1, 2 * b + 1) for a, b in G.O]
        self._X2 = [(2 * a + 1, 2 * b + 1) for a, b in G.X]
        self._marks: dict[tuple[int, int], list[tuple[int, int]]] = {}

    def _marking_window(self, a1: int, b1: int) -> list[tuple[int, int]]:
        key = (a1, b1)
        win = self._marks.get(key)
        if win is None:
            G = self.G
            win = _window(self._O2 + self._X2, 2 * a1, 2 * b1, G.p, G.q, G.n)
            self._marks[key] = win
        return win

    def _target(self, a: tuple[int, ...], i: int, top_right: tuple[int, int]) -> tuple[int, ...]:
        G = self.G
        n, width = G.n, G.width
        a2, b2 = top_right
        j = b2 % n
        k = (b2 - j) // n
        y = list(a)
        y[i] = a2 % width
        y[j] = (a[i] - G.q * n * k) % width
        return tuple(y)

    def boundary_tuples(self, a: tuple[int, ...]) -> list[tuple[int, ...]]:
        """Targets of empty embedded rectangles from ``a``, with repetition."""
        G = self.G
        p, q, n = G.p, G.q, G.n
        emb = self.emb
        pts2 = [(2 * x, 2 * r) for r, x in enumerate(a)]
        out = []
        for i in range(n):
            a1 = a[i]
            A1, B1 = 2 * a1, 2 * i
            lifts = _window(pts2, A1, B1, p, q, n)
            events = sorted(
                [(A, B, True) for A, B in lifts] + [(A, B, False) for A, B in self._marking_window(a1, i)]
            )
            # sweep left to right; an obstacle blocks a candidate corner when it
            # lies strictly left of it and strictly below it
            floor = B1 + 2
            below = big = B1 + 4 * p * n
            group_min = big
            cur = None
            for A, B, is_point in events:
                if A != cur:
                    if group_min < below:
                        below = group_min
                        if below < floor:
                            break
                    group_min = big
                    cur = A
                if is_point and below >= B and (B // 2) % n != i:
                    w, h = (A - A1) // 2, (B - B1) // 2
                    if emb[w][h]:
                        out.append(self._target(a, i, (A // 2, B // 2)))
                if B < group_min:
                    group_min = B
        return out

    def rectangles(self, x: Generator) -> list[Rectangle]:
        """Every embedded rectangle from ``x``, with its interior counts."""
        G = self.G
        p, q, n = G.p, G.q, G.n
        a = x.a
        pts2 = [(2 * v, 2 * r) for r, v in enumerate(a)]
        O2 = self._O2
        X2 = self._X2
        rects = []
        for i in range(n):
            A1, B1 = 2 * a[i], 2 * i
            lifts = _window(pts2, A1, B1, p, q, n)
            olifts = _window(O2, A1, B1, p, q, n)
            xlifts = _window(X2, A1, B1, p, q, n)
            for A, B in sorted(lifts):
                if (B // 2) % n == i:
                    continue
                w, h = (A - A1) // 2, (B - B1) // 2
                if not self.emb[w][h]:
                    continue

                def inside(pts: list[tuple[int, int]]) -> int:
                    return sum(1 for u, v in pts if A1 < u < A and B1 < v < B)

                rects.append(
                    Rectangle(
                        source=x,
                        target=Generator(self._target(a, i, (A // 2, B // 2))),
                        rows=(i, (B // 2) % n),
                        bottom_left=(a[i], i),
                        top_right=(A // 2, B // 2),
                        n_O=inside(olifts),
                        n_X=inside(xlifts),
                        inner_points=inside(lifts),
                    )
                )
        return rects


def rectangles_from(G: GridDiagram, x: Generator) -> list[Rectangle]:
    return ComplexBuilder(G).rectangles(x)


def _mod2(targets: list[tuple[int, ...]]) -> frozenset[Generator]:
    odd: set[tuple[int, ...]] = set()
    for t in targets:
        odd ^= {t}
    return frozenset(Generator(t) for t in odd)


def boundary(G: GridDiagram, x: Generator, builder: ComplexBuilder | None = None) -> frozenset[Generator]:
    """``∂x`` as the set of generators with odd coefficient."""
    builder = builder or ComplexBuilder(G)
    return _mod2(builder.boundary_tuples(x.a))


# --- complex and homology -----------------------------------------------------

@dataclass
class ChainComplex:
    G: GridDiagram
    gens: list[Generator]
    gradings: list[Grading]
    d: list[list[int]]  # indices of boundary terms, mod 2 reduced

    @classmethod
    def build(cls, G: GridDiagram, cap: int | None = None, normalization: str = "standard") -> ChainComplex:
        G = check(G)
        gens = list(generators(G, cap))
        index = {g.a: k for k, g in enumerate(gens)}
        builder = ComplexBuilder(G)
        d = []
        for g in gens:
            odd: set[int] = set()
            for t in builder.boundary_tuples(g.a):
                odd ^= {index[t]}
            d.append(sorted(odd))
        return cls(G, gens, GradingEngine(G, normalization=normalization).grade(gens), d)


@dataclass(frozen=True)
class HomologyRow:
    spin: int
    maslov: Fraction
    alexander: tuple[Fraction, ...]
    dim: int

    @property
    def slot(self) -> tuple[int, Fraction, tuple[Fraction, ...]]:
        return (self.spin, self.maslov, self.alexander)


@dataclass
class HomologyTable:
    p: int
    q: int
    n: int
    k: tuple[int, ...]
    rows: list[HomologyRow] = field(default_factory=list)

    @property
    def components(self) -> int:
        return len(self.k)

    @property
    def total(self) -> int:
        return sum(r.dim for r in self.rows)

    def as_dict(self) -> dict[tuple[int, Fraction, tuple[Fraction, ...]], int]:
        return {r.slot: r.dim for r in self.rows}

    def spin_totals(self) -> dict[int, int]:
        out: dict[int, int] = defaultdict(int)
        for r in self.rows:
            out[r.spin] += r.dim
        return dict(out)


def sort_rows(rows: list[HomologyRow]) -> list[HomologyRow]:
    return sorted(rows, key=lambda r: (r.spin, r.alexander, -r.maslov))


def gf2_rank(rows: list[int]) -> int:
    """Rank over GF(2) of a matrix given as int bitmasks; lowest set bit pivots."""
    pivots: dict[int, int] = {}
    rank = 0
    for v in rows:
        while v:
            low = v & -v
            piv = pivots.get(low)
            if piv is None:
                pivots[low] = v
                rank += 1
                break
            v ^= piv
    return rank


class DegreeLawError(AssertionError):
    pass


def homology_of_complex(C: ChainComplex) -> HomologyTable:
    G = C.G
    blocks: dict[tuple, dict[Fraction, list[int]]] = defaultdict(lambda: defaultdict(list))
    for k, g in enumerate(C.gradings):
        blocks[g.block][g.maslov].append(k)
    rows = []
    for block, levels in blocks.items():
        pos = {}
        for m, members in levels.items():
            for r, k in enumerate(members):
                pos[k] = r
        ranks: dict[Fraction, int] = {}
        for m, members in levels.items():
            target = m - 1
            vecs = []
            for k in members:
                v = 0
                for t in C.d[k]:
                    gt = C.gradings[t]
                    if gt.block != block or gt.maslov != target:
                        raise DegreeLawError(
                            f"boundary of {C.gens[k]} hits {C.gens[t]} with grading {gt}, expected "
                            f"spin/Alexander {block} and Maslov {target}"
                        )
                    v |= 1 << pos[t]
                vecs.append(v)
            ranks[m] = gf2_rank(vecs)
        for m, members in levels.items():
            dim = len(members) - ranks[m] - ranks.get(m + 1, 0)
            if dim:
                rows.append(HomologyRow(block[0], m, block[1], dim))
    return HomologyTable(G.p, G.q, G.n, trace_components(G).k, sort_rows(rows))


def homology(G: GridDiagram, cap: int | None = None, normalization: str = "standard") -> HomologyTable:
    return homology_of_complex(ChainComplex.build(G, cap, normalization))


# --- consistency checks -------------------------------------------------------

@dataclass
class D2Report:
    ok: bool
    generators: int
    failures: list[tuple[Generator, dict[Generator, list[Generator]]]] = field(default_factory=list)

    def describe(self) -> str:
        if self.ok:
            return f"d^2 = 0 on all {self.generators} generators"
        lines = []
        for x, paths in self.failures:
            for z, mids in paths.items():
                lines.append(f"{x} -> {z} via {len(mids)} paths: " + ", ".join(map(str, mids)))
        return "\n".join(lines)


def verify_d_squared(G: GridDiagram, cap: int | None = None, complex_: ChainComplex | None = None) -> D2Report:
    C = complex_ or ChainComplex.build(G, cap)
    failures = []
    for k, x in enumerate(C.gens):
        via: dict[int, list[int]] = defaultdict(list)
        for t in C.d[k]:
            for u in C.d[t]:
                via[u].append(t)
        bad = {C.gens[u]: [C.gens[t] for t in mids] for u, mids in via.items() if len(mids) % 2}
        if bad:
            failures.append((x, bad))
    return D2Report(not failures, len(C.gens), failures)


def degree_law_violations(C: ChainComplex) -> list[str]:
    """Boundary terms that fail to preserve spin/Alexander or drop Maslov by one."""
    bad = []
    for k, ts in enumerate(C.d):
        gx = C.gradings[k]
        for t in ts:
            gy = C.gradings[t]
            if gy.spin != gx.spin or gy.alexander != gx.alexander or gy.maslov != gx.maslov - 1:
                bad.append(f"{C.gens[k]} {gx} -> {C.gens[t]} {gy}")
    return bad


@dataclass
class OrientationReport:
    k: int
    ok: bool
    forward: HomologyTable
    reverse: HomologyTable
    expected: dict
    missing: list = field(default_factory=list)


def orientation_shift(G: GridDiagram) -> int:
    """``k = sum of sheets of x_O - sum of sheets of x_X (mod p)``."""
    return (sum(base_generator(G, "O").m) - sum(base_generator(G, "X").m)) % G.p


def compare_orientation(G: GridDiagram, cap: int | None = None) -> OrientationReport:
    """Check that reversing a knot moves each homology slot ``(s, m, a)`` to
    ``(s + k, m - 2a - (n-1), -a - (n-1))``."""
    if len(trace_components(G)) != 1:
        raise ValueError("orientation comparison needs a knot diagram")
    k = orientation_shift(G)
    fwd = homology(G, cap)
    rev = homology(reverse_orientation(G), cap)
    shift = G.n - 1
    expected: dict = {}
    for r in fwd.rows:
        (a,) = r.alexander
        slot = ((r.spin + k) % G.p, r.maslov - 2 * a - shift, (-a - shift,))
        expected[slot] = expected.get(slot, 0) + r.dim
    actual = rev.as_dict()
    missing = sorted(set(expected.items()) ^ set(actual.items()))
    return OrientationReport(k, not missing, fwd, rev, expected, missing)
