"""Twisted toroidal grid diagrams for links in lens spaces L(p, q).

Cells are addressed in the slanted lattice basis: a cell ``(a, b)`` has its
lower-left corner at lattice point ``(a, b)`` with ``0 <= a < p*n`` and
``0 <= b < n``.  Beta curves are the vertical lines ``a = const`` and alpha
curves the horizontal lines ``b = const``.  The torus is the quotient of the
plane by the deck group generated by ``(p*n, 0)`` and ``(q*n, n)``, so walking
up out of row ``n - 1`` re-enters row 0 shifted left by ``q*n``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

Cell = tuple[int, int]


class DiagramError(ValueError):
    """Raised for malformed or invalid grid diagrams."""

    def __init__(self, message: str, violations: Sequence[str] = ()):
        super().__init__(message)
        self.violations = list(violations) or [message]


class DiagramSyntaxError(DiagramError):
    """The diagram text could not be parsed at all."""


@dataclass(frozen=True)
class GridDiagram:
    p: int
    q: int
    n: int
    O: tuple[Cell, ...]
    X: tuple[Cell, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "O", tuple((int(a), int(b)) for a, b in self.O))
        object.__setattr__(self, "X", tuple((int(a), int(b)) for a, b in self.X))

    @property
    def width(self) -> int:
        """Number of cells per row, ``p * n``."""
        return self.p * self.n

    def markings(self, family: str) -> tuple[Cell, ...]:
        if family == "O":
            return self.O
        if family == "X":
            return self.X
        raise ValueError(f"unknown marking family {family!r}")

    def canonical(self) -> GridDiagram:
        """Same diagram with both marking lists sorted by row."""
        return GridDiagram(
            self.p,
            self.q,
            self.n,
            tuple(sorted(self.O, key=lambda c: (c[1], c[0]))),
            tuple(sorted(self.X, key=lambda c: (c[1], c[0]))),
        )

    def up(self, cell: Cell) -> Cell:
        """The cell directly above ``cell`` on the torus."""
        a, b = cell
        if b < self.n - 1:
            return (a, b + 1)
        return ((a - self.q * self.n) % self.width, 0)

    def down(self, cell: Cell) -> Cell:
        a, b = cell
        if b > 0:
            return (a, b - 1)
        return ((a + self.q * self.n) % self.width, self.n - 1)

    def __str__(self) -> str:
        return serialize_diagram(self)


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate(G: GridDiagram) -> ValidationReport:
    """Check every structural invariant of ``G`` and list the violations."""
    report = ValidationReport()
    bad = report.violations
    p, q, n = G.p, G.q, G.n
    if p < 1:
        bad.append(f"p must be positive, got {p}")
    if n < 1:
        bad.append(f"grid number n must be positive, got {n}")
    if not 0 <= q < max(p, 1):
        bad.append(f"q out of range: need 0 <= q < p, got q={q}, p={p}")
    elif q == 0 and p != 1:
        bad.append(f"q = 0 is only allowed for p = 1, got p={p}")
    elif p >= 1 and gcd(p, q) != 1:
        bad.append(f"p and q are not coprime: gcd({p}, {q}) = {gcd(p, q)}")
    if bad:
        return report
    width = p * n
    for family in ("O", "X"):
        cells = G.markings(family)
        if len(cells) != n:
            bad.append(f"{family} has {len(cells)} markings, expected {n}")
        for a, b in cells:
            if not (0 <= a < width and 0 <= b < n):
                bad.append(f"{family} cell {(a, b)} out of range [0,{width}) x [0,{n})")
        rows = [b for _, b in cells]
        cols = [a % n for a, _ in cells]
        for r in sorted({r for r in rows if rows.count(r) > 1}):
            bad.append(f"duplicate row {r} among {family} markings")
        for c in sorted({c for c in cols if cols.count(c) > 1}):
            bad.append(f"duplicate column {c} among {family} markings")
    return report


def check(G: GridDiagram) -> GridDiagram:
    report = validate(G)
    if not report.ok:
        raise DiagramError("invalid grid diagram: " + "; ".join(report.violations), report.violations)
    return G


# --- serialization -----------------------------------------------------------

def diagram_to_dict(G: GridDiagram) -> dict:
    C = G.canonical()
    return {"p": C.p, "q": C.q, "n": C.n, "O": [list(c) for c in C.O], "X": [list(c) for c in C.X]}


def diagram_from_dict(obj: dict) -> GridDiagram:
    if not isinstance(obj, dict):
        raise DiagramSyntaxError("diagram must be a JSON object")
    missing = [k for k in ("p", "q", "n", "O", "X") if k not in obj]
    if missing:
        raise DiagramSyntaxError(f"missing field(s): {', '.join(missing)}")
    try:
        p, q, n = (int(obj[k]) for k in ("p", "q", "n"))
        O = tuple(_cell(c) for c in obj["O"])
        X = tuple(_cell(c) for c in obj["X"])
    except (TypeError, ValueError) as exc:
        raise DiagramSyntaxError(f"malformed diagram: {exc}") from exc
    return check(GridDiagram(p, q, n, O, X))


def _cell(c) -> Cell:
    if isinstance(c, (str, bytes)) or len(c) != 2:
        raise ValueError(f"cell must be an [a, b] pair, got {c!r}")
    a, b = c
    if isinstance(a, bool) or isinstance(b, bool) or int(a) != a or int(b) != b:
        raise ValueError(f"cell coordinates must be integers, got {c!r}")
    return (int(a), int(b))


def serialize_diagram(G: GridDiagram) -> str:
    """Canonical JSON text; markings sorted by row."""
    d = diagram_to_dict(G)
    o = ", ".join(f"[{a}, {b}]" for a, b in d["O"])
    x = ", ".join(f"[{a}, {b}]" for a, b in d["X"])
    return f'{{"p": {d["p"]}, "q": {d["q"]}, "n": {d["n"]}, "O": [{o}], "X": [{x}]}}'


def parse_diagram(text: str) -> GridDiagram:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DiagramSyntaxError(f"not valid JSON: {exc}") from exc
    return diagram_from_dict(obj)


# --- components and homology classes -----------------------------------------

@dataclass(frozen=True)
class Component:
    """One link component as the cyclic list of its marking indices.

    ``O`` and ``X`` hold indices into the diagram's marking lists in the
    order they are visited: ``O[i] -> X[i]`` along a column, then ``X[i] ->
    O[i+1]`` along a row.
    """

    O: tuple[int, ...]
    X: tuple[int, ...]
    homology_class: int

    @property
    def k(self) -> int:
        return len(self.O)


@dataclass(frozen=True)
class ComponentInfo:
    components: tuple[Component, ...]

    def __len__(self) -> int:
        return len(self.components)

    @property
    def k(self) -> tuple[int, ...]:
        return tuple(c.k for c in self.components)

    @property
    def classes(self) -> tuple[int, ...]:
        return tuple(c.homology_class for c in self.components)


def column_height(G: GridDiagram, cell: Cell, column_base: int) -> int:
    """Height of ``cell`` in the annulus of the column through ``(column_base, 0)``.

    Heights run ``0 .. p*n - 1`` going *down* the column: 0 is the cell
    ``(column_base, 0)``, 1 is the cell below it (the top row of the next
    sheet), and so on.  ``cell`` must lie in that column.
    """
    n, width = G.n, G.width
    a, b = cell
    if (a - column_base) % n:
        raise ValueError(f"cell {cell} is not in column {column_base % n}")
    # walking down one full sheet adds q*n to a
    shift = (a - column_base) % width // n
    sheets = (shift * pow(G.q, -1, G.p)) % G.p if G.p > 1 else 0
    return (sheets * n - b) % width


def _downward_distance(G: GridDiagram, start: Cell, end: Cell) -> int:
    """Cells travelled walking down the column from ``start`` to ``end``."""
    h0 = column_height(G, start, start[0])
    h1 = column_height(G, end, start[0])
    return (h1 - h0) % G.width


def trace_components(G: GridDiagram) -> ComponentInfo:
    """Split the markings into link components.

    Components are ordered by the smallest column index of their O markings;
    inside a component the walk starts at that O marking.
    """
    n = G.n
    x_by_col = {a % n: i for i, (a, _) in enumerate(G.X)}
    o_by_row = {b: i for i, (_, b) in enumerate(G.O)}
    seen: set[int] = set()
    comps = []
    for col in range(n):
        start = next(i for i, (a, _) in enumerate(G.O) if a % n == col)
        if start in seen:
            continue
        os_, xs = [], []
        i = start
        down_total = 0
        while True:
            seen.add(i)
            os_.append(i)
            j = x_by_col[G.O[i][0] % n]
            xs.append(j)
            down_total += _downward_distance(G, G.O[i], G.X[j])
            i = o_by_row[G.X[j][1]]
            if i == start:
                break
        assert down_total % n == 0
        cls = (down_total // n) % G.p
        comps.append(Component(tuple(os_), tuple(xs), cls))
    return ComponentInfo(tuple(comps))


def homology_class(G: GridDiagram, j: int) -> int:
    """Class in Z_p of the ``j``-th traced component."""
    info = trace_components(G)
    if not 0 <= j < len(info):
        raise IndexError(f"component index {j} out of range (diagram has {len(info)})")
    return info.components[j].homology_class


def reverse_orientation(G: GridDiagram) -> GridDiagram:
    return GridDiagram(G.p, G.q, G.n, G.X, G.O)


def lift_diagram(G: GridDiagram) -> GridDiagram:
    """Standard grid diagram of the preimage link in the p-fold cover S^3."""
    p, q, n = G.p, G.q, G.n
    width = p * n

    def spread(cells: Iterable[Cell]) -> tuple[Cell, ...]:
        out = [((a + n * q * k) % width, b + n * k) for a, b in cells for k in range(p)]
        return tuple(sorted(out, key=lambda c: (c[1], c[0])))

    return GridDiagram(1, 0, width, spread(G.O), spread(G.X))


# --- trivial links ------------------------------------------------------------

@dataclass(frozen=True)
class TrivialForm:
    """Component counts per homology class, stored ascending by class."""

    p: int
    counts: tuple[int, ...]

    @property
    def display_order(self) -> tuple[int, ...]:
        """Counts in the order ``(i_0, i_{p-1}, ..., i_1)``."""
        c = self.counts
        return (c[0],) + tuple(reversed(c[1:]))

    def render(self) -> str:
        return "U_{" + ",".join(map(str, self.display_order)) + "}"

    def render_ascending(self) -> str:
        return "U_{" + ",".join(map(str, self.counts)) + "}"


def make_trivial_link(p: int, q: int, counts: Sequence[int]) -> GridDiagram:
    """Canonical trivial-form diagram with ``counts[c]`` components of class ``c``.

    Every component is one O at ``(b, b)`` in the first box and one X on the
    diagonal of the box ``c*q mod p``; rows are filled box by box.
    """
    counts = tuple(int(c) for c in counts)
    if len(counts) != p:
        raise ValueError(f"need {p} counts, got {len(counts)}")
    if any(c < 0 for c in counts) or sum(counts) < 1:
        raise ValueError("counts must be nonnegative with positive sum")
    boxes = sorted((cls * q) % p for cls, c in enumerate(counts) for _ in range(c))
    n = len(boxes)
    O = tuple((b, b) for b in range(n))
    X = tuple((box * n + b, b) for b, box in enumerate(boxes))
    return check(GridDiagram(p, q, n, O, X))


def trivial_form_violations(G: GridDiagram) -> list[str]:
    n = G.n
    bad = []
    for fam in ("O", "X"):
        for a, b in G.markings(fam):
            if a % n != b:
                bad.append(f"{fam} marking {(a, b)} is off the principal diagonal of its box")
    for a, b in G.O:
        if a // n:
            bad.append(f"O marking {(a, b)} is not in the first box")
    xs = sorted(G.X, key=lambda c: c[1])
    for box in {a // n for a, _ in xs}:
        rows = sorted(b for a, b in xs if a // n == box)
        if rows != list(range(rows[0], rows[0] + len(rows))):
            bad.append(f"X markings in box {box} are not contiguous")
    if any(a // n == 0 for a, _ in xs) and (0, 0) not in xs:
        bad.append("first box holds X markings but none in its SW corner")
    for (a0, _), (a1, _) in zip(xs, xs[1:]):
        if a1 <= a0:
            bad.append("an X marking has a lower X marking to its right")
            break
    return bad


def recognize_trivial(G: GridDiagram) -> TrivialForm | None:
    """Per-class component counts if ``G`` is syntactically in trivial form.

    Returns ``None`` for anything else; no attempt is made to decide whether
    such a diagram represents a trivial link.
    """
    if trivial_form_violations(G):
        return None
    counts = [0] * G.p
    for cls in trace_components(G).classes:
        counts[cls] += 1
    return TrivialForm(G.p, tuple(counts))
