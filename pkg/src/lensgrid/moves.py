"""Grid moves: (de)stabilization, commutation and cyclic permutation.

Local corner offsets inside a 2x2 block, as (column, row) steps from its
lower-left cell: SW=(0,0), SE=(1,0), NW=(0,1), NE=(1,1).  A stabilization of
type ``F:C`` leaves corner ``C`` empty (unless the
stabilized marking shared its cell with its partner), puts two markings of family ``F`` on
the diagonal avoiding ``C`` and a new marking of the other family in the
corner opposite ``C``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .grid import Cell, DiagramError, GridDiagram, check, column_height

CORNERS = {"SW": (0, 0), "SE": (1, 0), "NW": (0, 1), "NE": (1, 1)}
AXES = ("col", "row")


class MoveRefused(ValueError):
    """The requested move is not an equivalence move of this diagram."""


def _other(family: str) -> str:
    if family not in ("O", "X"):
        raise ValueError(f"unknown marking family {family!r}")
    return "X" if family == "O" else "O"


def _corner(tag: str) -> tuple[int, int]:
    try:
        return CORNERS[tag.upper()]
    except (KeyError, AttributeError):
        raise ValueError(f"invalid corner tag {tag!r}; expected one of {sorted(CORNERS)}") from None


def _build(G: GridDiagram, n: int, fam: dict[str, list[Cell]]) -> GridDiagram:
    return check(GridDiagram(G.p, G.q, n, tuple(fam["O"]), tuple(fam["X"])))


def stabilize(G: GridDiagram, marking: int, family: str, corner: str) -> GridDiagram:
    """Split the row and column of ``family[marking]`` and insert a 2x2 block.

    The chosen marking keeps its index; the new markings of both families are
    appended at the end of their lists.
    """
    other = _other(family)
    ex, ey = _corner(corner)
    cells = G.markings(family)
    if not 0 <= marking < len(cells):
        raise IndexError(f"no {family} marking with index {marking}")
    n = G.n
    a0, b0 = cells[marking]
    box0, c0 = divmod(a0, n)

    def move(cell: Cell) -> Cell:
        a, b = cell
        box, c = divmod(a, n)
        return (box * (n + 1) + c + (c > c0), b + (b > b0))

    base = (box0 * (n + 1) + c0, b0)

    def at(dx: int, dy: int) -> Cell:
        return (base[0] + dx, base[1] + dy)

    new_other = (1 - ex, 1 - ey)
    # the same-family diagonal avoiding the empty corner
    kept, added = (1 - ex, ey), (ex, 1 - ey)
    fam = {f: [move(c) for c in G.markings(f)] for f in ("O", "X")}
    fam[family][marking] = at(*kept)
    fam[family].append(at(*added))
    # the old partners of the chosen marking move off the new marking's row/column
    row_partner = next(i for i, (_, b) in enumerate(G.markings(other)) if b == b0)
    col_partner = next(i for i, (a, _) in enumerate(G.markings(other)) if a % n == c0)
    ra, rb = fam[other][row_partner]
    fam[other][row_partner] = (ra, base[1] + (1 - new_other[1]))
    ca, cb = fam[other][col_partner]
    fam[other][col_partner] = (ca + 1 - new_other[0], cb)
    fam[other].append(at(*new_other))
    return _build(G, n + 1, fam)


def _match_block(G: GridDiagram, family: str, corner: str, cell: Cell) -> list[str]:
    n = G.n
    a, b = cell
    if n < 2:
        return ["grid number 1 cannot be destabilized"]
    if not (0 <= a < G.width and 0 <= b < n - 1) or a % n == n - 1:
        return [f"block at {cell} does not fit inside one box"]
    ex, ey = _corner(corner)
    other = _other(family)
    want = {
        (a + 1 - ex, b + ey): family,
        (a + ex, b + 1 - ey): family,
        (a + 1 - ex, b + 1 - ey): other,
    }
    bad = []
    for c, f in want.items():
        if c not in G.markings(f):
            bad.append(f"expected an {f} marking at {c}")
    # a coincident O/X pair fills the corner with its other-family marking
    empty = (a + ex, b + ey)
    if empty in G.markings(family):
        bad.append(f"corner {corner} of the block at {empty} holds an {family} marking")
    return bad


def destabilize(G: GridDiagram, cell: Cell, family: str, corner: str) -> GridDiagram:
    """Collapse the 2x2 block with lower-left cell ``cell`` matching ``family:corner``.

    The surviving ``family`` marking is the lower-indexed of the two in the block.
    """
    bad = _match_block(G, family, corner, cell)
    if bad:
        raise MoveRefused("no stabilization pattern at this site: " + "; ".join(bad))
    other = _other(family)
    ex, ey = _corner(corner)
    n = G.n
    a, b0 = cell
    box0, c0 = divmod(a, n)
    pair = sorted(G.markings(family).index(c) for c in [(a + 1 - ex, b0 + ey), (a + ex, b0 + 1 - ey)])
    drop_other = G.markings(other).index((a + 1 - ex, b0 + 1 - ey))

    def squash(c: Cell) -> Cell:
        x, y = c
        box, col = divmod(x, n)
        return (box * (n - 1) + col - (col > c0), y - (y > b0))

    fam = {f: [squash(c) for c in G.markings(f)] for f in ("O", "X")}
    del fam[family][pair[1]]
    del fam[other][drop_other]
    return _build(G, n - 1, fam)


# --- commutation --------------------------------------------------------------

def _pair_heights(G: GridDiagram, at: int, axis: str) -> tuple[list[int], list[int]]:
    n = G.n
    if not 0 <= at < n:
        raise ValueError(f"index {at} out of range for grid number {n}")
    nxt = (at + 1) % n
    if axis == "col":
        first = [c for c in G.O + G.X if c[0] % n == at]
        second = [c for c in G.O + G.X if c[0] % n == nxt]
        base = first[0][0]
        h1 = [column_height(G, c, base) for c in first]
        h2 = [column_height(G, ((c[0] - 1) % G.width, c[1]), base) for c in second]
        return h1, h2
    if axis == "row":
        first = [c for c in G.O + G.X if c[1] == at]
        second = [G.down(c) for c in G.O + G.X if c[1] == nxt]
        return [c[0] for c in first], [c[0] for c in second]
    raise ValueError(f"unknown axis {axis!r}; expected 'col' or 'row'")


def is_interleaving(G: GridDiagram, at: int, axis: str) -> bool:
    """Do the markings of line ``at + 1`` separate those of line ``at``?

    ``axis`` is ``"col"`` or ``"row"``; the pair ``(n-1, 0)`` is adjacent.
    Coincident heights do not count as interleaving.
    """
    (h1, h2), g = _pair_heights(G, at, axis)
    lo, hi = sorted((h1, h2))
    inside = [lo < x < hi for x in g]
    outside = [x < lo or x > hi for x in g]
    return (inside[0] and outside[1]) or (inside[1] and outside[0])


def commute(G: GridDiagram, at: int, axis: str) -> GridDiagram:
    """Exchange the adjacent columns (rows) ``at`` and ``at + 1``."""
    if G.n < 2:
        raise MoveRefused("grid number 1 has no pair of distinct lines to exchange")
    if is_interleaving(G, at, axis):
        raise MoveRefused(f"{axis} {at} and {(at + 1) % G.n} interleave; commutation refused")
    n, width = G.n, G.width
    nxt = (at + 1) % n

    def step(c: Cell) -> Cell:
        a, b = c
        if axis == "col":
            if a % n == at:
                return ((a + 1) % width, b)
            if a % n == nxt:
                return ((a - 1) % width, b)
            return c
        if b == at:
            return G.up(c)
        if b == nxt:
            return G.down(c)
        return c

    return check(GridDiagram(G.p, G.q, n, tuple(map(step, G.O)), tuple(map(step, G.X))))


def cycle(G: GridDiagram, axis: str, shift: int) -> GridDiagram:
    """Cyclically permute columns (``a -> a + shift``) or rows (up ``shift`` times)."""
    if axis == "col":
        step = lambda c: ((c[0] + shift) % G.width, c[1])  # noqa: E731
    elif axis == "row":
        def step(c: Cell) -> Cell:
            for _ in range(shift % (G.p * G.n)):
                c = G.up(c)
            return c
    else:
        raise ValueError(f"unknown axis {axis!r}; expected 'col' or 'row'")
    return check(GridDiagram(G.p, G.q, G.n, tuple(map(step, G.O)), tuple(map(step, G.X))))


@dataclass(frozen=True)
class MoveSpec:
    kind: str
    marking: int = 0
    family: str = "X"
    corner: str = "NW"
    at: int = 0
    cell: Cell = (0, 0)
    shift: int = 1

    def apply(self, G: GridDiagram) -> GridDiagram:
        if self.kind == "stabilize":
            return stabilize(G, self.marking, self.family, self.corner)
        if self.kind == "destabilize":
            return destabilize(G, self.cell, self.family, self.corner)
        if self.kind in ("commute_rows", "commute_columns"):
            return commute(G, self.at, "row" if self.kind == "commute_rows" else "col")
        if self.kind in ("cycle_rows", "cycle_columns"):
            return cycle(G, "row" if self.kind == "cycle_rows" else "col", self.shift)
        raise DiagramError(f"unknown move kind {self.kind!r}")
